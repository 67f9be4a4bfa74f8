"""U-type and D-type gap witnesses: representation, verification, search.

A witness is a split word (x, y) plus two runs: `rho`, a minimal accepting
run on xy, and `chi`, a run whose x-prefix is a minimal-weight run on x,
such that after x the two runs are more than B apart. U-type witnesses
additionally require chi to continue over y into an accepting state; D-type
witnesses drop that requirement.

The bounded search enumerates words in shortlex order and split points in
ascending |x|. "None found up to max_len" is evidence, not a proof: the
full decision procedure is out of scope here.

Both search modes rest on the same fact, which also makes the fast mode
complete: every prefix of a minimal-weight accepting run is itself a
minimal-weight run to its intermediate state (otherwise splicing in the
better prefix would beat the minimum). The fast mode reads the candidate
states straight off the forward/backward DP; the exhaustive mode enumerates
the weighted run DAG (partial runs worse than the per-state minimum can
never complete minimally and are pruned) and derives the candidates from
the enumerated runs. Returned witnesses are built by a shared deterministic
constructor, so the two modes agree exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

from .analysis import bounded_reach_exact, order_for
from .errors import InputError
from .weights import INF
from .wfa import Run, backward_layers, forward_layers, reachable_states, single_initial, step_config

U_KIND = "u"
D_KIND = "d"
MODES = ("fast", "exhaustive")


@dataclass(frozen=True)
class GapWitness:
    kind: str
    x: tuple
    y: tuple
    rho_states: tuple
    chi_states: tuple
    gap: int

    def __post_init__(self):
        if self.kind not in (U_KIND, D_KIND):
            raise InputError(f"witness kind must be 'u' or 'd', got {self.kind!r}")
        object.__setattr__(self, "x", tuple(self.x))
        object.__setattr__(self, "y", tuple(self.y))
        object.__setattr__(self, "rho_states", tuple(self.rho_states))
        object.__setattr__(self, "chi_states", tuple(self.chi_states))

    @property
    def word(self):
        return self.x + self.y

    @property
    def split(self):
        return len(self.x)

    @property
    def p1(self):
        return self.rho_states[self.split]

    @property
    def p2(self):
        return self.rho_states[-1]

    @property
    def q1(self):
        return self.chi_states[self.split]

    @property
    def q2(self):
        return self.chi_states[-1] if len(self.chi_states) == len(self.word) + 1 else None


def _witness_runs(wfa, witness, kind):
    """Validate the stored runs structurally; raises InputError when malformed."""
    q0 = single_initial(wfa)
    word = witness.word
    if len(witness.rho_states) != len(word) + 1:
        raise InputError("rho does not span the full word")
    rho = Run.from_states(wfa, word, witness.rho_states)
    if rho.states[0] != q0:
        raise InputError("rho does not start at the initial state")
    if kind == U_KIND:
        if len(witness.chi_states) != len(word) + 1:
            raise InputError("a U-type witness needs chi to span the full word")
        chi = Run.from_states(wfa, word, witness.chi_states)
    else:
        # A stored chi may span x only, or xy (every U-type witness doubles
        # as a D-type witness); only the x-prefix is examined.
        if len(witness.chi_states) == len(word) + 1:
            chi = Run.from_states(wfa, word, witness.chi_states)
        elif len(witness.chi_states) == witness.split + 1:
            chi = Run.from_states(wfa, witness.x, witness.chi_states)
        else:
            raise InputError("chi spans neither x nor the full word")
    if chi.states[0] != q0:
        raise InputError("chi does not start at the initial state")
    return rho, chi


def _verify(wfa, bound, witness, kind):
    if bound < 0:
        raise InputError("gap bound must be a natural number")
    rho, chi = _witness_runs(wfa, witness, kind)
    k = witness.split
    if rho.states[-1] not in wfa.accepting:
        return False
    if kind == U_KIND and chi.states[-1] not in wfa.accepting:
        return False
    fwd = forward_layers(wfa, witness.word)
    min_on_x = min(fwd[k].values())
    if chi.prefix_weight(k) != min_on_x:
        return False
    value = min((fwd[len(witness.word)][q] for q in wfa.accepting), default=INF)
    if rho.wt != value:
        return False
    return rho.prefix_weight(k) - chi.prefix_weight(k) > bound


def verify_u_witness(wfa, bound, witness):
    """Check the three U-type conditions by exact DP; structural defects in the
    stored runs raise, unmet conditions return False."""
    return _verify(wfa, bound, witness, U_KIND)


def verify_d_witness(wfa, bound, witness):
    """As verify_u_witness but chi needs no accepting continuation."""
    return _verify(wfa, bound, witness, D_KIND)


# -- search ------------------------------------------------------------------


def _bool_backward(wfa, word):
    """layers[i] = states from which some run over word[i:] reaches acceptance."""
    layers = [set(wfa.accepting)]
    for a in reversed(word):
        prev = layers[-1]
        layers.append({p for q in prev for p, _ in wfa.pred(q, a)})
    layers.reverse()
    return layers


def _min_prefix_run(wfa, prefix, fwd, target):
    """Deterministic minimal run to `target` over `prefix`, backtracking the
    forward DP and breaking ties by state declaration order."""
    states = [target]
    for i in range(len(prefix) - 1, -1, -1):
        cur = states[0]
        goal = fwd[i + 1][cur]
        prev = next(
            p for p, c in wfa.pred(cur, prefix[i])
            if fwd[i][p] != INF and fwd[i][p] + c == goal
        )
        states.insert(0, prev)
    return states


def _min_suffix_run(wfa, suffix, bwd, start):
    """Deterministic minimal-weight continuation from `start` over `suffix`."""
    states = [start]
    for i in range(len(suffix)):
        cur = states[-1]
        goal = bwd[i][cur]
        nxt = next(
            q for q, c in wfa.succ(cur, suffix[i])
            if bwd[i + 1][q] != INF and c + bwd[i + 1][q] == goal
        )
        states.append(nxt)
    return states


def _bool_suffix_run(wfa, suffix, reach, start):
    """Deterministic accepting continuation from `start`, any weight."""
    states = [start]
    for i in range(len(suffix)):
        cur = states[-1]
        nxt = next(q for q, _ in wfa.succ(cur, suffix[i]) if q in reach[i + 1])
        states.append(nxt)
    return states


def _build_witness(wfa, kind, word, k, p1, q1, fwd, bwd, reach):
    x, y = word[:k], word[k:]
    rho = _min_prefix_run(wfa, x, fwd, p1)
    rho += _min_suffix_run(wfa, y, bwd[k:], p1)[1:]
    chi = _min_prefix_run(wfa, x, fwd, q1)
    if kind == U_KIND:
        chi += _bool_suffix_run(wfa, y, reach[k:], q1)[1:]
    gap = fwd[k][p1] - min(fwd[k].values())
    return GapWitness(kind=kind, x=x, y=y, rho_states=tuple(rho), chi_states=tuple(chi), gap=gap)


def _candidates_fast(wfa, bound, word, k, kind, fwd, bwd, reach, value):
    min_on_x = min(fwd[k].values())
    p1s = [
        q
        for q in wfa.states
        if fwd[k][q] != INF
        and bwd[k][q] != INF
        and fwd[k][q] + bwd[k][q] == value
        and fwd[k][q] - min_on_x > bound
    ]
    if not p1s:
        return None
    q1s = [q for q in wfa.states if fwd[k][q] == min_on_x]
    if kind == U_KIND:
        q1s = [q for q in q1s if q in reach[k]]
    if not q1s:
        return None
    return p1s[0], q1s[0]


def _enum_dag_runs(wfa, word, fwd, accept_filter):
    """Enumerate runs whose every prefix is minimal to its state (the weighted
    run DAG); `accept_filter(i, q)` prunes states that cannot complete."""
    n = len(word)
    out = []
    stack = [(q,) for q in reversed(wfa.states) if fwd[0][q] == 0 and accept_filter(0, q)]
    while stack:
        states = stack.pop()
        i = len(states) - 1
        if i == n:
            out.append(states)
            continue
        cur = states[-1]
        for q, c in wfa.succ(cur, word[i]):
            if fwd[i][cur] + c == fwd[i + 1][q] and accept_filter(i + 1, q):
                stack.append(states + (q,))
    return out


def _candidates_exhaustive(wfa, bound, word, k, kind, fwd, bwd, reach, value):
    min_runs = _enum_dag_runs(
        wfa,
        word[:k],
        fwd,
        lambda i, q: fwd[i][q] != INF,
    )
    q1s = sorted(
        {r[-1] for r in min_runs if fwd[k][r[-1]] == min(fwd[k].values())},
        key=wfa._state_index.get,
    )
    if kind == U_KIND:
        q1s = [q for q in q1s if q in reach[k]]
    if not q1s:
        return None
    acc_runs = _enum_dag_runs(
        wfa,
        word,
        fwd,
        lambda i, q: fwd[i][q] != INF and bwd[i][q] != INF and fwd[i][q] + bwd[i][q] == value,
    )
    min_on_x = min(fwd[k].values())
    p1s = sorted(
        {r[k] for r in acc_runs if fwd[k][r[k]] - min_on_x > bound},
        key=wfa._state_index.get,
    )
    if not p1s:
        return None
    return p1s[0], q1s[0]


def _find(wfa, bound, max_len, mode, kind, order):
    if mode not in MODES:
        raise InputError(f"mode must be one of {MODES}")
    if bound < 0 or max_len < 0:
        raise InputError("bound and max_len must be natural numbers")
    single_initial(wfa)
    if reachable_states(wfa) != set(wfa.states):
        raise InputError("witness search requires a trim automaton")
    order_for(wfa, order)
    pick = _candidates_fast if mode == "fast" else _candidates_exhaustive
    reach_exact = bounded_reach_exact(wfa, wfa.accepting, max_len)

    def scan(word):
        fwd = forward_layers(wfa, word)
        n = len(word)
        value = min((fwd[n][q] for q in wfa.accepting), default=INF)
        if value == INF:
            return None
        bwd = backward_layers(wfa, word)
        reach = _bool_backward(wfa, word)
        for k in range(n + 1):
            got = pick(wfa, bound, word, k, kind, fwd, bwd, reach, value)
            if got is not None:
                p1, q1 = got
                return _build_witness(wfa, kind, word, k, p1, q1, fwd, bwd, reach)
        return None

    init = {q: (0 if q in wfa.initials else INF) for q in wfa.states}
    for n in range(max_len + 1):
        # depth-first over prefixes, children in alphabet order, so words of a
        # given length appear lexicographically; subtrees that cannot reach
        # acceptance in the remaining steps are skipped
        stack = [((), init)]
        while stack:
            word, conf = stack.pop()
            d = len(word)
            if d == n:
                found = scan(word)
                if found is not None:
                    return found
                continue
            children = []
            for a in wfa.alphabet:
                nxt = step_config(wfa, conf, a)
                if any(nxt[q] != INF and q in reach_exact[n - d - 1] for q in nxt):
                    children.append((word + (a,), nxt))
            stack.extend(reversed(children))
    return None


def find_u_witness(wfa, bound, max_len, mode="exhaustive", order=None):
    """Smallest-shortlex U-type witness with |xy| <= max_len and gap > bound,
    or None. Any returned witness passes verify_u_witness at the same bound."""
    return _find(wfa, bound, max_len, mode, U_KIND, order)


def find_d_witness(wfa, bound, max_len, mode="exhaustive", order=None):
    """As find_u_witness without the accepting-continuation requirement."""
    return _find(wfa, bound, max_len, mode, D_KIND, order)
