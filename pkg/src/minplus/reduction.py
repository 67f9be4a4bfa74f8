"""Initial/final-weight elimination and the unambiguisability-to-
determinisability reduction.

`WfaIF` carries initial and final weight vectors; `normalize_if` folds them
into two fresh letters so that the value of w becomes the value of s·w·f in
a plain single-initial, single-accepting WFA.

`build_reduction` enriches a single-accepting WFA with commitments (per
state: unreachable / reachable but doomed / on an accepting run) and reads
letters paired with updates describing, per transition, the same three-way
marking. Transitions exist only when the update matches the available
transitions exactly, arrows leave exactly the committed states, and the
target commitment is the one the update dictates, which makes the
commitment component deterministic. Only updates realised by reachable
commitments are materialised: the full update alphabet (3^{|Q|^2} letters)
is never enumerated.

`make_tracks` builds the update/commitment track of a word: an arrow marks
a transition whose source is committed and whose target can still reach the
accepting state over the remaining suffix. Marking arrows out of
uncommitted states would violate outgoing consistency, so commitment of the
source is part of the arrow condition; on accepted words every run of the
input then pairs with the track to a run of the reduction.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field

from .errors import InputError, InternalInvariantError
from .gaps import D_KIND, U_KIND, GapWitness, verify_d_witness, verify_u_witness
from .weights import INF, check_weight
from .wfa import Run, Wfa, single_initial, trim_coaccessible

ACC = ">"
NOACC = "!"
BOT = "."
_LABEL_CHARS = set("|,>!.")


# -- initial/final weights ---------------------------------------------------


@dataclass(frozen=True)
class WfaIF:
    """WFA with initial and final weight vectors (sparse, absent = INF).
    A run is accepting iff init(start) + wt + fin(end) is finite."""

    states: tuple
    alphabet: tuple
    weights: dict
    init: dict
    fin: dict
    name: str = field(default="", compare=False)

    def __post_init__(self):
        core = Wfa(
            states=self.states,
            alphabet=self.alphabet,
            initials=frozenset(self.states[:1]) if self.states else frozenset(),
            accepting=frozenset(),
            weights=self.weights,
        )
        object.__setattr__(self, "states", core.states)
        object.__setattr__(self, "alphabet", core.alphabet)
        object.__setattr__(self, "weights", core.weights)
        for vec, what in ((self.init, "init"), (self.fin, "fin")):
            cleaned = {}
            for q, w in vec.items():
                if q not in set(self.states):
                    raise InputError(f"{what} weight for undeclared state {q!r}")
                w = check_weight(w, f"{what}({q})")
                if w != INF:
                    cleaned[q] = w
            object.__setattr__(self, what, cleaned)

    def as_wfa(self, initials, accepting):
        return Wfa(
            states=self.states,
            alphabet=self.alphabet,
            initials=initials,
            accepting=accepting,
            weights=self.weights,
            name=self.name,
        )


def eval_if(aif, word):
    """min over runs of init(start) + wt(run) + fin(end); INF when none."""
    from .wfa import xconf

    carrier = aif.as_wfa(
        frozenset(aif.init) or frozenset(aif.states[:1]), frozenset()
    )
    word = carrier.check_word(word)
    conf = {q: aif.init.get(q, INF) for q in aif.states}
    conf = xconf(carrier, conf, word)
    out = INF
    for q, w in conf.items():
        if w == INF:
            continue
        fw = aif.fin.get(q, INF)
        if fw == INF:
            continue
        v = w + fw
        if v < out:
            out = v
    return out


def trim_if(aif):
    """Keep states reachable from a finite-init state and co-reachable to a
    finite-fin state."""
    from .wfa import coreachable_states, reachable_states

    if not aif.init or not aif.fin:
        keep = set()
    else:
        fwd = reachable_states(aif.as_wfa(frozenset(aif.init), frozenset()))
        bwd = coreachable_states(
            aif.as_wfa(frozenset(aif.init), frozenset(aif.fin))
        )
        keep = fwd & bwd
    return WfaIF(
        states=tuple(q for q in aif.states if q in keep),
        alphabet=aif.alphabet,
        weights={k: w for k, w in aif.weights.items() if k[0] in keep and k[2] in keep},
        init={q: w for q, w in aif.init.items() if q in keep},
        fin={q: w for q, w in aif.fin.items() if q in keep},
        name=aif.name,
    )


START_LETTER = "s"
FINAL_LETTER = "f"


def normalize_if(aif):
    """Fold init/fin weights into fresh letters: the result is single-initial
    and single-accepting, and values A(w) appear exactly at the words s·w·f;
    every other word evaluates to INF."""
    if START_LETTER in aif.alphabet or FINAL_LETTER in aif.alphabet:
        raise InputError(
            "alphabet already contains the reserved letters 's'/'f'; rename first"
        )
    trimmed = trim_if(aif)
    start, final = "s0", "sf"
    taken = set(trimmed.states)
    while start in taken:
        start += "_"
    while final in taken or final == start:
        final += "_"
    weights = dict(trimmed.weights)
    for q, w in trimmed.init.items():
        weights[(start, START_LETTER, q)] = w
    for q, w in trimmed.fin.items():
        weights[(q, FINAL_LETTER, final)] = w
    return Wfa(
        states=(start,) + trimmed.states + (final,),
        alphabet=aif.alphabet + (START_LETTER, FINAL_LETTER),
        initials=frozenset({start}),
        accepting=frozenset({final}),
        weights=weights,
        name=f"normalize({aif.name or 'a'})",
    )


def ensure_single_ends(wfa):
    """Return an automaton with one initial and one accepting state computing
    the same values at s·w·f (identity when already in that shape)."""
    if len(wfa.initials) == 1 and len(wfa.accepting) == 1:
        return wfa
    aif = WfaIF(
        states=wfa.states,
        alphabet=wfa.alphabet,
        weights=wfa.weights,
        init={q: 0 for q in wfa.initials},
        fin={q: 0 for q in wfa.accepting},
        name=wfa.name,
    )
    return normalize_if(aif)


# -- the reduction construction ----------------------------------------------


def _check_label_safe(wfa):
    for tok in itertools.chain(wfa.states, wfa.alphabet):
        if _LABEL_CHARS & set(tok):
            raise InputError(
                f"identifier {tok!r} contains reserved characters (| , > ! .); "
                "rename before building the reduction"
            )


def single_accepting(wfa):
    if len(wfa.accepting) != 1:
        raise InputError("operation requires a single accepting state")
    return next(iter(wfa.accepting))


def commitment_label(wfa, q, commitment):
    entries = ",".join(
        f"{s}{m}" for s, m in zip(wfa.states, commitment) if m != BOT
    )
    return f"{q}|{entries}"


def update_label(wfa, sigma, update):
    entries = ",".join(
        f"{p}{update[i][j]}{q}"
        for i, p in enumerate(wfa.states)
        for j, q in enumerate(wfa.states)
        if update[i][j] != BOT
    )
    return f"{sigma}|{entries}"


def _commitment_of(wfa, update):
    marks = []
    for j in range(len(wfa.states)):
        col = [update[i][j] for i in range(len(wfa.states))]
        if ACC in col:
            marks.append(ACC)
        elif NOACC in col:
            marks.append(NOACC)
        else:
            marks.append(BOT)
    return tuple(marks)


def _initial_commitment(wfa, q0):
    return tuple(ACC if q == q0 else BOT for q in wfa.states)


@dataclass(frozen=True)
class ReductionResult:
    """build_reduction output plus label bookkeeping for projections."""

    wfa: Wfa
    base: Wfa
    states: dict = field(compare=False)   # label -> (state, commitment)
    letters: dict = field(compare=False)  # token -> (letter, update)

    def trimmed(self):
        t = trim_coaccessible(self.wfa)
        kept = set(t.states)
        return ReductionResult(
            wfa=t,
            base=self.base,
            states={k: v for k, v in self.states.items() if k in kept},
            letters=dict(self.letters),
        )


def _nonempty_subsets(items):
    for r in range(1, len(items) + 1):
        yield from itertools.combinations(items, r)


def build_reduction(wfa):
    """States pair base states with commitments; letters pair base letters
    with consistent updates. Reachable part only."""
    q0 = single_initial(wfa)
    qfin = single_accepting(wfa)
    _check_label_safe(wfa)
    idx = wfa._state_index
    nst = len(wfa.states)
    f0 = _initial_commitment(wfa, q0)
    start = (q0, f0)
    labels = {start: commitment_label(wfa, q0, f0)}
    names = [labels[start]]
    states_map = {labels[start]: start}
    letters_map = {}
    letter_order = {}
    weights = {}
    accepting = set()
    seen_comm = {}  # commitment -> list of (sigma, token, update, successor commitment)
    todo = deque([start])
    seen = {start}

    def successors_of_commitment(f):
        if f in seen_comm:
            return seen_comm[f]
        out = []
        committed = [q for q, m in zip(wfa.states, f) if m == ACC]
        for si, sigma in enumerate(wfa.alphabet):
            outs = {r: [t for t, _ in wfa.succ(r, sigma)] for r in committed}
            if any(not v for v in outs.values()):
                continue
            for choice in itertools.product(
                *(_nonempty_subsets(outs[r]) for r in committed)
            ):
                chosen = {r: set(ts) for r, ts in zip(committed, choice)}
                update = [[BOT] * nst for _ in range(nst)]
                for (p, a, t), _w in wfa.weights.items():
                    if a != sigma:
                        continue
                    if p in chosen and t in chosen[p]:
                        update[idx[p]][idx[t]] = ACC
                    else:
                        update[idx[p]][idx[t]] = NOACC
                update = tuple(map(tuple, update))
                g = _commitment_of(wfa, update)
                token = update_label(wfa, sigma, update)
                out.append((sigma, token, update, g))
        seen_comm[f] = out
        return out

    while todo:
        q, f = todo.popleft()
        src = labels[(q, f)]
        for sigma, token, update, g in successors_of_commitment(f):
            moved = wfa.succ(q, sigma)
            if not moved:
                continue
            if token not in letters_map:
                letters_map[token] = (sigma, update)
                letter_order[token] = (wfa.alphabet.index(sigma), token)
            for p, c in moved:
                succ = (p, g)
                if succ not in seen:
                    seen.add(succ)
                    labels[succ] = commitment_label(wfa, p, g)
                    names.append(labels[succ])
                    states_map[labels[succ]] = succ
                    todo.append(succ)
                weights[(src, token, labels[succ])] = c

    for name, (q, f) in states_map.items():
        if q == qfin and f[idx[qfin]] == ACC and all(
            m != ACC for j, m in enumerate(f) if wfa.states[j] != qfin
        ):
            accepting.add(name)

    alphabet = tuple(sorted(letters_map, key=letter_order.get))
    out = Wfa(
        states=tuple(names),
        alphabet=alphabet,
        initials=frozenset({labels[start]}),
        accepting=frozenset(accepting),
        weights=weights,
        name=f"reduction({wfa.name or 'a'})",
    )
    return ReductionResult(wfa=out, base=wfa, states=states_map, letters=letters_map)


# -- tracks and witness transport ---------------------------------------------


def make_tracks(wfa, word):
    """The update track and commitment track of a word.

    Arrows mark transitions from committed sources into states that can still
    reach the accepting state over the remaining suffix; the commitment track
    follows (ACC if an arrow enters, NOACC if only plain transitions enter,
    BOT otherwise). On accepted words, pairing any run with the commitment
    track yields a run of the reduction, accepting whenever the run is.
    """
    q0 = single_initial(wfa)
    qfin = single_accepting(wfa)
    word = wfa.check_word(word)
    idx = wfa._state_index
    nst = len(wfa.states)
    reach = [set() for _ in range(len(word) + 1)]
    reach[len(word)] = {qfin}
    for i in range(len(word) - 1, -1, -1):
        reach[i] = {
            p for q in reach[i + 1] for p, _ in wfa.pred(q, word[i])
        }
    commitments = [_initial_commitment(wfa, q0)]
    updates = []
    for i, sigma in enumerate(word, start=1):
        f_prev = commitments[-1]
        update = [[BOT] * nst for _ in range(nst)]
        for (p, a, t), _w in wfa.weights.items():
            if a != sigma:
                continue
            if f_prev[idx[p]] == ACC and t in reach[i]:
                update[idx[p]][idx[t]] = ACC
            else:
                update[idx[p]][idx[t]] = NOACC
        update = tuple(map(tuple, update))
        updates.append(update)
        commitments.append(_commitment_of(wfa, update))
    return tuple(updates), tuple(commitments)


def lift_u_to_d_witness(wfa, bound, witness, reduction=None):
    """Transport a verified U-type witness of `wfa` into a D-type witness of
    build_reduction(wfa) with the same gap."""
    if witness.kind != U_KIND:
        raise InputError("expected a U-type witness")
    if not verify_u_witness(wfa, bound, witness):
        raise InputError("input witness fails U-type verification at this bound")
    if reduction is None:
        reduction = build_reduction(wfa)
    updates, commitments = make_tracks(wfa, witness.word)
    tokens = tuple(
        update_label(wfa, sigma, upd) for sigma, upd in zip(witness.word, updates)
    )
    missing = [t for t in tokens if t not in reduction.letters]
    if missing:
        raise InternalInvariantError(
            f"track letters not materialised by the reduction: {missing}"
        )
    k = witness.split

    def lifted(states):
        return tuple(
            commitment_label(wfa, q, f) for q, f in zip(states, commitments)
        )

    rho = lifted(witness.rho_states)
    chi = lifted(witness.chi_states)[: k + 1]
    out = GapWitness(
        kind=D_KIND,
        x=tokens[:k],
        y=tokens[k:],
        rho_states=rho,
        chi_states=chi,
        gap=witness.gap,
    )
    try:
        Run.from_states(reduction.wfa, out.word, rho)
        Run.from_states(reduction.wfa, out.x, chi)
    except InputError as exc:
        raise InternalInvariantError(f"lifted run is not a run of the reduction: {exc}")
    return out


def project_d_to_u_witness(reduction, wfa, bound, witness):
    """Transport a verified D-type witness of the (trimmed) reduction back to
    a U-type witness of the base automaton, extending chi over y to the
    accepting state (such an extension is guaranteed; its absence indicates a
    violated invariant, not a user error)."""
    if witness.kind != D_KIND:
        raise InputError("expected a D-type witness")
    qfin = single_accepting(wfa)
    if not verify_d_witness(reduction.wfa, bound, witness):
        raise InputError("input witness fails D-type verification at this bound")
    try:
        sigmas = tuple(reduction.letters[t][0] for t in witness.word)
        rho = tuple(reduction.states[s][0] for s in witness.rho_states)
        chi_prefix = tuple(
            reduction.states[s][0] for s in witness.chi_states[: witness.split + 1]
        )
    except KeyError as exc:
        raise InputError(f"witness references an unknown reduction label: {exc}")
    k = witness.split
    x, y = sigmas[:k], sigmas[k:]
    reach = [set() for _ in range(len(y) + 1)]
    reach[len(y)] = {qfin}
    for i in range(len(y) - 1, -1, -1):
        reach[i] = {p for q in reach[i + 1] for p, _ in wfa.pred(q, y[i])}
    cur = chi_prefix[-1]
    if cur not in reach[0]:
        raise InternalInvariantError(
            f"no continuation {cur} -y-> {qfin} exists; contradicts the "
            "commitment argument"
        )
    chi = list(chi_prefix)
    for i, a in enumerate(y):
        cur = next(q for q, _ in wfa.succ(cur, a) if q in reach[i + 1])
        chi.append(cur)
    out = GapWitness(
        kind=U_KIND, x=x, y=y, rho_states=rho, chi_states=tuple(chi), gap=witness.gap
    )
    if not verify_u_witness(wfa, bound, out):
        raise InternalInvariantError(
            "projected witness fails U-type verification; contradicts the "
            "witness-transport lemma"
        )
    return out
