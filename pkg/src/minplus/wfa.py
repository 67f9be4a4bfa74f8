"""Min-plus weighted finite automata: data model and run semantics.

A `Wfa` assigns every word the minimal weight of an accepting run, INF when
no accepting run exists. The weight map is sparse: a (state, letter, state)
triple without an entry reads as INF, i.e. the transition is absent. All
values are immutable after construction; every operation below is a pure
function of its inputs.

Letters and state identifiers are arbitrary non-empty tokens without
whitespace, so multi-character letters such as ``X1`` or composed letters
such as ``a|q>p`` are representable.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property

from .errors import InputError
from .weights import INF, check_weight, w_add, w_neg


def _check_ident(tok, what):
    if not isinstance(tok, str) or not tok:
        raise InputError(f"{what} must be a non-empty string, got {tok!r}")
    if any(c.isspace() for c in tok) or tok.startswith("#"):
        raise InputError(f"{what} {tok!r} may not contain whitespace or start with '#'")
    return tok


@dataclass(frozen=True)
class Wfa:
    """A weighted automaton over (min, +).

    states:    ordered state identifiers (declaration order is significant:
               it is the default priority order and the serialisation order)
    alphabet:  ordered letters
    initials:  non-empty set of initial states (empty only for the degenerate
               automaton with no states at all, which arises from trimming)
    accepting: accepting states
    weights:   sparse map (src, letter, dst) -> finite int; absent means INF
    """

    states: tuple
    alphabet: tuple
    initials: frozenset
    accepting: frozenset
    weights: dict
    name: str = field(default="", compare=False)

    def __post_init__(self):
        states = tuple(self.states)
        alphabet = tuple(self.alphabet)
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "alphabet", alphabet)
        object.__setattr__(self, "initials", frozenset(self.initials))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        for q in states:
            _check_ident(q, "state")
        for a in alphabet:
            _check_ident(a, "letter")
        if len(set(states)) != len(states):
            raise InputError("duplicate state identifiers")
        if len(set(alphabet)) != len(alphabet):
            raise InputError("duplicate letters")
        sset = set(states)
        if not self.initials <= sset:
            raise InputError("initial states not declared")
        if not self.accepting <= sset:
            raise InputError("accepting states not declared")
        if states and not self.initials:
            raise InputError("at least one initial state required")
        aset = set(alphabet)
        cleaned = {}
        for key, w in self.weights.items():
            p, a, q = key
            if p not in sset or q not in sset:
                raise InputError(f"transition uses undeclared state: {key}")
            if a not in aset:
                raise InputError(f"transition uses undeclared letter: {key}")
            w = check_weight(w, f"weight of {key}")
            if w != INF:
                cleaned[(p, a, q)] = w
        object.__setattr__(self, "weights", cleaned)

    # -- cheap structural accessors -------------------------------------

    def weight(self, p, a, q):
        """The single stored weight of (p, a, q); INF when absent."""
        return self.weights.get((p, a, q), INF)

    @cached_property
    def _succ(self):
        """(src, letter) -> tuple of (dst, weight) over finite transitions."""
        out = {}
        for (p, a, q), w in self.weights.items():
            out.setdefault((p, a), []).append((q, w))
        return {k: tuple(sorted(v, key=lambda t: self._state_index[t[0]])) for k, v in out.items()}

    @cached_property
    def _pred(self):
        """(dst, letter) -> tuple of (src, weight) over finite transitions."""
        out = {}
        for (p, a, q), w in self.weights.items():
            out.setdefault((q, a), []).append((p, w))
        return {k: tuple(sorted(v, key=lambda t: self._state_index[t[0]])) for k, v in out.items()}

    @cached_property
    def _state_index(self):
        return {q: i for i, q in enumerate(self.states)}

    def succ(self, p, a):
        return self._succ.get((p, a), ())

    def pred(self, q, a):
        return self._pred.get((q, a), ())

    def max_abs_weight(self):
        """Largest absolute finite weight, 0 when there are none."""
        return max((abs(w) for w in self.weights.values()), default=0)

    def check_word(self, word):
        word = tuple(word)
        aset = set(self.alphabet)
        for a in word:
            if a not in aset:
                raise InputError(f"letter {a!r} not in alphabet")
        return word

    def check_states(self, qs, what="state"):
        for q in qs:
            if q not in self._state_index:
                raise InputError(f"unknown {what} {q!r}")
        return qs


@dataclass(frozen=True)
class Run:
    """A run: states has length len(word)+1 and every step weight is finite."""

    word: tuple
    states: tuple
    step_weights: tuple

    def __post_init__(self):
        if len(self.states) != len(self.word) + 1:
            raise InputError("run length does not match word length")
        if len(self.step_weights) != len(self.word):
            raise InputError("run weights do not match word length")

    @property
    def wt(self):
        return sum(self.step_weights)

    def prefix_weight(self, k):
        """Weight of the first k steps."""
        return sum(self.step_weights[:k])

    @classmethod
    def from_states(cls, wfa, word, states):
        """Reconstruct a run from its state sequence, validating every step."""
        word = tuple(word)
        states = tuple(states)
        wfa.check_word(word)
        wfa.check_states(states, "run state")
        if len(states) != len(word) + 1:
            raise InputError("run length does not match word length")
        ws = []
        for i, a in enumerate(word):
            w = wfa.weight(states[i], a, states[i + 1])
            if w == INF:
                raise InputError(
                    f"no finite transition {states[i]} -{a}-> {states[i + 1]}"
                )
            ws.append(w)
        return cls(word, states, tuple(ws))


# -- configurations --------------------------------------------------------


def initial_config(wfa):
    """The configuration that assigns 0 to every initial state, INF elsewhere."""
    return {q: (0 if q in wfa.initials else INF) for q in wfa.states}


def support(config):
    return {q for q, w in config.items() if w != INF}


def step_config(wfa, config, letter):
    out = {q: INF for q in wfa.states}
    for p, w in config.items():
        if w == INF:
            continue
        for q, c in wfa.succ(p, letter):
            v = w_add(w, c)
            if v < out[q]:
                out[q] = v
    return out


def xconf(wfa, config, word):
    """Propagate a configuration through a word: the min-plus closure of the
    per-letter step. xconf(A, c, '') is c itself."""
    word = wfa.check_word(word)
    wfa.check_states(config.keys(), "configuration state")
    cur = {q: INF for q in wfa.states}
    for q, w in config.items():
        if w != INF:
            cur[q] = check_weight(w, "configuration value")
    for a in word:
        cur = step_config(wfa, cur, a)
    return cur


# -- semantics --------------------------------------------------------------


def evaluate(wfa, word):
    """A(w): minimum over accepting runs from any initial state, by a forward
    configuration DP (never run enumeration)."""
    conf = xconf(wfa, initial_config(wfa), word)
    return min((conf[q] for q in wfa.accepting), default=INF)


def mwt(wfa, sources, word, targets):
    """Minimal run weight from `sources` to `targets` over `word`; INF if none."""
    sources = set(sources)
    targets = set(targets)
    wfa.check_states(sources | targets)
    conf = {q: (0 if q in sources else INF) for q in wfa.states}
    conf = xconf(wfa, conf, word)
    return min((conf[q] for q in targets), default=INF)


def forward_layers(wfa, word, sources=None):
    """Per-prefix configurations: layers[i][q] = mwt(sources -w[:i]-> q)."""
    if sources is None:
        cur = initial_config(wfa)
    else:
        cur = {q: (0 if q in sources else INF) for q in wfa.states}
    layers = [cur]
    for a in word:
        cur = step_config(wfa, cur, a)
        layers.append(cur)
    return layers


def backward_layers(wfa, word, targets=None):
    """Per-suffix values: layers[i][q] = mwt(q -w[i:]-> targets)."""
    if targets is None:
        targets = wfa.accepting
    cur = {q: (0 if q in targets else INF) for q in wfa.states}
    layers = [cur]
    for a in reversed(word):
        nxt = {q: INF for q in wfa.states}
        for p in wfa.states:
            for q, c in wfa.succ(p, a):
                if cur[q] == INF:
                    continue
                v = w_add(c, cur[q])
                if v < nxt[p]:
                    nxt[p] = v
        layers.append(nxt)
        cur = nxt
    layers.reverse()
    return layers


# -- structural operations ---------------------------------------------------


def _restrict(wfa, keep, name=None):
    keep = set(keep)
    return Wfa(
        states=tuple(q for q in wfa.states if q in keep),
        alphabet=wfa.alphabet,
        initials=frozenset(wfa.initials & keep),
        accepting=frozenset(wfa.accepting & keep),
        weights={k: w for k, w in wfa.weights.items() if k[0] in keep and k[2] in keep},
        name=wfa.name if name is None else name,
    )


def reachable_states(wfa):
    seen = set(wfa.initials)
    todo = deque(seen)
    while todo:
        p = todo.popleft()
        for a in wfa.alphabet:
            for q, _ in wfa.succ(p, a):
                if q not in seen:
                    seen.add(q)
                    todo.append(q)
    return seen


def coreachable_states(wfa):
    seen = set(wfa.accepting)
    todo = deque(seen)
    while todo:
        q = todo.popleft()
        for a in wfa.alphabet:
            for p, _ in wfa.pred(q, a):
                if p not in seen:
                    seen.add(p)
                    todo.append(p)
    return seen


def trim(wfa):
    """Drop states unreachable from the initial set. Evaluation is unchanged
    on every word; idempotent."""
    keep = reachable_states(wfa)
    if len(keep) == len(wfa.states):
        return wfa
    return _restrict(wfa, keep)


def trim_coaccessible(wfa):
    """Accessible trim plus removal of states that cannot reach an accepting
    state. May yield the empty automaton when nothing useful remains."""
    a = trim(wfa)
    keep = reachable_states(a) & coreachable_states(a)
    if len(keep) == len(a.states):
        return a
    return _restrict(a, keep)


def negate(wfa):
    """Flip the sign of every finite weight; the structure is unchanged."""
    return Wfa(
        states=wfa.states,
        alphabet=wfa.alphabet,
        initials=wfa.initials,
        accepting=wfa.accepting,
        weights={k: w_neg(w) for k, w in wfa.weights.items()},
        name=wfa.name,
    )


def product(a1, a2):
    """Pair construction computing A1(w) + A2(w) (INF-absorbing)."""
    if set(a1.alphabet) != set(a2.alphabet):
        raise InputError("product requires identical alphabets")
    pair_name = lambda p, q: f"({p},{q})"
    states = tuple(pair_name(p, q) for p in a1.states for q in a2.states)
    weights = {}
    for (p1, a, q1), c1 in a1.weights.items():
        for p2 in a2.states:
            for q2, c2 in a2.succ(p2, a):
                weights[(pair_name(p1, p2), a, pair_name(q1, q2))] = w_add(c1, c2)
    return Wfa(
        states=states,
        alphabet=a1.alphabet,
        initials=frozenset(pair_name(p, q) for p in a1.initials for q in a2.initials),
        accepting=frozenset(pair_name(p, q) for p in a1.accepting for q in a2.accepting),
        weights=weights,
        name=f"product({a1.name or 'a'},{a2.name or 'b'})",
    )


def is_deterministic(wfa):
    """Single initial state and at most one finite transition per (state, letter)."""
    if len(wfa.initials) != 1:
        return False
    return all(
        len(wfa.succ(p, a)) <= 1 for p, a in itertools.product(wfa.states, wfa.alphabet)
    )


def single_initial(wfa):
    """The unique initial state; error when there are several (or none)."""
    if len(wfa.initials) != 1:
        raise InputError("operation requires a single-initial automaton")
    return next(iter(wfa.initials))
