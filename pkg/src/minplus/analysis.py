"""Decision and diagnostic procedures over WFAs.

Exact ambiguity via the boolean self-product, exact width via subset
reachability, canonical minimal runs under a priority order, difference
automata against unambiguous subtrahends, and a bounded shortlex
equivalence oracle.
"""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass

from .errors import InputError
from .weights import INF
from .wfa import Run, backward_layers, evaluate, forward_layers, negate, product


@dataclass(frozen=True)
class StateOrder:
    """A total priority order on states: later in `ranking` is better.

    q ⪯ p holds iff rank(q) <= rank(p) where rank is the list position, so the
    ⪯-maximal state of a set is the one declared last.
    """

    ranking: tuple

    def __post_init__(self):
        object.__setattr__(self, "ranking", tuple(self.ranking))
        if len(set(self.ranking)) != len(self.ranking):
            raise InputError("state order contains duplicates")
        object.__setattr__(
            self, "_rank", {q: i for i, q in enumerate(self.ranking)}
        )

    @classmethod
    def declaration(cls, wfa):
        return cls(wfa.states)

    def check_for(self, wfa):
        if set(self.ranking) != set(wfa.states):
            raise InputError("state order is not a permutation of the state set")
        return self

    def rank(self, q):
        try:
            return self._rank[q]
        except KeyError:
            raise InputError(f"state {q!r} not ranked") from None

    def leq(self, a, b):
        """a ⪯ b."""
        return self.rank(a) <= self.rank(b)

    def best(self, candidates):
        """The ⪯-maximal element of a non-empty candidate set."""
        return max(candidates, key=self.rank)


def order_for(wfa, order=None):
    if order is None:
        return StateOrder.declaration(wfa)
    return order.check_for(wfa)


# -- ambiguity ---------------------------------------------------------------


def is_unambiguous(wfa):
    """Exact decision: build the boolean self-product over finite transitions,
    keep pairs reachable from an initial pair and co-reachable to an accepting
    pair, and report ambiguity iff an off-diagonal pair survives."""
    pairs = set(itertools.product(wfa.initials, wfa.initials))
    todo = deque(pairs)
    while todo:
        p1, p2 = todo.popleft()
        for a in wfa.alphabet:
            for q1, _ in wfa.succ(p1, a):
                for q2, _ in wfa.succ(p2, a):
                    if (q1, q2) not in pairs:
                        pairs.add((q1, q2))
                        todo.append((q1, q2))
    co = {p for p in pairs if p[0] in wfa.accepting and p[1] in wfa.accepting}
    todo = deque(co)
    while todo:
        q1, q2 = todo.popleft()
        for a in wfa.alphabet:
            for p1, _ in wfa.pred(q1, a):
                for p2, _ in wfa.pred(q2, a):
                    pair = (p1, p2)
                    if pair in pairs and pair not in co:
                        co.add(pair)
                        todo.append(pair)
    return all(p1 == p2 for p1, p2 in co)


def count_accepting_runs(wfa, word):
    """Exact number of accepting runs on `word` (path-counting DP)."""
    word = wfa.check_word(word)
    counts = {q: (1 if q in wfa.initials else 0) for q in wfa.states}
    for a in word:
        nxt = {q: 0 for q in wfa.states}
        for p, n in counts.items():
            if n == 0:
                continue
            for q, _ in wfa.succ(p, a):
                nxt[q] += n
        counts = nxt
    return sum(counts[q] for q in wfa.accepting)


# -- width -------------------------------------------------------------------


def reachable_supports(wfa):
    """All boolean supports reachable from the initial set (exact BFS over the
    subset construction restricted to finite transitions)."""
    start = frozenset(wfa.initials)
    seen = {start}
    todo = deque([start])
    while todo:
        cur = todo.popleft()
        for a in wfa.alphabet:
            nxt = frozenset(q for p in cur for q, _ in wfa.succ(p, a))
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


def width(wfa):
    """Maximal number of simultaneously reachable states."""
    if not wfa.states:
        return 0
    return max(len(s) for s in reachable_supports(wfa))


# -- canonical runs ----------------------------------------------------------


def canonical_run(wfa, word, order=None):
    """The unique minimal-weight accepting run surviving position-wise priority
    culling from the last position down to the first.

    Computed by backtracking over the forward DP rather than enumerating runs:
    every prefix of a minimal accepting run is itself a minimal run to its
    intermediate state, so at each position the culling candidates are exactly
    the DP-optimal predecessors of the already-fixed suffix.
    """
    order = order_for(wfa, order)
    word = wfa.check_word(word)
    fwd = forward_layers(wfa, word)
    n = len(word)
    value = min((fwd[n][q] for q in wfa.accepting), default=INF)
    if value == INF:
        raise InputError("no accepting run on the given word")
    last = order.best(q for q in wfa.accepting if fwd[n][q] == value)
    states = [last]
    for k in range(n - 1, -1, -1):
        a = word[k]
        nxt = states[0]
        target = fwd[k + 1][nxt]
        cands = [
            p
            for p, c in wfa.pred(nxt, a)
            if fwd[k][p] != INF and fwd[k][p] + c == target
        ]
        states.insert(0, order.best(cands))
    return Run.from_states(wfa, word, states)


# -- comparisons -------------------------------------------------------------


def difference_with_unambiguous(wfa, unamb):
    """product(A, negate(U)) computing A(w) - U(w) where both are finite.
    U must be unambiguous for the negation identity to hold."""
    if set(wfa.alphabet) != set(unamb.alphabet):
        raise InputError("difference requires identical alphabets")
    if not is_unambiguous(unamb):
        raise InputError("subtrahend automaton is ambiguous")
    return product(wfa, negate(unamb))


def words_shortlex(alphabet, max_len):
    for n in range(max_len + 1):
        yield from itertools.product(alphabet, repeat=n)


def equiv_bounded(a, b, max_len):
    """First shortlex word of length <= max_len on which the two automata
    disagree, or None. Letter order is the first automaton's declaration
    order."""
    if set(a.alphabet) != set(b.alphabet):
        raise InputError("bounded equivalence requires identical alphabets")
    for word in words_shortlex(a.alphabet, max_len):
        if evaluate(a, word) != evaluate(b, word):
            return word
    return None


def bounded_reach_exact(wfa, targets, max_steps):
    """layers[r] = states that can reach `targets` in exactly r finite steps
    over some word; used to prune bounded word searches."""
    layers = [set(targets)]
    for _ in range(max_steps):
        prev = layers[-1]
        cur = set()
        for q in prev:
            for a in wfa.alphabet:
                cur.update(p for p, _ in wfa.pred(q, a))
        layers.append(cur)
    return layers
