"""The B-window unambiguisation construction.

States of the output pair an anchor state of the input with a B-window: a
function assigning every input state a relative weight in {-inf, -B..B,
+inf} around the anchor. Transitions are lifted from input transitions and
filtered by two consistency checks; entries of the intermediate window are
computed over exact integers and capped into the window only afterwards.

The construction itself is total. Its guarantees (output unambiguous and
equivalent) hold when the input's U-type gaps are bounded by B, which is
not checked here; `lift_canonical` doubles as a falsifier, raising
GapBoundError when the bounded-gap assumption is violated on a word.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .analysis import canonical_run, order_for
from .errors import GapBoundError, InputError
from .weights import INF, NEG_INF, fmt_weight
from .wfa import Run, Wfa, single_initial


@dataclass(frozen=True)
class BWindow:
    """Window values aligned with `states`; finite entries lie in [-B, B]."""

    bound: int
    states: tuple
    values: tuple

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "values", tuple(self.values))
        if self.bound < 0:
            raise InputError("window bound must be a natural number")
        if len(self.states) != len(self.values):
            raise InputError("window values do not match the state list")
        for v in self.values:
            if v != INF and v != NEG_INF and abs(v) > self.bound:
                raise InputError(f"window entry {v} outside [-{self.bound}, {self.bound}]")

    def value(self, q):
        try:
            return self.values[self.states.index(q)]
        except ValueError:
            raise InputError(f"state {q!r} not covered by window") from None


@dataclass(frozen=True)
class WindowState:
    anchor: str
    window: BWindow

    def label(self):
        entries = ",".join(
            f"{q}:{fmt_weight(v) if v != NEG_INF else '-inf'}"
            for q, v in zip(self.window.states, self.window.values)
            if v != INF
        )
        return f"{self.anchor}|{entries}"


@dataclass(frozen=True)
class WindowAutomaton:
    """build_unambiguous output: the WFA plus the construction bookkeeping."""

    wfa: Wfa
    bound: int
    order: object
    window_states: dict = field(compare=False)

    @property
    def initial_label(self):
        return next(iter(self.wfa.initials))


def _window_term(fv, step, c):
    """One term f(r') + mwt(r' -sigma-> target) - c of the intermediate g."""
    if step == INF or fv == INF:
        return INF
    if fv == NEG_INF:
        return NEG_INF
    return fv + step - c


def window_successor(wfa, state, letter, target, order=None):
    """Apply one lifted transition (state.anchor, letter, c, target).

    Computes the intermediate g over all states, runs the two consistency
    checks on the focused target (reject when g(target) < 0, or when a
    strictly-higher-priority state attains the same g(target)), then caps g
    into the window. Returns the successor WindowState or None when a check
    rejects the transition.
    """
    order = order_for(wfa, order)
    c = wfa.weight(state.anchor, letter, target)
    if c == INF:
        raise InputError(
            f"({state.anchor}, {letter}, {target}) is not a transition of the automaton"
        )
    win = state.window
    g = {q: INF for q in wfa.states}
    for r, fv in zip(win.states, win.values):
        if fv == INF:
            continue
        for q, step in wfa.succ(r, letter):
            t = _window_term(fv, step, c)
            if t < g[q]:
                g[q] = t
    if g[target] < 0:
        return None
    for r in wfa.states:
        if r != state.anchor and order.leq(state.anchor, r):
            t = _window_term(win.value(r), wfa.weight(r, letter, target), c)
            if t == g[target]:
                return None
    bound = win.bound
    capped = tuple(
        INF if v > bound else NEG_INF if v < -bound else v
        for v in (g[q] for q in wfa.states)
    )
    return WindowState(anchor=target, window=BWindow(bound, wfa.states, capped))


def initial_window_state(wfa, bound):
    q0 = single_initial(wfa)
    values = tuple(0 if q == q0 else INF for q in wfa.states)
    return WindowState(anchor=q0, window=BWindow(bound, wfa.states, values))


def build_unambiguous(wfa, bound, order=None):
    """Reachable-subset construction of the window automaton.

    Only window states reachable from (q0, f0) are materialised. Each output
    transition carries the weight of the input transition it lifts. A window
    state is accepting iff its anchor is accepting and every accepting state
    sits strictly above 0 in its window, or at 0 with no higher priority.
    """
    order = order_for(wfa, order)
    start = initial_window_state(wfa, bound)
    discovered = {start: start.label()}
    window_states = {start.label(): start}
    names = [start.label()]
    weights = {}
    todo = deque([start])
    while todo:
        s = todo.popleft()
        for letter in wfa.alphabet:
            for target, c in wfa.succ(s.anchor, letter):
                t = window_successor(wfa, s, letter, target, order)
                if t is None:
                    continue
                if t not in discovered:
                    discovered[t] = t.label()
                    window_states[t.label()] = t
                    names.append(t.label())
                    todo.append(t)
                weights[(discovered[s], letter, discovered[t])] = c
    accepting = set()
    for name, s in window_states.items():
        if s.anchor not in wfa.accepting:
            continue
        ok = True
        for p in wfa.accepting:
            v = s.window.value(p)
            if not (v > 0 or (v == 0 and order.leq(p, s.anchor))):
                ok = False
                break
        if ok:
            accepting.add(name)
    out = Wfa(
        states=tuple(names),
        alphabet=wfa.alphabet,
        initials=frozenset({start.label()}),
        accepting=frozenset(accepting),
        weights=weights,
        name=f"unambiguise({wfa.name or 'a'},{bound})",
    )
    return WindowAutomaton(wfa=out, bound=bound, order=order, window_states=window_states)


def lift_canonical(wfa, built, word, order=None):
    """Lift the canonical run of `wfa` on `word` into the window automaton,
    asserting every lifted transition exists and the lifted run accepts with
    weight eval(wfa, word).

    A missing lifted transition (or a non-accepting end state) is a
    counterexample to the bounded-gap assumption and raises GapBoundError
    with the offending position.
    """
    if order is None:
        order = built.order
    base = canonical_run(wfa, word, order)
    cur = initial_window_state(wfa, built.bound)
    names = [cur.label()]
    for i, letter in enumerate(base.word):
        nxt = window_successor(wfa, cur, letter, base.states[i + 1], order)
        if nxt is None:
            raise GapBoundError(
                i,
                f"canonical run does not lift at step {i}: transition "
                f"({base.states[i]}, {letter}, {base.states[i + 1]}) was rejected; "
                f"the input's gaps are not bounded by {built.bound}",
            )
        cur = nxt
        names.append(cur.label())
    if names[-1] not in built.wfa.accepting:
        raise GapBoundError(
            len(word),
            "lifted canonical run ends in a non-accepting window state; "
            f"the input's gaps are not bounded by {built.bound}",
        )
    return Run.from_states(built.wfa, word, names)
