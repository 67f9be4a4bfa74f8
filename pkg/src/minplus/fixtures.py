"""Small automata used throughout the test-suite, the scripts and the docs.

fig3: six states over {a}, two weight-balanced runs on aaa; ambiguous but
      equivalent to an unambiguous automaton (gaps are bounded by 2).
fig4: four states over {a,b,c,d}; unambiguous but not determinisable
      (the b-loops drift apart without bound).
one:  single accepting state counting a's.
gbase: the @-loop base automaton consumed by the width-7 gadget.
"""

from .gadget import BaseSpec
from .wfa import Wfa


def fig3():
    return Wfa(
        states=("q0", "q1", "q2", "q3", "q4", "q5"),
        alphabet=("a",),
        initials=frozenset({"q0"}),
        accepting=frozenset({"q5"}),
        weights={
            ("q0", "a", "q1"): 1,
            ("q0", "a", "q2"): -1,
            ("q1", "a", "q3"): -2,
            ("q2", "a", "q4"): 2,
            ("q3", "a", "q5"): 1,
            ("q4", "a", "q5"): -1,
        },
        name="fig3",
    )


def fig4():
    return Wfa(
        states=("q", "p", "r", "s"),
        alphabet=("a", "b", "c", "d"),
        initials=frozenset({"q"}),
        accepting=frozenset({"s"}),
        weights={
            ("q", "a", "p"): 0,
            ("q", "a", "r"): 0,
            ("p", "b", "p"): 1,
            ("r", "b", "r"): 0,
            ("p", "c", "s"): 0,
            ("r", "d", "s"): 0,
        },
        name="fig4",
    )


def one():
    return Wfa(
        states=("s0",),
        alphabet=("a",),
        initials=frozenset({"s0"}),
        accepting=frozenset({"s0"}),
        weights={("s0", "a", "s0"): 1},
        name="one",
    )


def gbase():
    return Wfa(
        states=("q0",),
        alphabet=("@",),
        initials=frozenset({"q0"}),
        accepting=frozenset({"q0"}),
        weights={("q0", "@", "q0"): 1},
        name="gbase",
    )


def gbase_spec():
    return BaseSpec(base=gbase(), zeta=("@",))
