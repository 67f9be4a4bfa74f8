"""Cost register automata over (min, +) in matrix form.

Deterministic control, k registers folded by min-plus vector-matrix
products, output the minimum over the designated registers of the final
state. The two conversions preserve the correspondence between register
count and WFA width: a width-k automaton becomes a k-CRA whose control is
the subset construction with registers assigned to support members in a
fixed linear order, and a k-CRA becomes a WFA of width at most k whose
states pair control states with register indices.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

from .analysis import order_for
from .errors import InputError
from .weights import INF, check_weight, w_add
from .wfa import Wfa


def vec_mat(vec, matrix):
    """Min-plus vector-matrix product: out[j] = min_i vec[i] + matrix[i][j]."""
    k = len(vec)
    out = []
    for j in range(k):
        best = INF
        for i in range(k):
            v = w_add(vec[i], matrix[i][j])
            if v < best:
                best = v
        out.append(best)
    return tuple(out)


def mat_mul(m1, m2):
    """Min-plus matrix product (both square, same dimension)."""
    k = len(m1)
    return tuple(
        tuple(
            min((w_add(m1[i][l], m2[l][j]) for l in range(k)), default=INF)
            for j in range(k)
        )
        for i in range(k)
    )


@dataclass(frozen=True)
class Cra:
    """k registers over a deterministic, complete control automaton.

    delta and upd are total over states x alphabet; upd values are k x k
    matrices (tuples of tuples); fin maps an accepting state to the
    non-empty set of 0-based register indices it outputs. A state yields
    output iff it is accepting and has a fin entry.
    """

    states: tuple
    alphabet: tuple
    k: int
    initial: str
    accepting: frozenset
    delta: dict
    upd: dict
    fin: dict
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))
        object.__setattr__(self, "alphabet", tuple(self.alphabet))
        object.__setattr__(self, "accepting", frozenset(self.accepting))
        sset = set(self.states)
        if len(sset) != len(self.states):
            raise InputError("duplicate control states")
        if self.k < 1:
            raise InputError("register count must be positive")
        if self.initial not in sset:
            raise InputError("initial control state not declared")
        if not self.accepting <= sset:
            raise InputError("accepting control states not declared")
        for q in self.states:
            for a in self.alphabet:
                if (q, a) not in self.delta:
                    raise InputError(f"delta is not total: missing ({q}, {a})")
                if self.delta[(q, a)] not in sset:
                    raise InputError(f"delta({q}, {a}) is not a declared state")
                if (q, a) not in self.upd:
                    raise InputError(f"upd is not total: missing ({q}, {a})")
        fixed_upd = {}
        for key, m in self.upd.items():
            if len(m) != self.k or any(len(row) != self.k for row in m):
                raise InputError(f"upd{key} is not a {self.k}x{self.k} matrix")
            fixed_upd[key] = tuple(
                tuple(check_weight(w, f"upd{key}") for w in row) for row in m
            )
        object.__setattr__(self, "upd", fixed_upd)
        fixed_fin = {}
        for q, regs in self.fin.items():
            if q not in self.accepting:
                raise InputError(f"fin declared for non-accepting state {q}")
            regs = tuple(sorted(set(regs)))
            if not regs:
                raise InputError(f"fin({q}) must be non-empty")
            if any(not 0 <= i < self.k for i in regs):
                raise InputError(f"fin({q}) indices out of register range")
            fixed_fin[q] = regs
        object.__setattr__(self, "fin", fixed_fin)

    def check_word(self, word):
        word = tuple(word)
        aset = set(self.alphabet)
        for a in word:
            if a not in aset:
                raise InputError(f"letter {a!r} not in alphabet")
        return word


def cra_eval(cra, word):
    """Run the control DFA from the all-zero valuation and output the minimum
    over the final state's output registers; INF when the final state yields
    no output."""
    word = cra.check_word(word)
    q = cra.initial
    vec = (0,) * cra.k
    for a in word:
        vec = vec_mat(vec, cra.upd[(q, a)])
        q = cra.delta[(q, a)]
    if q not in cra.accepting or q not in cra.fin:
        return INF
    return min(vec[i] for i in cra.fin[q])


def cra_to_wfa(cra):
    """States pair control states with register indices; entry (i, j) of the
    step matrix becomes the weight of the ((q,i), sigma, (q',j)) transition.
    The result has width at most k and evaluates like the CRA."""
    name = lambda q, i: f"{q}#{i + 1}"
    states = tuple(name(q, i) for q in cra.states for i in range(cra.k))
    weights = {}
    for (q, a), m in cra.upd.items():
        q2 = cra.delta[(q, a)]
        for i in range(cra.k):
            for j in range(cra.k):
                if m[i][j] != INF:
                    weights[(name(q, i), a, name(q2, j))] = m[i][j]
    return Wfa(
        states=states,
        alphabet=cra.alphabet,
        initials=frozenset(name(cra.initial, i) for i in range(cra.k)),
        accepting=frozenset(
            name(q, i) for q, regs in cra.fin.items() for i in regs
        ),
        weights=weights,
        name=f"wfa({cra.name or 'cra'})",
    )


def _support_name(members):
    return "{" + ",".join(members) + "}"


def wfa_to_cra(wfa, order=None):
    """Subset construction with registers reused across supports.

    Control states are the reachable supports, each listed in the fixed
    linear order (declaration order by default); register i of a support
    carries the minimal weight of its i-th member. Matrix entries beyond the
    support size stay INF so matrices remain uniformly k x k. The empty
    support acts as the sink keeping delta total. The register count equals
    the width of the input exactly.
    """
    if not wfa.states:
        raise InputError("cannot convert an automaton without states")
    order = order_for(wfa, order)
    rank = order.rank

    def sort_support(s):
        return tuple(sorted(s, key=rank))

    start = sort_support(wfa.initials)
    supports = {start}
    names = [start]
    delta = {}
    todo = deque([start])
    while todo:
        cur = todo.popleft()
        for a in wfa.alphabet:
            nxt = sort_support({q for p in cur for q, _ in wfa.succ(p, a)})
            delta[(cur, a)] = nxt
            if nxt not in supports:
                supports.add(nxt)
                names.append(nxt)
                todo.append(nxt)
    k = max(1, max(len(s) for s in supports))
    upd = {}
    for (cur, a), nxt in delta.items():
        m = [[INF] * k for _ in range(k)]
        for i, p in enumerate(cur):
            for j, q in enumerate(nxt):
                m[i][j] = wfa.weight(p, a, q)
        upd[(cur, a)] = tuple(map(tuple, m))
    label = {s: _support_name(s) for s in supports}
    accepting = {s for s in supports if set(s) & wfa.accepting}
    fin = {
        label[s]: tuple(i for i, q in enumerate(s) if q in wfa.accepting)
        for s in accepting
    }
    return Cra(
        states=tuple(label[s] for s in names),
        alphabet=wfa.alphabet,
        k=k,
        initial=label[start],
        accepting=frozenset(label[s] for s in accepting),
        delta={(label[s], a): label[t] for (s, a), t in delta.items()},
        upd={(label[s], a): m for (s, a), m in upd.items()},
        fin=fin,
        name=f"cra({wfa.name or 'a'})",
    )
