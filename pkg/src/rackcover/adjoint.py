"""The adjoint group of a quandle, presented by e_x e_y e_x^-1 = e_{x*y},
and a Todd-Coxeter coset enumerator.

The index [Adj(Q) : <e_0>] equals |Adj(Q)^0|, the kernel of the augmentation
sending every generator to 1: the augmentation splits over <e_0>, so Adj(Q)
is the semidirect product of the kernel with Z.  For connected Q the kernel
acts transitively through translations, so by orbit-stabilizer the quandle
is simply connected exactly when that index equals |Q|.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

from . import congruence, core
from .errors import NotConnected
from .core import GroupTable
from .permgroup import Permutation, dis

COSET_CAP = 10**5


@dataclass(frozen=True)
class Presentation:
    """Words are tuples of nonzero ints: +k is generator k-1, -k its inverse."""

    ngens: int
    relators: tuple
    quandle: bool = True


class _Indeterminate:
    """Cap-hit verdict of the coset enumerator; a value, not an error."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Indeterminate"


INDETERMINATE = _Indeterminate()


@dataclass(frozen=True)
class Index:
    value: int


def free_reduce(word):
    out = []
    for g in word:
        if out and out[-1] == -g:
            out.pop()
        else:
            out.append(g)
    return tuple(out)


def adjoint_presentation(Q):
    """One generator per element, one relator e_x e_y e_x^-1 e_{x*y}^-1 per
    pair; relators are freely reduced, deduplicated, and dropped if empty."""
    n = Q.size
    relators = []
    seen = set()
    for x in range(n):
        for y in range(n):
            w = free_reduce((x + 1, y + 1, -(x + 1), -(int(Q.mul[x, y]) + 1)))
            if w and w not in seen:
                seen.add(w)
                relators.append(w)
    return Presentation(ngens=n, relators=tuple(relators), quandle=Q.is_quandle())


class _CapHit(Exception):
    pass


class CosetTable:
    """Partial coset table: rows are live cosets, columns generators then
    inverses; a union-find tracks coincidences (row 0 is the subgroup)."""

    def __init__(self, ngens, cap):
        self.ngens = ngens
        self.width = 2 * ngens
        self.cap = cap
        self.table = [[-1] * self.width]
        self.p = [0]
        self.live = 1

    def col(self, g):
        return g - 1 if g > 0 else self.ngens - g - 1

    def inv_col(self, c):
        return c + self.ngens if c < self.ngens else c - self.ngens

    def rep(self, k):
        while self.p[k] != k:
            self.p[k] = self.p[self.p[k]]
            k = self.p[k]
        return k

    def is_live(self, k):
        return self.p[k] == k

    def define(self, a, c):
        if self.live >= self.cap:
            raise _CapHit
        b = len(self.table)
        self.table.append([-1] * self.width)
        self.p.append(b)
        self.live += 1
        self.table[a][c] = b
        self.table[b][self.inv_col(c)] = a
        return b

    def _merge(self, a, b, queue):
        a, b = self.rep(a), self.rep(b)
        if a == b:
            return
        lo, hi = min(a, b), max(a, b)
        self.p[hi] = lo
        self.live -= 1
        queue.append(hi)

    def coincidence(self, a, b):
        queue = deque()
        self._merge(a, b, queue)
        while queue:
            dead = queue.popleft()
            row = self.table[dead]
            for c in range(self.width):
                d = row[c]
                if d == -1:
                    continue
                row[c] = -1
                self.table[d][self.inv_col(c)] = -1
                mu, nu = self.rep(dead), self.rep(d)
                if self.table[mu][c] != -1:
                    self._merge(nu, self.table[mu][c], queue)
                elif self.table[nu][self.inv_col(c)] != -1:
                    self._merge(mu, self.table[nu][self.inv_col(c)], queue)
                else:
                    self.table[mu][c] = nu
                    self.table[nu][self.inv_col(c)] = mu

    def scan_and_fill(self, a, word):
        cols = [self.col(g) for g in word]
        f, i = a, 0
        b, j = a, len(cols) - 1
        while True:
            while i <= j and self.table[f][cols[i]] != -1:
                f = self.table[f][cols[i]]
                i += 1
            if i > j:
                if f != b:
                    self.coincidence(f, b)
                return
            while j >= i and self.table[b][self.inv_col(cols[j])] != -1:
                b = self.table[b][self.inv_col(cols[j])]
                j -= 1
            if j < i:
                self.coincidence(f, b)
                return
            if i == j:
                self.table[f][cols[i]] = b
                self.table[b][self.inv_col(cols[i])] = f
                return
            self.define(f, cols[i])


def todd_coxeter(pres, subgroup_words, cap=COSET_CAP):
    """Index of the subgroup generated by the given words, by HLT-style
    enumeration; Indeterminate when the live-coset cap is hit."""
    ct = CosetTable(pres.ngens, cap)
    try:
        for w in subgroup_words:
            ct.scan_and_fill(0, ct_word(w))
        a = 0
        while a < len(ct.table):
            if ct.is_live(a):
                for r in pres.relators:
                    ct.scan_and_fill(a, r)
                    if not ct.is_live(a):
                        break
                if ct.is_live(a):
                    for c in range(ct.width):
                        if ct.table[a][c] == -1:
                            ct.define(a, c)
            a += 1
    except _CapHit:
        return INDETERMINATE
    return Index(ct.live)


def ct_word(word):
    return free_reduce(tuple(int(g) for g in word))


def adj0_order(Q, cap=COSET_CAP):
    """|Adj(Q)^0| as the index [Adj(Q) : <e_0>], or Indeterminate at cap."""
    pres = adjoint_presentation(Q)
    out = todd_coxeter(pres, [(1,)], cap=cap)
    return out.value if isinstance(out, Index) else out


def is_simply_connected(Q, cap=COSET_CAP):
    if not congruence.orbit_partition(Q).is_full():
        raise NotConnected("simple connectedness is defined for connected structures")
    k = adj0_order(Q, cap=cap)
    if k is INDETERMINATE:
        return INDETERMINATE
    return k == Q.size


def same_dis_covers(Q, a, cap=20000):
    """Coset-quandle specs Q(Dis(Q), H, conj by L_a) over all subgroups H of
    the stabilizer Dis(Q)_a fixed elementwise by that conjugation: the covers
    of Q that keep the same displacement group."""
    if not congruence.orbit_partition(Q).is_full():
        raise NotConnected("the coset-quandle form needs a connected structure")
    D = dis(Q)
    La = Permutation(Q.mul[a])
    La_inv = La.inverse()
    gtab, elems = GroupTable.from_permgroup(D)
    index = {g: i for i, g in enumerate(elems)}
    aut = tuple(index[La * g * La_inv] for g in elems)
    stab = D.stabilizer(a)
    out = []
    for H in stab.subgroups(max_order=stab.order, cap=cap):
        if any(La * h * La_inv != h for h in H.elements):
            continue
        sub = tuple(sorted(index[h] for h in H.elements))
        out.append(core.CosetQuandleSpec(group=gtab, aut=aut, subgroup=sub))
    return out
