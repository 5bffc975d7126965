"""Congruences of left quasigroups and the distinguished equivalences:
the Cayley kernel, the same-stabilizer relation sigma, the least idempotent
kernel ip, orbit partitions of normal subgroups, and quotients.
"""

from __future__ import annotations

import itertools

import numpy as np

from . import core
from .errors import CapExceeded, NotACongruence, NotNormal
from .partition import Partition
from .permgroup import Permutation, dis, lmlt, is_normal_in

ALL_CONGRUENCES_CAP = 12


def orbit_partition(Q):
    """Orbit decomposition under all translations: components of y -> x*y.

    Equals the orbit partition of the left multiplication group, but needs
    no group closure (every translation permutes each component).
    """
    n = Q.size
    return Partition.from_pairs(
        n, [(y, int(Q.mul[x, y])) for x in range(n) for y in range(n)]
    )


def is_congruence(Q, alpha):
    """True iff alpha is compatible with *, \\ in both arguments."""
    if alpha.degree != Q.size:
        raise NotACongruence(f"partition degree {alpha.degree} != size {Q.size}")
    mul, ldiv = Q.mul, Q.ldiv
    ids = np.asarray(alpha.block_id)
    for block in alpha.blocks():
        a = block[0]
        for b in block[1:]:
            if (
                not np.array_equal(ids[mul[a]], ids[mul[b]])
                or not np.array_equal(ids[mul[:, a]], ids[mul[:, b]])
                or not np.array_equal(ids[ldiv[a]], ids[ldiv[b]])
                or not np.array_equal(ids[ldiv[:, a]], ids[ldiv[:, b]])
            ):
                return False
    return True


def congruence_generated(Q, pairs):
    """Least congruence containing the given pairs."""
    n = Q.size
    mul, ldiv = Q.mul, Q.ldiv
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    work = []

    def union(a, b):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
            work.append((a, b))

    for a, b in pairs:
        union(a, b)
    while work:
        a, b = work.pop()
        for c in range(n):
            union(mul[a, c], mul[b, c])
            union(mul[c, a], mul[c, b])
            union(ldiv[a, c], ldiv[b, c])
            union(ldiv[c, a], ldiv[c, b])
    return Partition(find(x) for x in range(n))


def cayley_kernel(Q):
    """Partition by equal rows L_x = L_y, plus a flag telling whether it is
    a congruence (always true for racks, not in general)."""
    rows = {}
    ids = []
    for x in range(Q.size):
        key = tuple(int(v) for v in Q.mul[x])
        ids.append(rows.setdefault(key, len(rows)))
    lam = Partition(ids)
    return lam, is_congruence(Q, lam)


def sigma(Q):
    """Same point stabilizer in the displacement group."""
    D = dis(Q)
    keys = {}
    ids = []
    for a in range(Q.size):
        stab = frozenset(p.image for p in D.elements if p(a) == a)
        ids.append(keys.setdefault(stab, len(keys)))
    return Partition(ids)


def sg(Q, a):
    """Cycle of a under its own translation: the subrack generated by a."""
    out = {a}
    x = int(Q.mul[a, a])
    while x not in out:
        out.add(x)
        x = int(Q.mul[a, x])
    return sorted(out)


def ip(Q):
    """Least congruence whose quotient is idempotent."""
    return congruence_generated(Q, [(a, int(Q.mul[a, a])) for a in range(Q.size)])


def orbit_congruence(Q, N):
    """Orbit partition of a normal subgroup N of the left multiplication group."""
    _require_normal(Q, N)
    return N.orbits()


def cN(Q, N):
    """Pairs whose translation quotient L_a L_b^{-1} lies in N."""
    _require_normal(Q, N)
    trans = [Permutation(row) for row in Q.mul]
    keys = {}
    ids = []
    for a in range(Q.size):
        coset = min((Permutation(img) * trans[a]).image for img in N._members)
        ids.append(keys.setdefault(coset, len(keys)))
    part = Partition(ids)
    if not N.orbits().refines(part):
        raise NotNormal("orbit partition is not below the translation-class partition")
    return part


def _require_normal(Q, N):
    G = lmlt(Q)
    if not all(p in G for p in N.generators) or not is_normal_in(N, G):
        raise NotNormal("subgroup is not normal in the left multiplication group")


def quotient(Q, alpha):
    """Factor structure on blocks plus the projection map.

    Block b * block c is computed on first-element representatives; alpha
    must be a congruence for this to be well defined.
    """
    if not is_congruence(Q, alpha):
        raise NotACongruence("partition is not a congruence")
    ids = alpha.block_id
    reps = [b[0] for b in alpha.blocks()]
    k = len(reps)
    mul = np.empty((k, k), dtype=np.int64)
    for i, a in enumerate(reps):
        for j, b in enumerate(reps):
            mul[i, j] = ids[Q.mul[a, b]]
    return core.from_table(mul), list(ids)


def is_uniform(Q, alpha):
    del Q
    return alpha.is_uniform()


def all_congruences(Q, cap=ALL_CONGRUENCES_CAP):
    """The congruence lattice, as the join closure of principal congruences."""
    if Q.size > cap:
        raise CapExceeded(f"congruence enumeration on {Q.size} elements exceeds cap {cap}")
    principals = {congruence_generated(Q, [(a, b)]) for a, b in itertools.combinations(range(Q.size), 2)}
    found = {Partition.identity(Q.size)} | principals
    frontier = list(principals)
    while frontier:
        nxt = []
        for p in frontier:
            for q in list(found):
                j = p.join(q)
                if j not in found:
                    found.add(j)
                    nxt.append(j)
        frontier = nxt
    return sorted(found, key=lambda p: (p.nblocks, p.block_id), reverse=True)
