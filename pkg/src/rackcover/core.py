"""Finite left quasigroups, racks, and quandles as integer tables.

Elements are 0..n-1. The table rows are left translations: mul[x][y] = x*y,
and ldiv[x] is the inverse permutation of mul[x], so mul[x][ldiv[x][y]] = y.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import (
    BadShape,
    CapExceeded,
    NotAutomorphism,
    NotLeftQuasigroup,
    SubgroupNotFixed,
)
from .permgroup import Permutation, PermGroup

ISO_CAP = 12
GROUP_TABLE_CAP = 512


class LeftQuasigroup:
    """A finite binary structure whose left translations are bijective."""

    __slots__ = ("size", "mul", "ldiv", "_cache")

    def __init__(self, mul, ldiv):
        self.size = mul.shape[0]
        self.mul = mul
        self.ldiv = ldiv
        self._cache = {}

    def __eq__(self, other):
        return isinstance(other, LeftQuasigroup) and np.array_equal(self.mul, other.mul)

    def __hash__(self):
        return hash(self.mul.tobytes())

    def __repr__(self):
        return f"LeftQuasigroup({self.mul.tolist()})"

    def rows(self):
        return [tuple(int(v) for v in row) for row in self.mul]

    def is_rack(self):
        return is_rack(self)

    def is_quandle(self):
        return is_quandle(self)


def from_table(rows):
    """Build a structure from an n x n table, validating each row is a permutation."""
    mul = np.asarray(rows, dtype=np.int64)
    if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
        raise BadShape(f"expected a nonempty square table, got shape {mul.shape}")
    n = mul.shape[0]
    if mul.min() < 0 or mul.max() >= n:
        raise BadShape(f"table entries must lie in 0..{n - 1}")
    ldiv = np.empty_like(mul)
    target = np.arange(n, dtype=np.int64)
    for x in range(n):
        row = mul[x]
        if len(np.unique(row)) != n:
            raise NotLeftQuasigroup(f"row {x} is not a permutation: {row.tolist()}")
        ldiv[x, row] = target
    mul.flags.writeable = False
    ldiv.flags.writeable = False
    return LeftQuasigroup(mul, ldiv)


def is_rack(Q):
    """Left distributivity: x*(y*z) == (x*y)*(x*z) for all x, y, z."""
    if "rack" not in Q._cache:
        Q._cache["rack"] = _kernels.ld_violation(Q.mul) < 0
    return Q._cache["rack"]


def is_quandle(Q):
    if "quandle" not in Q._cache:
        Q._cache["quandle"] = is_rack(Q) and bool(
            np.array_equal(np.diagonal(Q.mul), np.arange(Q.size))
        )
    return Q._cache["quandle"]


def is_idempotent(Q):
    return bool(np.array_equal(np.diagonal(Q.mul), np.arange(Q.size)))


def is_permutation_rack(Q):
    """True iff the operation ignores its left argument, i.e. all rows agree."""
    return bool(np.all(Q.mul == Q.mul[0]))


def is_projection(Q):
    """True iff x*y == y everywhere."""
    return bool(np.array_equal(Q.mul, np.tile(np.arange(Q.size), (Q.size, 1))))


# ----------------------------------------------------------- constructors

def _as_moduli(moduli):
    if isinstance(moduli, int):
        moduli = (moduli,)
    moduli = tuple(int(m) for m in moduli)
    if not moduli or any(m < 1 for m in moduli):
        raise BadShape(f"moduli must be positive integers, got {moduli}")
    return moduli


def _as_matrix(matrix, k):
    if isinstance(matrix, int):
        if k != 1:
            matrix = [[matrix if i == j else 0 for j in range(k)] for i in range(k)]
        else:
            matrix = [[matrix]]
    mat = np.asarray(matrix, dtype=np.int64)
    if mat.shape != (k, k):
        raise BadShape(f"matrix must be {k}x{k}, got shape {mat.shape}")
    return mat


def _mixed_radix(moduli):
    """Enumerate coordinate tuples in lexicographic order (index = mixed radix)."""
    return list(itertools.product(*[range(m) for m in moduli]))


def affine(moduli, matrix):
    """Affine structure over Z_m1 x ... x Z_mk: x*y = f(y) + (1-f)(x).

    f is the linear map given by the integer matrix, reduced coordinatewise;
    it must be an automorphism of the group.
    """
    moduli = _as_moduli(moduli)
    k = len(moduli)
    mat = _as_matrix(matrix, k)
    coords = _mixed_radix(moduli)
    index = {c: i for i, c in enumerate(coords)}
    n = len(coords)

    def apply_f(c):
        return tuple(int(sum(mat[i, j] * c[j] for j in range(k))) % moduli[i] for i in range(k))

    f_img = [apply_f(c) for c in coords]
    if len(set(f_img)) != n:
        raise NotAutomorphism("matrix does not act bijectively")
    for a in coords:
        for b in coords:
            ab = tuple((a[i] + b[i]) % moduli[i] for i in range(k))
            fa, fb = f_img[index[a]], f_img[index[b]]
            fafb = tuple((fa[i] + fb[i]) % moduli[i] for i in range(k))
            if f_img[index[ab]] != fafb:
                raise NotAutomorphism("matrix is not additive on the group")

    mul = np.empty((n, n), dtype=np.int64)
    for xi, x in enumerate(coords):
        for yi, y in enumerate(coords):
            fy = f_img[yi]
            fx = f_img[xi]
            val = tuple((fy[i] + x[i] - fx[i]) % moduli[i] for i in range(k))
            mul[xi, yi] = index[val]
    return from_table(mul)


def projection_quandle(n):
    return from_table(np.tile(np.arange(n), (n, 1)))


def cyclic_rack(n):
    """Permutation rack whose single translation is the n-cycle y -> y+1."""
    row = (np.arange(n) + 1) % n
    return from_table(np.tile(row, (n, 1)))


def permutation_rack(f):
    """Permutation rack with translation f (an image list)."""
    row = np.asarray(f, dtype=np.int64)
    return from_table(np.tile(row, (len(row), 1)))


def direct_product(Q, R):
    """Componentwise product on pairs flattened as (x, y) -> x*|R| + y."""
    m = R.size
    n = Q.size * m
    mul = np.empty((n, n), dtype=np.int64)
    for a in range(Q.size):
        for b in range(m):
            for c in range(Q.size):
                for d in range(m):
                    mul[a * m + b, c * m + d] = Q.mul[a, c] * m + R.mul[b, d]
    return from_table(mul)


# ----------------------------------------------------------- explicit groups

class GroupTable:
    """A finite group given by its full multiplication table (cap 512)."""

    __slots__ = ("order", "table", "identity", "inverse")

    def __init__(self, table):
        tab = np.asarray(table, dtype=np.int64)
        if tab.ndim != 2 or tab.shape[0] != tab.shape[1] or tab.shape[0] == 0:
            raise BadShape(f"group table must be square, got shape {tab.shape}")
        k = tab.shape[0]
        if k > GROUP_TABLE_CAP:
            raise CapExceeded(f"group of order {k} exceeds cap {GROUP_TABLE_CAP}")
        if tab.min() < 0 or tab.max() >= k:
            raise BadShape("group table entries out of range")
        ident = None
        for e in range(k):
            if np.array_equal(tab[e], np.arange(k)) and np.array_equal(tab[:, e], np.arange(k)):
                ident = e
                break
        if ident is None:
            raise BadShape("group table has no identity element")
        for a in range(k):
            if not np.array_equal(tab[tab[a]], tab[a][tab]):
                raise BadShape("group table is not associative")
        inverse = np.empty(k, dtype=np.int64)
        for a in range(k):
            hits = np.nonzero(tab[a] == ident)[0]
            if hits.size != 1:
                raise BadShape(f"element {a} has no unique inverse")
            inverse[a] = hits[0]
        tab.flags.writeable = False
        self.order = k
        self.table = tab
        self.identity = ident
        self.inverse = inverse

    @classmethod
    def cyclic(cls, n):
        a = np.arange(n)
        return cls((a[:, None] + a[None, :]) % n)

    @classmethod
    def from_permgroup(cls, G):
        """Convert a PermGroup; returns (GroupTable, element list in table order)."""
        elements = list(G.elements)
        pos = {p.image: i for i, p in enumerate(elements)}
        k = len(elements)
        tab = np.empty((k, k), dtype=np.int64)
        for i, g in enumerate(elements):
            for j, h in enumerate(elements):
                tab[i, j] = pos[(g * h).image]
        return cls(tab), elements

    def is_subgroup(self, indices):
        members = set(int(i) for i in indices)
        if self.identity not in members:
            return False
        for a in members:
            if int(self.inverse[a]) not in members:
                return False
            for b in members:
                if int(self.table[a, b]) not in members:
                    return False
        return True

    def is_automorphism(self, perm):
        img = np.asarray(perm, dtype=np.int64)
        if sorted(img.tolist()) != list(range(self.order)):
            return False
        return bool(np.array_equal(img[self.table], self.table[np.ix_(img, img)]))


@dataclass(frozen=True)
class CosetQuandleSpec:
    """Data for a coset construction: aH * bH = a f(a^{-1} b) H.

    `aut` is an automorphism of `group` given as a permutation of element
    indices; `subgroup` is a set of element indices fixed pointwise by `aut`.
    """

    group: GroupTable
    aut: tuple
    subgroup: tuple


def coset_quandle(spec):
    """Build the coset structure for a CosetQuandleSpec."""
    G, f, H = spec.group, tuple(spec.aut), tuple(sorted(set(spec.subgroup)))
    if not G.is_automorphism(f):
        raise NotAutomorphism("aut is not an automorphism of the group")
    if not G.is_subgroup(H):
        raise BadShape("subgroup indices are not closed under the group operation")
    if any(f[h] != h for h in H):
        raise SubgroupNotFixed("subgroup is not fixed pointwise by aut")
    coset_of, reps = _left_cosets(G, H)
    n = len(reps)
    tab, inv = G.table, G.inverse
    mul = np.empty((n, n), dtype=np.int64)
    for i, a in enumerate(reps):
        ainv = inv[a]
        for j, b in enumerate(reps):
            mul[i, j] = coset_of[tab[a, f[tab[ainv, b]]]]
    return from_table(mul)


def _left_cosets(G, H):
    """Left cosets aH ordered by minimal member; returns (coset id per element, reps)."""
    k = G.order
    coset_of = [-1] * k
    reps = []
    for a in range(k):
        if coset_of[a] >= 0:
            continue
        members = sorted(int(G.table[a, h]) for h in H)
        cid = len(reps)
        reps.append(members[0])
        for m in members:
            coset_of[m] = cid
    return coset_of, reps


def coset_cover_pair(group, aut, inner, outer):
    """Coset structures for nested subgroups inner <= outer, with the projection
    between them (a covering map when the construction hypotheses hold)."""
    inner = tuple(sorted(set(inner)))
    outer = tuple(sorted(set(outer)))
    if not set(inner) <= set(outer):
        raise BadShape("inner subgroup is not contained in the outer one")
    q_inner = coset_quandle(CosetQuandleSpec(group, tuple(aut), inner))
    q_outer = coset_quandle(CosetQuandleSpec(group, tuple(aut), outer))
    coset_in, reps_in = _left_cosets(group, inner)
    coset_out, _ = _left_cosets(group, outer)
    proj = [coset_out[r] for r in reps_in]
    return q_inner, q_outer, proj


# ----------------------------------------------------------- isomorphisms

def _invariant_vector(Q):
    diag = np.diagonal(Q.mul)
    fix_counts = [int(np.sum(Q.mul[:, x] == x)) for x in range(Q.size)]
    invs = []
    for x in range(Q.size):
        invs.append(
            (
                Permutation(Q.mul[x]).cycle_type(),
                bool(diag[x] == x),
                fix_counts[x],
            )
        )
    return invs


def isomorphisms(Q, R, cap=ISO_CAP, first_only=False):
    """All bijections g with g(x*y) = g(x)*g(y), as image tuples."""
    if Q.size != R.size:
        return []
    n = Q.size
    if n > cap:
        raise CapExceeded(f"isomorphism search on {n} elements exceeds cap {cap}")
    inv_q = _invariant_vector(Q)
    inv_r = _invariant_vector(R)
    candidates = [[y for y in range(n) if inv_r[y] == inv_q[x]] for x in range(n)]
    if any(not c for c in candidates):
        return []
    order = sorted(range(n), key=lambda x: (len(candidates[x]), x))
    mq, mr = Q.mul, R.mul
    sigma = [-1] * n
    tau = [-1] * n
    assigned = []
    found = []

    def attempt(a, b, trail):
        """Assign sigma[a] = b with propagation; append to trail; False on conflict."""
        stack = [(a, b)]
        while stack:
            x, y = stack.pop()
            if sigma[x] >= 0:
                if sigma[x] != y:
                    return False
                continue
            if tau[y] >= 0 or inv_q[x] != inv_r[y]:
                return False
            sigma[x] = y
            tau[y] = x
            trail.append(x)
            assigned.append(x)
            for u in list(assigned):
                for s, t in ((u, x), (x, u), (x, x)):
                    r_val = mq[s, t]
                    target = mr[sigma[s], sigma[t]]
                    if sigma[r_val] >= 0:
                        if sigma[r_val] != target:
                            return False
                    elif tau[target] >= 0:
                        return False
                    else:
                        stack.append((r_val, target))
        return True

    def undo(trail):
        for x in trail:
            tau[sigma[x]] = -1
            sigma[x] = -1
            assigned.remove(x)

    def search(k):
        while k < n and sigma[order[k]] >= 0:
            k += 1
        if k == n:
            found.append(tuple(sigma))
            return first_only
        x = order[k]
        for y in candidates[x]:
            if tau[y] >= 0:
                continue
            trail = []
            if attempt(x, y, trail) and search(k + 1):
                return True
            undo(trail)
        return False

    search(0)
    return found


def is_isomorphic(Q, R, cap=ISO_CAP):
    return bool(isomorphisms(Q, R, cap=cap, first_only=True))


def automorphisms(Q, cap=ISO_CAP):
    """The automorphism group as a PermGroup."""
    maps = isomorphisms(Q, Q, cap=cap)
    return PermGroup.from_elements([Permutation(m) for m in maps], degree=Q.size)


# ----------------------------------------------------------- fixtures

def q3():
    """Three-element quandle with one transposition row; not connected."""
    return from_table([[0, 2, 1], [0, 1, 2], [0, 1, 2]])


def r3():
    """Dihedral quandle on Z_3 (affine with f = -1); connected and faithful."""
    return affine(3, -1)


def q4():
    """The connected quandle of order 4: affine over Z_2^2 with a matrix of order 3."""
    return affine((2, 2), [[0, 1], [1, 1]])


def r5():
    """Dihedral quandle on Z_5."""
    return affine(5, -1)


_FIXED = {"Q3": q3, "R3": r3, "Q4": q4, "R5": r5}
_PATTERN = re.compile(r"^([PC])_?(\d+)$")


def fixture(name):
    """Resolve a fixture name: Q3, R3, Q4, R5, P<n> (projection), C<n> (cyclic)."""
    if name in _FIXED:
        return _FIXED[name]()
    m = _PATTERN.match(name)
    if m:
        n = int(m.group(2))
        if n >= 1:
            return projection_quandle(n) if m.group(1) == "P" else cyclic_rack(n)
    raise BadShape(f"unknown fixture name {name!r}")


# ----------------------------------------------------------- serialization

def table_to_json(Q):
    return {"size": int(Q.size), "table": Q.mul.tolist()}


def table_from_json(obj):
    if not isinstance(obj, dict) or "size" not in obj or "table" not in obj:
        raise BadShape("expected an object with 'size' and 'table'")
    Q = from_table(obj["table"])
    if Q.size != int(obj["size"]):
        raise BadShape(f"declared size {obj['size']} does not match table of {Q.size}")
    return Q


def parse_table_text(text):
    """Plain-text format: first line n, then n whitespace-separated rows."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise BadShape("empty table file")
    try:
        n = int(lines[0].strip())
    except ValueError:
        raise BadShape(f"first line must be the size, got {lines[0]!r}") from None
    if len(lines) != n + 1:
        raise BadShape(f"expected {n} rows after the size line, got {len(lines) - 1}")
    rows = []
    for ln in lines[1:]:
        parts = ln.split()
        if len(parts) != n:
            raise BadShape(f"row {ln!r} does not have {n} entries")
        rows.append([int(p) for p in parts])
    return from_table(rows)


def format_table_text(Q):
    body = "\n".join(" ".join(str(int(v)) for v in row) for row in Q.mul)
    return f"{Q.size}\n{body}\n"


def loads_table(text):
    """Parse either the JSON or the plain-text table format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return table_from_json(json.loads(text))
    return parse_table_text(text)
