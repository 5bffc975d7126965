"""Covering extensions by constant cocycles.

A constant cocycle over a base of size n assigns a permutation theta[x, y]
of a fiber {0..m-1} to every pair of base elements; the extension lives on
pairs (x, a) flattened as x*m + a and multiplies by

    (x, a) * (y, b) = (x * y, theta[x, y](b)).

Abelian cocycles take values in Z_m1 x ... x Z_mk and act by translation;
they share the extension code path by expanding to fiber permutations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from . import _kernels, congruence, core
from .errors import (
    BadShape,
    CapExceeded,
    FiberMismatch,
    NotACongruence,
    NotHomomorphism,
    NotSurjective,
    NotUnderCayley,
    NotUniform,
    CriterionNotApplicable,
)
from .partition import Partition
from .permgroup import Permutation

GAMMA_DEGREE_CAP = 5
SPACE_CAP = 10**6


class ConstantCocycle:
    """n x n matrix of fiber permutations, possibly of abelian origin."""

    __slots__ = ("base_size", "kind", "moduli", "degree", "values", "_perms")

    def __init__(self, kind, values, moduli=None):
        if kind not in ("perm", "abelian"):
            raise BadShape(f"unknown cocycle kind {kind!r}")
        self.kind = kind
        if kind == "perm":
            perms = np.asarray(values, dtype=np.int64)
            if perms.ndim != 3 or perms.shape[0] != perms.shape[1]:
                raise BadShape(f"expected an (n, n, m) value array, got {perms.shape}")
            n, m = perms.shape[0], perms.shape[2]
            ref = np.arange(m)
            for x in range(n):
                for y in range(n):
                    if not np.array_equal(np.sort(perms[x, y]), ref):
                        raise BadShape(f"theta[{x},{y}] is not a permutation of 0..{m - 1}")
            self.moduli = None
            self.base_size, self.degree = n, m
            self.values = perms
            self._perms = perms
        else:
            self.moduli = core._as_moduli(moduli)
            vals = np.asarray(values, dtype=np.int64)
            if vals.ndim == 2 and len(self.moduli) == 1:
                vals = vals[:, :, None]
            k = len(self.moduli)
            if vals.ndim != 3 or vals.shape[0] != vals.shape[1] or vals.shape[2] != k:
                raise BadShape(f"expected an (n, n, {k}) value array, got {vals.shape}")
            vals = vals % np.asarray(self.moduli, dtype=np.int64)
            self.base_size = vals.shape[0]
            self.degree = int(np.prod(self.moduli))
            self.values = vals
            self._perms = None
        self.values.setflags(write=False)

    # -- constructors

    @classmethod
    def from_perms(cls, values):
        return cls("perm", values)

    @classmethod
    def abelian(cls, values, moduli):
        return cls("abelian", values, moduli=moduli)

    @classmethod
    def trivial(cls, n, fiber):
        """The cocycle 1: every theta[x, y] the identity (abelian: zero)."""
        if isinstance(fiber, int):
            eye = np.broadcast_to(np.arange(fiber, dtype=np.int64), (n, n, fiber))
            return cls("perm", eye.copy())
        moduli = core._as_moduli(fiber)
        return cls("abelian", np.zeros((n, n, len(moduli)), dtype=np.int64), moduli=moduli)

    # -- views

    @property
    def perms(self):
        """The (n, n, m) array of fiber permutations."""
        if self._perms is None:
            moduli = np.asarray(self.moduli, dtype=np.int64)
            tuples = np.asarray(core._mixed_radix(self.moduli), dtype=np.int64)
            weights = np.ones(len(self.moduli), dtype=np.int64)
            for i in range(len(self.moduli) - 2, -1, -1):
                weights[i] = weights[i + 1] * self.moduli[i + 1]
            shifted = (tuples[None, None, :, :] + self.values[:, :, None, :]) % moduli
            perms = shifted @ weights
            perms.setflags(write=False)
            self._perms = perms
        return self._perms

    def perm(self, x, y):
        return Permutation(self.perms[x, y])

    def compose_with_aut(self, g):
        """The cocycle (x, y) -> theta[g(x), g(y)]."""
        img = np.asarray(g.image if isinstance(g, Permutation) else g, dtype=np.int64)
        if img.shape != (self.base_size,):
            raise BadShape("automorphism degree does not match the base size")
        vals = self.values[np.ix_(img, img)]
        if self.kind == "perm":
            return ConstantCocycle("perm", vals)
        return ConstantCocycle("abelian", vals, moduli=self.moduli)

    def __eq__(self, other):
        if not isinstance(other, ConstantCocycle):
            return NotImplemented
        return self.degree == other.degree and np.array_equal(self.perms, other.perms)

    def __hash__(self):
        return hash((self.degree, self.perms.tobytes()))

    def __repr__(self):
        fib = f"Z{'x'.join(map(str, self.moduli))}" if self.kind == "abelian" else f"Sym({self.degree})"
        return f"ConstantCocycle(base={self.base_size}, fiber={fib})"


@dataclass(frozen=True)
class CoverStructure:
    base: core.LeftQuasigroup
    cocycle: ConstantCocycle
    total: core.LeftQuasigroup
    projection: Partition


def extend(Q, theta):
    """The covering extension of Q by theta, on pairs flattened as x*m + a."""
    if theta.base_size != Q.size:
        raise FiberMismatch(f"cocycle base size {theta.base_size} != structure size {Q.size}")
    n, m = Q.size, theta.degree
    block = Q.mul[:, :, None] * m + theta.perms          # (n, n, m): value at ((x, a), (y, b)) for any a
    mul = np.broadcast_to(block[:, None, :, :], (n, m, n, m)).reshape(n * m, n * m)
    total = core.from_table(mul)
    proj = Partition(np.repeat(np.arange(n), m))
    return CoverStructure(base=Q, cocycle=theta, total=total, projection=proj)


def is_rack_cocycle(Q, theta):
    """theta[x, y*z] . theta[y, z] == theta[x*y, x*z] . theta[x, z] for all triples."""
    if theta.base_size != Q.size:
        raise FiberMismatch(f"cocycle base size {theta.base_size} != structure size {Q.size}")
    return bool(_kernels.rack_cocycle_ok(Q.mul, theta.perms))


def is_quandle_cocycle(Q, theta):
    if not is_rack_cocycle(Q, theta):
        return False
    diag = theta.perms[np.arange(Q.size), np.arange(Q.size)]
    return bool(np.array_equal(diag, np.broadcast_to(np.arange(theta.degree), diag.shape)))


def is_covering_hom(E, R, f):
    """True iff f: E -> R is a surjective homomorphism with ker f below the
    Cayley kernel of E.  Raises on non-surjective or non-homomorphic maps;
    returns False only for genuine homomorphisms that fail the kernel test.
    """
    f = np.asarray(f, dtype=np.int64)
    if f.shape != (E.size,) or f.min() < 0 or f.max() >= R.size:
        raise BadShape("map must assign an element of the codomain to each element")
    if len(np.unique(f)) != R.size:
        raise NotSurjective("map does not reach every element of the codomain")
    if not np.array_equal(f[E.mul], R.mul[np.ix_(f, f)]):
        raise NotHomomorphism("map does not commute with *")
    lam, _ = congruence.cayley_kernel(E)
    return Partition(f).refines(lam)


def extract_cocycle(E, alpha):
    """Rewrite E as a covering extension of E/alpha.

    Returns (theta, iso) where theta is the cocycle built from the
    order-preserving block bijections and iso maps each element of E to its
    flat index in extend(E/alpha, theta).
    """
    if not alpha.is_uniform():
        raise NotUniform("blocks have unequal sizes")
    lam, _ = congruence.cayley_kernel(E)
    if not alpha.refines(lam):
        raise NotUnderCayley("partition is not below the Cayley kernel")
    if not congruence.is_congruence(E, alpha):
        raise NotACongruence("partition is not a congruence")
    blocks = alpha.blocks()
    k, m = len(blocks), len(blocks[0])
    pos = np.empty(E.size, dtype=np.int64)          # h_[x]: rank of x inside its block
    for block in blocks:
        for r, x in enumerate(block):
            pos[x] = r
    reps = [b[0] for b in blocks]
    ids = np.asarray(alpha.block_id)
    perms = np.empty((k, k, m), dtype=np.int64)
    for i, x in enumerate(reps):
        for j, block in enumerate(blocks):
            perms[i, j] = pos[E.mul[x, block]]
    theta = ConstantCocycle.from_perms(perms)
    iso = [int(ids[x]) * m + int(pos[x]) for x in range(E.size)]
    return theta, iso


def are_cohomologous(Q, theta, eps, cap=GAMMA_DEGREE_CAP):
    """Search gamma: Q -> Sym(fiber) with eps[x,y] . gamma_y = gamma_{x*y} . theta[x,y].

    Returns the witness as a list of fiber permutations, or None.  The search
    roots one enumeration per orbit of Q under y -> x*y and propagates along
    a spanning tree, so the cost is |Sym(m)| per orbit, not per element.
    """
    if theta.base_size != Q.size or eps.base_size != Q.size:
        raise FiberMismatch("cocycle base size does not match the structure")
    if theta.degree != eps.degree:
        raise FiberMismatch(f"fiber degrees differ: {theta.degree} != {eps.degree}")
    m = theta.degree
    if m > cap:
        raise CapExceeded(f"fiber degree {m} exceeds the witness-search cap {cap}")
    n = Q.size
    T, E = theta.perms, eps.perms
    Tinv = np.empty_like(T)
    idx = np.arange(m)
    for x in range(n):
        for y in range(n):
            Tinv[x, y, T[x, y]] = idx
    orbits = congruence.orbit_partition(Q).blocks()
    gamma = np.empty((n, m), dtype=np.int64)
    for block in orbits:
        root = block[0]
        members = set(block)
        # spanning tree of forward edges y -> x*y, rooted at the orbit minimum
        tree = []
        seen = {root}
        frontier = [root]
        while frontier:
            nxt = []
            for y in frontier:
                for x in range(n):
                    z = int(Q.mul[x, y])
                    if z not in seen:
                        seen.add(z)
                        tree.append((x, y, z))
                        nxt.append(z)
            frontier = nxt
        found = False
        for cand in itertools.permutations(range(m)):
            gamma[root] = cand
            for x, y, z in tree:
                gamma[z] = E[x, y][gamma[y]][Tinv[x, y]]      # eps . gamma_y . theta^-1
            if all(
                np.array_equal(E[x, y][gamma[y]], gamma[Q.mul[x, y]][T[x, y]])
                for x in range(n)
                for y in members
            ):
                found = True
                break
        if not found:
            return None
    return [Permutation(row) for row in gamma]


def isomorphic_as_covers(Q, theta, eps, mode="cayley"):
    """Search (g, gamma) with g in Aut(Q) and theta cohomologous to eps.(g x g).

    A witness yields the isomorphism (x, a) -> (g(x), gamma_x(a)) between the
    two extensions.  Completeness needs the extension kernels to coincide with
    the stated canonical congruence (Cayley kernel, or the least idempotent
    kernel), which is verified up front.
    """
    if mode not in ("cayley", "ip"):
        raise BadShape(f"unknown mode {mode!r}")
    ker = extend(Q, theta).projection
    for th in (theta, eps):
        tot = extend(Q, th).total
        marker = congruence.cayley_kernel(tot)[0] if mode == "cayley" else congruence.ip(tot)
        if marker != ker:
            raise CriterionNotApplicable(
                f"the {mode} kernel of an extension differs from the projection kernel"
            )
    for g in core.automorphisms(Q).elements:
        gamma = are_cohomologous(Q, theta, eps.compose_with_aut(g))
        if gamma is not None:
            return g, gamma
    return None


# ------------------------------------------------- abelian cocycle spaces

def _constraint_rows(Q, quandle):
    """Integer constraint matrix for abelian cocycle values t[x, y] (flattened)."""
    n = Q.size
    mul = Q.mul
    rows = []
    for x in range(n):
        for y in range(n):
            for z in range(n):
                r = [0] * (n * n)
                r[x * n + mul[y, z]] += 1
                r[y * n + z] += 1
                r[mul[x, y] * n + mul[x, z]] -= 1
                r[x * n + z] -= 1
                if any(r):
                    rows.append(r)
    if quandle:
        for x in range(n):
            r = [0] * (n * n)
            r[x * n + x] = 1
            rows.append(r)
    return np.asarray(rows, dtype=np.int64) if rows else np.zeros((0, n * n), dtype=np.int64)


def _nullspace_mod_prime(A, p):
    """Basis of the kernel of A over Z_p, via row reduction."""
    A = A % p
    rows, cols = A.shape
    A = A.copy()
    pivots = []
    r = 0
    for c in range(cols):
        pivot = next((i for i in range(r, rows) if A[i, c] % p), None)
        if pivot is None:
            continue
        A[[r, pivot]] = A[[pivot, r]]
        inv = pow(int(A[r, c]), -1, p)
        A[r] = (A[r] * inv) % p
        for i in range(rows):
            if i != r and A[i, c]:
                A[i] = (A[i] - A[i, c] * A[r]) % p
        pivots.append(c)
        r += 1
        if r == rows:
            break
    free = [c for c in range(cols) if c not in pivots]
    basis = []
    for f in free:
        v = np.zeros(cols, dtype=np.int64)
        v[f] = 1
        for i, c in enumerate(pivots):
            v[c] = (-A[i, f]) % p
        basis.append(v)
    return basis


def _solutions_mod(Q, modulus, quandle):
    """All value matrices t in Z_modulus^(n x n) satisfying the cocycle relations."""
    n = Q.size
    A = _constraint_rows(Q, quandle)
    if _is_prime(modulus):
        basis = _nullspace_mod_prime(A, modulus)
        d = len(basis)
        if modulus**d > SPACE_CAP:
            raise CapExceeded(f"{modulus}^{d} solutions exceed cap {SPACE_CAP}")
        out = []
        for coeffs in itertools.product(range(modulus), repeat=d):
            v = np.zeros(n * n, dtype=np.int64)
            for c, b in zip(coeffs, basis):
                v = (v + c * b) % modulus
            out.append(v.reshape(n, n))
        return _dedup_sorted(out)
    total = modulus ** (n * n)
    if total > SPACE_CAP:
        raise CapExceeded(f"{total} candidates over Z_{modulus} exceed cap {SPACE_CAP}")
    grids = np.indices((modulus,) * (n * n)).reshape(n * n, -1).T  # every candidate vector
    ok = np.all(grids @ A.T % modulus == 0, axis=1)
    return [g.reshape(n, n) for g in grids[ok]]


def _dedup_sorted(mats):
    seen = {}
    for mat in mats:
        seen.setdefault(tuple(mat.ravel().tolist()), mat)
    return [seen[k] for k in sorted(seen)]


def _is_prime(m):
    return m >= 2 and all(m % d for d in range(2, int(m**0.5) + 1))


def abelian_cocycle_space(Q, moduli, quandle=True):
    """Every valid abelian cocycle over Z_m1 x ... x Z_mk, in lexicographic
    order of the flattened value matrix.  The relations are linear, so each
    coordinate is solved independently (prime moduli by nullspace basis,
    composite ones by a capped sweep) and the components recombined.
    """
    moduli = core._as_moduli(moduli)
    per_component = [_solutions_mod(Q, m, quandle) for m in moduli]
    out = []
    for combo in itertools.product(*per_component):
        vals = np.stack(combo, axis=-1)
        out.append(ConstantCocycle.abelian(vals, moduli))
    out.sort(key=lambda th: tuple(th.values.ravel().tolist()))
    return out


# ------------------------------------------------------- file round-trips

def cocycle_to_json(theta, base=None):
    obj = {}
    if base is not None:
        obj["base"] = core.table_to_json(base)
    if theta.kind == "perm":
        obj["fiber"] = {"kind": "perm", "degree": int(theta.degree)}
    else:
        obj["fiber"] = {"kind": "abelian", "moduli": [int(m) for m in theta.moduli]}
    obj["values"] = theta.values.tolist()
    return obj


def cocycle_from_json(obj, base_loader=None):
    """Parse the cocycle file format; returns (cocycle, base or None).

    "base" may be an inline table object or a string handed to base_loader
    (the CLI resolves it as a path relative to the cocycle file).
    """
    if not isinstance(obj, dict) or "fiber" not in obj or "values" not in obj:
        raise BadShape("expected an object with 'fiber' and 'values'")
    fiber = obj["fiber"]
    if not isinstance(fiber, dict) or fiber.get("kind") not in ("perm", "abelian"):
        raise BadShape("fiber must declare kind 'perm' or 'abelian'")
    if fiber["kind"] == "perm":
        theta = ConstantCocycle.from_perms(np.asarray(obj["values"], dtype=np.int64))
        if theta.degree != int(fiber.get("degree", theta.degree)):
            raise BadShape("declared fiber degree does not match the values")
    else:
        theta = ConstantCocycle.abelian(np.asarray(obj["values"], dtype=np.int64), fiber["moduli"])
    base = obj.get("base")
    if base is None:
        return theta, None
    if isinstance(base, str):
        if base_loader is None:
            raise BadShape("cocycle file references an external base table")
        return theta, base_loader(base)
    return theta, core.table_from_json(base)
