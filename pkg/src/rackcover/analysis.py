"""Structural verdicts: connectedness, faithfulness, principality,
strongly abelian / central / normal congruences, solvability levels,
nilpotency, abelian-cover recognition, and an aggregate report.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import _kernels, adjoint, congruence, core, cover, terms
from .errors import CapExceeded, NotACongruence, PreconditionFailed
from .partition import Partition
from .permgroup import (
    PermGroup,
    Permutation,
    block_stabilizer,
    dis,
    dis_rel,
    is_normal_in,
    lmlt,
)

LEVEL_CAP = 16
ORACLE_SIZE_CAP = 6
ORACLE_WORK_CAP = 10**7


def is_connected(Q):
    """True iff the translations act transitively."""
    return congruence.orbit_partition(Q).is_full()


def is_faithful(Q):
    """True iff distinct elements have distinct translations."""
    return congruence.cayley_kernel(Q)[0].is_identity()


def is_principal(Q):
    """True iff the displacement group acts regularly."""
    return dis(Q).is_regular()


def is_homogeneous(Q, cap=core.ISO_CAP):
    """True iff the automorphism group acts transitively."""
    return core.automorphisms(Q, cap=cap).is_transitive()


def is_medial(Q):
    return terms.holds(Q, terms.builtin("medial"))


# ------------------------------------------------------ strongly abelian

def _require_congruence(Q, alpha):
    if not congruence.is_congruence(Q, alpha):
        raise NotACongruence("partition is not a congruence")


def is_strongly_abelian(Q, alpha):
    """A congruence is strongly abelian exactly when it sits below the
    Cayley kernel."""
    _require_congruence(Q, alpha)
    return alpha.refines(congruence.cayley_kernel(Q)[0])


def strongly_abelian_oracle(Q, alpha, depth=3):
    """Check the raw term condition: for every term t(x, y1..yk) and all
    u alpha v, a_i alpha b_i alpha c_i,

        t(u, a) = t(v, b)  implies  t(u, c) = t(v, c).

    The term pool contains every term with at most `depth` operations, one
    fresh y-slot per non-x leaf, deduplicated by the function it induces.
    """
    n = Q.size
    if n > ORACLE_SIZE_CAP:
        raise CapExceeded(f"oracle limited to {ORACLE_SIZE_CAP} elements, got {n}")
    if depth > 4:
        raise CapExceeded("oracle limited to terms with at most 4 operations")
    _require_congruence(Q, alpha)

    # terms as (k, table) with table of shape (n,) * (1 + k): axis 0 is x
    x_leaf = (0, np.arange(n, dtype=np.int64))
    y_leaf = (1, np.broadcast_to(np.arange(n, dtype=np.int64), (n, n)))
    pool = {0: [x_leaf, y_leaf]}
    seen = {_term_key(*x_leaf), _term_key(*y_leaf)}
    for ops in range(1, depth + 1):
        batch = []
        for left_ops in range(ops):
            for (k1, t1), (k2, t2) in itertools.product(pool[left_ops], pool[ops - 1 - left_ops]):
                a = t1.reshape(t1.shape + (1,) * k2)
                b = t2.reshape((n,) + (1,) * k1 + t2.shape[1:])
                for table in (Q.mul[a, b], Q.ldiv[a, b]):
                    key = _term_key(k1 + k2, table)
                    if key not in seen:
                        seen.add(key)
                        batch.append((k1 + k2, table))
        pool[ops] = batch

    blocks = [np.asarray(b) for b in alpha.blocks()]
    pairs = [(u, v) for b in alpha.blocks() for u in b for v in b if u != v]
    for bucket in pool.values():
        for k, table in bucket:
            for u, v in pairs:
                f, g = table[u], table[v]
                for pattern in itertools.product(blocks, repeat=k):
                    sf = f[np.ix_(*pattern)] if k else f
                    sg = g[np.ix_(*pattern)] if k else g
                    hyp = bool(np.intersect1d(np.ravel(sf), np.ravel(sg)).size)
                    if hyp and not np.array_equal(sf, sg):
                        return False
    return True


def _term_key(k, table):
    return (k, table.tobytes())


# --------------------------------------------------------------- central

def is_central(Q, alpha):
    """Central: the relative displacement group sits in the center of the
    displacement group, and alpha lies below the same-stabilizer relation."""
    _require_congruence(Q, alpha)
    D = dis(Q)
    Z = D.center()
    if not all(g in Z for g in dis_rel(Q, alpha).generators):
        return False
    return alpha.refines(congruence.sigma(Q))


def central_cover_criterion(Q, alpha):
    """For a connected quandle and alpha below the Cayley kernel: central
    iff every point stabilizer of Dis is normal in its block stabilizer."""
    if not Q.is_quandle() or not is_connected(Q):
        raise PreconditionFailed("criterion needs a connected quandle")
    _require_congruence(Q, alpha)
    if not alpha.refines(congruence.cayley_kernel(Q)[0]):
        raise PreconditionFailed("criterion needs a congruence below the Cayley kernel")
    D = dis(Q)
    for a in range(Q.size):
        stab = D.stabilizer(a)
        blk = block_stabilizer(Q, alpha, a, which="dis")
        if not is_normal_in(stab, blk):
            return False
    return True


# ------------------------------------------------------ normal extension

def is_normal_extension(Q, alpha):
    """Normal extension of the quotient: strongly abelian and central."""
    if not Q.is_quandle():
        raise PreconditionFailed("normal extensions are defined for quandles")
    return is_strongly_abelian(Q, alpha) and is_central(Q, alpha)


def normal_extension_oracle(Q, alpha, word_len=4, cap=ORACLE_WORK_CAP):
    """Brute-force the translation-word characterization: for pointwise
    alpha-related words, L_{a_1}^{e_1}..L_{a_m}^{e_m}(a) = a must imply the
    same for the replacements.  Words run over signed translation sequences
    of length <= word_len, which covers every exponent vector with
    |k_1| + ... + |k_m| <= word_len.
    """
    _require_congruence(Q, alpha)
    n = Q.size
    work = sum((2 * n) ** m for m in range(1, word_len + 1)) * n
    if work > cap:
        raise CapExceeded(f"{work} word evaluations exceed cap {cap}")
    rows = {1: Q.mul, -1: Q.ldiv}
    blocks = [list(b) for b in alpha.blocks()]
    nb = len(blocks)
    for m in range(1, word_len + 1):
        for shape in itertools.product(range(2 * nb), repeat=m):
            factors = [(blocks[s // 2], 1 if s % 2 == 0 else -1) for s in shape]
            for last in blocks:
                verdict = None
                for choice in itertools.product(*[b for b, _ in factors]):
                    signs = [s for _, s in factors]
                    for x in last:
                        y = x
                        for c, s in zip(reversed(choice), reversed(signs)):
                            y = int(rows[s][c, y])
                        fixed = y == x
                        if verdict is None:
                            verdict = fixed
                        elif verdict != fixed:
                            return False
    return True


# ---------------------------------------------------------------- levels

class LevelExceeded:
    """Distinguished 'no finite level within the cap' value.  Instances
    compare equal to each other regardless of cap or reason, never to ints."""

    __slots__ = ("cap", "reason")

    def __init__(self, cap, reason="cap"):
        self.cap = cap
        self.reason = reason

    def __eq__(self, other):
        return isinstance(other, LevelExceeded)

    def __hash__(self):
        return hash(LevelExceeded)

    def __repr__(self):
        return f"LevelExceeded(cap={self.cap}, reason={self.reason!r})"


class Levels(NamedTuple):
    multipermutation: object
    reductivity: object
    strongly_solvable: object


def _multipermutation_level(Q, cap):
    level = 0
    while Q.size > 1:
        lam, ok = congruence.cayley_kernel(Q)
        if not ok:
            raise NotACongruence("Cayley kernel of an iterated retract is no congruence")
        if lam.is_identity():
            return LevelExceeded(cap, "retract stabilized above one element")
        Q, _ = congruence.quotient(Q, lam)
        level += 1
        if level > cap:
            return LevelExceeded(cap)
    return level


def _reductivity_level(Q, cap):
    """Least k with every composite of k right translations constant; the
    composite sets cycle when no such k exists, which is detected exactly."""
    n = Q.size
    if n == 1:
        return 0
    maps = {tuple(int(Q.mul[u, x]) for u in range(n)) for x in range(n)}
    seen = set()
    level = 1
    while True:
        if all(len(set(f)) == 1 for f in maps):
            return level
        key = frozenset(maps)
        if key in seen or level > cap:
            return LevelExceeded(cap, "composite right translations cycle")
        seen.add(key)
        maps = {tuple(int(Q.mul[f[u], x]) for u in range(n)) for f in maps for x in range(n)}
        level += 1


def _strongly_solvable_length(Q, cap):
    """Greedy chain: repeatedly pull the quotient's Cayley kernel back along
    the projection; each step is strongly abelian over the previous one."""
    alpha = Partition.identity(Q.size)
    length = 0
    while not alpha.is_full():
        quo, proj = congruence.quotient(Q, alpha)
        lam, _ = congruence.cayley_kernel(quo)
        if lam.is_identity():
            return LevelExceeded(cap, "chain stabilized below the full congruence")
        lifted = [lam.block_id[proj[x]] for x in range(Q.size)]
        alpha = Partition(lifted)
        length += 1
        if length > cap:
            return LevelExceeded(cap)
    return length


def levels(Q, cap=LEVEL_CAP):
    """Multipermutation level, reductivity level, strongly solvable length;
    the three agree on racks, which is asserted."""
    if not Q.is_rack():
        raise PreconditionFailed("levels are defined for racks")
    out = Levels(
        multipermutation=_multipermutation_level(Q, cap),
        reductivity=_reductivity_level(Q, cap),
        strongly_solvable=_strongly_solvable_length(Q, cap),
    )
    assert out.multipermutation == out.reductivity == out.strongly_solvable, out
    return out


def nilpotency(Q):
    """(is Dis(Q) nilpotent, its class or None)."""
    return dis(Q).is_nilpotent()


# -------------------------------------------------------- abelian covers

def is_abelian_cover(Q, alpha, method="aut_subgroup"):
    """Is Q (isomorphic to) an abelian covering extension of Q/alpha?

    aut_subgroup searches for an abelian subgroup of Aut(Q) acting regularly
    on every block; block_stabilizer (connected Q only) checks that the
    restriction of each block stabilizer of LMlt(Q) to its block is abelian.
    """
    _require_congruence(Q, alpha)
    if not alpha.refines(congruence.cayley_kernel(Q)[0]):
        raise PreconditionFailed("the congruence must lie below the Cayley kernel")
    if method == "aut_subgroup":
        if not alpha.is_uniform():
            return False
        m = len(alpha.blocks()[0])
        if m == 1:
            return True
        aut = core.automorphisms(Q)
        for H in aut.subgroups(max_order=m):
            if (
                H.order == m
                and H.is_abelian()
                and H.is_semiregular()
                and H.orbits() == alpha
            ):
                return True
        return False
    if method == "block_stabilizer":
        if not is_connected(Q):
            raise PreconditionFailed("the block-stabilizer test needs a connected structure")
        for block in alpha.blocks():
            rank = {x: i for i, x in enumerate(block)}
            stab = block_stabilizer(Q, alpha, block[0], which="lmlt")
            restricted = {tuple(rank[g(x)] for x in block) for g in stab}
            if not PermGroup.from_elements([Permutation(r) for r in restricted]).is_abelian():
                return False
        return True
    raise PreconditionFailed(f"unknown method {method!r}")


# ------------------------------------------------------------- catalogs

def all_racks(n, cap=4):
    """Every rack on {0..n-1}, in lexicographic table order, by filtering
    all row tuples of permutations through left distributivity."""
    if n > cap:
        raise CapExceeded(f"rack catalog limited to size {cap}, got {n}")
    perms = np.asarray(sorted(itertools.permutations(range(n))), dtype=np.int64)
    mask = _kernels.rack_table_mask(perms, n)
    p = len(perms)
    out = []
    for t in np.nonzero(mask)[0]:
        digits = []
        rem = int(t)
        for _ in range(n):
            digits.append(rem % p)
            rem //= p
        out.append(core.from_table(perms[digits[::-1]]))
    return out


def search_cover(Q, moduli, require_connected=False, fails=None, quandle=None):
    """Scan the abelian cocycles over the given fiber in lexicographic order.

    Returns (first matching CoverStructure or None, match count, cocycle
    count).  A cocycle matches when its extension passes the connectedness
    filter and fails the given identity (if any).
    """
    if quandle is None:
        quandle = Q.is_quandle()
    space = cover.abelian_cocycle_space(Q, moduli, quandle=quandle)
    ident = None
    if fails is not None:
        if isinstance(fails, str) and "=" not in fails:
            ident = terms.builtin(fails)
        else:
            ident = terms._as_identity(fails)
    first = None
    hits = 0
    for theta in space:
        ext = cover.extend(Q, theta)
        if require_connected and not is_connected(ext.total):
            continue
        if ident is not None and terms.holds(ext.total, ident):
            continue
        hits += 1
        if first is None:
            first = ext
    return first, hits, len(space)


# --------------------------------------------------------------- report

@dataclass(frozen=True)
class StructureReport:
    size: int
    rack: bool
    quandle: bool
    connected: bool
    faithful: bool
    principal: bool
    medial: bool
    homogeneous: object        # bool, or None past the automorphism cap
    cayley_kernel: Partition
    sigma: Partition
    ip: Partition
    levels: object             # Levels, or None for non-racks
    nilpotent: object
    nilpotency_class: object
    rack_nilpotence_bound: object
    lmlt_order: int
    dis_order: int
    adj0: object               # int, Indeterminate, or None for non-quandles
    simply_connected: object   # bool, Indeterminate, or None if not connected

    def to_json(self):
        def enc(v):
            if isinstance(v, LevelExceeded):
                return "infinity"
            if v is adjoint.INDETERMINATE:
                return "indeterminate"
            if isinstance(v, Partition):
                return v.to_json()
            if isinstance(v, Levels):
                return {
                    "multipermutation": enc(v.multipermutation),
                    "reductivity": enc(v.reductivity),
                    "strongly_solvable": enc(v.strongly_solvable),
                }
            if isinstance(v, (bool, int)) or v is None:
                return v
            return str(v)

        return {k: enc(getattr(self, k)) for k in self.__dataclass_fields__}


def report(Q):
    """Compute the full flag/level/partition summary, with the internal
    consistency checks that tie the pieces together."""
    rack = Q.is_rack()
    quandle = Q.is_quandle()
    lam, lam_ok = congruence.cayley_kernel(Q)
    sig = congruence.sigma(Q)
    ipq = congruence.ip(Q) if rack else None
    connected = is_connected(Q)
    try:
        homogeneous = is_homogeneous(Q)
    except CapExceeded:
        homogeneous = None
    lv = levels(Q) if rack else None
    nil, cls = nilpotency(Q)
    adj0 = adjoint.adj0_order(Q) if quandle else None
    simply = None
    if quandle and connected:
        simply = adjoint.is_simply_connected(Q)
    if rack:
        assert lam_ok, "the Cayley kernel of a rack must be a congruence"
        assert is_central(Q, ipq), "the least idempotent kernel must be central"
        if isinstance(lv.strongly_solvable, int) and not nil:
            raise AssertionError("finite strongly solvable length needs nilpotent Dis")
    return StructureReport(
        size=Q.size,
        rack=rack,
        quandle=quandle,
        connected=connected,
        faithful=lam.is_identity(),
        principal=is_principal(Q),
        medial=is_medial(Q),
        homogeneous=homogeneous,
        cayley_kernel=lam,
        sigma=sig,
        ip=ipq,
        levels=lv,
        nilpotent=nil,
        nilpotency_class=cls,
        rack_nilpotence_bound=(cls + 1) if nil else None,
        lmlt_order=lmlt(Q).order,
        dis_order=dis(Q).order,
        adj0=adj0,
        simply_connected=simply,
    )
