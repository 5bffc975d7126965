import itertools
import json

import numpy as np
import pytest

import rackcover as rc
from rackcover import core, cover
from rackcover.cover import ConstantCocycle
from rackcover.errors import (
    BadShape,
    CapExceeded,
    CriterionNotApplicable,
    FiberMismatch,
    NotHomomorphism,
    NotSurjective,
    NotUnderCayley,
    NotUniform,
)
from rackcover.partition import Partition
from rackcover.permgroup import Permutation

from helpers import gamma_twist, random_perm_cocycle


def test_constant_cocycle_kinds():
    perms = np.zeros((2, 2, 2), dtype=np.int64)
    perms[:, :] = [0, 1]
    perms[0, 1] = [1, 0]
    theta = ConstantCocycle.from_perms(perms)
    assert theta.kind == "perm" and theta.degree == 2
    assert theta.perm(0, 1) == Permutation([1, 0])

    vals = np.zeros((2, 2, 1), dtype=np.int64)
    vals[0, 1, 0] = 1
    ab = ConstantCocycle.abelian(vals, 2)
    assert ab.kind == "abelian"
    assert ab == theta  # same fiber permutations
    assert hash(ab) == hash(theta)


def test_abelian_values_reduced_mod():
    vals = np.full((2, 2, 1), 5, dtype=np.int64)
    ab = ConstantCocycle.abelian(vals, 3)
    assert ab.values.max() == 2


def test_mixed_radix_translation_order():
    vals = np.zeros((1, 1, 2), dtype=np.int64)
    vals[0, 0] = (1, 0)  # add (1,0) over Z2 x Z3: acts on a*3+b
    th = ConstantCocycle.abelian(vals, (2, 3))
    assert th.perm(0, 0).image == (3, 4, 5, 0, 1, 2)


def test_from_perms_rejects_non_permutation():
    bad = np.zeros((2, 2, 2), dtype=np.int64)
    with pytest.raises(BadShape):
        ConstantCocycle.from_perms(bad)


def test_trivial_cocycle():
    th = ConstantCocycle.trivial(3, 4)
    assert th.degree == 4
    assert all(th.perm(x, y).is_identity() for x in range(3) for y in range(3))
    assert rc.is_quandle_cocycle(rc.fixture("R3"), th)


def test_extend_shapes_and_projection():
    Q = rc.fixture("R3")
    th = ConstantCocycle.trivial(3, 2)
    E = rc.extend(Q, th)
    assert E.total.size == 6
    assert E.projection == Partition([0, 0, 1, 1, 2, 2])
    assert E.total.mul[0, 2] == Q.mul[0, 1] * 2  # (0,0)*(1,0) = (0*1, 0)
    with pytest.raises(FiberMismatch):
        rc.extend(rc.fixture("Q4"), th)


def test_extension_multiplies_by_cocycle_images():
    Q = rc.fixture("Q3")
    vals = np.zeros((3, 3, 1), dtype=np.int64)
    vals[0, 2, 0] = 1
    th = ConstantCocycle.abelian(vals, 4)
    E = rc.extend(Q, th)
    for x, y in itertools.product(range(3), repeat=2):
        p = th.perm(x, y)
        for a, b in itertools.product(range(4), repeat=2):
            assert E.total.mul[x * 4 + a, y * 4 + b] == Q.mul[x, y] * 4 + p(b)


def test_cocycle_condition_detects_bad_values():
    Q = rc.fixture("R3")
    perms = np.tile(np.arange(2), (3, 3, 1))
    perms[0, 1] = [1, 0]
    th = ConstantCocycle.from_perms(perms)
    assert not rc.is_rack_cocycle(Q, th)
    assert not rc.extend(Q, th).total.is_rack()


def test_quandle_cocycle_needs_trivial_diagonal():
    Q = rc.fixture("R3")
    vals = np.ones((3, 3, 1), dtype=np.int64)
    th = ConstantCocycle.abelian(vals, 2)
    assert rc.is_rack_cocycle(Q, th)
    assert not rc.is_quandle_cocycle(Q, th)
    assert rc.extend(Q, th).total.is_rack()
    assert not rc.extend(Q, th).total.is_quandle()


def test_is_covering_hom():
    Q = rc.fixture("R3")
    th = ConstantCocycle.trivial(3, 2)
    E = rc.extend(Q, th)
    f = [x // 2 for x in range(6)]
    assert rc.is_covering_hom(E.total, Q, f)
    with pytest.raises(NotSurjective):
        rc.is_covering_hom(E.total, Q, [0] * 6)
    with pytest.raises(NotHomomorphism):
        rc.is_covering_hom(E.total, Q, [0, 1, 1, 2, 2, 0])
    with pytest.raises(BadShape):
        rc.is_covering_hom(E.total, Q, [0, 0, 1, 1, 2])
    # projection from a faithful product: a homomorphism whose kernel exceeds lambda
    P = rc.direct_product(Q, Q)
    assert not rc.is_covering_hom(P, Q, [x // 3 for x in range(9)])


def test_extract_cocycle_round_trip():
    rng = np.random.default_rng(5)
    for name, m in (("R3", 2), ("Q4", 3), ("R5", 2)):
        Q = rc.fixture(name)
        space = rc.abelian_cocycle_space(Q, m)
        theta = space[rng.integers(len(space))]
        E = rc.extend(Q, theta)
        got, iso = cover.extract_cocycle(E.total, E.projection)
        assert got == theta
        assert list(iso) == list(range(E.total.size))  # blocks arrive in order


def test_extract_cocycle_from_relabelled_cover():
    Q = rc.fixture("R3")
    theta = rc.abelian_cocycle_space(Q, 2)[-1]  # a nontrivial cocycle
    assert rc.is_quandle_cocycle(Q, theta)
    E = rc.extend(Q, theta)
    perm = np.array([3, 0, 4, 1, 5, 2])  # scramble the cover elements
    inv = np.argsort(perm)
    mul = perm[E.total.mul[np.ix_(inv, inv)]]
    R = core.from_table(mul)
    alpha = Partition([E.projection.block_id[i] for i in inv])
    got, iso = cover.extract_cocycle(R, alpha)
    E2 = rc.extend(rc.quotient(R, alpha)[0], got)
    assert [E2.total.mul[iso[x], iso[y]] for x in range(6) for y in range(6)] == [
        iso[R.mul[x, y]] for x in range(6) for y in range(6)
    ]


def test_extract_cocycle_rejects_bad_partitions():
    Q3 = rc.fixture("Q3")
    with pytest.raises(NotUniform):
        cover.extract_cocycle(Q3, Partition([0, 1, 1]))
    with pytest.raises(NotUnderCayley):
        cover.extract_cocycle(rc.fixture("R3"), Partition.full(3))


# --------------------------------------------------------------- cohomology

def test_cohomologous_reflexive_symmetric_transitive():
    rng = np.random.default_rng(17)
    Q = rc.fixture("R3")
    space = rc.abelian_cocycle_space(Q, 3)
    for _ in range(10):
        t1, t2, t3 = (space[rng.integers(len(space))] for _ in range(3))
        g11 = rc.are_cohomologous(Q, t1, t1)
        assert g11 is not None
        g12 = rc.are_cohomologous(Q, t1, t2)
        g21 = rc.are_cohomologous(Q, t2, t1)
        assert (g12 is None) == (g21 is None)
        g23 = rc.are_cohomologous(Q, t2, t3)
        g13 = rc.are_cohomologous(Q, t1, t3)
        if g12 is not None and g23 is not None:
            assert g13 is not None


def test_cohomologous_witness_conjugates():
    Q = rc.fixture("Q3")
    rng = np.random.default_rng(23)
    space = rc.abelian_cocycle_space(Q, 3)
    theta = space[rng.integers(len(space))]
    gamma = [Permutation(rng.permutation(3)) for _ in range(Q.size)]
    eps = gamma_twist(Q, theta, gamma)
    got = rc.are_cohomologous(Q, theta, eps)
    assert got is not None
    for x in range(Q.size):
        for y in range(Q.size):
            assert eps.perm(x, y) * got[y] == got[Q.mul[x, y]] * theta.perm(x, y)


def test_not_cohomologous_when_covers_differ():
    Q = rc.fixture("Q3")
    vals = np.zeros((3, 3, 1), dtype=np.int64)
    vals[0, 2, 0] = 1
    theta = ConstantCocycle.abelian(vals, 4)  # cover has an order-8 translation
    triv = ConstantCocycle.trivial(3, 4)
    assert rc.are_cohomologous(Q, theta, triv) is None


def test_cohomologous_caps_and_mismatches():
    Q = rc.fixture("R3")
    with pytest.raises(FiberMismatch):
        rc.are_cohomologous(Q, ConstantCocycle.trivial(3, 2), ConstantCocycle.trivial(3, 3))
    with pytest.raises(CapExceeded):
        rc.are_cohomologous(Q, ConstantCocycle.trivial(3, 6), ConstantCocycle.trivial(3, 6))


def test_isomorphic_as_covers_recovers_twist():
    rng = np.random.default_rng(29)
    Q = rc.fixture("R3")
    space = rc.abelian_cocycle_space(Q, 3)
    theta = space[4]
    g = Permutation([0, 2, 1])  # an automorphism of R3: x -> -x mod 3... checked below
    assert rc.automorphisms(Q).order == 6
    gamma = [Permutation(rng.permutation(3)) for _ in range(3)]
    eps_base = theta.compose_with_aut(tuple(g.image))
    eps = gamma_twist(Q, eps_base, gamma)
    if not rc.is_rack_cocycle(Q, eps):
        pytest.skip("twist left the cocycle space")
    out = rc.isomorphic_as_covers(Q, theta, eps, mode="cayley")
    # theta and eps o (g x g) cohomologous for some automorphism g
    assert out is not None
    aut, wit = out
    E1 = rc.extend(Q, theta).total
    E2 = rc.extend(Q, eps).total
    m = 3
    f = [0] * 9
    for x in range(3):
        for a in range(m):
            f[x * m + a] = aut(x) * m + wit[x](a)
    assert all(
        f[E1.mul[u, v]] == E2.mul[f[u], f[v]]
        for u in range(9)
        for v in range(9)
    )


def test_isomorphic_as_covers_needs_matching_kernel():
    Q = rc.fixture("R3")
    th = ConstantCocycle.trivial(3, 1)
    # fiber of size 1: the cover's Cayley kernel is trivial, not the projection
    out = rc.isomorphic_as_covers(Q, th, th, mode="cayley")
    assert out is not None  # identity works; kernels agree here (blocks of size 1)
    P = rc.fixture("P_2")
    tp = ConstantCocycle.trivial(2, 2)
    with pytest.raises(CriterionNotApplicable):
        # P_2 x 2 has full Cayley kernel, so lambda exceeds the fibration
        rc.isomorphic_as_covers(P, tp, tp, mode="cayley")


def test_isomorphic_as_covers_ip_mode():
    # C_4 is itself a cover of the one-point quandle; its fibration is the
    # idempotent kernel rather than the Cayley kernel (which coincides here,
    # so use ip mode deliberately).
    C4 = rc.fixture("C_4")
    th, _ = cover.extract_cocycle(C4, Partition.full(4))
    P1 = rc.projection_quandle(1)
    assert rc.ip(C4).is_full()
    out = rc.isomorphic_as_covers(P1, th, th, mode="ip")
    assert out is not None


# ----------------------------------------------------------- abelian spaces

def test_abelian_space_counts():
    assert len(rc.abelian_cocycle_space(rc.fixture("R3"), 2)) == 4
    assert len(rc.abelian_cocycle_space(rc.fixture("R3"), 3)) == 9
    assert len(rc.abelian_cocycle_space(rc.fixture("R5"), 2)) == 16
    assert len(rc.abelian_cocycle_space(rc.fixture("Q4"), 2)) == 16
    assert len(rc.abelian_cocycle_space(rc.fixture("Q3"), 4)) == 64  # composite path
    assert len(rc.abelian_cocycle_space(rc.fixture("R3"), (2, 2))) == 16


def test_abelian_space_matches_brute_force():
    Q = rc.fixture("R3")
    n, m = 3, 2
    got = {th.values.tobytes() for th in rc.abelian_cocycle_space(Q, m)}
    brute = set()
    for flat in itertools.product(range(m), repeat=n * n):
        t = np.array(flat, dtype=np.int64).reshape(n, n)
        if any(t[x, x] for x in range(n)):
            continue
        ok = all(
            (t[x, Q.mul[y, z]] + t[y, z] - t[Q.mul[x, y], Q.mul[x, z]] - t[x, z]) % m == 0
            for x in range(n)
            for y in range(n)
            for z in range(n)
        )
        if ok:
            brute.add(t.reshape(n, n, 1).tobytes())
    assert got == brute


def test_abelian_space_sorted_lexicographically():
    space = rc.abelian_cocycle_space(rc.fixture("R5"), 2)
    keys = [tuple(th.values.ravel()) for th in space]
    assert keys == sorted(keys)
    assert keys[0] == tuple([0] * 25)  # trivial cocycle first


def test_rack_space_drops_diagonal_constraint():
    rack = len(rc.abelian_cocycle_space(rc.fixture("R3"), 2, quandle=False))
    quandle = len(rc.abelian_cocycle_space(rc.fixture("R3"), 2, quandle=True))
    assert rack == 8 and quandle == 4


def test_every_space_member_validates(catalog):
    rng = np.random.default_rng(31)
    picks = rng.choice(len(catalog), size=12, replace=False)
    for i in picks:
        Q = catalog[i]
        for th in rc.abelian_cocycle_space(Q, 2, quandle=False):
            assert rc.is_rack_cocycle(Q, th) or not Q.is_rack()


# ------------------------------------------------------------ serialization

def test_cocycle_json_round_trip_perm():
    rng = np.random.default_rng(37)
    th = random_perm_cocycle(rng, 3, 3)
    obj = cover.cocycle_to_json(th)
    th2, base = cover.cocycle_from_json(json.loads(json.dumps(obj)))
    assert th2 == th and base is None


def test_cocycle_json_round_trip_abelian_with_base():
    Q = rc.fixture("Q3")
    vals = np.zeros((3, 3, 2), dtype=np.int64)
    vals[0, 2] = (1, 1)
    th = ConstantCocycle.abelian(vals, (2, 3))
    obj = cover.cocycle_to_json(th, base=Q)
    assert obj["fiber"] == {"kind": "abelian", "moduli": [2, 3]}
    th2, base = cover.cocycle_from_json(obj)
    assert th2 == th and base == Q
    assert th2.kind == "abelian"


def test_cocycle_json_base_path_loader(tmp_path):
    Q = rc.fixture("R3")
    base_file = tmp_path / "base.json"
    base_file.write_text(json.dumps(core.table_to_json(Q)))
    obj = cover.cocycle_to_json(ConstantCocycle.trivial(3, 2))
    obj["base"] = "base.json"
    th, base = cover.cocycle_from_json(
        obj, base_loader=lambda rel: core.loads_table((tmp_path / rel).read_text())
    )
    assert base == Q
