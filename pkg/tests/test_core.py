import json

import numpy as np
import pytest

import rackcover as rc
from rackcover import core
from rackcover.errors import (
    BadShape,
    NotAutomorphism,
    NotLeftQuasigroup,
    SubgroupNotFixed,
)

from helpers import conj_quandle


def test_from_table_derives_ldiv():
    Q = core.from_table([[0, 2, 1], [0, 1, 2], [0, 1, 2]])
    for x in range(3):
        for y in range(3):
            assert Q.mul[x, Q.ldiv[x, y]] == y
            assert Q.ldiv[x, Q.mul[x, y]] == y


def test_from_table_rejects_bad_input():
    with pytest.raises(BadShape):
        core.from_table([[0, 1], [1, 0], [0, 1]])
    with pytest.raises(BadShape):
        core.from_table([[0, 3], [1, 0]])
    with pytest.raises(NotLeftQuasigroup):
        core.from_table([[0, 0], [1, 0]])
    with pytest.raises(BadShape):
        core.from_table([[]])


def test_tables_are_frozen():
    Q = rc.fixture("Q3")
    with pytest.raises(ValueError):
        Q.mul[0, 0] = 1


def test_predicates():
    assert rc.fixture("Q3").is_quandle()
    assert rc.fixture("C_4").is_rack() and not rc.fixture("C_4").is_quandle()
    P = rc.fixture("P_3")
    assert core.is_projection(P) and core.is_permutation_rack(P)
    assert core.is_permutation_rack(rc.fixture("C_4"))
    assert not core.is_permutation_rack(rc.fixture("R3"))
    not_rack = core.from_table([[1, 0, 2], [0, 1, 2], [0, 1, 2]])
    assert not not_rack.is_rack()


def test_affine_single_modulus():
    R3 = rc.affine(3, -1)
    assert R3.mul[1, 0] == 2  # 2*1 - 0 mod 3
    assert R3.is_quandle()
    assert np.array_equal(R3.mul, rc.fixture("R3").mul)


def test_affine_matrix_over_z2_squared():
    Q4 = rc.affine((2, 2), [[0, 1], [1, 1]])
    assert Q4.is_quandle()
    assert np.array_equal(Q4.mul, rc.fixture("Q4").mul)


def test_affine_rejects_non_invertible_matrix():
    with pytest.raises(NotAutomorphism):
        rc.affine(4, 2)
    with pytest.raises(NotAutomorphism):
        rc.affine((2, 2), [[1, 0], [0, 2]])


def test_cyclic_rack_and_permutation_rack():
    C = rc.cyclic_rack(4)
    assert all(C.mul[x, y] == (y + 1) % 4 for x in range(4) for y in range(4))
    f = [1, 0, 2]
    R = rc.permutation_rack(f)
    assert R.is_rack()
    assert core.is_permutation_rack(R)
    with pytest.raises(NotLeftQuasigroup):
        rc.permutation_rack([0, 0, 1])


def test_direct_product():
    P = rc.direct_product(rc.fixture("R3"), rc.fixture("Q3"))
    assert P.size == 9
    assert P.is_quandle()
    assert rc.is_medial(P) == (rc.is_medial(rc.fixture("R3")) and rc.is_medial(rc.fixture("Q3")))


# ------------------------------------------------------------ group tables

def test_group_table_validation():
    with pytest.raises(BadShape):
        core.GroupTable([[0, 1], [0, 1]])  # no inverse for 1
    with pytest.raises(BadShape):
        core.GroupTable([[1, 0], [1, 0]])  # no identity
    G = core.GroupTable.cyclic(6)
    assert G.order == 6 and G.identity == 0
    assert G.is_subgroup((0, 2, 4))
    assert not G.is_subgroup((0, 2))
    assert G.is_automorphism([0, 5, 4, 3, 2, 1])
    assert not G.is_automorphism([0, 2, 4, 1, 3, 5])


def test_group_table_from_permgroup_matches():
    D = rc.dis(conj_quandle(4))
    GT, elems = core.GroupTable.from_permgroup(D)
    assert GT.order == D.order == 12
    i, j = 3, 7
    assert elems[GT.table[i, j]] == elems[i] * elems[j]


def test_coset_quandle_hypotheses_checked():
    G = core.GroupTable.cyclic(5)
    aut = tuple((2 * i) % 5 for i in range(5))  # x -> 2x, an automorphism
    Q = rc.coset_quandle(core.CosetQuandleSpec(G, aut, (0,)))
    assert Q.size == 5 and Q.is_quandle()
    assert rc.is_isomorphic(Q, rc.affine(5, 2))
    with pytest.raises(NotAutomorphism):
        rc.coset_quandle(core.CosetQuandleSpec(G, (0, 1, 3, 2, 4), (0,)))
    bad_aut = tuple((2 * i) % 5 for i in range(5))
    with pytest.raises(SubgroupNotFixed):
        # {0,1,...} is not even a subgroup; use the full group with a non-fixing aut
        rc.coset_quandle(core.CosetQuandleSpec(G, bad_aut, (0, 1, 2, 3, 4)))


def test_coset_cover_pair_projects():
    T5 = conj_quandle(5)
    D = rc.dis(T5)
    GT, elems = core.GroupTable.from_permgroup(D)
    pos = {g: i for i, g in enumerate(elems)}
    La = rc.translations(T5)[0]
    aut = tuple(pos[La * g * La.inverse()] for g in elems)
    Da = D.stabilizer(0)
    outer = tuple(pos[g] for g in Da.elements)
    qi, qo, proj = rc.coset_cover_pair(GT, aut, (GT.identity,), outer)
    assert qi.size == 60 and qo.size == 10
    assert rc.is_covering_hom(qi, qo, proj)
    with pytest.raises(BadShape):
        rc.coset_cover_pair(GT, aut, outer, (GT.identity,))


# ------------------------------------------------------------ isomorphisms

def test_isomorphisms_between_relabelings():
    Q = rc.fixture("Q4")
    perm = [2, 0, 3, 1]
    inv = [perm.index(i) for i in range(4)]
    mul = [[perm[Q.mul[inv[x], inv[y]]] for y in range(4)] for x in range(4)]
    R = core.from_table(mul)
    maps = rc.isomorphisms(Q, R)
    assert tuple(perm) in {f for f in maps}
    assert rc.is_isomorphic(Q, R)


def test_isomorphic_distinguishes():
    assert not rc.is_isomorphic(rc.fixture("R3"), rc.fixture("Q3"))
    assert not rc.is_isomorphic(rc.fixture("Q4"), rc.projection_quandle(4))


def test_automorphism_groups_of_fixtures():
    assert rc.automorphisms(rc.fixture("R3")).order == 6
    # affine automorphisms: centralizer of f in GL(2,2) is <f>, times 4 translations
    assert rc.automorphisms(rc.fixture("Q4")).order == 12
    assert rc.automorphisms(rc.projection_quandle(3)).order == 6  # all of Sym(3)


def test_fixture_names():
    assert rc.fixture("P_5").size == 5
    assert rc.fixture("C_3").size == 3
    with pytest.raises(BadShape):
        rc.fixture("nope")


# ------------------------------------------------------------ serialization

def test_json_round_trip():
    Q = rc.fixture("Q4")
    obj = core.table_to_json(Q)
    assert obj["size"] == 4
    R = core.table_from_json(json.loads(json.dumps(obj)))
    assert R == Q


def test_text_round_trip():
    Q = rc.fixture("R5")
    text = core.format_table_text(Q)
    assert text.splitlines()[0] == "5"
    assert core.parse_table_text(text) == Q


def test_loads_table_sniffs_format():
    Q = rc.fixture("Q3")
    assert core.loads_table(json.dumps(core.table_to_json(Q))) == Q
    assert core.loads_table(core.format_table_text(Q)) == Q
