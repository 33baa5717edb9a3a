from fractions import Fraction as Q

import pytest

from wexc.linalg import smul, vadd, vneg, vsub, vzero
from wexc.nilpotent import (InvalidPartitionError, Partition, dominance_order,
                            family_of, orbit_from_partition,
                            orbit_from_root_vector, orbit_principal,
                            orbit_zero, orbits_from_partition,
                            so_sp_partitions, _partitions_of)
from wexc.roots import parse_algebra

H = Q(1, 2)


def test_partition_basics():
    p = Partition((3, 2, 2, 1))
    assert p.dual().parts == (4, 3, 1)
    assert p.n == 8
    with pytest.raises(InvalidPartitionError):
        Partition((3, 2, 1)).validate("so")   # even part 2 with odd multiplicity
    with pytest.raises(InvalidPartitionError):
        Partition((3, 1)).validate("sp")   # odd parts with odd multiplicity
    Partition((3, 3, 2)).validate("sp")
    Partition((3, 3, 2, 1, 1)).validate("sp")
    Partition((2, 2)).validate("sp")
    Partition((3, 2, 2, 1)).validate("so")


def test_dominance():
    assert dominance_order(Partition((3,)), Partition((2, 1))) == "contains"
    assert dominance_order(Partition((2, 2)), Partition((2, 1, 1))) == "contains"
    assert dominance_order(Partition((2, 2)), Partition((3, 1))) == "contained"
    with pytest.raises(ValueError):
        dominance_order(Partition((2,)), Partition((3,)))


def test_sl3_minimal_matches_paper():
    rs = parse_algebra("A2")
    d = orbit_from_partition(rs, [2, 1])
    a1, a2 = rs.simple_roots
    theta = vadd(a1, a2)
    assert d.x == (H, 0, -H)
    assert d.delta_j.get(Q(0), ()) == ()
    assert set(d.delta_j[H]) == {a1, a2}
    assert d.dim_gf == 4
    # h^f is spanned by alpha1 - alpha2 (paper's h_0)
    assert len(d.hf_basis) == 1
    b = d.hf_basis[0]
    assert b == smul(Q(1, 3), vsub(a1, a2)) or b == vsub(a1, a2)
    # new positive system {alpha1, -alpha2, -theta}
    assert set(d.delta_new_plus) == {a1, vneg(a2), vneg(theta)}
    assert d.s_alpha[a1] == -H
    assert d.s_alpha[vneg(a2)] == H
    assert d.s_alpha[vneg(theta)] == 1
    assert d.s_alpha[theta] == 0
    # wbar = r2 r1
    assert d.wbar is not None and len(d.wbar.word) == 2
    assert d.principal_type
    assert d.delta_f == tuple(sorted([theta, vneg(theta)]))
    assert d.delta_R_j_plus(0) == ()
    assert d.delta_R_j_plus(H) == (a1,)
    assert d.gamma_list == (vneg(theta),)


def test_sl3_minimal_equals_root_vector_orbit():
    rs = parse_algebra("A2")
    d1 = orbit_from_partition(rs, [2, 1])
    d2 = orbit_from_root_vector(rs, rs.theta)
    assert d1.grading == d2.grading
    assert d1.hf_basis == d2.hf_basis
    assert d1.dim_gf == d2.dim_gf == 4


def test_sl4_22():
    rs = parse_algebra("A3")
    d = orbit_from_partition(rs, [2, 2])
    assert len(d.delta_j.get(Q(0), ())) == 4
    assert len(d.delta_j.get(H, ())) == 0
    assert d.dim_gf == 7  # dual partition [2,2]: 4+4-1
    assert d.principal_type


def test_sl2_principal():
    rs = parse_algebra("A1")
    d = orbit_from_partition(rs, [2])
    assert d.dim_gf == 1
    assert d.hf_basis == ()
    assert d.delta_f == tuple(sorted(rs.roots))
    p = orbit_principal(rs)
    assert p.grading == d.grading


def test_g2_short_root_orbit():
    rs = parse_algebra("G2")
    gam = rs.theta_s
    d = orbit_from_root_vector(rs, gam)
    # dim g^f = dim g_0 + dim g_{1/2} = 4 + 2 = 6 (= 14 - dim orbit 8)
    assert d.dim_gf == 6
    assert d.principal_type
    assert d.theta_x == Q(3, 2)
    assert set(d.delta_f) == {gam, vneg(gam)}


def test_principal_new_plus_is_w0_of_plus():
    for label in ["A2", "A3", "B2", "G2"]:
        rs = parse_algebra(label)
        d = orbit_principal(rs)
        w0 = rs.longest_element
        assert set(d.delta_new_plus) == {w0(a) for a in rs.positive_roots}
        assert d.hf_basis == ()
        assert d.dim_gf == rs.rank


def test_zero_orbit():
    rs = parse_algebra("B2")
    d = orbit_zero(rs)
    assert set(d.delta_new_plus) == set(rs.positive_roots)
    assert all(d.s_alpha[a] == 0 for a in rs.positive_roots)
    assert d.delta_R_j_plus(0) == tuple(sorted(rs.positive_roots))
    assert d.delta_R_j_plus(H) == ()
    assert d.dim_gf == rs.dim_g


def test_so8_3221_principal_type():
    rs = parse_algebra("D4")
    d = orbit_from_partition(rs, [3, 2, 2, 1])
    assert d.principal_type
    assert d.dim_gf == 12
    assert d.dim_hf == 1


def test_so8_very_even_pair():
    rs = parse_algebra("D4")
    pair = orbits_from_partition(rs, [2, 2, 2, 2])
    assert len(pair) == 2
    assert {d.label for d in pair} == {"[2,2,2,2]I", "[2,2,2,2]II"}
    d1, d2 = pair
    assert d1.dim_gf == d2.dim_gf
    assert d1.grading != d2.grading  # genuinely different representatives


@pytest.mark.parametrize("label", ["B2", "B3", "C2", "C3", "D4"])
def test_all_partitions_build(label):
    rs = parse_algebra(label)
    for p in so_sp_partitions(rs):
        for d in orbits_from_partition(rs, p.parts):
            assert d.dim_gf == p.centralizer_dim(family_of(rs))
            assert d.dim_hf == p.centralizer_rank(family_of(rs))
            assert d.principal_type == p.is_principal_type(family_of(rs))


def test_sl_dim_gf_dual_partition_oracle():
    for n in range(2, 8):
        rs = parse_algebra(f"A{n - 1}")
        for parts in _partitions_of(n):
            d = orbit_from_partition(rs, parts)
            dual = Partition(parts).dual()
            assert d.dim_gf == sum(m * m for m in dual.parts) - 1


def test_new_plus_closed_under_addition():
    for label, parts in [("A2", [2, 1]), ("A3", [2, 2]), ("D4", [3, 2, 2, 1]),
                         ("C2", [2, 2]), ("B3", [3, 3, 1])]:
        rs = parse_algebra(label)
        d = orbit_from_partition(rs, parts)
        new = set(d.delta_new_plus)
        for a in new:
            for b in new:
                s = vadd(a, b)
                if rs.is_root(s):
                    assert s in new


def test_s_alpha_properties():
    rs = parse_algebra("D4")
    d = orbit_from_partition(rs, [3, 2, 2, 1])
    for a in rs.roots:
        assert d.s_alpha[a] + d.s_alpha[vneg(a)] == 1
    zeros = {a for a in rs.roots if d.s_alpha[a] == 0}
    assert zeros & set(d.delta_j.get(Q(0), ())) == set(d.delta0_new_plus)
    assert all(d.grading[a] in (0, 1) for a in zeros)


def test_lemma_2_10_half_restrictions_match():
    for label, parts in [("A2", [2, 1]), ("D4", [3, 2, 2, 1]), ("B3", [3, 3, 1])]:
        rs = parse_algebra(label)
        d = orbit_from_partition(rs, parts)
        plus = sorted(d.restrict_hf(a) for a in rs.roots
                      if d.grading[a] == H and a in set(d.delta_new_plus))
        minus = sorted(d.restrict_hf(a) for a in rs.roots
                       if d.grading[a] == -H and vneg(a) in set(d.delta_new_plus))
        # Delta^{R,1/2}_+ vs the x-grading -1/2 half, restricted to h^f
        lhs = sorted(d.restrict_hf(a) for a in d.delta_R_j_plus(H))
        rhs = sorted(d.restrict_hf(a) for a in d.delta_new_plus if d.grading[a] == -H)
        assert lhs == rhs


def test_half_restriction_nonzero():
    rs = parse_algebra("D4")
    d = orbit_from_partition(rs, [3, 2, 2, 1])
    for a in d.delta_j.get(H, ()):
        assert any(v != 0 for v in d.restrict_hf(a))
