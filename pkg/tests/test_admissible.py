import random
from fractions import Fraction as Q

import pytest

from wexc.admissible import (CriticalLevelError, FKWImage, admissibility_window_check,
                             delta_lambda, dominant_coweights, dominant_weights,
                             dual_marks, enumerate_principal_admissible,
                             extended_weyl_plus, fkw_forward, fkw_global_classes,
                             fkw_index_set, fkw_inverse, is_nondegenerate,
                             vacuum_admissible)
from wexc.linalg import smul, vneg, vzero
from wexc.roots import parse_algebra


def test_vacuum_admissible_cases():
    a1 = parse_algebra("A1")
    ok, case = vacuum_admissible(a1, Q(-1, 2))
    assert ok and case == "i"          # (p,u) = (3,2)
    for label in ["A1", "A2", "B2", "G2"]:
        rs = parse_algebra(label)
        for k in (0, 1, 5):
            ok, case = vacuum_admissible(rs, Q(k))
            assert ok and case == "i"
    c2 = parse_algebra("C2")           # sp4: h = 4, h_dual = 3
    ok, case = vacuum_admissible(c2, Q(5, 2) - 3)
    assert ok and case == "ii"
    assert vacuum_admissible(c2, Q(3, 2) - 3) == (False, None)  # p = 3 < h
    with pytest.raises(CriticalLevelError):
        vacuum_admissible(a1, Q(-2))


def test_dual_marks():
    assert dual_marks(parse_algebra("A2")) == [1, 1]
    assert dual_marks(parse_algebra("G2")) == [1, 2]
    assert dual_marks(parse_algebra("B3")) == [1, 2, 1]


def test_dominant_weight_counts():
    a1 = parse_algebra("A1")
    assert len(dominant_weights(a1, 0)) == 1
    assert len(dominant_weights(a1, 1)) == 2
    a2 = parse_algebra("A2")
    assert len(dominant_weights(a2, 2)) == 6
    assert len(dominant_coweights(a1, 3)) == 4


def test_enumeration_counts_sl2():
    a1 = parse_algebra("A1")
    assert len(enumerate_principal_admissible(a1, 3, 2)) == 4
    assert len(enumerate_principal_admissible(a1, 2, 3)) == 3
    assert len(enumerate_principal_admissible(a1, 2, 5)) == 5
    # u = 1: exactly the dominant weights of level k
    for p in (2, 3, 4):
        ws = enumerate_principal_admissible(a1, p, 1)
        assert len(ws) == len(dominant_weights(a1, p - 2))
        assert all(w.weight.fin == l.fin for w, l in zip(ws, dominant_weights(a1, p - 2)))


def test_vacuum_weight_present():
    for label, p, u in [("A1", 3, 2), ("A2", 3, 2), ("A1", 7, 3)]:
        rs = parse_algebra(label)
        ws = enumerate_principal_admissible(rs, p, u)
        k = Q(p, u) - rs.h_dual
        assert any(w.weight.fin == vzero(rs.dim) and w.weight.d == k for w in ws)


def test_enumerated_weights_are_admissible():
    rs = parse_algebra("A1")
    for w in enumerate_principal_admissible(rs, 3, 2):
        assert admissibility_window_check(w)
    rs = parse_algebra("A2")
    for w in enumerate_principal_admissible(rs, 3, 2):
        assert admissibility_window_check(w)


def test_nondegenerate_sl2():
    a1 = parse_algebra("A1")
    alpha = a1.simple_roots[0]
    # u = 1: everything degenerate (Prn empty needs u >= h)
    ws = enumerate_principal_admissible(a1, 3, 1)
    assert all(not is_nondegenerate(w) for w in ws)
    ws = enumerate_principal_admissible(a1, 2, 5)
    nd = [w for w in ws if is_nondegenerate(w)]
    assert len(nd) == 4
    # beta = -alpha/2 at u = 2 satisfies (beta|alpha) = -1 not in 2Z
    ws32 = enumerate_principal_admissible(a1, 3, 2)
    betas = {w.beta for w in ws32 if is_nondegenerate(w)}
    assert smul(Q(-1, 2), alpha) in betas


def test_delta_lambda():
    a1 = parse_algebra("A1")
    alpha = a1.simple_roots[0]
    assert delta_lambda(a1, vzero(2), 2) == tuple(sorted([alpha, vneg(alpha)]))
    assert delta_lambda(a1, smul(Q(-1, 2), alpha), 2) == ()


def test_conditions_iii_iv_agree_random():
    # is_nondegenerate cross-asserts (iii) == (iv) internally on every call
    rng = random.Random(7)
    for label, p, u in [("A1", 2, 5), ("A1", 3, 4), ("A2", 3, 4), ("A2", 4, 3)]:
        rs = parse_algebra(label)
        for w in enumerate_principal_admissible(rs, p, u):
            is_nondegenerate(w)


def test_extended_weyl_plus_sizes():
    assert len(extended_weyl_plus(parse_algebra("A1"))) == 2
    assert len(extended_weyl_plus(parse_algebra("A2"))) == 3
    assert len(extended_weyl_plus(parse_algebra("G2"))) == 1
    assert len(extended_weyl_plus(parse_algebra("D4"))) == 4


def test_fkw_roundtrip_and_fibers():
    for p, u in [(2, 5), (3, 4)]:
        rs = parse_algebra("A1")
        nd = [w for w in enumerate_principal_admissible(rs, p, u) if is_nondegenerate(w)]
        for w in nd:
            img = fkw_forward(w)
            back = fkw_inverse(rs, p, u, w.ybar, img)
            assert back.fin == w.weight.fin and back.d == w.weight.d
        classes = fkw_global_classes(rs, p, u)
        for members in classes.values():
            assert len(members) == len(rs.weyl_group)


def test_fkw_index_set_counts():
    a1 = parse_algebra("A1")
    idx = fkw_index_set(a1, 2, 5)
    assert len(idx) == 2   # Lee-Yang: two modules
    idx = fkw_index_set(a1, 3, 4)
    assert len(idx) == 3   # Ising
    classes = fkw_global_classes(a1, 2, 5)
    assert len(classes) == 2


def test_lam0_count_times_sets():
    # 2 simple-set images x 2 dominant weights at (p,u) = (3,2) for sl2
    a1 = parse_algebra("A1")
    ws = enumerate_principal_admissible(a1, 3, 2)
    sets = {w.simple_set() for w in ws}
    assert len(sets) == 2
