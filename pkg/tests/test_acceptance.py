"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Criterion 7 contains one sub-claim that two independent implementations both
contradict; it is split out as a strict expected failure (see the analysis in
the external decisions ledger).
"""

import math
import random
import time
from fractions import Fraction as Q

import pytest

from wexc.admissible import (dominant_weights, enumerate_principal_admissible,
                             find_principal_admissible, fkw_forward,
                             fkw_global_classes, fkw_index_set, fkw_inverse,
                             is_nondegenerate)
from wexc.affine import KD, finite
from wexc.characters import (EvalFrame, denominator_psi, determinant_identity_pair,
                             ep_character, extra_factor, extra_factor_c,
                             match_up_to_sign, modular_data, principal_w_central_charge,
                             principal_w_h, ramond_data, sln_extra_factor_closed_form,
                             strange_formula_check, theta_a_sum, to_ramond, z_context)
from wexc.exceptional import (candidate_denominators, conjecture_scan, e0_and_phi,
                              sln_closed_form, torus_scan, vanishing_test)
from wexc.linalg import smul
from wexc.nilpotent import (orbit_from_partition, orbit_from_root_vector,
                            orbit_principal, orbit_zero, orbits_from_partition,
                            so_sp_partitions, _partitions_of)
from wexc.qseries import eta, f_series, theta_series
from wexc.roots import build_root_system, parse_algebra


def report(num, ok, elapsed, note=""):
    print(f"ACCEPTANCE {num}: {'PASS' if ok else 'FAIL'} ({elapsed:.2f}s) {note}")
    assert ok


def _sl3_setup():
    rs = parse_algebra("A2")
    datum = orbit_from_partition(rs, [2, 1])
    rd = ramond_data(datum)
    L1 = rd.T(rs, finite(rs.lattice_bases["Qstar"][0]))
    L2 = rd.T(rs, finite(rs.lattice_bases["Qstar"][1]))
    zctx = z_context(rd, basis=[L2.fin], u=2)
    return rs, datum, rd, L1, L2, zctx


def test_criterion_01_denominator_identity():
    t0 = time.time()
    rs, datum, rd, L1, L2, zctx = _sl3_setup()
    psi = denominator_psi(datum, zctx, Q(10) + psi_low(datum))
    ref = (eta(psi.cutoff, nz=1, M=zctx.M) *
           theta_series(psi.cutoff, [Q(1)], zctx.M)).mul_monomial(t_exp=Q(3))
    cut = min(psi.cutoff, ref.cutoff)
    ok = cut >= 10 and psi.truncate(cut).terms == ref.truncate(cut).terms
    el = time.time() - t0
    report(1, ok and el < 1.0, el, "psi = e^{6 pi i t} eta theta to q^10")


def psi_low(datum):
    return Q(datum.dim_gf, 24)


def test_criterion_02_extra_factor_sl3():
    t0 = time.time()
    rs, datum, rd, L1, L2, zctx = _sl3_setup()
    ok = True
    for p in (3, 5):
        ws = enumerate_principal_admissible(rs, p, 2)
        for w in ws:
            rw = to_ramond(rd, w)
            if vanishing_test(rw):
                continue
            ef = extra_factor(rw, zctx, Q(10))
            ok &= ef.quotient is not None
            ok &= ef.quotient.cutoff >= 10
            ok &= ef.quotient.terms == {(Q(0), (0,), Q(-3, 2)): 1}
    el = time.time() - t0
    report(2, ok and el < 5.0, el, "C/psi = e^{-3 pi i t} for M_3 and M_5 to q^10")


def test_criterion_03_eq_3_5():
    t0 = time.time()
    rs, datum, rd, L1, L2, zctx = _sl3_setup()
    K, _ = KD(rs)
    frame = EvalFrame(-rd.D_R.scale(2) - L1 + K.scale(Q(1, 6)),
                      (L2 + K.scale(Q(-1, 6)),), K.scale(Q(1, 2)))
    order = Q(6)
    psi = denominator_psi(datum, zctx, psi_low(datum) + order + 2, cross_check=False)
    ok = True
    for p in (3, 5):
        den = None
        seen = set()
        for w in enumerate_principal_admissible(rs, p, 2):
            rw = to_ramond(rd, w)
            if vanishing_test(rw) or w.lam0.fin in seen:
                continue
            seen.add(w.lam0.fin)
            b = ep_character(rw, zctx, order, psi=psi)
            win = b.chi.low() + order + Q(3)
            if den is None or den.cutoff < win:
                den = theta_a_sum(rd, rd.rho_hat_R, frame, zctx, win)
            num = theta_a_sum(rd, rw.lam0_R + rd.rho_hat_R, frame, zctx, win)
            rhs = (num / den).mul_monomial(t_exp=Q(-3, 2))
            cut = min(b.chi.cutoff, rhs.cutoff)
            ok &= cut >= b.chi.low() + order
            ok &= b.chi.truncate(cut).terms == rhs.truncate(cut).terms
        ok &= len(seen) == len(dominant_weights(rs, p - 3))
    el = time.time() - t0
    report(3, ok and el < 30.0, el, "eq 3.5 for all Lambda^0, p = 3, 5, to q^6")


def test_criterion_04_g2():
    t0 = time.time()
    rs = parse_algebra("G2")
    datum = orbit_from_root_vector(rs, rs.theta_s)
    excs = [u for u in candidate_denominators(rs) if torus_scan(datum, u).exceptional]
    ok = excs == [2]
    rd = ramond_data(datum)
    sigma = datum.delta_R_j_plus(Q(1, 2))[0]
    b0 = datum.hf_basis[0]
    zctx = z_context(rd, basis=[smul(Q(1) / rs.form(sigma, b0), b0)], u=2)
    w = find_principal_admissible(rs, 5, 2,
                                  pred=lambda w: not vanishing_test(to_ramond(rd, w)))
    rw = to_ramond(rd, w)
    cut = psi_low(datum) + 11
    C = extra_factor_c(rw, zctx, cut)
    psi = denominator_psi(datum, zctx, cut, cross_check=False)
    lhs = C * f_series(cut, [Q(2)], zctx.M, tau_scale=2)
    rhs = (psi * f_series(cut, [Q(1)], zctx.M)).mul_monomial(t_exp=Q(-2))
    win = min(lhs.cutoff, rhs.cutoff)
    ok &= win >= 10 and lhs.truncate(win).terms == rhs.truncate(win).terms
    el = time.time() - t0
    report(4, ok and el < 30.0, el,
           "C/psi = e^{-4 pi i t} f(tau,z)/f(2tau,2z); sole denominator u = 2")


@pytest.mark.parametrize("n,u,p", [(4, 2, 5), (5, 2, 7), (5, 3, 7), (7, 3, 8)])
def test_criterion_05_remark_3_1(n, u, p):
    t0 = time.time()
    rs = parse_algebra(f"A{n - 1}")
    full, rest = divmod(n, u)
    datum = orbit_from_partition(rs, (u,) * full + ((rest,) if rest else ()))
    rd = ramond_data(datum)
    zctx = z_context(rd, u=u)
    w = find_principal_admissible(
        rs, p, u, pred=lambda w: not vanishing_test(to_ramond(rd, w)),
        lam0s=dominant_weights(rs, p - rs.h_dual)[:1])
    rw = to_ramond(rd, w)
    ef = extra_factor(rw, zctx, Q(9))
    quot = ef.quotient
    ok = quot is not None and all(all(e == 0 for e in k[1]) for k in quot.terms)
    closed = sln_extra_factor_closed_form(n, u, quot.cutoff, zctx.nz, zctx.M)
    sign = match_up_to_sign(quot.truncate(Q(8)), closed.truncate(Q(8)))
    ok &= sign in (1, -1) and min(quot.cutoff, closed.cutoff) >= 8
    el = time.time() - t0
    report(5, ok, el, f"Remark 3.1 closed form, (n,u) = ({n},{u}), sign {sign}")


def test_criterion_06_sln_cross_validation():
    t0 = time.time()
    ok = True
    for n in range(2, 6):
        rs = parse_algebra(f"A{n - 1}")
        for parts in _partitions_of(n):
            datum = orbit_from_partition(rs, parts)
            cf = sln_closed_form(n, parts)
            for u in range(1, n + 1):
                res = torus_scan(datum, u)
                ok &= res.exceptional == (u in cf)
                ok &= res.interpretations_agree
    el = time.time() - t0
    report(6, ok and el < 300.0, el, "Thm 3.1/3.2 vs torus scan, n = 2..5, u <= n")


def test_criterion_07_classical_examples():
    t0 = time.time()
    ok = True
    notes = []
    # sp4: O_{2,2} exceptional with phi = 3
    e0 = e0_and_phi(conjecture_scan(parse_algebra("C2")))
    ok &= e0.get("[2,2]") == (3,)
    # so8: E0 contains O_{3,2,2,1} with phi = 2
    e0 = e0_and_phi(conjecture_scan(parse_algebra("D4")))
    ok &= e0.get("[3,2,2,1]") == (2,)
    # so10: phi(O_{3,2,2,1,1,1}) = 2
    e0 = e0_and_phi(conjecture_scan(parse_algebra("D5")))
    ok &= e0.get("[3,2,2,1,1,1]") == (2,)
    # so12: phi(O_{5,3,3,1}) = 4 and phi(O_{3,2,2,2,2,1}) = 2
    e0 = e0_and_phi(conjecture_scan(parse_algebra("D6")))
    ok &= e0.get("[5,3,3,1]") == (4,)
    ok &= e0.get("[3,2,2,2,2,1]") == (2,)
    el = time.time() - t0
    report(7, ok and el < 1800.0, el,
           "sp4, so8, so10, so12 examples (see xfail test for one so12 orbit)")


@pytest.mark.xfail(strict=True, reason=(
    "Example (c) lists phi(O_{3,2,2,1,1,1,1,1}) = 2 for so12, but both the "
    "torus scan and a direct weight-level check find a nonvanishing character "
    "violating the almost-convergence count (24 != 28) at u = 2; see the "
    "decisions ledger for the full analysis"))
def test_criterion_07_so12_32211111_phi2():
    rs = parse_algebra("D6")
    datum = orbit_from_partition(rs, [3, 2, 2, 1, 1, 1, 1, 1])
    res = torus_scan(datum, 2)
    assert res.exceptional, (res.min_card, res.target)


def test_criterion_08_modular_checks():
    t0 = time.time()
    ok = True
    # Lemma 2.11(a) numerics at tau = i and 1.3i
    e = eta(Q(60))
    for tau in (1j, 1.3j):
        lhs, _ = e.evaluate(-1 / tau)
        rhs, _ = e.evaluate(tau)
        ok &= abs(lhs - (-1j * tau) ** 0.5 * rhs) < 1e-10
    import cmath
    f = f_series(Q(80), [Q(1)], M=1)
    for tau in (1j, 1.3j):
        s = 0.3
        lhs, _ = f.evaluate(-1 / tau, [s / tau])
        rhs, _ = f.evaluate(tau, [s])
        ok &= abs(lhs - (-1j) * cmath.exp(1j * cmath.pi * s * s / tau) * rhs) < 1e-10
    # Thm 2.1(a) S-relation for sl2 principal (2,5) at tau = 1.3i, order 400
    rs = parse_algebra("A1")
    datum = orbit_principal(rs)
    rd = ramond_data(datum)
    zctx = z_context(rd, u=5)
    ws = enumerate_principal_admissible(rs, 2, 5)
    bundles = [ep_character(to_ramond(rd, w), zctx, Q(400)) for w in ws]
    md = modular_data(rd, Q(2, 5) - 2, zctx, weights=ws)
    tau = 1.3j
    vals = [b.chi.evaluate(tau)[0] for b in bundles]
    pref = (-1j) ** md.prefactor_power
    for i, b in enumerate(bundles):
        lhs = b.chi.evaluate(-1 / tau)[0]
        rhs = pref * sum(md.a_matrix[i][j] * vals[j] for j in range(len(ws)))
        ok &= abs(lhs - rhs) < 1e-8
    # Thm 2.1(b): T phase exact on the exponent grid
    for b in bundles:
        if not b.chi.is_zero():
            ok &= all((key[0] - b.s_f) % 1 == 0 for key in b.chi.terms)
    el = time.time() - t0
    report(8, ok, el, "eta/f S-transforms, S-relation order 400, exact T phase")


def test_criterion_09_strange_formula():
    t0 = time.time()
    ok = True
    a1, a2 = parse_algebra("A1"), parse_algebra("A2")
    r = strange_formula_check(orbit_principal(a1), 3, 2)
    ok &= r.applicable and r.holds
    r = strange_formula_check(orbit_from_partition(a2, [2, 1]), 3, 2)
    ok &= r.applicable and r.holds
    for label in ("A1", "A2", "A3", "B2", "C3", "D4", "G2"):
        rs = parse_algebra(label)
        r = strange_formula_check(orbit_zero(rs), rs.h_dual, 1)
        ok &= r.applicable and r.holds
    # every qualifying exceptional pair found by scans up to rank 4
    qualifying = 0
    for label in ("A1", "A2", "A3", "A4", "B2", "B3", "B4",
                  "C2", "C3", "C4", "D4", "G2"):
        rs = parse_algebra(label)
        if rs.type_label == "G":
            data = [orbit_zero(rs), orbit_from_root_vector(rs, rs.theta_s),
                    orbit_principal(rs)]
        elif rs.type_label == "A":
            data = [orbit_from_partition(rs, p)
                    for p in _partitions_of(rs.rank + 1)]
        else:
            data = [d for p in so_sp_partitions(rs)
                    for d in orbits_from_partition(rs, p.parts)
                    if d.principal_type]
        for datum in data:
            if not datum.principal_type:
                continue
            for u in candidate_denominators(rs):
                if not torus_scan(datum, u).exceptional:
                    continue
                num = rs.h_dual * rs.dim_g
                if num % (u * datum.dim_gf):
                    continue
                p = num // (u * datum.dim_gf)
                if p < rs.h_dual or math.gcd(p, u) != 1:
                    continue
                res = strange_formula_check(datum, p, u)
                ok &= res.applicable and res.holds
                qualifying += 1
    el = time.time() - t0
    report(9, ok and qualifying > 0, el,
           f"exact equality on {qualifying} qualifying scan pairs + named cases")


def test_criterion_10_triple_product_and_det():
    t0 = time.time()
    ok = True
    for sf in (Q(1), Q(1, 2), Q(2, 3), Q(3, 4), Q(5, 6)):
        M = sf.denominator
        th_sum = theta_series(Q(30), [sf], M)
        th_prod = theta_series(Q(30), [sf], M, product_form=True)
        ok &= th_sum.terms == th_prod.terms
        lhs = eta(Q(30), nz=1, M=M) * f_series(Q(30), [sf], M)
        ok &= lhs.truncate(th_sum.cutoff).terms == th_sum.truncate(lhs.cutoff).terms
    for label, parts in [("A2", [2, 1]), ("A3", [2, 2])]:
        rs = parse_algebra(label)
        datum = orbit_from_partition(rs, parts)
        zctx = z_context(ramond_data(datum))
        l, r = determinant_identity_pair(datum, zctx, Q(8))
        ok &= l.terms == r.terms
    el = time.time() - t0
    report(10, ok, el, "triple product to q^30; det identity to q^8")


def test_criterion_11_property_suites():
    t0 = time.time()
    ok = True
    # vanishing_test <=> zero series on 50 random weights over sl2..sl4
    rng = random.Random(2024)
    cases = [("A1", [2], 3, 2), ("A1", [2], 2, 5), ("A2", [2, 1], 3, 2),
             ("A2", [3], 4, 3), ("A3", [2, 2], 5, 2), ("A3", [2, 1, 1], 5, 2),
             ("A3", [4], 5, 4)]
    pool = []
    for label, parts, p, u in cases:
        rs = parse_algebra(label)
        datum = orbit_from_partition(rs, parts)
        rd = ramond_data(datum)
        zctx = z_context(rd, u=u)
        ws = enumerate_principal_admissible(rs, p, u)
        rng.shuffle(ws)
        pool.extend((rd, zctx, w) for w in ws[:8])
    rng.shuffle(pool)
    checked = 0
    for rd, zctx, w in pool[:50]:
        rw = to_ramond(rd, w)
        b = ep_character(rw, zctx, Q(6))
        ok &= vanishing_test(rw) == b.chi.is_zero()
        checked += 1
    ok &= checked == 50
    # FKW round trips on all of Prn^k for sl2, (p,u) in {(2,5),(3,4)}
    a1 = parse_algebra("A1")
    for p, u in ((2, 5), (3, 4)):
        nd = [w for w in enumerate_principal_admissible(a1, p, u) if is_nondegenerate(w)]
        ok &= len(nd) > 0
        for w in nd:
            img = fkw_forward(w)
            back = fkw_inverse(a1, p, u, w.ybar, img)
            ok &= back.fin == w.weight.fin and back.d == w.weight.d
        for members in fkw_global_classes(a1, p, u).values():
            ok &= len(members) == 2
    # Virasoro central charge identity for 10 coprime pairs
    cnt = 0
    for p in range(2, 12):
        for u in range(2, 12):
            if math.gcd(p, u) == 1 and cnt < 10:
                ok &= principal_w_central_charge(a1, p, u) == 1 - Q(6 * (p - u) ** 2, p * u)
                cnt += 1
    ok &= cnt == 10
    # Lee-Yang and Ising h-sets
    hs = {principal_w_h(a1, i.lam, i.mu, 2, 5) for i in fkw_index_set(a1, 2, 5)}
    ok &= hs == {Q(0), Q(-1, 5)}
    hs = {principal_w_h(a1, i.lam, i.mu, 3, 4) for i in fkw_index_set(a1, 3, 4)}
    ok &= hs == {Q(0), Q(1, 2), Q(1, 16)}
    el = time.time() - t0
    report(11, ok, el, f"{checked} vanishing checks, FKW fibers, c and h values")
