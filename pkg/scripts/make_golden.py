#!/usr/bin/env python3
"""Regenerate the golden q-series fixtures used by the test suite.

Fixtures freeze the worked sl3-minimal and G2 short-root identities: the
denominator psi, the surviving reduced character at p = 3, and both sides of
the G2 extra-factor identity, as serialized series records.
"""

import json
import sys
from fractions import Fraction as Q
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from wexc.admissible import enumerate_principal_admissible
from wexc.affine import finite
from wexc.characters import (denominator_psi, ep_character, extra_factor_c,
                             ramond_data, to_ramond, z_context)
from wexc.exceptional import vanishing_test
from wexc.linalg import smul
from wexc.nilpotent import orbit_from_partition, orbit_from_root_vector
from wexc.qseries import f_series
from wexc.roots import parse_algebra

OUT = Path(__file__).resolve().parents[1] / "tests" / "golden"


def dump(name: str, series, extra=None):
    payload = {"nz": series.nz, "M": series.M,
               "cutoff": f"{Q(series.cutoff).numerator}/{Q(series.cutoff).denominator}",
               "records": series.to_records()}
    if extra:
        payload.update(extra)
    (OUT / name).write_text(json.dumps(payload, indent=1, sort_keys=True) + "\n")
    print("wrote", name, f"({len(series.terms)} terms)")


def main():
    OUT.mkdir(exist_ok=True)

    rs = parse_algebra("A2")
    datum = orbit_from_partition(rs, [2, 1])
    rd = ramond_data(datum)
    L2 = rd.T(rs, finite(rs.lattice_bases["Qstar"][1]))
    zctx = z_context(rd, basis=[L2.fin], u=2)
    psi = denominator_psi(datum, zctx, Q(10))
    dump("sl3_minimal_psi.json", psi, {"z_basis": "Lambda_2^R"})

    ws = enumerate_principal_admissible(rs, 3, 2)
    rw = next(to_ramond(rd, w) for w in ws if not vanishing_test(to_ramond(rd, w)))
    b = ep_character(rw, zctx, Q(6))
    dump("sl3_minimal_chi_p3.json", b.chi)

    g2 = parse_algebra("G2")
    dg = orbit_from_root_vector(g2, g2.theta_s)
    rdg = ramond_data(dg)
    sigma = dg.delta_R_j_plus(Q(1, 2))[0]
    b0 = dg.hf_basis[0]
    basis = [smul(Q(1) / g2.form(sigma, b0), b0)]
    zg = z_context(rdg, basis=basis, u=2)
    wsg = enumerate_principal_admissible(g2, 5, 2)
    rwg = next(to_ramond(rdg, w) for w in wsg if not vanishing_test(to_ramond(rdg, w)))
    cut = Q(dg.dim_gf, 24) + 11
    C = extra_factor_c(rwg, zg, cut)
    psig = denominator_psi(dg, zg, cut, cross_check=False)
    lhs = C * f_series(cut, [Q(2)], zg.M, tau_scale=2)
    rhs = (psig * f_series(cut, [Q(1)], zg.M)).mul_monomial(t_exp=Q(-2))
    win = min(lhs.cutoff, rhs.cutoff)
    assert lhs.truncate(win).terms == rhs.truncate(win).terms
    dump("g2_extra_factor_lhs.json", lhs.truncate(Q(11)))


if __name__ == "__main__":
    main()
