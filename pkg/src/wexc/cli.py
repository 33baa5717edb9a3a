"""Command-line surface: exact outputs as JSON/TSV/pretty text.

Every command renders an envelope {"command", "meta", "rows"}.  Rational
numbers serialize as strings "a/b"; floating point values carry an explicit
error bound tag.  Identical invocations produce byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction as Q
from pathlib import Path

from .admissible import (enumerate_principal_admissible, is_nondegenerate,
                         fkw_index_set, vacuum_admissible)
from .nilpotent import (InvalidPartitionError, Partition, orbit_from_partition,
                        orbit_from_root_vector, orbit_principal, orbit_zero,
                        orbits_from_partition, family_of)
from .roots import RootSystem, UnsupportedAlgebraError, build_root_system, parse_algebra


class UsageError(ValueError):
    pass


@dataclass
class Config:
    truncation_order: Q = Q(10)
    scan_budget: int = 10 ** 7
    numeric_tolerance: float = 1e-8
    output_format: str = "json"
    threads: int = 1

    def __post_init__(self):
        if self.scan_budget <= 0 or self.truncation_order < 1:
            raise UsageError("budget must be positive and order >= 1")
        if self.output_format not in ("json", "tsv", "pretty"):
            raise UsageError(f"unknown output format {self.output_format}")


def load_config(path: str | None) -> Config:
    cfg = Config()
    if path is None:
        return cfg
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise UsageError(f"bad config line: {line}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key == "truncation_order":
            cfg.truncation_order = Q(val)
        elif key == "scan_budget":
            cfg.scan_budget = int(val)
        elif key == "numeric_tolerance":
            cfg.numeric_tolerance = float(val)
        elif key == "output_format":
            cfg.output_format = val
        elif key == "threads":
            cfg.threads = int(val)
        else:
            raise UsageError(f"unknown config key {key}")
    cfg.__post_init__()
    return cfg


def encode(obj):
    """Recursively encode values: Fractions exact, floats tagged approximate."""
    if isinstance(obj, Q):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return {"approx": obj, "error_bound": 0.0}
    if isinstance(obj, complex):
        return {"approx_re": obj.real, "approx_im": obj.imag, "error_bound": 0.0}
    if isinstance(obj, dict):
        return {str(k): encode(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [encode(v) for v in obj]
    return str(obj)


def approx(value: float, bound: float) -> dict:
    return {"approx": value, "error_bound": bound}


def emit(command: str, rows: list, meta: dict, cfg: Config, out=None) -> None:
    out = out or sys.stdout
    payload = {"command": command, "meta": encode(meta), "rows": [encode(r) for r in rows]}
    if cfg.output_format == "json":
        json.dump(payload, out, sort_keys=True, indent=2)
        out.write("\n")
    elif cfg.output_format == "tsv":
        keys = sorted({k for r in payload["rows"] for k in r})
        out.write("\t".join(keys) + "\n")
        for r in payload["rows"]:
            out.write("\t".join(json.dumps(r.get(k), sort_keys=True) for k in keys) + "\n")
    else:
        out.write(f"# {command}\n")
        for k in sorted(payload["meta"]):
            out.write(f"{k} = {json.dumps(payload['meta'][k], sort_keys=True)}\n")
        for r in payload["rows"]:
            out.write(json.dumps(r, sort_keys=True) + "\n")


def _vec(v) -> list:
    return [Q(x) for x in v]


def _series_rows(s) -> list:
    return s.to_records()


def _parse_partition(text: str) -> tuple:
    try:
        return tuple(sorted((int(t) for t in text.split(",")), reverse=True))
    except ValueError as exc:
        raise UsageError(f"bad partition {text!r}; expected e.g. 2,2,1") from exc


def _algebra_from_family(family: str, n: int) -> RootSystem:
    if family == "sl":
        return build_root_system("A", n - 1)
    if family == "so":
        if n < 5:
            raise UsageError("so needs N >= 5")
        return build_root_system("B" if n % 2 else "D", n // 2)
    if family == "sp":
        if n % 2 or n < 4:
            raise UsageError("sp needs even N >= 4")
        return build_root_system("C", n // 2)
    raise UsageError(f"unknown family {family!r} (want sl/so/sp or a label like A2)")


def _resolve_data(args):
    """(RootSystem, [NilpotentDatum]) from family/label + orbit options."""
    fam = args.algebra
    if fam in ("sl", "so", "sp"):
        if args.n is None:
            raise UsageError("--n is required with a family name")
        rs = _algebra_from_family(fam, args.n)
    else:
        rs = parse_algebra(fam)
    if getattr(args, "root_vector", None):
        gamma = rs.theta_s if args.root_vector == "short" else rs.theta
        return rs, [orbit_from_root_vector(rs, gamma)]
    part = getattr(args, "partition", None)
    if part in ("principal",):
        return rs, [orbit_principal(rs)]
    if part in ("zero",):
        return rs, [orbit_zero(rs)]
    if part is None:
        raise UsageError("--partition (or --root-vector for G2) is required")
    return rs, orbits_from_partition(rs, _parse_partition(part))


# -- subcommand implementations ------------------------------------------------


def cmd_root(args, cfg: Config):
    rs = parse_algebra(args.label)
    rows = [{
        "algebra": rs.name, "rank": rs.rank, "h": rs.h, "hdual": rs.h_dual,
        "lacety": rs.lacety, "positive_roots": len(rs.positive_roots),
        "dim_g": rs.dim_g, "weyl_order": len(rs.weyl_group),
        "theta": _vec(rs.theta), "theta_short": _vec(rs.theta_s),
        "rho": _vec(rs.rho), "rho_dual": _vec(rs.rho_v),
        "index_p_qv": rs.index_p_qv(), "index_qstar_qv": rs.index_qstar_qv(),
    }]
    emit("root", rows, {"label": args.label}, cfg)


def cmd_orbit(args, cfg: Config):
    rs, data = _resolve_data(args)
    rows = []
    for d in data:
        rows.append({
            "algebra": rs.name, "orbit": d.label,
            "principal_type": d.principal_type,
            "dim_gf": d.dim_gf, "dim_hf": d.dim_hf,
            "x": _vec(d.x),
            "grading_dims": {str(j): v for j, v in sorted(d.dim_gj.items())},
            "gamma_roots": [_vec(g) for g in d.gamma_list],
            "new_positive": [_vec(a) for a in d.delta_new_plus],
            "theta_x": d.theta_x,
        })
    emit("orbit", rows, {"algebra": rs.name}, cfg)


def cmd_admissible(args, cfg: Config):
    if args.algebra in ("sl", "so", "sp"):
        rs = _algebra_from_family(args.algebra, args.n)
    else:
        rs = parse_algebra(args.algebra)
    if args.vacuum_k is not None:
        k = Q(args.vacuum_k)
        ok, case = vacuum_admissible(rs, k)
        emit("admissible", [{"k": k, "admissible": ok, "case": case}],
             {"algebra": rs.name, "mode": "vacuum"}, cfg)
        return
    if args.p is None or args.u is None:
        raise UsageError("need --p and --u (or --vacuum-k)")
    ws = enumerate_principal_admissible(rs, args.p, args.u)
    rows = []
    for w in ws:
        nd = is_nondegenerate(w)
        if args.nondegenerate and not nd:
            continue
        rows.append({"weight": _vec(w.weight.fin), "level": w.k,
                     "beta": _vec(w.beta), "ybar_word": list(w.ybar.word),
                     "lam0": _vec(w.lam0.fin), "nondegenerate": nd})
    emit("admissible", rows,
         {"algebra": rs.name, "p": args.p, "u": args.u, "count": len(rows)}, cfg)


def cmd_char(args, cfg: Config):
    from .characters import ep_character, ramond_data, to_ramond, z_context
    from .exceptional import vanishing_test
    order = Q(args.order) if args.order else cfg.truncation_order
    rs, data = _resolve_data(args)
    datum = data[0]
    if len(data) > 1 and args.very_even_label:
        datum = next(d for d in data if d.label.endswith(args.very_even_label))
    rd = ramond_data(datum)
    zctx = z_context(rd, u=args.u)
    rows = []
    for w in enumerate_principal_admissible(rs, args.p, args.u):
        rw = to_ramond(rd, w)
        if vanishing_test(rw):
            if not args.include_vanishing:
                continue
            rows.append({"weight": _vec(w.weight.fin), "vanishes": True})
            continue
        b = ep_character(rw, zctx, order)
        rows.append({"weight": _vec(w.weight.fin), "vanishes": False,
                     "h_min": b.h_min, "central_charge": b.c, "s_f": b.s_f,
                     "z_scale": zctx.M, "series": _series_rows(b.chi)})
    emit("char", rows, {"algebra": rs.name, "orbit": datum.label,
                        "p": args.p, "u": args.u, "order": order}, cfg)


def cmd_extra_factor(args, cfg: Config):
    from .characters import (extra_factor, match_up_to_sign, ramond_data,
                             sln_extra_factor_closed_form, to_ramond, z_context)
    from .exceptional import vanishing_test
    from .admissible import dominant_weights, find_principal_admissible
    order = Q(args.order) if args.order else cfg.truncation_order
    rs, data = _resolve_data(args)
    datum = data[0]
    rd = ramond_data(datum)
    zctx = z_context(rd, u=args.u)
    p = args.p
    if p is None:
        p = rs.h_dual
        from math import gcd
        while gcd(p, args.u) != 1:
            p += 1
    w = find_principal_admissible(
        rs, p, args.u, pred=lambda w: not vanishing_test(to_ramond(rd, w)),
        lam0s=dominant_weights(rs, p - rs.h_dual)[:1])
    if w is None:
        w = find_principal_admissible(
            rs, p, args.u, pred=lambda w: not vanishing_test(to_ramond(rd, w)))
    if w is None:
        emit("extra-factor", [], {"algebra": rs.name, "orbit": datum.label,
                                  "p": p, "u": args.u,
                                  "note": "no nonvanishing weight"}, cfg)
        return
    rw = to_ramond(rd, w)
    ef = extra_factor(rw, zctx, order)
    row = {"algebra": rs.name, "orbit": datum.label, "p": p, "u": args.u,
           "weight": _vec(w.weight.fin), "z_scale": zctx.M,
           "quotient_series": _series_rows(ef.quotient) if ef.quotient else None}
    if rs.type_label == "A" and ef.quotient is not None:
        from .nilpotent import natural_dim
        closed = sln_extra_factor_closed_form(natural_dim(rs), args.u,
                                              ef.quotient.cutoff, zctx.nz, zctx.M)
        row["closed_form_sign"] = match_up_to_sign(ef.quotient, closed)
    emit("extra-factor", [row], {"order": order}, cfg)


def cmd_exceptional(args, cfg: Config):
    from .exceptional import orbit_report
    rs, data = _resolve_data(args)
    rows = [orbit_report(d, budget=cfg.scan_budget).row() for d in data]
    emit("exceptional", rows, {"algebra": rs.name}, cfg)


def cmd_scan(args, cfg: Config):
    from .exceptional import conjecture_scan, e0_and_phi, phi_order_preserving
    rows = []
    done_keys = set()
    out_path = Path(args.out) if args.out else None
    if out_path and out_path.exists():
        for line in out_path.read_text().splitlines():
            if line.strip():
                done_keys.add(json.loads(line)["orbit_key"])
    sink = out_path.open("a") if out_path else None
    for n in args.N:
        if args.family == "so" and n < 5:
            continue
        rs = _algebra_from_family(args.family, n)
        reports = conjecture_scan(rs, budget=cfg.scan_budget, threads=cfg.threads)
        for r in reports:
            key = f"{r.algebra}:{r.label}"
            if key in done_keys:
                continue
            row = r.row()
            row["orbit_key"] = key
            rows.append(row)
            if sink:
                sink.write(json.dumps(encode(row), sort_keys=True) + "\n")
                sink.flush()
        e0 = e0_and_phi(reports)
        rows.append({"orbit_key": f"{rs.name}:summary",
                     "E0": {k: list(v) for k, v in e0.items()},
                     "phi_order_preserving": phi_order_preserving(reports)})
    if sink:
        sink.close()
    emit("scan", rows, {"family": args.family, "N": list(args.N)}, cfg)


def cmd_check(args, cfg: Config):
    rows = []
    if args.which == "triple-product":
        from .qseries import eta, f_series, theta_series
        for sf in (Q(1), Q(1, 2), Q(2, 3), Q(3, 4), Q(5, 6)):
            M = sf.denominator
            th = theta_series(Q(30), [sf], M)
            lhs = eta(Q(30), nz=1, M=M) * f_series(Q(30), [sf], M)
            ok = lhs.truncate(th.cutoff).terms == th.truncate(lhs.cutoff).terms
            rows.append({"check": "triple-product", "s_form": sf, "order": 30, "pass": ok})
    elif args.which == "modular":
        from .qseries import eta, f_series
        import cmath
        e = eta(Q(60))
        for tau in (1j, 1.3j):
            lhs, _ = e.evaluate(-1 / tau)
            rhs, _ = e.evaluate(tau)
            err = abs(lhs - (-1j * tau) ** 0.5 * rhs)
            rows.append({"check": "eta-S", "tau_im": float(tau.imag),
                         "error": approx(err, 1e-12), "pass": err < 1e-10})
        f = f_series(Q(80), [Q(1)], M=1)
        tau, s = 1.1j, 0.3
        lhs, _ = f.evaluate(-1 / tau, [s / tau])
        rhs, _ = f.evaluate(tau, [s])
        err = abs(lhs - (-1j) * cmath.exp(1j * cmath.pi * s * s / tau) * rhs)
        rows.append({"check": "f-S", "error": approx(err, 1e-10), "pass": err < 1e-8})
    elif args.which == "strange":
        from .characters import strange_formula_check
        from .roots import build_root_system
        cases = [("A1", "principal", 3, 2), ("A2", "2,1", 3, 2)]
        for label, part, p, u in cases:
            rs = parse_algebra(label)
            d = orbit_principal(rs) if part == "principal" else \
                orbit_from_partition(rs, _parse_partition(part))
            res = strange_formula_check(d, p, u)
            rows.append({"check": "strange", "algebra": label, "orbit": d.label,
                         "p": p, "u": u, "lhs": res.lhs, "rhs": res.rhs,
                         "pass": res.holds})
    elif args.which == "det-identity":
        from .characters import determinant_identity_pair, ramond_data, z_context
        for label, part in [("A2", "2,1"), ("A3", "2,2")]:
            rs = parse_algebra(label)
            d = orbit_from_partition(rs, _parse_partition(part))
            rd = ramond_data(d)
            zctx = z_context(rd)
            lhs, rhs = determinant_identity_pair(d, zctx, Q(8))
            rows.append({"check": "det-identity", "algebra": label,
                         "orbit": d.label, "order": 8, "pass": lhs.terms == rhs.terms})
    else:
        raise UsageError(f"unknown check {args.which}")
    emit("check", rows, {"which": args.which}, cfg)
    if not all(r["pass"] for r in rows):
        raise SystemExit(1)


def cmd_principal_w(args, cfg: Config):
    from .characters import (principal_w_central_charge, principal_w_character,
                             principal_w_h)
    order = Q(args.order) if args.order else cfg.truncation_order
    rs = parse_algebra(args.algebra)
    c = principal_w_central_charge(rs, args.p, args.u)
    rows = []
    for img in fkw_index_set(rs, args.p, args.u):
        h = principal_w_h(rs, img.lam, img.mu, args.p, args.u)
        s = principal_w_character(rs, img.lam, img.mu, args.p, args.u, order)
        rows.append({"lam": _vec(img.lam.fin), "mu": _vec(img.mu.fin),
                     "h": h, "series": _series_rows(s)})
    emit("principal-w", rows,
         {"algebra": rs.name, "p": args.p, "u": args.u, "central_charge": c,
          "order": order}, cfg)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    sup = argparse.SUPPRESS
    common.add_argument("--config", default=sup, help="key=value config file")
    common.add_argument("--format", dest="output_format", default=sup,
                        choices=["json", "tsv", "pretty"])
    common.add_argument("--json", dest="output_format", action="store_const",
                        const="json", default=sup)
    common.add_argument("--tsv", dest="output_format", action="store_const",
                        const="tsv", default=sup)
    common.add_argument("--threads", type=int, default=sup)
    common.add_argument("--budget", type=int, default=sup, help="torus scan budget")
    ap = argparse.ArgumentParser(prog="wexc", parents=[common],
                                 description="Exact W-algebra characters and exceptional pairs")
    sub = ap.add_subparsers(dest="cmd", required=True)

    def sub_parser(name, **kw):
        return sub.add_parser(name, parents=[common], **kw)

    p = sub_parser("root", help="root system data")
    p.add_argument("label")

    def add_orbit_args(p, need_pu=False):
        p.add_argument("algebra", help="sl/so/sp or a label like A2, G2")
        p.add_argument("--n", type=int, default=None, help="N of sl_N/so_N/sp_N")
        p.add_argument("--partition", default=None)
        p.add_argument("--root-vector", choices=["short", "long"], default=None)
        p.add_argument("--very-even-label", choices=["I", "II"], default=None)
        if need_pu:
            p.add_argument("--p", type=int, required=False)
            p.add_argument("--u", type=int, required=True)
            p.add_argument("--order", default=None)

    p = sub_parser("orbit", help="nilpotent orbit data")
    add_orbit_args(p)

    p = sub_parser("admissible", help="principal admissible weights")
    p.add_argument("algebra")
    p.add_argument("--n", type=int, default=None)
    p.add_argument("--p", type=int, default=None)
    p.add_argument("--u", type=int, default=None)
    p.add_argument("--nondegenerate", action="store_true")
    p.add_argument("--vacuum-k", default=None, help="test Prop-style vacuum admissibility of k")

    p = sub_parser("char", help="reduced Euler-Poincare characters")
    add_orbit_args(p, need_pu=True)
    p.add_argument("--include-vanishing", action="store_true")

    p = sub_parser("extra-factor", help="extra factor C/psi with closed-form comparison")
    add_orbit_args(p, need_pu=True)

    p = sub_parser("exceptional", help="per-denominator exceptionality verdicts")
    add_orbit_args(p)

    p = sub_parser("scan", help="conjecture scan over a classical family")
    p.add_argument("family", choices=["so", "sp", "sl"])
    p.add_argument("--N", type=int, nargs="+", required=True)
    p.add_argument("--out", default=None, help="JSONL output; resumes by orbit key")

    p = sub_parser("check", help="named identity checks")
    p.add_argument("which", choices=["strange", "modular", "triple-product", "det-identity"])

    p = sub_parser("principal-w", help="principal W-algebra minimal model data")
    p.add_argument("algebra")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--u", type=int, required=True)
    p.add_argument("--order", default=None)

    return ap


COMMANDS = {
    "root": cmd_root,
    "orbit": cmd_orbit,
    "admissible": cmd_admissible,
    "char": cmd_char,
    "extra-factor": cmd_extra_factor,
    "exceptional": cmd_exceptional,
    "scan": cmd_scan,
    "check": cmd_check,
    "principal-w": cmd_principal_w,
}


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = load_config(getattr(args, "config", None))
        if getattr(args, "output_format", None):
            cfg.output_format = args.output_format
        if getattr(args, "threads", None):
            cfg.threads = args.threads
        if getattr(args, "budget", None):
            cfg.scan_budget = args.budget
        COMMANDS[args.cmd](args, cfg)
        return 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 2
    except (UnsupportedAlgebraError, InvalidPartitionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)


if __name__ == "__main__":
    sys.exit(main())
