"""Exceptional pairs: vanishing and almost-convergence tests, torus scans,
the sl_n closed form with sheet combinatorics, and the classical-family scan.

The torus scan enumerates (1/u)Q*/Q* with integer arithmetic (numpy): a
coefficient vector c in [0,u)^r represents Lambda = (1/u) sum c_i kappa_i, and
(Lambda|alpha) in Z iff sum_i c_i (kappa_i|alpha) = 0 mod u.  The element
s = e^{2 pi i Lambda} of the adjoint group has order u / gcd(c, u).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction as Q
from math import gcd

import numpy as np

from .linalg import Vec, smul, vadd, vneg, vzero
from .nilpotent import (NilpotentDatum, Partition, dominance_order, family_of,
                        natural_dim, orbit_from_partition, orbits_from_partition,
                        so_sp_partitions)
from .roots import RootSystem

Half = Q(1, 2)


class ScanBudgetError(RuntimeError):
    pass


# -- per-weight tests --------------------------------------------------------


def vanishing_test(rw) -> bool:
    """True iff the reduced character vanishes identically (both criteria)."""
    rs = rw.rd.rs
    datum = rw.rd.datum
    beta = rw.beta_R
    by_b = any(rs.form(a, beta) % rw.u == 0 for a in datum.delta_f)
    # criterion (c): nonzero iff Delta^R_{Lambda,+} avoids Delta^{R,f}
    from .characters import delta_R_lambda_plus
    lam_plus = {aff.fin for aff in delta_R_lambda_plus(rw)}
    by_c = not lam_plus.isdisjoint(set(datum.delta_f))
    assert by_b == by_c, "vanishing criteria (b) and (c) disagree"
    return by_b


def _proportionality_class(form: tuple) -> tuple:
    """Normalize a nonzero rational linear form up to positive scalar."""
    lead = next((c for c in form if c != 0), None)
    assert lead is not None
    s = abs(lead)
    cls = tuple(c / s for c in form)
    return cls


def almost_convergence_test(rw, mode: str = "both"):
    """Thm-2.4 style convergence test for a nonvanishing weight.

    'multiset': the restrictions of Delta^R_{Lambda,+} to h^f match those of
    Delta^{R,0}_+ u Delta^{R,1/2}_+ up to positive rational multiples, with
    multiplicities.  'positivity': the set/count criterion
    Delta^R_Lambda avoids Delta^{R,f} and |Delta^R_Lambda| = |Delta^0 u Delta^{1/2}|.
    """
    from .characters import delta_R_lambda, delta_R_lambda_plus
    rs = rw.rd.rs
    datum = rw.rd.datum

    def multiset_mode():
        if vanishing_test(rw):
            return False
        lhs = []
        for aff in delta_R_lambda_plus(rw):
            form = datum.restrict_hf(aff.fin)
            if all(c == 0 for c in form):
                return False
            lhs.append(_proportionality_class(form))
        rhs = []
        for a in list(datum.delta_R_j_plus(0)) + list(datum.delta_R_j_plus(Half)):
            rhs.append(_proportionality_class(datum.restrict_hf(a)))
        return sorted(lhs) == sorted(rhs)

    def positivity_mode():
        lam = delta_R_lambda(rw)
        if any(aff.fin in set(datum.delta_f) for aff in lam):
            return False
        target = len(datum.delta_j.get(Q(0), ())) + len(datum.delta_j.get(Half, ()))
        return len(lam) == target

    if mode == "multiset":
        return multiset_mode()
    if mode == "positivity":
        return positivity_mode()
    a, b = multiset_mode(), positivity_mode()
    assert a == b, "multiset and positivity convergence modes disagree"
    return a


# -- torus elements and the scan ----------------------------------------------


@dataclass(frozen=True)
class TorusElement:
    rs: RootSystem
    lam: Vec
    order: int
    delta_lam: tuple[Vec, ...]

    @classmethod
    def from_coeffs(cls, rs: RootSystem, coeffs, u: int) -> "TorusElement":
        basis = rs.lattice_bases["Qstar"]
        lam = vzero(rs.dim)
        for c, b in zip(coeffs, basis):
            lam = vadd(lam, smul(Q(int(c), u), b))
        order = u // gcd(u, *(int(c) for c in coeffs)) if any(coeffs) else 1
        dl = tuple(sorted(a for a in rs.roots if rs.form(lam, a) % 1 == 0))
        return cls(rs, lam, order, dl)

    def centralizer_dim(self) -> int:
        return self.rs.rank + len(self.delta_lam)


@dataclass(frozen=True)
class TorusScanResult:
    u: int
    target: int              # |Delta^0 u Delta^{1/2}|
    min_card: int | None     # min |Delta_Lambda| over kept elements (exact order)
    attained: bool
    cond_i: bool
    cond_ii: bool
    exceptional: bool
    kept: int
    min_card_div: int | None     # same under the order-dividing interpretation
    cond_i_div: bool = True
    cond_ii_div: bool = False
    exceptional_div: bool = False

    @property
    def interpretations_agree(self) -> bool:
        return self.exceptional == self.exceptional_div


def torus_scan(datum: NilpotentDatum, u: int, budget: int = 10 ** 7,
               chunk: int = 200000) -> TorusScanResult:
    """Thm-2.6 check at denominator u over all of (1/u)Q*/Q*."""
    rs = datum.rs
    if gcd(u, rs.lacety) != 1:
        raise ValueError(f"u = {u} not coprime to the lacety {rs.lacety}")
    r = rs.rank
    total = u ** r
    if total > budget:
        raise ScanBudgetError(f"scan size {total} exceeds budget {budget}")
    basis = rs.lattice_bases["Qstar"]
    pair = np.array([[int(rs.form(b, a)) for a in rs.roots] for b in basis],
                    dtype=np.int64)
    root_index = {a: i for i, a in enumerate(rs.roots)}
    f_idx = np.array([root_index[a] for a in datum.delta_f], dtype=np.int64)
    target = len(datum.delta_j.get(Q(0), ())) + len(datum.delta_j.get(Half, ()))

    min_card = None
    min_card_div = None
    attained = attained_div = False
    kept_count = 0

    def process(block: np.ndarray):
        nonlocal min_card, min_card_div, attained, attained_div, kept_count
        vals = (block @ pair) % u              # rows: torus elements
        integral = vals == 0
        if len(f_idx):
            keep = ~integral[:, f_idx].any(axis=1)
        else:
            keep = np.ones(len(block), dtype=bool)
        if not keep.any():
            return
        cards = integral[keep].sum(axis=1)
        g = np.gcd.reduce(np.concatenate([block[keep], np.full((keep.sum(), 1), u,
                                                               dtype=block.dtype)], axis=1), axis=1)
        exact = g == 1
        kept_count += int(keep.sum())
        if cards.size:
            m = int(cards.min())
            min_card_div = m if min_card_div is None else min(min_card_div, m)
            if (cards == target).any():
                attained_div = True
        ce = cards[exact]
        if ce.size:
            m = int(ce.min())
            min_card = m if min_card is None else min(min_card, m)
            if (ce == target).any():
                attained = True

    if r == 0:
        process(np.zeros((1, 0), dtype=np.int64))
    else:
        for start in range(0, total, chunk):
            ids = np.arange(start, min(start + chunk, total), dtype=np.int64)
            block = np.empty((len(ids), r), dtype=np.int64)
            rem = ids
            for j in range(r - 1, -1, -1):
                block[:, j] = rem % u
                rem = rem // u
            process(block)

    cond_i = min_card is None or min_card >= target
    cond_ii = attained
    cond_i_div = min_card_div is None or min_card_div >= target
    cond_ii_div = attained_div
    return TorusScanResult(
        u=u, target=target, min_card=min_card, attained=attained,
        cond_i=cond_i, cond_ii=cond_ii, exceptional=cond_i and cond_ii,
        kept=kept_count, min_card_div=min_card_div,
        cond_i_div=cond_i_div, cond_ii_div=cond_ii_div,
        exceptional_div=cond_i_div and cond_ii_div)


def torus_scan_slow(datum: NilpotentDatum, u: int) -> TorusScanResult:
    """Reference implementation over TorusElement objects (for tests)."""
    rs = datum.rs
    target = len(datum.delta_j.get(Q(0), ())) + len(datum.delta_j.get(Half, ()))
    kept = []
    for coeffs in itertools.product(range(u), repeat=rs.rank):
        t = TorusElement.from_coeffs(rs, coeffs, u)
        if set(t.delta_lam) & set(datum.delta_f):
            continue
        kept.append(t)
    exact = [t for t in kept if t.order == u]
    min_card = min((len(t.delta_lam) for t in exact), default=None)
    min_div = min((len(t.delta_lam) for t in kept), default=None)
    att = any(len(t.delta_lam) == target for t in exact)
    attd = any(len(t.delta_lam) == target for t in kept)
    ci = min_card is None or min_card >= target
    cid = min_div is None or min_div >= target
    return TorusScanResult(u, target, min_card, att, ci, att, ci and att,
                           len(kept), min_div, cid, attd, cid and attd)


# -- sl_n closed form and sheets ------------------------------------------------


def sln_closed_form(n: int, parts) -> set[int]:
    """Exceptional denominators of the orbit within 1 <= u <= n: {m} for f_m, else empty."""
    parts = tuple(sorted((int(p) for p in parts), reverse=True))
    assert sum(parts) == n
    m = parts[0]
    full, rest = divmod(n, m)
    shape = (m,) * full + ((rest,) if rest else ())
    return {m} if parts == shape else set()


@dataclass(frozen=True)
class SheetData:
    partition: Partition
    dual: Partition
    m: int
    eigenvalue_profile: tuple        # multiplicities of the m distinct eigenvalues
    is_fm: bool


@dataclass(frozen=True)
class SubsystemScan:
    max_rank: int
    max_size_at_max_rank: int
    target_size: int                  # |Delta^0 u Delta^{1/2}|
    equality_achieved: bool
    smaller_witness: bool             # rank n-m subsystem with |Phi| < target


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def sheet_data_sln(n: int, parts, max_bell: int = 12):
    """Sheet profile and the exhaustive root-subsystem verification (type A)."""
    if n > max_bell:
        raise ScanBudgetError(f"set-partition scan of {n} exceeds n <= {max_bell}")
    from .roots import build_root_system
    parts = tuple(sorted((int(p) for p in parts), reverse=True))
    part = Partition(parts)
    rs = build_root_system("A", n - 1)
    datum = orbit_from_partition(rs, parts)
    m = parts[0]
    dual = part.dual()
    profile = tuple(dual.parts)
    is_fm = sln_closed_form(n, parts) == {m}
    sheet = SheetData(part, dual, m, profile, is_fm)

    # reconstruct Jordan-block slot groups from the f-matrix entries;
    # roots within a block are exactly Delta^f
    fmat = datum.f_matrix
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a in range(n):
        for b in range(n):
            if fmat[a][b] != 0:
                ra, rbb = find(a), find(b)
                if ra != rbb:
                    parent[ra] = rbb
    group_of = [find(a) for a in range(n)]

    target = len(datum.delta_j.get(Q(0), ())) + len(datum.delta_j.get(Half, ()))
    best: dict[int, int] = {}
    equality = False
    smaller_witness = False
    for sp in set_partitions(list(range(n))):
        ok = all(len({group_of[a] for a in blk}) == len(blk) for blk in sp)
        if not ok:
            continue
        rank_phi = n - len(sp)
        size = sum(len(b) * (len(b) - 1) for b in sp)
        assert rank_phi <= n - m, "Prop 3.3(a) rank bound violated"
        assert size <= target, "Prop 3.3(a) size bound violated"
        best[rank_phi] = max(best.get(rank_phi, 0), size)
        if rank_phi == n - m:
            if size == target:
                equality = True
            if size < target:
                smaller_witness = True
    max_rank = max(best)
    scan = SubsystemScan(max_rank, best[max_rank], target, equality, smaller_witness)
    assert equality, "Prop 3.3(b): extremal subsystem must exist"
    assert smaller_witness == (not is_fm), "Prop 3.3(c) witness condition"
    return sheet, scan


# -- conjecture scan --------------------------------------------------------------


@dataclass(frozen=True)
class ExceptionalReport:
    algebra: str
    label: str
    partition: tuple | None
    principal_type: bool
    theta_x: Q
    verdicts: tuple                  # tuples (u, cond_i, cond_ii, exceptional, agree)
    exceptional_denominators: tuple
    closed_form: tuple | None        # for sl only
    is_zero_orbit: bool = False
    is_principal_orbit: bool = False

    def row(self) -> dict:
        return {
            "algebra": self.algebra,
            "orbit": self.label,
            "partition": list(self.partition) if self.partition else None,
            "principal_type": self.principal_type,
            "theta_x": self.theta_x,
            "verdicts": [
                {"u": u, "cond_i": ci, "cond_ii": cii, "exceptional": e,
                 "interpretations_agree": ag}
                for (u, ci, cii, e, ag) in self.verdicts],
            "exceptional_denominators": list(self.exceptional_denominators),
            "closed_form_match": (sorted(self.closed_form) ==
                                  sorted(self.exceptional_denominators))
            if self.closed_form is not None else None,
        }


def candidate_denominators(rs: RootSystem) -> list[int]:
    """I_0 u {1}: integers 1 <= u < h coprime to the lacety."""
    return [u for u in range(1, rs.h) if gcd(u, rs.lacety) == 1]


def orbit_report(datum: NilpotentDatum, us=None, budget: int = 10 ** 7) -> ExceptionalReport:
    rs = datum.rs
    us = list(us) if us is not None else candidate_denominators(rs)
    verdicts = []
    exc = []
    for u in us:
        res = torus_scan(datum, u, budget=budget)
        verdicts.append((u, res.cond_i, res.cond_ii, res.exceptional,
                         res.interpretations_agree))
        if res.exceptional:
            exc.append(u)
    closed = None
    if rs.type_label == "A":
        closed = tuple(sorted(sln_closed_form(natural_dim(rs), datum.partition.parts)
                              & set(us)))
    return ExceptionalReport(
        algebra=rs.name, label=datum.label,
        partition=datum.partition.parts if datum.partition else None,
        principal_type=datum.principal_type, theta_x=datum.theta_x,
        verdicts=tuple(verdicts), exceptional_denominators=tuple(exc),
        closed_form=closed,
        is_zero_orbit=all(p == 1 for p in datum.partition.parts) if datum.partition else False,
        is_principal_orbit=datum.partition is not None
        and datum.partition.parts == _principal_partition(rs))


def _principal_partition(rs: RootSystem) -> tuple:
    n = natural_dim(rs)
    return (n - 1, 1) if rs.type_label == "D" else (n,)


def conjecture_scan(rs: RootSystem, budget: int = 10 ** 7,
                    principal_type_only: bool = True,
                    threads: int = 1) -> list[ExceptionalReport]:
    """Scan every (principal-type) orbit of a classical algebra over I_0 u {1}."""
    data = []
    for p in so_sp_partitions(rs) if rs.type_label in ("B", "C", "D") else \
            [Partition(t) for t in _sl_partitions(natural_dim(rs))]:
        for d in orbits_from_partition(rs, p.parts):
            if principal_type_only and not d.principal_type:
                continue
            data.append(d)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as ex:
            reports = list(ex.map(lambda d: orbit_report(d, budget=budget), data))
    else:
        reports = [orbit_report(d, budget=budget) for d in data]
    return sorted(reports, key=lambda r: (r.partition or (), r.label))


def _sl_partitions(n: int):
    from .nilpotent import _partitions_of
    return list(_partitions_of(n))


def e0_and_phi(reports: list[ExceptionalReport]):
    """Non-principal nonzero exceptional orbits and their denominators."""
    e0 = {}
    for r in reports:
        if r.is_zero_orbit or r.is_principal_orbit:
            continue
        if r.exceptional_denominators:
            e0[r.label] = r.exceptional_denominators
    return e0


def phi_order_preserving(reports: list[ExceptionalReport]) -> bool:
    """Check phi respects the dominance order on the scanned E_0 (single-valued phi)."""
    items = [(Partition(r.partition), r.exceptional_denominators[0])
             for r in reports
             if r.partition and r.exceptional_denominators
             and not (r.is_zero_orbit or r.is_principal_orbit)]
    for (p1, u1), (p2, u2) in itertools.combinations(items, 2):
        rel = dominance_order(p1, p2)
        if rel == "contains" and not u1 >= u2:
            return False
        if rel == "contained" and not u2 >= u1:
            return False
    return True