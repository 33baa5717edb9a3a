"""Admissibility tests and enumeration of principal admissible weights.

Weights live on the untwisted side; the characters module transports them to
the Ramond-twisted picture.  A principal admissible weight of level
k = -h^vee + p/u is presented as (p, u, beta, ybar, Lambda^0) with
y = t_beta ybar and Lambda = y.(Lambda^0 + (k + h^vee - p) D), kept mod CK by
the representative with Lambda(D) = 0.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction as Q
from math import gcd

from .affine import (AffineVector, AffIso, KD, apair, finite, iso_from_weyl,
                     iso_translation, translate)
from .linalg import Vec, smul, solve, vadd, vneg, vsub, vzero
from .roots import RootSystem, WeylElement


class CriticalLevelError(ValueError):
    """k = -h^vee has no normalized characters."""


def level_pu(rs: RootSystem, k: Q) -> tuple[int, int]:
    """Write k + h^vee = p/u in lowest terms with u > 0."""
    k = Q(k)
    if k == -rs.h_dual:
        raise CriticalLevelError(f"critical level k = -{rs.h_dual}")
    t = k + rs.h_dual
    return t.numerator, t.denominator


def vacuum_admissible(rs: RootSystem, k: Q) -> tuple[bool, str | None]:
    """Whether kD is admissible, and which case ('i' or 'ii') applies."""
    p, u = level_pu(rs, Q(k))
    if p <= 0:
        return False, None
    if gcd(u, rs.lacety) == 1 and p >= rs.h_dual:
        return True, "i"
    if u % rs.lacety == 0 and p >= rs.h:
        return True, "ii"
    return False, None


def rho_hat(rs: RootSystem) -> AffineVector:
    return AffineVector(rs.rho, Q(rs.h_dual), Q(0))


def rho_hat_v(rs: RootSystem) -> AffineVector:
    return AffineVector(rs.rho_v, Q(rs.h), Q(0))


def dominant_weights(rs: RootSystem, level: int) -> list[AffineVector]:
    """P-hat_+ at the given level: dominant integral finite parts, D-coeff = level."""
    if level < 0:
        return []
    omegas = rs.lattice_bases["P"]
    out = []

    def rec(i, lam, room):
        if i == len(omegas):
            out.append(AffineVector(lam, Q(level), Q(0)))
            return
        step = rs.pair_coroot(omegas[i], rs.theta)
        a = 0
        while a * step <= room:
            rec(i + 1, lam, room - a * step)
            lam = vadd(lam, omegas[i])
            a += 1

    rec(0, vzero(rs.dim), Q(level))
    return sorted(out, key=lambda w: w.fin)


def dominant_coweights(rs: RootSystem, level: int) -> list[AffineVector]:
    """P-hat^vee_+ at the given level: (mu|alpha_i) in Z_+, (mu|theta) <= level."""
    if level < 0:
        return []
    kappas = rs.lattice_bases["Qstar"]
    out = []

    def rec(i, mu, room):
        if i == len(kappas):
            out.append(AffineVector(mu, Q(level), Q(0)))
            return
        step = rs.form(kappas[i], rs.theta)
        a = 0
        while a * step <= room:
            rec(i + 1, mu, room - a * step)
            mu = vadd(mu, kappas[i])
            a += 1

    rec(0, vzero(rs.dim), Q(level))
    return sorted(out, key=lambda w: w.fin)


@dataclass(frozen=True)
class PrincipalAdmissible:
    rs: RootSystem
    p: int
    u: int
    beta: Vec
    ybar: WeylElement
    lam0: AffineVector
    weight: AffineVector           # representative with weight(D) = 0

    @property
    def k(self) -> Q:
        return Q(self.p, self.u) - self.rs.h_dual

    @property
    def y(self) -> AffIso:
        return iso_translation(self.beta).compose(iso_from_weyl(self.ybar, self.rs.dim))

    def simple_set(self) -> frozenset:
        """y(S-hat_(u)) as a frozenset of (finite part, K-coefficient) pairs."""
        rs = self.rs
        elems = [AffineVector(vneg(rs.coroot(rs.theta)), Q(0), Q(self.u))]
        elems += [finite(rs.coroot(a)) for a in rs.simple_roots]
        y = self.y
        return frozenset((y(rs, e).fin, y(rs, e).k) for e in elems)


def _pos_cone(rs: RootSystem, fin: Vec) -> bool:
    """Whether a finite coroot is positive (equivalently its root is)."""
    return any(fin == rs.coroot(a) for a in rs.positive_roots)


def dual_marks(rs: RootSystem) -> list[int]:
    """Coefficients of theta^vee in the simple coroots (a_i^vee, i = 1..r)."""
    cor = [rs.coroot(a) for a in rs.simple_roots]
    cols = list(zip(*cor))
    sol = solve(cols, rs.coroot(rs.theta))
    assert sol is not None and all(c == int(c) for c in sol)
    return [int(c) for c in sol]


def _presentations(rs: RootSystem, p: int, u: int, lam0s):
    """Generate (beta, ybar, lam0, weight) cells; weights may repeat across cells.

    Simple-set images y(S-hat_(u)) inside Delta-hat^vee_+ are enumerated via
    the K-coefficient compositions sum a_i^vee n_i = u; beta is reconstructed
    from the dual basis of the transformed simple roots.
    """
    k = Q(p, u) - rs.h_dual
    rh = rho_hat(rs)
    marks = dual_marks(rs)
    kappas = rs.lattice_bases["Qstar"]
    pos_set = set(rs.positive_roots)
    shift = AffineVector(vzero(rs.dim), k + rs.h_dual - p, Q(0))
    for ybar in sorted(rs.weyl_group, key=lambda w: (len(w.word), w.word)):
        base = [ybar(a) for a in rs.simple_roots]
        pos = [a in pos_set for a in base]
        steps = [1 if rs.norm2(a) == 2 else rs.lacety for a in base]
        ranges = [range(0 if pos[i] else steps[i], u + 1, steps[i])
                  for i in range(rs.rank)]
        theta_neg_ok = vneg(ybar(rs.theta)) in pos_set
        for ns in itertools.product(*ranges):
            n0 = u - sum(a * n for a, n in zip(marks, ns))
            if n0 < 0 or (n0 == 0 and not theta_neg_ok):
                continue
            # beta = ybar(sum_i -n_i (alpha_i|alpha_i)/2 kappa_i) lies in Q*
            combo = vzero(rs.dim)
            for i in range(rs.rank):
                if ns[i]:
                    combo = vadd(combo, smul(-Q(ns[i]) * rs.norm2(rs.simple_roots[i]) / 2,
                                             kappas[i]))
            beta = ybar(combo)
            y = iso_translation(beta).compose(iso_from_weyl(ybar, rs.dim))
            for lam0 in lam0s:
                lam = y.shifted(rs, lam0 + shift, rh)
                yield PrincipalAdmissible(rs, p, u, beta, ybar, lam0, lam.drop_k())


def enumerate_principal_admissible(rs: RootSystem, p: int, u: int,
                                   lam0_filter=None) -> list[PrincipalAdmissible]:
    """All principal admissible weights of level -h^vee + p/u, mod CK."""
    if gcd(p, u) != 1 or gcd(u, rs.lacety) != 1 or p < rs.h_dual:
        return []
    lam0s = dominant_weights(rs, p - rs.h_dual)
    if lam0_filter is not None:
        lam0s = [l for l in lam0s if lam0_filter(l)]
    out: dict[tuple, PrincipalAdmissible] = {}
    for w in _presentations(rs, p, u, lam0s):
        key = (w.weight.fin, w.weight.d)
        if key not in out:
            out[key] = w
    return sorted(out.values(), key=lambda w: (w.weight.fin, w.weight.d))


def find_principal_admissible(rs: RootSystem, p: int, u: int, pred,
                              lam0s=None) -> PrincipalAdmissible | None:
    """First enumerated weight satisfying pred (presentation order)."""
    if gcd(p, u) != 1 or gcd(u, rs.lacety) != 1 or p < rs.h_dual:
        return None
    if lam0s is None:
        lam0s = dominant_weights(rs, p - rs.h_dual)
    for w in _presentations(rs, p, u, lam0s):
        if pred(w):
            return w
    return None


def is_nondegenerate(w: PrincipalAdmissible) -> bool:
    """Prop-style nondegeneracy: (beta|alpha) not in uZ for all roots alpha."""
    rs = w.rs
    cond_iv = all(rs.form(w.beta, a) % w.u != 0 for a in rs.roots)
    yinv = w.ybar.inverse()
    yb = yinv(w.beta)
    cond_iii = all(0 < -rs.form(yb, a) < w.u for a in rs.positive_roots)
    assert cond_iii == cond_iv, "conditions (iii) and (iv) disagree"
    return cond_iv


def delta_lambda(rs: RootSystem, beta: Vec, u: int) -> tuple[Vec, ...]:
    """{alpha in Delta : (alpha|beta) in uZ} (Ramond version uses finite parts)."""
    return tuple(sorted(a for a in rs.roots if rs.form(a, beta) % u == 0))


def admissibility_window_check(w: PrincipalAdmissible, nmax: int | None = None) -> bool:
    """(Lambda + rho-hat | alpha^vee) not in -Z_+ over a finite affine window."""
    rs = w.rs
    nmax = nmax if nmax is not None else 3 * w.u
    lam_rho = w.weight + rho_hat(rs)
    for a in rs.roots:
        cor = rs.coroot(a)
        scale = Q(2) / rs.norm2(a)
        for n in range(0, nmax + 1):
            if n == 0 and a not in set(rs.positive_roots):
                continue
            g = AffineVector(cor, Q(0), n * scale)
            val = apair(rs, lam_rho, g)
            if val <= 0 and val.denominator == 1:
                return False
    # imaginary coroots nK: value n(k + h^vee) > 0
    return True


# -- FKW parametrization ----------------------------------------------------


@dataclass(frozen=True)
class FKWImage:
    lam: AffineVector   # in P-hat_+^{p-h^vee}
    mu: AffineVector    # in P-hat_+^{vee, u-h}

    def key(self):
        return (self.lam.fin, self.mu.fin)


def fkw_forward(w: PrincipalAdmissible) -> FKWImage:
    """phi_ybar(Lambda) = (Lambda^0, uD - ybar^{-1}(beta) - rho-hat^vee)."""
    if not is_nondegenerate(w):
        raise ValueError("FKW map defined only for nondegenerate weights")
    rs = w.rs
    yb = w.ybar.inverse()(w.beta)
    mu = AffineVector(vsub(vneg(yb), rs.rho_v), Q(w.u - rs.h), Q(0))
    # dominance of the coweight component
    for a in rs.simple_roots:
        v = rs.form(mu.fin, a)
        assert v == int(v) and v >= 0
    assert rs.form(mu.fin, rs.theta) <= w.u - rs.h
    return FKWImage(w.lam0.drop_k(), mu)


def fkw_inverse(rs: RootSystem, p: int, u: int, ybar: WeylElement, img: FKWImage) -> AffineVector:
    """psi_ybar(lam, mu) = ybar.lam + (k+h^vee)(D - ybar(mu + rho-hat^vee)), mod CK."""
    k = Q(p, u) - rs.h_dual
    y = iso_from_weyl(ybar, rs.dim)
    lam_part = y.shifted(rs, img.lam, rho_hat(rs))
    _, D = KD(rs)
    tail = (D - y(rs, img.mu + rho_hat_v(rs))).scale(k + rs.h_dual)
    return (lam_part + tail).drop_k()


def extended_weyl_plus(rs: RootSystem) -> list[AffIso]:
    """W-tilde_+ = elements of W-tilde preserving the affine simple coroots."""
    targets = [AffineVector(vneg(rs.coroot(rs.theta)), Q(0), Q(1))] + \
              [finite(rs.coroot(a)) for a in rs.simple_roots]
    tset = {(t.fin, t.k) for t in targets}
    out = []
    for wbar in rs.weyl_group:
        # sigma must satisfy -(wbar alpha_i^vee | sigma) = k-coeff of the target
        rows, rhs = [], []
        ok = True
        for a in rs.simple_roots:
            img = wbar(rs.coroot(a))
            match = next((t for t in targets if t.fin == img), None)
            if match is None:
                ok = False
                break
            rows.append(list(img))
            rhs.append(-match.k / rs.form_scale)
        if not ok:
            continue
        if rs.dim > rs.rank:
            rows.append([Q(1)] * rs.dim)
            rhs.append(Q(0))
        sigma = solve(rows, rhs)
        if sigma is None:
            continue
        cand = iso_translation(sigma).compose(iso_from_weyl(wbar, rs.dim))
        imgs = {(cand(rs, t).fin, cand(rs, t).k) for t in targets}
        if imgs == tset:
            # sigma must lie in Q*
            if all(rs.form(sigma, a) % 1 == 0 for a in rs.simple_roots):
                out.append(cand)
    assert len(out) == rs.index_qstar_qv()
    return out


def fkw_index_set(rs: RootSystem, p: int, u: int) -> list[FKWImage]:
    """I_{p,u}: pairs modulo the diagonal W-tilde_+ action, canonical reps."""
    wplus = extended_weyl_plus(rs)
    lams = dominant_weights(rs, p - rs.h_dual)
    mus = dominant_coweights(rs, u - rs.h)
    seen = {}
    for lam in lams:
        for mu in mus:
            orbit = []
            for w in wplus:
                a, b = w(rs, lam).drop_k(), w(rs, mu).drop_k()
                orbit.append((a.fin, b.fin))
            key = min(orbit)
            if key not in seen:
                klam, kmu = key
                seen[key] = FKWImage(AffineVector(klam, lam.d, Q(0)),
                                     AffineVector(kmu, mu.d, Q(0)))
    return [seen[k] for k in sorted(seen)]


def fkw_global_classes(rs: RootSystem, p: int, u: int):
    """Group Prn^k by canonical FKW image; fibers must have cardinality |W|."""
    weights = [w for w in enumerate_principal_admissible(rs, p, u) if is_nondegenerate(w)]
    wplus = extended_weyl_plus(rs)
    classes: dict[tuple, list[PrincipalAdmissible]] = {}
    for w in weights:
        img = fkw_forward(w)
        orbit = [( (t(rs, img.lam).drop_k()).fin, (t(rs, img.mu).drop_k()).fin ) for t in wplus]
        classes.setdefault(min(orbit), []).append(w)
    return classes
