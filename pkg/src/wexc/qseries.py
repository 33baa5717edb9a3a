"""Exact truncated series in rational powers of q.

A QSeries is a finite sum of monomials

    coeff * q^(q_exp) * prod_i zeta_i^(n_i) * e^(2 pi i t_exp t),

with integer coefficients, rational q_exp and t_exp, and integer z-exponents
n_i on the formal variables zeta_i = e^(pi i z_i / M) for a fixed scale M.
``cutoff`` is the absolute validity bound: every monomial with q-exponent
<= cutoff is present with its exact coefficient.

All arithmetic is exact; an operation that would produce a non-integer
coefficient raises NonIntegralCoefficient (this is how a misconfigured scale
M or a non-unit division surfaces).
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from fractions import Fraction as Q

Key = tuple  # (q_exp: Q, z_exps: tuple[int, ...], t_exp: Q)


class NonIntegralCoefficient(ArithmeticError):
    pass


class DivisionError(ArithmeticError):
    pass


def _as_int(c):
    if isinstance(c, int):
        return c
    if isinstance(c, Q):
        if c.denominator != 1:
            raise NonIntegralCoefficient(f"non-integer coefficient {c}")
        return c.numerator
    raise NonIntegralCoefficient(f"bad coefficient {c!r}")


@dataclass
class QSeries:
    nz: int
    M: int
    cutoff: Q
    terms: dict

    def __post_init__(self):
        self.cutoff = Q(self.cutoff)
        clean = {}
        for (q, z, t), c in self.terms.items():
            c = _as_int(c)
            if c == 0 or q > self.cutoff:
                continue
            key = (Q(q), tuple(int(n) for n in z), Q(t))
            assert len(key[1]) == self.nz
            clean[key] = clean.get(key, 0) + c
        self.terms = {k: v for k, v in clean.items() if v != 0}

    # -- basic queries ------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def low(self) -> Q:
        """Least q-exponent, or the cutoff for the zero series."""
        return min((k[0] for k in self.terms), default=self.cutoff)

    def q_support(self):
        return sorted({k[0] for k in self.terms})

    def coefficient(self, q_exp, z_exps=None, t_exp=None):
        q_exp = Q(q_exp)
        if z_exps is not None:
            return self.terms.get((q_exp, tuple(z_exps), Q(t_exp or 0)), 0)
        return {k: v for k, v in self.terms.items() if k[0] == q_exp}

    def q_coefficients(self) -> dict:
        """q-exponent -> integer coefficient; requires a pure q-series."""
        out = {}
        for (q, z, t), c in self.terms.items():
            assert all(n == 0 for n in z) and t == 0, "not a pure q-series"
            out[q] = out.get(q, 0) + c
        return out

    def _compat(self, other: "QSeries"):
        if (self.nz, self.M) != (other.nz, other.M):
            raise ValueError("incompatible series contexts")

    # -- ring operations ----------------------------------------------------

    def __add__(self, other: "QSeries") -> "QSeries":
        self._compat(other)
        cut = min(self.cutoff, other.cutoff)
        terms = dict(self.terms)
        for k, v in other.terms.items():
            terms[k] = terms.get(k, 0) + v
        return QSeries(self.nz, self.M, cut, terms)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return self + other.scale(-1)

    def scale(self, c: int) -> "QSeries":
        return QSeries(self.nz, self.M, self.cutoff,
                       {k: _as_int(c) * v for k, v in self.terms.items()})

    def __mul__(self, other: "QSeries") -> "QSeries":
        self._compat(other)
        cut = min(self.cutoff + other.low(), other.cutoff + self.low())
        items2 = sorted(other.terms.items(), key=lambda kv: kv[0][0])
        out: dict = {}
        for (q1, z1, t1), c1 in sorted(self.terms.items(), key=lambda kv: kv[0][0]):
            for (q2, z2, t2), c2 in items2:
                q = q1 + q2
                if q > cut:
                    break
                key = (q, tuple(a + b for a, b in zip(z1, z2)), t1 + t2)
                out[key] = out.get(key, 0) + c1 * c2
        return QSeries(self.nz, self.M, cut, out)

    def mul_monomial(self, q_exp=0, z_exps=None, t_exp=0, coeff=1) -> "QSeries":
        q_exp, t_exp = Q(q_exp), Q(t_exp)
        z = tuple(z_exps) if z_exps is not None else (0,) * self.nz
        return QSeries(self.nz, self.M, self.cutoff + q_exp,
                       {(q + q_exp, tuple(a + b for a, b in zip(zz, z)), t + t_exp): coeff * c
                        for (q, zz, t), c in self.terms.items()})

    def truncate(self, cutoff) -> "QSeries":
        cutoff = min(Q(cutoff), self.cutoff)
        return QSeries(self.nz, self.M, cutoff,
                       {k: v for k, v in self.terms.items() if k[0] <= cutoff})

    def power(self, n: int) -> "QSeries":
        assert n >= 0
        out = one(self.nz, self.M, self.cutoff + Q(max(n - 1, 0)) * self.low())
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out

    def __truediv__(self, other: "QSeries") -> "QSeries":
        """Exact division; the divisor's minimal block must reduce to a unit."""
        self._compat(other)
        if other.is_zero():
            raise DivisionError("division by zero series")
        t_vals = {k[2] for k in other.terms}
        if len(t_vals) != 1:
            raise DivisionError("divisor must have a single t-exponent")
        t_d = t_vals.pop()
        low_d = other.low()
        d_by_q: dict = {}
        for (q, z, t), c in other.terms.items():
            d_by_q.setdefault(q - low_d, {})[z] = c
        d0 = d_by_q[Q(0)]
        lead = max(d0)
        if abs(d0[lead]) != 1:
            raise DivisionError(f"divisor leading coefficient {d0[lead]} is not a unit")

        cut = min(self.cutoff, other.cutoff + self.low() - low_d) - low_d
        pending: dict = {}
        for (q, z, t), c in self.terms.items():
            pending.setdefault((q - low_d, t - t_d), {}).setdefault(z, 0)
            pending[(q - low_d, t - t_d)][z] += c
        result: dict = {}
        # process (q, t)-sectors in increasing q order, folding cross terms down
        while True:
            keys = sorted(k for k in pending if pending[k] and k[0] <= cut)
            if not keys:
                break
            qk, tk = keys[0]
            poly = pending[(qk, tk)]
            quo = _laurent_divide(poly, d0, lead)
            for z, c in quo.items():
                if c:
                    result[(qk, tk, z)] = result.get((qk, tk, z), 0) + c
            # subtract quo * (higher blocks of divisor)
            for dq, dpoly in d_by_q.items():
                if dq == 0:
                    continue
                tgt = pending.setdefault((qk + dq, tk), {})
                for z1, c1 in quo.items():
                    for z2, c2 in dpoly.items():
                        zz = tuple(a + b for a, b in zip(z1, z2))
                        tgt[zz] = tgt.get(zz, 0) - c1 * c2
            pending[(qk, tk)] = {}
        terms = {(qk, z, tk): c for (qk, tk, z), c in result.items()}
        return QSeries(self.nz, self.M, cut, terms)

    # -- evaluation and serialization ----------------------------------------

    def evaluate(self, tau: complex, z: list | None = None, t: complex = 0.0):
        """Numeric value and a crude geometric tail bound."""
        if isinstance(tau, complex) and tau.imag <= 0:
            raise ValueError("requires Im tau > 0")
        z = list(z or [0.0] * self.nz)
        total = 0.0 + 0.0j
        max_abs = 0.0
        for (q, zz, t_exp), c in self.terms.items():
            val = c * cmath.exp(2j * cmath.pi * (complex(q) * tau + complex(t_exp) * t))
            for n, zi in zip(zz, z):
                val *= cmath.exp(1j * cmath.pi * n * zi / self.M)
            total += val
            max_abs = max(max_abs, abs(c))
        qabs = abs(cmath.exp(2j * cmath.pi * tau))
        # |sum_{e > cutoff} c_e q^e| <= C |q|^cutoff * |q|/(1-|q|) with C a coefficient bound
        growth = max(max_abs, 1.0) * max(len(self.terms), 4)
        bound = growth * qabs ** float(self.cutoff) * qabs / max(1 - qabs, 1e-12)
        return total, bound

    def to_records(self) -> list:
        recs = []
        for (q, z, t), c in sorted(self.terms.items()):
            recs.append({"q": f"{q.numerator}/{q.denominator}", "z": list(z),
                         "t": f"{t.numerator}/{t.denominator}", "c": c})
        return recs

    @classmethod
    def from_records(cls, recs, nz, M, cutoff) -> "QSeries":
        terms = {}
        for r in recs:
            terms[(Q(r["q"]), tuple(r["z"]), Q(r["t"]))] = int(r["c"])
        return cls(nz, M, cutoff, terms)


def _laurent_divide(poly: dict, d0: dict, lead) -> dict:
    """Exact division of Laurent polynomials (z-exponent dicts) by d0."""
    rem = dict(poly)
    quo: dict = {}
    steps = 0
    while any(rem.values()):
        steps += 1
        if steps > 200000:
            raise DivisionError("Laurent division does not terminate (non-exact)")
        m = max(k for k, v in rem.items() if v)
        c = rem[m]
        qc = c * d0[lead]  # lead coeff is +-1
        if abs(d0[lead]) != 1:
            raise DivisionError("non-unit leading coefficient")
        qm = tuple(a - b for a, b in zip(m, lead))
        quo[qm] = quo.get(qm, 0) + qc
        for z2, c2 in d0.items():
            zz = tuple(a + b for a, b in zip(qm, z2))
            rem[zz] = rem.get(zz, 0) - qc * c2
    return quo


# -- constructors -------------------------------------------------------------


def zero(nz: int, M: int, cutoff) -> QSeries:
    return QSeries(nz, M, cutoff, {})


def one(nz: int, M: int, cutoff) -> QSeries:
    return monomial(nz, M, cutoff, 0)


def monomial(nz: int, M: int, cutoff, q_exp, z_exps=None, t_exp=0, coeff=1) -> QSeries:
    z = tuple(z_exps) if z_exps is not None else (0,) * nz
    return QSeries(nz, M, cutoff, {(Q(q_exp), z, Q(t_exp)): coeff})


def geometric_factor(nz: int, M: int, cutoff, q_exp, z_exps=None, t_exp=0, sign=-1) -> QSeries:
    """(1 + sign * q^q_exp zeta^z e^(2 pi i t_exp t)) as a series."""
    s = one(nz, M, cutoff)
    return s + monomial(nz, M, cutoff, q_exp, z_exps, t_exp, sign)


def eta(cutoff, nz: int = 0, M: int = 1) -> QSeries:
    """Dedekind eta = q^(1/24) prod_{n>=1} (1 - q^n)."""
    cutoff = Q(cutoff)
    s = one(nz, M, cutoff - Q(1, 24))
    n = 1
    while n <= cutoff:
        s = s * geometric_factor(nz, M, cutoff - Q(1, 24), n)
        n += 1
    return s.mul_monomial(q_exp=Q(1, 24)).truncate(cutoff)


def partition_numbers(nmax: int) -> list[int]:
    """p(0..nmax) by Euler's pentagonal recurrence."""
    p = [1] + [0] * nmax
    for n in range(1, nmax + 1):
        total = 0
        k = 1
        while True:
            g1 = k * (3 * k - 1) // 2
            g2 = k * (3 * k + 1) // 2
            if g1 > n and g2 > n:
                break
            sign = -1 if k % 2 == 0 else 1
            if g1 <= n:
                total += sign * p[n - g1]
            if g2 <= n:
                total += sign * p[n - g2]
            k += 1
        p[n] = total
    return p


def inv_eta(cutoff, nz: int = 0, M: int = 1, tau_scale: int = 1) -> QSeries:
    """1/eta(tau_scale * tau) = q^(-a/24) sum p(n) q^(a n)."""
    cutoff = Q(cutoff)
    a = Q(tau_scale)
    nmax = int((cutoff + a / 24) / a) + 1
    p = partition_numbers(max(nmax, 0))
    z = (0,) * nz
    terms = {(-a / 24 + a * n, z, Q(0)): p[n] for n in range(nmax + 1)}
    return QSeries(nz, M, cutoff, terms)


def f_series(cutoff, s_form, M: int, tau_scale: int = 1, nz: int | None = None,
             product_form: bool = False) -> QSeries:
    """f(tau_scale * tau, s) with s the linear form sum_i s_form[i] z_i.

    f(tau, s) = e^(pi i tau/6) e^(pi i s) prod_{n>=1} (1-q^n e^(2 pi i s))(1-q^(n-1) e^(-2 pi i s));
    the default path computes it as theta/eta via the triple product.
    """
    cutoff = Q(cutoff)
    nz = len(s_form) if nz is None else nz
    a = Q(tau_scale)
    if not product_form:
        th = theta_series(cutoff + a / 24, s_form, M, tau_scale=tau_scale, nz=nz)
        return (th * inv_eta(cutoff, nz, M, tau_scale)).truncate(cutoff)
    zpos = _zvec(s_form, M, 2)
    zneg = tuple(-n for n in zpos)
    pref = monomial(nz, M, cutoff, a / 12, _zvec(s_form, M, 1))
    prod = one(nz, M, cutoff - a / 12)
    n = 1
    while (n - 1) * a <= cutoff:
        prod = prod * geometric_factor(nz, M, cutoff - a / 12, n * a, zpos)
        prod = prod * geometric_factor(nz, M, cutoff - a / 12, (n - 1) * a, zneg)
        n += 1
    return (pref * prod).truncate(cutoff)


def theta_series(cutoff, s_form, M: int, product_form: bool = False,
                 tau_scale: int = 1, nz: int | None = None) -> QSeries:
    """theta(a tau, s) = sum_{n in Z} (-1)^(n-1) e^(2 pi i s(n-1/2)) q^(a (n-1/2)^2/2)."""
    cutoff = Q(cutoff)
    nz = len(s_form) if nz is None else nz
    a = Q(tau_scale)
    if product_form:
        pref = monomial(nz, M, cutoff, a / 8, _zvec(s_form, M, 1))
        prod = one(nz, M, cutoff - a / 8)
        zpos = _zvec(s_form, M, 2)
        zneg = tuple(-x for x in zpos)
        n = 1
        while (n - 1) * a <= cutoff:
            prod = prod * geometric_factor(nz, M, cutoff - a / 8, n * a)
            prod = prod * geometric_factor(nz, M, cutoff - a / 8, n * a, zpos)
            prod = prod * geometric_factor(nz, M, cutoff - a / 8, (n - 1) * a, zneg)
            n += 1
        return (pref * prod).truncate(cutoff)
    terms = {}
    n = 0
    while True:
        n += 1
        done = True
        for m in (n, 1 - n):
            e = a * Q(2 * m - 1, 2) ** 2 / 2
            if e <= cutoff:
                done = False
                z = _zvec(s_form, M, 2 * m - 1)
                c = 1 if (m - 1) % 2 == 0 else -1
                key = (e, z, Q(0))
                terms[key] = terms.get(key, 0) + c
        if done:
            break
    return QSeries(nz, M, cutoff, terms)


def _zvec(s_form, M: int, mult) -> tuple:
    out = []
    for c in s_form:
        v = Q(mult) * Q(c) * M
        if v.denominator != 1:
            raise NonIntegralCoefficient(f"z-scale M={M} too coarse for form value {c}")
        out.append(v.numerator)
    return tuple(out)


def special_series(kind: str, cutoff, s_form=None, M: int = 1, **kw) -> QSeries:
    if kind == "eta":
        return eta(cutoff, **kw)
    if kind == "f":
        return f_series(cutoff, s_form, M, **kw)
    if kind == "theta":
        return theta_series(cutoff, s_form, M, **kw)
    raise ValueError(f"unknown special series {kind}")
