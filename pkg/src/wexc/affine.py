"""Affine Cartan vectors and isometries.

An AffineVector fin + d*D + k*K is stored as (fin, d, k).  The invariant form
extends the finite one by (K|D) = 1, (K|K) = (D|D) = 0, (fin|K) = (fin|D) = 0,
so the level of a weight is its D-coefficient and lam(D) is its K-coefficient.

Isometries used here are compositions of finite Weyl matrices (fixing K and D)
with translations t_beta, which act linearly on the affine Cartan:

    t_beta(v) = v + (v|K) beta - ((|beta|^2/2)(v|K) + (v|beta)) K.

Since t_{beta + cK} = t_beta, translation vectors are stored as finite parts.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction as Q

from .linalg import Mat, Vec, mat_inv, mat_mul, mat_vec, smul, vadd, vneg, vsub, vzero
from .roots import RootSystem, WeylElement


@dataclass(frozen=True)
class AffineVector:
    fin: Vec
    d: Q = Q(0)   # coefficient of D; equals the level (v|K)
    k: Q = Q(0)   # coefficient of K; equals v(D)

    def __add__(self, other: "AffineVector") -> "AffineVector":
        return AffineVector(vadd(self.fin, other.fin), self.d + other.d, self.k + other.k)

    def __sub__(self, other: "AffineVector") -> "AffineVector":
        return AffineVector(vsub(self.fin, other.fin), self.d - other.d, self.k - other.k)

    def __neg__(self) -> "AffineVector":
        return AffineVector(vneg(self.fin), -self.d, -self.k)

    def scale(self, c) -> "AffineVector":
        c = Q(c)
        return AffineVector(smul(c, self.fin), c * self.d, c * self.k)

    @property
    def level(self) -> Q:
        return self.d

    def drop_k(self) -> "AffineVector":
        """Representative mod CK with v(D) = 0."""
        return AffineVector(self.fin, self.d, Q(0))


def finite(v: Vec) -> AffineVector:
    return AffineVector(v, Q(0), Q(0))


def KD(rs: RootSystem) -> tuple[AffineVector, AffineVector]:
    z = vzero(rs.dim)
    return AffineVector(z, Q(0), Q(1)), AffineVector(z, Q(1), Q(0))


def apair(rs: RootSystem, a: AffineVector, b: AffineVector) -> Q:
    return rs.form(a.fin, b.fin) + a.d * b.k + a.k * b.d


def anorm2(rs: RootSystem, a: AffineVector) -> Q:
    return apair(rs, a, a)


def translate(rs: RootSystem, beta: Vec, v: AffineVector) -> AffineVector:
    lvl = v.d
    pairing = rs.form(v.fin, beta)
    n2 = rs.form(beta, beta)
    return AffineVector(
        vadd(v.fin, smul(lvl, beta)),
        v.d,
        v.k - (n2 / 2 * lvl + pairing),
    )


@dataclass(frozen=True)
class AffIso:
    """t_beta composed with a finite orthogonal matrix: v -> t_beta(M v)."""

    matrix: Mat
    beta: Vec
    eps: int = 1

    def __call__(self, rs: RootSystem, v: AffineVector) -> AffineVector:
        mv = AffineVector(mat_vec(self.matrix, v.fin), v.d, v.k)
        return translate(rs, self.beta, mv)

    def on_vec(self, v: Vec) -> Vec:
        """Finite part of the image of a level-0 vector (translations only add K)."""
        return mat_vec(self.matrix, v)

    def compose(self, other: "AffIso") -> "AffIso":
        # (M1,b1) o (M2,b2) = (M1 M2, b1 + M1 b2)
        return AffIso(mat_mul(self.matrix, other.matrix),
                      vadd(self.beta, mat_vec(self.matrix, other.beta)),
                      self.eps * other.eps)

    def inverse(self) -> "AffIso":
        mi = mat_inv(self.matrix)
        return AffIso(mi, vneg(mat_vec(mi, self.beta)), self.eps)

    def shifted(self, rs: RootSystem, lam: AffineVector, rho_hat: AffineVector) -> AffineVector:
        """y . lam = y(lam + rho_hat) - rho_hat."""
        return self(rs, lam + rho_hat) - rho_hat


def iso_from_weyl(w: WeylElement, dim: int) -> AffIso:
    return AffIso(w.matrix, vzero(dim), w.eps)


def iso_translation(beta: Vec) -> AffIso:
    from .linalg import identity
    return AffIso(identity(len(beta)), beta, 1)


def affine_reflection(rs: RootSystem, alpha: AffineVector) -> "AffIsoGeneral":
    """Reflection in a real affine root alpha = abar + nK (as a general isometry)."""
    return AffIsoGeneral.reflection(rs, alpha)


@dataclass(frozen=True)
class AffIsoGeneral:
    """Composition chain of reflections in real affine roots, kept as data.

    Used for the subgroups generated by reflections in finite sets of affine
    roots (e.g. the integral Weyl group of a weight).  Acts exactly on
    AffineVectors; sign is (-1)^(number of reflections).
    """

    rs: RootSystem
    refs: tuple[AffineVector, ...]
    eps: int

    @classmethod
    def identity(cls, rs: RootSystem) -> "AffIsoGeneral":
        return cls(rs, (), 1)

    @classmethod
    def reflection(cls, rs: RootSystem, alpha: AffineVector) -> "AffIsoGeneral":
        return cls(rs, (alpha,), -1)

    def then_reflect(self, alpha: AffineVector) -> "AffIsoGeneral":
        return AffIsoGeneral(self.rs, self.refs + (alpha,), -self.eps)

    def __call__(self, v: AffineVector) -> AffineVector:
        for alpha in self.refs:
            n2 = anorm2(self.rs, alpha)
            c = Q(2) * apair(self.rs, alpha, v) / n2
            v = v - alpha.scale(c)
        return v
