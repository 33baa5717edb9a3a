"""Finite root systems of types A, B, C, D, G2 with exact arithmetic.

Each system lives in an orthogonal-coordinate ambient space (the trace-zero
hyperplane of dimension rank+1 for A and G2, coordinate space of dimension
rank otherwise).  The invariant form is a rational multiple of the dot
product, scaled so long roots have squared length 2.  The form identifies the
Cartan subalgebra with its dual, so roots act on vectors by alpha(v) = (alpha|v).
"""

from __future__ import annotations

import functools
import itertools
from dataclasses import dataclass, field
from fractions import Fraction as Q

from .linalg import (Mat, Vec, as_vec, identity, kernel_basis, mat_mul,
                     mat_vec, rank as mat_rank, smul, vadd, vdot, vneg, vsub,
                     vzero)


class UnsupportedAlgebraError(ValueError):
    """Raised for an algebra type/rank outside the supported families."""


@dataclass(frozen=True)
class WeylElement:
    """A Weyl group element as a matrix on ambient coordinates.

    Only the matrix, the sign and (optionally) a reduced word are kept; no
    canonical-form machinery.
    """

    matrix: Mat
    eps: int
    word: tuple[int, ...] = ()

    def __mul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(mat_mul(self.matrix, other.matrix),
                           self.eps * other.eps, self.word + other.word)

    def __call__(self, v: Vec) -> Vec:
        return mat_vec(self.matrix, v)

    def inverse(self) -> "WeylElement":
        from .linalg import mat_inv
        return WeylElement(mat_inv(self.matrix), self.eps, tuple(reversed(self.word)))


@dataclass(frozen=True)
class RootSystem:
    type_label: str
    rank: int
    dim: int                      # ambient coordinate dimension
    form_scale: Q                 # (v|w) = form_scale * dot(v, w)
    simple_roots: tuple[Vec, ...]
    positive_roots: tuple[Vec, ...]
    roots: tuple[Vec, ...]
    rho: Vec
    rho_v: Vec
    theta: Vec
    theta_s: Vec
    h: int
    h_dual: int
    lacety: int
    # lattice bases: Q (root), Qv (coroot), P (weight), Qstar (dual of Q)
    lattice_bases: dict = field(compare=False, hash=False)
    simple_reflections: tuple[WeylElement, ...] = ()

    # -- form and pairings ------------------------------------------------

    def form(self, a: Vec, b: Vec) -> Q:
        return self.form_scale * vdot(a, b)

    def norm2(self, a: Vec) -> Q:
        return self.form(a, a)

    def coroot(self, alpha: Vec) -> Vec:
        return smul(Q(2) / self.norm2(alpha), alpha)

    def pair_coroot(self, lam: Vec, alpha: Vec) -> Q:
        """<lam, alpha^vee> = 2(lam|alpha)/(alpha|alpha)."""
        return Q(2) * self.form(lam, alpha) / self.norm2(alpha)

    @property
    def name(self) -> str:
        return f"{self.type_label}{self.rank}"

    @property
    def dim_g(self) -> int:
        return self.rank + len(self.roots)

    def is_root(self, v: Vec) -> bool:
        return v in self._root_set

    @functools.cached_property
    def _root_set(self) -> frozenset:
        return frozenset(self.roots)

    @functools.cached_property
    def root_index(self) -> dict:
        return {a: i for i, a in enumerate(self.roots)}

    # -- reflections and the Weyl group ------------------------------------

    def reflect(self, alpha: Vec, v: Vec) -> Vec:
        """r_alpha(v) = v - (alpha|v) alpha^vee."""
        if not self.is_root(alpha):
            raise ValueError(f"{alpha} is not a root of {self.name}")
        return vsub(v, smul(self.form(alpha, v), self.coroot(alpha)))

    def reflection_matrix(self, alpha: Vec) -> Mat:
        cols = [self.reflect(alpha, tuple(Q(1) if j == i else Q(0) for j in range(self.dim)))
                for i in range(self.dim)]
        return tuple(zip(*cols))

    @functools.cached_property
    def weyl_group(self) -> tuple[WeylElement, ...]:
        """The full Weyl group, BFS over products of simple reflections."""
        gens = self.simple_reflections
        e = WeylElement(identity(self.dim), 1, ())
        seen = {e.matrix: e}
        frontier = [e]
        while frontier:
            nxt = []
            for w in frontier:
                for s in gens:
                    ws = s * w
                    if ws.matrix not in seen:
                        seen[ws.matrix] = ws
                        nxt.append(ws)
            frontier = nxt
        return tuple(seen.values())

    @functools.cached_property
    def longest_element(self) -> WeylElement:
        w0 = max(self.weyl_group, key=lambda w: len(w.word))
        assert sorted(map(tuple, (w0(a) for a in self.positive_roots))) == \
            sorted(map(tuple, (vneg(a) for a in self.positive_roots)))
        return w0

    def index_p_qv(self) -> int:
        """|P/Q^vee|: Gram determinant of the simple coroots."""
        from .linalg import det
        cor = [self.coroot(a) for a in self.simple_roots]
        m = [[self.form(x, y) for y in cor] for x in cor]
        return int(abs(det(m)))

    def index_qstar_qv(self) -> int:
        """|Q*/Q^vee|: determinant of the pairing (alpha_i^vee|alpha_j)."""
        from .linalg import det
        cor = [self.coroot(a) for a in self.simple_roots]
        m = [[self.form(x, y) for y in self.simple_roots] for x in cor]
        return int(abs(det(m)))

    # -- misc --------------------------------------------------------------

    def height(self, alpha: Vec) -> Q:
        return self.form(self.rho_v, alpha)

    def in_span(self, v: Vec) -> bool:
        """Whether v lies in the rational span of the roots (trace-zero for A, G2)."""
        if self.dim == self.rank:
            return True
        return sum(v) == 0


def _closure_roots(simple: list[Vec], dim: int, scale: Q) -> list[Vec]:
    """All roots as the Weyl orbit of the simple roots."""
    def refl(a: Vec, v: Vec) -> Vec:
        c = Q(2) * vdot(a, v) / vdot(a, a)
        return vsub(v, smul(c, a))

    roots = set(simple) | {vneg(a) for a in simple}
    frontier = list(roots)
    while frontier:
        nxt = []
        for v in frontier:
            for a in simple:
                w = refl(a, v)
                if w not in roots:
                    roots.add(w)
                    nxt.append(w)
        frontier = nxt
    return sorted(roots)


def _simple_coefficients(simple: list[Vec], v: Vec) -> list[Q] | None:
    from .linalg import solve
    cols = list(zip(*simple))
    sol = solve(cols, v)
    if sol is None:
        return None
    # verify (solve returns one solution; simple roots are independent)
    acc = vzero(len(v))
    for c, a in zip(sol, simple):
        acc = vadd(acc, smul(c, a))
    return list(sol) if acc == v else None


_SIMPLE_ROOT_DATA = {
    "A": None,  # built programmatically
    "B": None,
    "C": None,
    "D": None,
    "G": None,
}


def _e(i: int, n: int) -> Vec:
    return tuple(Q(1) if j == i else Q(0) for j in range(n))


def build_root_system(type_label: str, rank: int) -> RootSystem:
    """Construct the root system with the form normalized so (theta|theta) = 2."""
    t = type_label.upper()
    if t == "A" and rank >= 1:
        dim = rank + 1
        simple = [vsub(_e(i, dim), _e(i + 1, dim)) for i in range(rank)]
        scale = Q(1)
    elif t == "B" and rank >= 2:
        dim = rank
        simple = [vsub(_e(i, dim), _e(i + 1, dim)) for i in range(rank - 1)] + [_e(rank - 1, dim)]
        scale = Q(1)
    elif t == "C" and rank >= 2:
        dim = rank
        simple = [vsub(_e(i, dim), _e(i + 1, dim)) for i in range(rank - 1)] + [smul(2, _e(rank - 1, dim))]
        scale = Q(1, 2)
    elif t == "D" and rank >= 3:
        dim = rank
        simple = [vsub(_e(i, dim), _e(i + 1, dim)) for i in range(rank - 1)] + \
                 [vadd(_e(rank - 2, dim), _e(rank - 1, dim))]
        scale = Q(1)
    elif t == "G" and rank == 2:
        dim = 3
        simple = [vsub(_e(0, dim), _e(1, dim)),
                  as_vec([-2, 1, 1])]
        scale = Q(1, 3)
    else:
        raise UnsupportedAlgebraError(f"unsupported algebra {type_label}_{rank}")

    roots = _closure_roots(simple, dim, scale)
    pos = []
    for v in roots:
        coeffs = _simple_coefficients(simple, v)
        assert coeffs is not None
        if all(c >= 0 for c in coeffs):
            pos.append(v)
    pos.sort()

    def form(a, b):
        return scale * vdot(a, b)

    norms = sorted({form(a, a) for a in roots})
    long_sq = norms[-1]
    assert long_sq == 2, "normalization failed"
    lacety = int(norms[-1] / norms[0])

    rho = vzero(dim)
    rho_v = vzero(dim)
    for a in pos:
        rho = vadd(rho, a)
        rho_v = vadd(rho_v, smul(Q(2) / form(a, a), a))
    rho = smul(Q(1, 2), rho)
    rho_v = smul(Q(1, 2), rho_v)

    # highest root (maximal height among long), highest short root
    def height(a):
        return form(rho_v, a)
    theta = max((a for a in pos if form(a, a) == long_sq), key=height)
    theta_s = max((a for a in pos if form(a, a) == norms[0]), key=height)
    h = int(form(rho_v, theta)) + 1
    h_dual = int(Q(2) * form(rho, theta) / form(theta, theta)) + 1

    # lattice bases.  Q* is the dual basis of the simple roots, P the dual
    # basis of the simple coroots, both inside the root span.
    gram = [[form(a, b) for b in simple] for a in simple]
    from .linalg import mat_inv
    gram_inv = mat_inv(tuple(tuple(r) for r in gram))
    qstar = []
    weight = []
    for i in range(rank):
        ki = vzero(dim)
        wi = vzero(dim)
        for j in range(rank):
            ki = vadd(ki, smul(gram_inv[j][i], simple[j]))
        qstar.append(ki)
        # omega_i: (omega_i|alpha_j^vee) = delta_ij  ->  omega_i = (alpha_i|alpha_i)/2 * kappa_i
        weight.append(smul(form(simple[i], simple[i]) / 2, ki))
    lattices = {
        "Q": tuple(simple),
        "Qv": tuple(smul(Q(2) / form(a, a), a) for a in simple),
        "P": tuple(weight),
        "Qstar": tuple(qstar),
    }

    rs = RootSystem(
        type_label=t, rank=rank, dim=dim, form_scale=scale,
        simple_roots=tuple(simple), positive_roots=tuple(pos),
        roots=tuple(roots), rho=rho, rho_v=rho_v, theta=theta,
        theta_s=theta_s, h=h, h_dual=h_dual, lacety=lacety,
        lattice_bases=lattices,
    )
    refls = tuple(WeylElement(rs.reflection_matrix(a), -1, (i,))
                  for i, a in enumerate(simple))
    object.__setattr__(rs, "simple_reflections", refls)
    return rs


def parse_algebra(label: str) -> RootSystem:
    """Parse labels like 'A2', 'G2', 'D4'."""
    label = label.strip()
    t, r = label[0], label[1:]
    try:
        return build_root_system(t, int(r))
    except (ValueError, IndexError) as exc:
        if isinstance(exc, UnsupportedAlgebraError):
            raise
        raise UnsupportedAlgebraError(f"cannot parse algebra label {label!r}") from exc


def reflect(rs: RootSystem, alpha_or_w, v: Vec) -> Vec:
    """Apply a reflection r_alpha or a WeylElement to v."""
    if isinstance(alpha_or_w, WeylElement):
        return alpha_or_w(v)
    return rs.reflect(alpha_or_w, v)


def lattice_members(rs: RootSystem, lattice_id: str, box_bound) -> list[Vec]:
    """Lattice vectors with basis coefficients in a box.

    ``box_bound`` is either an integer b (closed box [-b, b]) or a pair
    (lo, hi) giving the half-open coefficient range [lo, hi).
    """
    basis = rs.lattice_bases[lattice_id]
    if isinstance(box_bound, tuple):
        lo, hi = box_bound
        rng = range(lo, hi)
    else:
        b = int(box_bound)
        rng = range(-b, b + 1)
    out = set()
    for coeffs in itertools.product(rng, repeat=len(basis)):
        v = vzero(rs.dim)
        for c, b_ in zip(coeffs, basis):
            v = vadd(v, smul(c, b_))
        out.add(v)
    return sorted(out)


def scaled_coset_reps(rs: RootSystem, lattice_id: str, u: int) -> list[Vec]:
    """Representatives of (1/u)L / L: coefficient vectors c/u, c in [0,u)^rank."""
    basis = rs.lattice_bases[lattice_id]
    out = []
    for coeffs in itertools.product(range(u), repeat=len(basis)):
        v = vzero(rs.dim)
        for c, b_ in zip(coeffs, basis):
            v = vadd(v, smul(Q(c, u), b_))
        out.append(v)
    return out
