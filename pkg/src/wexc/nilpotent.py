"""Nilpotent orbit data: gradings, centralizer Cartans, twisted root sets.

A nilpotent f is realized as a sum of root vectors attached to roots
gamma_1..gamma_s of ad-x-grading -1, chosen so that
h^f = {h in h : gamma_i(h) = 0} is a Cartan subalgebra of the centralizer.
For classical algebras f is built as an explicit matrix in the natural
representation (Jordan chains in a form-compatible basis) and the gamma set is
read off its nonzero entries; correctness is enforced by assertions on the
Jordan type, the invariant form and the centralizer rank rather than trusted
construction.
"""

from __future__ import annotations

import itertools
from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction as Q

from .linalg import (Vec, as_vec, kernel_basis, mat_mul, rank as mat_rank,
                     smul, vadd, vneg, vsub, vzero)
from .roots import RootSystem, WeylElement

Half = Q(1, 2)


class InvalidPartitionError(ValueError):
    """Partition not valid for the given classical algebra."""


class NonStandardRepresentativeError(RuntimeError):
    """The constructed f did not realize h^f as a Cartan of g^f."""


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __post_init__(self):
        assert all(p > 0 for p in self.parts)
        assert all(self.parts[i] >= self.parts[i + 1] for i in range(len(self.parts) - 1)), \
            "parts must be weakly decreasing"

    @property
    def n(self) -> int:
        return sum(self.parts)

    def dual(self) -> "Partition":
        if not self.parts:
            return Partition(())
        return Partition(tuple(sum(1 for p in self.parts if p > j) for j in range(self.parts[0])))

    def multiplicities(self) -> dict[int, int]:
        mult: dict[int, int] = defaultdict(int)
        for p in self.parts:
            mult[p] += 1
        return dict(mult)

    def validate(self, family: str) -> None:
        mult = self.multiplicities()
        if family == "sl":
            return
        if family == "sp":
            bad = [m for m, mu in mult.items() if m % 2 == 1 and mu % 2 == 1]
            if bad:
                raise InvalidPartitionError(
                    f"sp partition {self.parts}: odd parts {bad} must have even multiplicity")
        elif family == "so":
            bad = [m for m, mu in mult.items() if m % 2 == 0 and mu % 2 == 1]
            if bad:
                raise InvalidPartitionError(
                    f"so partition {self.parts}: even parts {bad} must have even multiplicity")
        else:
            raise ValueError(f"unknown family {family}")

    def is_principal_type(self, family: str) -> bool:
        """Principal-type test by partition combinatorics (sl is always true)."""
        mult = self.multiplicities()
        if family == "sl":
            return True
        odd_mult = sorted(m for m, mu in mult.items() if mu % 2 == 1)
        if not odd_mult:
            return True
        if family == "sp":
            return len(odd_mult) == 1 and odd_mult[0] % 2 == 0
        if self.n % 2 == 1:  # so_N, N odd
            return len(odd_mult) == 1 and odd_mult[0] % 2 == 1
        return len(odd_mult) == 2 and odd_mult[0] == 1  # so_N, N even

    def centralizer_rank(self, family: str) -> int:
        mult = self.multiplicities()
        if family == "sl":
            return len(self.parts) - 1
        if family == "sp":
            return sum(mu // 2 if m % 2 == 1 else 0 for m, mu in mult.items()) + \
                sum(mu // 2 if m % 2 == 0 else 0 for m, mu in mult.items())
        return sum(mu // 2 for mu in mult.values())

    def centralizer_dim(self, family: str) -> int:
        s = sum(d * d for d in self.dual().parts)
        odd = sum(1 for p in self.parts if p % 2 == 1)
        if family == "sl":
            return s - 1
        if family == "sp":
            return (s + odd) // 2
        return (s - odd) // 2

    def dominates(self, other: "Partition") -> bool:
        """Closure order: prefix sums of self >= prefix sums of other."""
        if self.n != other.n:
            raise ValueError("partitions of different integers")
        acc_s = acc_o = 0
        for i in range(max(len(self.parts), len(other.parts))):
            acc_s += self.parts[i] if i < len(self.parts) else 0
            acc_o += other.parts[i] if i < len(other.parts) else 0
            if acc_s < acc_o:
                return False
        return True


def dominance_order(p: Partition, q: Partition) -> str:
    """'contains' / 'contained' / 'equal' / 'incomparable' for orbit closures."""
    if p.parts == q.parts:
        return "equal"
    a, b = p.dominates(q), q.dominates(p)
    if a:
        return "contains"
    if b:
        return "contained"
    return "incomparable"


def family_of(rs: RootSystem) -> str:
    return {"A": "sl", "B": "so", "C": "sp", "D": "so"}[rs.type_label]


def natural_dim(rs: RootSystem) -> int:
    t, r = rs.type_label, rs.rank
    return {"A": r + 1, "B": 2 * r + 1, "C": 2 * r, "D": 2 * r}[t]


def _slot_weights(rs: RootSystem) -> list[Vec]:
    """Weights of the natural representation per matrix slot, as ambient vectors."""
    t, r = rs.type_label, rs.rank
    n = natural_dim(rs)
    if t == "A":
        return [tuple(Q(1) if j == i else Q(0) for j in range(n)) for i in range(n)]
    e = lambda i: tuple(Q(1) if j == i else Q(0) for j in range(r))
    out = []
    for a in range(n):
        if a < r:
            out.append(e(a))
        elif t == "B" and a == r:
            out.append(vzero(r))
        else:
            out.append(vneg(e(n - 1 - a)))
    return out


def _x_from_diag(rs: RootSystem, diag: list[Q]) -> Vec:
    """Ambient vector x with (wt_a|x) equal to the a-th diagonal value."""
    if rs.type_label == "A":
        assert sum(diag) == 0
        return tuple(diag)
    d = diag[:rs.rank]
    if rs.type_label == "C":
        return tuple(2 * v for v in d)
    return tuple(d)


def _gram(rs: RootSystem) -> list[list[Q]] | None:
    """Gram matrix of the invariant bilinear form on the natural rep (None for sl)."""
    t = rs.type_label
    n = natural_dim(rs)
    if t == "A":
        return None
    g = [[Q(0)] * n for _ in range(n)]
    for a in range(n):
        b = n - 1 - a
        if t == "C":
            g[a][b] = Q(1) if a < b else Q(-1)
        else:
            g[a][b] = Q(1)
    return g


@dataclass(frozen=True)
class NilpotentDatum:
    rs: RootSystem
    label: str
    partition: Partition | None
    x: Vec
    gamma_list: tuple[Vec, ...]
    f_matrix: tuple | None
    hf_basis: tuple[Vec, ...]
    h0: Vec
    grading: dict = field(compare=False, hash=False)
    delta_j: dict = field(compare=False, hash=False)            # j -> tuple of roots
    dim_gj: dict = field(compare=False, hash=False)
    delta_f: tuple[Vec, ...] = ()
    delta0_0: tuple[Vec, ...] = ()
    delta_new_plus: tuple[Vec, ...] = ()
    s_alpha: dict = field(compare=False, hash=False, default=None)
    principal_type: bool = False
    dim_gf: int = 0
    wbar: WeylElement | None = None

    # -- convenience views --------------------------------------------------

    @property
    def dim_hf(self) -> int:
        return len(self.hf_basis)

    def alpha_x(self, alpha: Vec) -> Q:
        return self.grading[alpha]

    def restrict_hf(self, alpha: Vec) -> tuple[Q, ...]:
        return tuple(self.rs.form(alpha, b) for b in self.hf_basis)

    @property
    def delta_R_plus(self) -> tuple[tuple[Vec, Q], ...]:
        """Delta^R_+ as pairs (alpha, n_alpha) with n_alpha = -alpha(x)."""
        return tuple((a, -self.grading[a]) for a in self.delta_new_plus)

    def delta_R_j_plus(self, j) -> tuple[Vec, ...]:
        j = Q(j)
        return tuple(a for a in self.delta_new_plus if self.grading[a] == j)

    @property
    def delta_R_f(self) -> tuple[Vec, ...]:
        return tuple(a for a in self.delta_f)

    @property
    def s_plus(self) -> tuple[Vec, ...]:
        """S_+ = positively graded roots (basis index set of g_+)."""
        return tuple(a for a in self.rs.roots if self.grading[a] > 0)

    @property
    def delta0_new_plus(self) -> tuple[Vec, ...]:
        return tuple(a for a in self.delta_new_plus if self.grading[a] == 0)

    @property
    def theta_x(self) -> Q:
        return self.grading[self.rs.theta]

    def dims_summary(self) -> dict:
        return {str(j): v for j, v in sorted(self.dim_gj.items())}


def centralizer_data(datum: NilpotentDatum):
    return datum.hf_basis, datum.delta_f, datum.dim_gf, datum.principal_type


def new_positive_system(datum: NilpotentDatum):
    return datum.h0, datum.delta_new_plus, datum.s_alpha, {
        "R_plus": datum.delta_R_plus,
        "R_0_plus": datum.delta_R_j_plus(0),
        "R_half_plus": datum.delta_R_j_plus(Half),
        "R_f": datum.delta_R_f,
    }


# -- construction -----------------------------------------------------------


def _jordan_type(f: list[list[Q]], n: int) -> Partition:
    ranks = [n]
    p = [row[:] for row in f]
    while ranks[-1] > 0:
        ranks.append(mat_rank(p))
        p = [list(r) for r in mat_mul(tuple(map(tuple, p)), tuple(map(tuple, f)))]
    parts = []
    for j in range(1, len(ranks)):
        cnt = ranks[j - 1] - ranks[j]  # number of parts >= j
        parts.append(cnt)
    out = []
    for j, cnt in enumerate(parts):
        nxt = parts[j + 1] if j + 1 < len(parts) else 0
        out.extend([j + 1] * (cnt - nxt))
    return Partition(tuple(sorted(out, reverse=True)))


def _chain_eigs(m: int) -> list[Q]:
    return [Q(m + 1, 2) - i for i in range(1, m + 1)]


def _build_sl_matrix(parts: tuple[int, ...], n: int):
    eigs = sorted((e for m in parts for e in _chain_eigs(m)), reverse=True)
    pools: dict[Q, list[int]] = defaultdict(list)
    for slot, e in enumerate(eigs):
        pools[e].append(slot)
    heads = {e: 0 for e in pools}
    f = [[Q(0)] * n for _ in range(n)]
    for m in parts:
        chain = []
        for e in _chain_eigs(m):
            chain.append(pools[e][heads[e]])
            heads[e] += 1
        for a, b in zip(chain[1:], chain):
            f[a][b] = Q(1)
    return eigs, f


def _group_chains(family: str, parts: tuple[int, ...]):
    """Group parts into equal pairs (maximally) and leftover singles.

    Maximal pairing keeps h^f a Cartan subalgebra of g^f; validity rules make
    every leftover single even for sp and odd for so.
    """
    mult = Partition(parts).multiplicities()
    pairs, singles = [], []
    for m in sorted(mult, reverse=True):
        mu = mult[m]
        pairs.extend([m] * (mu // 2))
        if mu % 2 == 1:
            singles.append(m)
    return pairs, singles


def _build_classical_matrix(rs: RootSystem, parts: tuple[int, ...]):
    """f and x-diagonal for so/sp in the standard antidiagonal-form basis."""
    family = family_of(rs)
    n = natural_dim(rs)
    r = rs.rank
    pairs, singles = _group_chains(family, parts)
    if family == "so":
        assert all(m % 2 == 1 for m in singles)
    else:
        assert all(m % 2 == 0 for m in singles)

    # abstract chain vectors: (chain_id, i), i = 1..m
    chains = []      # (chain_id, m, partner_chain_id or None, const kappa)
    cid = 0
    pair_of = {}
    for m in pairs:
        chains.append((cid, m))
        chains.append((cid + 1, m))
        pair_of[cid] = cid + 1
        pair_of[cid + 1] = cid
        cid += 2
    single_ids = []
    for m in singles:
        chains.append((cid, m))
        single_ids.append((cid, m))
        cid += 1

    # form constants for single chains.  Odd so-chains have a middle vector;
    # those pair up hyperbolically two at a time, and for odd N the last one
    # is self-paired on the middle slot with value +1.  Even sp-chains have
    # no middle and need no adjustment.
    kappa = {c: Q(1) for c, _ in chains}
    hyper = []
    center = None
    if family == "so":
        k = 0
        while k + 1 < len(single_ids):
            (ca, ma), (cb, mb) = single_ids[k], single_ids[k + 1]
            mid_a, mid_b = (ma + 1) // 2, (mb + 1) // 2
            kappa[ca] = Q(-1) ** mid_a
            kappa[cb] = -(Q(-1) ** mid_b)
            hyper.append((ca, ma, cb, mb))
            k += 2
        if k < len(single_ids):
            c, m = single_ids[k]
            kappa[c] = Q(-1) ** ((m + 1) // 2)
            center = (c, m)

    dims = {c: m for c, m in chains}
    index = {}
    basis_order = []
    for c, m in chains:
        for i in range(1, m + 1):
            index[(c, m, i)] = len(basis_order)
            basis_order.append((c, m, i))
    N = len(basis_order)
    assert N == n

    # full abstract Gram: single chains pair internally, paired chains pair
    # with each other; sp pairs are antisymmetric across the two chains
    G = [[Q(0)] * N for _ in range(N)]
    for a, va in enumerate(basis_order):
        for b, vb in enumerate(basis_order):
            c1, m1, i = va
            c2, m2, j = vb
            val = Q(0)
            if c1 == c2 and c1 not in pair_of and i + j == m1 + 1:
                val = Q(-1) ** i * kappa[c1]
            elif pair_of.get(c1) == c2 and i + j == m1 + 1:
                lo = min(c1, c2)
                i_lo = i if c1 == lo else j
                val = Q(-1) ** i_lo * kappa[lo]
                if family == "sp" and c1 != lo:
                    val = -val
            G[a][b] = val
    # invariance sanity: form(f u, v) + form(u, f v) = 0 is checked after assembly

    eig = {}
    for c, m in chains:
        for i, e in enumerate(_chain_eigs(m), start=1):
            eig[(c, m, i)] = e

    # slot diagonal values
    positives = sorted((e for v, e in eig.items() if e > 0), reverse=True)
    zeros = sum(1 for e in eig.values() if e == 0)
    zpairs = (zeros - (1 if n % 2 == 1 else 0)) // 2
    d = positives + [Q(0)] * zpairs
    assert len(d) == r, (d, r)
    pools: dict[Q, list[int]] = defaultdict(list)
    for slot, e in enumerate(d):
        pools[e].append(slot)       # slots 0..r-1
    heads = {e: 0 for e in pools}

    def next_slot(e):
        s = pools[e][heads[e]]
        heads[e] += 1
        return s

    # final basis vectors in abstract coordinates
    P = [[Q(0)] * N for _ in range(N)]  # columns = final basis vectors
    assigned = [False] * N

    def put(slot0, coeffs):
        for v, c in coeffs.items():
            P[index[v]][slot0] += c
        assigned[slot0] = True

    def dual(slot0):
        return n - 1 - slot0

    def pair_assign(va, vb):
        """va -> next slot for its eigenvalue, vb scaled into the dual slot."""
        e = eig[va]
        a = next_slot(e)
        put(a, {va: Q(1)})
        val = G[index[va]][index[vb]]
        assert val != 0
        put(dual(a), {vb: Q(1) / val})

    done_pairs = set()
    for c, m in chains:
        if c in pair_of:
            if (min(c, pair_of[c]), m) in done_pairs:
                continue
            done_pairs.add((min(c, pair_of[c]), m))
            cw = pair_of[c]
            cv = min(c, cw)
            cw = max(c, cw)
            for i in range(1, m + 1):
                e = eig[(cv, m, i)]
                partner = (cw, m, m + 1 - i)
                if e > 0 or e == 0:
                    pair_assign((cv, m, i), partner)
                else:
                    pair_assign(partner, (cv, m, i))
        else:
            for i in range(1, m + 1):
                e = eig[(c, m, i)]
                if e > 0:
                    pair_assign((c, m, i), (c, m, m + 1 - i))

    for (ca, ma, cb, mb) in hyper:
        ua, ub = (ca, ma, (ma + 1) // 2), (cb, mb, (mb + 1) // 2)
        a = next_slot(Q(0))
        put(a, {ua: Q(1), ub: Q(1)})
        put(dual(a), {ua: Half, ub: -Half})
    if center is not None:
        c, m = center
        mid_slot = r  # 0-based middle slot for odd n
        put(mid_slot, {(c, m, (m + 1) // 2): Q(1)})

    assert all(assigned), assigned

    # abstract f
    F = [[Q(0)] * N for _ in range(N)]
    for c, m in chains:
        for i in range(1, m):
            F[index[(c, m, i + 1)]][index[(c, m, i)]] = Q(1)

    from .linalg import mat_inv
    Pm = tuple(map(tuple, P))
    Pi = mat_inv(Pm)
    Ff = mat_mul(mat_mul(Pi, tuple(map(tuple, F))), Pm)
    Gf = mat_mul(mat_mul(tuple(zip(*Pm)), tuple(map(tuple, G))), Pm)
    std = _gram(rs)
    assert [list(row) for row in Gf] == std, "form-compatible basis construction failed"

    diag = [d[a] if a < r else (Q(0) if (n % 2 == 1 and a == r) else -d[n - 1 - a])
            for a in range(n)]
    return diag, [list(row) for row in Ff]


def _swap_conjugate(f: list[list[Q]], diag: list[Q], n: int):
    """Conjugate by the slot swap r <-> r+1 (outer automorphism of so_{2r})."""
    a, b = n // 2 - 1, n // 2
    perm = list(range(n))
    perm[a], perm[b] = perm[b], perm[a]
    f2 = [[f[perm[i]][perm[j]] for j in range(n)] for i in range(n)]
    d2 = [diag[perm[i]] for i in range(n)]
    return f2, d2


def _finish(rs: RootSystem, label: str, partition, x: Vec,
            gamma_list: tuple[Vec, ...], f_matrix) -> NilpotentDatum:
    grading = {a: rs.form(a, x) for a in rs.roots}
    delta_j: dict[Q, list[Vec]] = defaultdict(list)
    for a, j in grading.items():
        delta_j[j].append(a)
    delta_j = {j: tuple(sorted(v)) for j, v in delta_j.items()}
    dim_gj = {j: len(v) + (rs.rank if j == 0 else 0) for j, v in delta_j.items()}
    if Q(0) not in dim_gj:
        dim_gj[Q(0)] = rs.rank
        delta_j[Q(0)] = ()
    assert all(dim_gj[j] == dim_gj.get(-j, rs.rank if j == 0 else 0) for j in dim_gj)
    assert sum(dim_gj.values()) == rs.dim_g

    for g in gamma_list:
        assert grading[g] == -1, "f component outside grading -1"

    rows = [list(g) for g in gamma_list]
    if rs.dim > rs.rank:  # trace-zero ambient (A, G2)
        rows.append([Q(1)] * rs.dim)
    hf = tuple(kernel_basis(rows, ncols=rs.dim))

    delta_f = tuple(sorted(a for a in rs.roots
                           if all(rs.form(a, b) == 0 for b in hf)))
    delta0 = delta_j.get(Q(0), ())
    delta0_0 = tuple(sorted(set(delta0) & set(delta_f)))
    principal_type = len(delta0_0) == 0
    dim_gf = dim_gj.get(Q(0), rs.rank) + dim_gj.get(Half, 0)

    # x is orthogonal to h^f (Lemma on centralizers)
    for b in hf:
        assert rs.form(x, b) == 0

    # h0: generic element of h^f; rho_v-like choice for f = 0
    if not gamma_list:
        h0 = vzero(rs.dim)
        for kv in rs.lattice_bases["Qstar"]:
            h0 = vadd(h0, kv)
    else:
        h0 = None
        c = 1
        while h0 is None:
            cand = vzero(rs.dim)
            for i, b in enumerate(hf):
                cand = vadd(cand, smul(Q(c) ** i, b))
            zero_at = {a for a in rs.roots if rs.form(a, cand) == 0}
            if zero_at == set(delta_f):
                h0 = cand
            c += 1
            if c > 10000:
                raise RuntimeError("generic h0 not found")

    lex_pos = tuple(sorted(a for a in delta0_0 if a > vneg(a)))
    new_plus = set(lex_pos)
    for a in rs.roots:
        if a in delta0_0 or vneg(a) in delta0_0:
            continue
        v = rs.form(a, h0)
        if v > 0 or (v == 0 and grading[a] < 0):
            new_plus.add(a)
    assert len(new_plus) == len(rs.positive_roots)
    assert {vneg(a) for a in new_plus} | new_plus == set(rs.roots)
    for g in gamma_list:
        assert g in new_plus, "gamma_i not in the new positive system"
    half_plus = [a for a in new_plus if grading[a] == Half]
    assert 2 * len(half_plus) == len(delta_j.get(Half, ()))

    s_alpha = {}
    for a in rs.roots:
        s_alpha[a] = -grading[a] if a in new_plus else 1 - grading[a]

    # witness wbar with Delta_new_+ = wbar(Delta_+), by greedy descent
    T = set(new_plus)
    pos_set = set(rs.positive_roots)
    word = []
    guard = 0
    while T != pos_set:
        i = next(i for i, s in enumerate(rs.simple_roots) if s not in T)
        refl = rs.simple_reflections[i]
        T = {refl(a) for a in T}
        word.append(i)
        guard += 1
        assert guard < 10000
    w = None
    for i in word:
        w = rs.simple_reflections[i] if w is None else w * rs.simple_reflections[i]
    if w is None:
        from .linalg import identity
        w = WeylElement(identity(rs.dim), 1, ())
    assert {w(a) for a in rs.positive_roots} == set(new_plus)

    datum = NilpotentDatum(
        rs=rs, label=label, partition=partition, x=x,
        gamma_list=tuple(gamma_list), f_matrix=f_matrix,
        hf_basis=hf, h0=h0, grading=grading, delta_j=delta_j, dim_gj=dim_gj,
        delta_f=delta_f, delta0_0=delta0_0,
        delta_new_plus=tuple(sorted(new_plus)), s_alpha=s_alpha,
        principal_type=principal_type, dim_gf=dim_gf, wbar=w,
    )
    return datum


def orbit_from_partition(rs: RootSystem, parts, very_even_label: str | None = None) -> NilpotentDatum:
    parts = tuple(int(p) for p in sorted(parts, reverse=True))
    part = Partition(parts)
    family = family_of(rs)
    n = natural_dim(rs)
    if part.n != n:
        raise InvalidPartitionError(f"partition of {part.n} != natural dimension {n}")
    part.validate(family)

    slot_wt = _slot_weights(rs)
    if family == "sl":
        diag, f = _build_sl_matrix(parts, n)
    else:
        diag, f = _build_classical_matrix(rs, parts)
        if very_even_label == "II":
            if rs.type_label != "D" or any(p % 2 for p in parts):
                raise InvalidPartitionError("label II only for very even so_{2r} partitions")
            f, diag = _swap_conjugate(f, diag, n)

    x = _x_from_diag(rs, list(diag))
    # entry weights must reproduce grading -1 and the bracket eigenvalues
    gammas = set()
    for a in range(n):
        for b in range(n):
            if f[a][b] != 0:
                root = vsub(slot_wt[a], slot_wt[b])
                assert rs.form(root, x) == diag[a] - diag[b] == -1
                assert rs.is_root(root)
                gammas.add(root)
    gamma_list = tuple(sorted(gammas))

    # invariant-form and Jordan-type assertions
    g = _gram(rs)
    if g is not None:
        ft = list(zip(*f))
        lhs = mat_mul(tuple(map(tuple, ft)), tuple(map(tuple, g)))
        rhs = mat_mul(tuple(map(tuple, g)), tuple(map(tuple, f)))
        assert all(lhs[i][j] == -rhs[i][j] for i in range(n) for j in range(n)), \
            "f is not in the algebra"
    assert _jordan_type(f, n).parts == parts, "Jordan type mismatch"

    label = "[" + ",".join(map(str, parts)) + "]"
    if very_even_label:
        label += very_even_label
    datum = _finish(rs, label, part, x, gamma_list, tuple(map(tuple, f)))

    if datum.dim_hf != part.centralizer_rank(family):
        raise NonStandardRepresentativeError(
            f"h^f rank {datum.dim_hf} != expected {part.centralizer_rank(family)}")
    assert datum.dim_gf == part.centralizer_dim(family)
    assert datum.principal_type == part.is_principal_type(family)
    return datum


def orbits_from_partition(rs: RootSystem, parts) -> list[NilpotentDatum]:
    """All orbits with this partition (two labeled ones for very even so_{4n})."""
    parts = tuple(int(p) for p in sorted(parts, reverse=True))
    very_even = rs.type_label == "D" and all(p % 2 == 0 for p in parts)
    if very_even:
        return [orbit_from_partition(rs, parts, "I"), orbit_from_partition(rs, parts, "II")]
    return [orbit_from_partition(rs, parts)]


def orbit_from_root_vector(rs: RootSystem, gamma: Vec) -> NilpotentDatum:
    if not rs.is_root(gamma):
        raise ValueError(f"{gamma} is not a root")
    x = smul(Half, rs.coroot(gamma))
    short = "short" if rs.norm2(gamma) < 2 else "long"
    return _finish(rs, f"root-vector({short})", None, x, (vneg(gamma),), None)


def orbit_principal(rs: RootSystem) -> NilpotentDatum:
    x = vzero(rs.dim)
    for kv in rs.lattice_bases["Qstar"]:
        x = vadd(x, kv)
    gammas = tuple(sorted(vneg(a) for a in rs.simple_roots))
    return _finish(rs, "principal", None, x, gammas, None)


def orbit_zero(rs: RootSystem) -> NilpotentDatum:
    return _finish(rs, "zero", None, vzero(rs.dim), (), None)


def so_sp_partitions(rs: RootSystem) -> list[Partition]:
    """All valid partitions for a B/C/D root system."""
    family = family_of(rs)
    n = natural_dim(rs)
    out = []
    for parts in _partitions_of(n):
        p = Partition(parts)
        try:
            p.validate(family)
        except InvalidPartitionError:
            continue
        out.append(p)
    return out


def _partitions_of(n: int, maxp: int | None = None):
    if n == 0:
        yield ()
        return
    if maxp is None:
        maxp = n
    for first in range(min(n, maxp), 0, -1):
        for rest in _partitions_of(n - first, first):
            yield (first,) + rest
