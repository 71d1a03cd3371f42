"""Semisimple Lie algebras over Q with a Chevalley basis.

The algebra is realized inside a faithful matrix representation (sl_n, or
so(5) for B2).  Root vectors are produced by bracketing simple ones in
height order, so N_{α,β} = ±(p+1) holds by construction; the signs are the
ones this realization induces and are checked against Jacobi at build time.

Basis order: e_α (α ∈ Φ⁺ by height), h_1..h_r, f_α (same order as e_α).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .errors import DegenerateForm, InvariantViolation, UnsupportedConfiguration, ValidationError
from .linalg import (ONE, ZERO, Q, identity, inverse, mat_add, mat_mul, mat_pow_series_exp, mat_scale,
                     mat_sub, mat_vec, nullspace, rank, solve, trace, transpose,
                     zeros)
from .rootdata import Root, RootDatum, WeylElement, build_root_datum, neg


def _E(n, i, j):
    m = zeros(n)
    m[i][j] = ONE
    return m


def _comm(a, b):
    return mat_sub(mat_mul(a, b), mat_mul(b, a))


def _simple_matrices(rd: RootDatum):
    if rd.cartan_type == "A":
        n = rd.rank + 1
        return n, [_E(n, i, i + 1) for i in range(rd.rank)]
    if rd.cartan_type == "B" and rd.rank == 2:
        # so(5) for the antidiagonal form; α1 = ε1-ε2 long, α2 = ε2 short
        n = 5
        return n, [mat_sub(_E(n, 0, 1), _E(n, 3, 4)), mat_sub(_E(n, 1, 2), _E(n, 2, 3))]
    raise UnsupportedConfiguration(f"no faithful model for {rd.label}")


class LieAlgebra:
    """Structure constants, invariant form and matrix model for one type."""

    def __init__(self, rd: RootDatum):
        self.rd = rd
        r = rd.rank
        pos = list(rd.positive_roots)
        self.n_pos = len(pos)
        self.rank = r
        self.dim = 2 * len(pos) + r
        self.size, simple_e = _simple_matrices(rd)
        n = self.size

        simple_f = []
        simple_h = []
        for e in simple_e:
            ft = transpose(e)
            hb = _comm(e, ft)
            # scale f so that [h, e] = 2e
            ad = _comm(hb, e)
            k = next(Fraction(a) / Fraction(b) for ra, rb in zip(ad, e) for a, b in zip(ra, rb) if b)
            c = Fraction(2) / k
            simple_f.append(mat_scale(c, ft))
            simple_h.append(mat_scale(c, hb))

        e_mat: Dict[Root, list] = {}
        f_mat: Dict[Root, list] = {}
        for i, a in enumerate(rd.simple_roots):
            e_mat[a] = simple_e[i]
        for beta in pos:
            if beta in e_mat:
                continue
            i, gamma = self._split(beta, e_mat)
            p = 0
            while tuple(g - (p + 1) * (k == i) for k, g in enumerate(gamma)) in e_mat:
                p += 1
            e_mat[beta] = mat_scale(Fraction(1, p + 1), _comm(simple_e[i], e_mat[gamma]))

        # coroot matrices
        def h_of(cv):
            out = zeros(n)
            for c, hm in zip(cv, simple_h):
                if c:
                    out = mat_add(out, mat_scale(c, hm))
            return out

        raw_f = {a: simple_f[k] for k, a in enumerate(rd.simple_roots)}
        for beta in pos:
            if beta in raw_f:
                continue
            i, gamma = self._split(beta, raw_f)
            raw_f[beta] = _comm(simple_f[i], raw_f[gamma])
        for beta in pos:
            target = h_of(rd.coroot(beta))
            got = _comm(e_mat[beta], raw_f[beta])
            k = next(Fraction(a) / Fraction(b) for ra, rb in zip(got, target) for a, b in zip(ra, rb) if b)
            f_mat[beta] = mat_scale(1 / k, raw_f[beta])
            if _comm(e_mat[beta], f_mat[beta]) != target:
                raise InvariantViolation(f"coroot normalization failed for {beta}")

        self.basis_roots: List[Optional[Root]] = pos + [None] * r + [neg(a) for a in pos]
        self.matrices = [e_mat[a] for a in pos] + simple_h + [f_mat[a] for a in pos]
        self.index: Dict[Root, int] = {}
        for k, a in enumerate(self.basis_roots):
            if a is not None:
                self.index[a] = k
        self._build_coordinates()
        self._build_structure_constants()
        form_scale = Fraction(1) if rd.cartan_type == "A" else Fraction(1, 2)
        self.form = [[form_scale * trace(mat_mul(a, b)) for b in self.matrices] for a in self.matrices]
        self._check()

    def _split(self, beta, known):
        for i, a in enumerate(self.rd.simple_roots):
            gamma = tuple(b - x for b, x in zip(beta, a))
            if gamma in known:
                return i, gamma
        raise InvariantViolation(f"root {beta} has no simple decomposition")

    def _build_coordinates(self):
        n = self.size
        flat = [[m[i][j] for i in range(n) for j in range(n)] for m in self.matrices]
        # greedy choice of pivot entries making the d×d system invertible
        chosen: List[int] = []
        cols = transpose(flat)  # entry-major
        current = []
        for pos_, col in enumerate(cols):
            if not any(col):
                continue
            trial = current + [col]
            if rank(trial) > len(current):
                current = trial
                chosen.append(pos_)
            if len(chosen) == self.dim:
                break
        if len(chosen) != self.dim:
            raise InvariantViolation("matrix model is not faithful")
        sub = [[flat[b][p] for b in range(self.dim)] for p in chosen]
        self._pivots = [(p // n, p % n) for p in chosen]
        self._coord_inv = inverse(sub)

    def coords_of_matrix(self, m) -> Tuple[Fraction, ...]:
        v = [m[i][j] for i, j in self._pivots]
        c = mat_vec(self._coord_inv, v)
        return tuple(c)

    def matrix_of(self, coords: Sequence) -> list:
        n = self.size
        out = zeros(n)
        for c, m in zip(coords, self.matrices):
            if c:
                for i in range(n):
                    row = m[i]
                    orow = out[i]
                    for j in range(n):
                        if row[j]:
                            orow[j] = orow[j] + c * row[j]
        return out

    def _build_structure_constants(self):
        d = self.dim
        table = [[None] * d for _ in range(d)]
        for i in range(d):
            for j in range(d):
                if j < i:
                    table[i][j] = [(k, -c) for k, c in table[j][i]]
                    continue
                c = self.coords_of_matrix(_comm(self.matrices[i], self.matrices[j]))
                table[i][j] = [(k, x) for k, x in enumerate(c) if x]
        self.table = table
        # ad matrices of basis vectors: ad_i[k][j] = coeff of b_k in [b_i, b_j]
        self.ad_basis = []
        for i in range(d):
            m = zeros(d)
            for j in range(d):
                for k, c in table[i][j]:
                    m[k][j] = c
            self.ad_basis.append(m)

    def _check(self):
        d = self.dim
        # N_{α,β} = ±(p+1)
        for a in self.rd.roots:
            for b in self.rd.roots:
                s = tuple(x + y for x, y in zip(a, b))
                if s not in self.index:
                    continue
                p = 0
                while tuple(y - (p + 1) * x for x, y in zip(a, b)) in self.index:
                    p += 1
                got = dict(self.table[self.index[a]][self.index[b]]).get(self.index[s], ZERO)
                if abs(got) != p + 1:
                    raise InvariantViolation(f"N_{a},{b} = {got}, expected ±{p + 1}")
        for i in range(d):
            for j in range(d):
                for k in range(d):
                    x = self.bracket_basis(i, self.bracket_coords_basis(j, k))
                    y = self.bracket_basis(j, self.bracket_coords_basis(k, i))
                    z = self.bracket_basis(k, self.bracket_coords_basis(i, j))
                    if any(a + b + c for a, b, c in zip(x, y, z)):
                        raise InvariantViolation("Jacobi identity fails")

    def bracket_coords_basis(self, i, j):
        out = [ZERO] * self.dim
        for k, c in self.table[i][j]:
            out[k] = c
        return out

    def bracket_basis(self, i, v):
        out = [ZERO] * self.dim
        row = self.table[i]
        for j, x in enumerate(v):
            if x:
                for k, c in row[j]:
                    out[k] = out[k] + c * x
        return out

    # ------------------------------------------------------------ raw ops
    def bracket_coords(self, u: Sequence, v: Sequence) -> List:
        out = [ZERO] * self.dim
        nzv = [(j, y) for j, y in enumerate(v) if y]
        if not nzv:
            return out
        for i, x in enumerate(u):
            if not x:
                continue
            row = self.table[i]
            for j, y in nzv:
                xy = x * y
                for k, c in row[j]:
                    out[k] = out[k] + c * xy
        return out

    def ad_matrix(self, u: Sequence) -> list:
        d = self.dim
        m = zeros(d)
        for i, x in enumerate(u):
            if not x:
                continue
            row = self.table[i]
            for j in range(d):
                for k, c in row[j]:
                    m[k][j] = m[k][j] + c * x
        return m

    def form_coords(self, u: Sequence, v: Sequence):
        acc = ZERO
        for i, x in enumerate(u):
            if x:
                frow = self.form[i]
                for j, y in enumerate(v):
                    if y and frow[j]:
                        acc = acc + x * y * frow[j]
        return acc

    # ------------------------------------------------------------ elements
    def element(self, coords: Sequence) -> "AlgElement":
        if len(coords) != self.dim:
            raise ValidationError(f"expected {self.dim} coordinates, got {len(coords)}")
        return AlgElement(self, tuple(coords))

    def zero(self) -> "AlgElement":
        return AlgElement(self, (ZERO,) * self.dim)

    def basis(self, k: int) -> "AlgElement":
        return AlgElement(self, tuple(ONE if i == k else ZERO for i in range(self.dim)))

    def root_vector(self, alpha: Sequence[int]) -> "AlgElement":
        return self.basis(self.index[tuple(alpha)])

    def e(self, i: int) -> "AlgElement":
        return self.root_vector(self.rd.simple_roots[i])

    def f(self, i: int) -> "AlgElement":
        return self.root_vector(neg(self.rd.simple_roots[i]))

    def h(self, i: int) -> "AlgElement":
        return self.basis(self.n_pos + i)

    def cartan(self, vec: Sequence) -> "AlgElement":
        c = [ZERO] * self.dim
        for i, x in enumerate(vec):
            c[self.n_pos + i] = Q(x)
        return AlgElement(self, tuple(c))

    def cartan_slice(self) -> slice:
        return slice(self.n_pos, self.n_pos + self.rank)

    def from_matrix(self, m) -> "AlgElement":
        el = AlgElement(self, self.coords_of_matrix(m))
        if self.matrix_of(el.coords) != [list(r) for r in m]:
            raise ValidationError("matrix is not in the Lie algebra")
        return el

    def __repr__(self):
        return f"LieAlgebra({self.rd.label})"


@lru_cache(maxsize=None)
def lie_algebra(cartan_type: str, rank: int) -> LieAlgebra:
    return LieAlgebra(build_root_datum(cartan_type, rank))


def algebra_of(rd: RootDatum) -> LieAlgebra:
    return lie_algebra(rd.cartan_type, rd.rank)


@dataclass(frozen=True)
class AlgElement:
    alg: LieAlgebra
    coords: Tuple

    def _check(self, other):
        if not isinstance(other, AlgElement) or other.alg is not self.alg:
            raise ValidationError("elements of different algebras")

    def __add__(self, o):
        self._check(o)
        return AlgElement(self.alg, tuple(a + b for a, b in zip(self.coords, o.coords)))

    def __sub__(self, o):
        self._check(o)
        return AlgElement(self.alg, tuple(a - b for a, b in zip(self.coords, o.coords)))

    def __neg__(self):
        return AlgElement(self.alg, tuple(-a for a in self.coords))

    def __mul__(self, c):
        return AlgElement(self.alg, tuple(c * a for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, c):
        return AlgElement(self.alg, tuple(a / c for a in self.coords))

    def __eq__(self, o):
        return isinstance(o, AlgElement) and o.alg is self.alg and tuple(o.coords) == tuple(self.coords)

    def __hash__(self):
        return hash(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def matrix(self):
        return self.alg.matrix_of(self.coords)

    def cartan_coords(self) -> Tuple:
        return tuple(self.coords[self.alg.cartan_slice()])

    def is_cartan(self) -> bool:
        sl = self.alg.cartan_slice()
        return all(not x for k, x in enumerate(self.coords) if not sl.start <= k < sl.stop)

    def __repr__(self):
        alg = self.alg
        parts = []
        for k, c in enumerate(self.coords):
            if not c:
                continue
            a = alg.basis_roots[k]
            if a is None:
                name = f"h{k - alg.n_pos + 1}"
            elif sum(a) > 0:
                name = "e" + "".join(map(str, a))
            else:
                name = "f" + "".join(str(-x) for x in a)
            parts.append(f"{c}*{name}")
        return "AlgElement(" + (" + ".join(parts) or "0") + ")"


def bracket(x: AlgElement, y: AlgElement) -> AlgElement:
    x._check(y)
    return AlgElement(x.alg, tuple(x.alg.bracket_coords(x.coords, y.coords)))


def invariant_form(x: AlgElement, y: AlgElement):
    x._check(y)
    return x.alg.form_coords(x.coords, y.coords)


def ad(x: AlgElement) -> list:
    return x.alg.ad_matrix(x.coords)


# ---------------------------------------------------------------- subalgebras

@dataclass(frozen=True)
class Subalgebra:
    alg: LieAlgebra
    basis: Tuple[AlgElement, ...]
    closed_flag: bool = True

    def __post_init__(self):
        if self.closed_flag:
            vecs = [b.coords for b in self.basis]
            for i, a in enumerate(self.basis):
                for b in self.basis[i + 1:]:
                    c = a.alg.bracket_coords(a.coords, b.coords)
                    if any(c) and solve(transpose([list(v) for v in vecs]), c) is None:
                        raise InvariantViolation("subalgebra basis is not closed under bracket")

    @property
    def dim(self) -> int:
        return len(self.basis)

    def contains(self, x: AlgElement) -> bool:
        if not self.basis:
            return x.is_zero()
        return solve(transpose([list(b.coords) for b in self.basis]), list(x.coords)) is not None


def subalgebra_from_roots(alg: LieAlgebra, roots: Iterable[Root], with_cartan: bool) -> Subalgebra:
    idx = sorted(alg.index[tuple(a)] for a in roots)
    if with_cartan:
        idx = sorted(set(idx) | set(range(alg.n_pos, alg.n_pos + alg.rank)))
    return Subalgebra(alg, tuple(alg.basis(k) for k in idx), closed_flag=False)


def centralizer(elements: Sequence[AlgElement], alg: Optional[LieAlgebra] = None) -> Subalgebra:
    if alg is None:
        if not elements:
            raise ValidationError("centralizer of an empty list needs the algebra")
        alg = elements[0].alg
    rows = []
    for x in elements:
        rows.extend(alg.ad_matrix(x.coords))
    rows = [r for r in rows if any(r)]
    if not rows:
        basis = tuple(alg.basis(k) for k in range(alg.dim))
    else:
        basis = tuple(AlgElement(alg, tuple(v)) for v in nullspace(rows, alg.dim))
    return Subalgebra(alg, basis, closed_flag=True)


def project_to_subalgebra(x: AlgElement, s: Subalgebra) -> AlgElement:
    alg = x.alg
    if not s.basis:
        return alg.zero()
    g = [[alg.form_coords(a.coords, b.coords) for b in s.basis] for a in s.basis]
    rhs = [alg.form_coords(x.coords, b.coords) for b in s.basis]
    try:
        gi = inverse(g)
    except DegenerateForm:
        raise DegenerateForm("invariant form degenerates on the subalgebra; no orthogonal projection")
    c = mat_vec(gi, rhs)
    out = [ZERO] * alg.dim
    for ci, b in zip(c, s.basis):
        if ci:
            out = [o + ci * y for o, y in zip(out, b.coords)]
    return AlgElement(alg, tuple(out))


# ---------------------------------------------------------------- group words

@dataclass(frozen=True)
class GroupWord:
    """Product exp(t_1 X_{β_1}) exp(t_2 X_{β_2}) … read left to right."""

    factors: Tuple[Tuple[Root, Fraction], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors",
                           tuple((tuple(r), Q(t)) for r, t in self.factors))

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((r, -t) for r, t in reversed(self.factors)))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        return GroupWord(self.factors + other.factors)

    def __len__(self):
        return len(self.factors)


IDENTITY_WORD = GroupWord(())


def word_matrix(alg: LieAlgebra, w: GroupWord) -> list:
    m = identity(alg.size)
    for root, t in w.factors:
        if not t:
            continue
        x = mat_scale(t, alg.matrices[alg.index[root]])
        m = mat_mul(m, mat_pow_series_exp(x))
    return m


def adjoint_of_word(alg: LieAlgebra, w: GroupWord) -> list:
    """Ad of the word on g, as a dim×dim matrix acting on coordinate columns."""
    m = identity(alg.dim)
    for root, t in w.factors:
        if not t:
            continue
        x = mat_scale(t, alg.ad_basis[alg.index[root]])
        m = mat_mul(m, mat_pow_series_exp(x))
    return m


def adjoint_via_matrix(alg: LieAlgebra, g, g_inv=None) -> list:
    """Ad_g as a dim×dim matrix, from a group matrix in the faithful model."""
    if g_inv is None:
        g_inv = inverse(g)
    cols = [alg.coords_of_matrix(mat_mul(mat_mul(g, b), g_inv)) for b in alg.matrices]
    return transpose([list(c) for c in cols])


def act(m: list, x: AlgElement) -> AlgElement:
    return AlgElement(x.alg, tuple(mat_vec(m, x.coords)))


def weyl_lift(alg: LieAlgebra, w: WeylElement) -> GroupWord:
    """ṡ_i = exp(e_i) exp(-f_i) exp(e_i), multiplied along the word."""
    fac = []
    for i in w.word:
        a = alg.rd.simple_roots[i]
        fac += [(a, ONE), (neg(a), -ONE), (a, ONE)]
    return GroupWord(tuple(fac))


def word_from_matrix(alg: LieAlgebra, g) -> GroupWord:
    """Write g ∈ SL_n(Q) as a product of root-group elements (type A only)."""
    if alg.rd.cartan_type != "A":
        raise UnsupportedConfiguration("matrix-to-word decomposition is implemented for type A")
    n = alg.size
    m = [[Q(x) for x in row] for row in g]
    ops = []  # left multiplications performed, as (i, j, t) meaning I + t E_ij

    def left(i, j, t):
        m[i] = [a + t * b for a, b in zip(m[i], m[j])]
        ops.append((i, j, t))

    for j in range(n):
        if not m[j][j]:
            k = next((k for k in range(j + 1, n) if m[k][j]), None)
            if k is None:
                raise ValidationError("matrix is singular")
            left(j, k, ONE)
        for i in range(n):
            if i != j and m[i][j]:
                left(i, j, -m[i][j] / m[j][j])
    diag = [m[i][i] for i in range(n)]
    prod = ONE
    for x in diag:
        prod *= x
    if prod != 1:
        raise ValidationError("matrix does not have determinant 1")
    # g = T_1^{-1} ... T_k^{-1} D
    trans = [(i, j, -t) for i, j, t in ops]
    c = ONE
    for k in range(n - 1):
        c = c * diag[k]
        if c != 1:
            # diag(c, 1/c) = w(c) w(-1), w(t) = x_{k,k+1}(t) x_{k+1,k}(-1/t) x_{k,k+1}(t)
            for t in (c, -ONE):
                trans += [(k, k + 1, t), (k + 1, k, -1 / t), (k, k + 1, t)]
    factors = []
    for i, j, t in trans:
        if not t:
            continue
        if i < j:
            root = tuple(int(i <= k < j) for k in range(n - 1))
        else:
            root = tuple(-int(j <= k < i) for k in range(n - 1))
        sign = alg.matrices[alg.index[root]][i][j]
        factors.append((root, t / sign))
    w = GroupWord(tuple(factors))
    return w
