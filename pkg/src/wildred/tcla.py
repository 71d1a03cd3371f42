"""Truncated-current Lie algebras g_s = g ⊗ Q[ϖ]/ϖ^s and their duals.

A principal part Σ A_i ϖ^{-i-1} dϖ is paired with Σ X_i ϖ^i through
Σ (A_i | X_i).  Coadjoint conventions:

* ``coadjoint_inf(x, a)`` is the principal part of [x, a], which satisfies
  <ad*_x a, y> = -<a, [x, y]>;
* ``coadjoint_group(g0, b, a)`` is a·g := g^{-1} a g for g = g0·exp(b), a right
  action; the inverse keeps orbits equal to those of the gauge action.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from .errors import InvariantViolation, ValidationError
from .linalg import (ONE, ZERO, Q, identity, inverse, is_zero_matrix, mat_add, mat_mul,
                     mat_pow_series_exp, mat_scale, mat_sub, mat_vec, nilpotent_log, solve,
                     zeros)
from .liealg import (AlgElement, GroupWord, LieAlgebra, adjoint_of_word, word_from_matrix,
                     word_matrix)


def _coeff_tuple(alg: LieAlgebra, s: int, coeffs) -> Tuple[AlgElement, ...]:
    coeffs = tuple(coeffs)
    if len(coeffs) != s:
        raise ValidationError(f"expected {s} coefficients, got {len(coeffs)}")
    out = []
    for c in coeffs:
        if isinstance(c, AlgElement):
            if c.alg is not alg:
                raise ValidationError("coefficient from a different algebra")
            out.append(c)
        else:
            out.append(alg.element(tuple(Q(x) for x in c)))
    return tuple(out)


class _Graded:
    __slots__ = ("alg", "s", "coeffs")

    def __init__(self, alg: LieAlgebra, s: int, coeffs):
        if s < 1:
            raise ValidationError("truncation order must be ≥ 1")
        self.alg = alg
        self.s = s
        self.coeffs = _coeff_tuple(alg, s, coeffs)

    @classmethod
    def zero(cls, alg: LieAlgebra, s: int):
        return cls(alg, s, [alg.zero()] * s)

    @classmethod
    def from_vector(cls, alg: LieAlgebra, s: int, v: Sequence):
        d = alg.dim
        return cls(alg, s, [alg.element(tuple(v[i * d:(i + 1) * d])) for i in range(s)])

    def vector(self) -> list:
        out = []
        for c in self.coeffs:
            out.extend(c.coords)
        return out

    def _same(self, o):
        if type(o) is not type(self) or o.alg is not self.alg or o.s != self.s:
            raise ValidationError("mismatched truncation order or algebra")

    def __add__(self, o):
        self._same(o)
        return type(self)(self.alg, self.s, [a + b for a, b in zip(self.coeffs, o.coeffs)])

    def __sub__(self, o):
        self._same(o)
        return type(self)(self.alg, self.s, [a - b for a, b in zip(self.coeffs, o.coeffs)])

    def __neg__(self):
        return type(self)(self.alg, self.s, [-a for a in self.coeffs])

    def __mul__(self, c):
        return type(self)(self.alg, self.s, [a * c for a in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, o):
        return (type(o) is type(self) and o.alg is self.alg and o.s == self.s
                and o.coeffs == self.coeffs)

    def __hash__(self):
        return hash((self.s, self.coeffs))

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coeffs)

    def __getitem__(self, i) -> AlgElement:
        return self.coeffs[i]

    def __repr__(self):
        return f"{type(self).__name__}(s={self.s}, {list(self.coeffs)})"


class TruncatedCurrent(_Graded):
    """Σ X_i ϖ^i, i < s."""

    @classmethod
    def monomial(cls, x: AlgElement, degree: int, s: int):
        cs = [x.alg.zero()] * s
        if degree < s:
            cs[degree] = x
        return cls(x.alg, s, cs)


class PrincipalPart(_Graded):
    """Σ A_i ϖ^{-i-1} dϖ, i < s; A_0 is the residue."""

    @property
    def residue(self) -> AlgElement:
        return self.coeffs[0]

    @classmethod
    def monomial(cls, x: AlgElement, index: int, s: int):
        cs = [x.alg.zero()] * s
        cs[index] = x
        return cls(x.alg, s, cs)

    def is_cartan(self) -> bool:
        return all(c.is_cartan() for c in self.coeffs)


def tcla_bracket(x: TruncatedCurrent, y: TruncatedCurrent) -> TruncatedCurrent:
    x._same(y)
    alg, s = x.alg, x.s
    out = [[ZERO] * alg.dim for _ in range(s)]
    for i in range(s):
        if x.coeffs[i].is_zero():
            continue
        for j in range(s - i):
            if y.coeffs[j].is_zero():
                continue
            b = alg.bracket_coords(x.coeffs[i].coords, y.coeffs[j].coords)
            out[i + j] = [p + q for p, q in zip(out[i + j], b)]
    return TruncatedCurrent(alg, s, [alg.element(tuple(c)) for c in out])


def residue_pairing(a: PrincipalPart, x: TruncatedCurrent):
    if a.alg is not x.alg or a.s != x.s:
        raise ValidationError("mismatched truncation order or algebra")
    return sum((a.alg.form_coords(p.coords, q.coords) for p, q in zip(a.coeffs, x.coeffs)), ZERO)


def coadjoint_inf(x: TruncatedCurrent, a: PrincipalPart) -> PrincipalPart:
    if a.alg is not x.alg or a.s != x.s:
        raise ValidationError("mismatched truncation order or algebra")
    alg, s = a.alg, a.s
    out = [[ZERO] * alg.dim for _ in range(s)]
    for k in range(s):
        if x.coeffs[k].is_zero():
            continue
        for j in range(s - k):
            if a.coeffs[j + k].is_zero():
                continue
            b = alg.bracket_coords(x.coeffs[k].coords, a.coeffs[j + k].coords)
            out[j] = [p + q for p, q in zip(out[j], b)]
    return PrincipalPart(alg, s, [alg.element(tuple(c)) for c in out])


def _act_coefficientwise(m, a):
    return type(a)(a.alg, a.s, [a.alg.element(tuple(mat_vec(m, c.coords))) for c in a.coeffs])


def coadjoint_group(g0: GroupWord, b: Optional[TruncatedCurrent], a: PrincipalPart) -> PrincipalPart:
    """a·(g0 exp b) = exp(-ad*_b)(Ad_{g0}^{-1} a)."""
    if b is not None:
        if b.alg is not a.alg or b.s != a.s:
            raise ValidationError("mismatched truncation order or algebra")
        if not b.coeffs[0].is_zero():
            raise ValidationError("Birkhoff exponent must have zero constant term")
    out = a
    if g0 is not None and len(g0):
        out = _act_coefficientwise(adjoint_of_word(a.alg, g0.inverse()), out)
    if b is not None and not b.is_zero():
        term = out
        total = out
        for k in range(1, a.s + 1):
            term = coadjoint_inf(b, term) * Fraction(-1, k)
            if term.is_zero():
                break
            total = total + term
        out = total
    return out


# ---------------------------------------------------------------- series helpers

def ser_mul(p: Sequence, q: Sequence, n: int) -> list:
    out = [ZERO] * n
    for i, x in enumerate(p[:n]):
        if x:
            for j, y in enumerate(q[:n - i]):
                if y:
                    out[i + j] += x * y
    return out


def ser_inv(p: Sequence, n: int) -> list:
    if not p or not p[0]:
        raise ValidationError("series is not a unit")
    inv0 = 1 / Q(p[0])
    out = [ZERO] * n
    out[0] = inv0
    for k in range(1, n):
        acc = ZERO
        for j in range(1, min(k, len(p) - 1) + 1):
            acc += p[j] * out[k - j]
        out[k] = -acc * inv0
    return out


def ser_pow(p: Sequence, e: int, n: int) -> list:
    base = list(p[:n]) + [ZERO] * (n - len(p[:n]))
    if e < 0:
        base = ser_inv(base, n)
        e = -e
    out = [ONE] + [ZERO] * (n - 1)
    for _ in range(e):
        out = ser_mul(out, base, n)
    return out


# ---------------------------------------------------------------- units

@dataclass(frozen=True)
class UnitSeries:
    """F(ϖ) = ϖ (f_0 + f_1 ϖ + …) modulo ϖ^{s+1}."""

    s: int
    f_coeffs: Tuple[Fraction, ...]

    def __post_init__(self):
        fc = tuple(Q(x) for x in self.f_coeffs)
        fc = (fc + (ZERO,) * self.s)[:self.s]
        if not fc or not fc[0]:
            raise ValidationError("unit series needs f_0 ≠ 0")
        object.__setattr__(self, "f_coeffs", fc)

    @classmethod
    def identity(cls, s: int) -> "UnitSeries":
        return cls(s, (ONE,))

    def compose(self, other: "UnitSeries") -> "UnitSeries":
        """(self ∘ other)(ϖ) = self(other(ϖ))."""
        if other.s != self.s:
            raise ValidationError("mismatched orders")
        n = self.s
        # F(G) = Σ_k f_k G^{k+1},  G = ϖ v ⇒ G^{k+1} = ϖ^{k+1} v^{k+1}
        v = list(other.f_coeffs)
        out = [ZERO] * n
        for k, fk in enumerate(self.f_coeffs):
            if not fk:
                continue
            pw = ser_pow(v, k + 1, n)
            for j in range(n - k):
                out[k + j] += fk * pw[j]
        return UnitSeries(n, tuple(out))

    def inverse(self) -> "UnitSeries":
        """Compositional inverse, by fixed-point iteration on coefficients."""
        n = self.s
        g = UnitSeries(n, (1 / self.f_coeffs[0],))
        for _ in range(n):
            c = self.compose(g).f_coeffs
            # correct g so that F(G) = ϖ: G ← G - (F(G) - ϖ)/F'(0)
            corr = [x - (ONE if i == 0 else ZERO) for i, x in enumerate(c)]
            g = UnitSeries(n, tuple(a - b / self.f_coeffs[0] for a, b in zip(g.f_coeffs, corr)))
        return g


def apply_unit(f: UnitSeries, a: PrincipalPart) -> PrincipalPart:
    """Pullback F*(a), keeping the principal part."""
    if f.s != a.s:
        raise ValidationError("mismatched orders")
    s, alg = a.s, a.alg
    u = list(f.f_coeffs)
    du = [ZERO] * s  # u + ϖ u'
    for k, x in enumerate(u):
        du[k] = (k + 1) * x
    out = [[ZERO] * alg.dim for _ in range(s)]
    for i in range(s):
        ai = a.coeffs[i]
        if ai.is_zero():
            continue
        c = ser_mul(ser_pow(u, -(i + 1), i + 1), du, i + 1)
        for j in range(i + 1):
            w = c[i - j]
            if w:
                out[j] = [p + w * q for p, q in zip(out[j], ai.coords)]
    return PrincipalPart(alg, s, [alg.element(tuple(x)) for x in out])


# ---------------------------------------------------------------- matrices on g_s

def tcla_ad_matrix(x: TruncatedCurrent) -> list:
    """ad_x on g_s; columns indexed degree-major (i·dim + k)."""
    alg, s = x.alg, x.s
    d = alg.dim
    m = zeros(s * d)
    for i in range(s):
        if x.coeffs[i].is_zero():
            continue
        blk = alg.ad_matrix(x.coeffs[i].coords)
        for j in range(s - i):
            for r in range(d):
                row = blk[r]
                for c in range(d):
                    if row[c]:
                        m[(i + j) * d + r][j * d + c] += row[c]
    return m


def block_diag_matrix(phi0, s: int) -> list:
    d = len(phi0)
    m = zeros(s * d)
    for i in range(s):
        for r in range(d):
            for c in range(d):
                m[i * d + r][i * d + c] = phi0[r][c]
    return m


def unit_matrix(f: UnitSeries, d: int) -> list:
    """Id ⊗ F on g_s: X ϖ^i ↦ X F(ϖ)^i."""
    s = f.s
    m = zeros(s * d)
    for i in range(s):
        pw = ser_pow(list(f.f_coeffs), i, s)
        for j in range(s - i):
            if pw[j]:
                for k in range(d):
                    m[(i + j) * d + k][i * d + k] = pw[j]
    return m


@dataclass(frozen=True)
class TclaAutomorphism:
    alg: LieAlgebra
    s: int
    matrix: Tuple[Tuple[Fraction, ...], ...]

    @classmethod
    def from_rows(cls, alg, s, rows):
        return cls(alg, s, tuple(tuple(r) for r in rows))

    def rows(self) -> list:
        return [list(r) for r in self.matrix]

    def apply(self, x: TruncatedCurrent) -> TruncatedCurrent:
        return TruncatedCurrent.from_vector(self.alg, self.s, mat_vec(self.rows(), x.vector()))

    def compose(self, other: "TclaAutomorphism") -> "TclaAutomorphism":
        return TclaAutomorphism.from_rows(self.alg, self.s, mat_mul(self.rows(), other.rows()))


def automorphism_diag(alg: LieAlgebra, s: int, phi0) -> TclaAutomorphism:
    return TclaAutomorphism.from_rows(alg, s, block_diag_matrix(phi0, s))


def automorphism_conj(z: TruncatedCurrent) -> TclaAutomorphism:
    if not z.coeffs[0].is_zero():
        raise ValidationError("conjugating exponent must lie in ϖ g_s")
    return TclaAutomorphism.from_rows(z.alg, z.s, mat_pow_series_exp(tcla_ad_matrix(z)))


def automorphism_unit(alg: LieAlgebra, f: UnitSeries) -> TclaAutomorphism:
    return TclaAutomorphism.from_rows(alg, f.s, unit_matrix(f, alg.dim))


def check_automorphism(phi: TclaAutomorphism) -> None:
    alg, s = phi.alg, phi.s
    d = alg.dim
    m = phi.rows()
    if len(m) != s * d or any(len(r) != s * d for r in m):
        raise InvariantViolation("automorphism matrix has the wrong size")
    for col in range(s * d):
        deg = col // d
        if any(m[row][col] for row in range(deg * d)):
            raise InvariantViolation("map does not preserve the ϖ-adic filtration")
    images = [TruncatedCurrent.from_vector(alg, s, [m[r][c] for r in range(s * d)])
              for c in range(s * d)]
    for a in range(s * d):
        for b in range(a + 1, s * d):
            xa = TruncatedCurrent.from_vector(alg, s, [ONE if k == a else ZERO for k in range(s * d)])
            xb = TruncatedCurrent.from_vector(alg, s, [ONE if k == b else ZERO for k in range(s * d)])
            lhs = mat_vec(m, tcla_bracket(xa, xb).vector())
            rhs = tcla_bracket(images[a], images[b]).vector()
            if lhs != rhs:
                raise InvariantViolation("map does not preserve the bracket")


def decompose_automorphism(phi: TclaAutomorphism, check: bool = True):
    """Φ = (Φ_00 ⊗ Id) ∘ Ad(exp Z) ∘ (Id ⊗ F); returns (Φ_00, Z, F)."""
    alg, s = phi.alg, phi.s
    d = alg.dim
    if check:
        check_automorphism(phi)
    m = phi.rows()
    phi0 = [row[:d] for row in m[:d]]
    try:
        phi0_inv = inverse(phi0)
    except Exception:
        raise InvariantViolation("degree-zero block is not invertible")
    psi = mat_mul(block_diag_matrix(phi0_inv, s), m)
    # on constants psi agrees with Ad(exp Z); peel one degree at a time
    zcoeffs = [alg.zero()]
    cur = psi
    for k in range(1, s):
        blk = [row[:d] for row in cur[k * d:(k + 1) * d]]
        # [Z_k, b_j] = blk[:, j]: unknown Z_k
        rows = []
        rhs = []
        for j in range(d):
            for r in range(d):
                rows.append([-alg.ad_basis[j][r][i] for i in range(d)])
                rhs.append(blk[r][j])
        zk = solve(rows, rhs)
        if zk is None:
            raise InvariantViolation(f"degree-{k} part is not an inner derivation")
        zel = alg.element(tuple(zk))
        zcoeffs.append(zel)
        peel = TruncatedCurrent.monomial(-zel, k, s)
        cur = mat_mul(mat_pow_series_exp(tcla_ad_matrix(peel)), cur)
    # cur = P; read λ_k from P(X ϖ) = X F(ϖ)
    lambdas = []
    if s >= 2:
        for k in range(1, s):
            blk = [row[d:2 * d] for row in cur[k * d:(k + 1) * d]]
            lam = blk[0][0]
            for r in range(d):
                for c in range(d):
                    if blk[r][c] != (lam if r == c else ZERO):
                        raise InvariantViolation("degree-one block is not scalar")
            lambdas.append(lam)
        if not lambdas[0]:
            raise InvariantViolation("λ_1 vanishes")
    f = UnitSeries(s, tuple(lambdas) if lambdas else (ONE,))
    if cur != unit_matrix(f, d):
        raise InvariantViolation("residual factor is not a coordinate change")
    # combine the peeled factors: exp(Z) = exp(Z_1 ϖ) … exp(Z_{s-1} ϖ^{s-1})
    conj_mat = identity(s * d)
    for k in range(1, s):
        conj_mat = mat_mul(conj_mat, mat_pow_series_exp(
            tcla_ad_matrix(TruncatedCurrent.monomial(zcoeffs[k], k, s))))
    ad_z = nilpotent_log(conj_mat)
    zc = [alg.zero()]
    for k in range(1, s):
        blk = [row[:d] for row in ad_z[k * d:(k + 1) * d]]
        rows, rhs = [], []
        for j in range(d):
            for r in range(d):
                rows.append([-alg.ad_basis[j][r][i] for i in range(d)])
                rhs.append(blk[r][j])
        zk = solve(rows, rhs)
        if zk is None:
            raise InvariantViolation("conjugation factor is not inner")
        zc.append(alg.element(tuple(zk)))
    z = TruncatedCurrent(alg, s, zc)
    rebuilt = mat_mul(mat_mul(block_diag_matrix(phi0, s), mat_pow_series_exp(tcla_ad_matrix(z))),
                      unit_matrix(f, d))
    if rebuilt != m:
        raise InvariantViolation("reassembly does not reproduce the automorphism")
    return phi0, z, f


# ---------------------------------------------------------------- loop group

class LoopGroupElement:
    """Element of G(Q[ϖ]/ϖ^s) in the faithful model: Σ M_k ϖ^k."""

    __slots__ = ("alg", "s", "mats")

    def __init__(self, alg: LieAlgebra, s: int, mats):
        self.alg = alg
        self.s = s
        self.mats = [[list(r) for r in m] for m in mats]

    @classmethod
    def one(cls, alg, s):
        n = alg.size
        return cls(alg, s, [identity(n)] + [zeros(n) for _ in range(s - 1)])

    @classmethod
    def constant(cls, alg, s, m):
        n = alg.size
        return cls(alg, s, [m] + [zeros(n) for _ in range(s - 1)])

    @classmethod
    def from_word(cls, alg, s, w: GroupWord):
        return cls.constant(alg, s, word_matrix(alg, w))

    @classmethod
    def exp_current(cls, b: TruncatedCurrent):
        """exp(b) for b ∈ ϖ g_s (finite sum)."""
        if not b.coeffs[0].is_zero():
            raise ValidationError("exponent must have zero constant term")
        alg, s = b.alg, b.s
        x = cls(alg, s, [c.matrix() for c in b.coeffs])
        out = cls.one(alg, s)
        term = cls.one(alg, s)
        for k in range(1, s):
            term = (term * x).scaled(Fraction(1, k))
            out = out + term
        return out

    @classmethod
    def from_witness(cls, alg, s, word: GroupWord, b: Optional[TruncatedCurrent]):
        g = cls.from_word(alg, s, word)
        if b is not None and not b.is_zero():
            g = g * cls.exp_current(b)
        return g

    def __mul__(self, o: "LoopGroupElement") -> "LoopGroupElement":
        s = self.s
        n = self.alg.size
        out = [zeros(n) for _ in range(s)]
        for i, a in enumerate(self.mats):
            if is_zero_matrix(a):
                continue
            for j in range(s - i):
                if is_zero_matrix(o.mats[j]):
                    continue
                out[i + j] = mat_add(out[i + j], mat_mul(a, o.mats[j]))
        return LoopGroupElement(self.alg, s, out)

    def __add__(self, o):
        return LoopGroupElement(self.alg, self.s, [mat_add(a, b) for a, b in zip(self.mats, o.mats)])

    def __sub__(self, o):
        return LoopGroupElement(self.alg, self.s, [mat_sub(a, b) for a, b in zip(self.mats, o.mats)])

    def scaled(self, c):
        return LoopGroupElement(self.alg, self.s, [mat_scale(c, a) for a in self.mats])

    def __eq__(self, o):
        return isinstance(o, LoopGroupElement) and self.s == o.s and self.mats == o.mats

    def inverse(self) -> "LoopGroupElement":
        s, n = self.s, self.alg.size
        m0i = inverse(self.mats[0])
        out = [m0i]
        for k in range(1, s):
            acc = zeros(n)
            for j in range(1, k + 1):
                acc = mat_add(acc, mat_mul(self.mats[j], out[k - j]))
            out.append(mat_scale(-1, mat_mul(m0i, acc)))
        return LoopGroupElement(self.alg, s, out)

    def constant_part(self) -> list:
        return self.mats[0]

    def truncate(self, s: int) -> "LoopGroupElement":
        return LoopGroupElement(self.alg, s, self.mats[:s])

    def coadjoint(self, a: PrincipalPart) -> PrincipalPart:
        """a·g = g^{-1} a g, truncated to principal parts."""
        alg, s = self.alg, self.s
        gi = self.inverse()
        n = alg.size
        out = [zeros(n) for _ in range(s)]
        amats = [c.matrix() for c in a.coeffs]
        for i, am in enumerate(amats):
            if is_zero_matrix(am):
                continue
            for p in range(i + 1):
                if is_zero_matrix(gi.mats[p]):
                    continue
                left = mat_mul(gi.mats[p], am)
                for q in range(i + 1 - p):
                    if is_zero_matrix(self.mats[q]):
                        continue
                    out[i - p - q] = mat_add(out[i - p - q], mat_mul(left, self.mats[q]))
        return PrincipalPart(alg, s, [alg.from_matrix(m) for m in out])

    def adjoint(self, x: TruncatedCurrent) -> TruncatedCurrent:
        """Ad_g x = g x g^{-1}."""
        alg, s = self.alg, self.s
        gi = self.inverse()
        n = alg.size
        out = [zeros(n) for _ in range(s)]
        xm = [c.matrix() for c in x.coeffs]
        for i in range(s):
            if is_zero_matrix(self.mats[i]):
                continue
            for j in range(s - i):
                if is_zero_matrix(xm[j]):
                    continue
                left = mat_mul(self.mats[i], xm[j])
                for k in range(s - i - j):
                    out[i + j + k] = mat_add(out[i + j + k], mat_mul(left, gi.mats[k]))
        return TruncatedCurrent(alg, s, [alg.from_matrix(m) for m in out])

    def log_unipotent(self) -> TruncatedCurrent:
        """b with exp(b) = self, for self ≡ 1 mod ϖ."""
        alg, s = self.alg, self.s
        if self.mats[0] != identity(alg.size):
            raise ValidationError("element is not in the Birkhoff subgroup")
        x = self - LoopGroupElement.one(alg, s)
        out = LoopGroupElement(alg, s, [zeros(alg.size) for _ in range(s)])
        term = LoopGroupElement.one(alg, s)
        for k in range(1, s):
            term = term * x
            out = out + term.scaled(Fraction(1 if k % 2 else -1, k))
        return TruncatedCurrent(alg, s, [alg.from_matrix(m) for m in out.mats])

    def to_witness(self) -> Tuple[GroupWord, TruncatedCurrent]:
        """Split as (constant word) · exp(b)."""
        w = word_from_matrix(self.alg, self.mats[0])
        g0 = LoopGroupElement.from_word(self.alg, self.s, w)
        b = (g0.inverse() * self).log_unipotent()
        return w, b
