"""UTS/NUTS classification, fission data and the based-gauge normal form.

A germ d + Â is stored as Laurent coefficients C_j of ϖ^j dϖ.  A based gauge
h = exp(X), X = Σ_{d≥1} X_d ϖ^d, acts by

    Â.h = e^{-ad X} Â + ((1 - e^{-ad X}) / ad X)(dX),

so a term Y ϖ^d changes degree d-1 by (ad_{Λ'} + d) Y on the centralizer of
the irregular type.  Degrees where -d is an eigenvalue of ad_{Λ'} are the
resonant ones; the leftover there lies in ker(ad_{Λ'} + d).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Dict, List, Optional, Tuple

import sympy

from .errors import ClassificationError, InvariantViolation, ResonantObstruction, ValidationError
from .linalg import (ONE, ZERO, det, inverse, mat_mul, mat_vec, minimal_polynomial, is_squarefree, nullspace,
                     rank, solve, transpose)
from .liealg import (AlgElement, GroupWord, IDENTITY_WORD, LieAlgebra, Subalgebra, centralizer,
                     word_from_matrix)
from .rootdata import LeviSubsystem, levi_of_annihilated_roots
from .tcla import LoopGroupElement, PrincipalPart, TruncatedCurrent, coadjoint_group


@dataclass(frozen=True)
class ConnectionGerm:
    principal: PrincipalPart
    nonsingular: Tuple[AlgElement, ...] = ()
    m: int = 0

    def __post_init__(self):
        ns = tuple(self.nonsingular)
        m = max(self.m, len(ns))
        alg = self.principal.alg
        ns = ns + (alg.zero(),) * (m - len(ns))
        object.__setattr__(self, "nonsingular", ns)
        object.__setattr__(self, "m", m)

    @property
    def alg(self) -> LieAlgebra:
        return self.principal.alg

    @property
    def s(self) -> int:
        return self.principal.s

    def laurent(self) -> Dict[int, list]:
        out = {}
        for i, a in enumerate(self.principal.coeffs):
            out[-i - 1] = list(a.coords)
        for j, b in enumerate(self.nonsingular):
            out[j] = list(b.coords)
        return out

    @classmethod
    def from_laurent(cls, alg, s, m, coeffs: Dict[int, list]) -> "ConnectionGerm":
        zero = [ZERO] * alg.dim
        pp = PrincipalPart(alg, s, [alg.element(tuple(coeffs.get(-i - 1, zero))) for i in range(s)])
        ns = tuple(alg.element(tuple(coeffs.get(j, zero))) for j in range(m))
        return cls(pp, ns, m)


@dataclass(frozen=True)
class FissionData:
    levis: Tuple[Subalgebra, ...]  # l_1 ⊇ l_2 ⊇ … ⊇ l_s
    levi_subsystems: Tuple[LeviSubsystem, ...]
    nu: int
    torus_indices: Tuple[int, ...]
    coefficients: Tuple[Tuple[Fraction, ...], ...] = field(default=(), compare=False)  # A'_0..A'_{s-1}

    def dims(self) -> Tuple[int, ...]:
        return tuple(l.dim for l in self.levis)


@dataclass(frozen=True)
class ResonanceReport:
    nonresonant: bool
    offenders: Tuple[Tuple[Tuple[int, ...], int], ...]
    resonance_degrees: Tuple[int, ...]


# ---------------------------------------------------------------- classification

def _require_cartan(a: PrincipalPart):
    if not a.is_cartan():
        raise ValidationError("coefficients must be Cartan-valued (normalize and mark first)")


def fission(a: PrincipalPart) -> FissionData:
    _require_cartan(a)
    alg, s = a.alg, a.s
    rd = alg.rd
    levis, subs, tori = [], [], []
    for i in range(1, s + 1):
        elems = [a.coeffs[k] for k in range(s - i, s)]
        l = centralizer(elems, alg)
        sub = levi_of_annihilated_roots(rd, [e.cartan_coords() for e in elems])
        if l.dim != len(sub.roots) + rd.rank:
            raise InvariantViolation("centralizer and root subsystem disagree")
        levis.append(l)
        subs.append(sub)
        if l.dim == rd.rank:
            tori.append(i)
    coeffs = tuple(c.cartan_coords() for c in a.coeffs)
    return FissionData(tuple(levis), tuple(subs), len(tori), tuple(tori), coeffs)


def resonance_report(a: PrincipalPart) -> ResonanceReport:
    _require_cartan(a)
    rd = a.alg.rd
    irregular = [c.cartan_coords() for c in a.coeffs[1:]]
    phi = levi_of_annihilated_roots(rd, irregular)
    lam = a.residue.cartan_coords()
    offenders = []
    degrees = set()
    for alpha in rd.roots:
        if alpha not in phi.roots:
            continue
        v = rd.pair(alpha, lam)
        if v.denominator == 1 and v > 0:
            offenders.append((alpha, int(v)))
            degrees.add(int(v))
    offenders.sort()
    return ResonanceReport(not offenders, tuple(offenders), tuple(sorted(degrees)))


def is_semisimple(x: AlgElement) -> bool:
    return is_squarefree(minimal_polynomial(x.alg.ad_matrix(x.coords)))


def is_uts(a: PrincipalPart) -> Tuple[bool, Optional[GroupWord]]:
    """(semisimple and commuting?, word conjugating everything into t or None)."""
    alg = a.alg
    cs = [c for c in a.coeffs]
    for i, x in enumerate(cs):
        if not is_semisimple(x):
            return False, None
        for y in cs[i + 1:]:
            if any(alg.bracket_coords(x.coords, y.coords)):
                return False, None
    if all(c.is_cartan() for c in cs):
        return True, IDENTITY_WORD
    return True, _cartan_marking(a)


def _cartan_marking(a: PrincipalPart) -> Optional[GroupWord]:
    alg = a.alg
    if alg.rd.cartan_type != "A":
        return None
    mats = [c.matrix() for c in a.coeffs]
    n = alg.size
    for weights in ([1, 3, 7, 13, 29, 31], [1, 5, 11, 17, 37, 41], [2, 1, 19, 23, 43, 47]):
        comb = [[sum(weights[k % len(weights)] * mats[k][i][j] for k in range(len(mats)))
                 for j in range(n)] for i in range(n)]
        ev = sympy.Matrix(comb).eigenvects()
        cols = []
        rational = True
        for val, _, vecs in ev:
            if not val.is_rational:
                rational = False
                break
            for v in vecs:
                cols.append([Fraction(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1]))
                             for x in v])
        if not rational:
            return None
        if len(cols) != n:
            continue
        p = transpose(cols)
        det_p = det(p)
        p = [[x / det_p if j == 0 else x for j, x in enumerate(row)] for row in p]
        pi = inverse(p)
        if all(_is_diag(mat_mul(mat_mul(pi, m), p)) for m in mats):
            w = word_from_matrix(alg, p)
            if coadjoint_group(w, None, a).is_cartan():
                return w
    return None


def _is_diag(m):
    return all(not m[i][j] for i in range(len(m)) for j in range(len(m)) if i != j)


# ---------------------------------------------------------------- gauge action

def _ad_series(alg: LieAlgebra, x: Dict[int, list], c: Dict[int, list], hi: int) -> Dict[int, list]:
    """[X, C] for Laurent series, kept for degrees ≤ hi."""
    out: Dict[int, list] = {}
    for d, xd in x.items():
        if not any(xd):
            continue
        for j, cj in c.items():
            if j + d > hi or not any(cj):
                continue
            b = alg.bracket_coords(xd, cj)
            if any(b):
                acc = out.setdefault(j + d, [ZERO] * alg.dim)
                out[j + d] = [p + q for p, q in zip(acc, b)]
    return out


def _add_series(a: Dict[int, list], b: Dict[int, list], c=ONE) -> Dict[int, list]:
    out = {k: list(v) for k, v in a.items()}
    for k, v in b.items():
        acc = out.get(k)
        out[k] = [c * y for y in v] if acc is None else [p + c * q for p, q in zip(acc, v)]
    return out


def gauge_series(alg: LieAlgebra, coeffs: Dict[int, list], x: Dict[int, list], hi: int) -> Dict[int, list]:
    """Â.exp(X) on Laurent coefficients up to degree hi."""
    out = {k: list(v) for k, v in coeffs.items() if k <= hi}
    term = out
    k = 1
    while True:
        term = {j: [c * Fraction(-1, k) for c in v] for j, v in _ad_series(alg, x, term, hi).items()}
        if not any(any(v) for v in term.values()):
            break
        out = _add_series(out, term)
        k += 1
    dx = {d - 1: [d * c for c in xd] for d, xd in x.items() if d - 1 <= hi and any(xd)}
    term = dx
    out = _add_series(out, dx)
    k = 1
    while True:
        term = {j: [c * Fraction(-1, k + 1) for c in v] for j, v in _ad_series(alg, x, term, hi).items()}
        if not any(any(v) for v in term.values()):
            break
        out = _add_series(out, term)
        k += 1
    return out


def gauge_transform(g: ConnectionGerm, x: TruncatedCurrent) -> ConnectionGerm:
    """The germ g.exp(X) up to its working order."""
    if not x.coeffs[0].is_zero():
        raise ValidationError("based gauges have zero constant term")
    xs = {d: list(c.coords) for d, c in enumerate(x.coeffs) if d >= 1}
    out = gauge_series(g.alg, g.laurent(), xs, g.m - 1)
    return ConnectionGerm.from_laurent(g.alg, g.s, g.m, out)


# ---------------------------------------------------------------- normal form

class _Normalizer:
    def __init__(self, germ: ConnectionGerm, resonant_ok: bool):
        self.alg = germ.alg
        self.s = germ.s
        self.m = germ.m
        self.coeffs = germ.laurent()
        self.resonant_ok = resonant_ok
        self.gauge_steps: List[Tuple[int, list]] = []
        self.leftover: List[Tuple[int, AlgElement]] = []
        self.normal: List[list] = [None] * self.s  # A'_i coordinates
        self.hi = self.m - 1

    # orthogonal projector onto a subspace given by a basis (form nondegenerate on it)
    def _projector(self, basis: List[list]):
        alg = self.alg
        if not basis:
            return lambda v: [ZERO] * alg.dim
        g = [[alg.form_coords(a, b) for b in basis] for a in basis]
        gi = inverse(g)

        def proj(v):
            rhs = [alg.form_coords(v, b) for b in basis]
            c = mat_vec(gi, rhs)
            out = [ZERO] * alg.dim
            for ci, b in zip(c, basis):
                if ci:
                    out = [o + ci * y for o, y in zip(out, b)]
            return out
        return proj

    def _apply(self, y: list, d: int):
        if not any(y):
            return
        self.coeffs = gauge_series(self.alg, self.coeffs, {d: y}, self.hi)
        self.gauge_steps.append((d, y))

    def run(self):
        alg, s = self.alg, self.s
        dim = alg.dim
        lead = self.coeffs.get(-s, [ZERO] * dim)
        self.normal[s - 1] = list(lead)
        self._extend_levels()
        for j in range(-s + 1, self.m):
            self._clean_degree(j)
        return self

    def _extend_levels(self):
        """Recompute l_t = z(A'_{s-1}, …, A'_{s-t}) for known coefficients."""
        alg, s = self.alg, self.s
        levels = [[list(alg.basis(k).coords) for k in range(alg.dim)]]
        known = []
        for t in range(1, s + 1):
            c = self.normal[s - t]
            if c is None:
                break
            known.append(alg.element(tuple(c)))
            levels.append([list(b.coords) for b in centralizer(known, alg).basis])
        self._levels = levels

    def _clean_degree(self, j):
        alg, s = self.alg, self.s
        dim = alg.dim
        top_t = min(s - 2, j + s - 1)
        for t in range(0, top_t + 1):
            cj = self.coeffs.get(j, [ZERO] * dim)
            p_t = self._projector(self._levels[t])
            p_next = self._projector(self._levels[t + 1])
            in_t = p_t(cj)
            comp = [a - b for a, b in zip(in_t, p_next(in_t))]
            if not any(comp):
                continue
            a_coef = self.normal[s - 1 - t]
            d = j + s - t
            # -[Y ϖ^d, A ϖ^{t-s}] = [A, Y] at degree j; want [A, Y] = -comp
            y = self._solve_in(a_coef, [-c for c in comp], self._levels[t], self._levels[t + 1])
            if y is None:
                raise ClassificationError(f"degree {j}: component not in the image of ad (not UTS)")
            self._apply(y, d)
        cj = self.coeffs.get(j, [ZERO] * dim)
        if j < 0:
            i = -j - 1
            lvl = s - 1 - i
            rest = self._projector(self._levels[lvl])(cj)
            if rest != list(cj):
                raise InvariantViolation(f"degree {j} not reduced into l_{lvl}")
            el = alg.element(tuple(rest))
            if not is_semisimple(el):
                raise ClassificationError(f"coefficient A'_{i} is not semisimple")
            self.normal[i] = rest
            self._extend_levels()
            return
        # nonsingular degree: residue level on l_{Q'} = l_{s-1}
        lq = self._levels[s - 1]
        rest = self._projector(lq)(cj)
        if rest != list(cj):
            raise InvariantViolation(f"degree {j} not reduced into l_Q'")
        if not any(rest):
            return
        d = j + 1
        lam = self.normal[0]
        op = [[x + (d if r == c else 0) for c, x in enumerate(row)]
              for r, row in enumerate(alg.ad_matrix(lam))]
        basis = lq
        # restrict (ad_Λ' + d) to l_Q'
        cols = [mat_vec(op, b) for b in basis]
        target = [-x for x in rest]
        sol = solve(transpose(cols), target)
        if sol is not None:
            y = [ZERO] * dim
            for c, b in zip(sol, basis):
                if c:
                    y = [p + c * q for p, q in zip(y, b)]
            self._apply(y, d)
            return
        if not self.resonant_ok:
            kdim = len(basis) - rank(transpose(cols))
            raise ResonantObstruction(d, kdim)
        # split rest = image part + kernel part (ad_Λ' semisimple)
        kern = nullspace(transpose(cols), len(basis))
        kvecs = []
        for k in kern:
            v = [ZERO] * dim
            for c, b in zip(k, basis):
                if c:
                    v = [p + c * q for p, q in zip(v, b)]
            kvecs.append(v)
        all_cols = cols + kvecs
        coef = solve(transpose(all_cols), rest)
        if coef is None:
            raise InvariantViolation("residue-level split failed")
        img = [ZERO] * dim
        for c, col in zip(coef[:len(cols)], cols):
            if c:
                img = [p + c * q for p, q in zip(img, col)]
        if any(img):
            sol = solve(transpose(cols), [-x for x in img])
            y = [ZERO] * dim
            for c, b in zip(sol, basis):
                if c:
                    y = [p + c * q for p, q in zip(y, b)]
            self._apply(y, d)
        left = self.coeffs.get(j, [ZERO] * dim)
        self.leftover.append((d, alg.element(tuple(left))))

    def _solve_in(self, a_coef, target, space, subspace):
        """Y ∈ span(space) ⟂ span(subspace) with [A, Y] = target."""
        alg = self.alg
        adm = alg.ad_matrix(a_coef)
        p_sub = self._projector(subspace)
        comp_basis = []
        for b in space:
            v = [x - y for x, y in zip(b, p_sub(b))]
            if any(v):
                comp_basis.append(v)
        if not comp_basis:
            return None
        cols = [mat_vec(adm, b) for b in comp_basis]
        sol = solve(transpose(cols), target)
        if sol is None:
            return None
        y = [ZERO] * alg.dim
        for c, b in zip(sol, comp_basis):
            if c:
                y = [p + c * q for p, q in zip(y, b)]
        return y

    def gauge_exponent(self) -> TruncatedCurrent:
        """X with (normal).exp(X) = input, from the accumulated steps."""
        alg = self.alg
        prec = self.m + self.s
        h = LoopGroupElement.one(alg, prec)
        for d, y in self.gauge_steps:
            if d >= prec:
                continue
            cs = [alg.zero()] * prec
            cs[d] = alg.element(tuple(y))
            h = h * LoopGroupElement.exp_current(TruncatedCurrent(alg, prec, cs))
        return h.inverse().log_unipotent()

    def principal(self) -> PrincipalPart:
        return PrincipalPart(self.alg, self.s, [self.alg.element(tuple(c)) for c in self.normal])


def normalize(g: ConnectionGerm) -> Tuple[PrincipalPart, TruncatedCurrent]:
    """Based-gauge normal form of a germ whose normal form is nonresonant.

    Returns (A', X) with A'.exp(X) = g up to the working order; X is unique
    modulo ϖ^{m+1}.  Higher degrees of X are the ones the algorithm chose
    (zero where the germ does not constrain them).
    """
    ok, _ = is_uts(PrincipalPart(g.alg, g.s, [g.principal.coeffs[-1]] + [g.alg.zero()] * (g.s - 1)))
    if not ok:
        raise ClassificationError("leading coefficient is not semisimple")
    nz = _Normalizer(g, resonant_ok=False)
    nz.run()
    normal = nz.principal()
    _check_nonresonant(normal)
    x = nz.gauge_exponent()
    check = gauge_transform(ConnectionGerm(normal, (), g.m), x)
    if check != g:
        raise InvariantViolation("re-gauging the normal form does not reproduce the germ")
    return normal, x


def _check_nonresonant(normal: PrincipalPart):
    degs = resonance_degrees_general(normal)
    if degs:
        k, dim = degs[0]
        raise ResonantObstruction(k, dim)


def resonance_degrees_general(a: PrincipalPart) -> List[Tuple[int, int]]:
    """[(κ, dim ker(ad_{Λ'} - κ) on l_{Q'})] for positive integer eigenvalues κ."""
    alg = a.alg
    irregular = [c for c in a.coeffs[1:]]
    lq = centralizer(irregular, alg).basis if irregular else [alg.basis(k) for k in range(alg.dim)]
    lq = [list(b.coords) for b in lq]
    adm = alg.ad_matrix(a.residue.coords)
    # ad_Λ' restricted to l_Q' in the basis lq
    cols = [mat_vec(adm, b) for b in lq]
    restr = solve_columns(lq, cols)
    mp = minimal_polynomial(restr) if restr else [ONE]
    out = []
    for k in _positive_integer_roots(mp):
        shifted = [[x - (k if r == c else 0) for c, x in enumerate(row)] for r, row in enumerate(restr)]
        out.append((k, len(restr) - rank(shifted)))
    return out


def solve_columns(basis: List[list], cols: List[list]) -> List[list]:
    if not basis:
        return []
    bt = transpose(basis)
    out = []
    for c in cols:
        x = solve(bt, c)
        if x is None:
            raise InvariantViolation("subspace is not invariant")
        out.append(x)
    return transpose(out)


def _positive_integer_roots(poly) -> List[int]:
    p = list(poly)
    while p and not p[0]:
        p = p[1:]
    if len(p) <= 1:
        return []
    den = 1
    for c in p:
        den = lcm(den, Fraction(c).denominator)
    ip = [int(Fraction(c) * den) for c in p]
    a0 = abs(ip[0])
    roots = []
    k = 1
    while k <= a0:
        if a0 % k == 0:
            val = 0
            for c in reversed(ip):
                val = val * k + c
            if val == 0:
                roots.append(k)
        k += 1
    return roots


def resonant_normalize(g: ConnectionGerm):
    """(normal, leftover [(κ, Ã)], stabilizer_dim) for any UTS germ."""
    ok, _ = is_uts(PrincipalPart(g.alg, g.s, [g.principal.coeffs[-1]] + [g.alg.zero()] * (g.s - 1)))
    if not ok:
        raise ClassificationError("leading coefficient is not semisimple")
    nz = _Normalizer(g, resonant_ok=True)
    nz.run()
    normal = nz.principal()
    leftover = [(k, x) for k, x in nz.leftover if not x.is_zero()]
    stab = sum(dim for _, dim in resonance_degrees_general(normal))
    return normal, leftover, stab
