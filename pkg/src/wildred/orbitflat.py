"""Coadjoint orbits of G_s: KKS form, moment maps, exact ranks, big-cell
factorization, Darboux charts and the flatness verdict.

Orbit points are A = g^{-1} A' g for g = g0 exp(b) (g0 a root-group word, b a
Birkhoff exponent); the pair (g0, b) is kept as the witness.  The left
coadjoint action Ad*_g A = g A g^{-1} is written `ad_star(g, A)`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from .errors import (CellMiss, DegenerateForm, InvariantViolation, UnsupportedConfiguration,
                     ValidationError)
from .linalg import ONE, ZERO, Q, det, identity, inverse, mat_mul, mat_sub, mat_vec, rank, solve, transpose, zeros
from .liealg import (AlgElement, GroupWord, IDENTITY_WORD, LieAlgebra, adjoint_of_word, algebra_of,
                     weyl_lift, word_matrix)
from .normalform import FissionData, fission, is_uts
from .rootdata import Root, RootDatum, WeylElement, neg, weyl_group
from .tcla import (LoopGroupElement, PrincipalPart, TruncatedCurrent, coadjoint_group,
                   coadjoint_inf, residue_pairing, tcla_bracket)
from .verma import _simple_matrix, adapted_positive_roots


# ---------------------------------------------------------------- types

@dataclass(frozen=True)
class WildConfig:
    algebra: RootDatum
    points: Tuple[Tuple[str, PrincipalPart], ...]
    semisimple_flag: bool = True

    def __post_init__(self):
        object.__setattr__(self, "points", tuple((str(l), p) for l, p in self.points))
        labels = [l for l, _ in self.points]
        if len(set(labels)) != len(labels):
            raise ValidationError("point labels must be distinct")
        alg = self.alg
        for label, p in self.points:
            if p.alg is not alg:
                raise ValidationError(f"point {label!r} is over a different algebra")
            if not p.is_cartan():
                raise ValidationError(f"point {label!r}: marked coefficients must be Cartan-valued")
            if not is_uts(p)[0]:
                raise ValidationError(f"point {label!r} is not UTS")

    @property
    def alg(self) -> LieAlgebra:
        return algebra_of(self.algebra)

    @property
    def markings(self) -> List[PrincipalPart]:
        return [p for _, p in self.points]


Witness = Union[Tuple[GroupWord, Optional[TruncatedCurrent]], LoopGroupElement]


@dataclass(frozen=True)
class OrbitPoint:
    base_config_index: int
    value: PrincipalPart
    witness: Witness
    marked: Optional[PrincipalPart] = field(default=None, compare=False)

    def group_element(self) -> LoopGroupElement:
        w = self.witness
        if isinstance(w, LoopGroupElement):
            return w
        return LoopGroupElement.from_witness(self.value.alg, self.value.s, w[0], w[1])

    def check(self, marked: Optional[PrincipalPart] = None) -> bool:
        marked = marked if marked is not None else self.marked
        if marked is None:
            raise ValidationError("no marked normal form to check against")
        w = self.witness
        if isinstance(w, LoopGroupElement):
            return w.coadjoint(marked) == self.value
        return coadjoint_group(w[0], w[1], marked) == self.value


def orbit_point(index: int, marked: PrincipalPart, word: GroupWord = IDENTITY_WORD,
                b: Optional[TruncatedCurrent] = None) -> OrbitPoint:
    return OrbitPoint(index, coadjoint_group(word, b, marked), (word, b), marked)


def ad_star(g: LoopGroupElement, a: PrincipalPart) -> PrincipalPart:
    """Ad*_g a = g a g^{-1}."""
    return g.inverse().coadjoint(a)


@dataclass(frozen=True)
class FlatnessVerdict:
    nu: Tuple[int, ...]
    chi: int
    verdict: str                      # "holds" | "fails" | "unsupported"
    clause: Optional[str]
    all_generic: bool
    pole_divisor_degree: int
    rank_evidence: Optional[Tuple[int, int]] = None


# ---------------------------------------------------------------- KKS and moment

def kks_pairing(a: OrbitPoint, x: TruncatedCurrent, y: TruncatedCurrent) -> Fraction:
    return residue_pairing(a.value, tcla_bracket(x, y))


def moment(points: Sequence[OrbitPoint]) -> AlgElement:
    if not points:
        raise ValidationError("empty point list")
    alg = points[0].value.alg
    total = alg.zero()
    for p in points:
        if p.value.alg is not alg:
            raise ValidationError("points over different algebras")
        total = total + p.value.residue
    return total


def _basis_currents(alg: LieAlgebra, s: int) -> List[TruncatedCurrent]:
    n = s * alg.dim
    out = []
    for k in range(n):
        v = [ZERO] * n
        v[k] = ONE
        out.append(TruncatedCurrent.from_vector(alg, s, v))
    return out


def moment_differential(values: Sequence[PrincipalPart]) -> list:
    """Columns Res(ad*_z A_a), z over a basis of each g_{s_a}."""
    cols = []
    for a in values:
        for z in _basis_currents(a.alg, a.s):
            cols.append(list(coadjoint_inf(z, a).residue.coords))
    return cols


# ---------------------------------------------------------------- sampling

_GRID = (Fraction(-2), Fraction(-1), Fraction(-1, 2), Fraction(1, 2), Fraction(1), Fraction(2))


def sample_rng(seed: int, index: int, tag: str = "") -> random.Random:
    return random.Random(f"{seed}:{index}:{tag}")


def random_word(alg: LieAlgebra, rng: random.Random, max_len: int = 6) -> GroupWord:
    roots = alg.rd.roots
    n = rng.randint(1, max_len)
    return GroupWord(tuple((rng.choice(roots), rng.choice(_GRID)) for _ in range(n)))


def random_birkhoff(alg: LieAlgebra, s: int, rng: random.Random, spread: int = 2) -> Optional[TruncatedCurrent]:
    if s == 1:
        return None
    v = [ZERO] * (s * alg.dim)
    for k in range(alg.dim, s * alg.dim):
        v[k] = Fraction(rng.randint(-spread, spread))
    return TruncatedCurrent.from_vector(alg, s, v)


def sample_orbit_point(marked: PrincipalPart, index: int, rng: random.Random,
                       config_index: int = 0) -> OrbitPoint:
    alg = marked.alg
    w = random_word(alg, rng)
    b = random_birkhoff(alg, marked.s, rng)
    return orbit_point(config_index, marked, w, b)


def sample_configuration(config: WildConfig, seed: int, index: int) -> List[OrbitPoint]:
    rng = sample_rng(seed, index, "cfg")
    return [sample_orbit_point(p, index, rng, k) for k, p in enumerate(config.markings)]


# ---------------------------------------------------------------- ranks

@dataclass(frozen=True)
class RankReport:
    min_rank: int
    max_rank: int
    expected: int
    ranks: Tuple[int, ...]

    @property
    def full_fraction(self) -> Fraction:
        if not self.ranks:
            return Fraction(0)
        return Fraction(sum(1 for r in self.ranks if r == self.expected), len(self.ranks))


def moment_rank(config: WildConfig, n_samples: int, seed: int) -> RankReport:
    if n_samples < 1:
        raise ValidationError("n_samples must be ≥ 1")
    alg = config.alg
    ranks = []
    for i in range(n_samples):
        pts = sample_configuration(config, seed, i)
        cols = moment_differential([p.value for p in pts])
        ranks.append(rank(cols) if cols else 0)
    return RankReport(min(ranks), max(ranks), alg.dim, tuple(ranks))


def composite_moment_rank(marked: PrincipalPart, n_samples: int, seed: int) -> RankReport:
    """Rank of z ↦ π_t Res(ad*_z A) over sampled A on the orbit of `marked`."""
    fd = fission(marked)
    if fd.nu < 1:
        raise ValidationError("composite moment rank needs ν ≥ 1")
    alg = marked.alg
    sl = alg.cartan_slice()
    ranks = []
    for i in range(n_samples):
        p = sample_orbit_point(marked, i, sample_rng(seed, i, "comp"))
        cols = [c[sl] for c in moment_differential([p.value])]
        ranks.append(rank(cols))
    return RankReport(min(ranks), max(ranks), alg.rank, tuple(ranks))


# ---------------------------------------------------------------- flatness

_CLAUSES = ("nu>=3 at one point", "nu>=2 and nu>=1 at two points", "nu>=1 at three points")


def flatness_verdict(config: WildConfig, rank_samples: int = 0, seed: int = 0) -> FlatnessVerdict:
    if not config.semisimple_flag:
        raise UnsupportedConfiguration("non-semisimple group: strip the centre first (see central_reduction)")
    fds = [fission(p) for p in config.markings]
    nu = tuple(fd.nu for fd in fds)
    chi = 2 - sum(nu)
    srt = sorted(nu, reverse=True)
    clause = None
    if srt and srt[0] >= 3:
        clause = _CLAUSES[0]
    elif len(srt) >= 2 and srt[0] >= 2 and srt[1] >= 1:
        clause = _CLAUSES[1]
    elif len(srt) >= 3 and srt[2] >= 1:
        clause = _CLAUSES[2]
    orders = [p.s for p in config.markings]
    all_generic = bool(nu) and all(n == s for n, s in zip(nu, orders))
    evidence = None
    if rank_samples and config.points:
        rep = moment_rank(config, rank_samples, seed)
        evidence = (rep.min_rank, rep.max_rank)
    return FlatnessVerdict(nu, chi, "holds" if clause else "fails", clause, all_generic,
                           sum(orders), evidence)


def central_reduction(alg: LieAlgebra, diagonals: Sequence[Sequence]) -> PrincipalPart:
    """gl_n diagonal coefficients → sl_n principal part, dropping the centre."""
    if alg.rd.cartan_type != "A":
        raise UnsupportedConfiguration("central reduction is implemented for gl_n")
    n = alg.rd.rank + 1
    out = []
    for d in diagonals:
        d = [Q(x) for x in d]
        if len(d) != n:
            raise ValidationError(f"expected {n} diagonal entries")
        mean = sum(d, ZERO) / n
        d = [x - mean for x in d]
        out.append(alg.cartan([sum(d[:i + 1], ZERO) for i in range(n - 1)]))
    return PrincipalPart(alg, len(out), out)


# ---------------------------------------------------------------- big cell

def _top_eigenvalues(alg: LieAlgebra, fd: FissionData) -> List[Fraction]:
    top = alg.cartan(fd.coefficients[-1])
    m = top.matrix()
    return [m[i][i] for i in range(alg.size)]


def cell_order(alg: LieAlgebra, fd: FissionData) -> Tuple[List[int], List[List[int]]]:
    """Permutation of the defining basis making l_1 block-diagonal and the adapted
    u^+_1 block upper triangular, with the blocks."""
    ev = _top_eigenvalues(alg, fd)
    # later coefficients break ties for the sign of the adapted Borel, the
    # defining-basis position breaks the rest (standard positivity)
    keys = []
    mats = [alg.cartan(c).matrix() for c in reversed(fd.coefficients)]
    for i in range(alg.size):
        keys.append(tuple(-m[i][i] for m in mats) + (i,))
    perm = sorted(range(alg.size), key=lambda i: keys[i])
    blocks: List[List[int]] = []
    for i in perm:
        if blocks and ev[blocks[-1][0]] == ev[i]:
            blocks[-1].append(i)
        else:
            blocks.append([i])
    return perm, blocks


def _series_block(g: LoopGroupElement, rows, cols):
    return [[[m[r][c] for c in cols] for r in rows] for m in g.mats]


def _smul(a, b, s):
    n, m = len(a[0]), len(b[0][0]) if b[0] else 0
    out = [zeros(n, m) for _ in range(s)]
    for i in range(s):
        if not any(any(r) for r in a[i]):
            continue
        for j in range(s - i):
            p = mat_mul(a[i], b[j])
            out[i + j] = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(out[i + j], p)]
    return out


def _ssub(a, b):
    return [mat_sub(x, y) for x, y in zip(a, b)]


def _sinv(a, s):
    try:
        m0 = inverse(a[0])
    except DegenerateForm:
        raise CellMiss("constant part is outside the big cell (singular leading minor)")
    out = [m0]
    for k in range(1, s):
        acc = zeros(len(m0))
        for j in range(1, k + 1):
            p = mat_mul(a[j], out[k - j])
            acc = [[x + y for x, y in zip(r1, r2)] for r1, r2 in zip(acc, p)]
        out.append([[-x for x in r] for r in mat_mul(m0, acc)])
    return out


def _assemble(alg, s, perm, blocks, parts) -> LoopGroupElement:
    n = alg.size
    mats = [zeros(n) for _ in range(s)]
    for (bi, bj), blk in parts.items():
        rows, cols = blocks[bi], blocks[bj]
        for k in range(s):
            for a, r in enumerate(rows):
                for b, c in enumerate(cols):
                    mats[k][r][c] = blk[k][a][b]
    return LoopGroupElement(alg, s, mats)


def _as_group(alg, s, g) -> LoopGroupElement:
    if isinstance(g, LoopGroupElement):
        return g
    word, b = g
    return LoopGroupElement.from_witness(alg, s, word, b)


def big_cell_factorize(g, fd: FissionData, alg: Optional[LieAlgebra] = None, s: Optional[int] = None):
    """g = h · u^- · u^+ with h ∈ L_1(O_s), u^± ∈ N^±_1(O_s)."""
    if isinstance(g, LoopGroupElement):
        alg, s = g.alg, g.s
    elif alg is None or s is None:
        raise ValidationError("algebra and order required for a witness pair")
    g = _as_group(alg, s, g)
    perm, blocks = cell_order(alg, fd)
    k = len(blocks)
    G = {(i, j): _series_block(g, blocks[i], blocks[j]) for i in range(k) for j in range(k)}
    L, D, U, Dinv = {}, {}, {}, {}
    for j in range(k):
        acc = G[(j, j)]
        for l in range(j):
            acc = _ssub(acc, _smul(_smul(L[(j, l)], D[l], s), U[(l, j)], s))
        D[j] = acc
        Dinv[j] = _sinv(acc, s)
        for i in range(j + 1, k):
            acc = G[(i, j)]
            for l in range(j):
                acc = _ssub(acc, _smul(_smul(L[(i, l)], D[l], s), U[(l, j)], s))
            L[(i, j)] = _smul(acc, Dinv[j], s)
            acc = G[(j, i)]
            for l in range(j):
                acc = _ssub(acc, _smul(_smul(L[(j, l)], D[l], s), U[(l, i)], s))
            U[(j, i)] = _smul(Dinv[j], acc, s)
    ident = lambda n: [identity(n)] + [zeros(n) for _ in range(s - 1)]
    hparts = {(j, j): D[j] for j in range(k)}
    umparts = {(j, j): ident(len(blocks[j])) for j in range(k)}
    for (i, j), blk in L.items():
        umparts[(i, j)] = _smul(_smul(Dinv[i], blk, s), D[j], s)
    upparts = {(j, j): ident(len(blocks[j])) for j in range(k)}
    upparts.update(U)
    h = _assemble(alg, s, perm, blocks, hparts)
    um = _assemble(alg, s, perm, blocks, umparts)
    up = _assemble(alg, s, perm, blocks, upparts)
    if h * um * up != g:
        raise InvariantViolation("big-cell factors do not reassemble")
    return h, um, up


def in_big_cell(g, fd: FissionData, alg=None, s=None) -> bool:
    """Leading block minors of the constant part, in the adapted order."""
    if isinstance(g, LoopGroupElement):
        alg, m = g.alg, g.mats[0]
    elif isinstance(g, GroupWord):
        m = word_matrix(alg, g)
    else:
        m = g
    perm, blocks = cell_order(alg, fd)
    acc = []
    for blk in blocks:
        acc = acc + blk
        if not det([[m[r][c] for c in acc] for r in acc]):
            return False
    return True


# ---------------------------------------------------------------- Darboux charts

def _theta_grading(alg: LieAlgebra, fd: FissionData) -> Dict[tuple, int]:
    """Integer grading with l_1 in degree 0 and n^-_1 in positive degrees."""
    pos = adapted_positive_roots(alg, fd.coefficients)
    phi1 = fd.levi_subsystems[0].roots
    mat = _simple_matrix(alg, pos)
    pos_sorted = sorted(pos)
    sums = {tuple(a + b for a, b in zip(x, y)) for x in pos_sorted for y in pos_sorted}
    simple = [a for a in pos_sorted if a not in sums]
    outside = [k for k, a in enumerate(simple) if a not in phi1]
    out = {}
    for a in alg.rd.roots:
        c = solve(mat, [Fraction(x) for x in a])
        out[a] = -int(sum(c[k] for k in outside))
    return out


def _n_minus_roots(alg: LieAlgebra, fd: FissionData) -> List[tuple]:
    pos = adapted_positive_roots(alg, fd.coefficients)
    phi1 = fd.levi_subsystems[0].roots
    return [a for a in alg.rd.roots if a not in pos and a not in phi1]


def project_dual_n_plus(alg: LieAlgebra, fd: FissionData, a: PrincipalPart) -> PrincipalPart:
    """Keep only the n^-_1 components (the dual of ñ^+_1)."""
    keep = {alg.index[r] for r in _n_minus_roots(alg, fd)}
    return PrincipalPart(alg, a.s, [alg.element(tuple(x if k in keep else ZERO for k, x in enumerate(c.coords)))
                                    for c in a.coeffs])


def nilpotent_transfer(u_minus: LoopGroupElement, a_sub: PrincipalPart, top: PrincipalPart,
                       fd: FissionData) -> PrincipalPart:
    """Y' = Ad*_{u^-}(A_sub + A_top) - (A_sub + A_top)."""
    base = a_sub + top
    y = ad_star(u_minus, base) - base
    if project_dual_n_plus(base.alg, fd, y) != y:
        raise InvariantViolation("nilpotent transfer left the dual of ñ^+_1")
    return y


def nilpotent_transfer_inverse(y: PrincipalPart, a_sub: PrincipalPart, top: PrincipalPart,
                               fd: FissionData) -> LoopGroupElement:
    """u^- = exp(X), X ∈ ñ^-_1, with Ad*_{u^-}(A_sub + A_top) - (A_sub + A_top) = y.

    Solved degree by degree for the grading deg(g_k ϖ^i) = k + iN, where the
    top coefficient acts invertibly on each graded piece.
    """
    alg, s = y.alg, y.s
    topc = top.coeffs[s - 1]
    if not topc.is_cartan():
        raise ValidationError("leading term must be Cartan-valued")
    theta = _theta_grading(alg, fd)
    roots = _n_minus_roots(alg, fd)
    big_n = max([theta[r] for r in roots] + [0]) + 1
    base = a_sub + top
    unknowns = {}
    for i in range(s):
        for r in roots:
            c = alg.rd.pair(r, topc.cartan_coords())
            if not c:
                raise DegenerateForm("leading term not regular for the grading")
            unknowns.setdefault(theta[r] + i * big_n, []).append((i, r, c))
    x = [[ZERO] * alg.dim for _ in range(s)]
    for deg in sorted(unknowns):
        cur = _exp_current(alg, s, x)
        resid = y - (ad_star(cur, base) - base)
        for i, r, c in unknowns[deg]:
            k = alg.index[r]
            # [X e_r ϖ^i, top ϖ^{-s}] = -<r, top> X e_r ϖ^{i-s}, coefficient index s-1-i
            x[i][k] = resid.coeffs[s - 1 - i].coords[k] / (-c)
    u = _exp_current(alg, s, x)
    if nilpotent_transfer(u, a_sub, top, fd) != y:
        raise InvariantViolation("nilpotent transfer inverse failed")
    return u


def _exp_current(alg, s, x) -> LoopGroupElement:
    xs = LoopGroupElement(alg, s, [alg.matrix_of(c) for c in x])
    out = LoopGroupElement.one(alg, s)
    term = LoopGroupElement.one(alg, s)
    k = 1
    while True:
        term = (term * xs).scaled(Fraction(1, k))
        if all(not any(any(r) for r in m) for m in term.mats):
            break
        out = out + term
        k += 1
        if k > 4 * s * alg.size + 4:
            raise InvariantViolation("exponent is not nilpotent")
    return out


@dataclass(frozen=True)
class ChartDatum:
    u_plus: LoopGroupElement
    y: PrincipalPart                  # n^-_1-valued, i.e. in (ñ^+_1)^∨
    h: LoopGroupElement               # L_1(O_s) element placing a_sub on its orbit

    def a_sub(self, marked: PrincipalPart) -> PrincipalPart:
        return _subleading(self.h, marked)


def _split_top(marked: PrincipalPart) -> Tuple[PrincipalPart, PrincipalPart]:
    alg, s = marked.alg, marked.s
    z = alg.zero()
    top = PrincipalPart(alg, s, [z] * (s - 1) + [marked.coeffs[s - 1]])
    return marked - top, top


def _subleading(h: LoopGroupElement, marked: PrincipalPart) -> PrincipalPart:
    _, top = _split_top(marked)
    return h.coadjoint(marked) - top


def darboux_chart(datum: ChartDatum, marked: PrincipalPart, index: int = 0) -> OrbitPoint:
    fd = fission(marked)
    _, top = _split_top(marked)
    a_sub = datum.a_sub(marked)
    yflat = project_dual_n_plus(marked.alg, fd, ad_star(datum.u_plus, datum.y))
    u_minus = nilpotent_transfer_inverse(yflat, a_sub, top, fd)
    g = datum.h * u_minus.inverse() * datum.u_plus
    value = g.coadjoint(marked)
    expect = datum.u_plus.coadjoint(yflat + a_sub + top)
    if value != expect:
        raise InvariantViolation("Darboux chart image disagrees with its defining formula")
    return OrbitPoint(index, value, g, marked)


def darboux_inverse(p: OrbitPoint, marked: PrincipalPart) -> ChartDatum:
    fd = fission(marked)
    g = p.group_element()
    if not in_big_cell(g, fd):
        raise CellMiss("point is outside this chart")
    h, um, up = big_cell_factorize(g, fd)
    _, top = _split_top(marked)
    a_sub = _subleading(h, marked)
    # paper form g = h (u^-)^{-1} u^+  ⇒  its u^- is our um^{-1}
    y_flat = nilpotent_transfer(um.inverse(), a_sub, top, fd)
    y = project_dual_n_plus(marked.alg, fd, ad_star(up.inverse(), y_flat))
    return ChartDatum(up, y, h)


def chart_cover(p: OrbitPoint, marked: PrincipalPart) -> List[WeylElement]:
    """Weyl elements w whose chart (centred at w(A')) contains p."""
    alg = marked.alg
    g = p.group_element()
    out = []
    for w in weyl_group(alg.rd):
        n = LoopGroupElement.from_word(alg, marked.s, weyl_lift(alg, w))
        marked_w = n.coadjoint(marked)
        gw = n.inverse() * g
        if in_big_cell(gw, fission(marked_w)):
            out.append(w)
    return out


# ---------------------------------------------------------------- constructive surjectivity

def _effect(alg, marked, word, b) -> list:
    return list(coadjoint_group(word, b, marked).residue.coords)


def residue_shift(marked: PrincipalPart, y: AlgElement, index: int = 0,
                  positive: Optional[Sequence[Root]] = None) -> OrbitPoint:
    """An orbit point whose higher coefficients equal those of `marked` and
    whose residue is Λ' + y.  The components of y along roots killed by the
    irregular part must all lie in n^+ or all in n^-, taken with respect to
    `positive` (default: the standard positive roots).

    Roots not killed by the irregular part are reached by Birkhoff factors
    exp(X ϖ^j) with j the top index where the root is nonzero (these shift
    only the residue); the rest by a constant unipotent word, solved by
    height recursion.
    """
    alg, s = marked.alg, marked.s
    rd = alg.rd
    coords = list(y.coords)
    supp = [alg.basis_roots[k] for k, c in enumerate(coords) if c]
    if any(r is None for r in supp):
        raise ValidationError("shift must be nilpotent (no Cartan part)")
    cart = [c.cartan_coords() for c in marked.coeffs]
    word = IDENTITY_WORD
    birk = [[ZERO] * alg.dim for _ in range(s)]
    plist = list(positive) if positive is not None else list(rd.positive_roots)
    # 2ρ^∨ of the positive system: additive and strictly positive on it
    rho = [sum(Q(rd.coroot(a)[i]) for a in plist) for i in range(rd.rank)]
    levels: Dict[Fraction, list] = {}
    for r in supp:
        top = next((j for j in range(s - 1, 0, -1) if rd.pair(r, cart[j])), None)
        if top is None:
            levels.setdefault(abs(rd.pair(r, rho)), []).append(r)
        else:
            k = alg.index[r]
            c = rd.pair(r, cart[top])
            # exp(-ad*_b) with b = X e_r ϖ^j: residue gains X <r, A'_j> e_r
            birk[top][k] = coords[k] / c
    if levels:
        pos = set(plist)
        side = {r in pos for lv in levels.values() for r in lv}
        if len(side) != 1:
            raise ValidationError("constant part of the shift must lie in n^+ or in n^-")
        # lower factors feed higher roots, so every killed root on that side is solved for
        plus = side.pop()
        for r in (plist if plus else [neg(a) for a in plist]):
            if all(not rd.pair(r, cart[j]) for j in range(1, s)) and r not in supp:
                levels.setdefault(abs(rd.pair(r, rho)), []).append(r)
    base = alg.element(tuple(x for x in marked.residue.coords))
    for hgt in sorted(levels):
        cur = _effect(alg, marked, word, None)
        for r in levels[hgt]:
            k = alg.index[r]
            unit = _effect(alg, marked, GroupWord(((r, ONE),)), None)[k] - base.coords[k]
            if not unit:
                raise DegenerateForm(f"residue is not regular along root {r}")
            want = coords[k] - (cur[k] - base.coords[k])
            word = word * GroupWord(((r, want / unit),))
    b = None
    if any(any(v) for v in birk):
        b = TruncatedCurrent(alg, s, [alg.element(tuple(v)) for v in birk])
    p = orbit_point(index, marked, word, b)
    want = marked.residue + y
    if p.value.residue != want or any(p.value.coeffs[j] != marked.coeffs[j] for j in range(1, s)):
        raise InvariantViolation("residue shift did not produce the requested residue")
    return p


def _conjugate_point(p: OrbitPoint, k: GroupWord) -> OrbitPoint:
    """p·k: value k^{-1} A k, witness (g0 k, Ad_{k^{-1}} b)."""
    word, b = p.witness
    alg = p.value.alg
    if b is not None:
        m = adjoint_of_word(alg, k.inverse())
        b = TruncatedCurrent(alg, b.s, [alg.element(tuple(mat_vec(m, c.coords))) for c in b.coeffs])
    q = orbit_point(p.base_config_index, p.marked, word * k, b)
    if q.value != coadjoint_group(k, None, p.value):
        raise InvariantViolation("conjugated witness mismatch")
    return q


def _project_roots(alg: LieAlgebra, x: AlgElement, roots) -> AlgElement:
    keep = {alg.index[r] for r in roots}
    return alg.element(tuple(c if k in keep else ZERO for k, c in enumerate(x.coords)))


def moment_preimage_three_orbits(target: AlgElement, markings: Sequence[PrincipalPart]) -> List[OrbitPoint]:
    if len(markings) != 3:
        raise ValidationError("exactly three marked normal forms required")
    alg = target.alg
    rd = alg.rd
    for m in markings:
        if m.alg is not alg:
            raise ValidationError("mixed algebras")
        if fission(m).levis[-1].dim != rd.rank:
            raise ValidationError("each final Levi must be the torus (ν ≥ 1)")
    m1, m2, m3 = markings
    if sum((m.residue for m in markings), alg.zero()) == target:
        return [orbit_point(i, m) for i, m in enumerate(markings)]
    # point 3: regular residue with prescribed Cartan part
    fsum = alg.zero()
    for a in rd.simple_roots:
        fsum = fsum + alg.root_vector(neg(a))
    p3 = residue_shift(m3, fsum, 2)
    sl = alg.cartan_slice()
    want = [t - a - b for t, a, b in zip(target.coords[sl], m1.residue.coords[sl], m2.residue.coords[sl])]

    def cartan_after(cs):
        k = GroupWord(tuple((a, c) for a, c in zip(rd.simple_roots, cs)))
        return list(coadjoint_group(k, None, p3.value).residue.coords[sl])

    r = rd.rank
    c0 = cartan_after([ZERO] * r)
    cols = []
    for i in range(r):
        e = [ZERO] * r
        e[i] = ONE
        cols.append([x - y for x, y in zip(cartan_after(e), c0)])
    sol = solve(transpose(cols), [w - x for w, x in zip(want, c0)])
    if sol is None:
        raise DegenerateForm("Cartan part cannot be adjusted")
    k = GroupWord(tuple((a, c) for a, c in zip(rd.simple_roots, sol)))
    p3 = _conjugate_point(p3, k)
    r3 = p3.value.residue
    if list(r3.coords[sl]) != want:
        # the adjustment is affine only when simple factors commute; fall back
        raise InvariantViolation("Cartan adjustment of the third residue failed")
    rest = target - r3 - m1.residue - m2.residue
    y2 = _project_roots(alg, rest, rd.positive_roots)
    y1 = _project_roots(alg, rest, [neg(a) for a in rd.positive_roots])
    p1 = residue_shift(m1, y1, 0)
    p2 = residue_shift(m2, y2, 1)
    out = [p1, p2, p3]
    if moment(out) != target:
        raise InvariantViolation("constructed points miss the target")
    for p, m in zip(out, markings):
        if not p.check(m):
            raise InvariantViolation("constructed point is off its orbit")
    return out
