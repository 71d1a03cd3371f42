"""ε-unfolding of UTS principal parts, the unfolding map for s ≤ 2, big-cell
image tests and the confluence charts ι_w for pole order 2."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import CellMiss, InvariantViolation, UnsupportedConfiguration, ValidationError
from .linalg import ONE, ZERO, Q, det, solve
from .liealg import AlgElement, GroupWord, LieAlgebra, weyl_lift
from .normalform import FissionData, fission
from .orbitflat import (OrbitPoint, WildConfig, big_cell_factorize, in_big_cell, moment_rank,
                        residue_shift)
from .rootdata import WeylElement, levi_of_annihilated_roots, weyl_group
from .tcla import LoopGroupElement, PrincipalPart, coadjoint_group
from .verma import adapted_positive_roots

PERTURBATION_LIMIT = 64


@dataclass(frozen=True)
class UnfoldingConfig:
    epsilons: Tuple[Fraction, ...]
    source: PrincipalPart

    def __post_init__(self):
        eps = tuple(Q(e) for e in self.epsilons)
        object.__setattr__(self, "epsilons", eps)
        if len(eps) != self.source.s:
            raise ValidationError(f"need {self.source.s} epsilons, got {len(eps)}")
        if len(set(eps)) != len(eps):
            raise ValidationError("epsilons must be pairwise distinct")
        if not self.source.is_cartan():
            raise ValidationError("source must have Cartan-valued coefficients")


@dataclass(frozen=True)
class UnfoldedResidues:
    residues: Tuple[AlgElement, ...]
    epsilons: Tuple[Fraction, ...]
    perturbed: bool = False


def residues_at(a: PrincipalPart, eps: Sequence[Fraction]) -> List[AlgElement]:
    s = a.s
    out = []
    for i in range(s):
        total = a.alg.zero()
        for j in range(i, s):
            c = ONE
            for l in range(j + 1):
                if l != i:
                    c /= eps[i] - eps[l]
            total = total + a.coeffs[j] * c
        out.append(total)
    return out


def _centralizers_match(a: PrincipalPart, res: Sequence[AlgElement]) -> bool:
    rd = a.alg.rd
    fd = fission(a)
    s = a.s
    for i, lam in enumerate(res):
        # G^{Λ̂_i} = L_{s-i}; L_0 = G
        want = fd.levi_subsystems[s - i - 1].roots
        got = levi_of_annihilated_roots(rd, [lam.cartan_coords()]).roots
        if got != want:
            return False
    return True


def unfold_residues(cfg: UnfoldingConfig) -> UnfoldedResidues:
    a = cfg.source
    eps = list(cfg.epsilons)
    res = residues_at(a, eps)
    perturbed = False
    if not _centralizers_match(a, res):
        found = None
        for idx in reversed(range(a.s)):
            for k in range(1, PERTURBATION_LIMIT):
                trial = list(eps)
                trial[idx] += k
                if len(set(trial)) != len(trial):
                    continue
                r = residues_at(a, trial)
                if _centralizers_match(a, r):
                    found = (trial, r)
                    break
            if found:
                break
        if not found:
            raise UnsupportedConfiguration("could not adjust ε to meet the centralizer condition")
        eps, res = found
        perturbed = True
    total = sum(res, a.alg.zero())
    if total != a.residue:
        raise InvariantViolation("unfolded residues do not sum to the residue")
    return UnfoldedResidues(tuple(res), tuple(eps), perturbed)


def _marked(x: AlgElement) -> PrincipalPart:
    return PrincipalPart(x.alg, 1, [x])


def _split_roots(alg: LieAlgebra, x: AlgElement, plus: frozenset) -> Tuple[AlgElement, AlgElement, AlgElement]:
    pc, mc, cc = [ZERO] * alg.dim, [ZERO] * alg.dim, [ZERO] * alg.dim
    for k, c in enumerate(x.coords):
        r = alg.basis_roots[k]
        if r is None:
            cc[k] = c
        elif r in plus:
            pc[k] = c
        else:
            mc[k] = c
    return alg.element(tuple(pc)), alg.element(tuple(mc)), alg.element(tuple(cc))


def _conjugate(p: OrbitPoint, g: LoopGroupElement) -> OrbitPoint:
    """Replace the witness k of p by k·g (value g^{-1} A g)."""
    k = p.group_element() * g
    q = OrbitPoint(p.base_config_index, k.coadjoint(p.marked), k, p.marked)
    if q.value != g.coadjoint(p.value):
        raise InvariantViolation("conjugated witness mismatch")
    return q


def unfolding_map(p: OrbitPoint, cfg: UnfoldingConfig) -> List[OrbitPoint]:
    """Components on the orbits of Λ̂_0, …, Λ̂_{s-1}; implemented for s ≤ 2."""
    a = cfg.source
    s = a.s
    alg = a.alg
    if p.marked is not None and p.marked != a:
        raise ValidationError("orbit point is not over the unfolding source")
    if not p.check(a):
        raise ValidationError("witness does not reproduce the orbit point")
    unf = unfold_residues(cfg)
    if s == 1:
        return [OrbitPoint(0, p.value, p.witness, a)]
    if s > 2:
        raise UnsupportedConfiguration("unfolding map is implemented for pole order ≤ 2")
    k = p.group_element()
    k0 = LoopGroupElement.constant(alg, s, k.mats[0])
    frame = (k * k0.inverse()).coadjoint(a)            # k = e^{b'} k0
    lam_c = frame.residue
    l0, l1 = unf.residues
    sdiff = lam_c - l0 - l1
    fd = fission(a)
    phi1 = fd.levi_subsystems[0].roots
    pos = adapted_positive_roots(alg, fd.coefficients)
    sp, sm, sc = _split_roots(alg, sdiff, frozenset(r for r in pos if r not in phi1))
    leftover = sdiff - sp - sm
    if not leftover.is_zero():
        raise InvariantViolation("S does not split in u^+ ⊕ u^- (π'(S) ≠ 0)")
    comps = []
    for i, (lam, y) in enumerate(((l0, sp), (l1, sm))):
        q = residue_shift(_marked(lam), y, i, pos)
        g1 = LoopGroupElement.constant(alg, 1, k.mats[0])
        comps.append(_conjugate(q, g1))
    total = comps[0].value.residue + comps[1].value.residue
    if total != p.value.residue:
        raise InvariantViolation("unfolding map does not intertwine the moment maps")
    return comps


def image_membership(points: Sequence[OrbitPoint], fd: Optional[FissionData] = None) -> bool:
    """All ratios g_i g_0^{-1} lie in the big cell."""
    if not points:
        raise ValidationError("empty tuple")
    if any(p.witness is None for p in points):
        raise ValidationError("witnesses required")
    if len(points) == 1:
        return True
    alg = points[0].value.alg
    g0 = points[0].group_element()
    g0i = LoopGroupElement.constant(alg, 1, g0.mats[0]).inverse()
    for p in points[1:]:
        ratio = LoopGroupElement.constant(alg, 1, p.group_element().mats[0]) * g0i
        if fd is not None:
            if not in_big_cell(ratio, fd):
                return False
        elif not _standard_cell(ratio.mats[0]):
            return False
    return True


def _standard_cell(m) -> bool:
    n = len(m)
    return all(det([row[:k] for row in m[:k]]) for k in range(1, n + 1))


# ---------------------------------------------------------------- confluence

@dataclass(frozen=True)
class ConfluenceData:
    lam: AlgElement            # Λ'
    lam_bar: AlgElement        # marking of the second orbit
    w: WeylElement

    @property
    def alg(self) -> LieAlgebra:
        return self.lam.alg

    def lift(self) -> GroupWord:
        return weyl_lift(self.alg, self.w)

    def translated_bar(self) -> AlgElement:
        """w^{-1}(Λ̄') realised as ṅ^{-1} Λ̄' ṅ."""
        x = coadjoint_group(self.lift(), None, _marked(self.lam_bar)).residue
        if not x.is_cartan():
            raise InvariantViolation("Weyl lift does not preserve the torus")
        return x

    def normal_form(self) -> PrincipalPart:
        """A'_w = (Λ' + w^{-1}Λ̄') ϖ^{-1} + Λ' ϖ^{-2}."""
        return PrincipalPart(self.alg, 2, [self.lam + self.translated_bar(), self.lam])


def _regular(x: AlgElement) -> bool:
    rd = x.alg.rd
    return all(rd.pair(a, x.cartan_coords()) for a in rd.positive_roots)


def _check_confluence(data: ConfluenceData):
    if not (data.lam.is_cartan() and data.lam_bar.is_cartan()):
        raise ValidationError("markings must be Cartan")
    if not (_regular(data.lam) and _regular(data.lam_bar)):
        raise ValidationError("both orbits must be regular semisimple")


def confluence_forward(p: OrbitPoint, data: ConfluenceData) -> Tuple[OrbitPoint, OrbitPoint]:
    """ι_w: a point of O'_w to a pair in O(Λ') × O(Λ̄')."""
    _check_confluence(data)
    alg = data.alg
    aw = data.normal_form()
    if not p.check(aw):
        raise ValidationError("point is not on the orbit of A'_w")
    k = p.group_element()
    k0 = LoopGroupElement.constant(alg, 2, k.mats[0])
    frame = (k * k0.inverse()).coadjoint(aw)
    if frame.coeffs[1] != data.lam:
        raise InvariantViolation("Birkhoff part moved the leading term")
    x = frame.residue - aw.residue
    xp, xm, xc = _split_roots(alg, x, frozenset(alg.rd.positive_roots))
    if not xc.is_zero():
        raise InvariantViolation("frame residue has a Cartan deviation")
    g1 = LoopGroupElement.constant(alg, 1, k.mats[0])
    q1 = _conjugate(residue_shift(_marked(data.lam), xp, 0), g1)
    wbar = data.translated_bar()
    q2 = residue_shift(_marked(wbar), xm, 1)
    # re-express q2 over the marking Λ̄' via the Weyl lift
    n = LoopGroupElement.from_word(alg, 1, data.lift())
    q2 = OrbitPoint(1, q2.value, n * q2.group_element(), _marked(data.lam_bar))
    if not q2.check():
        raise InvariantViolation("Weyl re-marking failed")
    q2 = _conjugate(q2, g1)
    return q1, q2


def confluence_chart_contains(pair: Tuple[OrbitPoint, OrbitPoint], data: ConfluenceData) -> bool:
    alg = data.alg
    g1 = pair[0].group_element()
    g2 = pair[1].group_element()
    n = LoopGroupElement.from_word(alg, 1, data.lift())
    m = n.inverse() * g2 * g1.inverse()
    return _standard_cell(m.mats[0])


def confluence_embed(pair: Tuple[OrbitPoint, OrbitPoint], data: ConfluenceData) -> OrbitPoint:
    """Inverse of ι_w on its image."""
    _check_confluence(data)
    alg = data.alg
    p1, p2 = pair
    if not p1.check(_marked(data.lam)) or not p2.check(_marked(data.lam_bar)):
        raise ValidationError("pair is not on the orbits of the markings")
    g1 = p1.group_element()
    g2 = p2.group_element()
    n = LoopGroupElement.from_word(alg, 1, data.lift())
    m = n.inverse() * g2 * g1.inverse()
    if not _standard_cell(m.mats[0]):
        raise CellMiss("pair is outside the chart of this Weyl element")
    fd_std = fission(PrincipalPart(alg, 1, [_std_regular(alg)]))
    _, _, vp = big_cell_factorize(m, fd_std)
    g = vp * g1
    wbar = data.translated_bar()
    x_plus = g.inverse().coadjoint(p1.value).residue - data.lam
    x_minus = g.inverse().coadjoint(p2.value).residue - wbar
    aw = data.normal_form()
    frame = residue_shift(aw, x_plus + x_minus)
    k = frame.group_element() * _lift2(alg, g)
    point = OrbitPoint(0, k.coadjoint(aw), k, aw)
    back = confluence_forward(point, data)
    if back[0].value != p1.value or back[1].value != p2.value:
        raise InvariantViolation("confluence chart does not round-trip")
    return point


def _lift2(alg, g: LoopGroupElement) -> LoopGroupElement:
    return LoopGroupElement.constant(alg, 2, g.mats[0])


def _std_regular(alg: LieAlgebra) -> AlgElement:
    """A Cartan element whose adapted order is the standard one (ρ^∨-like)."""
    rd = alg.rd
    # solve <α_i, h> = 1 for all simple i
    cm = [[Fraction(rd.cartan_matrix[j][i]) for j in range(rd.rank)] for i in range(rd.rank)]
    h = solve(cm, [ONE] * rd.rank)
    return alg.cartan(h)


def confluence_cover(pair: Tuple[OrbitPoint, OrbitPoint], lam: AlgElement, lam_bar: AlgElement) -> List[WeylElement]:
    out = []
    for w in weyl_group(lam.alg.rd):
        if confluence_chart_contains(pair, ConfluenceData(lam, lam_bar, w)):
            out.append(w)
    return out


# ---------------------------------------------------------------- bridge

@dataclass(frozen=True)
class BridgeCertificate:
    unfolded: Tuple[UnfoldedResidues, ...]
    residue_offsets_zero: bool
    rank_full_fraction: Fraction
    rank_expected: int
    passes: bool


def unfolded_flatness_bridge(config: WildConfig, n_samples: int = 20, seed: int = 0,
                             threshold: Fraction = Fraction(95, 100)) -> BridgeCertificate:
    marks = config.markings
    if len(marks) != 3:
        raise ValidationError("bridge expects three marked points")
    alg = config.alg
    unf = []
    tame = []
    for a in marks:
        if fission(a).levis[-1].dim != alg.rd.rank:
            raise ValidationError("each final Levi must be the torus")
        u = unfold_residues(UnfoldingConfig(tuple(Fraction(i) for i in range(a.s)), a))
        unf.append(u)
        tame.extend(u.residues)
    offsets = all(sum(u.residues, alg.zero()) == a.residue for u, a in zip(unf, marks))
    tcfg = WildConfig(alg.rd, tuple((f"u{i}", _marked(x)) for i, x in enumerate(tame)))
    rep = moment_rank(tcfg, n_samples, seed)
    frac = rep.full_fraction
    return BridgeCertificate(tuple(unf), offsets, frac, alg.dim, offsets and frac >= threshold)
