"""Sufficient stability test by enumeration over maximal standard parabolics
and Weyl tuples, in two equivalent formulations."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Optional, Tuple

from .errors import UnsupportedConfiguration
from .linalg import in_span
from .orbitflat import WildConfig
from .rootdata import RootDatum, parabolic_characters, weyl_group

ENUMERATION_CAP = 10 ** 6


@dataclass(frozen=True)
class StabilityVerdict:
    stable_certified: bool
    witness_failure: Optional[Tuple[Tuple[int, ...], Tuple[Tuple[int, ...], ...], Tuple[Fraction, ...]]]
    enumeration_size: int
    subsets: int

    def summary(self) -> tuple:
        return (self.stable_certified, self.enumeration_size)


def _residues(config: WildConfig):
    return [p.residue.cartan_coords() for p in config.markings]


def _tuples(rd: RootDatum, n: int):
    w = weyl_group(rd)
    if len(w) ** n > ENUMERATION_CAP:
        raise UnsupportedConfiguration(f"|W|^n = {len(w) ** n} exceeds the enumeration cap {ENUMERATION_CAP}")
    return w, product(range(len(w)), repeat=n)


def _translated_sum(rd: RootDatum, weyl, idx, residues):
    total = [Fraction(0)] * rd.rank
    for k, lam in zip(idx, residues):
        total = [a + b for a, b in zip(total, weyl[k].apply(lam))]
    return tuple(total)


def stability_check(config: WildConfig) -> StabilityVerdict:
    """Certified iff every (Δ', w-tuple) admits a character of p(Δ') that is
    nonzero on Σ w_a(Λ'_a)."""
    rd = config.algebra
    residues = _residues(config)
    weyl, tuples = _tuples(rd, len(residues))
    count = 0
    for idx in tuples:
        v = _translated_sum(rd, weyl, idx, residues)
        for k in range(rd.rank):
            count += 1
            chars = parabolic_characters(rd, [k])
            if all(rd.pair(chi, v) == 0 for chi in chars):
                kept = tuple(j for j in range(rd.rank) if j != k)
                return StabilityVerdict(False, (kept, tuple(weyl[i].word for i in idx), v), count, rd.rank)
    return StabilityVerdict(True, None, count, rd.rank)


def avoidance_check(config: WildConfig) -> StabilityVerdict:
    """Certified iff no Σ w_a(Λ'_a) lies in V' = ∪ span{α_j^∨ : j ∈ Δ'}."""
    rd = config.algebra
    residues = _residues(config)
    weyl, tuples = _tuples(rd, len(residues))
    spans = []
    for k in range(rd.rank):
        kept = tuple(j for j in range(rd.rank) if j != k)
        spans.append((kept, [list(rd.coroot(rd.simple_roots[j])) for j in kept]))
    count = 0
    for idx in tuples:
        v = list(_translated_sum(rd, weyl, idx, residues))
        for kept, vecs in spans:
            count += 1
            if in_span(vecs, v):
                return StabilityVerdict(False, (kept, tuple(weyl[i].word for i in idx), tuple(v)), count, rd.rank)
    return StabilityVerdict(True, None, count, rd.rank)
