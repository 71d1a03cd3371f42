"""Seeded random generators shared by the test modules."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional

from wildred.liealg import GroupWord, LieAlgebra, lie_algebra
from wildred.normalform import fission, resonance_report
from wildred.orbitflat import WildConfig, random_word
from wildred.tcla import LoopGroupElement, PrincipalPart, TruncatedCurrent, UnitSeries

F = Fraction


def rq(rng: random.Random, num: int = 5, den: int = 4) -> Fraction:
    return F(rng.randint(-num, num), rng.randint(1, den))


def nonzero_rq(rng: random.Random) -> Fraction:
    while True:
        x = rq(rng)
        if x:
            return x


def regular_cartan(alg: LieAlgebra, rng: random.Random):
    """A Cartan element with no root vanishing on it."""
    rd = alg.rd
    while True:
        v = [rq(rng) for _ in range(rd.rank)]
        if all(rd.pair(a, v) for a in rd.positive_roots):
            return alg.cartan(v)


def random_cartan(alg: LieAlgebra, rng: random.Random):
    return alg.cartan([rq(rng) for _ in range(alg.rank)])


def random_principal(alg: LieAlgebra, s: int, rng: random.Random, regular_top: bool = False) -> PrincipalPart:
    coeffs = [random_cartan(alg, rng) for _ in range(s)]
    if regular_top:
        coeffs[-1] = regular_cartan(alg, rng)
    return PrincipalPart(alg, s, coeffs)


def random_nonresonant(alg: LieAlgebra, s: int, rng: random.Random, regular_top: bool = False) -> PrincipalPart:
    while True:
        a = random_principal(alg, s, rng, regular_top)
        if resonance_report(a).nonresonant:
            return a


def random_current(alg: LieAlgebra, s: int, rng: random.Random, roots=None, cartan: bool = True,
                   constant: bool = False) -> TruncatedCurrent:
    """Random element of ϖ g_s (or g_s), optionally restricted to root lines."""
    coeffs = []
    for d in range(s):
        if d == 0 and not constant:
            coeffs.append(alg.zero())
            continue
        c = [F(0)] * alg.dim
        for k in range(alg.dim):
            r = alg.basis_roots[k]
            if r is None:
                if cartan:
                    c[k] = F(rng.randint(-2, 2))
            elif roots is None or r in roots:
                c[k] = F(rng.randint(-2, 2))
        coeffs.append(alg.element(tuple(c)))
    return TruncatedCurrent(alg, s, coeffs)


def random_group(alg: LieAlgebra, s: int, rng: random.Random, roots, cartan: bool) -> LoopGroupElement:
    """word(roots) · exp(ϖ-current on roots [+ Cartan])."""
    roots = list(roots)
    fac = tuple((rng.choice(roots), F(rng.choice([-2, -1, 1, 2]), rng.choice([1, 2])))
                for _ in range(rng.randint(0, 4))) if roots else ()
    g = LoopGroupElement.from_word(alg, s, GroupWord(fac))
    if s > 1:
        g = g * LoopGroupElement.exp_current(random_current(alg, s, rng, frozenset(roots), cartan))
    return g


def random_unit(s: int, rng: random.Random) -> UnitSeries:
    return UnitSeries(s, tuple([nonzero_rq(rng)] + [rq(rng) for _ in range(s - 1)]))


def config_of(alg: LieAlgebra, parts: List[PrincipalPart]) -> WildConfig:
    return WildConfig(alg.rd, tuple((f"p{i}", p) for i, p in enumerate(parts)))


def tame_config(alg: LieAlgebra, residues) -> WildConfig:
    return config_of(alg, [PrincipalPart(alg, 1, [alg.cartan(r)]) for r in residues])


def pattern(orders, rng: random.Random, alg: Optional[LieAlgebra] = None) -> WildConfig:
    """One point per pole order with a regular leading term and a nonresonant residue."""
    alg = alg or lie_algebra("A", 1)
    return config_of(alg, [random_nonresonant(alg, s, rng, regular_top=True) for s in orders])


__all__ = ["F", "rq", "nonzero_rq", "regular_cartan", "random_cartan", "random_principal",
           "random_nonresonant", "random_current", "random_group", "random_unit", "config_of",
           "tame_config", "pattern", "random_word", "fission"]
