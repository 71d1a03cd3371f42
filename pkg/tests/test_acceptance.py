"""The twelve acceptance criteria.

Each check returns (passed, detail).  Under pytest every criterion is one
test; run as a script (`python3 tests/test_acceptance.py`) it prints one
PASS/FAIL line per criterion.
"""

from __future__ import annotations

import os
import random
import sys
import time
from itertools import product

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from helpers import (F, pattern, random_cartan, random_current, random_group,  # noqa: E402
                     random_nonresonant, random_principal, random_unit, regular_cartan, rq, tame_config)
from wildred.errors import CellMiss  # noqa: E402
from wildred.liealg import adjoint_of_word, lie_algebra, weyl_lift  # noqa: E402
from wildred.linalg import in_span  # noqa: E402
from wildred.normalform import ConnectionGerm, fission, gauge_transform, normalize, resonance_report  # noqa: E402
from wildred.orbitflat import (big_cell_factorize, moment, moment_preimage_three_orbits,  # noqa: E402
                               moment_rank, orbit_point, random_word, sample_orbit_point, sample_rng)
from wildred.rootdata import neg, weyl_element, weyl_group  # noqa: E402
from wildred.stability import avoidance_check, stability_check  # noqa: E402
from wildred.tcla import (LoopGroupElement, PrincipalPart, TruncatedCurrent, apply_unit,  # noqa: E402
                          automorphism_conj, automorphism_diag, automorphism_unit, decompose_automorphism)
from wildred.unfolding import ConfluenceData, confluence_cover, confluence_embed, confluence_forward, residues_at  # noqa: E402
from wildred.verma import (adapted_positive_roots, comoment_check, image_identity_check,  # noqa: E402
                           simplicity_test, slice_for)

A1 = lie_algebra("A", 1)
A2 = lie_algebra("A", 2)


# ---------------------------------------------------------------- 1

def criterion_1():
    rng = random.Random(101)
    n = 0
    for k in range(200):
        alg = (A1, A2)[k % 2]
        s = rng.randint(1, 4)
        a = random_principal(alg, s, rng)
        eps = rng.sample(range(-20, 20), s)
        eps = [F(e, rng.randint(1, 3)) for e in eps]
        if len(set(eps)) != s:
            eps = [F(i) for i in range(s)]
        res = residues_at(a, eps)
        if sum(res, alg.zero()) != a.residue:
            return False, f"sample {k}: Σ unfolded residues ≠ Λ'"
        n += 1
    return True, f"{n} exact identities"


# ---------------------------------------------------------------- 2

def criterion_2():
    rng = random.Random(202)
    plan = [(A1, 1)] * 5 + [(A1, 2)] * 5 + [(A1, 3)] * 5 + [(A2, 1)] * 4 + [(A2, 2)] * 4
    checked = 0
    for alg, s in plan:
        for _ in range(50):
            a = random_nonresonant(alg, s, rng, regular_top=(s > 1))
            sl = slice_for(a, 4)
            v = simplicity_test(sl)
            if not v.criterion_nonzero_integer_pass:
                continue
            if not v.simple_up_to_n:
                return False, f"nonresonant {a} degenerates at grade {v.first_degenerate_grade}"
            checked += 1
            break
        else:
            return False, f"no nonresonant sample for {alg} s={s}"
    return checked >= 20, f"{checked} nonresonant slices, all Gram determinants nonzero to grade 4"


# ---------------------------------------------------------------- 3

def criterion_3():
    a = PrincipalPart(A1, 1, [A1.h(0) * F(3, 2)])
    sl = slice_for(a, 5)
    v = simplicity_test(sl)
    zero_grades = sorted({g for _, g in v.degenerate})
    ok = v.first_degenerate_grade == 4 and zero_grades[0] == 4
    flagged = [str(x) for _, x in v.flagged]
    return ok and flagged == ["4"], f"first vanishing determinant at grade {v.first_degenerate_grade}; flagged values {', '.join(flagged)}"


# ---------------------------------------------------------------- 4

def criterion_4():
    rng = random.Random(404)
    m = 5
    n = 0
    for k in range(100):
        alg = (A1, A2)[k % 2]
        s = rng.randint(1, 3)
        a = random_nonresonant(alg, s, rng, regular_top=rng.random() < 0.5)
        x = random_current(alg, m + s, rng)
        # degrees 1..m only
        x = TruncatedCurrent(alg, m + s, [c if d <= m else alg.zero() for d, c in enumerate(x.coeffs)])
        germ = gauge_transform(ConnectionGerm(a, (), m), x)
        normal, y = normalize(germ)
        if normal != a:
            return False, f"sample {k}: normal form not recovered"
        if y.coeffs[:m + 1] != x.coeffs[:m + 1]:
            return False, f"sample {k}: gauge differs below order {m + 1}"
        n += 1
    return True, f"{n} normal forms and gauges recovered exactly"


# ---------------------------------------------------------------- 5

def _classification(a):
    fd = fission(a)
    rr = resonance_report(a)
    return (fd.dims(), tuple(frozenset(x.roots) for x in fd.levi_subsystems), fd.nu, fd.torus_indices,
            rr.nonresonant, rr.offenders)


def criterion_5():
    rng = random.Random(505)
    for k in range(100):
        alg = (A1, A2)[k % 2]
        s = rng.randint(1, 4)
        a = random_principal(alg, s, rng)
        if rng.random() < 0.3:
            # include resonant residues
            cs = list(a.coeffs)
            cs[0] = alg.h(0) * F(rng.randint(1, 3), 2)
            a = PrincipalPart(alg, s, cs)
        b = apply_unit(random_unit(s, rng), a)
        if _classification(a) != _classification(b):
            return False, f"sample {k}: classification changed under a unit change"
    return True, "100 unit changes, fission/ν/resonance unchanged"


# ---------------------------------------------------------------- 6

PATTERNS = {"Schlesinger": (1, 1, 1), "JMMS": (2, 1, 1), "PIV": (3, 1), "PII": (4,)}


def criterion_6():
    rng = random.Random(606)
    parts = []
    ok = True
    for name, orders in PATTERNS.items():
        cfg = pattern(orders, rng)
        rep = moment_rank(cfg, 200, 6)
        good = rep.max_rank == 3 and rep.full_fraction >= F(95, 100)
        ok &= good
        parts.append(f"{name} {rep.full_fraction}")
    neg_cfg = pattern((1,), rng)
    rep = moment_rank(neg_cfg, 200, 6)
    ok &= rep.max_rank == 2
    parts.append(f"control max {rep.max_rank}")
    return ok, ", ".join(parts)


# ---------------------------------------------------------------- 7

def criterion_7():
    rng = random.Random(707)
    n = 0
    for orders in [(1, 1, 1), (2, 1, 1), (2, 2, 1)]:
        for k in range(34 if orders != (2, 2, 1) else 32):
            marks = [random_nonresonant(A1, s, rng, regular_top=True) for s in orders]
            target = A1.element(tuple(rq(rng) for _ in range(A1.dim)))
            pts = moment_preimage_three_orbits(target, marks)
            if moment(pts) != target or not all(p.check(m) for p, m in zip(pts, marks)):
                return False, f"pattern {orders} sample {k}: preimage wrong"
            n += 1
    return True, f"{n} exact preimages"


# ---------------------------------------------------------------- 8

def _factor_roots(alg, fd):
    pos = adapted_positive_roots(alg, fd.coefficients)
    phi1 = fd.levi_subsystems[0].roots
    plus = [a for a in pos if a not in phi1]
    return list(phi1), [neg(a) for a in plus], plus


def criterion_8():
    rng = random.Random(808)
    n = 0
    for k in range(200):
        alg = (A1, A2)[k % 2]
        s = rng.randint(1, 3)
        a = random_principal(alg, s, rng)
        fd = fission(a)
        levi, minus, plus = _factor_roots(alg, fd)
        h = random_group(alg, s, rng, levi, True)
        um = random_group(alg, s, rng, minus, False)
        up = random_group(alg, s, rng, plus, False)
        got = big_cell_factorize(h * um * up, fd)
        if got != (h, um, up):
            return False, f"sample {k}: factors not recovered"
        n += 1
    flips = 0
    for alg in (A1, A2):
        for _ in range(4):
            a = random_principal(alg, 2, rng, regular_top=rng.random() < 0.5)
            fd = fission(a)
            levi = set(fd.levi_subsystems[0].roots)
            pos = adapted_positive_roots(alg, fd.coefficients)
            for w in weyl_group(alg.rd):
                g = LoopGroupElement.from_word(alg, 2, weyl_lift(alg, w))
                inside = all(tuple(r) in levi for r in _moved_roots(alg, w, pos))
                try:
                    big_cell_factorize(g, fd)
                    missed = False
                except CellMiss:
                    missed = True
                if missed == inside:
                    return False, f"Weyl element {w.word}: cell membership wrong"
                flips += missed
    return flips > 0, f"{n} unique factorizations, {flips} Weyl-flip cell misses signalled"


def _moved_roots(alg, w, positive):
    """Roots of `positive` sent outside it by w (the inversion set)."""
    rd = alg.rd
    pos = {tuple(F(x) for x in p) for p in positive}
    return [a for a in positive if tuple(rd.apply_weyl_covector(w, a)) not in pos]


# ---------------------------------------------------------------- 9

def criterion_9():
    rng = random.Random(909)
    n = 0
    for k in range(100):
        lam, lam_bar = regular_cartan(A1, rng), regular_cartan(A1, rng)
        m1 = PrincipalPart(A1, 1, [lam])
        m2 = PrincipalPart(A1, 1, [lam_bar])
        p1 = sample_orbit_point(m1, k, sample_rng(9, k, "a"))
        p2 = sample_orbit_point(m2, k, sample_rng(9, k, "b"), 1)
        cover = confluence_cover((p1, p2), lam, lam_bar)
        if not cover:
            return False, f"pair {k} lies in no chart"
        data = ConfluenceData(lam, lam_bar, cover[0])
        pt = confluence_embed((p1, p2), data)
        q1, q2 = confluence_forward(pt, data)
        if (q1.value, q2.value) != (p1.value, p2.value):
            return False, f"pair {k} does not round-trip"
        n += 1
    return True, f"{n} pairs covered and round-tripped"


# ---------------------------------------------------------------- 10

def _basis(alg, s):
    out = []
    for d in range(s):
        for k in range(alg.dim):
            out.append(TruncatedCurrent.monomial(alg.basis(k), d, s))
    return out


def criterion_10():
    rng = random.Random(1010)
    pairs = 0
    for s in (1, 2):
        a = random_nonresonant(A1, s, rng, regular_top=True)
        sl = slice_for(a, 1)
        samples = [orbit_point(0, a, random_word(A1, rng), random_current(A1, s, rng) if s > 1 else None)
                   for _ in range(20)]
        for x, y in product(_basis(A1, s), repeat=2):
            if not comoment_check(sl, x, y, samples):
                return False, f"s={s}: comoment fails for a basis pair"
            pairs += 1
        for c in (1, 2, 3):
            if not image_identity_check(sl, c):
                return False, f"s={s}: image identity fails at c={c}"
    return True, f"{pairs} basis pairs × 20 samples; image identity at c=1,2,3"


# ---------------------------------------------------------------- 11

def criterion_11():
    rng = random.Random(1111)
    for k in range(100):
        alg = (A1, A2)[k % 2]
        s = rng.randint(1, 3)
        factors = [
            automorphism_diag(alg, s, adjoint_of_word(alg, random_word(alg, rng, 4))),
            automorphism_conj(random_current(alg, s, rng)),
            automorphism_unit(alg, random_unit(s, rng)),
        ]
        rng.shuffle(factors)
        phi = factors[0]
        for f in factors[1:]:
            phi = phi.compose(f)
        phi0, z, f = decompose_automorphism(phi)
        rebuilt = automorphism_diag(alg, s, phi0).compose(automorphism_conj(z)).compose(automorphism_unit(alg, f))
        if rebuilt != phi:
            return False, f"sample {k}: reassembly differs"
    return True, "100 composites decomposed and reassembled"


# ---------------------------------------------------------------- 12

def _witness_valid(cfg, verdict):
    rd = cfg.algebra
    kept, words, v = verdict.witness_failure
    total = [F(0)] * rd.rank
    for word, p in zip(words, cfg.markings):
        total = [x + y for x, y in zip(total, weyl_element(rd, word).apply(p.residue.cartan_coords()))]
    if tuple(total) != tuple(v):
        return False
    return in_span([list(rd.coroot(rd.simple_roots[j])) for j in kept], list(v)) if kept else not any(v)


def criterion_12():
    rng = random.Random(1212)
    catalog = []
    for k in range(30):
        alg = (A1, A2)[k % 2]
        catalog.append(tame_config(alg, [random_cartan(alg, rng).cartan_coords()
                                         for _ in range(rng.randint(1, 3))]))
    # constructed failures: residues cancelling after Weyl translation, or lying on a wall
    for k in range(20):
        alg = (A1, A2)[k % 2]
        rd = alg.rd
        lam = random_cartan(alg, rng).cartan_coords()
        kind = k % 4
        if kind == 0:
            res = [lam, tuple(-x for x in lam)]
        elif kind == 1:
            w = rng.choice(weyl_group(rd))
            res = [lam, tuple(-x for x in w.apply(lam))]
        elif kind == 2:
            res = [tuple([F(0)] * rd.rank)]
        else:
            j = rng.randrange(rd.rank)
            c = rq(rng)
            res = [tuple(c * x for x in rd.coroot(rd.simple_roots[j]))]
        catalog.append(tame_config(alg, res))
    agree = 0
    failures = 0
    for cfg in catalog:
        a, b = stability_check(cfg), avoidance_check(cfg)
        if a.stable_certified != b.stable_certified:
            return False, "formulations disagree"
        for v in (a, b):
            if not v.stable_certified and not _witness_valid(cfg, v):
                return False, "invalid failure witness"
        failures += not a.stable_certified
        agree += 1
    return failures >= 20, f"{agree} configs agree, {failures} with verified failure witnesses"


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10, criterion_11, criterion_12]

RESULTS = {}


@pytest.mark.parametrize("k", range(1, 13))
def test_criterion(k):
    t0 = time.perf_counter()
    ok, detail = CRITERIA[k - 1]()
    RESULTS[k] = (ok, detail, time.perf_counter() - t0)
    assert ok, detail


def main() -> int:
    failed = 0
    for k, fn in enumerate(CRITERIA, 1):
        t0 = time.perf_counter()
        try:
            ok, detail = fn()
        except Exception as e:  # report and continue
            ok, detail = False, f"{type(e).__name__}: {e}"
        failed += not ok
        print(f"criterion {k:2d}: {'PASS' if ok else 'FAIL'}  ({time.perf_counter() - t0:.1f}s)  {detail}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
