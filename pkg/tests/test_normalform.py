import random
from fractions import Fraction as F

import pytest

from helpers import random_current, random_nonresonant, random_principal, random_unit, regular_cartan
from wildred.errors import ClassificationError, ResonantObstruction
from wildred.liealg import lie_algebra
from wildred.normalform import (ConnectionGerm, fission, gauge_transform, is_uts, normalize,
                                resonance_report, resonant_normalize)
from wildred.orbitflat import random_word
from wildred.rootdata import weyl_group
from wildred.tcla import PrincipalPart, TruncatedCurrent, apply_unit, coadjoint_group

L = lie_algebra("A", 1)
A2 = lie_algebra("A", 2)
e, h, f = L.e(0), L.h(0), L.f(0)
z = L.zero()


def test_fission_examples():
    fd = fission(PrincipalPart(L, 2, [z, h]))
    assert fd.dims() == (1, 1) and fd.nu == 2
    top = A2.cartan((F(1), F(2)))       # <α1, top> = 0
    res = A2.cartan((F(1, 3), F(1, 5)))
    fd = fission(PrincipalPart(A2, 2, [res, top]))
    assert fd.dims() == (4, 2) and fd.nu == 1
    fd = fission(PrincipalPart(L, 1, [z]))
    assert fd.dims() == (3,) and fd.nu == 0


def test_nu_equals_s_for_regular_top():
    rng = random.Random(1)
    for alg in (L, A2):
        for s in (1, 2, 3):
            a = random_principal(alg, s, rng, regular_top=True)
            assert fission(a).nu == s


def test_resonance_examples():
    assert resonance_report(PrincipalPart(L, 1, [h / 3])).nonresonant
    r = resonance_report(PrincipalPart(L, 1, [h / 2]))
    assert not r.nonresonant and r.offenders == (((1,), 1),)
    assert resonance_report(PrincipalPart(L, 2, [h / 2, h])).nonresonant


def test_resonance_weyl_invariant():
    rng = random.Random(4)
    for _ in range(20):
        a = random_principal(A2, 2, rng)
        if rng.random() < 0.5:
            a = PrincipalPart(A2, 2, [A2.cartan((F(1), F(0))), a.coeffs[1]])
        w = rng.choice(weyl_group(A2.rd))
        b = PrincipalPart(A2, 2, [A2.cartan(w.apply(c.cartan_coords())) for c in a.coeffs])
        assert resonance_report(a).nonresonant == resonance_report(b).nonresonant


def test_unit_invariance():
    rng = random.Random(6)
    for _ in range(30):
        a = random_principal(A2, 3, rng)
        b = apply_unit(random_unit(3, rng), a)
        assert fission(a) == fission(b)


def test_normalize_fixed_point_and_example():
    a = PrincipalPart(L, 1, [h / 3])
    normal, x = normalize(ConnectionGerm(a, (), 3))
    assert normal == a and x.is_zero()
    normal, x = normalize(ConnectionGerm(a, (e,), 3))
    assert normal == a
    x1 = x.coeffs[1]
    assert not x1.is_zero() and all(c == 0 for k, c in enumerate(x1.coords) if k != L.index[(1,)])


def test_gauge_freeness():
    rng = random.Random(12)
    m = 4
    a = random_nonresonant(A2, 2, rng, regular_top=True)
    for _ in range(5):
        x = random_current(A2, m + 2, rng)
        x = TruncatedCurrent(A2, m + 2, [c if d <= m else A2.zero() for d, c in enumerate(x.coeffs)])
        normal, y = normalize(gauge_transform(ConnectionGerm(a, (), m), x))
        assert normal == a and y.coeffs[:m + 1] == x.coeffs[:m + 1]


def test_resonant_inputs():
    with pytest.raises(ResonantObstruction):
        normalize(ConnectionGerm(PrincipalPart(L, 1, [h / 2]), (e,), 3))
    normal, left, stab = resonant_normalize(ConnectionGerm(PrincipalPart(L, 1, [h / 3]), (e,), 3))
    assert left == [] and stab == 0
    assert normal == normalize(ConnectionGerm(PrincipalPart(L, 1, [h / 3]), (e,), 3))[0]
    normal, left, stab = resonant_normalize(ConnectionGerm(PrincipalPart(L, 1, [h / 2]), (f,), 3))
    assert len(left) == 1 and stab == 1
    k, x = left[0]
    assert sum(1 for c in x.coords if c) == 1 and x.cartan_coords() == (0,)
    normal, left, stab = resonant_normalize(ConnectionGerm(PrincipalPart(L, 1, [h / 2]), (e,), 3))
    assert left == []


def test_uts():
    assert is_uts(PrincipalPart(L, 2, [h, h * 2])) == (True, is_uts(PrincipalPart(L, 1, [h]))[1])
    assert not is_uts(PrincipalPart(L, 1, [e]))[0]
    ok, word = is_uts(PrincipalPart(L, 2, [e + f, (e + f) * 2]))
    assert ok and word is not None
    a = PrincipalPart(L, 2, [e + f, (e + f) * 2])
    assert coadjoint_group(word, None, a).is_cartan()


def test_non_semisimple_leading_term():
    with pytest.raises(ClassificationError):
        normalize(ConnectionGerm(PrincipalPart(L, 1, [e]), (), 2))


def test_marking_of_conjugated_regular():
    rng = random.Random(3)
    a = PrincipalPart(L, 2, [h / 3, regular_cartan(L, rng)])
    b = coadjoint_group(random_word(L, rng), None, a)
    ok, word = is_uts(b)
    assert ok and coadjoint_group(word, None, b).is_cartan()
