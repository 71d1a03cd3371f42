import random
from fractions import Fraction as F

import pytest

from helpers import random_current, random_nonresonant
from wildred.errors import DegenerateForm, UnsupportedConfiguration
from wildred.liealg import lie_algebra
from wildred.normalform import fission
from wildred.orbitflat import orbit_point, random_word
from wildred.tcla import PrincipalPart, TruncatedCurrent, UnitSeries, residue_pairing
from wildred.verma import (build_filtration, character_transport, comoment_check, comoment_value,
                           dilation_covariance_check, image_correction, image_identity_check,
                           inverse_shapovalov, shapovalov_gram, simplicity_test, slice_for)

L = lie_algebra("A", 1)
A2 = lie_algebra("A", 2)
e, h, f = L.e(0), L.h(0), L.f(0)
z = L.zero()


def char(lam):
    """A1, s=1 character with <A', α^∨> = lam under the trace form."""
    return PrincipalPart(L, 1, [h * (F(lam) / 2)])


def test_filtration_a1_borel():
    for s in (1, 2, 3):
        a = PrincipalPart(L, s, [h / 3] + [h] * (s - 1))
        filt = build_filtration(fission(a), L)
        assert filt.balanced_flag
        for pp, pm in filt.parabolics:
            assert pp.dim == 2 and pm.dim == 2


def test_filtration_a2_levi_then_borel():
    top = A2.cartan((F(1), F(2)))
    a = PrincipalPart(A2, 2, [A2.cartan((F(1, 3), F(1, 5))), top])
    filt = build_filtration(fission(a), A2)
    assert [pp.dim for pp, _ in filt.parabolics] == [6, 5]
    assert isinstance(filt.balanced_flag, bool)


def test_gram_examples():
    sl = slice_for(char(F(1, 3)), 1)
    assert sl.gram[(0,)] == [[1]]
    assert sl.gram[(-1,)] == [[F(1, 3)]]
    sl = slice_for(char(3), 4)
    dets = {sl.grade_of(w): d for w, d in sl.determinants().items()}
    assert dets[4] == 0 and all(dets[k] for k in (0, 1, 2, 3))


def test_orthogonality_and_symmetry_asserted():
    rng = random.Random(3)
    for s in (1, 2):
        a = random_nonresonant(A2, s, rng, regular_top=True)
        sl = slice_for(a, 3)
        for g in sl.gram.values():
            assert all(g[i][j] == g[j][i] for i in range(len(g)) for j in range(len(g)))


def test_simplicity_examples():
    v = simplicity_test(slice_for(char(F(1, 3)), 4))
    assert v.simple_up_to_n and v.criterion_nonzero_integer_pass and v.criterion_positive_integer_pass
    assert [x for _, x in v.criterion_values] == [F(4, 3)]
    v = simplicity_test(slice_for(char(3), 4))
    assert not v.simple_up_to_n and v.first_degenerate_grade == 4
    assert [x for _, x in v.flagged] == [4]
    rng = random.Random(1)
    for _ in range(3):
        a = PrincipalPart(L, 2, [h * F(rng.randint(-9, 9), rng.randint(1, 5)), h * F(rng.randint(1, 4))])
        assert simplicity_test(slice_for(a, 3)).simple_up_to_n


def test_inverse_shapovalov():
    lam, c = F(1, 3), F(2)
    sl = slice_for(char(lam), 2)
    inv = inverse_shapovalov(sl, c)
    assert inv.terms[(0,)] == (((), (), 1),)
    ((y, x, coeff),) = inv.terms[(-1,)]
    assert coeff == 1 / (c * lam) and len(y) == 1 and len(x) == 1
    with pytest.raises(DegenerateForm):
        inverse_shapovalov(slice_for(char(3), 4), 1)


def test_dilation_covariance():
    rng = random.Random(2)
    for s in (1, 2):
        sl = slice_for(random_nonresonant(L, s, rng, regular_top=True), 1)
        assert dilation_covariance_check(sl, 1)
        assert dilation_covariance_check(sl, F(3, 2), 3)


def _samples(a, rng, n):
    return [orbit_point(0, a, random_word(a.alg, rng), random_current(a.alg, a.s, rng) if a.s > 1 else None)
            for _ in range(n)]


def test_comoment_examples():
    rng = random.Random(4)
    a = char(F(2, 3))
    sl = slice_for(a, 1)
    samples = _samples(a, rng, 5)
    ex, fx = TruncatedCurrent(L, 1, [e]), TruncatedCurrent(L, 1, [f])
    assert all(comoment_value(sl, ex, ex, p) == 0 for p in samples)
    for p in samples:
        assert comoment_value(sl, ex, fx, p) == residue_pairing(p.value, TruncatedCurrent(L, 1, [h]))
    assert comoment_check(sl, ex, fx, samples)


def test_comoment_a2():
    rng = random.Random(5)
    a = random_nonresonant(A2, 2, rng, regular_top=True)
    sl = slice_for(a, 1)
    samples = _samples(a, rng, 3)
    basis = [TruncatedCurrent.monomial(A2.basis(k), d, 2) for d in range(2) for k in range(A2.dim)]
    for x in basis[::3]:
        for y in basis[1::4]:
            assert comoment_check(sl, x, y, samples)


def test_image_identity():
    assert all(image_identity_check(slice_for(char(F(1, 3)), 1), c) for c in (1, 2, 3))
    a = PrincipalPart(L, 2, [h / 5, h * 2])
    assert image_identity_check(slice_for(a, 1), 2)
    sl = slice_for(a, 1)
    c1 = image_correction(sl, 1)
    for c in (2, 3):
        cc = image_correction(sl, c)
        assert cc == {k: v / c for k, v in c1.items()}


def test_character_transport():
    a = PrincipalPart(L, 2, [h / 5, h * 2])
    sl = slice_for(a, 3)
    same, rep = character_transport(sl, UnitSeries.identity(2))
    assert same.character == a and rep.consistent
    new, rep = character_transport(sl, UnitSeries(2, (2,)))
    assert new.character.coeffs[1] == h and rep.consistent
    assert simplicity_test(new).simple_up_to_n == simplicity_test(sl).simple_up_to_n
    u, v = UnitSeries(2, (2, 1)), UnitSeries(2, (3, -1))
    step, _ = character_transport(character_transport(sl, u)[0], v)
    direct, _ = character_transport(sl, u.compose(v))
    assert step.character == direct.character and step.determinants() == direct.determinants()


def test_unbalanced_rejected():
    a = PrincipalPart(L, 3, [h, h, h])
    assert build_filtration(fission(a), L).balanced_flag
    b = PrincipalPart(A2, 3, [A2.cartan((0, -1)), A2.cartan((0, 1)), A2.zero()])
    filt = build_filtration(fission(b), A2)
    assert not filt.balanced_flag
    with pytest.raises(UnsupportedConfiguration):
        shapovalov_gram(filt, b, 2)
