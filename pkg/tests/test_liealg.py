import random
from fractions import Fraction as F
from itertools import product

import pytest

from wildred.liealg import (IDENTITY_WORD, GroupWord, act, adjoint_of_word, bracket, centralizer,
                            invariant_form, lie_algebra, project_to_subalgebra, word_matrix)
from wildred.orbitflat import random_word

ALGS = [("A", 1), ("A", 2), ("A", 3), ("B", 2)]


def test_sl2_relations():
    L = lie_algebra("A", 1)
    e, h, f = L.e(0), L.h(0), L.f(0)
    assert bracket(e, f) == h
    assert bracket(h, e) == e * 2
    assert bracket(h, f) == f * -2


def test_a2_sign():
    L = lie_algebra("A", 2)
    x = bracket(L.e(0), L.e(1))
    assert x in (L.root_vector((1, 1)), -L.root_vector((1, 1)))


def test_trace_form():
    L = lie_algebra("A", 1)
    e, h, f = L.e(0), L.h(0), L.f(0)
    assert invariant_form(h, h) == 2
    assert invariant_form(e, f) == 1
    assert invariant_form(e, e) == 0


@pytest.mark.parametrize("t,r", ALGS)
def test_jacobi_on_basis(t, r):
    L = lie_algebra(t, r)
    b = [L.basis(k) for k in range(L.dim)]
    for x, y, z in product(b, repeat=3):
        s = bracket(x, bracket(y, z)) + bracket(y, bracket(z, x)) + bracket(z, bracket(x, y))
        assert s.is_zero()


@pytest.mark.parametrize("t,r", ALGS)
def test_adjoint_of_word_is_automorphism_and_isometry(t, r):
    L = lie_algebra(t, r)
    rng = random.Random(11)
    b = [L.basis(k) for k in range(L.dim)]
    for _ in range(10 if L.dim > 10 else 25):
        m = adjoint_of_word(L, random_word(L, rng))
        x, y = rng.choice(b), rng.choice(b)
        assert act(m, bracket(x, y)) == bracket(act(m, x), act(m, y))
        assert invariant_form(act(m, x), act(m, y)) == invariant_form(x, y)


def test_centralizers():
    L = lie_algebra("A", 1)
    assert centralizer([L.h(0)]).dim == 1
    assert centralizer([L.zero()]).dim == 3
    L2 = lie_algebra("A", 2)
    assert centralizer([L2.cartan((F(1, 3), F(2, 3)))]).dim == 4


def test_word_exponentials():
    L = lie_algebra("A", 1)
    e, h, f = L.e(0), L.h(0), L.f(0)
    assert word_matrix(L, IDENTITY_WORD) == [[1, 0], [0, 1]]
    w = GroupWord((((1,), 1),))
    assert act(adjoint_of_word(L, w), f) == f + h - e
    assert word_matrix(L, w * w.inverse()) == [[1, 0], [0, 1]]


def test_projection():
    L = lie_algebra("A", 1)
    e, h = L.e(0), L.h(0)
    cart = centralizer([h])
    assert project_to_subalgebra(h, cart) == h
    assert project_to_subalgebra(e, cart).is_zero()
    assert project_to_subalgebra(h + e, cart) == h
