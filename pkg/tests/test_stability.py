import random

import pytest

from helpers import F, random_cartan, rq, tame_config
from wildred.errors import UnsupportedConfiguration
from wildred.liealg import lie_algebra
from wildred.rootdata import coroot_span_contains, weyl_group
from wildred.stability import avoidance_check, stability_check

L = lie_algebra("A", 1)
A2 = lie_algebra("A", 2)


def both(cfg):
    a, b = stability_check(cfg), avoidance_check(cfg)
    assert a.stable_certified == b.stable_certified
    return a, b


def test_examples():
    assert both(tame_config(L, [(F(1, 2),), (F(1, 3),), (F(1, 5),)]))[0].stable_certified
    a, b = both(tame_config(L, [(F(1),), (F(1),), (F(-2),)]))
    assert not a.stable_certified and a.witness_failure[2] == (0,)
    assert not both(tame_config(L, [(F(0),)]))[0].stable_certified
    cfg = tame_config(A2, [(F(1, 3), F(1, 7)), (F(2, 5), F(-1, 11)), (F(3, 13), F(5, 17))])
    assert both(cfg)[0].stable_certified


def test_coroot_line_fails():
    rd = A2.rd
    for j in range(2):
        v = tuple(F(2, 7) * x for x in rd.coroot(rd.simple_roots[j]))
        a, b = both(tame_config(A2, [v]))
        assert not a.stable_certified
        kept, _, total = b.witness_failure
        assert coroot_span_contains(rd, kept, total)


def test_witnesses_are_genuine():
    rng = random.Random(1)
    for k in range(20):
        alg = (L, A2)[k % 2]
        lam = random_cartan(alg, rng).cartan_coords()
        res = [lam, tuple(-x for x in lam)]
        a, b = both(tame_config(alg, res))
        assert not a.stable_certified
        for v in (a, b):
            kept, _, total = v.witness_failure
            assert coroot_span_contains(alg.rd, kept, total)


def test_weyl_and_scaling_invariance():
    rng = random.Random(2)
    for k in range(20):
        alg = (L, A2)[k % 2]
        res = [random_cartan(alg, rng).cartan_coords() for _ in range(rng.randint(1, 3))]
        base = stability_check(tame_config(alg, res)).stable_certified
        w = rng.choice(weyl_group(alg.rd))
        moved = [tuple(w.apply(r)) if i == 0 else r for i, r in enumerate(res)]
        assert stability_check(tame_config(alg, moved)).stable_certified == base
        c = rq(rng) or F(3)
        assert stability_check(tame_config(alg, [tuple(c * x for x in r) for r in res])).stable_certified == base


def test_enumeration_count_and_cap():
    v = stability_check(tame_config(L, [(F(1, 2),), (F(1, 3),), (F(1, 5),)]))
    assert v.enumeration_size == 2 ** 3 and v.subsets == 1
    with pytest.raises(UnsupportedConfiguration):
        stability_check(tame_config(A2, [(F(1, k), F(1, k + 1)) for k in range(2, 10)]))
    with pytest.raises(UnsupportedConfiguration):
        avoidance_check(tame_config(A2, [(F(1, k), F(1, k + 1)) for k in range(2, 10)]))
