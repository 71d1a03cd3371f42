"""Root systems, Weyl groups and Levi subsystems at small rank.

Cartan-space vectors are tuples in the simple-coroot basis; covectors
(roots, weights) are tuples in the simple-root basis.  With the Cartan
matrix A[i][j] = <α_i^∨, α_j> the pairing is <λ, h> = Σ h_i λ_j A[i][j].
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

from .errors import UnsupportedConfiguration, ValidationError
from .linalg import Q, in_span, solve

Root = Tuple[int, ...]
CartanVec = Tuple[Fraction, ...]
Covector = Tuple[Fraction, ...]

WEYL_ORDER_CAP = 1152


def _cartan_matrix(cartan_type: str, rank: int) -> List[List[int]]:
    if cartan_type == "A":
        if not 1 <= rank <= 4:
            raise UnsupportedConfiguration(f"type A_{rank} not supported (rank 1..4)")
        return [[2 if i == j else (-1 if abs(i - j) == 1 else 0) for j in range(rank)]
                for i in range(rank)]
    if cartan_type == "B":
        if rank != 2:
            raise UnsupportedConfiguration("type B is supported only at rank 2")
        # α1 long, α2 short
        return [[2, -1], [-2, 2]]
    raise UnsupportedConfiguration(f"unsupported Cartan type {cartan_type!r}")


def _positive_roots(cm: List[List[int]]) -> List[Root]:
    r = len(cm)
    simple = [tuple(1 if i == j else 0 for i in range(r)) for j in range(r)]
    roots = set(simple)
    frontier = list(simple)
    while frontier:
        new = []
        for beta in frontier:
            for i in range(r):
                # α_i-string through β: β - pα_i, ..., β + qα_i with p - q = <α_i^∨, β>
                p = 0
                while True:
                    cand = tuple(b - (p + 1) * (1 if k == i else 0) for k, b in enumerate(beta))
                    if cand in roots:
                        p += 1
                    else:
                        break
                pairing = sum(cm[i][j] * beta[j] for j in range(r))
                q = p - pairing
                if q > 0:
                    up = tuple(b + (1 if k == i else 0) for k, b in enumerate(beta))
                    if up not in roots:
                        roots.add(up)
                        new.append(up)
        frontier = new
    return sorted(roots, key=lambda a: (sum(a), tuple(-x for x in a)))


@dataclass(frozen=True)
class WeylElement:
    word: Tuple[int, ...]
    action: Tuple[Tuple[Fraction, ...], ...]  # on Cartan vectors (coroot coords)

    def apply(self, v: Sequence) -> CartanVec:
        return tuple(sum((a * Q(x) for a, x in zip(row, v)), Fraction(0)) for row in self.action)


@dataclass(frozen=True)
class LeviSubsystem:
    roots: FrozenSet[Root]
    generating_subset: Tuple[int, ...]

    def __contains__(self, alpha) -> bool:
        return tuple(alpha) in self.roots

    def __len__(self) -> int:
        return len(self.roots)


@dataclass(frozen=True)
class RootDatum:
    cartan_type: str
    rank: int
    cartan_matrix: Tuple[Tuple[int, ...], ...]
    simple_roots: Tuple[Root, ...]
    positive_roots: Tuple[Root, ...]
    coroots: Dict[Root, CartanVec] = field(hash=False, compare=False)
    weyl_vector: Covector = ()
    symmetrizer: Tuple[int, ...] = ()

    @property
    def label(self) -> str:
        return f"{self.cartan_type}{self.rank}"

    @property
    def roots(self) -> Tuple[Root, ...]:
        return self.positive_roots + tuple(neg(a) for a in self.positive_roots)

    def pair(self, alpha: Sequence, h: Sequence) -> Fraction:
        """<α, h> for a covector α and a Cartan vector h."""
        cm = self.cartan_matrix
        total = Fraction(0)
        for i, hi in enumerate(h):
            if hi:
                total += Q(hi) * sum(cm[i][j] * Q(a) for j, a in enumerate(alpha))
        return total

    def coroot(self, alpha: Root) -> CartanVec:
        if alpha in self.coroots:
            return self.coroots[alpha]
        return tuple(-x for x in self.coroots[neg(alpha)])

    def height(self, alpha: Root) -> int:
        return sum(alpha)

    def is_root(self, alpha) -> bool:
        a = tuple(alpha)
        return a in self.coroots or neg(a) in self.coroots

    def simple_reflection_matrix(self, i: int) -> List[List[Fraction]]:
        # s_i(h) = h - <α_i, h> α_i^∨ ; only coordinate i changes
        r = self.rank
        m = [[Fraction(int(a == b)) for b in range(r)] for a in range(r)]
        for b in range(r):
            m[i][b] -= self.cartan_matrix[b][i]
        return m

    def reflect_covector(self, i: int, lam: Sequence) -> Covector:
        # s_i(λ) = λ - <λ, α_i^∨> α_i
        c = sum(self.cartan_matrix[i][j] * Q(x) for j, x in enumerate(lam))
        return tuple(Q(x) - (c if k == i else 0) for k, x in enumerate(lam))

    def apply_weyl_covector(self, w: WeylElement, lam: Sequence) -> Covector:
        for i in reversed(w.word):
            lam = self.reflect_covector(i, lam)
        return tuple(lam)


def neg(alpha: Sequence[int]) -> Root:
    return tuple(-x for x in alpha)


@lru_cache(maxsize=None)
def build_root_datum(cartan_type: str, rank: int) -> RootDatum:
    if rank < 1:
        raise UnsupportedConfiguration("rank must be positive")
    cm = _cartan_matrix(cartan_type, rank)
    r = rank
    # d_i with d_i a_ij = d_j a_ji, smallest positive integers
    d = [Fraction(1)] * r
    changed = True
    while changed:
        changed = False
        for i in range(r):
            for j in range(r):
                if cm[i][j] and cm[j][i]:
                    want = d[i] * cm[i][j] / cm[j][i]
                    if d[j] != want:
                        d[j] = want
                        changed = True
    scale = max(x.denominator for x in d)
    d = [int(x * scale) for x in d]
    pos = _positive_roots(cm)

    def norm2(a):
        return sum(a[i] * a[j] * d[i] * cm[i][j] for i in range(r) for j in range(r))

    coroots = {}
    for a in pos:
        n = norm2(a)
        coroots[a] = tuple(Fraction(a[i] * 2 * d[i], n) for i in range(r))
    rho2 = [sum(a[k] for a in pos) for k in range(r)]
    rho = tuple(Fraction(x, 2) for x in rho2)
    simple = tuple(tuple(int(i == j) for i in range(r)) for j in range(r))
    rd = RootDatum(cartan_type, rank, tuple(tuple(row) for row in cm), simple,
                   tuple(pos), coroots, rho, tuple(d))
    return rd


@lru_cache(maxsize=None)
def weyl_group(rd: RootDatum) -> Tuple[WeylElement, ...]:
    """All Weyl elements, by breadth-first closure over simple reflections."""
    r = rd.rank
    ident = tuple(tuple(Fraction(int(a == b)) for b in range(r)) for a in range(r))
    gens = [rd.simple_reflection_matrix(i) for i in range(r)]
    seen = {ident: ()}
    order = [ident]
    frontier = [ident]
    while frontier:
        nxt = []
        for m in frontier:
            for i, s in enumerate(gens):
                # word w·s_i acts as M·S
                prod = tuple(tuple(sum((m[a][k] * s[k][b] for k in range(r)), Fraction(0))
                                   for b in range(r)) for a in range(r))
                if prod not in seen:
                    seen[prod] = seen[m] + (i,)
                    order.append(prod)
                    nxt.append(prod)
                    if len(seen) > WEYL_ORDER_CAP:
                        raise UnsupportedConfiguration("Weyl group too large")
        frontier = nxt
    return tuple(WeylElement(seen[m], m) for m in order)


def weyl_element(rd: RootDatum, word: Iterable[int]) -> WeylElement:
    r = rd.rank
    m = [[Fraction(int(a == b)) for b in range(r)] for a in range(r)]
    word = tuple(word)
    for i in word:
        s = rd.simple_reflection_matrix(i)
        m = [[sum((m[a][k] * s[k][b] for k in range(r)), Fraction(0)) for b in range(r)]
             for a in range(r)]
    return WeylElement(word, tuple(tuple(row) for row in m))


def levi_of_annihilated_roots(rd: RootDatum, elements: Sequence[Sequence]) -> LeviSubsystem:
    roots = frozenset(a for a in rd.roots
                      if all(rd.pair(a, h) == 0 for h in elements))
    gens = tuple(i for i, a in enumerate(rd.simple_roots) if a in roots)
    return LeviSubsystem(roots, gens)


def weyl_orbit(rd: RootDatum, v: Sequence) -> set:
    start = tuple(Q(x) for x in v)
    orbit = {start}
    frontier = [start]
    gens = [rd.simple_reflection_matrix(i) for i in range(rd.rank)]
    while frontier:
        nxt = []
        for x in frontier:
            for s in gens:
                y = tuple(sum((row[k] * x[k] for k in range(rd.rank)), Fraction(0)) for row in s)
                if y not in orbit:
                    orbit.add(y)
                    nxt.append(y)
        frontier = nxt
    return orbit


def fundamental_weight(rd: RootDatum, i: int) -> Covector:
    """ω_i in the simple-root basis: <ω_i, α_k^∨> = δ_ik."""
    cm = [[Fraction(x) for x in row] for row in rd.cartan_matrix]
    rhs = [Fraction(int(k == i)) for k in range(rd.rank)]
    return tuple(solve(cm, rhs))


def parabolic_characters(rd: RootDatum, omitted: Iterable[int]) -> List[Covector]:
    omitted = sorted(set(omitted))
    if not omitted:
        raise ValidationError("omitted set must be nonempty (proper parabolic)")
    if any(not 0 <= i < rd.rank for i in omitted):
        raise ValidationError("omitted index out of range")
    return [fundamental_weight(rd, i) for i in omitted]


def coroot_span_contains(rd: RootDatum, kept: Iterable[int], v: Sequence) -> bool:
    """Is v in span{α_j^∨ : j ∈ kept}?  (Simple coroots are unit vectors.)"""
    kept = list(kept)
    vectors = [[Fraction(int(k == j)) for k in range(rd.rank)] for j in kept]
    return in_span(vectors, [Q(x) for x in v])
