"""Exact dense linear algebra over the rationals (and first-order jets).

Matrices are lists of row lists.  Entries are Fractions, ints, or ``Dual``
numbers; every routine only uses field operations, so it works for all
three.  Zero tests go through ``bool`` which, for a ``Dual``, looks at the
real part only.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence

from .errors import DegenerateForm

Matrix = List[list]
Vector = list

ZERO = Fraction(0)
ONE = Fraction(1)


def Q(x) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic")
    return Fraction(x)


class Dual:
    """a + b·t with t² = 0, for exact directional derivatives."""

    __slots__ = ("re", "eps")

    def __init__(self, re=0, eps=0):
        self.re = re
        self.eps = eps

    @staticmethod
    def _lift(x):
        return x if isinstance(x, Dual) else Dual(x, 0)

    def __add__(self, o):
        o = Dual._lift(o)
        return Dual(self.re + o.re, self.eps + o.eps)

    __radd__ = __add__

    def __neg__(self):
        return Dual(-self.re, -self.eps)

    def __sub__(self, o):
        o = Dual._lift(o)
        return Dual(self.re - o.re, self.eps - o.eps)

    def __rsub__(self, o):
        return Dual._lift(o) - self

    def __mul__(self, o):
        if not isinstance(o, Dual):
            return Dual(self.re * o, self.eps * o)
        return Dual(self.re * o.re, self.re * o.eps + self.eps * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = Dual._lift(o)
        if not o.re:
            raise ZeroDivisionError("dual division by a nilpotent")
        inv = 1 / Fraction(o.re) if not isinstance(o.re, Fraction) else 1 / o.re
        return Dual(self.re * inv, (self.eps * o.re - self.re * o.eps) * inv * inv)

    def __rtruediv__(self, o):
        return Dual._lift(o) / self

    def __bool__(self):
        return bool(self.re)

    def __eq__(self, o):
        o = Dual._lift(o)
        return self.re == o.re and self.eps == o.eps

    def __hash__(self):
        return hash((self.re, self.eps))

    def __repr__(self):
        return f"Dual({self.re}, {self.eps})"


def real_part(x):
    return x.re if isinstance(x, Dual) else x


def eps_part(x):
    return x.eps if isinstance(x, Dual) else ZERO


# ---------------------------------------------------------------- basics

def zeros(n: int, m: Optional[int] = None) -> Matrix:
    return [[ZERO] * (n if m is None else m) for _ in range(n)]


def identity(n: int) -> Matrix:
    out = zeros(n)
    for i in range(n):
        out[i][i] = ONE
    return out


def copy(a: Matrix) -> Matrix:
    return [list(r) for r in a]


def transpose(a: Matrix) -> Matrix:
    return [list(c) for c in zip(*a)] if a else []


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = transpose(b)
    out = []
    for row in a:
        nz = [(k, x) for k, x in enumerate(row) if x]
        out.append([sum((x * col[k] for k, x in nz), ZERO) for col in bt])
    return out


def mat_vec(a: Matrix, v: Sequence) -> Vector:
    out = []
    for row in a:
        acc = ZERO
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return [[x + y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_sub(a: Matrix, b: Matrix) -> Matrix:
    return [[x - y for x, y in zip(r, s)] for r, s in zip(a, b)]


def mat_scale(c, a: Matrix) -> Matrix:
    return [[c * x for x in r] for r in a]


def is_zero_matrix(a: Matrix) -> bool:
    return all(not x for r in a for x in r)


def trace(a: Matrix):
    return sum((a[i][i] for i in range(len(a))), ZERO)


def dot(u: Sequence, v: Sequence):
    acc = ZERO
    for x, y in zip(u, v):
        if x and y:
            acc = acc + x * y
    return acc


def mat_pow_series_exp(n: Matrix, max_terms: int = 64) -> Matrix:
    """exp of a nilpotent matrix as the finite sum Σ N^k/k!."""
    size = len(n)
    out = identity(size)
    term = identity(size)
    for k in range(1, max_terms):
        term = mat_scale(Fraction(1, k), mat_mul(term, n))
        if is_zero_matrix(term):
            return out
        out = mat_add(out, term)
    raise DegenerateForm("matrix exponential did not terminate: argument not nilpotent")


def nilpotent_log(m: Matrix, max_terms: int = 64) -> Matrix:
    """log of a unipotent matrix, Σ (-1)^{k+1} (M-I)^k / k."""
    size = len(m)
    n = mat_sub(m, identity(size))
    out = zeros(size)
    term = identity(size)
    for k in range(1, max_terms):
        term = mat_mul(term, n)
        if is_zero_matrix(term):
            return out
        c = Fraction(1 if k % 2 else -1, k)
        out = mat_add(out, mat_scale(c, term))
    raise DegenerateForm("logarithm did not terminate: argument not unipotent")


# ---------------------------------------------------------------- elimination

def rref(a: Matrix):
    """Reduced row echelon form; returns (R, pivot columns)."""
    r = copy(a)
    rows = len(r)
    cols = len(r[0]) if rows else 0
    pivots = []
    i = 0
    for j in range(cols):
        if i >= rows:
            break
        p = next((k for k in range(i, rows) if r[k][j]), None)
        if p is None:
            continue
        r[i], r[p] = r[p], r[i]
        inv = 1 / r[i][j] if not isinstance(r[i][j], int) else Fraction(1, r[i][j])
        r[i] = [x * inv for x in r[i]]
        piv = r[i]
        for k in range(rows):
            if k != i and r[k][j]:
                c = r[k][j]
                r[k] = [x - c * y for x, y in zip(r[k], piv)]
        pivots.append(j)
        i += 1
    return r, pivots


def _integer_rows(a: Matrix) -> List[List[int]]:
    out = []
    for row in a:
        den = 1
        for x in row:
            den = lcm(den, Fraction(x).denominator)
        out.append([int(Fraction(x) * den) for x in row])
    return out


def rank(a: Matrix) -> int:
    """Rank by fraction-free (Bareiss-style) elimination on integer rows."""
    if not a or not a[0]:
        return 0
    if any(isinstance(x, Dual) for r in a for x in r):
        return len(rref(a)[1])
    m = [r for r in _integer_rows(a) if any(r)]
    rk = 0
    cols = len(a[0])
    for j in range(cols):
        p = next((k for k in range(rk, len(m)) if m[k][j]), None)
        if p is None:
            continue
        m[rk], m[p] = m[p], m[rk]
        piv = m[rk]
        pv = piv[j]
        for k in range(rk + 1, len(m)):
            c = m[k][j]
            if c:
                row = [pv * x - c * y for x, y in zip(m[k], piv)]
                g = 0
                for x in row:
                    g = gcd(g, x)
                m[k] = [x // g for x in row] if g > 1 else row
        rk += 1
        if rk == len(m):
            break
    return rk


def nullspace(a: Matrix, ncols: Optional[int] = None) -> List[Vector]:
    """Basis of {x : a x = 0}."""
    cols = len(a[0]) if a else (ncols or 0)
    if not a:
        return [[ONE if i == j else ZERO for i in range(cols)] for j in range(cols)]
    r, piv = rref(a)
    free = [j for j in range(cols) if j not in piv]
    basis = []
    for f in free:
        v = [ZERO] * cols
        v[f] = ONE
        for i, p in enumerate(piv):
            v[p] = -r[i][f]
        basis.append(v)
    return basis


def solve(a: Matrix, b: Sequence) -> Optional[Vector]:
    """One solution of a x = b (free variables zero), or None."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    aug = [list(a[i]) + [b[i]] for i in range(rows)]
    r, piv = rref(aug)
    if cols in piv:
        return None
    x = [ZERO] * cols
    for i, p in enumerate(piv):
        x[p] = r[i][cols]
    return x


def solve_matrix(a: Matrix, b: Matrix) -> Optional[Matrix]:
    """Solve a X = b column by column in one elimination."""
    rows = len(a)
    cols = len(a[0]) if rows else 0
    k = len(b[0]) if b else 0
    aug = [list(a[i]) + list(b[i]) for i in range(rows)]
    r, piv = rref(aug)
    if any(p >= cols for p in piv):
        return None
    x = zeros(cols, k)
    for i, p in enumerate(piv):
        x[p] = r[i][cols:]
    return x


def inverse(a: Matrix) -> Matrix:
    n = len(a)
    aug = [list(a[i]) + [ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    r, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise DegenerateForm("matrix is singular")
    return [row[n:] for row in r[:n]]


def det(a: Matrix):
    n = len(a)
    if n == 0:
        return ONE
    m = copy(a)
    d = ONE
    for j in range(n):
        p = next((k for k in range(j, n) if m[k][j]), None)
        if p is None:
            return ZERO
        if p != j:
            m[j], m[p] = m[p], m[j]
            d = -d
        pv = m[j][j]
        d = d * pv
        for k in range(j + 1, n):
            if m[k][j]:
                c = m[k][j] / pv
                m[k] = [x - c * y for x, y in zip(m[k], m[j])]
    return d


def in_span(vectors: Sequence[Vector], v: Vector) -> bool:
    if not vectors:
        return not any(v)
    return solve(transpose([list(x) for x in vectors]), v) is not None


# ---------------------------------------------------------------- polynomials
# Coefficient lists, lowest degree first.

def poly_trim(p):
    p = list(p)
    while p and not p[-1]:
        p.pop()
    return p


def poly_derivative(p):
    return poly_trim([k * p[k] for k in range(1, len(p))])


def poly_divmod(a, b):
    a = poly_trim(a)
    b = poly_trim(b)
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    q = [ZERO] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    lead = Fraction(b[-1])
    while len(r) >= len(b) and r:
        c = r[-1] / lead
        k = len(r) - len(b)
        q[k] = c
        for i, x in enumerate(b):
            r[k + i] -= c * x
        r = poly_trim(r)
    return poly_trim(q), r


def poly_gcd(a, b):
    a = poly_trim(a)
    b = poly_trim(b)
    while b:
        a, b = b, poly_divmod(a, b)[1]
    if not a:
        return a
    lead = Fraction(a[-1])
    return [x / lead for x in a]


def minimal_polynomial(a: Matrix):
    """Monic minimal polynomial via the Krylov dependence of I, A, A², …"""
    n = len(a)
    powers = [identity(n)]
    flat = [[x for r in powers[0] for x in r]]
    while True:
        nxt = mat_mul(powers[-1], a)
        v = [x for r in nxt for x in r]
        coeffs = solve(transpose(flat), v)
        if coeffs is not None:
            return [-c for c in coeffs] + [ONE]
        powers.append(nxt)
        flat.append(v)


def is_squarefree(p) -> bool:
    return len(poly_gcd(p, poly_derivative(p))) <= 1
