"""Exact integer linear algebra in Lorentzian signature (n, 1).

Vectors are tuples of Python ints, matrices are tuples of row tuples.
Everything is arbitrary precision and immutable; all functions here are
pure, so concurrent use is safe.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Vec = tuple[int, ...]
Mat = tuple[tuple[int, ...], ...]


class DimensionMismatch(ValueError):
    pass


def vec(coords: Iterable[int]) -> Vec:
    return tuple(int(c) for c in coords)


def mat(rows: Iterable[Iterable[int]]) -> Mat:
    m = tuple(tuple(int(e) for e in row) for row in rows)
    if m and any(len(row) != len(m[0]) for row in m):
        raise DimensionMismatch("ragged matrix")
    return m


def lorentz_inner(x: Sequence[int], y: Sequence[int]) -> int:
    """Signature (n,1) product x_1 y_1 + ... + x_n y_n - x_{n+1} y_{n+1}."""
    if len(x) != len(y):
        raise DimensionMismatch(f"lengths {len(x)} != {len(y)}")
    s = sum(a * b for a, b in zip(x, y))
    return s - 2 * x[-1] * y[-1]


def classify(v: Sequence[int]) -> str:
    q = lorentz_inner(v, v)
    if q < 0:
        return "timelike"
    if q == 0:
        return "lightlike"
    return "spacelike"


def identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def form_matrix(n: int) -> Mat:
    """diag(1, ..., 1, -1) of size n."""
    return tuple(
        tuple((-1 if i == n - 1 else 1) if i == j else 0 for j in range(n))
        for i in range(n)
    )


def transpose(m: Mat) -> Mat:
    return tuple(zip(*m))


def mat_vec(m: Mat, v: Sequence[int]) -> Vec:
    if len(m[0]) != len(v):
        raise DimensionMismatch("matrix/vector size")
    return tuple(sum(r[i] * v[i] for i in range(len(v))) for r in m)


def mat_mul(a: Mat, b: Mat) -> Mat:
    if len(a[0]) != len(b):
        raise DimensionMismatch("matrix sizes")
    bt = tuple(zip(*b))
    return tuple(
        tuple(sum(x * y for x, y in zip(row, col)) for col in bt) for row in a
    )


def mat_pow(m: Mat, k: int) -> Mat:
    if k < 0:
        return mat_pow(lorentz_inverse(m), -k)
    out = identity(len(m))
    base = m
    while k:
        if k & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        k >>= 1
    return out


def mat_neg_rows(m: Mat, rows: set[int]) -> Mat:
    return tuple(
        tuple(-e for e in row) if i in rows else row for i, row in enumerate(m)
    )


def is_form_preserving(m: Mat) -> bool:
    n = len(m)
    j = form_matrix(n)
    return mat_mul(mat_mul(transpose(m), j), m) == j


def is_positive_lorentzian(m: Mat) -> bool:
    """Form preserving and keeps the sign of the time coordinate."""
    if len(m) != len(m[0]):
        return False
    return is_form_preserving(m) and m[-1][-1] > 0


def lorentz_inverse(m: Mat) -> Mat:
    """Inverse of a form-preserving matrix: J M^T J."""
    n = len(m)
    j = form_matrix(n)
    inv = mat_mul(mat_mul(j, transpose(m)), j)
    if mat_mul(m, inv) != identity(n):
        raise ValueError("matrix is not form-preserving")
    return inv


def reflection_in(u: Sequence[int], norm: int | None = None) -> Mat:
    """Matrix of the reflection x -> x - 2 <u,x>/<u,u> u.

    Integral whenever <u,u> divides 2*u_i*u_j entrywise; the unit (norm 1)
    and norm 2 normals used throughout satisfy that.
    """
    q = lorentz_inner(u, u)
    if norm is not None and q != norm:
        raise ValueError(f"normal has <u,u> = {q}, expected {norm}")
    if q <= 0:
        raise ValueError("reflection normal must be spacelike")
    n = len(u)
    sign = [1] * (n - 1) + [-1]
    rows = []
    for i in range(n):
        row = []
        for jj in range(n):
            num = 2 * u[i] * u[jj] * sign[jj]
            if num % q:
                raise ValueError("non-integral reflection")
            row.append((1 if i == jj else 0) - num // q)
        rows.append(tuple(row))
    return tuple(rows)


def content(v: Sequence[int]) -> int:
    g = 0
    for c in v:
        g = gcd(g, c)
    return g


def primitive(v: Sequence[int]) -> Vec:
    """Divide out the content; orient so the last nonzero coordinate set is
    canonical (positive time coordinate when nonzero, else first nonzero
    entry positive)."""
    g = content(v)
    if g == 0:
        return tuple(v)
    w = tuple(c // g for c in v)
    if w[-1] != 0:
        return w if w[-1] > 0 else tuple(-c for c in w)
    for c in w:
        if c:
            return w if c > 0 else tuple(-c for c in w)
    return w


def det(m: Mat) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for jj in range(k + 1, n):
                a[i][jj] = (a[i][jj] * a[k][k] - a[i][k] * a[k][jj]) // prev
            a[i][k] = 0
        prev = a[k][k]
    return sign * a[-1][-1]


def rank(rows: Iterable[Sequence[int]]) -> int:
    """Rank over the rationals of an integer row collection."""
    basis: list[list[Fraction]] = []
    for row in rows:
        r = [Fraction(x) for x in row]
        for b in basis:
            piv = next(i for i, x in enumerate(b) if x)
            if r[piv]:
                f = r[piv] / b[piv]
                r = [x - f * y for x, y in zip(r, b)]
        if any(r):
            basis.append(r)
    return len(basis)


class RowSpan:
    """Incremental exact integer row space; used for dimension pruning."""

    def __init__(self) -> None:
        self._basis: list[tuple[int, ...]] = []
        self._pivots: list[int] = []

    def add(self, row: Sequence[int]) -> bool:
        """Insert a row; True if it enlarged the span."""
        r = tuple(row)
        for b, piv in zip(self._basis, self._pivots):
            if r[piv]:
                bp, rp = b[piv], r[piv]
                r = tuple(x * bp - y * rp for x, y in zip(r, b))
        for i, x in enumerate(r):
            if x:
                g = content(r)
                self._basis.append(tuple(c // g for c in r))
                self._pivots.append(i)
                return True
        return False

    @property
    def rank(self) -> int:
        return len(self._basis)


def homogeneous_rank(vectors: Iterable[Sequence[int]]) -> int:
    span = RowSpan()
    for v in vectors:
        span.add(v)
    return span.rank


@dataclass(frozen=True)
class LorentzVector:
    """Integer vector in R^{n,1}; coords has length ambient_dim + 1."""

    coords: Vec
    ambient_dim: int

    def __post_init__(self) -> None:
        if len(self.coords) != self.ambient_dim + 1:
            raise DimensionMismatch("coords length must be ambient_dim + 1")
        object.__setattr__(self, "coords", vec(self.coords))

    @classmethod
    def of(cls, coords: Iterable[int]) -> "LorentzVector":
        c = vec(coords)
        return cls(c, len(c) - 1)

    def inner(self, other: "LorentzVector") -> int:
        return lorentz_inner(self.coords, other.coords)

    def classify(self) -> str:
        return classify(self.coords)


@dataclass(frozen=True)
class LorentzMatrix:
    """Integer (n+1) x (n+1) matrix acting on R^{n,1}."""

    entries: Mat

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", mat(self.entries))

    def is_form_preserving(self) -> bool:
        return is_form_preserving(self.entries)

    def is_positive(self) -> bool:
        return is_positive_lorentzian(self.entries)

    def __matmul__(self, other: "LorentzMatrix") -> "LorentzMatrix":
        return LorentzMatrix(mat_mul(self.entries, other.entries))

    def apply(self, v: LorentzVector) -> LorentzVector:
        return LorentzVector.of(mat_vec(self.entries, v.coords))

    def inverse(self) -> "LorentzMatrix":
        return LorentzMatrix(lorentz_inverse(self.entries))

    def det(self) -> int:
        return det(self.entries)
