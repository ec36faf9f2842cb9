"""Exact arithmetic in Q(sqrt 5) and small dense linear algebra over it.

Every matrix the engine builds (reflection representations of rank at
most 10) lives here.  Nothing is ever rounded.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "Scalar",
    "Matrix",
    "PHI",
    "SQRT5",
    "rank",
    "kernel_basis",
    "determinant",
    "charpoly",
]


def _frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot build an exact rational from {x!r}")


class Scalar:
    """The number ``a + b*sqrt(5)`` with rational ``a`` and ``b``."""

    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        if isinstance(a, Scalar):
            if b:
                raise TypeError("Scalar(Scalar, b) is ambiguous")
            self.a, self.b = a.a, a.b
            return
        self.a = _frac(a)
        self.b = _frac(b)

    @classmethod
    def coerce(cls, x) -> "Scalar":
        return x if isinstance(x, Scalar) else cls(x)

    def __add__(self, other):
        o = Scalar.coerce(other)
        return Scalar(self.a + o.a, self.b + o.b)

    __radd__ = __add__

    def __sub__(self, other):
        o = Scalar.coerce(other)
        return Scalar(self.a - o.a, self.b - o.b)

    def __rsub__(self, other):
        return Scalar.coerce(other) - self

    def __neg__(self):
        return Scalar(-self.a, -self.b)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Scalar(self.a * other, self.b * other)
        o = Scalar.coerce(other)
        return Scalar(self.a * o.a + 5 * self.b * o.b, self.a * o.b + self.b * o.a)

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        """Field norm ``a^2 - 5 b^2``; zero only for zero."""
        return self.a * self.a - 5 * self.b * self.b

    def conjugate(self) -> "Scalar":
        return Scalar(self.a, -self.b)

    def inverse(self) -> "Scalar":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt5)")
        return Scalar(self.a / n, -self.b / n)

    def __truediv__(self, other):
        return self * Scalar.coerce(other).inverse()

    def __rtruediv__(self, other):
        return Scalar.coerce(other) * self.inverse()

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        if isinstance(other, Scalar):
            return self.a == other.a and self.b == other.b
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def sign(self) -> int:
        """Sign of the real number ``a + b sqrt5``."""
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with 5 b^2
        return sa if self.a * self.a > 5 * self.b * self.b else sb

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        bpart = "sqrt5" if self.b == 1 else ("-sqrt5" if self.b == -1 else f"{self.b}*sqrt5")
        if self.a == 0:
            return bpart
        if bpart.startswith("-"):
            return f"{self.a}{bpart}"
        return f"{self.a}+{bpart}"


SQRT5 = Scalar(0, 1)
#: golden ratio, ``2 cos(pi/5)``
PHI = Scalar(Fraction(1, 2), Fraction(1, 2))

ZERO = Scalar(0)
ONE = Scalar(1)


class Matrix:
    """Immutable dense matrix of :class:`Scalar` entries."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable]):
        grid = tuple(tuple(Scalar.coerce(x) for x in row) for row in entries)
        self.rows = len(grid)
        self.cols = len(grid[0]) if grid else 0
        if any(len(r) != self.cols for r in grid):
            raise ValueError("ragged matrix")
        self.entries = grid

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int | None = None) -> "Matrix":
        cols = rows if cols is None else cols
        return cls([[ZERO] * cols for _ in range(rows)])

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence]) -> "Matrix":
        return cls(list(zip(*columns)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def column(self, j: int) -> tuple:
        return tuple(row[j] for row in self.entries)

    def transpose(self) -> "Matrix":
        return Matrix(list(zip(*self.entries)))

    def __add__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix([[x + y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._same_shape(other)
        return Matrix([[x - y for x, y in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __neg__(self) -> "Matrix":
        return Matrix([[-x for x in r] for r in self.entries])

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.entries))
        out = []
        for r in self.entries:
            out.append([_dot(r, c) for c in cols])
        return Matrix(out)

    def apply(self, vector: Sequence) -> tuple:
        return tuple(_dot(r, vector) for r in self.entries)

    def stack(self, other: "Matrix") -> "Matrix":
        if self.cols != other.cols:
            raise ValueError("column mismatch")
        return Matrix(self.entries + other.entries)

    def trace(self) -> Scalar:
        return sum((self.entries[i][i] for i in range(min(self.rows, self.cols))), ZERO)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.entries)
        return f"Matrix([{body}])"


def _dot(r, c) -> Scalar:
    acc = ZERO
    for x, y in zip(r, c):
        if x and y:
            acc = acc + x * y
    return acc


def _rref(m: Matrix):
    """Reduced row echelon form; returns (rows, pivot columns)."""
    rational = all(x.b == 0 for r in m.entries for x in r)
    if rational:
        rows = [[x.a for x in r] for r in m.entries]
        one = Fraction(1)
    else:
        rows = [list(r) for r in m.entries]
        one = ONE
    pivots = []
    prow = 0
    for col in range(m.cols):
        sel = None
        for i in range(prow, m.rows):
            if rows[i][col]:
                sel = i
                break
        if sel is None:
            continue
        rows[prow], rows[sel] = rows[sel], rows[prow]
        inv = one / rows[prow][col]
        rows[prow] = [x * inv for x in rows[prow]]
        for i in range(m.rows):
            if i != prow and rows[i][col]:
                f = rows[i][col]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[prow])]
        pivots.append(col)
        prow += 1
        if prow == m.rows:
            break
    if rational:
        rows = [[Scalar(x) for x in r] for r in rows]
    return rows, pivots


def rank(m: Matrix) -> int:
    """Rank over Q(sqrt5) by exact Gaussian elimination."""
    if m.rows == 0 or m.cols == 0:
        return 0
    _, pivots = _rref(m)
    return len(pivots)


def kernel_basis(m: Matrix) -> list[tuple[Scalar, ...]]:
    """Basis of the right kernel ``{v : m v = 0}``."""
    if m.cols == 0:
        return []
    if m.rows == 0:
        return [tuple(ONE if i == j else ZERO for i in range(m.cols)) for j in range(m.cols)]
    rows, pivots = _rref(m)
    free = [c for c in range(m.cols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * m.cols
        v[f] = ONE
        for r, p in enumerate(pivots):
            v[p] = -rows[r][f]
        basis.append(tuple(v))
    return basis


def determinant(m: Matrix) -> Scalar:
    if m.rows != m.cols:
        raise ValueError("determinant of a non-square matrix")
    rows = [list(r) for r in m.entries]
    n = m.rows
    det = ONE
    for col in range(n):
        sel = next((i for i in range(col, n) if rows[i][col]), None)
        if sel is None:
            return ZERO
        if sel != col:
            rows[col], rows[sel] = rows[sel], rows[col]
            det = -det
        piv = rows[col][col]
        det = det * piv
        inv = piv.inverse()
        for i in range(col + 1, n):
            if rows[i][col]:
                f = rows[i][col] * inv
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[col])]
    return det


def charpoly(m: Matrix) -> list[Scalar]:
    """Coefficients of ``det(t I - m)``, leading coefficient first.

    Faddeev-LeVerrier; exact since the field has characteristic zero.
    """
    n = m.rows
    if n != m.cols:
        raise ValueError("characteristic polynomial of a non-square matrix")
    coeffs = [ONE]
    ident = Matrix.identity(n)
    acc = Matrix.zero(n)
    for k in range(1, n + 1):
        acc = m @ acc + _scale(ident, coeffs[-1])
        coeffs.append(-(m @ acc).trace() / k)
    return coeffs


def _scale(m: Matrix, s: Scalar) -> Matrix:
    return Matrix([[x * s for x in r] for r in m.entries])
