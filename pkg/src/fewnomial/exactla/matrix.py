"""Immutable rational matrices with exact rank, determinant and kernel."""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Iterable, Sequence


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError(f"refusing float {x!r}; pass an int, Fraction or rational string")
    return Fraction(x)


class RationalMatrix:
    """A rows x cols matrix of exact rationals.

    Zero-column (or zero-row) matrices are allowed so that, e.g., the kernel of
    a full-column-rank matrix can be represented.
    """

    __slots__ = ("_rows", "_nrows", "_ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        data = tuple(tuple(to_fraction(x) for x in r) for r in rows)
        if data:
            widths = {len(r) for r in data}
            if len(widths) != 1:
                raise ValueError("ragged matrix rows")
            width = widths.pop()
            if ncols is not None and ncols != width:
                raise ValueError(f"expected {ncols} columns, got {width}")
            ncols = width
        elif ncols is None:
            ncols = 0
        self._rows = data
        self._nrows = len(data)
        self._ncols = ncols

    # -- construction -------------------------------------------------
    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "RationalMatrix":
        return cls([[0] * ncols for _ in range(nrows)], ncols=ncols)

    @classmethod
    def identity(cls, n: int) -> "RationalMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], nrows: int) -> "RationalMatrix":
        if not columns:
            return cls([[] for _ in range(nrows)], ncols=0)
        return cls(zip(*columns), ncols=len(columns))

    # -- access -------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return self._nrows, self._ncols

    @property
    def nrows(self) -> int:
        return self._nrows

    @property
    def ncols(self) -> int:
        return self._ncols

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self._rows[i]

    def col(self, j: int) -> tuple[Fraction, ...]:
        return tuple(r[j] for r in self._rows)

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return self._rows

    def columns(self) -> list[tuple[Fraction, ...]]:
        return [self.col(j) for j in range(self._ncols)]

    def __getitem__(self, idx):
        i, j = idx
        return self._rows[i][j]

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    @property
    def T(self) -> "RationalMatrix":
        return RationalMatrix.from_columns(self._rows, self._ncols)

    def select_columns(self, cols: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix([[r[j] for j in cols] for r in self._rows], ncols=len(cols))

    def select_rows(self, rows: Sequence[int]) -> "RationalMatrix":
        return RationalMatrix([self._rows[i] for i in rows], ncols=self._ncols)

    def stack(self, other: "RationalMatrix") -> "RationalMatrix":
        if other.ncols != self._ncols:
            raise ValueError("column mismatch in stack")
        return RationalMatrix(self._rows + other.rows, ncols=self._ncols)

    def is_zero(self) -> bool:
        return all(x == 0 for r in self._rows for x in r)

    # -- arithmetic ---------------------------------------------------
    def __matmul__(self, other):
        if isinstance(other, RationalMatrix):
            if self._ncols != other.nrows:
                raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
            cols = other.columns()
            return RationalMatrix(
                [[sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols] for r in self._rows],
                ncols=other.ncols,
            )
        vec = [to_fraction(x) for x in other]
        if len(vec) != self._ncols:
            raise ValueError("vector length mismatch")
        return tuple(sum((a * b for a, b in zip(r, vec)), Fraction(0)) for r in self._rows)

    def scale_columns(self, factors: Sequence) -> "RationalMatrix":
        f = [to_fraction(x) for x in factors]
        return RationalMatrix([[a * b for a, b in zip(r, f)] for r in self._rows], ncols=self._ncols)

    def scale_rows(self, factors: Sequence) -> "RationalMatrix":
        f = [to_fraction(x) for x in factors]
        return RationalMatrix([[a * s for a in r] for r, s in zip(self._rows, f)], ncols=self._ncols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and self._rows == other.rows

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in r) for r in self._rows)
        return f"RationalMatrix({self._nrows}x{self._ncols}: [{body}])"


def _integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    out = []
    for r in rows:
        den = lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * den) for x in r])
    return out


def _bareiss(rows: list[list[int]]) -> int:
    """In-place fraction-free elimination; returns the rank."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    prev = 1
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        for i in range(r + 1, m):
            a = rows[i][c]
            ri = rows[i]
            rr = rows[r]
            for j in range(c + 1, n):
                ri[j] = (p * ri[j] - a * rr[j]) // prev
            ri[c] = 0
        prev = p
        r += 1
        if r == m:
            break
    return r


def rank(M: RationalMatrix | Sequence[Sequence]) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    rows = M.rows if isinstance(M, RationalMatrix) else [[to_fraction(x) for x in r] for r in M]
    if not rows or not rows[0]:
        return 0
    return _bareiss(_integer_rows(rows))


def determinant(M: RationalMatrix | Sequence[Sequence]) -> Fraction:
    rows = M.rows if isinstance(M, RationalMatrix) else [[to_fraction(x) for x in r] for r in M]
    n = len(rows)
    if n == 0:
        return Fraction(1)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    scale = Fraction(1)
    ints = []
    for r in rows:
        den = lcm(*(x.denominator for x in r))
        scale *= den
        ints.append([int(x * den) for x in r])
    sign = 1
    prev = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if ints[i][c] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            ints[c], ints[piv] = ints[piv], ints[c]
            sign = -sign
        p = ints[c][c]
        for i in range(c + 1, n):
            a = ints[i][c]
            for j in range(c + 1, n):
                ints[i][j] = (p * ints[i][j] - a * ints[c][j]) // prev
            ints[i][c] = 0
        prev = p
    return Fraction(sign * ints[n - 1][n - 1]) / scale


def rref(M: RationalMatrix) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form (nonzero rows only) and pivot columns."""
    a = [list(r) for r in M.rows]
    m, n = M.shape
    pivots: list[int] = []
    r = 0
    for c in range(n):
        piv = next((i for i in range(r, m) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        p = a[r][c]
        if p != 1:
            a[r] = [x / p for x in a[r]]
        for i in range(m):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    return a[:r], pivots


def kernel_basis(M: RationalMatrix) -> RationalMatrix:
    """Canonical basis of the right kernel of ``M`` as matrix columns.

    Column ``j`` corresponds to the ``j``-th free (non-pivot) column ``f`` of
    the reduced row echelon form: it has a 1 in row ``f``, zeros in the other
    free rows, and minus the RREF entries in the pivot rows.  The result only
    depends on ``ker M``, not on how ``M`` is written.
    """
    n = M.ncols
    red, pivots = rref(M)
    free = [c for c in range(n) if c not in set(pivots)]
    cols = []
    for f in free:
        v = [Fraction(0)] * n
        v[f] = Fraction(1)
        for row, p in zip(red, pivots):
            v[p] = -row[f]
        cols.append(v)
    return RationalMatrix.from_columns(cols, n)


def solve(M: RationalMatrix, b: Sequence) -> tuple[Fraction, ...] | None:
    """One exact solution of ``M x = b`` (free variables set to 0), or None."""
    aug = RationalMatrix([list(r) + [to_fraction(v)] for r, v in zip(M.rows, b)], ncols=M.ncols + 1)
    red, pivots = rref(aug)
    if pivots and pivots[-1] == M.ncols:
        return None
    x = [Fraction(0)] * M.ncols
    for row, p in zip(red, pivots):
        x[p] = row[-1]
    return tuple(x)


def inverse(M: RationalMatrix) -> RationalMatrix:
    n, m = M.shape
    if n != m:
        raise ValueError("inverse of a non-square matrix")
    aug = RationalMatrix(
        [list(r) + [1 if i == j else 0 for j in range(n)] for i, r in enumerate(M.rows)], ncols=2 * n
    )
    red, pivots = rref(aug)
    if pivots[:n] != list(range(n)) or len(red) < n:
        raise ValueError("matrix is singular")
    return RationalMatrix([row[n:] for row in red], ncols=n)


def primitive_integer(v: Sequence[Fraction]) -> tuple[int, ...]:
    """Scale a rational vector to the primitive integer vector with the same direction."""
    from math import gcd

    den = lcm(*(Fraction(x).denominator for x in v)) if v else 1
    ints = [int(Fraction(x) * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((Fraction(a) * Fraction(b) for a, b in zip(u, v)), Fraction(0))
