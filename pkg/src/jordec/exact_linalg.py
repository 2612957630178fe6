"""Exact linear algebra over the rationals (and, optionally, odd prime fields).

Scalars are :class:`fractions.Fraction`.  Two matrix carriers share one API:

* :class:`Matrix` -- dense, row-major, immutable.
* :class:`SparseMatrix` -- immutable list of sparse rows, used for the large
  constraint systems assembled in :mod:`jordec.maps`.

:func:`rref`, :func:`rank` and :func:`nullspace` accept either carrier.  The
dense path runs a Bareiss fraction-free forward pass followed by exact
back-substitution; the sparse path eliminates primitive integer rows
(content removed after every step).  Both produce the unique reduced row
echelon form, so results never depend on the carrier.

Passing ``modulus=p`` (an odd prime) runs the same operations over F_p; the
returned entries are then integers in ``[0, p)`` wrapped as ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd, lcm
from typing import Iterable, Mapping, Optional, Sequence, Union

from .errors import InputError

Rational = Fraction
Vector = tuple  # tuple of Fraction

ZERO = Fraction(0)
ONE = Fraction(1)


# ---------------------------------------------------------------------------
# Scalars
# ---------------------------------------------------------------------------

def to_rational(value) -> Fraction:
    """Coerce an int, Fraction or canonical string ("p", "p/q") to Fraction.

    Floats and decimal strings are refused: every value stays exact.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        text = value.strip()
        if not text or any(ch in text for ch in ".eE "):
            raise InputError(f"not a rational string: {value!r}")
        try:
            return Fraction(text)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational string: {value!r}") from exc
    raise InputError(f"not a rational: {value!r}")


def format_rational(value) -> str:
    q = to_rational(value)
    if q.denominator == 1:
        return str(q.numerator)
    return f"{q.numerator}/{q.denominator}"


def check_modulus(p: int) -> int:
    if not isinstance(p, int) or p < 3 or p % 2 == 0:
        raise InputError(f"modulus must be an odd prime, got {p!r}")
    d = 3
    while d * d <= p:
        if p % d == 0:
            raise InputError(f"modulus must be an odd prime, got {p}")
        d += 2
    return p


def _mod(value: Fraction, p: int) -> int:
    q = to_rational(value)
    if q.denominator % p == 0:
        raise InputError(f"{q} has no image in F_{p}")
    return q.numerator * pow(q.denominator, -1, p) % p


# ---------------------------------------------------------------------------
# Carriers
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Matrix:
    """Dense immutable matrix of Fractions, stored row-major."""

    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise InputError("negative matrix shape")
        if len(self.entries) != self.rows * self.cols:
            raise InputError(
                f"{len(self.entries)} entries for a {self.rows}x{self.cols} matrix")
        if not all(type(x) is Fraction for x in self.entries):
            object.__setattr__(
                self, "entries", tuple(to_rational(x) for x in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: Optional[int] = None) -> "Matrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise InputError("ragged rows")
        return cls(len(rows), cols, tuple(x for r in rows for x in r))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "Matrix":
        return cls(rows, cols, (ZERO,) * (rows * cols))

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls(n, n, tuple(ONE if i == j else ZERO
                               for i in range(n) for j in range(n)))

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence], rows: int) -> "Matrix":
        cols = len(columns)
        return cls(rows, cols, tuple(columns[j][i]
                                     for i in range(rows) for j in range(cols)))

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> Vector:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def column(self, j: int) -> Vector:
        return self.entries[j::self.cols] if self.cols else ()

    def tolist(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    @cached_property
    def sparse_rows(self) -> tuple:
        """Nonzero pattern as ``((col, value), ...)`` per row."""
        c = self.cols
        return tuple(
            tuple((j, x) for j, x in enumerate(self.entries[i * c:(i + 1) * c]) if x)
            for i in range(self.rows))

    def is_zero(self) -> bool:
        return not any(self.entries)

    def apply(self, v: Sequence) -> Vector:
        """Matrix-vector product."""
        if len(v) != self.cols:
            raise InputError(f"vector of length {len(v)} for {self.cols} columns")
        return tuple(sum((x * v[j] for j, x in row), ZERO) for row in self.sparse_rows)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.cols != other.rows:
                raise InputError("shape mismatch in product")
            ocols = other.cols
            out = [ZERO] * (self.rows * ocols)
            orows = other.sparse_rows
            for i, row in enumerate(self.sparse_rows):
                base = i * ocols
                for k, a in row:
                    for j, b in orows[k]:
                        out[base + j] += a * b
            return Matrix(self.rows, ocols, tuple(out))
        return self.apply(other)

    def _check_same(self, other: "Matrix"):
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise InputError("shape mismatch")

    def __add__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.rows, self.cols,
                      tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "Matrix") -> "Matrix":
        self._check_same(other)
        return Matrix(self.rows, self.cols,
                      tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "Matrix":
        return Matrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, c) -> "Matrix":
        c = to_rational(c)
        return Matrix(self.rows, self.cols, tuple(c * a for a in self.entries))

    def transpose(self) -> "Matrix":
        return Matrix(self.cols, self.rows,
                      tuple(self.entries[i * self.cols + j]
                            for j in range(self.cols) for i in range(self.rows)))

    def select_columns(self, columns: Sequence[int]) -> "Matrix":
        return Matrix(self.rows, len(columns),
                      tuple(self.entries[i * self.cols + j]
                            for i in range(self.rows) for j in columns))

    def select_rows(self, rows: Sequence[int]) -> "Matrix":
        return Matrix(len(rows), self.cols,
                      tuple(x for i in rows for x in self.row(i)))


@dataclass(frozen=True)
class SparseMatrix:
    """Immutable row-sparse matrix.

    ``data[i]`` is a tuple of ``(column, value)`` pairs with strictly
    increasing columns and nonzero values (ints or Fractions).
    """

    rows: int
    cols: int
    data: tuple

    def __post_init__(self):
        if len(self.data) != self.rows:
            raise InputError(f"{len(self.data)} row records for {self.rows} rows")

    @classmethod
    def from_dicts(cls, rows: Iterable[Mapping[int, object]], cols: int) -> "SparseMatrix":
        data = []
        for r in rows:
            items = tuple(sorted((j, x) for j, x in r.items() if x))
            if items and not (0 <= items[0][0] and items[-1][0] < cols):
                raise InputError("column index out of range")
            data.append(items)
        return cls(len(data), cols, tuple(data))

    @classmethod
    def from_dense(cls, a: Matrix) -> "SparseMatrix":
        return cls(a.rows, a.cols, a.sparse_rows)

    def to_dense(self) -> Matrix:
        out = [ZERO] * (self.rows * self.cols)
        for i, row in enumerate(self.data):
            for j, x in row:
                out[i * self.cols + j] = to_rational(x)
        return Matrix(self.rows, self.cols, tuple(out))

    @property
    def nnz(self) -> int:
        return sum(len(r) for r in self.data)

    def apply(self, v: Sequence) -> Vector:
        if len(v) != self.cols:
            raise InputError(f"vector of length {len(v)} for {self.cols} columns")
        return tuple(sum((x * v[j] for j, x in row), ZERO) for row in self.data)

    __matmul__ = apply


AnyMatrix = Union[Matrix, SparseMatrix]


@dataclass(frozen=True)
class RrefResult:
    reduced: AnyMatrix
    pivot_columns: tuple
    rank: int


# ---------------------------------------------------------------------------
# Elimination engines
# ---------------------------------------------------------------------------

def _integer_row(values: Iterable[tuple[int, object]]) -> dict:
    """Scale a sparse rational row to a primitive integer row."""
    items = [(j, to_rational(x)) for j, x in values if x]
    if not items:
        return {}
    den = lcm(*(x.denominator for _, x in items))
    row = {j: x.numerator * (den // x.denominator) for j, x in items}
    return _primitive(row)


def _primitive(row: dict) -> dict:
    g = 0
    for x in row.values():
        g = gcd(g, x)
        if g == 1:
            return row
    if g > 1:
        return {j: x // g for j, x in row.items()}
    return row


def _sparse_echelon(rows: Iterable[dict]) -> dict:
    """Fraction-free sparse forward elimination.

    Returns ``{pivot_column: primitive integer row}``; each row's smallest
    column is its pivot and pivot columns are distinct.
    """
    pivots: dict[int, dict] = {}
    for row in rows:
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                if row[c] < 0:
                    row = {j: -x for j, x in row.items()}
                pivots[c] = row
                break
            a, b = prow[c], row[c]
            g = gcd(a, b)
            a, b = a // g, b // g
            # new = a*row - b*prow, eliminating column c
            new = {j: a * x for j, x in row.items()} if a != 1 else dict(row)
            for j, x in prow.items():
                y = new.get(j, 0) - b * x
                if y:
                    new[j] = y
                else:
                    new.pop(j, None)
            row = _primitive(new)
    return pivots


def _sparse_back_substitute(pivots: dict) -> dict:
    """Clear every pivot column above its pivot; return rational rows with
    pivot entry 1."""
    order = sorted(pivots)
    done: dict[int, dict] = {}
    for c in reversed(order):
        row = pivots[c]
        for c2 in sorted((j for j in row if j != c and j in done), reverse=True):
            x = row.get(c2)
            if not x:
                continue
            prow = done[c2]
            a = prow[c2]
            g = gcd(a, x)
            a, b = a // g, x // g
            new = {j: a * y for j, y in row.items()} if a != 1 else dict(row)
            for j, y in prow.items():
                z = new.get(j, 0) - b * y
                if z:
                    new[j] = z
                else:
                    new.pop(j, None)
            row = _primitive(new)
            if row[c] < 0:
                row = {j: -y for j, y in row.items()}
        done[c] = row
    return {c: {j: Fraction(x, row[c]) for j, x in row.items()}
            for c, row in done.items()}


def _sparse_rref_mod(rows: Iterable[dict], p: int) -> dict:
    pivots: dict[int, dict] = {}
    for row in rows:
        row = {j: x % p for j, x in row.items() if x % p}
        while row:
            c = min(row)
            prow = pivots.get(c)
            if prow is None:
                inv = pow(row[c], -1, p)
                pivots[c] = {j: x * inv % p for j, x in row.items()}
                break
            b = row[c]
            for j, x in prow.items():
                y = (row.get(j, 0) - b * x) % p
                if y:
                    row[j] = y
                else:
                    row.pop(j, None)
    done: dict[int, dict] = {}
    for c in sorted(pivots, reverse=True):
        row = dict(pivots[c])
        for c2 in sorted((j for j in row if j != c and j in done), reverse=True):
            b = row.get(c2)
            if not b:
                continue
            for j, x in done[c2].items():
                y = (row.get(j, 0) - b * x) % p
                if y:
                    row[j] = y
                else:
                    row.pop(j, None)
        done[c] = row
    return {c: {j: Fraction(x) for j, x in row.items()} for c, row in done.items()}


def _bareiss_rref(a: Matrix) -> tuple[list, list]:
    """Dense Bareiss forward pass plus exact back-substitution.

    Returns (reduced rows as lists of Fractions, pivot columns).
    """
    nrows, ncols = a.rows, a.cols
    m = []
    for i in range(nrows):
        row = _integer_row(enumerate(a.row(i)))
        m.append([row.get(j, 0) for j in range(ncols)])
    r = 0
    prev = 1
    pivots = []
    for c in range(ncols):
        if r >= nrows:
            break
        k = next((i for i in range(r, nrows) if m[i][c]), None)
        if k is None:
            continue
        m[r], m[k] = m[k], m[r]
        piv_row = m[r]
        pv = piv_row[c]
        for i in range(r + 1, nrows):
            row = m[i]
            x = row[c]
            for j in range(c + 1, ncols):
                num = pv * row[j] - x * piv_row[j]
                # Bareiss: the division is exact
                row[j] = num // prev
            row[c] = 0
        prev = pv
        pivots.append(c)
        r += 1
    red = [[Fraction(x) for x in m[i]] for i in range(r)]
    for i in range(r - 1, -1, -1):
        c = pivots[i]
        lead = red[i][c]
        red[i] = [x / lead for x in red[i]]
        for h in range(i):
            f = red[h][c]
            if f:
                red[h] = [x - f * y for x, y in zip(red[h], red[i])]
    red.extend([[ZERO] * ncols for _ in range(nrows - r)])
    return red, pivots


def _reduced_rows(a: AnyMatrix, modulus: Optional[int]) -> dict:
    """Map pivot column -> reduced sparse row (pivot entry 1)."""
    if modulus is not None:
        p = check_modulus(modulus)
        src = a.data if isinstance(a, SparseMatrix) else a.sparse_rows
        rows = ({j: _mod(x, p) for j, x in r} for r in src)
        return _sparse_rref_mod(rows, p)
    if isinstance(a, SparseMatrix):
        return _sparse_back_substitute(
            _sparse_echelon(_integer_row(r) for r in a.data))
    red, pivots = _bareiss_rref(a)
    return {c: {j: x for j, x in enumerate(red[i]) if x} for i, c in enumerate(pivots)}


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def rref(a: AnyMatrix, modulus: Optional[int] = None) -> RrefResult:
    """Reduced row echelon form of ``a``.

    The result has the same carrier and shape as ``a``: nonzero rows in
    pivot order followed by zero rows.
    """
    rows = _reduced_rows(a, modulus)
    pivots = tuple(sorted(rows))
    if isinstance(a, SparseMatrix):
        data = [tuple(sorted(rows[c].items())) for c in pivots]
        data.extend(() for _ in range(a.rows - len(pivots)))
        reduced: AnyMatrix = SparseMatrix(a.rows, a.cols, tuple(data))
    else:
        out = []
        for c in pivots:
            r = rows[c]
            out.append([r.get(j, ZERO) for j in range(a.cols)])
        out.extend([ZERO] * a.cols for _ in range(a.rows - len(pivots)))
        reduced = Matrix.from_rows(out, a.cols) if out else Matrix.zeros(a.rows, a.cols)
    return RrefResult(reduced, pivots, len(pivots))


def rank(a: AnyMatrix, modulus: Optional[int] = None) -> int:
    if modulus is not None:
        return len(_reduced_rows(a, modulus))
    if isinstance(a, SparseMatrix):
        return len(_sparse_echelon(_integer_row(r) for r in a.data))
    return len(_bareiss_rref(a)[1])


def nullspace(a: AnyMatrix, modulus: Optional[int] = None) -> list:
    """Basis of ``{v : a v = 0}``.

    One vector per non-pivot column ``f``, with entry 1 at ``f``, zero at
    the other free columns, and ``-reduced[r][f]`` at pivot column ``r``.
    """
    rows = _reduced_rows(a, modulus)
    pivots = sorted(rows)
    pivot_set = set(pivots)
    basis = []
    for f in range(a.cols):
        if f in pivot_set:
            continue
        v = [ZERO] * a.cols
        v[f] = ONE
        for c in pivots:
            x = rows[c].get(f)
            if x:
                v[c] = (-x) % modulus if modulus is not None else -x
        basis.append(tuple(v))
    return basis


class SpanSolver:
    """Repeated coordinate solves against a fixed independent family.

    Picks rows of the column matrix that are independent (pivot columns of
    the transpose), inverts that square block once, and verifies each
    candidate solution against every row.
    """

    def __init__(self, basis: Sequence[Sequence]):
        self.basis = [tuple(to_rational(x) for x in v) for v in basis]
        lengths = {len(v) for v in self.basis}
        if len(lengths) > 1:
            raise InputError("basis vectors of different lengths")
        self.length = lengths.pop() if lengths else None
        r = len(self.basis)
        if r == 0:
            self._rows, self._inverse = (), None
            return
        transposed = Matrix.from_rows(self.basis)   # r x N, rows are basis vectors
        info = rref(transposed)
        if info.rank != r:
            raise InputError("basis vectors are linearly dependent")
        self._rows = info.pivot_columns
        square = transposed.select_columns(self._rows).transpose()  # r x r
        aug = Matrix.from_rows([list(square.row(i)) + [ONE if i == j else ZERO for j in range(r)]
                                for i in range(r)])
        self._inverse = rref(aug).reduced.select_columns(range(r, 2 * r))

    def solve(self, target: Sequence) -> Optional[tuple]:
        target = tuple(to_rational(x) for x in target)
        if self.length is not None and len(target) != self.length:
            raise InputError(
                f"target of length {len(target)} against basis of length {self.length}")
        if not self.basis:
            return () if not any(target) else None
        coords = self._inverse.apply([target[i] for i in self._rows])
        combo = [ZERO] * len(target)
        for c, v in zip(coords, self.basis):
            if c:
                for i, x in enumerate(v):
                    if x:
                        combo[i] += c * x
        if tuple(combo) != target:
            return None
        return coords


def solve_in_span(basis: Sequence[Sequence], target: Sequence) -> Optional[tuple]:
    """Coordinates of ``target`` in ``basis``, or ``None`` when it is outside
    the span."""
    return SpanSolver(basis).solve(target)


def combine(coefficients: Sequence, vectors: Sequence[Sequence], length: int) -> Vector:
    """Linear combination ``sum c_i v_i``."""
    out = [ZERO] * length
    for c, v in zip(coefficients, vectors):
        if c:
            for i, x in enumerate(v):
                if x:
                    out[i] += c * x
    return tuple(out)
