"""Block upper triangular matrix algebras T(n_1, ..., n_k) and their bimodules.

Indices are 0-based everywhere (rows, columns, blocks, basis positions).
The matrix unit written E_{ij} with 1-based i, j in the literature is
``(i - 1, j - 1)`` here.

The canonical basis of T lists the admissible matrix units ``(i, j)``
(``block(i) <= block(j)``) in row-major order.  Every map, action matrix and
serialized file refers to this order.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from pathlib import Path
from typing import Optional, Sequence

from .errors import AxiomViolation, InputError, NotSplittable
from .exact_linalg import ONE, ZERO, Matrix, rref, to_rational


@dataclass(frozen=True)
class BlockPartition:
    parts: tuple

    def __post_init__(self):
        parts = tuple(self.parts)
        if not parts:
            raise InputError("partition needs at least one block")
        if not all(isinstance(x, int) and not isinstance(x, bool) and x >= 1 for x in parts):
            raise InputError(f"partition parts must be positive integers: {parts!r}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def parse(cls, text: str) -> "BlockPartition":
        """Parse ``"2,1,1"``."""
        try:
            parts = tuple(int(x) for x in text.split(","))
        except ValueError as exc:
            raise InputError(f"bad partition {text!r}") from exc
        return cls(parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def k(self) -> int:
        return len(self.parts)

    @cached_property
    def offsets(self) -> tuple:
        out, acc = [], 0
        for x in self.parts:
            out.append(acc)
            acc += x
        return tuple(out)

    @cached_property
    def blocks(self) -> tuple:
        """``blocks[i]`` is the block index of row/column ``i``."""
        return tuple(b for b, size in enumerate(self.parts) for _ in range(size))

    def block(self, i: int) -> int:
        return self.blocks[i]

    def __str__(self):
        return ",".join(map(str, self.parts))


@dataclass(frozen=True)
class AlgebraBasis:
    partition: BlockPartition
    pairs: tuple

    @cached_property
    def index(self) -> dict:
        return {pair: a for a, pair in enumerate(self.pairs)}

    @cached_property
    def products(self) -> tuple:
        """``products[a][b]`` is the basis index of E_a E_b, or None if zero."""
        idx = self.index
        return tuple(
            tuple(idx[(i, l)] if j == k else None for (k, l) in self.pairs)
            for (i, j) in self.pairs)

    def __len__(self):
        return len(self.pairs)

    def __iter__(self):
        return iter(self.pairs)


@lru_cache(maxsize=None)
def canonical_basis(p: BlockPartition) -> AlgebraBasis:
    blk = p.blocks
    pairs = tuple((i, j) for i in range(p.n) for j in range(p.n) if blk[i] <= blk[j])
    return AlgebraBasis(p, pairs)


@lru_cache(maxsize=None)
def diagonal_basis(p: BlockPartition) -> tuple:
    """Basis indices spanning the block-diagonal subalgebra F_1TF_1 + ... + F_kTF_k."""
    blk = p.blocks
    return tuple(a for a, (i, j) in enumerate(canonical_basis(p).pairs) if blk[i] == blk[j])


# ---------------------------------------------------------------------------
# Elements
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraElement:
    """An element of T(partition), held as its full n x n matrix."""

    partition: BlockPartition
    entries: Matrix

    def __post_init__(self):
        p, m = self.partition, self.entries
        if (m.rows, m.cols) != (p.n, p.n):
            raise InputError(f"element must be {p.n}x{p.n}")
        blk = p.blocks
        for i, row in enumerate(m.sparse_rows):
            for j, _ in row:
                if blk[i] > blk[j]:
                    raise InputError(f"entry ({i},{j}) lies below the block diagonal")

    @classmethod
    def zero(cls, p: BlockPartition) -> "AlgebraElement":
        return cls(p, Matrix.zeros(p.n, p.n))

    @classmethod
    def identity(cls, p: BlockPartition) -> "AlgebraElement":
        return cls(p, Matrix.identity(p.n))

    @classmethod
    def unit(cls, p: BlockPartition, i: int, j: int) -> "AlgebraElement":
        n = p.n
        e = [ZERO] * (n * n)
        e[i * n + j] = ONE
        return cls(p, Matrix(n, n, tuple(e)))

    @classmethod
    def from_coords(cls, p: BlockPartition, coords: Sequence) -> "AlgebraElement":
        basis = canonical_basis(p)
        if len(coords) != len(basis):
            raise InputError(f"{len(coords)} coordinates for a basis of size {len(basis)}")
        n = p.n
        e = [ZERO] * (n * n)
        for (i, j), x in zip(basis.pairs, coords):
            e[i * n + j] = to_rational(x)
        return cls(p, Matrix(n, n, tuple(e)))

    @cached_property
    def coords(self) -> tuple:
        return tuple(self.entries[i, j] for i, j in canonical_basis(self.partition).pairs)

    def _same(self, other: "AlgebraElement"):
        if not isinstance(other, AlgebraElement) or other.partition != self.partition:
            raise InputError("elements of different algebras")

    def __mul__(self, other):
        if isinstance(other, AlgebraElement):
            return multiply(self, other)
        return AlgebraElement(self.partition, self.entries.scale(other))

    def __rmul__(self, c) -> "AlgebraElement":
        return AlgebraElement(self.partition, self.entries.scale(c))

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same(other)
        return AlgebraElement(self.partition, self.entries + other.entries)

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        self._same(other)
        return AlgebraElement(self.partition, self.entries - other.entries)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.partition, -self.entries)

    def is_zero(self) -> bool:
        return self.entries.is_zero()


def multiply(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    x._same(y)
    return AlgebraElement(x.partition, x.entries @ y.entries)


def commutator(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return multiply(x, y) - multiply(y, x)


def jordan_product(x: AlgebraElement, y: AlgebraElement) -> AlgebraElement:
    return multiply(x, y) + multiply(y, x)


def idempotents(p: BlockPartition) -> list:
    """The block identities F_1, ..., F_k."""
    out = []
    for off, size in zip(p.offsets, p.parts):
        f = AlgebraElement.zero(p)
        for i in range(off, off + size):
            f = f + AlgebraElement.unit(p, i, i)
        out.append(f)
    return out


def pq_split(p: BlockPartition):
    """``(P, Q, tail)`` with P = F_1, Q = I - P, tail = (n_2, ..., n_k)."""
    if p.k < 2:
        raise NotSplittable(f"partition ({p}) has a single block")
    big_p = idempotents(p)[0]
    return big_p, AlgebraElement.identity(p) - big_p, BlockPartition(p.parts[1:])


def shift_index(p: BlockPartition) -> tuple:
    """For each basis index of T(tail), the basis index of its image in QTQ."""
    if p.k < 2:
        raise NotSplittable(f"partition ({p}) has a single block")
    tail = BlockPartition(p.parts[1:])
    n1 = p.parts[0]
    idx = canonical_basis(p).index
    return tuple(idx[(i + n1, j + n1)] for i, j in canonical_basis(tail).pairs)


def shift_element(x: AlgebraElement, p: BlockPartition) -> AlgebraElement:
    """Embed an element of T(tail) into QTQ inside T(p)."""
    return AlgebraElement.from_coords(p, _scatter(x.coords, shift_index(p), len(canonical_basis(p))))


def corner_element(x: AlgebraElement) -> AlgebraElement:
    """The element of T(tail) corresponding to QXQ."""
    p = x.partition
    tail = BlockPartition(p.parts[1:]) if p.k >= 2 else None
    if tail is None:
        raise NotSplittable(f"partition ({p}) has a single block")
    return AlgebraElement.from_coords(tail, [x.coords[a] for a in shift_index(p)])


def peirce_parts(x: AlgebraElement):
    """``(PXP, PXQ, QXQ)``; QXP is always zero in T."""
    p = x.partition
    n1 = p.parts[0]
    pp, pq, qq = [], [], []
    for (i, j), c in zip(canonical_basis(p).pairs, x.coords):
        zero = ZERO
        pp.append(c if i < n1 and j < n1 else zero)
        pq.append(c if i < n1 <= j else zero)
        qq.append(c if i >= n1 else zero)
    return (AlgebraElement.from_coords(p, pp), AlgebraElement.from_coords(p, pq),
            AlgebraElement.from_coords(p, qq))


def _scatter(values, positions, size):
    out = [ZERO] * size
    for v, pos in zip(values, positions):
        out[pos] = v
    return out


# ---------------------------------------------------------------------------
# Bimodules
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Bimodule:
    """A finite-dimensional T-bimodule given by per-basis action matrices.

    ``left[a]`` is the matrix of ``v -> E_a . v`` and ``right[a]`` the
    matrix of ``v -> v . E_a``, both ``dim x dim``.
    """

    partition: BlockPartition
    dim: int
    left: tuple
    right: tuple
    label: str = "custom"

    def __post_init__(self):
        size = len(canonical_basis(self.partition))
        if len(self.left) != size or len(self.right) != size:
            raise InputError(f"need {size} left and right action matrices, got "
                             f"{len(self.left)} and {len(self.right)}")
        for mat in (*self.left, *self.right):
            if (mat.rows, mat.cols) != (self.dim, self.dim):
                raise InputError(f"action matrices must be {self.dim}x{self.dim}")

    @cached_property
    def _left_rows(self) -> tuple:
        return tuple(m.sparse_rows for m in self.left)

    @cached_property
    def _right_rows(self) -> tuple:
        return tuple(m.sparse_rows for m in self.right)

    def left_basis(self, a: int, v: Sequence) -> tuple:
        """``E_a . v``."""
        return tuple(sum((x * v[j] for j, x in row), ZERO) for row in self._left_rows[a])

    def right_basis(self, a: int, v: Sequence) -> tuple:
        """``v . E_a``."""
        return tuple(sum((x * v[j] for j, x in row), ZERO) for row in self._right_rows[a])

    def left_apply(self, x: AlgebraElement, v: Sequence) -> tuple:
        """``x . v`` for an arbitrary algebra element."""
        return _act(self._left_rows, x.coords, v, self.dim)

    def right_apply(self, x: AlgebraElement, v: Sequence) -> tuple:
        """``v . x`` for an arbitrary algebra element."""
        return _act(self._right_rows, x.coords, v, self.dim)

    def left_matrix(self, x: AlgebraElement) -> Matrix:
        return _assemble(self.left, x.coords, self.dim)

    def right_matrix(self, x: AlgebraElement) -> Matrix:
        return _assemble(self.right, x.coords, self.dim)


def _act(rows_by_basis, coords, v, dim) -> tuple:
    out = [ZERO] * dim
    for c, rows in zip(coords, rows_by_basis):
        if not c:
            continue
        for r, row in enumerate(rows):
            s = ZERO
            for j, x in row:
                s += x * v[j]
            if s:
                out[r] += c * s
    return tuple(out)


def _assemble(mats, coords, dim) -> Matrix:
    out = [ZERO] * (dim * dim)
    for c, mat in zip(coords, mats):
        if c:
            for i, row in enumerate(mat.sparse_rows):
                for j, x in row:
                    out[i * dim + j] += c * x
    return Matrix(dim, dim, tuple(out))


def _unit_matrix(dim: int, entries) -> Matrix:
    e = [ZERO] * (dim * dim)
    for r, c in entries:
        e[r * dim + c] = ONE
    return Matrix(dim, dim, tuple(e))


def natural_bimodule(p: BlockPartition) -> Bimodule:
    """M_n with matrix multiplication on both sides; V[r, c] is coordinate r*n + c."""
    n = p.n
    dim = n * n
    basis = canonical_basis(p)
    # E_ij V: row i of the result is row j of V
    left = tuple(_unit_matrix(dim, [(i * n + c, j * n + c) for c in range(n)])
                 for i, j in basis.pairs)
    # V E_ij: column j of the result is column i of V
    right = tuple(_unit_matrix(dim, [(r * n + j, r * n + i) for r in range(n)])
                  for i, j in basis.pairs)
    return Bimodule(p, dim, left, right, "natural")


def regular_bimodule(p: BlockPartition) -> Bimodule:
    """T acting on itself, coordinates in canonical basis order."""
    basis = canonical_basis(p)
    dim = len(basis)
    prod = basis.products
    left = tuple(_unit_matrix(dim, [(prod[a][b], b) for b in range(dim) if prod[a][b] is not None])
                 for a in range(dim))
    right = tuple(_unit_matrix(dim, [(prod[b][a], b) for b in range(dim) if prod[b][a] is not None])
                  for a in range(dim))
    return Bimodule(p, dim, left, right, "regular")


def block_pair_bimodule(p: BlockPartition, left_block: int, right_block: int) -> Bimodule:
    """n_s x n_t matrices V with X.V = X_ss V and V.X = V X_tt.

    Multiplicativity of the two actions holds because the diagonal blocks of
    a product of block upper triangular matrices are the products of the
    diagonal blocks.
    """
    s, t = left_block, right_block
    if not (0 <= s < p.k and 0 <= t < p.k):
        raise InputError(f"blocks ({s}, {t}) out of range for ({p})")
    ns, nt = p.parts[s], p.parts[t]
    off_s, off_t = p.offsets[s], p.offsets[t]
    blk = p.blocks
    dim = ns * nt
    left, right = [], []
    for i, j in canonical_basis(p).pairs:
        if blk[i] == blk[j] == s:
            ii, jj = i - off_s, j - off_s
            left.append(_unit_matrix(dim, [(ii * nt + c, jj * nt + c) for c in range(nt)]))
        else:
            left.append(Matrix.zeros(dim, dim))
        if blk[i] == blk[j] == t:
            ii, jj = i - off_t, j - off_t
            right.append(_unit_matrix(dim, [(r * nt + jj, r * nt + ii) for r in range(ns)]))
        else:
            right.append(Matrix.zeros(dim, dim))
    return Bimodule(p, dim, tuple(left), tuple(right), f"block_pair({s},{t})")


def corner_scalar_bimodule(p: BlockPartition) -> Bimodule:
    """n_k x n_1 matrices: last diagonal block acts on the left, first on the right."""
    if p.k < 2:
        raise NotSplittable(f"corner_scalar needs at least two blocks, got ({p})")
    m = block_pair_bimodule(p, p.k - 1, 0)
    return Bimodule(p, m.dim, m.left, m.right, "corner_scalar")


def direct_sum(m1: Bimodule, m2: Bimodule) -> Bimodule:
    if m1.partition != m2.partition:
        raise InputError("direct sum of bimodules over different algebras")
    d1, d2 = m1.dim, m2.dim
    dim = d1 + d2

    def block(a: Matrix, b: Matrix) -> Matrix:
        rows = [list(a.row(i)) + [ZERO] * d2 for i in range(d1)]
        rows += [[ZERO] * d1 + list(b.row(i)) for i in range(d2)]
        return Matrix.from_rows(rows, dim) if rows else Matrix.zeros(0, 0)

    return Bimodule(m1.partition, dim,
                    tuple(block(a, b) for a, b in zip(m1.left, m2.left)),
                    tuple(block(a, b) for a, b in zip(m1.right, m2.right)),
                    f"{m1.label}+{m2.label}")


BUILTIN = {
    "natural": natural_bimodule,
    "regular": regular_bimodule,
    "corner_scalar": corner_scalar_bimodule,
}


def builtin_bimodule(name: str, p: BlockPartition) -> Bimodule:
    try:
        factory = BUILTIN[name]
    except KeyError:
        raise InputError(f"unknown bimodule {name!r}; choose from {sorted(BUILTIN)}") from None
    return factory(p)


# ---------------------------------------------------------------------------
# Axioms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AxiomFailure:
    axiom: str
    pair: tuple   # basis pairs ((i, j), (k, l)); a single pair for unitality

    def describe(self) -> str:
        return f"{self.axiom} fails at {self.pair}"


@dataclass
class AxiomReport:
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def __bool__(self):
        return self.ok


def check_bimodule_axioms(m: Bimodule, p: Optional[BlockPartition] = None) -> AxiomReport:
    """Check unitality, both associativities and compatibility on all basis pairs."""
    p = p or m.partition
    basis = canonical_basis(p)
    size = len(basis)
    if len(m.left) != size or len(m.right) != size:
        raise InputError("action matrix count does not match the algebra basis")
    report = AxiomReport()
    ident = Matrix.identity(m.dim)
    unit = AlgebraElement.identity(p)
    if m.left_matrix(unit) != ident:
        report.failures.append(AxiomFailure("left unitality", ("I",)))
    if m.right_matrix(unit) != ident:
        report.failures.append(AxiomFailure("right unitality", ("I",)))
    zero = Matrix.zeros(m.dim, m.dim)
    prod = basis.products
    for a in range(size):
        for b in range(size):
            pair = (basis.pairs[a], basis.pairs[b])
            c = prod[a][b]
            left_ab = m.left[c] if c is not None else zero
            right_ab = m.right[c] if c is not None else zero
            if left_ab != m.left[a] @ m.left[b]:
                report.failures.append(AxiomFailure("left associativity", pair))
            if right_ab != m.right[b] @ m.right[a]:
                report.failures.append(AxiomFailure("right associativity", pair))
            if m.left[a] @ m.right[b] != m.right[b] @ m.left[a]:
                report.failures.append(AxiomFailure("compatibility", pair))
    return report


def require_axioms(m: Bimodule) -> Bimodule:
    report = check_bimodule_axioms(m)
    if not report.ok:
        first = report.failures[0]
        raise AxiomViolation(f"bimodule {m.label!r}: {first.describe()} "
                             f"({len(report.failures)} violations)", report)
    return m


def bimodule_from_json(data: dict, p: BlockPartition, label: str = "custom") -> Bimodule:
    """Build (without checking axioms) a bimodule from its JSON object."""
    try:
        dim = data["dim"]
        left, right = data["left"], data["right"]
    except (KeyError, TypeError) as exc:
        raise InputError("bimodule JSON needs 'dim', 'left' and 'right'") from exc
    if not isinstance(dim, int) or dim < 0:
        raise InputError(f"bad bimodule dimension {dim!r}")

    def mats(items):
        out = []
        for rows in items:
            if len(rows) != dim or any(len(r) != dim for r in rows):
                raise InputError(f"action matrices must be {dim}x{dim}")
            out.append(Matrix(dim, dim, tuple(to_rational(x) for r in rows for x in r)))
        return tuple(out)

    return Bimodule(p, dim, mats(left), mats(right), label)


def bimodule_to_json(m: Bimodule) -> dict:
    from .serialize import matrix_to_json
    return {"dim": m.dim,
            "left": [matrix_to_json(a) for a in m.left],
            "right": [matrix_to_json(a) for a in m.right]}


def load_custom(path, p: BlockPartition) -> Bimodule:
    """Load a bimodule file and reject it unless every axiom holds."""
    path = Path(path)
    try:
        data = json.loads(path.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read bimodule file {path}: {exc}") from exc
    return require_axioms(bimodule_from_json(data, p, label=f"custom:{path.name}"))


# ---------------------------------------------------------------------------
# Corner compression
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class CornerCompression:
    """QMQ as a bimodule over T(tail).

    ``embed`` (dim x r) maps sub-coordinates into M; ``project`` (r x dim)
    maps v to the sub-coordinates of QvQ, so ``embed @ project`` is the
    idempotent v -> QvQ and ``project @ embed`` is the identity.
    """

    sub_bimodule: Bimodule
    embed: Matrix
    project: Matrix
    corner: Matrix   # v -> QvQ on M
    tail: BlockPartition


def compress_corner(m: Bimodule, p: Optional[BlockPartition] = None) -> CornerCompression:
    p = p or m.partition
    _, q, tail = pq_split(p)
    corner = m.left_matrix(q) @ m.right_matrix(q)
    info = rref(corner)
    r = info.rank
    embed = corner.select_columns(info.pivot_columns)
    project = info.reduced.select_rows(range(r))
    shift = shift_index(p)
    left = tuple(project @ m.left[a] @ embed for a in shift)
    right = tuple(project @ m.right[a] @ embed for a in shift)
    sub = Bimodule(tail, r, left, right, f"corner({m.label})")
    return CornerCompression(sub, embed, project, corner, tail)
