"""Linear maps T -> M and the spaces of derivation-type maps.

A :class:`LinearMap` stores the image of every canonical basis element.
Four kinds of map are recognised:

``derivation``            D(ab) = D(a)b + aD(b)
``antiderivation``        D(ab) = D(b)a + bD(a)
``antiderivation_diag0``  an antiderivation vanishing on the block diagonal
``jordan``                D(ab + ba) = D(a)b + aD(b) + D(b)a + bD(a)

All identities are bilinear, so checking them on ordered pairs of basis
elements is enough.  :func:`is_kind` evaluates them directly;
:func:`constraint_matrix` linearises the same identities so that the spaces
can be computed as nullspaces.  The two routes are kept separate on purpose
and tested against each other.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .algebra import (AlgebraElement, Bimodule, BlockPartition, CornerCompression,
                      canonical_basis, diagonal_basis, shift_index)
from .errors import InputError, NotJordan, TheoremViolation
from .exact_linalg import (ZERO, Matrix, SparseMatrix, SpanSolver, combine, nullspace,
                           rank, to_rational)
from .rng import XorShift64Star

KINDS = ("derivation", "antiderivation", "antiderivation_diag0", "jordan")
SAMPLE_RANGE = (-9, 9)


def _check_kind(kind: str) -> str:
    if kind not in KINDS:
        raise InputError(f"unknown kind {kind!r}; choose from {', '.join(KINDS)}")
    return kind


@dataclass(frozen=True, eq=False)
class LinearMap:
    bimodule: Bimodule
    images: tuple

    def __post_init__(self):
        size = len(canonical_basis(self.bimodule.partition))
        if len(self.images) != size:
            raise InputError(f"{len(self.images)} images for a basis of size {size}")
        imgs = []
        for v in self.images:
            if len(v) != self.bimodule.dim:
                raise InputError(f"image of length {len(v)} in a module of dim {self.bimodule.dim}")
            imgs.append(tuple(to_rational(x) for x in v))
        object.__setattr__(self, "images", tuple(imgs))

    @property
    def partition(self) -> BlockPartition:
        return self.bimodule.partition

    @classmethod
    def zero(cls, m: Bimodule) -> "LinearMap":
        size = len(canonical_basis(m.partition))
        return cls(m, ((ZERO,) * m.dim,) * size)

    @classmethod
    def from_coords(cls, m: Bimodule, coords: Sequence) -> "LinearMap":
        d = m.dim
        size = len(canonical_basis(m.partition))
        if len(coords) != size * d:
            raise InputError(f"{len(coords)} coordinates for {size * d} unknowns")
        return cls(m, tuple(tuple(coords[a * d:(a + 1) * d]) for a in range(size)))

    @property
    def coords(self) -> tuple:
        return tuple(x for v in self.images for x in v)

    def _compatible(self, other: "LinearMap"):
        if (other.partition != self.partition or other.bimodule.dim != self.bimodule.dim):
            raise InputError("maps into different bimodules")

    def __add__(self, other: "LinearMap") -> "LinearMap":
        self._compatible(other)
        return LinearMap(self.bimodule, tuple(tuple(x + y for x, y in zip(u, v))
                                              for u, v in zip(self.images, other.images)))

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        self._compatible(other)
        return LinearMap(self.bimodule, tuple(tuple(x - y for x, y in zip(u, v))
                                              for u, v in zip(self.images, other.images)))

    def __neg__(self) -> "LinearMap":
        return self.scale(-1)

    def scale(self, c) -> "LinearMap":
        c = to_rational(c)
        return LinearMap(self.bimodule, tuple(tuple(c * x for x in v) for v in self.images))

    def __eq__(self, other):
        if not isinstance(other, LinearMap):
            return NotImplemented
        return (self.partition == other.partition and self.bimodule.dim == other.bimodule.dim
                and self.images == other.images)

    __hash__ = None

    def is_zero(self) -> bool:
        return not any(x for v in self.images for x in v)


@dataclass(frozen=True)
class SpaceBasis:
    kind: str
    bimodule: Bimodule
    maps: tuple

    @property
    def dim(self) -> int:
        return len(self.maps)


@dataclass(frozen=True)
class DecompositionPair:
    d: LinearMap
    alpha: LinearMap

    def invariant_failures(self, original: Optional[LinearMap] = None) -> list:
        """Labels of every violated invariant (empty when all hold)."""
        out = []
        if not is_kind(self.d, "derivation"):
            out.append("d is not a derivation")
        if not is_kind(self.alpha, "antiderivation"):
            out.append("alpha is not an antiderivation")
        if not vanishes_on_diagonal(self.alpha):
            out.append("alpha does not vanish on the diagonal subalgebra")
        if original is not None and self.d + self.alpha != original:
            out.append("d + alpha differs from the input map")
        return out


# ---------------------------------------------------------------------------
# Evaluation and predicates
# ---------------------------------------------------------------------------

def apply(f: LinearMap, x) -> tuple:
    """f(x) by linearity; ``x`` is an AlgebraElement or an n x n Matrix."""
    if isinstance(x, Matrix):
        x = AlgebraElement(f.partition, x)
    if not isinstance(x, AlgebraElement) or x.partition != f.partition:
        raise InputError("element is not in the map's domain")
    return combine(x.coords, f.images, f.bimodule.dim)


def inner_derivation(m: Bimodule, v: Sequence) -> LinearMap:
    """I_v(a) = a.v - v.a."""
    if len(v) != m.dim:
        raise InputError(f"element of length {len(v)} in a module of dim {m.dim}")
    v = tuple(to_rational(x) for x in v)
    size = len(canonical_basis(m.partition))
    return LinearMap(m, tuple(
        tuple(x - y for x, y in zip(m.left_basis(a, v), m.right_basis(a, v)))
        for a in range(size)))


@dataclass(frozen=True)
class KindCheck:
    kind: str
    ok: bool
    witness: Optional[tuple] = None   # first failing ordered basis pair
    reason: str = ""

    def __bool__(self):
        return self.ok


def _sub(u, v):
    return tuple(x - y for x, y in zip(u, v))


def _add(u, v):
    return tuple(x + y for x, y in zip(u, v))


def is_kind(f: LinearMap, kind: str) -> KindCheck:
    """Check the defining identity of ``kind`` on every ordered basis pair."""
    _check_kind(kind)
    m = f.bimodule
    basis = canonical_basis(f.partition)
    prod = basis.products
    imgs = f.images
    zero = (ZERO,) * m.dim
    size = len(basis)
    L, R = m.left_basis, m.right_basis
    if kind == "antiderivation_diag0":
        for a in diagonal_basis(f.partition):
            if any(imgs[a]):
                pair = basis.pairs[a]
                return KindCheck(kind, False, (pair, pair), "nonzero on the diagonal subalgebra")
        kind_check = is_kind(f, "antiderivation")
        return KindCheck(kind, kind_check.ok, kind_check.witness, kind_check.reason)
    for a in range(size):
        fa = imgs[a]
        for b in range(size):
            fb = imgs[b]
            c = prod[a][b]
            f_ab = imgs[c] if c is not None else zero
            if kind == "derivation":
                lhs, rhs = f_ab, _add(R(b, fa), L(a, fb))
            elif kind == "antiderivation":
                lhs, rhs = f_ab, _add(R(a, fb), L(b, fa))
            else:
                c2 = prod[b][a]
                lhs = _add(f_ab, imgs[c2] if c2 is not None else zero)
                rhs = _add(_add(R(b, fa), L(a, fb)), _add(R(a, fb), L(b, fa)))
            if lhs != rhs:
                return KindCheck(kind, False, (basis.pairs[a], basis.pairs[b]),
                                 "identity fails")
    return KindCheck(kind, True)


def vanishes_on_diagonal(f: LinearMap) -> bool:
    return not any(any(f.images[a]) for a in diagonal_basis(f.partition))


# ---------------------------------------------------------------------------
# Constraint systems and spaces
# ---------------------------------------------------------------------------

def constraint_matrix(kind: str, m: Bimodule, p: Optional[BlockPartition] = None) -> SparseMatrix:
    """Linear system whose nullspace is the coordinate space of ``kind``.

    Unknown ``a * dim + r`` is coordinate r of the image of basis element a.
    One block of ``dim`` rows per ordered basis pair (pair-major,
    coordinate-minor); for ``antiderivation_diag0`` the antiderivation
    system is followed by rows pinning the diagonal images to zero.
    """
    _check_kind(kind)
    if p is not None and p != m.partition:
        raise InputError(f"partition {p} does not match the bimodule's {m.partition}")
    p = m.partition
    basis = canonical_basis(p)
    prod = basis.products
    size, d = len(basis), m.dim
    left = [mat.sparse_rows for mat in m.left]
    right = [mat.sparse_rows for mat in m.right]
    identity_kind = "antiderivation" if kind == "antiderivation_diag0" else kind

    def sub_action(row: dict, rows, target: int, r: int):
        # row -= (action) * f(target), coordinate r
        base = target * d
        for s, x in rows[r]:
            key = base + s
            row[key] = row.get(key, 0) - x

    out = []
    for a in range(size):
        for b in range(size):
            c, c2 = prod[a][b], prod[b][a]
            for r in range(d):
                row: dict = {}
                if c is not None:
                    row[c * d + r] = row.get(c * d + r, 0) + 1
                if identity_kind == "derivation":
                    sub_action(row, right[b], a, r)
                    sub_action(row, left[a], b, r)
                elif identity_kind == "antiderivation":
                    sub_action(row, right[a], b, r)
                    sub_action(row, left[b], a, r)
                else:
                    if c2 is not None:
                        row[c2 * d + r] = row.get(c2 * d + r, 0) + 1
                    sub_action(row, right[b], a, r)
                    sub_action(row, left[a], b, r)
                    sub_action(row, right[a], b, r)
                    sub_action(row, left[b], a, r)
                out.append(row)
    if kind == "antiderivation_diag0":
        for a in diagonal_basis(p):
            for r in range(d):
                out.append({a * d + r: 1})
    return SparseMatrix.from_dicts(out, size * d)


def space_basis(kind: str, m: Bimodule) -> SpaceBasis:
    vectors = nullspace(constraint_matrix(kind, m))
    return SpaceBasis(kind, m, tuple(LinearMap.from_coords(m, v) for v in vectors))


def space_dimension(kind: str, m: Bimodule, modulus: Optional[int] = None) -> int:
    a = constraint_matrix(kind, m)
    return a.cols - rank(a, modulus=modulus)


@dataclass(frozen=True)
class DimsReport:
    jordan: int
    derivation: int
    antiderivation_diag0: int
    direct_sum_ok: bool
    modulus: Optional[int] = None

    def as_dict(self) -> dict:
        out = {"jordan": self.jordan, "derivation": self.derivation,
               "antiderivation_diag0": self.antiderivation_diag0,
               "direct_sum_ok": self.direct_sum_ok}
        if self.modulus is not None:
            out["modulus"] = self.modulus
        return out


def dims_report(m: Bimodule, modulus: Optional[int] = None, spaces: Optional[dict] = None) -> DimsReport:
    """Dimensions of Jordan, Der and Antider_0 and the direct-sum check.

    ``direct_sum_ok`` requires dim Jordan = dim Der + dim Antider_0 and the
    concatenated Der and Antider_0 bases to be independent.  With
    ``modulus`` everything is computed over F_p.
    """
    if spaces is None:
        spaces = {}
    bases = {}
    for kind in ("jordan", "derivation", "antiderivation_diag0"):
        if kind in spaces:
            bases[kind] = [f.coords for f in spaces[kind].maps]
        else:
            bases[kind] = nullspace(constraint_matrix(kind, m), modulus=modulus)
    dj, dd, da = (len(bases[k]) for k in ("jordan", "derivation", "antiderivation_diag0"))
    stacked = bases["derivation"] + bases["antiderivation_diag0"]
    ncols = len(canonical_basis(m.partition)) * m.dim
    independent = (not stacked) or rank(
        SparseMatrix.from_dicts(({j: x for j, x in enumerate(v) if x} for v in stacked), ncols),
        modulus=modulus) == len(stacked)
    return DimsReport(dj, dd, da, dj == dd + da and independent, modulus)


# ---------------------------------------------------------------------------
# Sampling
# ---------------------------------------------------------------------------

def sample_maps(space: SpaceBasis, seed: int = 0, count: int = 1) -> list:
    """``count`` random members of ``space``.

    Coefficients on the basis maps are integers drawn uniformly from
    [-9, 9], consumed in basis order from one xorshift64* stream.
    """
    rng = XorShift64Star(seed)
    m = space.bimodule
    vectors = [f.coords for f in space.maps]
    length = len(canonical_basis(m.partition)) * m.dim
    out = []
    for _ in range(count):
        coeffs = [rng.randint(*SAMPLE_RANGE) for _ in vectors]
        out.append(LinearMap.from_coords(m, combine(coeffs, vectors, length)))
    return out


def sample_map(space: SpaceBasis, seed: int = 0) -> LinearMap:
    return sample_maps(space, seed, 1)[0]


# ---------------------------------------------------------------------------
# Corner restriction and the projection oracle
# ---------------------------------------------------------------------------

def restrict_corner_map(f: LinearMap, cc: CornerCompression) -> LinearMap:
    """The map T(tail) -> QMQ, X' -> Q f(shift X') Q, in sub-coordinates."""
    shift = shift_index(f.partition)
    return LinearMap(cc.sub_bimodule, tuple(cc.project.apply(f.images[a]) for a in shift))


class ProjectionOracle:
    """Decomposes Jordan maps by solving in the basis Der + Antider_0.

    Independent of the recursive construction in :mod:`jordec.decompose`:
    it only uses the nullspace bases and a linear solve.
    """

    def __init__(self, m: Bimodule, spaces: Optional[dict] = None):
        spaces = spaces or {}
        self.bimodule = m
        self.der = spaces.get("derivation") or space_basis("derivation", m)
        self.antider0 = spaces.get("antiderivation_diag0") or space_basis("antiderivation_diag0", m)
        try:
            self._solver = SpanSolver([f.coords for f in self.der.maps + self.antider0.maps])
        except InputError as exc:
            raise TheoremViolation("uniqueness", "Der and Antider_0 intersect nontrivially") from exc

    def decompose(self, f: LinearMap) -> DecompositionPair:
        check = is_kind(f, "jordan")
        if not check:
            raise NotJordan(f"map is not a Jordan derivation (pair {check.witness})", check.witness)
        coords = self._solver.solve(f.coords)
        if coords is None:
            raise TheoremViolation("existence", "Jordan map outside Der + Antider_0")
        nd = self.der.dim
        length = len(f.coords)
        d = combine(coords[:nd], [g.coords for g in self.der.maps], length)
        a = combine(coords[nd:], [g.coords for g in self.antider0.maps], length)
        m = self.bimodule
        return DecompositionPair(LinearMap.from_coords(m, d), LinearMap.from_coords(m, a))


def project_decompose_oracle(f: LinearMap, oracle: Optional[ProjectionOracle] = None) -> DecompositionPair:
    return (oracle or ProjectionOracle(f.bimodule)).decompose(f)
