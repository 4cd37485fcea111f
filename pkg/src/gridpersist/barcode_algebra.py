"""Barcode bases, persistence morphism matrices, images, kernels and quotients."""

from __future__ import annotations

import logging
import math
from collections.abc import Hashable, Sequence
from dataclasses import dataclass, field, replace
from typing import Literal

from gridpersist.errors import InconsistencyError
from gridpersist.z2matrix import Generator, PersistenceData, SparseZ2Matrix

logger = logging.getLogger(__name__)

BasisOrder = Literal["standard", "endpoint", "unordered"]


@dataclass(frozen=True)
class Interval:
    """Half-open interval ``[birth, death)``; ``death`` may be infinite.

    Raises:
        ValueError: If ``death < birth``
    """

    birth: float
    death: float = math.inf

    def __post_init__(self) -> None:
        if self.death < self.birth:
            raise ValueError(f"Interval death {self.death} precedes birth {self.birth}")

    @property
    def is_empty(self) -> bool:
        return self.birth == self.death

    @property
    def is_infinite(self) -> bool:
        return math.isinf(self.death)

    def contains(self, t: float) -> bool:
        return self.birth <= t < self.death

    def __str__(self) -> str:
        return f"[{self.birth!r}, {self.death!r})"


def standard_key(interval: Interval) -> tuple[float, float]:
    return (interval.birth, -interval.death)


def endpoint_key(interval: Interval) -> tuple[float, float]:
    return (interval.death, interval.birth)


@dataclass(frozen=True)
class BasisElement:
    """Generator of a barcode basis.

    Attributes:
        key: Globally unique id of the generator
        interval: Where the generator is nonzero
        coords: Coordinates in an ambient basis, as a set of ambient indices
    """

    key: Hashable
    interval: Interval
    coords: frozenset[int] = frozenset()


@dataclass
class BarcodeBasis:
    """Ordered list of generators with an order tag."""

    elements: list[BasisElement] = field(default_factory=list)
    order: BasisOrder = "unordered"

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):  # type: ignore[no-untyped-def]
        return iter(self.elements)

    @property
    def intervals(self) -> list[Interval]:
        return [e.interval for e in self.elements]

    def nonempty(self) -> BarcodeBasis:
        return BarcodeBasis([e for e in self.elements if not e.interval.is_empty], self.order)


def order_permutation(intervals: Sequence[Interval], order: BasisOrder) -> list[int]:
    """Stable sort permutation, ``perm[new] = old``, ties kept by input position."""
    if order == "unordered":
        return list(range(len(intervals)))
    key = standard_key if order == "standard" else endpoint_key
    return sorted(range(len(intervals)), key=lambda i: (*key(intervals[i]), i))


def permutation_matrix(perm: Sequence[int]) -> SparseZ2Matrix:
    """Matrix sending old position ``perm[new]`` to ``new``."""
    n = len(perm)
    columns: list[frozenset[int]] = [frozenset()] * n
    for new, old in enumerate(perm):
        columns[old] = frozenset({new})
    return SparseZ2Matrix(n, columns)


def sort_basis(basis: BarcodeBasis, order: BasisOrder) -> tuple[BarcodeBasis, list[int]]:
    """Sort a basis and return the permutation used, ``perm[new] = old``."""
    perm = order_permutation(basis.intervals, order)
    return BarcodeBasis([basis.elements[i] for i in perm], order), perm


@dataclass(frozen=True)
class PersistenceVector:
    """A persistence vector given by coordinates over an interval."""

    interval: Interval
    coords: frozenset[int]


def barcode_sum(v1: PersistenceVector, v2: PersistenceVector) -> PersistenceVector:
    """Coordinatewise sum over the overlap of the two intervals."""
    birth = max(v1.interval.birth, v2.interval.birth)
    death = max(birth, min(v1.interval.death, v2.interval.death))
    return PersistenceVector(Interval(birth, death), v1.coords ^ v2.coords)


def cutoff(s: float, v: PersistenceVector) -> PersistenceVector:
    """Restrict ``v`` to values at least ``s``."""
    birth = min(max(s, v.interval.birth), v.interval.death)
    return PersistenceVector(Interval(birth, v.interval.death), v.coords)


@dataclass
class PersistenceMorphismMatrix:
    """Matrix of a persistence morphism between two barcode bases.

    Rows index the codomain basis and columns the domain basis.

    Attributes:
        matrix: The Z2 entries
        rows: Codomain generators
        cols: Domain generators
    """

    matrix: SparseZ2Matrix
    rows: BarcodeBasis
    cols: BarcodeBasis

    def __post_init__(self) -> None:
        if self.matrix.nrows != len(self.rows) or self.matrix.ncols != len(self.cols):
            raise ValueError(
                f"Matrix is {self.matrix.nrows}x{self.matrix.ncols} but bases have "
                f"{len(self.rows)} rows and {len(self.cols)} columns"
            )

    def support_violations(self) -> list[tuple[int, int]]:
        """Entries breaking ``a_row <= a_col <= b_row <= b_col``."""
        bad = []
        for j, col in enumerate(self.matrix.columns):
            a = self.cols.elements[j].interval
            for i in col:
                b = self.rows.elements[i].interval
                if not (b.birth <= a.birth <= b.death <= a.death):
                    bad.append((i, j))
        return bad

    def sorted_for_reduction(self) -> PersistenceMorphismMatrix:
        """Columns in standard order and rows in endpoint order."""
        cols, col_perm = sort_basis(self.cols, "standard")
        rows, row_perm = sort_basis(self.rows, "endpoint")
        return PersistenceMorphismMatrix(self.matrix.permuted(row_perm, col_perm), rows, cols)


def associated_matrix(
    domain: Sequence[Generator],
    codomain: PersistenceData,
    dim: int,
    domain_keys: Sequence[Hashable] | None = None,
    codomain_keys: Sequence[Hashable] | None = None,
) -> PersistenceMorphismMatrix:
    """Matrix of the map induced by a subcomplex inclusion.

    Each domain representative is written in the codomain's barcode basis at
    the generator's birth value, reducing only by cycles and boundaries
    present by then. Empty codomain intervals never receive coordinates and
    are left out of the rows.

    Args:
        domain: Nonempty generators of the subcomplex
        codomain: Persistence of the ambient complex
        dim: Homology dimension
        domain_keys: Ids for the columns; defaults to generator indices
        codomain_keys: Ids for the codomain generators, indexed like
            ``codomain.generators[dim]``

    Raises:
        InconsistencyError: If a representative does not reduce to zero
    """
    targets = [g for g in codomain.generators[dim] if not g.is_empty]
    row_of = {g.index: r for r, g in enumerate(targets)}
    ckeys = codomain_keys if codomain_keys is not None else [g.index for g in codomain.generators[dim]]
    dkeys = domain_keys if domain_keys is not None else [g.index for g in domain]
    columns = []
    for g in domain:
        coords = codomain.cycle_coordinates(dim, g.cycle, g.birth)
        columns.append(frozenset(row_of[c] for c in coords))
    rows = BarcodeBasis(
        [BasisElement(ckeys[g.index], Interval(g.birth, g.death)) for g in targets]
    )
    cols = BarcodeBasis(
        [BasisElement(k, Interval(g.birth, g.death)) for k, g in zip(dkeys, domain, strict=True)]
    )
    result = PersistenceMorphismMatrix(SparseZ2Matrix(len(targets), columns), rows, cols)
    bad = result.support_violations()
    if bad:
        raise InconsistencyError(f"Inclusion matrix breaks the support condition at {bad[:3]}")
    return result


@dataclass
class ImageKernel:
    """Image and kernel bases of a persistence morphism.

    Image coordinates are in the codomain row basis, kernel coordinates in the
    domain column basis, both indexed by position in the sorted matrix.
    """

    image: BarcodeBasis
    kernel: BarcodeBasis
    reduced: list[frozenset[int]]
    preimages: list[frozenset[int]]


def _prune(col: set[int], birth: float, deaths: Sequence[float]) -> None:
    for r in [r for r in col if deaths[r] <= birth]:
        col.discard(r)


def image_kernel(f: PersistenceMorphismMatrix) -> ImageKernel:
    """Barcode bases of the image and kernel of ``f``.

    Raises:
        ValueError: If columns are not in standard order or rows not in endpoint order
    """
    if f.cols.order != "standard" or f.rows.order != "endpoint":
        raise ValueError(
            f"image_kernel needs standard columns and endpoint rows, got "
            f"{f.cols.order} columns and {f.rows.order} rows"
        )
    col_iv = f.cols.intervals
    row_deaths = [iv.death for iv in f.rows.intervals]
    col_deaths = [iv.death for iv in col_iv]

    reduced: list[frozenset[int]] = []
    preimages: list[frozenset[int]] = []
    pivot_col: dict[int, int] = {}
    image: list[BasisElement] = []
    candidates: list[tuple[float, int, set[int]]] = []
    for k, column in enumerate(f.matrix.columns):
        a_k = col_iv[k].birth
        r = set(column)
        v = {k}
        _prune(r, a_k, row_deaths)
        while r:
            j = pivot_col.get(max(r))
            if j is None:
                break
            r ^= reduced[j]
            v ^= preimages[j]
            _prune(r, a_k, row_deaths)
        reduced.append(frozenset(r))
        preimages.append(frozenset(v))
        if r:
            low = max(r)
            pivot_col[low] = k
            image.append(
                BasisElement(f.cols.elements[k].key, Interval(a_k, row_deaths[low]), frozenset(r))
            )
            born = row_deaths[low]
        else:
            born = a_k
        live = set(v)
        _prune(live, born, col_deaths)
        if live:
            candidates.append((born, k, live))

    # Kernel: reduce the candidate preimages with columns in standard order
    # and domain rows in endpoint order.
    row_order = order_permutation(col_iv, "endpoint")
    rank = {old: new for new, old in enumerate(row_order)}
    candidates.sort(
        key=lambda c: (c[0], -max(col_deaths[i] for i in c[2]), c[1])
    )
    kernel: list[BasisElement] = []
    kept: list[set[int]] = []
    pivot_of: dict[int, int] = {}
    for born, k, live in candidates:
        col = {rank[i] for i in live}
        while col:
            j = pivot_of.get(max(col))
            if j is None:
                break
            col ^= kept[j]
            col = {r for r in col if col_deaths[row_order[r]] > born}
        kept.append(col)
        if col:
            low = max(col)
            pivot_of[low] = len(kept) - 1
            death = col_deaths[row_order[low]]
            kernel.append(
                BasisElement(
                    ("ker", f.cols.elements[k].key),
                    Interval(born, death),
                    frozenset(row_order[r] for r in col),
                )
            )
    logger.debug("Image of rank %d and kernel of size %d", len(image), len(kernel))
    return ImageKernel(
        BarcodeBasis(image, "unordered"),
        BarcodeBasis(kernel, "unordered"),
        reduced,
        preimages,
    )


@dataclass
class BoxGaussResult:
    """Outcome of the bottom-to-top quotient reduction.

    Attributes:
        reduced: Final columns
        births: Final birth value per column
        intervals: Quotient interval per trailing column, empty ones included
        representatives: Trailing-column combination behind each quotient
            generator, as indices into the trailing block
    """

    reduced: list[frozenset[int]]
    births: list[float]
    intervals: list[Interval]
    representatives: list[frozenset[int]]


def box_gauss_reduce(
    matrix: SparseZ2Matrix,
    births: Sequence[float],
    deaths: Sequence[float],
    trailing: int | None = None,
) -> BoxGaussResult:
    """Quotient barcode by sweeping rows from bottom to top.

    At each row the leftmost column whose lowest entry sits there is added to
    every other such column; the receiving column's birth becomes the larger
    of the two, and entries whose row dies by that birth are dropped.

    Args:
        matrix: Relation columns followed by the trailing generator columns,
            rows in endpoint order
        births: Birth value per column
        deaths: Death value per row
        trailing: Number of trailing columns to read intervals from;
            defaults to all columns

    Returns:
        The reduced block and one interval per trailing column
    """
    ncols = matrix.ncols
    if len(births) != ncols or len(deaths) != matrix.nrows:
        raise ValueError(
            f"Need {ncols} births and {matrix.nrows} deaths, got {len(births)} and {len(deaths)}"
        )
    trailing = ncols if trailing is None else trailing
    lbirths = list(births)
    cols = [set(c) for c in matrix.columns]
    adds = [{k} for k in range(ncols)]
    for k in range(ncols):
        _prune(cols[k], lbirths[k], deaths)

    for row in reversed(range(matrix.nrows)):
        owners = [k for k in range(ncols) if cols[k] and max(cols[k]) == row]
        if len(owners) < 2:
            continue
        pivot = owners[0]
        for k in owners[1:]:
            cols[k] ^= cols[pivot]
            adds[k] ^= adds[pivot]
            lbirths[k] = max(lbirths[k], lbirths[pivot])
            _prune(cols[k], lbirths[k], deaths)

    start = ncols - trailing
    intervals = []
    reps = []
    for k in range(start, ncols):
        end = deaths[max(cols[k])] if cols[k] else lbirths[k]
        intervals.append(Interval(births[k], max(births[k], end)))
        reps.append(frozenset(i - start for i in adds[k] if i >= start))
    return BoxGaussResult([frozenset(c) for c in cols], lbirths, intervals, reps)


def prune_at(coords: frozenset[int], t: float, deaths: Sequence[float]) -> frozenset[int]:
    """Drop coordinates whose generator has died by ``t``."""
    return frozenset(c for c in coords if deaths[c] > t)


def snapshot_solve(
    target: frozenset[int], vectors: Sequence[frozenset[int]]
) -> frozenset[int] | None:
    """Indices of ``vectors`` summing to ``target`` over Z2, or None.

    Plain Gaussian elimination at a single filtration value; callers prune
    the inputs to that value first. Dependent vectors are skipped.
    """
    pivots: dict[int, tuple[set[int], set[int]]] = {}
    for k, vector in enumerate(vectors):
        v = set(vector)
        combo = {k}
        while v and max(v) in pivots:
            pv, pc = pivots[max(v)]
            v ^= pv
            combo ^= pc
        if v:
            pivots[max(v)] = (v, combo)
    rest = set(target)
    used: set[int] = set()
    while rest:
        entry = pivots.get(max(rest))
        if entry is None:
            return None
        rest ^= entry[0]
        used ^= entry[1]
    return frozenset(used)


@dataclass(frozen=True)
class QuotientGenerator:
    """One trailing column of a quotient reduction.

    Attributes:
        source: Index of the generator the column started from
        interval: Its interval in the quotient, possibly empty
        combination: Generators summed into the column, as source indices
    """

    source: int
    interval: Interval
    combination: frozenset[int]


def quotient(
    generators: Sequence[BasisElement],
    relations: Sequence[BasisElement],
    deaths: Sequence[float],
) -> list[QuotientGenerator]:
    """Barcode of the span of ``generators`` modulo the span of ``relations``.

    Both lists carry coordinates in a common ambient basis whose death values
    are ``deaths``. Each relation is rewritten in the generators alive at its
    birth and the block ``(relations | Id)`` is reduced with
    :func:`box_gauss_reduce`.

    Raises:
        InconsistencyError: If a relation is not spanned by live generators
    """
    ivs = [g.interval for g in generators]
    row_order = order_permutation(ivs, "endpoint")
    row_of = {old: new for new, old in enumerate(row_order)}
    col_order = order_permutation(ivs, "standard")
    rel_order = order_permutation([r.interval for r in relations], "standard")

    columns: list[frozenset[int]] = []
    births: list[float] = []
    for k in rel_order:
        rel = relations[k]
        t = rel.interval.birth
        alive = [j for j, iv in enumerate(ivs) if iv.contains(t)]
        combo = snapshot_solve(
            prune_at(rel.coords, t, deaths),
            [prune_at(generators[j].coords, t, deaths) for j in alive],
        )
        if combo is None:
            raise InconsistencyError(f"Relation {rel.key} is not spanned at {t}")
        columns.append(frozenset(row_of[alive[c]] for c in combo))
        births.append(t)
    for j in col_order:
        columns.append(frozenset({row_of[j]}))
        births.append(ivs[j].birth)

    result = box_gauss_reduce(
        SparseZ2Matrix(len(generators), columns),
        births,
        [ivs[j].death for j in row_order],
        trailing=len(generators),
    )
    return [
        QuotientGenerator(
            col_order[t],
            result.intervals[t],
            frozenset(col_order[i] for i in result.representatives[t]),
        )
        for t in range(len(generators))
    ]


def rank_at(intervals: Sequence[Interval], t: float) -> int:
    """Number of intervals alive at ``t``."""
    return sum(1 for iv in intervals if iv.contains(t))


def with_order(basis: BarcodeBasis, order: BasisOrder) -> BarcodeBasis:
    """Tag a basis already known to be sorted."""
    return replace(basis, order=order)
