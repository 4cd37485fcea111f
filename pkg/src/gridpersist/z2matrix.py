"""Sparse matrices over Z2 and persistence with tracked column additions."""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

from gridpersist.alpha import FilteredComplex2D, Simplex, faces
from gridpersist.errors import InconsistencyError

logger = logging.getLogger(__name__)


@dataclass
class SparseZ2Matrix:
    """Column-sparse boolean matrix.

    Attributes:
        nrows: Number of rows
        columns: Row indices holding a one, per column

    Raises:
        ValueError: If a row index falls outside ``range(nrows)``
    """

    nrows: int
    columns: list[frozenset[int]] = field(default_factory=list)

    def __post_init__(self) -> None:
        self.columns = [frozenset(c) for c in self.columns]
        for j, col in enumerate(self.columns):
            if col and (min(col) < 0 or max(col) >= self.nrows):
                raise ValueError(
                    f"Column {j} has row indices outside 0..{self.nrows - 1}: {sorted(col)}"
                )

    @property
    def ncols(self) -> int:
        return len(self.columns)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> SparseZ2Matrix:
        return cls(nrows, [frozenset()] * ncols)

    @classmethod
    def identity(cls, n: int) -> SparseZ2Matrix:
        return cls(n, [frozenset({j}) for j in range(n)])

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence[int]]) -> SparseZ2Matrix:
        """Build from a row-major 0/1 table."""
        nrows = len(rows)
        ncols = len(rows[0]) if rows else 0
        return cls(
            nrows,
            [frozenset(i for i in range(nrows) if rows[i][j] % 2) for j in range(ncols)],
        )

    def to_dense(self) -> list[list[int]]:
        return [
            [1 if i in col else 0 for col in self.columns] for i in range(self.nrows)
        ]

    def column(self, j: int) -> tuple[int, ...]:
        """Sorted row indices of column ``j``."""
        return tuple(sorted(self.columns[j]))

    def low(self, j: int) -> int | None:
        col = self.columns[j]
        return max(col) if col else None

    def is_zero(self) -> bool:
        return not any(self.columns)

    def __matmul__(self, other: SparseZ2Matrix) -> SparseZ2Matrix:
        if self.ncols != other.nrows:
            raise ValueError(f"Cannot multiply {self.nrows}x{self.ncols} by {other.nrows}x{other.ncols}")
        out = []
        for col in other.columns:
            acc: set[int] = set()
            for k in col:
                acc ^= self.columns[k]
            out.append(frozenset(acc))
        return SparseZ2Matrix(self.nrows, out)

    def permuted(self, row_order: Sequence[int], col_order: Sequence[int]) -> SparseZ2Matrix:
        """Reindex so new row ``r`` is old row ``row_order[r]``, same for columns."""
        new_row = {old: new for new, old in enumerate(row_order)}
        return SparseZ2Matrix(
            len(row_order),
            [frozenset(new_row[i] for i in self.columns[j]) for j in col_order],
        )


@dataclass
class ReductionResult:
    """Output of the standard reduction.

    Attributes:
        reduced: Columns of R
        additions: Columns of V, with R = D V
        pivot_of_row: Column whose lowest one sits in each pivot row
    """

    nrows: int
    reduced: list[frozenset[int]]
    additions: list[frozenset[int]]
    pivot_of_row: dict[int, int]

    @property
    def r_matrix(self) -> SparseZ2Matrix:
        return SparseZ2Matrix(self.nrows, self.reduced)

    @property
    def v_matrix(self) -> SparseZ2Matrix:
        return SparseZ2Matrix(len(self.additions), self.additions)

    def low(self, j: int) -> int | None:
        col = self.reduced[j]
        return max(col) if col else None


def standard_reduce(matrix: SparseZ2Matrix) -> ReductionResult:
    """Left-to-right column reduction until all lowest ones are distinct."""
    reduced: list[frozenset[int]] = []
    additions: list[frozenset[int]] = []
    pivot_of_row: dict[int, int] = {}
    for j, col in enumerate(matrix.columns):
        r = set(col)
        v = {j}
        while r:
            low = max(r)
            k = pivot_of_row.get(low)
            if k is None:
                break
            r ^= reduced[k]
            v ^= additions[k]
        if r:
            pivot_of_row[max(r)] = j
        reduced.append(frozenset(r))
        additions.append(frozenset(v))
    return ReductionResult(matrix.nrows, reduced, additions, pivot_of_row)


@dataclass(frozen=True)
class Generator:
    """One interval of a complex's persistent homology with its cycle.

    Attributes:
        dim: Homology dimension
        index: Position in the complex's generator list for ``dim``
        birth_simplex: Positive simplex creating the class
        death_simplex: Simplex killing it, None for an infinite bar
        birth: Filtration value of the birth simplex
        death: Filtration value of the death simplex or infinity
        cycle: Representative as a set of ``dim``-simplices
    """

    dim: int
    index: int
    birth_simplex: Simplex
    death_simplex: Simplex | None
    birth: float
    death: float
    cycle: frozenset[Simplex]

    @property
    def is_empty(self) -> bool:
        return self.birth == self.death


@dataclass(frozen=True)
class PersistencePair:
    birth_index: int
    death_index: int | None
    birth: float
    death: float


class PersistenceData:
    """Persistence of a filtered complex in dimensions 0 and 1.

    Holds the reductions of both boundary matrices, so cycles can be written
    in the barcode basis and boundaries can be lifted to chains.

    Args:
        fc: Filtered complex with monotone values
    """

    def __init__(self, fc: FilteredComplex2D):
        self.complex = fc
        self.simplices: dict[int, list[Simplex]] = {d: fc.simplices(d) for d in range(3)}
        self.position: dict[int, dict[Simplex, int]] = {
            d: {s: k for k, s in enumerate(ss)} for d, ss in self.simplices.items()
        }
        self.reductions: dict[int, ReductionResult] = {
            d: standard_reduce(self.boundary_matrix(d)) for d in (1, 2)
        }
        self.generators: dict[int, list[Generator]] = {}
        self._cycles: dict[int, list[frozenset[int]]] = {}
        self._by_low: dict[int, dict[int, int]] = {}
        for q in (0, 1):
            self._collect(q)

    def value(self, dim: int, pos: int) -> float:
        return self.complex.values[self.simplices[dim][pos]]

    def boundary_matrix(self, dim: int) -> SparseZ2Matrix:
        """Boundary of ``dim``-simplices with rows in filtration order."""
        rows = self.position[dim - 1]
        return SparseZ2Matrix(
            len(rows),
            [frozenset(rows[f] for f in faces(s)) for s in self.simplices[dim]],
        )

    def _collect(self, q: int) -> None:
        upper = self.reductions[q + 1]
        lower = self.reductions.get(q)
        gens: list[Generator] = []
        cycles: list[frozenset[int]] = []
        by_low: dict[int, int] = {}
        for p, simplex in enumerate(self.simplices[q]):
            if lower is not None and lower.reduced[p]:
                continue
            killer = upper.pivot_of_row.get(p)
            if killer is None:
                cycle = lower.additions[p] if lower is not None else frozenset({p})
                death = math.inf
                death_simplex = None
            else:
                cycle = upper.reduced[killer]
                death_simplex = self.simplices[q + 1][killer]
                death = self.complex.values[death_simplex]
            index = len(gens)
            by_low[p] = index
            cycles.append(cycle)
            gens.append(
                Generator(
                    dim=q,
                    index=index,
                    birth_simplex=simplex,
                    death_simplex=death_simplex,
                    birth=self.complex.values[simplex],
                    death=death,
                    cycle=frozenset(self.simplices[q][k] for k in cycle),
                )
            )
        self.generators[q] = gens
        self._cycles[q] = cycles
        self._by_low[q] = by_low

    def pairs(self, dim: int) -> list[PersistencePair]:
        out = []
        for g in self.generators[dim]:
            death_index = (
                None
                if g.death_simplex is None
                else self.position[dim + 1][g.death_simplex]
            )
            out.append(
                PersistencePair(
                    self.position[dim][g.birth_simplex], death_index, g.birth, g.death
                )
            )
        return out

    def to_positions(self, dim: int, chain: Iterable[Simplex]) -> set[int]:
        """Positions of a chain's simplices.

        Raises:
            InconsistencyError: If a simplex is not part of the complex
        """
        index = self.position[dim]
        out: set[int] = set()
        for s in chain:
            k = index.get(s)
            if k is None:
                raise InconsistencyError(f"Simplex {s} is not in this complex")
            out ^= {k}
        return out

    def boundary(self, dim: int, chain: Iterable[Simplex]) -> frozenset[Simplex]:
        """Z2 boundary of a chain of ``dim``-simplices."""
        out: set[Simplex] = set()
        for s in chain:
            for f in faces(s):
                out ^= {f}
        return frozenset(out)

    def cycle_coordinates(self, dim: int, chain: Iterable[Simplex], t: float) -> frozenset[int]:
        """Indices of the generators alive at ``t`` whose sum is homologous to ``chain``.

        Raises:
            InconsistencyError: If ``chain`` is not a cycle of the complex at ``t``
        """
        c = self.to_positions(dim, chain)
        cycles = self._cycles[dim]
        by_low = self._by_low[dim]
        gens = self.generators[dim]
        coords: set[int] = set()
        while c:
            low = max(c)
            g = by_low.get(low)
            if g is None or gens[g].birth > t:
                raise InconsistencyError(
                    f"Chain is not a {dim}-cycle at {t}: stuck at {self.simplices[dim][low]}"
                )
            if t < gens[g].death:
                coords.add(g)
            c ^= cycles[g]
        return frozenset(coords)

    def solve_chain(self, dim: int, z: Iterable[Simplex], t: float) -> frozenset[Simplex] | None:
        """A ``dim + 1``-chain with values at most ``t`` whose boundary is ``z``.

        Returns:
            The chain, or None if ``z`` is not a boundary at ``t``

        Raises:
            ValueError: If ``z`` is not a cycle
        """
        z = list(z)
        if dim > 0 and self.boundary(dim, z):
            raise ValueError(f"Target chain is not a {dim}-cycle")
        red = self.reductions[dim + 1]
        upper = self.simplices[dim + 1]
        c = self.to_positions(dim, z)
        a: set[int] = set()
        while c:
            j = red.pivot_of_row.get(max(c))
            if j is None or self.complex.values[upper[j]] > t:
                return None
            c ^= red.reduced[j]
            a ^= red.additions[j]
        return frozenset(upper[k] for k in a)


def persistence_with_representatives(fc: FilteredComplex2D) -> PersistenceData:
    """Persistent homology with representatives in dimensions 0 and 1."""
    data = PersistenceData(fc)
    logger.debug(
        "Reduced complex of %d simplices: %d dim-0 and %d dim-1 generators",
        len(fc),
        len(data.generators[0]),
        len(data.generators[1]),
    )
    return data
