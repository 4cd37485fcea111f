"""Mayer-Vietoris spectral sequence of the grid cover, first two pages and extension."""

from __future__ import annotations

import logging
from collections.abc import Hashable, Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from itertools import combinations

from gridpersist.alpha import FilteredComplex2D, Simplex
from gridpersist.barcode_algebra import (
    BarcodeBasis,
    BasisElement,
    Interval,
    PersistenceMorphismMatrix,
    associated_matrix,
    box_gauss_reduce,
    image_kernel,
    order_permutation,
    prune_at,
    quotient,
    snapshot_solve,
    sort_basis,
)
from gridpersist.cover import NerveComplex, Zones
from gridpersist.errors import CollapseError, InconsistencyError, LiftError
from gridpersist.z2matrix import PersistenceData, SparseZ2Matrix, persistence_with_representatives

logger = logging.getLogger(__name__)

GenKey = tuple[Zones, int, int]

ROWS = (0, 1)
TOP_DEGREE = 2


def term_name(p: int, q: int) -> str:
    return f"E2[{p}][{q}]"


def local_barcode(sigma: Zones, data: PersistenceData, dim: int) -> list[BasisElement]:
    """Nonempty generators of one local persistent homology, keyed globally."""
    return [
        BasisElement((sigma, dim, g.index), Interval(g.birth, g.death))
        for g in data.generators[dim]
        if not g.is_empty
    ]


@dataclass
class InclusionBlock:
    """Block ``tau <- sigma`` of a first-page differential."""

    tau: Zones
    sigma: Zones
    dim: int
    matrix: PersistenceMorphismMatrix


def inclusion_block(
    tau: Zones, sigma: Zones, dim: int, tau_data: PersistenceData, sigma_data: PersistenceData
) -> InclusionBlock:
    """Matrix of ``PH(A(sigma)) -> PH(A(tau))`` for a nerve face ``tau`` of ``sigma``."""
    domain = [g for g in sigma_data.generators[dim] if not g.is_empty]
    matrix = associated_matrix(
        domain,
        tau_data,
        dim,
        domain_keys=[(sigma, dim, g.index) for g in domain],
        codomain_keys=[(tau, dim, g.index) for g in tau_data.generators[dim]],
    )
    return InclusionBlock(tau, sigma, dim, matrix)


@dataclass
class FirstPage:
    """Terms and differentials of the first page for some rows.

    Attributes:
        nerve: Nerve of the cover
        rows: Homology degrees held
        terms: Barcode basis of each ``(p, q)`` term, summands in nerve order
        differentials: Assembled ``d1`` matrices keyed by their domain ``(p, q)``
        local: Persistence of each intersection, when computed in-process
    """

    nerve: NerveComplex
    rows: tuple[int, ...]
    terms: dict[tuple[int, int], BarcodeBasis]
    differentials: dict[tuple[int, int], PersistenceMorphismMatrix]
    local: dict[Zones, PersistenceData] = field(default_factory=dict)

    def term(self, p: int, q: int) -> BarcodeBasis:
        return self.terms.get((p, q), BarcodeBasis())

    def position(self, p: int, q: int) -> dict[Hashable, int]:
        return {e.key: k for k, e in enumerate(self.term(p, q))}

    def deaths(self, p: int, q: int) -> list[float]:
        return [iv.death for iv in self.term(p, q).intervals]

    def differential(self, p: int, q: int) -> PersistenceMorphismMatrix:
        """``d1`` out of ``E1[p][q]``, zero when nothing was assembled."""
        if (p, q) in self.differentials:
            return self.differentials[(p, q)]
        rows, cols = self.term(p - 1, q), self.term(p, q)
        return PersistenceMorphismMatrix(SparseZ2Matrix.zeros(len(rows), len(cols)), rows, cols)


def assemble_first_page(
    nerve: NerveComplex,
    barcodes: Mapping[tuple[Zones, int], Sequence[BasisElement]],
    blocks: Iterable[InclusionBlock],
    rows: Sequence[int] = ROWS,
) -> FirstPage:
    """Stack local barcodes into terms and blocks into differentials.

    Block rows missing from the target term must be zero; such rows belong to
    withheld generators.

    Raises:
        InconsistencyError: If a block references a generator that is not shipped
    """
    rows = tuple(rows)
    terms: dict[tuple[int, int], BarcodeBasis] = {}
    for q in rows:
        for p in range(TOP_DEGREE + 1):
            elements = [e for sigma in nerve[p] for e in barcodes.get((sigma, q), ())]
            if elements:
                terms[(p, q)] = BarcodeBasis(elements)

    page = FirstPage(nerve, rows, terms, {})
    columns: dict[tuple[int, int], list[set[int]]] = {
        (p, q): [set() for _ in page.term(p, q)]
        for q in rows
        for p in range(1, TOP_DEGREE + 1)
    }
    positions = {key: page.position(*key) for key in terms}
    for block in blocks:
        p, q = len(block.sigma) - 1, block.dim
        if q not in rows or p < 1:
            continue
        col_pos = positions.get((p, q), {})
        row_pos = positions.get((p - 1, q), {})
        for j, col in enumerate(block.matrix.matrix.columns):
            key = block.matrix.cols.elements[j].key
            if key not in col_pos:
                raise InconsistencyError(f"Block {block.tau}<-{block.sigma} uses unknown column {key}")
            for i in col:
                row_key = block.matrix.rows.elements[i].key
                if row_key not in row_pos:
                    raise InconsistencyError(
                        f"Block {block.tau}<-{block.sigma} has a nonzero withheld row {row_key}"
                    )
                columns[(p, q)][col_pos[key]] ^= {row_pos[row_key]}
    for (p, q), cols in columns.items():
        target, source = page.term(p - 1, q), page.term(p, q)
        page.differentials[(p, q)] = PersistenceMorphismMatrix(
            SparseZ2Matrix(len(target), cols), target, source
        )
    return page


def nerve_faces(sigma: Zones) -> list[Zones]:
    return [tuple(f) for f in combinations(sigma, len(sigma) - 1)]


def first_page(
    nerve: NerveComplex,
    complexes: Mapping[Zones, FilteredComplex2D],
    rows: Sequence[int] = ROWS,
) -> FirstPage:
    """First page computed in one process from reconciled filtrations.

    Args:
        nerve: Nerve of the cover
        complexes: Filtration of ``A(sigma)`` for every nerve simplex
        rows: Homology degrees to assemble
    """
    local = {
        sigma: persistence_with_representatives(complexes[sigma])
        for p in range(TOP_DEGREE + 1)
        for sigma in nerve[p]
    }
    barcodes = {
        (sigma, q): local_barcode(sigma, data, q) for sigma, data in local.items() for q in rows
    }
    blocks = [
        inclusion_block(tau, sigma, q, local[tau], local[sigma])
        for q in rows
        for p in range(1, TOP_DEGREE + 1)
        for sigma in nerve[p]
        for tau in nerve_faces(sigma)
    ]
    page = assemble_first_page(nerve, barcodes, blocks, rows)
    page.local = local
    return page


def kernel_and_image(
    f: PersistenceMorphismMatrix,
) -> tuple[list[BasisElement], list[BasisElement]]:
    """Kernel in domain positions and image in codomain positions of ``f``."""
    if not f.cols.elements:
        return [], []
    cols, col_perm = sort_basis(f.cols, "standard")
    rows, row_perm = sort_basis(f.rows, "endpoint")
    ordered = PersistenceMorphismMatrix(f.matrix.permuted(row_perm, col_perm), rows, cols)
    result = image_kernel(ordered)
    kernel = [
        BasisElement(e.key, e.interval, frozenset(col_perm[c] for c in e.coords))
        for e in result.kernel
    ]
    image = [
        BasisElement(e.key, e.interval, frozenset(row_perm[r] for r in e.coords))
        for e in result.image
    ]
    return kernel, image


@dataclass
class E2Term:
    """One second-page term.

    Attributes:
        generators: Nonempty classes, coordinates in ``E1[p][q]`` positions
        kernel: Basis of ``Ker d1`` out of ``E1[p][q]``
        image: Basis of ``Im d1`` into ``E1[p][q]``
    """

    p: int
    q: int
    generators: list[BasisElement]
    kernel: list[BasisElement]
    image: list[BasisElement]

    @property
    def name(self) -> str:
        return term_name(self.p, self.q)

    @property
    def intervals(self) -> list[Interval]:
        return [g.interval for g in self.generators]


def e2_term(
    first: FirstPage,
    p: int,
    q: int,
    kernel: list[BasisElement],
    image: list[BasisElement],
) -> E2Term:
    """Quotient of ``kernel`` by ``image`` inside ``E1[p][q]``."""
    deaths = first.deaths(p, q)
    generators = []
    for g in quotient(kernel, image, deaths):
        if g.interval.is_empty:
            continue
        coords: frozenset[int] = frozenset()
        for k in g.combination:
            coords ^= kernel[k].coords
        generators.append(BasisElement((term_name(p, q), kernel[g.source].key), g.interval, coords))
    return E2Term(p, q, generators, kernel, image)


@dataclass
class SecondPage:
    """Second-page terms of the rows a coordinator holds.

    Attributes:
        terms: ``E2[p][q]`` for ``p`` in 0 and 1
        top_kernel: Basis of ``Ker d1`` out of ``E1[2][1]``, when row 1 is held
    """

    terms: dict[tuple[int, int], E2Term]
    top_kernel: list[BasisElement] = field(default_factory=list)

    def term(self, p: int, q: int) -> E2Term:
        return self.terms.get((p, q), E2Term(p, q, [], [], []))

    def barcodes(self) -> dict[str, list[Interval]]:
        return {t.name: t.intervals for _, t in sorted(self.terms.items())}


def second_page(first: FirstPage) -> SecondPage:
    """Second-page terms ``E2[0][q]`` and ``E2[1][q]`` for every row of ``first``."""
    terms: dict[tuple[int, int], E2Term] = {}
    top_kernel: list[BasisElement] = []
    for q in first.rows:
        split = {p: kernel_and_image(first.differential(p, q)) for p in (1, 2)}
        base = [
            BasisElement(e.key, e.interval, frozenset({k}))
            for k, e in enumerate(first.term(0, q))
        ]
        terms[(0, q)] = e2_term(first, 0, q, base, split[1][1])
        terms[(1, q)] = e2_term(first, 1, q, split[1][0], split[2][1])
        if q == 1:
            top_kernel = split[2][0]
        logger.debug(
            "Row %d: E2[0] has %d bars, E2[1] has %d bars",
            q,
            len(terms[(0, q)].generators),
            len(terms[(1, q)].generators),
        )
    return SecondPage(terms, top_kernel)


def collapse_check(
    second: SecondPage, withheld_infinite: Sequence[BasisElement] = ()
) -> None:
    """Reject a page whose row-1 terms or top kernel carry infinite bars.

    Args:
        second: Page holding row 1
        withheld_infinite: Infinite generators of ``E1[0][1]`` kept out of the page

    Raises:
        CollapseError: Naming the first offending term and bar
    """
    partial = second.barcodes()
    candidates: list[tuple[str, Sequence[BasisElement]]] = [
        (term_name(0, 1), [*second.term(0, 1).generators, *withheld_infinite]),
        (term_name(1, 1), second.term(1, 1).generators),
        ("Ker d1[2][1]", second.top_kernel),
    ]
    for name, generators in candidates:
        for g in generators:
            if g.interval.is_infinite:
                logger.error("Collapse check failed on %s at %s", name, g.interval)
                raise CollapseError(name, g.interval, partial)
    logger.debug("Collapse check passed")


@dataclass(frozen=True)
class LiftRequest:
    """What a worker needs to lift one ``E2[1][0]`` class.

    Attributes:
        key: Key of the class
        birth: Birth value ``a``
        death: Death value ``b``
        chains: Representative, as ``PH_0`` generator indices per nerve edge
        correction: ``E1[2][0]`` chain making the representative vanish at ``b``,
            as ``PH_0`` generator indices per nerve triangle
    """

    key: Hashable
    birth: float
    death: float
    chains: Mapping[Zones, frozenset[int]]
    correction: Mapping[Zones, frozenset[int]]

    def restricted(self, zone: int) -> LiftRequest:
        """Only the summands a zone's worker takes part in."""
        return LiftRequest(
            self.key,
            self.birth,
            self.death,
            {s: c for s, c in self.chains.items() if zone in s},
            {s: c for s, c in self.correction.items() if zone in s},
        )


def _group(keys: Iterable[Hashable]) -> dict[Zones, frozenset[int]]:
    grouped: dict[Zones, set[int]] = {}
    for sigma, _, index in keys:  # type: ignore[misc]
        grouped.setdefault(sigma, set()).add(index)
    return {s: frozenset(v) for s, v in sorted(grouped.items())}


def lift_requests(first: FirstPage, second: SecondPage) -> list[LiftRequest]:
    """Representatives of the finite ``E2[1][0]`` classes, ready to lift.

    The correction term is found at the death value, so that the shipped
    representative itself vanishes in every double intersection there.

    Raises:
        LiftError: If a class does not die in the image of ``d1`` out of ``E1[2][0]``
    """
    e1, e2 = first.term(1, 0), first.term(2, 0)
    d = first.differential(2, 0)
    deaths = first.deaths(1, 0)
    requests = []
    for alpha in second.term(1, 0).generators:
        if alpha.interval.is_infinite:
            continue
        b = alpha.interval.death
        alive = [k for k, e in enumerate(e2) if e.interval.contains(b)]
        combo = snapshot_solve(
            prune_at(alpha.coords, b, deaths),
            [prune_at(d.matrix.columns[k], b, deaths) for k in alive],
        )
        if combo is None:
            raise LiftError(f"Class {alpha.key} does not vanish at its death {b}")
        requests.append(
            LiftRequest(
                alpha.key,
                alpha.interval.birth,
                b,
                _group(e1.elements[k].key for k in sorted(alpha.coords)),
                _group(e2.elements[alive[c]].key for c in sorted(combo)),
            )
        )
    return requests


def _zero_chain(data: PersistenceData, indices: Iterable[int]) -> set[Simplex]:
    chain: set[Simplex] = set()
    for k in indices:
        chain ^= data.generators[0][k].cycle
    return chain


def lift_for_zone(
    zone: int, requests: Iterable[LiftRequest], local: Mapping[Zones, PersistenceData]
) -> dict[Hashable, frozenset[GenKey]]:
    """Extended cycle of each request, in coordinates of ``PH_1(A_zone)``.

    Args:
        zone: The lifting zone
        requests: Requests restricted to the zone
        local: Persistence of every intersection containing the zone

    Raises:
        LiftError: If a chain cannot be lifted within the filtration bounds
    """
    own = local[(zone,)]
    out: dict[Hashable, frozenset[GenKey]] = {}
    for req in requests:
        w1: dict[Zones, set[Simplex]] = {}
        for sigma, indices in req.chains.items():
            w1.setdefault(sigma, set()).symmetric_difference_update(_zero_chain(local[sigma], indices))
        for rho, indices in req.correction.items():
            chain = _zero_chain(local[rho], indices)
            for sigma in nerve_faces(rho):
                if zone in sigma:
                    w1.setdefault(sigma, set()).symmetric_difference_update(chain)
        spread: set[Simplex] = set()
        for chain in w1.values():
            spread ^= chain
        w0 = own.solve_chain(0, spread, req.birth)
        if w0 is None:
            raise LiftError(f"Zone {zone} cannot lift {req.key} at {req.birth}")
        cycle = set(w0)
        for sigma, chain in sorted(w1.items()):
            a1 = local[sigma].solve_chain(0, chain, req.death)
            if a1 is None:
                raise LiftError(f"Zone {zone} cannot bound {req.key} on {sigma} at {req.death}")
            cycle ^= a1
        try:
            coords = own.cycle_coordinates(1, cycle, req.death)
        except InconsistencyError as exc:
            raise LiftError(f"Zone {zone} built a broken extension of {req.key}: {exc}") from exc
        out[req.key] = frozenset(((zone,), 1, g) for g in coords)
    return out


@dataclass
class ExtensionData:
    """Extension matrix between ``E2[0][1]`` and ``E2[1][0]``.

    Attributes:
        e0: Generators of ``E2[0][1]`` plus any withheld generator a lift used
        e1: Generators of ``E2[1][0]``
        matrix: ``|e0| x |e1|`` extension coordinates at each death value
    """

    e0: list[BasisElement]
    e1: list[BasisElement]
    matrix: SparseZ2Matrix

    @property
    def born(self) -> list[BasisElement]:
        """``E2[1][0]`` bars made infinite from their births."""
        return [BasisElement(("B", a.key), Interval(a.interval.birth)) for a in self.e1]

    @property
    def dead(self) -> list[BasisElement]:
        """``E2[1][0]`` bars made infinite from their deaths."""
        return [
            BasisElement(("D", a.key), Interval(a.interval.death))
            for a in self.e1
            if not a.interval.is_infinite
        ]


def extension_matrix(
    first: FirstPage,
    second: SecondPage,
    e1: Sequence[BasisElement],
    lifted: Mapping[Hashable, frozenset[GenKey]],
    withheld: Mapping[GenKey, Interval] | None = None,
) -> ExtensionData:
    """Write every lifted cycle in the ``E2[0][1]`` basis at its death value.

    Args:
        first: First page holding row 1
        second: Second page holding row 1
        e1: Generators of ``E2[1][0]``
        lifted: Sum over workers of the lifted coordinates per class
        withheld: Intervals of withheld ``PH_1`` generators shipped with the lifts

    Raises:
        LiftError: If a lifted cycle does not reduce in ``E2[0][1]``
    """
    withheld = withheld or {}
    term = second.term(0, 1)
    position = first.position(0, 1)
    deaths = first.deaths(0, 1)
    e0 = list(term.generators)
    extra_row: dict[GenKey, int] = {}
    columns = []
    for alpha in e1:
        if alpha.interval.is_infinite:
            columns.append(frozenset())
            continue
        b = alpha.interval.death
        keys = lifted.get(alpha.key, frozenset())
        column: set[int] = set()
        for key in sorted(k for k in keys if k not in position):
            if key not in withheld:
                raise LiftError(f"Lift of {alpha.key} uses unknown generator {key}")
            if key not in extra_row:
                extra_row[key] = len(e0)
                e0.append(BasisElement(key, withheld[key]))
            column.add(extra_row[key])
        alive = [r for r, g in enumerate(term.generators) if g.interval.contains(b)]
        relations = [e for e in term.image if e.interval.contains(b)]
        combo = snapshot_solve(
            prune_at(frozenset(position[k] for k in keys if k in position), b, deaths),
            [prune_at(term.generators[r].coords, b, deaths) for r in alive]
            + [prune_at(e.coords, b, deaths) for e in relations],
        )
        if combo is None:
            raise LiftError(f"Extended cycle of {alpha.key} is not a class of {term.name} at {b}")
        column ^= {alive[c] for c in combo if c < len(alive)}
        columns.append(frozenset(column))
    logger.debug("Extension matrix %dx%d", len(e0), len(e1))
    return ExtensionData(e0, list(e1), SparseZ2Matrix(len(e0), columns))


def solve_extension(data: ExtensionData) -> list[BasisElement]:
    """Barcode of ``(E2[0][1] + B E2[1][0]) / ext(D E2[1][0])``.

    Returns:
        One interval per generator of ``e0`` and of the born bars, empty ones
        included, in standard order
    """
    gens = [*data.e0, *data.born]
    ivs = [g.interval for g in gens]
    row_order = order_permutation(ivs, "endpoint")
    row_of = {old: new for new, old in enumerate(row_order)}
    col_order = order_permutation(ivs, "standard")
    finite = [j for j, a in enumerate(data.e1) if not a.interval.is_infinite]
    finite.sort(key=lambda j: (data.e1[j].interval.death, j))

    columns: list[frozenset[int]] = []
    births: list[float] = []
    for j in finite:
        rows = {row_of[r] for r in data.matrix.columns[j]}
        rows.add(row_of[len(data.e0) + j])
        columns.append(frozenset(rows))
        births.append(data.e1[j].interval.death)
    for k in col_order:
        columns.append(frozenset({row_of[k]}))
        births.append(ivs[k].birth)

    result = box_gauss_reduce(
        SparseZ2Matrix(len(gens), columns),
        births,
        [ivs[k].death for k in row_order],
        trailing=len(gens),
    )
    return [BasisElement(gens[k].key, iv) for k, iv in zip(col_order, result.intervals, strict=True)]
