"""Coverings, towers of coverings, simplicial cylinders, and bounding chains.

A covering replaces a polytope by h chained copies, gluing the minus face
of each boundary pair on copy j to the plus face on copy j+1.  A tower
folds that over every boundary pair class in order; the result has
h_1 * h_2 * ... copies, and the key combinatorial fact (verified, not
assumed) is that each remaining dangling pair carries equal vertex labels
under any endowment, because the crossing holonomy of a pair raised to
the group order is the identity.

The cylinder turns a labeled signed cell into a degree n+1 prism chain
joining it to its fully degenerate shadow; summing scaled cylinders over
towers of all the assembled polytopes of a cycle produces an explicit
chain u with boundary N * (C - E).
"""

from __future__ import annotations

import logging
import math
import os
from dataclasses import dataclass, field
from typing import Sequence, Union

from .bar import BarChain, Gen, hom_to_bar
from .groups import FiniteAbelianGroup, GroupElement
from .polytopes import (
    CellsInput,
    ColoredPolytope,
    ColoringError,
    FaceRef,
    NotACycleError,
    VertexLabeling,
    as_cells,
    assemble_polytopes,
)

log = logging.getLogger(__name__)

DEFAULT_CELL_CAP = 10_000_000


class ResourceCapError(RuntimeError):
    """Tower construction would exceed the configured cell cap."""


def cell_cap() -> int:
    """Cap on constructed cells; override with env RHOFORGE_CELL_CAP."""
    raw = os.environ.get("RHOFORGE_CELL_CAP")
    if raw is None:
        return DEFAULT_CELL_CAP
    return int(raw)


PairClass = tuple[tuple[FaceRef, FaceRef], ...]  # (plus, minus) members


def _shift_ref(ref: FaceRef, copy: int, ncells: int) -> FaceRef:
    return (ref[0] + copy * ncells, ref[1])


def _covering_step(
    P: ColoredPolytope,
    classes: Sequence[PairClass],
    which: int,
    height: int,
    cap: int,
) -> tuple[ColoredPolytope, list[PairClass]]:
    """One covering: chain ``height`` copies of P along class ``which``.

    Every member pair of the class is glued in parallel: minus on copy j
    meets plus on copy j+1.  Other classes multiply into all copies; the
    glued class keeps one dangling (plus@first, minus@last) per member.
    """
    ncells = len(P.cells)
    if height * ncells > cap:
        raise ResourceCapError(
            f"covering needs {height * ncells} cells, cap is {cap}"
        )
    cells = [cell for _ in range(height) for cell in P.cells]
    gluings: list[tuple[FaceRef, FaceRef]] = []
    for j in range(height):
        for a, b in P.gluings:
            gluings.append((_shift_ref(a, j, ncells), _shift_ref(b, j, ncells)))
    for plus, minus in classes[which]:
        for j in range(height - 1):
            gluings.append(
                (_shift_ref(minus, j, ncells), _shift_ref(plus, j + 1, ncells))
            )
    Q = ColoredPolytope(P.group, P.degree, cells, gluings)
    new_classes: list[PairClass] = []
    for r, cls in enumerate(classes):
        if r == which:
            new_classes.append(
                tuple(
                    (_shift_ref(plus, 0, ncells), _shift_ref(minus, height - 1, ncells))
                    for plus, minus in cls
                )
            )
        else:
            new_classes.append(
                tuple(
                    (_shift_ref(plus, j, ncells), _shift_ref(minus, j, ncells))
                    for j in range(height)
                    for plus, minus in cls
                )
            )
    return Q, new_classes


def covering(
    P: ColoredPolytope,
    pair: tuple[FaceRef, FaceRef],
    height: int | None = None,
) -> ColoredPolytope:
    """Covering of P with respect to one boundary pair.

    ``height`` defaults to the group order.  The result's chain is
    height times P's chain, and all other boundary pairs appear height
    times over.
    """
    if height is None:
        height = P.group.order
    if pair not in P.boundary_pairs():
        raise ValueError(f"{pair} is not a boundary pair of the polytope")
    Q, _ = _covering_step(P, [(pair,)], 0, height, cell_cap())
    return Q


def _pair_sort_key(P: ColoredPolytope, pair: tuple[FaceRef, FaceRef]):
    plus, _ = pair
    return (tuple(e.residues for e in P.face_gen(*plus)), pair)


@dataclass(frozen=True)
class Tower:
    """A finished tower of coverings.

    ``copies`` is the product of the per-class heights; without holonomy
    extensions every height is the group order, so copies = |G|^s with
    s the number of pair classes.  ``dangling`` lists the surviving
    boundary pairs of the result, per original class.
    """

    base: ColoredPolytope
    pair_sequence: tuple[tuple[FaceRef, FaceRef], ...]
    result: ColoredPolytope
    copies: int
    heights: tuple[int, ...]
    dangling: tuple[PairClass, ...]
    extensions: tuple[str, ...] = ()


def _pair_labels_agree(
    Q: ColoredPolytope, labeling: VertexLabeling, plus: FaceRef, minus: FaceRef
) -> bool:
    n = Q.degree
    for j in range(n):
        vp = j if j < plus[1] else j + 1
        vm = j if j < minus[1] else j + 1
        lp = labeling.labels[Q.vertex_class(plus[0], vp)]
        lm = labeling.labels[Q.vertex_class(minus[0], vm)]
        if lp != lm:
            return False
    return True


def _crossing_holonomy(
    P: ColoredPolytope, plus: FaceRef, minus: FaceRef
) -> GroupElement:
    """Label offset between the two faces of a pair: minus = holonomy * plus."""
    labeling = P.endow(P.group.identity)
    vp = 0 if plus[1] > 0 else 1
    vm = 0 if minus[1] > 0 else 1
    lp = labeling.labels[P.vertex_class(plus[0], vp)]
    lm = labeling.labels[P.vertex_class(minus[0], vm)]
    return lm * ~lp


def tower(
    P: ColoredPolytope,
    pairs: Sequence[tuple[FaceRef, FaceRef]] | None = None,
) -> Tower:
    """Tower of coverings of P over the given boundary pairs, in order.

    Pairs default to all of P's boundary pairs in canonical generator
    order.  After building, every dangling pair is verified to carry
    equal vertex labels under an identity endowment; on a mismatch the
    offending class's height is extended to absorb the crossing holonomy
    and the tower is rebuilt once (logged), after which a persistent
    mismatch is a hard error.
    """
    if pairs is None:
        pairs = sorted(P.boundary_pairs(), key=lambda pr: _pair_sort_key(P, pr))
    pairs = tuple(pairs)
    if not pairs:
        return Tower(P, (), P, 1, (), ())
    order = P.group.order
    cap = cell_cap()

    def build(heights: Sequence[int]) -> Tower:
        Q = P
        classes: list[PairClass] = [(pair,) for pair in pairs]
        for r, h in enumerate(heights):
            Q, classes = _covering_step(Q, classes, r, h, cap)
        copies = math.prod(heights)
        return Tower(
            base=P,
            pair_sequence=pairs,
            result=Q,
            copies=copies,
            heights=tuple(heights),
            dangling=tuple(classes),
        )

    def verify(t: Tower) -> list[int]:
        labeling = t.result.endow(P.group.identity)
        bad = []
        for r, cls in enumerate(t.dangling):
            if any(
                not _pair_labels_agree(t.result, labeling, plus, minus)
                for plus, minus in cls
            ):
                bad.append(r)
        return bad

    t = build([order] * len(pairs))
    bad = verify(t)
    if not bad:
        return t
    # Unreachable for abelian G with default heights (holonomy^|G| = e),
    # kept as the constructive fallback: extend each failing class to a
    # height the crossing holonomy provably divides.
    heights = list(t.heights)
    notes = []
    for r in bad:
        hol = _crossing_holonomy(P, *pairs[r])
        heights[r] = math.lcm(order, hol.order())
        notes.append(
            f"holonomy extension on pair {r}: height {order} -> {heights[r]}"
        )
        log.warning(notes[-1])
    t2 = build(heights)
    if verify(t2):
        raise ColoringError(
            "dangling pair labels still disagree after holonomy extension; "
            "coloring bug"
        )
    return Tower(
        t2.base,
        t2.pair_sequence,
        t2.result,
        t2.copies,
        t2.heights,
        t2.dangling,
        tuple(notes),
    )


# -- simplicial cylinders ---------------------------------------------


@dataclass(frozen=True)
class CylinderResult:
    """Prism chain between a labeled chain and its degenerate shadow."""

    chain: BarChain  # degree n+1
    top: BarChain  # the labeled chain itself, degree n
    bottom: BarChain  # identity-labeled shadow, degree n


def cylinder_cell(labels: Sequence[GroupElement], sign: int = 1) -> BarChain:
    """Prism chain of one signed cell with ordered vertex labels.

    For labels (h_0, ..., h_n) the cylinder is the alternating sum over
    i of the simplex with vertex labels (e, ..., e, h_i, ..., h_n), the
    identity repeated i+1 times; via consecutive quotients that is the
    generator [e, ..., e, h_i, g_{i+1}, ..., g_n] of degree n+1.
    """
    labels = tuple(labels)
    if not labels:
        raise ValueError("labels must cover at least one vertex")
    group = labels[0].group
    e = group.identity
    n = len(labels) - 1
    out: dict[Gen, int] = {}
    for i in range(n + 1):
        gen = hom_to_bar((e,) * (i + 1) + labels[i:])
        coef = sign * (1 if i % 2 == 0 else -1)
        c = out.get(gen, 0) + coef
        if c:
            out[gen] = c
        elif gen in out:
            del out[gen]
    return BarChain(group, n + 1, out, _validate=False)


LabeledCells = Sequence[tuple[Sequence[GroupElement], int]]


def cylinder(cells: LabeledCells) -> CylinderResult:
    """Cylinder of a labeled chain: a list of (vertex labels, sign) cells."""
    cells = [(tuple(labels), sign) for labels, sign in cells]
    if not cells:
        raise ValueError("empty labeled chain")
    group = cells[0][0][0].group
    n = len(cells[0][0]) - 1
    chain = BarChain.zero(group, n + 1)
    top = BarChain.zero(group, n)
    e = group.identity
    degen: Gen = (e,) * n
    bottom_coef = 0
    for labels, sign in cells:
        chain = chain + cylinder_cell(labels, sign)
        top = top + sign * BarChain.single(group, hom_to_bar(labels))
        bottom_coef += sign
    bottom = BarChain(
        group, n, {degen: bottom_coef} if bottom_coef else {}, _validate=False
    )
    return CylinderResult(chain=chain, top=top, bottom=bottom)


def cell_face_labels(
    labels: Sequence[GroupElement], i: int
) -> tuple[GroupElement, ...]:
    """Labels inherited by face i: drop the i-th vertex."""
    return tuple(labels[:i]) + tuple(labels[i + 1 :])


def cylinder_boundary_defect(cells: LabeledCells) -> BarChain:
    """d(Cyl(P)) - (P - E - Cyl(dP with inherited labels)); zero when the
    prism identity holds.  Exposed so tests can assert exactness."""
    res = cylinder(cells)
    lhs = res.chain.boundary()
    rhs = res.top - res.bottom
    for labels, sign in cells:
        labels = tuple(labels)
        n = len(labels) - 1
        for i in range(n + 1):
            face_sign = sign * (1 if i % 2 == 0 else -1)
            rhs = rhs - cylinder_cell(cell_face_labels(labels, i), face_sign)
    return lhs - rhs


def polytope_labeled_cells(
    P: ColoredPolytope, labeling: VertexLabeling
) -> list[tuple[tuple[GroupElement, ...], int]]:
    return [
        (labeling.cell_labels(c), P.cells[c].sign) for c in range(len(P.cells))
    ]


def boundary_cylinder_sum(
    P: ColoredPolytope, labeling: VertexLabeling, unglued_only: bool = True
) -> BarChain:
    """Sum of face cylinders, the correction term of the prism identity.

    Each face of a labeled n-cell inherits n vertex labels, so its
    cylinder lives in degree n.  Over a full tower this sum vanishes
    identically: glued faces cancel in pairs because they share vertex
    classes, and dangling pairs cancel because their labels agree.
    """
    group = P.group
    total = BarChain.zero(group, P.degree)
    faces = (
        P.unglued_faces()
        if unglued_only
        else [
            (c, i)
            for c in range(len(P.cells))
            for i in range(P.degree + 1)
        ]
    )
    for c, i in faces:
        labels = cell_face_labels(labeling.cell_labels(c), i)
        total = total + cylinder_cell(labels, P.induced_sign(c, i))
    return total


# -- the bounding chain -----------------------------------------------


@dataclass(frozen=True)
class PolytopeReport:
    cells: int
    pair_count: int
    copies: int
    heights: tuple[int, ...]
    extensions: tuple[str, ...]


@dataclass(frozen=True)
class BoundingResult:
    """Chain u with d(u) = multiplicity * (cycle - shadow), verified exactly.

    ``shadow`` is the sum of signs times the all-identity generator; it
    vanishes whenever the decomposition's signs cancel.  ``bound`` is the
    a-priori complexity bound (n+1) * |G|^((n+1)|C|/2) * |C|.
    """

    u: BarChain
    multiplicity: int
    cycle: BarChain
    shadow: BarChain
    cells: int
    bound: int
    complexity: int
    polytopes: tuple[PolytopeReport, ...] = field(default=())

    @property
    def verified(self) -> bool:
        return self.u.boundary() == self.multiplicity * (self.cycle - self.shadow)


def lemma_bound(n: int, group: Union[FiniteAbelianGroup, int], c_size: int) -> int:
    """(n+1) * |G|^((n+1)*|C|/2) * |C|; the exponent is always integral
    for cycles since their (n+1)*|C| faces pair up."""
    order = group if isinstance(group, int) else group.order
    total_faces = (n + 1) * c_size
    if total_faces % 2:
        raise ValueError("odd face count; |C| is not the size of a cycle")
    return (n + 1) * order ** (total_faces // 2) * c_size


def bounding_chain(C: CellsInput) -> BoundingResult:
    """Build u with d(u) = N * (C - E) by towers and cylinders.

    Pipeline: assemble the cycle's cells into polytopes; tower each over
    all its boundary pairs; endow each tower with identity base labels;
    take the cylinder of every tower; rescale per-polytope cylinders to
    the common multiplicity N = |G|^(max pair count) and sum.  The
    boundary identity is verified by exact chain arithmetic before
    returning (the ``verified`` property re-runs it).
    """
    group, degree, cells = as_cells(C)
    if degree < 1:
        raise ValueError("degree must be >= 1")
    cycle_chain = BarChain.zero(group, degree)
    for cell in cells:
        cycle_chain = cycle_chain + cell.sign * BarChain.single(group, cell.gen)
    if not cycle_chain.boundary().is_zero():
        raise NotACycleError("input chain has nonzero boundary")
    e = group.identity
    sign_total = sum(cell.sign for cell in cells)
    shadow = BarChain(
        group,
        degree,
        {(e,) * degree: sign_total} if sign_total else {},
        _validate=False,
    )
    if not cells:
        return BoundingResult(
            u=BarChain.zero(group, degree + 1),
            multiplicity=1,
            cycle=cycle_chain,
            shadow=shadow,
            cells=0,
            bound=0,
            complexity=0,
        )

    polys = assemble_polytopes(cells)
    towers = [tower(P) for P in polys]
    multiplicity = max(
        (t.copies for t in towers), default=1
    )
    for t in towers:
        if multiplicity % t.copies:
            multiplicity = math.lcm(multiplicity, t.copies)
    u = BarChain.zero(group, degree + 1)
    reports = []
    for t in towers:
        labeling = t.result.endow(e)
        cyl = cylinder(polytope_labeled_cells(t.result, labeling))
        u = u + (multiplicity // t.copies) * cyl.chain
        reports.append(
            PolytopeReport(
                cells=len(t.base.cells),
                pair_count=len(t.pair_sequence),
                copies=t.copies,
                heights=t.heights,
                extensions=t.extensions,
            )
        )
    result = BoundingResult(
        u=u,
        multiplicity=multiplicity,
        cycle=cycle_chain,
        shadow=shadow,
        cells=len(cells),
        bound=lemma_bound(degree, group, len(cells)),
        complexity=u.complexity(),
        polytopes=tuple(reports),
    )
    if not result.verified:
        raise AssertionError(
            "bounding chain failed exact verification; construction bug"
        )
    return result


# -- headline constants ----------------------------------------------


@dataclass(frozen=True)
class Thm11Constant:
    """Catalan factor times group order, with the dimension constant left
    symbolic (the source never assigns it a value)."""

    k: int
    catalan: int
    group_order: int
    symbol: str

    @property
    def coefficient(self) -> int:
        return self.catalan * self.group_order

    def __str__(self) -> str:
        return f"{self.coefficient} * {self.symbol} * Delta(M)"


def catalan_number(k: int) -> int:
    return math.comb(2 * k, k) // (k + 1)


def thm11_constant(k: int, group: Union[FiniteAbelianGroup, int]) -> Thm11Constant:
    if k < 1:
        raise ValueError("k must be >= 1")
    order = group if isinstance(group, int) else group.order
    return Thm11Constant(
        k=k,
        catalan=catalan_number(k),
        group_order=order,
        symbol=f"C_{2 * k - 1}",
    )
