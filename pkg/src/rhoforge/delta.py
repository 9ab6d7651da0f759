"""Delta-complexes: ordered cells with face maps, and the standard zoo.

Cells of dimension q carry q+1 ordered references to (q-1)-cells,
repeats allowed; the simplicial identities are checked on construction,
so every complex produced by the builders here (joins, cones, prisms,
barycentric subdivisions, free quotients) is verified as it is built.
Integral homology runs through Smith normal form; the combinatorial
torsion runs through Laplacian pseudo-determinants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Sequence

import numpy as np

from .groups import FiniteAbelianGroup, GroupElement
from .smith import smith_normal_form

Face = tuple[int, ...]


class DeltaComplexError(ValueError):
    pass


class DeltaComplex:
    """Immutable Delta-complex.

    ``faces[q][c]`` is the ordered face tuple of q-cell c (empty for
    vertices).  ``tags[q][c]`` is an optional provenance token attached
    by the builders; tags never affect equality of structure, they only
    let later constructions find cells again.
    """

    __slots__ = ("faces", "tags", "_tag_index")

    def __init__(
        self,
        vertices: int,
        faces: Sequence[Sequence[Sequence[int]]] = (),
        tags: Sequence[Sequence[object]] | None = None,
    ):
        if vertices < 0:
            raise DeltaComplexError("negative vertex count")
        built: list[tuple[Face, ...]] = [tuple(() for _ in range(vertices))]
        for q_minus_1, level in enumerate(faces):
            q = q_minus_1 + 1
            cells = tuple(tuple(int(i) for i in cell) for cell in level)
            for c, cell in enumerate(cells):
                if len(cell) != q + 1:
                    raise DeltaComplexError(
                        f"{q}-cell {c} has {len(cell)} faces, wants {q + 1}"
                    )
                below = len(built[q - 1])
                if any(not 0 <= f < below for f in cell):
                    raise DeltaComplexError(
                        f"{q}-cell {c} references a missing {q - 1}-cell"
                    )
            built.append(cells)
        while len(built) > 1 and not built[-1]:
            built.pop()
        self.faces = tuple(built)
        if tags is None:
            self.tags = tuple(
                tuple(None for _ in level) for level in self.faces
            )
        else:
            norm = [tuple(level) for level in tags]
            while len(norm) < len(self.faces):
                norm.append(tuple(None for _ in self.faces[len(norm)]))
            if any(
                len(norm[q]) != len(self.faces[q])
                for q in range(len(self.faces))
            ):
                raise DeltaComplexError("tag shape does not match cells")
            self.tags = tuple(norm[: len(self.faces)])
        self._check_simplicial()
        self._tag_index: dict[int, dict[object, int]] = {}

    def _check_simplicial(self) -> None:
        # d_i d_j = d_{j-1} d_i for i < j
        for q in range(2, len(self.faces)):
            lower = self.faces[q - 1]
            for c, cell in enumerate(self.faces[q]):
                for j in range(1, q + 1):
                    for i in range(j):
                        if lower[cell[j]][i] != lower[cell[i]][j - 1]:
                            raise DeltaComplexError(
                                f"simplicial identity fails at {q}-cell {c}, "
                                f"faces ({i}, {j})"
                            )

    # -- bookkeeping --------------------------------------------------

    @property
    def dim(self) -> int:
        if len(self.faces) == 1 and not self.faces[0]:
            return -1
        return len(self.faces) - 1

    def n_cells(self, q: int) -> int:
        if 0 <= q < len(self.faces):
            return len(self.faces[q])
        return 0

    def f_vector(self) -> tuple[int, ...]:
        if self.dim < 0:
            return ()
        return tuple(len(level) for level in self.faces)

    def euler(self) -> int:
        return sum(
            (-1) ** q * n for q, n in enumerate(self.f_vector())
        )

    def total_cells(self) -> int:
        return sum(self.f_vector())

    def index_by_tag(self, q: int) -> Mapping[object, int]:
        """Tag -> cell index for dimension q (tags must be unique there)."""
        if q not in self._tag_index:
            level = self.tags[q] if 0 <= q < len(self.tags) else ()
            table: dict[object, int] = {}
            for c, tag in enumerate(level):
                if tag in table:
                    raise DeltaComplexError(
                        f"duplicate tag in dimension {q}: {tag!r}"
                    )
                table[tag] = c
            self._tag_index[q] = table
        return self._tag_index[q]

    def iterated_face(self, q: int, c: int, keep: Sequence[int]) -> tuple[int, int]:
        """The face of a q-cell spanned by the vertex positions ``keep``.

        Positions not kept are dropped highest first, so earlier drops
        never shift the remaining indices.  Returns (dimension, cell).
        """
        keep_set = set(keep)
        if not keep_set or not keep_set <= set(range(q + 1)):
            raise DeltaComplexError("keep must be a nonempty subset of vertices")
        cur_q, cur = q, c
        for t in sorted(set(range(q + 1)) - keep_set, reverse=True):
            cur = self.faces[cur_q][cur][t]
            cur_q -= 1
        return cur_q, cur

    def relabeled(self, perms: Sequence[Sequence[int]]) -> "DeltaComplex":
        """Same complex with cells renumbered: perms[q][old] = new."""
        perms = [list(p) for p in perms]
        while len(perms) < len(self.faces):
            perms.append(list(range(len(self.faces[len(perms)]))))
        for q, p in enumerate(perms[: len(self.faces)]):
            if sorted(p) != list(range(len(self.faces[q]))):
                raise DeltaComplexError(f"not a permutation in dimension {q}")
        new_faces: list[list[Face]] = []
        new_tags: list[list[object]] = []
        for q in range(1, len(self.faces)):
            level: list[Face] = [()] * len(self.faces[q])
            tag_level: list[object] = [None] * len(self.faces[q])
            for c, cell in enumerate(self.faces[q]):
                level[perms[q][c]] = tuple(perms[q - 1][f] for f in cell)
                tag_level[perms[q][c]] = self.tags[q][c]
            new_faces.append(level)
            new_tags.append(tag_level)
        vtags: list[object] = [None] * len(self.faces[0])
        for c, tag in enumerate(self.tags[0]):
            vtags[perms[0][c]] = tag
        return DeltaComplex(
            len(self.faces[0]), new_faces, [vtags] + new_tags
        )

    # -- homology -----------------------------------------------------

    def boundary_matrix(self, q: int) -> dict[tuple[int, int], int]:
        """Sparse integer matrix of the q-th boundary map, rows indexed
        by (q-1)-cells, columns by q-cells."""
        entries: dict[tuple[int, int], int] = {}
        if not 1 <= q < len(self.faces):
            return entries
        for c, cell in enumerate(self.faces[q]):
            for i, f in enumerate(cell):
                key = (f, c)
                entries[key] = entries.get(key, 0) + (-1) ** i
                if not entries[key]:
                    del entries[key]
        return entries

    def homology(self) -> "HomologySummary":
        if self.dim < 0:
            return HomologySummary((), ())
        snf = [
            smith_normal_form(self.boundary_matrix(q))
            for q in range(self.dim + 2)
        ]
        betti = []
        torsion = []
        for q in range(self.dim + 1):
            betti.append(self.n_cells(q) - snf[q].rank - snf[q + 1].rank)
            torsion.append(snf[q + 1].torsion)
        return HomologySummary(tuple(betti), tuple(torsion))

    # -- combinatorial torsion ---------------------------------------

    def _dense_boundary(self, q: int) -> np.ndarray:
        rows, cols = self.n_cells(q - 1), self.n_cells(q)
        mat = np.zeros((rows, cols))
        for (r, c), v in self.boundary_matrix(q).items():
            mat[r, c] = v
        return mat

    def laplacian(self, q: int) -> np.ndarray:
        down = self._dense_boundary(q)
        up = self._dense_boundary(q + 1)
        n = self.n_cells(q)
        lap = np.zeros((n, n))
        if up.size:
            lap += up @ up.T
        if down.size:
            lap += down.T @ down
        return lap

    def laplacian_pseudodet(self, q: int) -> float:
        """Product of nonzero Laplacian eigenvalues; 1 for empty spectra.

        Zero means anything below 1e-9 times the spectral radius.
        """
        lap = self.laplacian(q)
        if lap.size == 0:
            return 1.0
        eigs = np.linalg.eigvalsh(lap)
        radius = float(np.max(np.abs(eigs))) if eigs.size else 0.0
        if radius == 0.0:
            return 1.0
        tol = 1e-9 * radius
        kept = eigs[eigs > tol]
        if kept.size == 0:
            return 1.0
        return float(math.exp(np.sum(np.log(kept))))

    def laplacian_torsion(self) -> float:
        total = 0.0
        for q in range(max(self.dim + 1, 0)):
            if q == 0:
                continue
            total += (-1) ** (q + 1) * q * math.log(self.laplacian_pseudodet(q))
        return math.exp(total)

    # -- serialization -----------------------------------------------

    def to_json(self) -> dict:
        return {
            "vertices": self.n_cells(0),
            "faces": [
                [list(cell) for cell in level] for level in self.faces[1:]
            ],
        }

    @classmethod
    def from_json(cls, data: dict) -> "DeltaComplex":
        return cls(int(data["vertices"]), data.get("faces", []))

    def __repr__(self) -> str:
        return f"DeltaComplex(f={self.f_vector()})"


@dataclass(frozen=True)
class HomologySummary:
    """Per dimension, the free rank and the torsion coefficients."""

    betti: tuple[int, ...]
    torsion: tuple[tuple[int, ...], ...]

    def free_rank(self, q: int) -> int:
        return self.betti[q] if 0 <= q < len(self.betti) else 0

    def torsion_coefficients(self, q: int) -> tuple[int, ...]:
        return self.torsion[q] if 0 <= q < len(self.torsion) else ()

    def group(self, q: int) -> str:
        parts = ["Z"] * self.free_rank(q)
        parts += [f"Z/{t}" for t in self.torsion_coefficients(q)]
        return " + ".join(parts) if parts else "0"

    def __str__(self) -> str:
        return ", ".join(
            f"H_{q} = {self.group(q)}" for q in range(len(self.betti))
        )


# -- elementary builders ----------------------------------------------


def empty_complex() -> DeltaComplex:
    return DeltaComplex(0)


def point() -> DeltaComplex:
    return DeltaComplex(1)


def ngon(n: int) -> DeltaComplex:
    """Circle with n vertices and n edges; edge k runs k -> k+1 mod n."""
    if n < 1:
        raise DeltaComplexError("ngon needs at least one edge")
    edges = [((k + 1) % n, k) for k in range(n)]
    tags = [[("v", k) for k in range(n)], [("e", k) for k in range(n)]]
    return DeltaComplex(n, [edges], tags)


circle = ngon


def simplex(n: int) -> DeltaComplex:
    """The full n-simplex; each cell is tagged with its vertex subset."""
    if n < 0:
        raise DeltaComplexError("dimension must be >= 0")
    levels = [
        [tuple(s) for s in combinations(range(n + 1), q + 1)]
        for q in range(n + 1)
    ]
    return _subset_complex(levels)


def boundary_simplex(n: int) -> DeltaComplex:
    """The boundary of the n-simplex (empty for n = 0)."""
    if n < 0:
        raise DeltaComplexError("dimension must be >= 0")
    levels = [
        [tuple(s) for s in combinations(range(n + 1), q + 1)]
        for q in range(n)
    ]
    return _subset_complex(levels)


def _subset_complex(levels: list[list[tuple[int, ...]]]) -> DeltaComplex:
    if not levels:
        return empty_complex()
    index = [{s: i for i, s in enumerate(level)} for level in levels]
    faces = []
    for q in range(1, len(levels)):
        faces.append(
            [
                tuple(index[q - 1][s[:i] + s[i + 1 :]] for i in range(len(s)))
                for s in levels[q]
            ]
        )
    return DeltaComplex(len(levels[0]), faces, levels)


# -- join, cone --------------------------------------------------------


def _join_halves(K: DeltaComplex, L: DeltaComplex, q: int):
    """Cell pairs of join dimension q, K part first, then L part."""
    out = []
    for p in range(q, -2, -1):
        r = q - 1 - p
        left = [None] if p < 0 else [(p, i) for i in range(K.n_cells(p))]
        right = [None] if r < 0 else [(r, j) for j in range(L.n_cells(r))]
        if p < 0 and r < 0:
            continue
        for a in left:
            for b in right:
                out.append((a, b))
    return out


def join(K: DeltaComplex, L: DeltaComplex) -> DeltaComplex:
    """Join of two complexes: simplices are concatenated pairs.

    Cells are pairs (sigma, tau), either half possibly absent, with the
    K vertices ordered before the L vertices.
    """
    top = K.dim + L.dim + 1
    if top < 0:
        return empty_complex()
    levels = [_join_halves(K, L, q) for q in range(top + 1)]
    index = [
        {pair: i for i, pair in enumerate(level)} for level in levels
    ]
    faces: list[list[Face]] = []
    for q in range(1, top + 1):
        level: list[Face] = []
        for a, b in levels[q]:
            p = a[0] if a else -1
            refs = []
            for i in range(p + 1):
                na = None if p == 0 else (p - 1, K.faces[p][a[1]][i])
                refs.append(index[q - 1][(na, b)])
            r = b[0] if b else -1
            for i in range(r + 1):
                nb = None if r == 0 else (r - 1, L.faces[r][b[1]][i])
                refs.append(index[q - 1][(a, nb)])
            level.append(tuple(refs))
        faces.append(level)
    tags = [
        [("join", a, b) for a, b in level] for level in levels
    ]
    return DeltaComplex(len(levels[0]), faces, tags)


def cone(K: DeltaComplex) -> DeltaComplex:
    """Cone on K; the apex is the last vertex."""
    return join(K, point())


# -- prism -------------------------------------------------------------

Chain = tuple[tuple[int, int], ...]


def _prism_chains(q: int) -> tuple[list[Chain], list[Chain]]:
    """Monotone chains in {0..q} x {0,1} covering every first coordinate:
    the level graphs (dimension q) and the once-doubled chains (q+1)."""
    flat: list[Chain] = []
    for split in range(q + 2):
        # levels jump from 0 to 1 after position split-1
        flat.append(
            tuple((i, 0 if i < split else 1) for i in range(q + 1))
        )
    flat.sort()
    doubled = [
        tuple((i, 0) for i in range(j + 1))
        + tuple((i, 1) for i in range(j, q + 1))
        for j in range(q + 1)
    ]
    return flat, doubled


def _chain_face(
    K: DeltaComplex, q: int, c: int, chain: Chain, i: int
) -> tuple[int, int, Chain]:
    """Drop chain vertex i; re-anchor when first-coord coverage is lost."""
    k = chain[i][0]
    covered = (i > 0 and chain[i - 1][0] == k) or (
        i + 1 < len(chain) and chain[i + 1][0] == k
    )
    rest = chain[:i] + chain[i + 1 :]
    if covered:
        return q, c, rest
    shifted = tuple((a - 1 if a > k else a, l) for a, l in rest)
    return q - 1, K.faces[q][c][k], shifted


def prism(K: DeltaComplex) -> DeltaComplex:
    """K x [0,1] in the ordered triangulation; ends carry level tags.

    Each q-cell contributes q+2 cells of dimension q (the nondecreasing
    level graphs, the all-0 and all-1 ones forming the two copies of K)
    and q+1 cells of dimension q+1.
    """
    if K.dim < 0:
        return empty_complex()
    levels: list[list[tuple[int, int, Chain]]] = [
        [] for _ in range(K.dim + 2)
    ]
    for q in range(K.dim + 1):
        flat, doubled = _prism_chains(q)
        for c in range(K.n_cells(q)):
            levels[q].extend((q, c, chain) for chain in flat)
            levels[q + 1].extend((q, c, chain) for chain in doubled)
    index = [
        {cell: i for i, cell in enumerate(level)} for level in levels
    ]
    faces: list[list[Face]] = []
    for d in range(1, K.dim + 2):
        level: list[Face] = []
        for q, c, chain in levels[d]:
            level.append(
                tuple(
                    index[d - 1][_chain_face(K, q, c, chain, i)]
                    for i in range(len(chain))
                )
            )
        faces.append(level)
    tags = [
        [("prism", q, c, chain) for q, c, chain in level]
        for level in levels
    ]
    return DeltaComplex(len(levels[0]), faces, tags)


def prism_end(P: DeltaComplex, K: DeltaComplex, level: int) -> list[list[int]]:
    """Cell indices of the bottom (level 0) or top (level 1) copy of K."""
    out = []
    for q in range(K.dim + 1):
        chain = tuple((i, level) for i in range(q + 1))
        table = P.index_by_tag(q)
        out.append(
            [table[("prism", q, c, chain)] for c in range(K.n_cells(q))]
        )
    return out


# -- barycentric subdivision ------------------------------------------

Flag = tuple[tuple[int, ...], ...]


def _flags_of(q: int) -> list[Flag]:
    """Strictly increasing chains of nonempty subsets ending at {0..q}."""
    full = tuple(range(q + 1))
    subsets = [
        tuple(s)
        for size in range(1, q + 1)
        for s in combinations(range(q + 1), size)
    ]
    out: list[Flag] = [(full,)]
    frontier: list[Flag] = [(full,)]
    while frontier:
        nxt: list[Flag] = []
        for flag in frontier:
            head = set(flag[0])
            for s in subsets:
                if len(s) < len(flag[0]) and set(s) < head:
                    nxt.append((s,) + flag)
        out.extend(nxt)
        frontier = nxt
    return sorted(out)


def barycentric(K: DeltaComplex) -> DeltaComplex:
    """Barycentric subdivision; vertices are barycenters of cells.

    A d-cell is a pair (anchor cell, flag of vertex subsets ending at
    the anchor's full vertex set); dropping the top subset re-anchors at
    the spanned face, which keeps the construction functorial in face
    maps even with repeated faces.
    """
    if K.dim < 0:
        return empty_complex()
    flags_by_dim: dict[int, list[Flag]] = {
        q: _flags_of(q) for q in range(K.dim + 1)
    }
    levels: list[list[tuple[int, int, Flag]]] = [
        [] for _ in range(K.dim + 1)
    ]
    for q in range(K.dim + 1):
        for c in range(K.n_cells(q)):
            for flag in flags_by_dim[q]:
                levels[len(flag) - 1].append((q, c, flag))
    for level in levels:
        level.sort()
    index = [
        {cell: i for i, cell in enumerate(level)} for level in levels
    ]

    def face(q: int, c: int, flag: Flag, j: int) -> tuple[int, int, Flag]:
        if j < len(flag) - 1:
            return q, c, flag[:j] + flag[j + 1 :]
        top = flag[-2]
        fq, fc = K.iterated_face(q, c, top)
        relabel = {v: t for t, v in enumerate(top)}
        new_flag = tuple(
            tuple(relabel[v] for v in s) for s in flag[:-1]
        )
        return fq, fc, new_flag

    faces: list[list[Face]] = []
    for d in range(1, K.dim + 1):
        level: list[Face] = []
        for q, c, flag in levels[d]:
            level.append(
                tuple(
                    index[d - 1][face(q, c, flag, j)]
                    for j in range(len(flag))
                )
            )
        faces.append(level)
    tags = [
        [("bary", q, c, flag) for q, c, flag in level] for level in levels
    ]
    return DeltaComplex(len(levels[0]), faces, tags)


# -- free actions and quotients ---------------------------------------


@dataclass(frozen=True)
class FreeAction:
    """Cell permutations, one per group element per dimension."""

    group: FiniteAbelianGroup
    perms: Mapping[GroupElement, tuple[tuple[int, ...], ...]]

    def validate(self, K: DeltaComplex) -> None:
        e = self.group.identity
        dims = len(K.faces)
        for g in self.group:
            if g not in self.perms:
                raise DeltaComplexError(f"action missing element {g!r}")
            pg = self.perms[g]
            if len(pg) != dims:
                raise DeltaComplexError("action has wrong number of dimensions")
            for q in range(dims):
                if sorted(pg[q]) != list(range(K.n_cells(q))):
                    raise DeltaComplexError(
                        f"action of {g!r} is not a permutation in dim {q}"
                    )
                if g != e and any(
                    pg[q][c] == c for c in range(K.n_cells(q))
                ):
                    raise DeltaComplexError(
                        f"fixed cell detected in dim {q}: action not free"
                    )
                for c, cell in enumerate(K.faces[q]):
                    if q == 0:
                        continue
                    image = K.faces[q][pg[q][c]]
                    if tuple(pg[q - 1][f] for f in cell) != image:
                        raise DeltaComplexError(
                            f"action of {g!r} does not commute with faces "
                            f"at {q}-cell {c}"
                        )
        for g in self.group:
            for h in self.group:
                gh = self.perms[g * h]
                for q in range(dims):
                    pg, ph = self.perms[g][q], self.perms[h][q]
                    if any(
                        pg[ph[c]] != gh[q][c] for c in range(K.n_cells(q))
                    ):
                        raise DeltaComplexError(
                            "permutations do not compose as the group does"
                        )


def orbit_action(
    group: FiniteAbelianGroup,
    generator_perms: Sequence[Sequence[int]],
) -> FreeAction:
    """Action of a cyclic group from the permutation of one generator."""
    if len(group.moduli) != 1:
        raise DeltaComplexError("orbit_action wants a cyclic group")
    n = group.moduli[0]
    base = [tuple(p) for p in generator_perms]
    perms = {}
    current = [tuple(range(len(p))) for p in base]
    for k in range(n):
        perms[group.element([k])] = tuple(current)
        current = [
            tuple(b[c] for c in cur) for b, cur in zip(base, current)
        ]
    return FreeAction(group, perms)


def quotient(K: DeltaComplex, action: FreeAction) -> DeltaComplex:
    """Quotient by a free cell action; orbits keep their smallest member."""
    action.validate(K)
    reps: list[list[int]] = []
    orbit_of: list[dict[int, int]] = []
    for q in range(len(K.faces)):
        seen: dict[int, int] = {}
        rep_list: list[int] = []
        for c in range(K.n_cells(q)):
            if c in seen:
                continue
            orbit = {
                action.perms[g][q][c] for g in action.group
            }
            rep = min(orbit)
            idx = len(rep_list)
            rep_list.append(rep)
            for m in orbit:
                seen[m] = idx
        reps.append(rep_list)
        orbit_of.append(seen)
    faces: list[list[Face]] = []
    for q in range(1, len(K.faces)):
        faces.append(
            [
                tuple(orbit_of[q - 1][f] for f in K.faces[q][rep])
                for rep in reps[q]
            ]
        )
    tags = [
        [K.tags[q][rep] for rep in reps[q]] for q in range(len(K.faces))
    ]
    return DeltaComplex(len(reps[0]), faces, tags)
