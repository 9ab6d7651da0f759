"""Lens spaces as free cyclic quotients of joined polygons.

The standard lens space of dimension 2d-1 with fundamental group Z_N is
the quotient of a join of d copies of the N-gon circle by the diagonal
rotation.  Cell counts of the quotient scale like N^(d-1); the rho
invariant of these spaces is a cotangent power sum, evaluated here with
compensated summation, together with the bound checks and the
invariant-counting arithmetic built on it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .delta import DeltaComplex, join, ngon, orbit_action, quotient
from .groups import cyclic

Perms = list[tuple[int, ...]]


class LensError(ValueError):
    pass


@dataclass(frozen=True)
class LensSpec:
    """Parameters (N, d): fundamental group Z_N, dimension 2d-1."""

    n: int
    d: int

    def __post_init__(self):
        if self.n < 2:
            raise LensError("N must be at least 2")
        if self.d < 1:
            raise LensError("d must be at least 1")

    @property
    def dim(self) -> int:
        return 2 * self.d - 1


def _ngon_rotation(n: int) -> Perms:
    shift = tuple((k + 1) % n for k in range(n))
    return [shift, shift]


def _join_rotation(J: DeltaComplex, kp: Perms, lp: Perms) -> Perms:
    """Diagonal action on a join, read off through the join tags."""

    def half(ref, perms):
        if ref is None:
            return None
        p, c = ref
        return p, perms[p][c]

    out: Perms = []
    for q in range(len(J.faces)):
        table = J.index_by_tag(q)
        perm = []
        for c in range(J.n_cells(q)):
            _, a, b = J.tags[q][c]
            perm.append(table[("join", half(a, kp), half(b, lp))])
        out.append(tuple(perm))
    return out


def _joined_polygons(n: int, d: int) -> tuple[DeltaComplex, Perms]:
    K = ngon(n)
    perms = _ngon_rotation(n)
    for _ in range(d - 1):
        L = ngon(n)
        J = join(K, L)
        perms = _join_rotation(J, perms, _ngon_rotation(n))
        K = J
    return K, perms


def lens_complex(spec: LensSpec) -> DeltaComplex:
    """Quotient of the join of d N-gons by the diagonal rotation.

    Requires N >= 3; the construction is stated for rotations acting
    freely on a polygon with at least three sides.
    """
    if spec.n < 3:
        raise LensError(
            "lens complexes need N >= 3 for the rotation action"
        )
    K, perms = _joined_polygons(spec.n, spec.d)
    return quotient(K, orbit_action(cyclic(spec.n), perms))


@dataclass(frozen=True)
class LensCount:
    per_dim: tuple[int, ...]
    total: int
    top: int


def lens_count(spec: LensSpec) -> LensCount:
    f = lens_complex(spec).f_vector()
    return LensCount(f, sum(f), f[-1])


def growth_exponent(
    d: int,
    n_range: tuple[int, int] = (3, 12),
    counts: str = "top",
) -> float:
    """Least-squares slope of log(cell count) against log(N).

    Top-cell counts are exactly N^(d-1), so the default slope is the
    growth exponent on the nose; "total" fits the full cell count, which
    approaches the same exponent only as N grows.
    """
    lo, hi = n_range
    if lo < 3 or hi < lo:
        raise LensError("range must sit inside N >= 3")
    if counts not in ("top", "total"):
        raise LensError("counts must be 'top' or 'total'")
    xs, ys = [], []
    for n in range(lo, hi + 1):
        c = lens_count(LensSpec(n, d))
        xs.append(math.log(n))
        ys.append(math.log(c.top if counts == "top" else c.total))
    mx = math.fsum(xs) / len(xs)
    my = math.fsum(ys) / len(ys)
    sxx = math.fsum((x - mx) ** 2 for x in xs)
    sxy = math.fsum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx


# -- the rho invariant ------------------------------------------------


def rho_atiyah_bott(spec: LensSpec) -> float:
    """Sum of cot^d(pi k / N) over k = 1 .. N-1.

    Terms are paired k with N-k, whose cotangents are exact negatives,
    before compensated summation; for even N the middle cotangent is
    zero by symmetry and is added as an exact zero.  Odd powers
    therefore cancel to exactly 0.0.
    """
    n, d = spec.n, spec.d
    terms = []
    for k in range(1, (n + 1) // 2):
        t = math.pi * k / n
        c = math.cos(t) / math.sin(t)
        terms.append(c**d)
        terms.append((-c) ** d)
    if n % 2 == 0:
        terms.append(0.0)
    return math.fsum(terms)


@dataclass(frozen=True)
class RhoBoundResult:
    """Outcome of the (N/pi)^d < rho comparison.

    Truthiness is the comparison itself; ``status`` records whether the
    pair (N, d) sits inside the hypothesis of the stated bound (d even,
    N >= 4).
    """

    spec: LensSpec
    rho: float
    bound: float
    holds: bool
    status: str

    def __bool__(self) -> bool:
        return self.holds


def rho_lower_bound_check(spec: LensSpec) -> RhoBoundResult:
    rho = rho_atiyah_bott(spec)
    bound = (spec.n / math.pi) ** spec.d
    status = (
        "ok" if spec.d % 2 == 0 and spec.n >= 4 else "out_of_hypothesis"
    )
    return RhoBoundResult(spec, rho, bound, bound < rho, status)


def thm13_lower(spec: LensSpec, constant):
    """Lower bound constant * N^(d-1) for the complexity of the space."""
    return constant * spec.n ** (spec.d - 1)


# -- invariant counting -----------------------------------------------


def _delta_term(n: int, dim: int) -> int:
    if dim % 2 == 0:
        raise LensError("the invariant counts apply to odd dimensions")
    return 1 if n % 2 == 0 and dim % 4 == 3 else 0


def divisor_count(n: int) -> int:
    if n < 1:
        raise LensError("divisor count needs n >= 1")
    out = 0
    for k in range(1, math.isqrt(n) + 1):
        if n % k == 0:
            out += 1 if k * k == n else 2
    return out


def invariant_count(n: int, dim: int) -> int:
    """floor((N-1)/2) + 1 when N is even and dim is 3 mod 4."""
    if n < 2:
        raise LensError("N must be at least 2")
    return (n - 1) // 2 + _delta_term(n, dim)


def homotopy_invariant_count(n: int, dim: int) -> int:
    """N - d(N) plus the same parity correction."""
    if n < 2:
        raise LensError("N must be at least 2")
    return n - divisor_count(n) + _delta_term(n, dim)
