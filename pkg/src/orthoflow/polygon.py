"""Conformal polygons and extremal length.

A conformal polygon is the closed upper half-plane with an ordered set of
marked points on R together with the point at infinity.  The only conformal
invariant this package ever needs from such a polygon is the extremal length
of a family of arcs joining two disjoint boundary edges, i.e. the conformal
modulus of a quadrilateral.  Mapping the four relevant endpoints to
(-1/k, -1, 1, 1/k) turns that modulus into a ratio of complete elliptic
integrals, which we evaluate with the arithmetic-geometric mean.

With r the (real, > 1) cross ratio ((a-c)(b-d))/((a-d)(b-c)) of the four
endpoints, the elliptic modulus solves k^2 - (4r-2)k + 1 = 0.  We use the
root k = 1/(2r-1 + 2 sqrt(r(r-1))) and the algebraically equivalent
k' = 2 (r(r-1))^{1/4} / sqrt(2r-1 + 2 sqrt(r(r-1))), both stable for r
near 1 and for huge r.  The modulus of arcs joining (a,b) to (c,d) is then

    ext = 2 K(k) / K(k') = 2 agm(1, k) / agm(1, k').
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

INF = math.inf

__all__ = [
    "INF",
    "agm",
    "ellipk_agm",
    "quad_modulus",
    "CycleComponent",
    "Cycle",
    "ConformalPolygon",
]


def agm(a: float, b: float, tol: float = 1e-15) -> float:
    """Arithmetic-geometric mean of two positive reals.

    Converges quadratically; 1e-15 relative tolerance is reached in a
    handful of iterations for any sane input.
    """
    if a <= 0.0 or b <= 0.0:
        raise ValueError(f"agm needs positive arguments, got {a}, {b}")
    while abs(a - b) > tol * a:
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    return 0.5 * (a + b)


def ellipk_agm(k: float) -> float:
    """Complete elliptic integral K(k), modulus convention, via the AGM."""
    if not 0.0 <= k < 1.0:
        raise ValueError(f"modulus k must lie in [0, 1), got {k}")
    kp = math.sqrt((1.0 - k) * (1.0 + k))
    return math.pi / (2.0 * agm(1.0, kp))


def _cross_ratio(a: float, b: float, c: float, d: float) -> float:
    """((a-c)(b-d)) / ((a-d)(b-c)) with at most one argument infinite."""
    pts = (a, b, c, d)
    n_inf = sum(math.isinf(p) for p in pts)
    if n_inf > 1:
        raise ValueError("cross ratio with more than one point at infinity")
    if math.isinf(a):
        return (b - d) / (b - c)
    if math.isinf(b):
        return (a - c) / (a - d)
    if math.isinf(c):
        return (b - d) / (a - d)
    if math.isinf(d):
        return (a - c) / (b - c)
    return ((a - c) * (b - d)) / ((a - d) * (b - c))


def quad_modulus(a: float, b: float, c: float, d: float) -> float:
    """Extremal length of arcs joining boundary side (a,b) to side (c,d).

    The four points must be distinct and in cyclic order on R + {inf}
    (ascending, with inf allowed in any single slot).  The result is the
    conformal modulus of the quadrilateral: 1 for the square symmetric
    arrangement (-1, 0, 1, inf) with sides (-1,0) and (1,inf).
    """
    r = _cross_ratio(a, b, c, d)
    if not r > 1.0:
        raise ValueError(
            f"endpoints ({a}, {b}, {c}, {d}) are not in cyclic order "
            f"(cross ratio {r} <= 1)"
        )
    s = math.sqrt(r * (r - 1.0))
    dd = (2.0 * r - 1.0) + 2.0 * s
    k = 1.0 / dd
    kp = 2.0 * (r * (r - 1.0)) ** 0.25 / math.sqrt(dd)
    return 2.0 * agm(1.0, k) / agm(1.0, kp)


@dataclass(frozen=True)
class CycleComponent:
    """One component of a cycle on a conformal polygon.

    ``kind == "joining"``: arcs joining edge ``foot_a`` to edge ``foot_b``.
    ``kind == "encircling"``: arcs around edge ``foot_a``; scored as the
    modulus of the quadrilateral joining the two flanking edges, so
    ``foot_b`` is ignored and may be -1.
    """

    kind: str
    foot_a: int
    foot_b: int = -1
    label: str = ""

    def __post_init__(self) -> None:
        if self.kind not in ("joining", "encircling"):
            raise ValueError(f"unknown cycle component kind {self.kind!r}")


@dataclass(frozen=True)
class Cycle:
    """A (possibly two-component) cycle used by the height function."""

    name: str
    components: tuple[CycleComponent, ...]

    def __iter__(self):
        return iter(self.components)


class ConformalPolygon:
    """Upper half-plane with marked points ``points`` (ascending) plus inf.

    Vertex ``i`` for ``i < len(points)`` is ``points[i]``; the final vertex
    is the point at infinity.  Edge ``i`` joins vertex ``i`` to vertex
    ``i+1`` cyclically, so the last two edges are the rays
    ``(points[-1], inf)`` and ``(inf, points[0])``.
    """

    def __init__(self, points: Sequence[float]):
        pts = [float(p) for p in points]
        if any(math.isinf(p) for p in pts):
            raise ValueError("pass only the finite marked points; inf is implicit")
        if any(pts[i] >= pts[i + 1] for i in range(len(pts) - 1)):
            raise ValueError("marked points must be strictly increasing")
        if len(pts) < 3:
            raise ValueError("need at least 3 finite marked points")
        self.points = tuple(pts)

    @property
    def n_vertices(self) -> int:
        return len(self.points) + 1

    def vertex(self, i: int) -> float:
        i %= self.n_vertices
        return self.points[i] if i < len(self.points) else INF

    def edge(self, i: int) -> tuple[float, float]:
        i %= self.n_vertices
        return (self.vertex(i), self.vertex(i + 1))

    def is_symmetric(self, tol: float = 1e-9) -> bool:
        """True if the marked set is invariant under t -> -t.

        This is the reflectional symmetry all solver polygons carry: the
        involution fixes one finite marked point (which must be 0) and inf.
        """
        pts = self.points
        scale = max(abs(p) for p in pts)
        return all(
            abs(pts[i] + pts[len(pts) - 1 - i]) <= tol * scale
            for i in range(len(pts))
        )

    # -- extremal length ---------------------------------------------------

    def extremal_length_between(self, edge_a: int, edge_b: int) -> float:
        """Extremal length of arcs joining two disjoint boundary edges."""
        n = self.n_vertices
        i, j = edge_a % n, edge_b % n
        if i == j or (i + 1) % n == j or (j + 1) % n == i:
            raise ValueError(
                f"edges {edge_a} and {edge_b} share a vertex; the joining "
                "family is degenerate"
            )
        if i > j:
            i, j = j, i
        a, b = self.edge(i)
        c, d = self.edge(j)
        return quad_modulus(a, b, c, d)

    def encircling_extremal_length(self, edge_i: int) -> float:
        """Flanking-quadrilateral score of a cycle around one edge."""
        return self.extremal_length_between(edge_i - 1, edge_i + 1)

    def cycle_extremal_length(self, cycle: Cycle) -> float:
        """Sum of the component moduli.

        For the symmetric two-component cycles this equals twice the
        modulus of either component.
        """
        total = 0.0
        for comp in cycle.components:
            if comp.kind == "joining":
                total += self.extremal_length_between(comp.foot_a, comp.foot_b)
            else:
                total += self.encircling_extremal_length(comp.foot_a)
        return total

    def __repr__(self) -> str:
        body = ", ".join(f"{p:.6g}" for p in self.points)
        return f"ConformalPolygon([{body}], inf)"
