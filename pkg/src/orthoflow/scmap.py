"""Schwarz-Christoffel maps with half-odd-integer exponents (orthodisks).

An orthodisk is the image of the upper half-plane under

    F(z) = scale * integral of  prod_k (t - t_k)^(a_k / 2)  dt,

with all ``a_k`` odd integers and the exponent at infinity fixed by
``a_inf = -4 - sum(a_k)``.  Boundary edges develop to straight segments
parallel to the coordinate axes; a vertex with ``a_k > -2`` is a finite
cone point of angle ``pi (a_k + 2) / 2``, a vertex with ``a_k <= -3`` sits
at infinity.  Powers use the principal log, so ``arg(z - t_k)`` lies in
``[0, pi]`` on the closed upper half-plane and no branch tracking is ever
needed here.

The three numerical primitives are

* ``edge_length``: Gauss-Jacobi quadrature absorbing the endpoint
  singularities exactly (order 24 per half-edge, split at the midpoint;
  edges reaching the vertex at infinity use the rational substitution
  t = t0 + h (1+x)/(1-x), whose far endpoint carries the Jacobi weight
  belonging to the exponent at infinity),
* ``develop``: positions of finite vertices as path integrals of the
  integrand from a hub point high above the prevertex range (horizontal
  leg plus a vertical descent column made of geometrically shrinking
  panels and a Gauss-Jacobi bottom panel),
* ``solve_parameter_problem``: trust-region least squares matching a
  developed target (edge lengths and relative vertex offsets), with the
  overall scale eliminated by normalization.

Periods of cycles joining two parallel boundary edges are read off a
developed orthodisk as the perpendicular offset between the two edge
lines; ``period_integral`` computes the same difference F(q) - F(p) by
direct quadrature along a path through the interior, which the tests use
as the independent route.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import numpy as np
from scipy.optimize import least_squares
from scipy.special import roots_jacobi, roots_legendre

__all__ = [
    "OrthodiskSpec",
    "Developed",
    "DevelopTarget",
    "FitResult",
    "edge_length",
    "develop",
    "period_integral",
    "solve_parameter_problem",
    "developed_to_svg",
]

_GJ_ORDER = 24
_GL_NODES, _GL_WEIGHTS = roots_legendre(16)


@dataclass(frozen=True)
class OrthodiskSpec:
    """Finite prevertices (ascending), odd integer exponents, and scale.

    Vertex ``n_finite`` is the point at infinity with exponent
    ``exponent_inf``; edge ``i`` joins vertex ``i`` to vertex ``i+1``
    cyclically, so edges ``n_finite - 1`` and ``n_finite`` are the two
    parameter rays ``(t_last, +oo)`` and ``(-oo, t_first)``.
    """

    prevertices: tuple[float, ...]
    exponents: tuple[int, ...]
    exponent_inf: int
    scale: complex = 1.0 + 0.0j

    def __post_init__(self):
        t = self.prevertices
        a = self.exponents
        if len(t) != len(a):
            raise ValueError("prevertices and exponents length mismatch")
        if any(t[i] >= t[i + 1] for i in range(len(t) - 1)):
            raise ValueError("prevertices must be strictly increasing")
        if any(ai % 2 == 0 for ai in a) or self.exponent_inf % 2 == 0:
            raise ValueError("orthodisk exponents must be odd integers")
        if sum(a) + self.exponent_inf != -4:
            raise ValueError(
                f"exponent sum rule violated: sum {sum(a)} + inf "
                f"{self.exponent_inf} != -4"
            )

    @property
    def n_finite(self) -> int:
        return len(self.prevertices)

    @property
    def n_vertices(self) -> int:
        return self.n_finite + 1

    @property
    def n_edges(self) -> int:
        return self.n_finite + 1

    def vertex_exponent(self, i: int) -> int:
        i %= self.n_vertices
        return self.exponents[i] if i < self.n_finite else self.exponent_inf

    def vertex_is_finite(self, i: int) -> bool:
        """Finite developed vertex, i.e. integrable endpoint singularity."""
        return self.vertex_exponent(i) > -2

    def edge_vertices(self, i: int) -> tuple[int, int]:
        i %= self.n_edges
        return i, (i + 1) % self.n_vertices

    def edge_is_finite(self, i: int) -> bool:
        u, v = self.edge_vertices(i)
        return self.vertex_is_finite(u) and self.vertex_is_finite(v)

    def edge_direction(self, i: int) -> complex:
        """Unit direction of the developed edge.

        On the gap ``(t_i, t_{i+1})`` each factor with ``t_k > t`` has
        argument pi, contributing ``pi a_k / 2``; the result is the phase
        of ``scale`` times a fourth root of unity, so consecutive edges
        alternate between horizontal and vertical.
        """
        i %= self.n_edges
        if i == self.n_finite:  # the ray (-oo, t_first): every factor counts
            tail = sum(self.exponents)
        else:
            tail = sum(self.exponents[i + 1 :])
        phase = self.scale / abs(self.scale)
        return complex(phase * np.exp(1j * (math.pi / 2.0) * tail))

    def integrand(self, z: np.ndarray | complex) -> np.ndarray:
        """scale * prod (z - t_k)^(a_k/2), principal branch."""
        z = np.asarray(z, dtype=complex)
        logsum = np.zeros_like(z)
        for tk, ak in zip(self.prevertices, self.exponents):
            logsum = logsum + (0.5 * ak) * np.log(z - tk)
        return self.scale * np.exp(logsum)

    def log_abs_integrand(self, t: np.ndarray) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        out = np.full_like(t, math.log(abs(self.scale)))
        for tk, ak in zip(self.prevertices, self.exponents):
            out = out + (0.5 * ak) * np.log(np.abs(t - tk))
        return out

    @property
    def span(self) -> float:
        if self.n_finite < 2:
            return 1.0
        return self.prevertices[-1] - self.prevertices[0]

    def min_gap(self) -> float:
        t = self.prevertices
        if len(t) < 2:
            return 1.0
        return min(t[i + 1] - t[i] for i in range(len(t) - 1))


# ---------------------------------------------------------------------------
# edge lengths


def _nearest_other(spec: OrthodiskSpec, t0: float) -> float:
    """Distance from t0 to the nearest prevertex different from t0."""
    ds = [abs(tk - t0) for tk in spec.prevertices if tk != t0]
    return min(ds) if ds else max(spec.span, 1.0)


def _gl_abs_panel(spec: OrthodiskSpec, a: float, b: float) -> float:
    t = a + 0.5 * (b - a) * (_GL_NODES + 1.0)
    g = np.exp(spec.log_abs_integrand(t))
    return 0.5 * (b - a) * float(np.dot(_GL_WEIGHTS, g))


def _graded_abs_panels(spec: OrthodiskSpec, a: float, b: float) -> float:
    """integral of |f| over [a, b], no prevertex inside the open interval.

    Gauss-Legendre panels whose length is capped by half the distance to
    the nearest prevertex, so clustered prevertices just outside the
    interval cost a logarithmic number of panels instead of accuracy.
    """
    if b <= a:
        return 0.0
    total, t = 0.0, a
    while t < b:
        d = min(abs(t - tk) for tk in spec.prevertices)
        step = min(b - t, 0.5 * d)
        if step <= 0.0 or t + step == t:  # clearance underflow: finish flat
            total += _gl_abs_panel(spec, t, b)
            break
        total += _gl_abs_panel(spec, t, t + step)
        t += step
    return total


def _gj_half_edge(spec: OrthodiskSpec, t_sing: float, t_mid: float, a_sing: int) -> float:
    """integral of |f| over the half edge from the singular endpoint
    t_sing to the regular midpoint t_mid, absorbing |t - t_sing|^(a/2).

    The Gauss-Jacobi panel only extends to half the distance of the
    nearest other prevertex; the remainder of the half edge is covered by
    clearance-graded Gauss-Legendre panels, which keeps full accuracy for
    arbitrarily lopsided prevertex gaps.
    """
    beta = 0.5 * a_sing
    length = abs(t_mid - t_sing)
    sgn = 1.0 if t_mid > t_sing else -1.0
    delta = min(length, 0.45 * _nearest_other(spec, t_sing))
    x, w = roots_jacobi(_GJ_ORDER, 0.0, beta)
    h = 0.5 * sgn * delta  # signed half-length of the singular panel
    t = t_sing + (x + 1.0) * h
    logg = spec.log_abs_integrand(t) - beta * np.log(np.abs(t - t_sing))
    val = float(np.dot(w, np.exp(logg))) * abs(h) ** (beta + 1.0)
    if delta < length:
        a, b = sorted((t_sing + sgn * delta, t_mid))
        val += _graded_abs_panels(spec, a, b)
    return val


def _gj_ray_edge(spec: OrthodiskSpec, outward: int) -> float:
    """Length of a ray edge ending at the vertex at infinity.

    outward=+1 is the edge (t_last, +oo), outward=-1 is (-oo, t_first).
    Three stages: a Gauss-Jacobi panel absorbing the finite endpoint
    singularity (sized by the nearest other prevertex), clearance-graded
    Gauss-Legendre panels out to twice the prevertex span, and the tail
    under t = T + outward * H (1+x)/(1-x), where the exponent sum rule
    turns the growth of |f| at infinity into the Jacobi weight
    (1-x)^(a_inf/2) at x=1.
    """
    a_inf = spec.exponent_inf
    if a_inf <= -2:
        return math.inf
    if outward > 0:
        t0, a0 = spec.prevertices[-1], spec.exponents[-1]
        t_far = spec.prevertices[0]
    else:
        t0, a0 = spec.prevertices[0], spec.exponents[0]
        t_far = spec.prevertices[-1]
    if a0 <= -2:
        return math.inf
    alpha = 0.5 * a_inf
    beta = 0.5 * a0
    scale = max(spec.span, _nearest_other(spec, t0))

    delta = 0.45 * _nearest_other(spec, t0)
    x, w = roots_jacobi(_GJ_ORDER, 0.0, beta)
    h = 0.5 * outward * delta
    t = t0 + (x + 1.0) * h
    logg = spec.log_abs_integrand(t) - beta * np.log(np.abs(t - t0))
    val = float(np.dot(w, np.exp(logg))) * abs(h) ** (beta + 1.0)

    T = t0 + outward * 2.0 * scale
    a, b = sorted((t0 + outward * delta, T))
    val += _graded_abs_panels(spec, a, b)

    # tail: every prevertex is at least 2*scale behind T, so the mapped
    # singularities stay well clear of [-1, 1]
    H = abs(T - t_far)
    x2, w2 = roots_jacobi(_GJ_ORDER, alpha, 0.0)
    t2 = T + outward * H * (1.0 + x2) / (1.0 - x2)
    logg2 = spec.log_abs_integrand(t2) + math.log(2.0 * H)
    logg2 = logg2 - (2.0 + alpha) * np.log(1.0 - x2)
    return val + float(np.dot(w2, np.exp(logg2)))


def edge_length(spec: OrthodiskSpec, i: int) -> float:
    """Developed length of boundary edge ``i`` (may be inf)."""
    i %= spec.n_edges
    if not spec.edge_is_finite(i):
        return math.inf
    if i < spec.n_finite - 1:
        ta, tb = spec.prevertices[i], spec.prevertices[i + 1]
        tm = 0.5 * (ta + tb)
        return _gj_half_edge(spec, ta, tm, spec.exponents[i]) + _gj_half_edge(
            spec, tb, tm, spec.exponents[i + 1]
        )
    return _gj_ray_edge(spec, +1 if i == spec.n_finite - 1 else -1)


# ---------------------------------------------------------------------------
# interior path integrals and the developed figure


def _gl_segment(spec: OrthodiskSpec, za: complex, zb: complex) -> complex:
    z = za + 0.5 * (zb - za) * (_GL_NODES + 1.0)
    return 0.5 * (zb - za) * complex(np.dot(_GL_WEIGHTS, spec.integrand(z)))


def _vertical_ascent(spec: OrthodiskSpec, zb: complex, height: float) -> complex:
    """integral of f from zb straight up to Re(zb) + i*height.

    zb may lie on the real axis at a regular boundary point; panels
    shrink geometrically toward the bottom, each split in two, so the
    nearest prevertex (at horizontal distance the local gap) never
    spoils Gauss-Legendre convergence.
    """
    x0, y0 = zb.real, zb.imag
    if y0 >= height:
        return 0.0 + 0.0j
    local = min(abs(x0 - tk) for tk in spec.prevertices)
    local = max(local, y0, 1e-9 * (spec.span + 1.0))
    ys = [y0]
    y = min(y0 + 0.4 * local, 0.5 * (y0 + height))
    while y < height:
        ys.append(y)
        y = min(2.0 * y - y0 if y > y0 else height, height)
        if y <= ys[-1]:
            y = height
    ys.append(height)
    total = 0.0 + 0.0j
    for ya, yb in zip(ys[:-1], ys[1:]):
        ym = 0.5 * (ya + yb)
        total += _gl_segment(spec, complex(x0, ya), complex(x0, ym))
        total += _gl_segment(spec, complex(x0, ym), complex(x0, yb))
    return total


def _column_integral(spec: OrthodiskSpec, tv: float, av: int, height: float) -> complex:
    """integral of f from the prevertex tv up to tv + i*height.

    The bottom panel absorbs the (z - tv)^(av/2) singularity with a
    Gauss-Jacobi rule; substituting z = tv + i y makes that factor
    i^(av/2) y^(av/2) with a constant, explicit phase.
    """
    others = [abs(tk - tv) for tk in spec.prevertices if tk != tv]
    local = min(others) if others else height
    delta = min(0.25 * local, 0.5 * height)
    beta = 0.5 * av
    x, w = roots_jacobi(_GJ_ORDER, 0.0, beta)
    y = 0.5 * delta * (x + 1.0)
    z = tv + 1j * y
    logsum = np.zeros_like(z)
    for tk, ak in zip(spec.prevertices, spec.exponents):
        if tk == tv:
            continue
        logsum = logsum + (0.5 * ak) * np.log(z - tk)
    rest = spec.scale * np.exp(logsum)
    phase = np.exp(1j * beta * (math.pi / 2.0))
    bottom = 1j * phase * (0.5 * delta) ** (beta + 1.0) * complex(np.dot(w, rest))
    return bottom + _vertical_ascent(spec, complex(tv, delta), height)


@dataclass
class Developed:
    """Developed boundary data of an orthodisk.

    ``positions[i]`` is F at finite vertex ``i`` (NaN for vertices at
    infinity), with the arbitrary additive constant fixed by the hub
    point; only differences are meaningful.  ``consistency`` is the
    maximum relative mismatch between position differences and direct
    edge-length quadrature over the finite edges -- a built-in check
    that two independent routes to the same geometry agree.
    """

    spec: OrthodiskSpec
    positions: np.ndarray
    directions: np.ndarray
    lengths: np.ndarray
    consistency: float

    def vertex_position(self, i: int) -> complex:
        return complex(self.positions[i % self.spec.n_vertices])

    def edge_anchor(self, i: int) -> complex:
        """A developed point on edge i's line (a finite endpoint)."""
        u, v = self.spec.edge_vertices(i)
        pu, pv = self.positions[u], self.positions[v]
        if not np.isnan(pu.real):
            return complex(pu)
        if not np.isnan(pv.real):
            return complex(pv)
        raise ValueError(f"edge {i} has no finite endpoint to anchor on")

    def period_between(self, edge_a: int, edge_b: int) -> complex:
        """Perpendicular offset from edge_a's line to edge_b's line.

        The edges must develop parallel; the offset is the developed
        period of the cycle joining them.
        """
        da = complex(self.directions[edge_a % self.spec.n_edges])
        db = complex(self.directions[edge_b % self.spec.n_edges])
        cross = da.real * db.imag - da.imag * db.real
        if abs(cross) > 1e-8:
            raise ValueError(
                f"edges {edge_a} and {edge_b} are not parallel "
                f"(directions {da:.3f}, {db:.3f})"
            )
        delta = self.edge_anchor(edge_b) - self.edge_anchor(edge_a)
        par = delta.real * da.real + delta.imag * da.imag
        return delta - par * da


def develop(
    spec: OrthodiskSpec,
    position_vertices: Iterable[int] | None = None,
) -> Developed:
    """Develop the orthodisk boundary.

    ``position_vertices`` restricts the (comparatively expensive) path
    integrals to a subset of finite vertices; lengths and directions are
    always computed for every edge.
    """
    n = spec.n_vertices
    directions = np.array([spec.edge_direction(i) for i in range(spec.n_edges)])
    lengths = np.array([edge_length(spec, i) for i in range(spec.n_edges)])

    t = np.asarray(spec.prevertices)
    center = 0.5 * (t[0] + t[-1])
    height = 0.75 * max(spec.span, 1.0)
    hub = complex(center, height)

    if position_vertices is None:
        wanted = [i for i in range(n) if spec.vertex_is_finite(i)]
    else:
        wanted = sorted({i % n for i in position_vertices})
        for i in wanted:
            if not spec.vertex_is_finite(i):
                raise ValueError(f"vertex {i} develops to infinity")

    positions = np.full(n, np.nan + 1j * np.nan, dtype=complex)
    for i in wanted:
        if i == spec.n_finite:
            positions[i] = _hub_to_infinity(spec, hub)
        else:
            positions[i] = _hub_to_vertex(spec, hub, i)

    # dual-route check: edge-length quadrature vs position differences
    mism, ref = 0.0, 0.0
    for e in range(spec.n_edges):
        u, v = spec.edge_vertices(e)
        pu, pv = positions[u], positions[v]
        if np.isnan(pu.real) or np.isnan(pv.real) or not np.isfinite(lengths[e]):
            continue
        mism = max(mism, abs((pv - pu) - directions[e] * lengths[e]))
        ref = max(ref, float(lengths[e]))
    return Developed(spec, positions, directions, lengths, mism / max(ref, 1e-300))


def _hub_to_vertex(spec: OrthodiskSpec, hub: complex, i: int) -> complex:
    """F(vertex i) - F(hub) for a finite vertex i < n_finite."""
    tv = spec.prevertices[i]
    av = spec.exponents[i]
    height = hub.imag
    horiz = _horizontal_leg(spec, hub, complex(tv, height))
    return horiz - _column_integral(spec, tv, av, height)


def _hub_to_infinity(spec: OrthodiskSpec, hub: complex) -> complex:
    """F(infinity) - F(hub), integrating straight up from the hub.

    Under z = hub + i H u/(1-u) the integrand of f dz decays like
    (1-u)^(a_inf/2) at u = 1 (the exponent sum rule turns the growth of
    f at infinity into exactly that power), so a Gauss-Jacobi rule with
    that weight nails the improper integral.  Only valid when the vertex
    at infinity is finite, a_inf > -2.
    """
    if spec.exponent_inf <= -2:
        raise ValueError("vertex at infinity develops to infinity")
    alpha = 0.5 * spec.exponent_inf
    H = hub.imag
    x, w = roots_jacobi(_GJ_ORDER, alpha, 0.0)
    u = 0.5 * (x + 1.0)
    z = hub + 1j * H * u / (1.0 - u)
    logf = np.zeros_like(z)
    for tk, ak in zip(spec.prevertices, spec.exponents):
        logf = logf + (0.5 * ak) * np.log(z - tk)
    # f dz du-weight: i H / (1-u)^2, minus the peeled (1-u)^alpha, and the
    # variable change x -> u contributes (1/2)^(alpha+1) on the weight side
    logg = logf - (2.0 + alpha) * np.log(1.0 - u)
    total = 1j * H * complex(np.dot(w, np.exp(logg))) * 0.5 ** (alpha + 1.0)
    return spec.scale * total


def _horizontal_leg(spec: OrthodiskSpec, za: complex, zb: complex) -> complex:
    """GL panels along the horizontal segment [za, zb], panel length
    capped by the (constant) clearance to the real axis."""
    length = abs(zb - za)
    if length == 0.0:
        return 0.0 + 0.0j
    clearance = min(za.imag, zb.imag)
    n = max(1, int(math.ceil(length / (0.8 * clearance))))
    zs = za + (zb - za) * np.arange(n + 1) / n
    total = 0.0 + 0.0j
    for k in range(n):
        total += _gl_segment(spec, zs[k], zs[k + 1])
    return total


def _edge_interior_point(spec: OrthodiskSpec, i: int) -> float:
    """A representative interior point of edge i on the real axis."""
    i %= spec.n_edges
    t = spec.prevertices
    if i < spec.n_finite - 1:
        return 0.5 * (t[i] + t[i + 1])
    h = max(spec.span, spec.min_gap())
    return t[-1] + h if i == spec.n_finite - 1 else t[0] - h


def period_integral(spec: OrthodiskSpec, edge_a: int, edge_b: int) -> complex:
    """F(q) - F(p) for interior points p, q of the two edges, by direct
    quadrature along the path p -> p+ih -> q+ih -> q.

    For parallel edges the component perpendicular to them equals the
    period read off the developed figure; the tests assert the two
    routes agree.
    """
    p = _edge_interior_point(spec, edge_a)
    q = _edge_interior_point(spec, edge_b)
    height = 0.6 * max(spec.span, 1.0)
    up_p = _vertical_ascent(spec, complex(p, 0.0), height)
    up_q = _vertical_ascent(spec, complex(q, 0.0), height)
    across = _horizontal_leg(spec, complex(p, height), complex(q, height))
    return up_p + across - up_q


# ---------------------------------------------------------------------------
# parameter problem


@dataclass
class DevelopTarget:
    """Target geometry for the parameter problem.

    ``edge_lengths`` maps edge index -> positive target length.  The
    edges in ``normalize_edges`` define the overall scale: the developed
    figure is rescaled so their total length matches the targets' total,
    removing the scale unknown from the fit.  ``offsets`` are
    (vertex_i, vertex_j, target) triples prescribing relative positions
    F(v_j) - F(v_i) of finite vertices, used for interior branch points
    whose neighbouring edges are rays.
    """

    edge_lengths: dict[int, float]
    offsets: list[tuple[int, int, complex]] = field(default_factory=list)
    normalize_edges: tuple[int, ...] = ()

    def length_scale(self) -> float:
        vals = list(self.edge_lengths.values())
        vals += [abs(t) for _, _, t in self.offsets]
        return max(vals) if vals else 1.0


@dataclass
class FitResult:
    spec: OrthodiskSpec
    params: np.ndarray
    residual_norm: float
    n_evaluations: int
    developed: Developed
    scale: float

    @property
    def converged(self) -> bool:
        return bool(self.residual_norm < 1e-8)


def solve_parameter_problem(
    build_spec: Callable[[np.ndarray], OrthodiskSpec],
    x0: np.ndarray | Sequence[float],
    target: DevelopTarget,
    xtol: float = 1e-14,
    max_nfev: int = 400,
) -> FitResult:
    """Fit prevertices so the developed orthodisk matches ``target``.

    ``build_spec`` maps the free parameter vector (the caller's gauge,
    typically log-gaps respecting the polygon symmetry) to a unit-scale
    spec.  Residuals are log length ratios plus normalized offset
    mismatches.  The system is generally overdetermined but consistent
    at the solution, which is exactly what a least-squares backend wants.
    """
    x0 = np.asarray(x0, dtype=float)
    norm_edges = tuple(target.normalize_edges) or tuple(sorted(target.edge_lengths)[:1])
    off_vertices = sorted(
        {i for i, _, _ in target.offsets} | {j for _, j, _ in target.offsets}
    )
    if norm_edges:
        target_norm = sum(target.edge_lengths[e] for e in norm_edges)
    else:
        # no finite target edges: normalize by the offset magnitudes instead
        target_norm = sum(abs(t) for _, _, t in target.offsets)
    lscale = target.length_scale()
    n_res = len(target.edge_lengths) + 2 * len(target.offsets)
    evals = 0

    def fit_scale(dev: Developed) -> float:
        if norm_edges:
            dev_norm = sum(dev.lengths[e] for e in norm_edges)
        else:
            dev_norm = sum(
                abs(dev.positions[j] - dev.positions[i])
                for i, j, _ in target.offsets
            )
        if not np.isfinite(dev_norm) or dev_norm <= 0.0:
            return math.nan
        return target_norm / dev_norm

    def residuals(x: np.ndarray) -> np.ndarray:
        nonlocal evals
        evals += 1
        try:
            spec = build_spec(x)
            dev = develop(spec, position_vertices=off_vertices)
        except ValueError:
            # chart wandered into a prevertex collision; wall of cost
            return np.full(n_res, 1e6)
        s = fit_scale(dev)
        if not np.isfinite(s):
            return np.full(n_res, 1e6)
        out = []
        for e, tlen in sorted(target.edge_lengths.items()):
            le = dev.lengths[e] * s
            out.append(math.log(le / tlen) if np.isfinite(le) and le > 0 else 1e3)
        for i, j, toff in target.offsets:
            doff = (dev.positions[j] - dev.positions[i]) * s
            out.append((doff.real - toff.real) / lscale)
            out.append((doff.imag - toff.imag) / lscale)
        return np.asarray(out)

    if x0.size == 0:
        r = residuals(x0)
        spec = build_spec(x0)
        dev = develop(spec, position_vertices=off_vertices)
        return FitResult(spec, x0, float(np.linalg.norm(r)), evals, dev, fit_scale(dev))

    res = least_squares(
        residuals,
        x0,
        method="lm" if n_res >= x0.size else "trf",
        xtol=xtol,
        ftol=1e-15,
        gtol=1e-15,
        max_nfev=max_nfev,
    )
    spec = build_spec(res.x)
    dev = develop(spec, position_vertices=off_vertices)
    return FitResult(
        spec, res.x, float(np.linalg.norm(res.fun)), evals, dev, fit_scale(dev)
    )


# ---------------------------------------------------------------------------
# SVG export of the developed figure


def developed_to_svg(dev: Developed, filename: str, ray_display: float | None = None) -> None:
    """Write the developed boundary as an SVG line drawing.

    Finite edges are solid; edges reaching infinity are drawn dashed with
    a fixed display length from their finite endpoint.
    """
    spec = dev.spec
    finite = [
        dev.positions[i]
        for i in range(spec.n_vertices)
        if not np.isnan(dev.positions[i].real)
    ]
    if not finite:
        raise ValueError("nothing to draw: no finite vertices developed")
    xs = [p.real for p in finite]
    ys = [p.imag for p in finite]
    span = max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    ray = ray_display if ray_display is not None else 0.35 * span
    segs = []
    for e in range(spec.n_edges):
        u, v = spec.edge_vertices(e)
        pu, pv = dev.positions[u], dev.positions[v]
        d = complex(dev.directions[e])
        fu, fv = not np.isnan(pu.real), not np.isnan(pv.real)
        if fu and fv:
            segs.append((complex(pu), complex(pv), True))
        elif fu:
            segs.append((complex(pu), complex(pu) + d * ray, False))
        elif fv:
            segs.append((complex(pv) - d * ray, complex(pv), False))
    pad = 0.08 * span + ray
    x0, y0 = min(xs) - pad, min(ys) - pad
    x1, y1 = max(xs) + pad, max(ys) + pad
    w, h = x1 - x0, y1 - y0
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {w:.6g} {h:.6g}" '
        f'width="640" height="{max(1, round(640 * h / w))}">',
        f'<g transform="translate({-x0:.6g},{y1:.6g}) scale(1,-1)" '
        f'stroke="black" fill="none" stroke-width="{0.004 * span:.6g}">',
    ]
    for pa, pb, solid in segs:
        dash = (
            "" if solid else f' stroke-dasharray="{0.02 * span:.6g} {0.015 * span:.6g}"'
        )
        lines.append(
            f'<line x1="{pa.real:.6g}" y1="{pa.imag:.6g}" '
            f'x2="{pb.real:.6g}" y2="{pb.imag:.6g}"{dash}/>'
        )
    for i in range(spec.n_vertices):
        p = dev.positions[i]
        if not np.isnan(p.real):
            lines.append(
                f'<circle cx="{p.real:.6g}" cy="{p.imag:.6g}" '
                f'r="{0.012 * span:.6g}" fill="black"/>'
            )
    lines.append("</g></svg>")
    with open(filename, "w") as fh:
        fh.write("\n".join(lines))
