"""Reflexive orthodisk pairs by optimization over the moduli space.

Two independent formulations find the same solutions:

* ``minimize_height`` walks the geometric coordinates, evaluating the
  height (a sum of squared per-cycle mismatches) through the parameter
  problem, exactly as the existence argument does;
* ``minimize_period_residual`` walks a shared prevertex chart and drives
  the period-conjugacy defect of the coordinate cycles to zero directly.

Their agreement on the final polygon is a strong cross-check, since the
first never sees periods and the second never sees extremal lengths.
``continuation_solve`` regenerates a solution of a larger configuration
from a solved smaller one by opening short central edges / splitting a
branch point, and ``push_sign_experiment`` probes the sign structure of
extremal-length derivatives under a conjugacy-preserving edge push.

Height minimization uses trust-region least squares on the vector of
per-cycle mismatch terms rather than scalar descent: the height is a sum
of squares by construction, and the residual structure both accelerates
convergence and keeps the trace monotone in the accepted steps.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import least_squares

from .config import (
    Configuration,
    GeometricCoordinates,
    build_cycle_system,
    dh11_color_cycles,
    validate_coordinates,
)
from .height import (
    FIT_TOL,
    HeightCache,
    HeightReport,
    ParameterProblemFailure,
    evaluate_height,
)
from .polygon import ConformalPolygon, Cycle, CycleComponent
from .scmap import Developed, OrthodiskSpec, develop

__all__ = [
    "HEIGHT_TOL",
    "CONJUGACY_TOL",
    "PERIOD_TOL",
    "SolveResult",
    "PushSignResult",
    "conjugacy_residual",
    "continuation_solve",
    "feasibility_margin",
    "minimize_height",
    "minimize_period_residual",
    "push_sign_experiment",
]

#: A point is reflexive when the height and the period-conjugacy residual
#: are both below their thresholds simultaneously.
HEIGHT_TOL = 1.0e-6
CONJUGACY_TOL = 1.0e-6
#: Success threshold for the direct period-residual formulation (relative).
PERIOD_TOL = 1.0e-10

# exp clipped at 150 keeps squared residuals finite through the worst
# boundary excursions while preserving a strong outward gradient
_EXP_CLIP = 150.0


def _cexp(x: float) -> float:
    return math.exp(min(x, _EXP_CLIP))


def _asinh_exp_diff(a: float, b: float) -> float:
    """asinh(e^a - e^b), evaluated without forming the huge exponentials.

    Equals e^a - e^b to first order near a == b (so least squares sees
    the raw height-term Jacobian at a zero) while growing only linearly
    in max(a, b) far away, keeping the optimization landscape bounded.
    """
    if a == b:
        return 0.0
    sign = 1.0 if a > b else -1.0
    hi, lo = (a, b) if a > b else (b, a)
    if hi - lo > 30.0:
        d = hi  # log |e^a - e^b| to machine precision
    else:
        gap = math.expm1(hi - lo)
        if gap == 0.0:
            return 0.0
        d = lo + math.log(gap)
    if d > 20.0:
        return sign * (d + math.log(2.0))
    if d < -20.0:
        return sign * math.exp(d)
    t = math.exp(d)
    return sign * math.asinh(t)


@dataclass(frozen=True)
class SolveResult:
    """Outcome of one solve, whichever formulation produced it."""

    cfg: Configuration
    gc: GeometricCoordinates | None
    polygon: ConformalPolygon | None
    spec_gdh: OrthodiskSpec | None
    spec_conj: OrthodiskSpec | None
    height: float
    conjugacy_residual: float
    period_residual: float | None
    iterations: int
    trace: tuple[dict, ...]
    method: str
    obstructed: bool = False
    message: str = ""

    @property
    def success(self) -> bool:
        return (
            self.height < HEIGHT_TOL
            and self.conjugacy_residual < CONJUGACY_TOL
        )

    def trace_json_lines(self) -> str:
        return "\n".join(json.dumps(rec) for rec in self.trace)

    def to_dict(self) -> dict:
        return {
            "cfg": self.cfg.to_dict(),
            "method": self.method,
            "success": self.success,
            "obstructed": self.obstructed,
            "height": self.height,
            "conjugacy_residual": self.conjugacy_residual,
            "period_residual": self.period_residual,
            "iterations": self.iterations,
            "message": self.message,
            "prevertices": (
                list(self.spec_gdh.prevertices) if self.spec_gdh else None
            ),
            "free_vector": (
                self.gc.free_vector().tolist() if self.gc is not None else None
            ),
        }


# ---------------------------------------------------------------------------
# shared measurements


def feasibility_margin(gc: GeometricCoordinates, cfg: Configuration) -> float:
    """Smallest signed clearance of the coordinates (negative = outside).

    The numeric twin of ``validate_coordinates``: minimum over edge
    positivity, the four wall clearances of every branch point, and the
    outer-sheet containment of branch points and conjugate slit corners.
    """
    vals = [float(np.min(gc.outer_edges))]
    from .config import staircase_clearance  # local: avoids cycle at import

    corners = gc.corners()
    conj = gc.conjugate_corners()
    for j in range(1, gc.m + 1):
        vals.extend(gc.clearances(cfg, j).values())
        vals.append(
            staircase_clearance(corners, complex(gc.branch_offsets[j - 1]))
        )
    for j in range(gc.m + 1):
        vals.append(
            staircase_clearance(conj, gc.conjugate_map(gc.branch_corner(j)))
        )
    return min(vals)


def _period_basis(cfg: Configuration) -> tuple[Cycle, ...]:
    """Cycles whose periods determine the full conjugate-pair geometry.

    The ladder cycles read off every staircase edge, and each slit edge
    is read against the first and last parallel outer walls, pinning the
    branch-point lines.  Unlike the per-branch box cycles these exist
    for every configuration, including the obstructed ones, so the same
    residual is meaningful on both sides of the m <= n divide.
    """
    m, n = cfg.m, cfg.n
    cycles: list[Cycle] = []
    for s in range(1, 2 * n + 3):
        left = cfg.p_edge_index(0) if s == 1 else cfg.h_slot_index(s - 1)
        right = (
            cfg.p_edge_index(2 * m + 1) if s == 2 * n + 2 else cfg.h_slot_index(s + 1)
        )
        cycles.append(Cycle(f"alpha_{s}", (CycleComponent("joining", left, right),)))
    tread_a, riser_a = cfg.h_slot_index(1), cfg.h_slot_index(2)
    tread_b, riser_b = cfg.h_slot_index(2 * n + 1), cfg.h_slot_index(2 * n + 2)
    for j in range(1, m + 1):
        h_slit = cfg.p_edge_index(2 * j - 1)
        v_slit = cfg.p_edge_index(2 * j)
        feet = [
            (f"upsilon_{j}", h_slit, tread_a),
            (f"rho_{j}", v_slit, riser_a),
        ]
        if tread_b != tread_a:
            feet.append((f"delta_{j}", h_slit, tread_b))
            feet.append((f"lambda_{j}", v_slit, riser_b))
        for name, foot, wall in feet:
            cycles.append(Cycle(name, (CycleComponent("joining", foot, wall),)))
    return tuple(cycles)


def _basis_vertices(spec: OrthodiskSpec, basis) -> list[int]:
    """Finite vertices needed to anchor the basis feet in this domain."""
    need = set()
    for cyc in basis:
        for comp in cyc.components:
            for e in (comp.foot_a, comp.foot_b):
                for v in spec.edge_vertices(e):
                    if spec.vertex_is_finite(v):
                        need.add(v)
    return sorted(need)


def _cycle_periods(dev: Developed, basis) -> np.ndarray:
    out = []
    for cyc in basis:
        total = 0.0 + 0.0j
        for comp in cyc.components:
            total += dev.period_between(comp.foot_a, comp.foot_b)
        out.append(total)
    return np.asarray(out, dtype=complex)


def _conjugacy_vector(
    cfg: Configuration, x: np.ndarray, basis
) -> tuple[np.ndarray, float, Developed, Developed]:
    """Relative conjugacy defect of the period basis at a shared chart.

    In the canonical frames the conjugate of a first-domain period ``p``
    is ``i conj(p)``; the one remaining degree of freedom is a positive
    ratio between the developed scales, eliminated analytically by its
    least-squares optimum.  Each cycle's mismatch is normalized by that
    cycle's own period magnitude, so blowing a pair of edges up to dwarf
    the rest of the figure does not masquerade as convergence.
    """
    spec1 = cfg.orthodisk(x, 1)
    spec2 = cfg.orthodisk(x, 2)
    dev1 = develop(spec1, position_vertices=_basis_vertices(spec1, basis))
    dev2 = develop(spec2, position_vertices=_basis_vertices(spec2, basis))
    p1 = _cycle_periods(dev1, basis)
    p2 = _cycle_periods(dev2, basis)
    mirror = 1j * np.conj(p1)
    kappa0 = float(np.sum(np.abs(p1))) / max(float(np.sum(np.abs(p2))), 1e-300)
    d = np.abs(p1) + kappa0 * np.abs(p2)
    d = d + 1e-9 * max(float(np.mean(d)), 1e-300)
    denom = float(np.sum(np.abs(p2) ** 2 / d**2))
    s = float(np.sum((np.conj(p2) * mirror).real / d**2)) / max(denom, 1e-300)
    s = max(s, 1e-6 * kappa0)  # a conjugate pair has a positive scale ratio
    resid = (s * p2 - mirror) / d
    r = np.concatenate([resid.real, resid.imag])
    return r, s, dev1, dev2


def conjugacy_residual(cfg: Configuration, x: np.ndarray) -> float:
    """Relative period-conjugacy residual of a shared prevertex chart."""
    basis = _period_basis(cfg)
    r, _, _, _ = _conjugacy_vector(cfg, np.asarray(x, float), basis)
    return float(np.linalg.norm(r))


def _gc_from_chart(
    cfg: Configuration, x: np.ndarray
) -> GeometricCoordinates:
    """Geometric coordinates realized by the first orthodisk at chart x."""
    dev = develop(cfg.orthodisk(x, 1))
    edges = np.array(
        [dev.lengths[cfg.h_slot_index(s)] for s in range(1, 2 * cfg.n + 3)]
    )
    c1 = dev.vertex_position(cfg.ascending_index("C1"))
    offs = np.array(
        [
            dev.vertex_position(cfg.ascending_index(f"P{2 * j}")) - c1
            for j in range(1, cfg.m + 1)
        ],
        dtype=complex,
    )
    total = float(np.sum(edges))
    gc = GeometricCoordinates(cfg.m, cfg.n, edges / total, offs / total)
    if not validate_coordinates(gc, cfg):
        # exact mirror projection through the free chart
        gc = GeometricCoordinates.from_free_vector(cfg, gc.free_vector())
    return gc


def _obstructed_result(cfg: Configuration, method: str) -> SolveResult:
    return SolveResult(
        cfg=cfg,
        gc=None,
        polygon=None,
        spec_gdh=None,
        spec_conj=None,
        height=math.inf,
        conjugacy_residual=math.inf,
        period_residual=None,
        iterations=0,
        trace=(),
        method=method,
        obstructed=True,
        message=(
            f"configuration ({cfg.m},{cfg.n}) has no conjugate-pair moduli "
            "space (m > n); see the obstruction certificate"
        ),
    )


# ---------------------------------------------------------------------------
# formulation 1: height minimization over geometric coordinates


def minimize_height(
    cfg: Configuration,
    init: GeometricCoordinates | None = None,
    *,
    max_nfev: int = 400,
    xtol: float = 1e-14,
    cache: HeightCache | None = None,
) -> SolveResult:
    """Drive the total height to zero over the free coordinates.

    Trust-region least squares on the per-cycle mismatch vector, with the
    height evaluated through the parameter problem at every step.  Steps
    that leave the admissible region or defeat the parameter problem see
    a sloped penalty and back off.  Success means the final height and
    the period-conjugacy residual (measured at the fitted domain-1 chart)
    are both below threshold; a stall above threshold returns the best
    point flagged non-reflexive.
    """
    if cfg.obstructed:
        return _obstructed_result(cfg, "height")
    gc0 = init if init is not None else GeometricCoordinates.cold_start(cfg)
    problems = validate_coordinates(gc0, cfg)
    if problems:
        raise ValueError("initial coordinates invalid: " + "; ".join(problems))
    if cache is None:
        cache = HeightCache()
    cycles = tuple(build_cycle_system(cfg))
    k = cfg.chart_size
    trace: list[dict] = []
    state = {"n": 0, "best": math.inf, "x_best": None}

    def record(height: float, resid: float, v: np.ndarray):
        if height < state["best"]:
            state["best"] = height
            state["x_best"] = np.array(v, dtype=float)
            trace.append(
                {
                    "iteration": state["n"],
                    "height": height,
                    "residual": resid,
                    "coordinates": [round(c, 15) for c in v.tolist()],
                }
            )

    def residual(v: np.ndarray) -> np.ndarray:
        state["n"] += 1
        gc = GeometricCoordinates.from_free_vector(cfg, v)
        margin = feasibility_margin(gc, cfg)
        if margin <= 0.0:
            # outside the admissible region the penalty dominates every
            # in-region cost, so steps over the wall are never accepted
            return np.full(2 * k, 1.0e6 * (1.0 - margin))
        try:
            rep = evaluate_height(gc, cfg, cache=cache, check=False)
        except (ParameterProblemFailure, ValueError):
            # fit stall or degenerate fitted polygon; wall of constant cost
            return np.full(2 * k, 1.0e5)
        r = np.empty(2 * k)
        for i, s in enumerate(rep.scores):
            r[2 * i] = _asinh_exp_diff(1.0 / s.ext_gdh, 1.0 / s.ext_conj)
            r[2 * i + 1] = _asinh_exp_diff(s.ext_gdh, s.ext_conj)
        record(rep.total, float(np.linalg.norm(r)), v)
        return r

    if k == 0:
        rep = evaluate_height(gc0, cfg, cache=cache)
        x0 = np.zeros(0)
        conj_res = conjugacy_residual(cfg, x0)
        return SolveResult(
            cfg=cfg,
            gc=gc0,
            polygon=rep.polygon_gdh,
            spec_gdh=rep.fit_gdh.spec,
            spec_conj=rep.fit_conj.spec,
            height=rep.total,
            conjugacy_residual=conj_res,
            period_residual=None,
            iterations=1,
            trace=(
                {
                    "iteration": 0,
                    "height": rep.total,
                    "residual": math.sqrt(rep.total),
                    "coordinates": [],
                },
            ),
            method="height",
            message="zero-dimensional moduli space",
        )

    sol = least_squares(
        residual,
        gc0.free_vector(),
        method="lm",
        xtol=xtol,
        ftol=1e-15,
        gtol=1e-15,
        max_nfev=max_nfev,
    )
    gc_fin = GeometricCoordinates.from_free_vector(cfg, sol.x)
    if validate_coordinates(gc_fin, cfg):
        # optimizer terminated outside the admissible region; fall back
        # to the best admissible point it visited
        if state["x_best"] is None:
            return SolveResult(
                cfg=cfg,
                gc=gc_fin,
                polygon=None,
                spec_gdh=None,
                spec_conj=None,
                height=math.inf,
                conjugacy_residual=math.inf,
                period_residual=None,
                iterations=int(state["n"]),
                trace=tuple(trace),
                method="height",
                message="no admissible point visited: start infeasible "
                "or every step left the region",
            )
        gc_fin = GeometricCoordinates.from_free_vector(cfg, state["x_best"])
    rep = evaluate_height(gc_fin, cfg, cache=cache, cycles=cycles)
    conj_res = conjugacy_residual(cfg, rep.fit_gdh.params)
    msg = "" if rep.total < HEIGHT_TOL else (
        f"stalled at height {rep.total:.3e}: best point is not reflexive"
    )
    return SolveResult(
        cfg=cfg,
        gc=gc_fin,
        polygon=rep.polygon_gdh,
        spec_gdh=rep.fit_gdh.spec,
        spec_conj=rep.fit_conj.spec,
        height=rep.total,
        conjugacy_residual=conj_res,
        period_residual=None,
        iterations=int(state["n"]),
        trace=tuple(trace),
        method="height",
        message=msg,
    )


# ---------------------------------------------------------------------------
# formulation 2: direct period-conjugacy residual over a shared chart


def minimize_period_residual(
    cfg: Configuration,
    init: np.ndarray | ConformalPolygon | None = None,
    *,
    seed: int = 0,
    restarts: int = 0,
    max_nfev: int = 400,
) -> SolveResult:
    """Match every coordinate-cycle period to its conjugate reflection.

    Both orthodisks share one prevertex chart (hence one symmetric
    polygon); the only other unknown, the ratio of developed scales, is
    eliminated analytically.  Success requires the relative residual to
    sit below 1e-10 -- machine-exact conjugacy.  With ``restarts`` > 0,
    seeded random chart jitters are tried as additional starts and the
    best end point wins; the floor across restarts is the numerical
    evidence quoted by the obstruction certificates, so this formulation
    is defined for obstructed configurations as well.
    """
    if isinstance(init, ConformalPolygon):
        raise TypeError(
            "pass the prevertex chart vector, not the polygon; the chart "
            "is the gauge-normalized parametrization of symmetric polygons"
        )
    k = cfg.chart_size
    if init is not None:
        x0 = np.asarray(init, dtype=float)
    elif k == 0 or cfg.obstructed:
        x0 = np.zeros(k)
    else:
        # same cold-start point as the height formulation: the chart
        # realizing the retraction coordinates in the first domain
        from .height import _fit_domain

        gc0 = GeometricCoordinates.cold_start(cfg)
        x0 = np.asarray(_fit_domain(cfg, gc0, 1, np.zeros(k)).params, float)
    basis = _period_basis(cfg)
    trace: list[dict] = []
    state = {"n": 0, "best": math.inf}

    def residual(x: np.ndarray) -> np.ndarray:
        state["n"] += 1
        try:
            with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                r, _, _, _ = _conjugacy_vector(cfg, x, basis)
        except ValueError:
            r = None
        if r is None or not np.all(np.isfinite(r)):
            # chart pushed to a prevertex collision; wall of constant cost
            return np.full(2 * len(basis), 1e3)
        nr = float(np.linalg.norm(r))
        if nr < state["best"]:
            state["best"] = nr
            trace.append(
                {
                    "iteration": state["n"],
                    "height": None,
                    "residual": nr,
                    "coordinates": [round(c, 15) for c in x.tolist()],
                }
            )
        return r

    starts = [x0]
    if restarts > 0:
        rng = np.random.default_rng(seed)
        starts += [
            x0 + rng.normal(scale=0.75, size=k) for _ in range(restarts)
        ]
    best_x, best_r = None, math.inf
    for s0 in starts:
        if k == 0:
            x_fin = np.zeros(0)
            r_fin = float(np.linalg.norm(residual(x_fin)))
        else:
            sol = least_squares(
                residual,
                s0,
                method="lm",
                xtol=1e-15,
                ftol=1e-15,
                gtol=1e-15,
                max_nfev=max_nfev,
            )
            x_fin = sol.x
            r_fin = float(np.linalg.norm(sol.fun))
        if r_fin < best_r:
            best_x, best_r = x_fin, r_fin

    gc = None if cfg.obstructed else _gc_from_chart(cfg, best_x)
    polygon = cfg.polygon(best_x)
    spec1 = cfg.orthodisk(best_x, 1)
    spec2 = cfg.orthodisk(best_x, 2)
    if gc is None or validate_coordinates(gc, cfg):
        height = math.inf
        conj_res = best_r
        msg = (
            f"period residual floor {best_r:.3e} over {len(starts)} "
            "start(s); no conjugate pair here"
        )
        gc_out = gc
    else:
        rep = evaluate_height(gc, cfg)
        height = rep.total
        conj_res = best_r
        msg = "" if best_r < PERIOD_TOL else (
            f"period residual stalled at {best_r:.3e}"
        )
        gc_out = gc
    return SolveResult(
        cfg=cfg,
        gc=gc_out,
        polygon=polygon,
        spec_gdh=spec1,
        spec_conj=spec2,
        height=height,
        conjugacy_residual=conj_res,
        period_residual=best_r,
        iterations=int(state["n"]),
        trace=tuple(trace),
        method="period",
        obstructed=cfg.obstructed,
        message=msg,
    )


# ---------------------------------------------------------------------------
# continuation (regeneration)


def _transport_coordinates(
    gc: GeometricCoordinates,
    src: Configuration,
    dst: Configuration,
    eps: float,
) -> GeometricCoordinates:
    """Warm-start coordinates for dst built from a solved src point.

    A handle step n -> n+1 splits the central outer-sheet edge into two
    short edges of length eps; a planar-end step m -> m+1 grows the
    branch family, either by splitting the self-mirrored central branch
    along the mirror line or by inserting a fresh central branch at its
    cold position.  The result is re-projected through the free chart so
    mirror symmetry is exact.
    """
    dm, dn = dst.m - src.m, dst.n - src.n
    edges = np.asarray(gc.outer_edges, float)
    offs = np.asarray(gc.branch_offsets, complex)
    if dn == 1:
        mid = src.n + 1
        edges = np.concatenate([edges[:mid], [eps, eps], edges[mid:]])
        edges = edges / float(np.sum(edges))
        offs = offs / (1.0 + 2.0 * eps)
    if dm == 1:
        new = np.zeros(dst.m, dtype=complex)
        half_src, half_dst = src.m // 2, dst.m // 2
        new[:half_src] = offs[:half_src]
        if dst.m % 2 == 1:
            # fresh self-mirrored central branch: half a local cell along
            # the mirror diagonal from the staircase's central corner
            walk = 0.0 + 0.0j
            for s in range(1, dst.n + 2):
                walk += -edges[s - 1] if s % 2 == 1 else -1j * edges[s - 1]
            delta = float(min(edges[dst.n], edges[dst.n + 1]))
            new[half_dst] = walk + 0.5 * delta * (-1.0 + 1.0j)
        else:
            # the old central branch splits into a mirror pair along the
            # anti-diagonal; a small kick separates the twins
            center = offs[src.m // 2]
            new[half_dst - 1] = center + eps * (1.0 - 1.0j) * 0.5
        gc_new = GeometricCoordinates(dst.m, dst.n, edges, new)
        # mirror halves are rebuilt by the chart round trip below
        offs = gc_new.branch_offsets
    gc_t = GeometricCoordinates(dst.m, dst.n, edges, offs)
    return GeometricCoordinates.from_free_vector(dst, gc_t.free_vector())


def continuation_solve(
    source: SolveResult,
    target: Configuration,
    *,
    eps: float = 1e-2,
    max_anneal: int = 6,
) -> SolveResult:
    """Regenerate a solution of target from a solved smaller configuration.

    Requires target to differ from the source configuration by m -> m+1
    and/or n -> n+1.  The inserted elements start at parameter gap eps
    (relative to the unit-normalized scale), annealed upward by factors
    of 2 while the transported start is infeasible or the solve stalls;
    if every anneal fails the cold start is used as a last resort.
    """
    src = source.cfg
    dm, dn = target.m - src.m, target.n - src.n
    if (dm, dn) not in ((0, 1), (1, 0), (1, 1)):
        raise ValueError(
            f"no valid insertion site: ({src.m},{src.n}) -> "
            f"({target.m},{target.n}) is not an m/n increment"
        )
    if target.obstructed:
        return _obstructed_result(target, "continuation")
    if source.gc is None:
        raise ValueError("source result carries no coordinates to transport")

    last: SolveResult | None = None
    e = eps
    for _ in range(max_anneal):
        gc_t = _transport_coordinates(source.gc, src, target, e)
        if not validate_coordinates(gc_t, target):
            res = minimize_height(target, gc_t)
            if res.success:
                return replace(
                    res,
                    method="continuation",
                    message=f"continued from ({src.m},{src.n}), eps={e:.3g}",
                )
            last = res
        e *= 2.0
    cold = minimize_height(target)
    out = replace(
        cold,
        method="continuation",
        message="transported starts stalled; solved from cold start",
    )
    if last is not None and not cold.success and last.height < cold.height:
        out = replace(last, method="continuation")
    return out


# ---------------------------------------------------------------------------
# the push-sign experiment


@dataclass(frozen=True)
class PushSignResult:
    """Signs of extremal-length derivatives under an edge push."""

    cycle: str
    edge: str
    h: float
    d_ext_gdh: float
    d_ext_conj: float
    noise_gdh: float
    noise_conj: float
    conclusive: bool

    @property
    def sign_gdh(self) -> int:
        return int(np.sign(self.d_ext_gdh))

    @property
    def sign_conj(self) -> int:
        return int(np.sign(self.d_ext_conj))

    @property
    def opposite(self) -> bool:
        return self.sign_gdh * self.sign_conj == -1

    def __iter__(self):
        yield self.sign_gdh
        yield self.sign_conj

    def to_dict(self) -> dict:
        return {
            "cycle": self.cycle,
            "edge": self.edge,
            "h": self.h,
            "d_ext_gdh": self.d_ext_gdh,
            "d_ext_conj": self.d_ext_conj,
            "noise_gdh": self.noise_gdh,
            "noise_conj": self.noise_conj,
            "conclusive": self.conclusive,
            "signs": [self.sign_gdh, self.sign_conj],
        }


def _resolve_slot(cfg: Configuration, edge: str | int) -> int:
    """Staircase slot (1-based) named by index or by its vertex labels."""
    if isinstance(edge, int):
        s = edge
    else:
        for cand in range(1, 2 * cfg.n + 3):
            u, v = cfg.h_slot(cand)
            if edge in (u + v, v + u, f"{u}{v}", f"{v}{u}"):
                s = cand
                break
        else:
            raise ValueError(f"no staircase slot matches edge {edge!r}")
    if not 1 <= s <= 2 * cfg.n + 2:
        raise ValueError(f"slot {s} out of range")
    return s


def _resolve_cycle(cfg: Configuration, cycle: str | Cycle) -> Cycle:
    if isinstance(cycle, Cycle):
        return cycle
    if (cfg.m, cfg.n) == (1, 1):
        colors = dh11_color_cycles(cfg)
        if cycle in colors:
            return colors[cycle]
    return build_cycle_system(cfg).by_name(cycle)


def push_sign_experiment(
    sol: SolveResult,
    edge: str | int = "H1H2",
    cycle: str | Cycle = "mauve",
    *,
    h: float = 1e-5,
    direction: float = 1.0,
) -> PushSignResult:
    """Finite-difference extremal-length derivatives under an edge push.

    The named staircase edge and its mirror partner are scaled by
    ``exp(t)`` together (the conjugacy-preserving push: the mirror pair
    must move simultaneously), and the two domains' extremal lengths of
    the chosen cycle are differentiated centrally at ``t = 0`` with step
    ``h``.  The noise floor is estimated by comparing the ``h`` and
    ``h/2`` derivatives; a derivative below 10x that floor is flagged
    inconclusive.
    """
    cfg = sol.cfg
    if sol.gc is None:
        raise ValueError("solve result carries no coordinates to push")
    slot = _resolve_slot(cfg, edge)
    if slot > cfg.n + 1:
        slot = 2 * cfg.n + 3 - slot  # same push as its mirror partner
    cyc = _resolve_cycle(cfg, cycle)
    v0 = sol.gc.free_vector()
    cache = HeightCache()

    def exts(t: float) -> tuple[float, float]:
        v = v0.copy()
        if slot <= cfg.n:
            v[slot - 1] += t
        else:  # the central pair is the chart's reference edge
            v[: cfg.n] -= t
        gc = GeometricCoordinates.from_free_vector(cfg, v)
        rep = evaluate_height(gc, cfg, cache=cache, cycles=(cyc,))
        s = rep.scores[0]
        return s.ext_gdh, s.ext_conj

    label = edge if isinstance(edge, str) else "".join(cfg.h_slot(slot))
    t0 = h * direction
    if t0 == 0.0:
        return PushSignResult(
            cycle=cyc.name,
            edge=label,
            h=h,
            d_ext_gdh=0.0,
            d_ext_conj=0.0,
            noise_gdh=0.0,
            noise_conj=0.0,
            conclusive=False,
        )

    def central(step: float) -> tuple[float, float]:
        up = exts(step)
        dn = exts(-step)
        return (
            (up[0] - dn[0]) / (2.0 * step),
            (up[1] - dn[1]) / (2.0 * step),
        )

    d_h = central(t0)
    d_h2 = central(t0 / 2.0)
    noise = (abs(d_h[0] - d_h2[0]), abs(d_h[1] - d_h2[1]))
    conclusive = (
        abs(d_h2[0]) > 10.0 * noise[0] and abs(d_h2[1]) > 10.0 * noise[1]
    )
    return PushSignResult(
        cycle=cyc.name,
        edge=label,
        h=h,
        d_ext_gdh=d_h2[0],
        d_ext_conj=d_h2[1],
        noise_gdh=noise[0],
        noise_conj=noise[1],
        conclusive=conclusive,
    )
