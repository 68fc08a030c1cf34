"""Height of a geometric configuration.

The height measures how far the two orthodisk structures attached to a
configuration are from being conformally conjugate.  For each cycle in the
configuration's cycle system we compare the extremal lengths of the cycle in
the two fitted polygons; the height of the cycle is a symmetric function of
the two extremal lengths that vanishes exactly when they agree and blows up
when either extremal length degenerates to ``0`` or to infinity.  The total
height is the sum over the cycle system.

Evaluating the height at a point of the moduli space therefore requires
solving the parameter problem twice -- once per orthodisk -- and reading
extremal lengths off the fitted polygons.  Fits are warm-started from a small
nearest-neighbour cache so that walks through the moduli space (as in the
solver or the divergence probe) reuse earlier solutions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import (
    Configuration,
    GeometricCoordinates,
    build_cycle_system,
    domain_targets,
    validate_coordinates,
)
from .polygon import ConformalPolygon, Cycle
from .scmap import FitResult, solve_parameter_problem

__all__ = [
    "FIT_TOL",
    "CycleScore",
    "HeightCache",
    "HeightReport",
    "ParameterProblemFailure",
    "evaluate_height",
    "height_of_cycle",
]

#: Residual ceiling for an acceptable parameter-problem fit.  This is far
#: below the 1e-6 height threshold used to declare a configuration reflexive,
#: so fit error never masquerades as geometric progress.
FIT_TOL = 1.0e-8


def _exp(x: float) -> float:
    """``e**x`` continued by ``inf`` past the overflow threshold."""
    try:
        return math.exp(x)
    except OverflowError:
        return math.inf


def height_of_cycle(ext_a: float, ext_b: float) -> float:
    """Height contribution of one cycle from its two extremal lengths.

    ``(e^{1/a} - e^{1/b})^2 + (e^a - e^b)^2``: zero exactly on the diagonal
    ``a == b``, blowing up whenever either argument runs to ``0`` or to
    infinity while the other stays put.  Arguments must be positive;
    ``math.inf`` is tolerated (the result is then ``inf`` unless both are).
    """
    if not ext_a > 0 or not ext_b > 0:
        raise ValueError(
            f"extremal lengths must be positive, got ({ext_a}, {ext_b})"
        )
    if ext_a == ext_b:
        return 0.0
    recip = _exp(1.0 / ext_a) - _exp(1.0 / ext_b)
    direct = _exp(ext_a) - _exp(ext_b)
    return recip * recip + direct * direct


class ParameterProblemFailure(RuntimeError):
    """A parameter-problem fit did not reach the required residual."""

    def __init__(self, domain: int, residual: float):
        self.domain = domain
        self.residual = residual
        side = "Gdh" if domain == 1 else "G^{-1}dh"
        super().__init__(
            f"parameter problem for the {side} orthodisk stalled at "
            f"residual {residual:.3e} (need {FIT_TOL:.0e})"
        )


@dataclass(frozen=True)
class CycleScore:
    """Extremal lengths of one cycle in both fitted polygons."""

    name: str
    ext_gdh: float
    ext_conj: float
    height: float

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "ext_gdh": self.ext_gdh,
            "ext_conj": self.ext_conj,
            "height": self.height,
        }


@dataclass(frozen=True)
class HeightReport:
    """Everything the height evaluation learned at one moduli point."""

    m: int
    n: int
    scores: tuple[CycleScore, ...]
    total: float
    fit_gdh: FitResult
    fit_conj: FitResult

    @property
    def worst(self) -> str | None:
        """Name of the cycle contributing the largest height, if any."""
        if not self.scores:
            return None
        return max(self.scores, key=lambda s: s.height).name

    @property
    def polygon_gdh(self) -> ConformalPolygon:
        return ConformalPolygon(tuple(self.fit_gdh.spec.prevertices))

    @property
    def polygon_conj(self) -> ConformalPolygon:
        return ConformalPolygon(tuple(self.fit_conj.spec.prevertices))

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "total": self.total,
            "worst": self.worst,
            "scores": [s.to_dict() for s in self.scores],
            "fit_residuals": [
                self.fit_gdh.residual_norm,
                self.fit_conj.residual_norm,
            ],
        }


@dataclass
class HeightCache:
    """Nearest-neighbour warm-start store for parameter-problem fits.

    Keys are the raw coordinate vectors (outer edges followed by the branch
    offsets viewed as reals); values are the fitted chart vectors of both
    domains.  Lookup returns the stored fit whose key is closest to the query
    point, which is exactly what a quasi-continuous walk through the moduli
    space needs.  The store is bounded; the oldest entry is dropped first.
    """

    max_entries: int = 64
    _keys: list[np.ndarray] = field(default_factory=list)
    _values: list[tuple[np.ndarray, np.ndarray]] = field(default_factory=list)

    @staticmethod
    def key_of(gc: GeometricCoordinates) -> np.ndarray:
        return np.concatenate(
            [gc.outer_edges, gc.branch_offsets.view(np.float64)]
        )

    def lookup(self, key: np.ndarray) -> tuple[np.ndarray, np.ndarray] | None:
        best, best_d = None, math.inf
        for k, v in zip(self._keys, self._values):
            if k.size != key.size:
                continue
            d = float(np.linalg.norm(k - key))
            if d < best_d:
                best, best_d = v, d
        return best

    def store(self, key: np.ndarray, x_gdh: np.ndarray, x_conj: np.ndarray):
        self._keys.append(key.copy())
        self._values.append((x_gdh.copy(), x_conj.copy()))
        if len(self._keys) > self.max_entries:
            self._keys.pop(0)
            self._values.pop(0)


def _fit_domain(
    cfg: Configuration,
    gc: GeometricCoordinates,
    domain: int,
    x0: np.ndarray,
) -> FitResult:
    t1, t2 = domain_targets(cfg, gc)
    target = t1 if domain == 1 else t2
    try:
        fit = solve_parameter_problem(
            lambda x: cfg.orthodisk(x, domain), x0, target
        )
    except ValueError:
        # the fit chart itself degenerated (prevertex collision)
        raise ParameterProblemFailure(domain, math.inf) from None
    if not fit.residual_norm < FIT_TOL:
        raise ParameterProblemFailure(domain, fit.residual_norm)
    return fit


def evaluate_height(
    gc: GeometricCoordinates,
    cfg: Configuration,
    *,
    cache: HeightCache | None = None,
    cycles: tuple[Cycle, ...] | None = None,
    check: bool = True,
) -> HeightReport:
    """Total height of the configuration at the given coordinates.

    Solves the parameter problem for both orthodisks (raising
    :class:`ParameterProblemFailure` naming the side that stalled), then
    scores every cycle of the configuration's cycle system -- or of the
    ``cycles`` override -- by comparing extremal lengths across the two
    fitted polygons.  With ``check`` enabled the coordinates are validated
    first and a ``ValueError`` lists every violated wall constraint.
    """
    if check:
        problems = validate_coordinates(gc, cfg)
        if problems:
            raise ValueError("; ".join(problems))
    if cycles is None:
        cycles = tuple(build_cycle_system(cfg))

    key = HeightCache.key_of(gc)
    warm = cache.lookup(key) if cache is not None else None
    k = cfg.chart_size
    x0_gdh = warm[0] if warm is not None else np.zeros(k)
    x0_conj = warm[1] if warm is not None else np.zeros(k)

    fit_gdh = _fit_domain(cfg, gc, 1, x0_gdh)
    fit_conj = _fit_domain(cfg, gc, 2, x0_conj)
    if cache is not None:
        cache.store(key, fit_gdh.params, fit_conj.params)

    poly_gdh = ConformalPolygon(tuple(fit_gdh.spec.prevertices))
    poly_conj = ConformalPolygon(tuple(fit_conj.spec.prevertices))

    scores = []
    for cyc in cycles:
        e1 = poly_gdh.cycle_extremal_length(cyc)
        e2 = poly_conj.cycle_extremal_length(cyc)
        scores.append(CycleScore(cyc.name, e1, e2, height_of_cycle(e1, e2)))

    total = math.fsum(s.height for s in scores)
    return HeightReport(
        m=cfg.m,
        n=cfg.n,
        scores=tuple(scores),
        total=total,
        fit_gdh=fit_gdh,
        fit_conj=fit_conj,
    )
