"""Why the m > n staircases close up against themselves.

A conjugate orthodisk pair forces every cycle period to respect one
reflection line.  Near the central symmetry diagonal the two figures
disagree about which way that reflection can point: walking outward
from the diagonal, each period direction forces the next one through
the requirement that branch points stay inside the outer sheet, and
after n+1 steps the walk runs off the planar chain with a branch point
stranded outside.  This module builds that forced-direction walk as an
explicit certificate.

The walk is purely combinatorial -- it needs the edge directions of the
two orthodisks (constants of the configuration) and one measured period
pair to orient the reflection line.  It therefore certifies
nonexistence for the whole moduli space at once, not just for a chart
point.  The numerical shadow of the certificate is the stalling of
``minimize_period_residual`` at an O(1) floor; ``numerical_floor`` wires
that cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .config import Configuration
from .scmap import period_integral

__all__ = [
    "LineStep",
    "ChainStep",
    "ObstructionCertificate",
    "check_obstruction",
    "numerical_floor",
]

DOMAIN_NAME = {1: "Gdh", 2: "G^-1dh"}


@dataclass(frozen=True)
class LineStep:
    """Orientation of the conjugation line from the catenoid cycle.

    The cycle joining the last planar edge to the first staircase edge
    has a period with a definite axis in each orthodisk: vertical in
    one, horizontal in the other, because the two figures are rotated
    against each other by a quarter turn.  A reflection carrying one
    period to the other must then bisect the axes, so the conjugation
    line -- if the pair were conjugate -- is pinned to a 45-degree
    diagonal, with the measured signs choosing between y = x and
    y = -x.
    """

    cycle: str
    axis: dict[int, str]  # domain -> "vertical" | "horizontal"
    sign: dict[int, int]  # domain -> +1 / -1, canonical frame
    line: str

    def to_dict(self) -> dict:
        return {
            "cycle": self.cycle,
            "axis": {DOMAIN_NAME[d]: a for d, a in self.axis.items()},
            "sign": {DOMAIN_NAME[d]: s for d, s in self.sign.items()},
            "line": self.line,
        }


@dataclass(frozen=True)
class ChainStep:
    """One forced period direction in the walk away from the diagonal."""

    cycle: str
    h_slot: int
    p_edge: int
    up_domain: int  # domain in which the period is forced upward
    rule: str  # why this step is forced

    @property
    def right_domain(self) -> int:
        """Conjugacy reflects the upward period to a rightward one."""
        return 3 - self.up_domain

    def to_dict(self) -> dict:
        return {
            "cycle": self.cycle,
            "h_slot": self.h_slot,
            "p_edge": self.p_edge,
            "up_in": DOMAIN_NAME[self.up_domain],
            "right_in": DOMAIN_NAME[self.right_domain],
            "rule": self.rule,
        }


@dataclass(frozen=True)
class ObstructionCertificate:
    """A forced-direction chain proving DH_{m,n} has no conjugate pair.

    ``line`` orients the conjugation line; ``chain`` lists the period
    directions forced one by the next, alternating between the two
    orthodisks; ``contradiction`` names the branch point that the final
    direction would push outside its outer sheet.
    """

    m: int
    n: int
    line: LineStep
    chain: tuple[ChainStep, ...]
    contradiction: str

    @property
    def chain_length(self) -> int:
        """Line-determination step plus the forced chain."""
        return 1 + len(self.chain)

    def to_dict(self) -> dict:
        return {
            "m": self.m,
            "n": self.n,
            "line": self.line.to_dict(),
            "chain": [s.to_dict() for s in self.chain],
            "contradiction": self.contradiction,
            "chain_length": self.chain_length,
        }

    def to_text(self) -> str:
        out = [
            f"DH_({self.m},{self.n}) admits no conjugate orthodisk pair.",
            f"conjugation line {self.line.line}, oriented by the cycle "
            f"{self.line.cycle}:",
        ]
        for d in (1, 2):
            out.append(
                f"  {self.line.axis[d]} period in the {DOMAIN_NAME[d]} "
                f"orthodisk (sign {self.line.sign[d]:+d})"
            )
        out.append("forced directions, walking out from the diagonal:")
        for i, s in enumerate(self.chain, start=1):
            out.append(
                f"  {i}. {s.cycle}: upward in {DOMAIN_NAME[s.up_domain]} "
                f"({s.rule}), hence rightward in "
                f"{DOMAIN_NAME[s.right_domain]} by conjugacy"
            )
        out.append(f"contradiction: {self.contradiction}")
        return "\n".join(out)

    def __str__(self) -> str:  # pragma: no cover - convenience
        return self.to_text()


def _perpendicular_part(period: complex, direction: complex) -> complex:
    par = period.real * direction.real + period.imag * direction.imag
    return period - par * direction


def _conjugation_line(cfg: Configuration) -> LineStep:
    """Orient the would-be conjugation line from the catenoid cycle.

    Measures the period joining the last planar edge P_{2m+1}C2 to the
    first staircase edge H1C1 in both orthodisks at the symmetric chart
    point.  Only the axis and sign are used, and both are constant over
    the connected chart family, so the chart point is arbitrary.
    """
    zeros = np.zeros(cfg.chart_size)
    e_p = cfg.p_edge_index(2 * cfg.m + 1)
    e_h = cfg.h_slot_index(1)
    axis: dict[int, str] = {}
    sign: dict[int, int] = {}
    for d in (1, 2):
        spec = cfg.orthodisk(zeros, d)
        da = spec.edge_direction(e_p)
        db = spec.edge_direction(e_h)
        cross = da.real * db.imag - da.imag * db.real
        if abs(cross) > 1e-9:
            raise AssertionError(
                f"catenoid edges {e_p},{e_h} not parallel in domain {d}"
            )
        perp = _perpendicular_part(period_integral(spec, e_p, e_h), da)
        if abs(da.imag) < 1e-9:  # horizontal feet, vertical period
            axis[d], sign[d] = "vertical", int(math.copysign(1.0, perp.imag))
        else:
            axis[d], sign[d] = "horizontal", int(math.copysign(1.0, perp.real))
    if {axis[1], axis[2]} != {"vertical", "horizontal"}:
        raise AssertionError(f"catenoid period axes not mixed: {axis}")
    line = "y = x" if sign[1] * sign[2] > 0 else "y = -x"
    return LineStep(
        cycle=f"P{2 * cfg.m + 1}C2 -> H1C1", axis=axis, sign=sign, line=line
    )


def check_obstruction(cfg: Configuration) -> ObstructionCertificate | None:
    """Certify that DH_{m,n} with m > n admits no conjugate pair.

    Returns ``None`` for m <= n (where solutions exist).  For m > n the
    certificate walks outward from the central symmetry diagonal: the
    mirror pins the first cycle's period in the orthodisk whose central
    vertex carries an inner sheet (Gdh for odd m, its conjugate for even
    m), conjugacy carries each direction to the other orthodisk, and
    keeping the next branch point inside its outer sheet forces the
    following cycle, until the chain reaches the planar edge at P_{m-n}
    -- which exists precisely because m > n -- and strands that branch
    point outside.
    """
    m, n = cfg.m, cfg.n
    if m <= n:
        return None

    line = _conjugation_line(cfg)

    # first staircase slot: the puncture flank whose edge runs parallel,
    # in both orthodisks, to the central planar edge P_m P_{m+1}
    h_top = n + 1 if (m + n) % 2 == 1 else n + 2
    start = 1 if m % 2 == 1 else 2

    zeros = np.zeros(cfg.chart_size)
    specs = {d: cfg.orthodisk(zeros, d) for d in (1, 2)}

    steps: list[ChainStep] = []
    for k in range(n + 1):
        slot, edge = h_top - k, m - k
        h_lo, h_hi = cfg.h_slot(slot)
        p_lo, p_hi = cfg.p_edge(edge)
        for d in (1, 2):  # feet must be parallel for the period to have an axis
            da = specs[d].edge_direction(cfg.h_slot_index(slot))
            db = specs[d].edge_direction(cfg.p_edge_index(edge))
            if abs(da.real * db.imag - da.imag * db.real) > 1e-9:
                raise AssertionError(
                    f"chain step {k} feet not parallel in domain {d} "
                    f"for ({m},{n})"
                )
        up = start if k % 2 == 0 else 3 - start
        if k == 0:
            rule = (
                "mirror symmetry across the central diagonal pins the "
                "period of the cycle straddling it"
            )
        else:
            rule = (
                f"containment of the branch point P{m - k + 1} in the "
                f"outer sheet of the {DOMAIN_NAME[up]} orthodisk"
            )
        steps.append(
            ChainStep(
                cycle=f"{h_hi}{h_lo} -> {p_lo}{p_hi}",
                h_slot=slot,
                p_edge=edge,
                up_domain=up,
                rule=rule,
            )
        )

    excl = steps[-1].right_domain
    contradiction = (
        f"the rightward period of {steps[-1].cycle} in the "
        f"{DOMAIN_NAME[excl]} orthodisk strands the branch point P{m - n} "
        f"outside the outer sheet"
    )
    return ObstructionCertificate(
        m=m, n=n, line=line, chain=tuple(steps), contradiction=contradiction
    )


def numerical_floor(
    cfg: Configuration, runs: int = 20, seed: int = 0
) -> float:
    """Best conjugacy residual over randomized period solves.

    The numerical shadow of the certificate: a certified configuration
    stalls at an O(1) floor, while solvable ones reach machine zero.
    """
    from .solver import minimize_period_residual

    result = minimize_period_residual(cfg, restarts=runs - 1, seed=seed)
    return float(result.period_residual)
