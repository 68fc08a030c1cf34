"""Combinatorics of the two-orthodisk surface families.

A configuration is indexed by two integers ``(m, n)``.  Its conformal
polygon carries ``2m + 2n + 4`` marked points on the real line (plus the
implicit point at infinity): two catenoid-type points ``C1, C2``, a chain
of planar-type points ``P1 .. P_{2m+1}`` between them, and a chain of
finite saddle points ``H1 .. H_{2n+1}`` closing the circle.  Orientations
alternate along each chain, which fixes every vertex's exponent pair
``(a, b)`` -- ``a`` for the Gdh orthodisk, ``b`` for the G^{-1}dh
orthodisk -- from a fixed eight-row table.

Gauge: the central saddle ``H_{n+1}`` sits at infinity, the central
planar point ``P_{m+1}`` at 0, and ``C1, C2`` at -1, +1.  The prevertex
set is then symmetric under ``t -> -t``, leaving ``m + n`` free shape
parameters (the chart used by every parameter problem).

Developed picture (canonical frame): the Gdh orthodisk's outer sheet is a
staircase walked from ``C1`` at the origin west, south, west, south ...
to ``C2``; the ``2n+2`` finite edges alternate between horizontal treads
and vertical risers, the branch points ``P_even`` hang inside as slit
ends, and the whole figure is mirror-symmetric across the antidiagonal
through the staircase midpoint.  The G^{-1}dh orthodisk is the conjugate
arrangement: every cycle period reflects (``per_2 = i * conj(per_1)``),
its outer sheet is the ``2n``-edge saddle chain, and the odd planar
points become its slit ends.

Geometric coordinates are the staircase edge lengths (normalized to sum
to 1) together with the developed branch-point offsets; bounding-box
inequalities between each branch point and four staircase walls make the
coordinate chart complete.  Where a listed wall index runs out of range
or lands on an edge perpendicular to the cycle's feet, we move it to the
nearest valid edge and record the adjustment instead of guessing.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from .polygon import ConformalPolygon, Cycle, CycleComponent
from .scmap import DevelopTarget, OrthodiskSpec

__all__ = [
    "ORIENTATION_TABLE",
    "VertexSpec",
    "Configuration",
    "ObstructedConfigurationError",
    "CycleSystem",
    "BoxWalls",
    "CoordinateCycles",
    "GeometricCoordinates",
    "build_vertex_sequence",
    "build_cycle_system",
    "coordinate_cycles",
    "validate_coordinates",
    "domain_targets",
    "dh11_color_cycles",
]

# (letter, points_up) -> (exponent in Gdh, exponent in G^{-1}dh)
ORIENTATION_TABLE = {
    ("H", True): (-1, 1),
    ("H", False): (1, -1),
    ("C", True): (-3, -1),
    ("C", False): (-1, -3),
    ("P", True): (-3, 3),
    ("P", False): (3, -3),
    ("R", True): (0, 2),
    ("R", False): (2, 0),
}


class ObstructedConfigurationError(ValueError):
    """Raised when a requested construction needs m <= n (or (0,0))."""

    def __init__(self, m: int, n: int, what: str):
        self.m, self.n = m, n
        super().__init__(
            f"configuration ({m},{n}) is obstructed: {what} requires "
            f"m <= n (the m > n surfaces do not exist)"
        )


@dataclass(frozen=True)
class VertexSpec:
    """One marked point: letter, chain index, orientation, exponents."""

    letter: str
    index: int
    up: bool
    a: int
    b: int

    @classmethod
    def make(cls, letter: str, index: int, up: bool) -> "VertexSpec":
        a, b = ORIENTATION_TABLE[(letter, up)]
        return cls(letter, index, up, a, b)

    @property
    def label(self) -> str:
        return f"{self.letter}{self.index}"

    @property
    def dh_order(self) -> int:
        """Order of dh at the marked surface point: 1 + (a+b)/2."""
        return 1 + (self.a + self.b) // 2

    @property
    def satisfies_completeness(self) -> bool:
        """2 + a + b <= |a - b| (holds at every vertex the builder emits)."""
        return 2 + self.a + self.b <= abs(self.a - self.b)

    def exponent(self, domain: int) -> int:
        if domain == 1:
            return self.a
        if domain == 2:
            return self.b
        raise ValueError(f"domain must be 1 (Gdh) or 2 (G^-1 dh), got {domain}")


def _orientation(letter: str, index: int) -> bool:
    """Orientation pattern along the chains (up = True)."""
    if letter == "C":
        return False
    if letter == "P":
        return index % 2 == 1
    if letter == "H":
        return index % 2 == 0
    raise ValueError(f"unknown letter {letter!r}")


@dataclass(frozen=True)
class Configuration:
    """The (m, n) family member: tables, gauges, and index bookkeeping."""

    m: int
    n: int

    def __post_init__(self):
        if self.m < 0 or self.n < 0:
            raise ValueError("m and n must be nonnegative")

    # -- basic invariants ---------------------------------------------------

    @property
    def genus(self) -> int:
        return self.m + self.n + 1

    @property
    def n_marked(self) -> int:
        return 2 * self.m + 2 * self.n + 4

    @property
    def obstructed(self) -> bool:
        """True when m > n: no surface exists for these indices."""
        return self.m > self.n

    @property
    def chart_size(self) -> int:
        return self.m + self.n

    @property
    def conjugacy_line(self) -> str:
        """Direction of the developed mirror line (slope -1 antidiagonal)."""
        return "y=-x"

    # -- vertex sequence ----------------------------------------------------

    @cached_property
    def vertices(self) -> tuple[VertexSpec, ...]:
        """Marked points in cyclic boundary order, starting at C1."""
        seq = [VertexSpec.make("C", 1, _orientation("C", 1))]
        seq += [
            VertexSpec.make("P", i, _orientation("P", i))
            for i in range(1, 2 * self.m + 2)
        ]
        seq.append(VertexSpec.make("C", 2, _orientation("C", 2)))
        seq += [
            VertexSpec.make("H", j, _orientation("H", j))
            for j in range(2 * self.n + 1, 0, -1)
        ]
        return tuple(seq)

    @cached_property
    def _by_label(self) -> dict[str, VertexSpec]:
        return {v.label: v for v in self.vertices}

    def vertex(self, label: str) -> VertexSpec:
        return self._by_label[label]

    def involution(self, label: str) -> str:
        """The mirror partner of a marked point under t -> -t."""
        v = self._by_label[label]
        if v.letter == "C":
            return f"C{3 - v.index}"
        if v.letter == "P":
            return f"P{2 * self.m + 2 - v.index}"
        return f"H{2 * self.n + 2 - v.index}"

    # -- ascending prevertex order and the gauge ------------------------------

    @cached_property
    def ascending_labels(self) -> tuple[str, ...]:
        """Finite prevertices in ascending real order (H_{n+1} is at inf)."""
        lower_h = [f"H{j}" for j in range(self.n, 0, -1)]
        ps = [f"P{i}" for i in range(1, 2 * self.m + 2)]
        upper_h = [f"H{j}" for j in range(2 * self.n + 1, self.n + 1, -1)]
        return tuple(lower_h + ["C1"] + ps + ["C2"] + upper_h)

    @property
    def inf_label(self) -> str:
        return f"H{self.n + 1}"

    @property
    def n_finite(self) -> int:
        return self.n_marked - 1

    @cached_property
    def _asc_index(self) -> dict[str, int]:
        d = {lab: i for i, lab in enumerate(self.ascending_labels)}
        d[self.inf_label] = self.n_finite
        return d

    def ascending_index(self, label: str) -> int:
        return self._asc_index[label]

    def edge_index(self, label_u: str, label_v: str) -> int:
        """Ascending edge index of the boundary edge joining two vertices."""
        i, j = sorted((self._asc_index[label_u], self._asc_index[label_v]))
        if j == i + 1:
            return i
        if (i, j) == (0, self.n_finite):
            return self.n_finite
        raise ValueError(f"{label_u} and {label_v} are not boundary-adjacent")

    def mirror_edge_index(self, e: int) -> int:
        nf = self.n_finite
        e %= nf + 1
        return nf - 2 - e if e <= nf - 2 else 2 * nf - 1 - e

    # -- boundary edge families ----------------------------------------------

    def h_slot(self, s: int) -> tuple[str, str]:
        """Staircase edge ``s`` in 1..2n+2: (H_{s-1}, H_s), ends at the C's."""
        if not 1 <= s <= 2 * self.n + 2:
            raise ValueError(f"staircase slot {s} out of range")
        lo = "C1" if s == 1 else f"H{s - 1}"
        hi = "C2" if s == 2 * self.n + 2 else f"H{s}"
        return lo, hi

    def p_edge(self, i: int) -> tuple[str, str]:
        """Planar-chain edge ``i`` in 0..2m+1: (P_i, P_{i+1}), ends at the C's."""
        if not 0 <= i <= 2 * self.m + 1:
            raise ValueError(f"planar edge {i} out of range")
        lo = "C1" if i == 0 else f"P{i}"
        hi = "C2" if i == 2 * self.m + 1 else f"P{i + 1}"
        return lo, hi

    def h_slot_index(self, s: int) -> int:
        return self.edge_index(*self.h_slot(s))

    def p_edge_index(self, i: int) -> int:
        return self.edge_index(*self.p_edge(i))

    # -- exponents, scales, orthodisks ----------------------------------------

    def exponents(self, domain: int) -> tuple[tuple[int, ...], int]:
        """Ascending-order exponent list plus the exponent at infinity."""
        exps = tuple(
            self._by_label[lab].exponent(domain) for lab in self.ascending_labels
        )
        return exps, self._by_label[self.inf_label].exponent(domain)

    def canonical_scale(self, domain: int) -> complex:
        """Rotation putting the developed walk C1 -> H1 due west.

        Equivalently the ascending direction of the edge (H1, C1) is +1 in
        the Gdh orthodisk and +i in the conjugate one, which makes both
        developed staircases walk west, south, west, south ...
        """
        exps, _ = self.exponents(domain)
        e_star = self.edge_index("H1", "C1")
        if e_star == self.n_finite:
            tail = sum(exps)
        else:
            tail = sum(exps[e_star + 1 :])
        raw = np.exp(1j * (math.pi / 2.0) * tail)
        target = 1.0 if domain == 1 else 1.0j
        return complex(target / raw)

    def prevertex_chart(self, x: Sequence[float]) -> tuple[float, ...]:
        """Symmetric prevertex chart: m gap logits + n log gaps -> ascending t.

        The planar points fill (-1, 1) symmetrically about P_{m+1} = 0 with
        normalized positive gap weights; the saddle points march out from
        C2 = +1 with positive log-parametrized gaps, mirrored below.
        """
        x = np.asarray(x, dtype=float)
        if x.shape != (self.chart_size,):
            raise ValueError(
                f"chart needs {self.chart_size} parameters, got shape {x.shape}"
            )
        m, n = self.m, self.n
        w = np.concatenate([np.exp(x[:m]), [1.0]])
        upper_p = np.cumsum(w)[:-1] / np.sum(w)  # P_{m+2} .. P_{2m+1} in (0,1)
        gaps = np.exp(x[m:])
        upper_h = 1.0 + np.cumsum(gaps)  # H_{2n+1} .. H_{n+2} ascending
        ts: list[float] = []
        ts += [-t for t in upper_h[::-1]]  # H_n .. H_1  (mirror, ascending)
        ts.append(-1.0)  # C1
        ts += [-t for t in upper_p[::-1]]  # P_1 .. P_m
        ts.append(0.0)  # P_{m+1}
        ts += list(upper_p)  # P_{m+2} .. P_{2m+1}
        ts.append(1.0)  # C2
        ts += list(upper_h)  # H_{2n+1} .. H_{n+2}
        return tuple(ts)

    def orthodisk(self, x: Sequence[float], domain: int) -> OrthodiskSpec:
        exps, einf = self.exponents(domain)
        return OrthodiskSpec(
            prevertices=self.prevertex_chart(x),
            exponents=exps,
            exponent_inf=einf,
            scale=self.canonical_scale(domain),
        )

    def polygon(self, x: Sequence[float]) -> ConformalPolygon:
        return ConformalPolygon(self.prevertex_chart(x))

    # -- Gauss map bookkeeping -------------------------------------------------

    def gauss_degree(self) -> int:
        """Number of distinct down-normal points: m + n + 3 = genus + 2."""
        return sum(1 for v in self.vertices if v.a > v.b)

    def gauss_divisor_degree(self) -> int:
        """Half-sum of (a - b) over down-normal points (with multiplicity)."""
        return sum(v.a - v.b for v in self.vertices if v.a > v.b) // 2

    # -- serialization -----------------------------------------------------------

    def to_dict(self) -> dict:
        return {"m": self.m, "n": self.n}

    def to_json(self) -> str:
        return json.dumps(self.to_dict())

    @classmethod
    def from_dict(cls, d: dict) -> "Configuration":
        return cls(int(d["m"]), int(d["n"]))

    @classmethod
    def from_json(cls, text: str) -> "Configuration":
        return cls.from_dict(json.loads(text))


def build_vertex_sequence(cfg: Configuration) -> tuple[VertexSpec, ...]:
    """The cyclic marked-point sequence starting at C1."""
    return cfg.vertices


# ---------------------------------------------------------------------------
# cycle systems


@dataclass(frozen=True)
class CycleSystem:
    """A named set of cycles with foot-resolution notes."""

    cycles: tuple[Cycle, ...]
    notes: tuple[str, ...] = ()

    def __len__(self) -> int:
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.cycles)

    def by_name(self, name: str) -> Cycle:
        for c in self.cycles:
            if c.name == name:
                return c
        raise KeyError(name)


class _CycleBuilder:
    """Builds mirror-symmetric cycles from one written component.

    Feet are given as ('p', i) or ('h', s) family references; out-of-range
    indices are moved to the nearest valid edge and recorded.  The second
    component is always the exact mirror image of the first; when the
    mirror coincides with the original the cycle has a single component.
    """

    def __init__(self, cfg: Configuration):
        self.cfg = cfg
        self.notes: list[str] = []

    def _resolve(self, name: str, foot) -> int:
        kind, i = foot
        cfg = self.cfg
        if kind == "p":
            lo, hi = 0, 2 * cfg.m + 1
            clamped = min(max(i, lo), hi)
            if clamped != i:
                self.notes.append(
                    f"{name}: planar edge {i} out of range, using {clamped}"
                )
            elif i == 0 or i == 2 * cfg.m + 1:
                a, b = cfg.p_edge(clamped)
                self.notes.append(f"{name}: planar edge {i} resolves to {a}{b}")
            return cfg.p_edge_index(clamped)
        if kind == "h":
            lo, hi = 1, 2 * cfg.n + 2
            clamped = min(max(i, lo), hi)
            if clamped != i:
                self.notes.append(
                    f"{name}: staircase slot {i} out of range, using {clamped}"
                )
            return cfg.h_slot_index(clamped)
        raise ValueError(f"unknown foot family {kind!r}")

    def joining(self, name: str, foot_a, foot_b) -> Cycle:
        ea = self._resolve(name, foot_a)
        eb = self._resolve(name, foot_b)
        comp1 = CycleComponent("joining", ea, eb, label=name)
        ma, mb = self.cfg.mirror_edge_index(ea), self.cfg.mirror_edge_index(eb)
        if {ma, mb} == {ea, eb}:
            return Cycle(name, (comp1,))
        comp2 = CycleComponent("joining", ma, mb, label=f"{name}'")
        return Cycle(name, (comp1, comp2))

    def encircling(self, name: str, foot) -> Cycle:
        """Cycle looping around an edge and, by symmetry, its mirror image.

        Scored as the quadrilateral joining the edge to its mirror edge.
        That invariant degenerates exactly with the loop class: it blows up
        when the encircled edge pinches (the loop becomes a vanishing cycle)
        and vanishes when the edge swallows its neighbours, so the height
        term built from it walls off both collapses.  A flanking-edge
        quadrilateral would instead converge to a finite limit under the
        pinch and leave the height blind to it.
        """
        e = self._resolve(name, foot)
        me = self.cfg.mirror_edge_index(e)
        if me == e:
            return Cycle(name, (CycleComponent("encircling", e, label=name),))
        return Cycle(name, (CycleComponent("joining", e, me, label=name),))


def build_cycle_system(cfg: Configuration) -> CycleSystem:
    """The m + n height cycles for a supported configuration.

    Selection: {mu, nu} at (1,1); {mu, nu, gamma, delta, beta_2..beta_{m-1},
    alpha_2..alpha_{n-1}} on the diagonal m = n > 1; {mu, rho, sigma,
    alpha_1..alpha_{n-2}} for m = 1 < n; and {mu, rho, sigma, tau,
    alpha_1..alpha_{n-2}, beta_2..beta_{m-1}} for 1 < m < n.
    """
    m, n = cfg.m, cfg.n
    if cfg.obstructed:
        raise ObstructedConfigurationError(m, n, "the height cycle system")
    b = _CycleBuilder(cfg)
    cycles: list[Cycle] = []
    if (m, n) == (0, 0):
        return CycleSystem(())
    cycles.append(b.joining("mu", ("p", 0), ("p", 2 * m + 1)))
    if m == n:
        cycles.append(b.joining("nu", ("p", 0), ("h", 2)))
        if n > 1:
            cycles.append(b.joining("gamma", ("h", n), ("h", n + 3)))
            cycles.append(b.joining("delta", ("p", 1), ("h", n + 1)))
            cycles += [
                b.joining(f"beta_{k}", ("p", 1), ("p", 2 * k - 1))
                for k in range(2, m)
            ]
            cycles += [
                b.encircling(f"alpha_{k}", ("h", k + 1)) for k in range(2, n)
            ]
    else:
        cycles.append(b.joining("rho", ("h", n + 1), ("p", m - 1)))
        cycles.append(b.joining("sigma", ("h", 1), ("p", 1)))
        if m > 1:
            cycles.append(b.joining("tau", ("p", 1), ("p", 2 * m)))
            cycles += [
                b.joining(f"beta_{k}", ("p", 1), ("p", 2 * k - 1))
                for k in range(2, m)
            ]
        cycles += [
            b.encircling(f"alpha_{k}", ("h", k + 1)) for k in range(1, n - 1)
        ]
    system = CycleSystem(tuple(cycles), tuple(b.notes))
    assert len(system) == m + n, (len(system), m, n)
    return system


def dh11_color_cycles(cfg: Configuration) -> dict[str, Cycle]:
    """The four named cycles of the (1,1) moduli picture."""
    if (cfg.m, cfg.n) != (1, 1):
        raise ValueError("color cycles are specific to the (1,1) configuration")
    b = _CycleBuilder(cfg)
    return {
        "yellow": b.joining("yellow", ("h", 3), ("p", 1)),
        "blue": b.joining("blue", ("p", 3), ("h", 3)),
        "green": b.joining("green", ("p", 1), ("h", 1)),
        "mauve": b.joining("mauve", ("p", 3), ("p", 0)),
    }


# ---------------------------------------------------------------------------
# coordinate cycles and bounding boxes


@dataclass(frozen=True)
class BoxWalls:
    """Staircase wall slots boxing one branch point of the Gdh orthodisk.

    ``up``/``down`` are tread slots (odd), ``right``/``left`` riser slots
    (even); the box is the open rectangle strictly between them.
    """

    j: int
    up: int
    right: int
    down: int
    left: int
    notes: tuple[str, ...] = ()


def _fix_tread(s: int, n: int, notes: list[str], name: str) -> int:
    """Clamp s into [1, 2n+1] and make it odd (a tread slot)."""
    s0 = s
    if s % 2 == 0:
        s = s - 1 if s > 1 else s + 1
    s = min(max(s, 1), 2 * n + 1)
    if s % 2 == 0:
        s -= 1
    if s != s0:
        notes.append(f"{name}: wall slot {s0} adjusted to tread {s}")
    return s


def _box_above(cfg: Configuration, j: int, notes: list[str]) -> BoxWalls:
    m, n = cfg.m, cfg.n
    d = (n - m) // 2 + 1
    e = d if d % 2 == 0 else d - 1
    if e != d:
        notes.append(
            f"box_{2 * j}: depth {d} shifted to {e} to keep the far walls "
            f"parallel to the slit edges"
        )
    down = min(2 * j + e + 1, 2 * n + 1)
    return BoxWalls(j, up=2 * j - 1, right=2 * j, down=down, left=down + 1)


def _box_diagonal(cfg: Configuration, notes: list[str]) -> BoxWalls:
    m, n = cfg.m, cfg.n
    j = (m + 1) // 2
    d = (n - m) // 2 + 1
    right = n + 1 if (n + 1) % 2 == 0 else n + 2
    down = (n + 1) + (n + 2) - right
    nominal_up = n - d - 1 if n % 2 == 1 else n - d
    up = _fix_tread(nominal_up, n, notes, f"box_{2 * j}")
    if up >= down:
        up = down - 2
        notes.append(f"box_{2 * j}: near tread pulled above the central tread")
    return BoxWalls(j, up=up, right=right, down=down, left=2 * n + 3 - up)


def _box_mirror(src: BoxWalls, cfg: Configuration, j: int) -> BoxWalls:
    s = 2 * cfg.n + 3
    return BoxWalls(
        j, up=s - src.left, right=s - src.down, down=s - src.right, left=s - src.up
    )


def box_walls(cfg: Configuration, j: int, notes: list[str] | None = None) -> BoxWalls:
    """Wall slots for the box around the j-th branch point, j = 1..m."""
    if not 1 <= j <= cfg.m:
        raise ValueError(f"branch index {j} out of range 1..{cfg.m}")
    notes = [] if notes is None else notes
    m = cfg.m
    if m % 2 == 1 and j == (m + 1) // 2:
        return _box_diagonal(cfg, notes)
    if j <= m // 2:
        return _box_above(cfg, j, notes)
    base = box_walls(cfg, m + 1 - j, notes)
    return _box_mirror(base, cfg, j)


@dataclass(frozen=True)
class CoordinateCycles:
    """The staircase ladder plus the four wall-cycle families per branch."""

    alphas: tuple[Cycle, ...]
    upsilons: tuple[Cycle, ...]
    rhos: tuple[Cycle, ...]
    deltas: tuple[Cycle, ...]
    lambdas: tuple[Cycle, ...]
    boxes: tuple[BoxWalls, ...]
    notes: tuple[str, ...]


def coordinate_cycles(cfg: Configuration) -> CoordinateCycles:
    """Cycles whose periods are the geometric coordinates.

    ``alpha_s`` joins the boundary edges flanking staircase slot ``s``
    (its period is that edge); the wall cycles join each branch point's
    two slit edges to the four staircase walls of its box.
    """
    m, n = cfg.m, cfg.n
    notes: list[str] = []
    alphas = []
    for s in range(1, 2 * n + 3):
        left = cfg.p_edge_index(0) if s == 1 else cfg.h_slot_index(s - 1)
        right = (
            cfg.p_edge_index(2 * m + 1) if s == 2 * n + 2 else cfg.h_slot_index(s + 1)
        )
        alphas.append(
            Cycle(f"alpha_{s}", (CycleComponent("joining", left, right),))
        )
    ups, rhos, dels, lams, boxes = [], [], [], [], []
    for j in range(1, m + 1):
        walls = box_walls(cfg, j, notes)
        boxes.append(walls)
        h_slit = cfg.p_edge_index(2 * j - 1)
        v_slit = cfg.p_edge_index(2 * j)
        ups.append(
            Cycle(
                f"upsilon_{j}",
                (CycleComponent("joining", h_slit, cfg.h_slot_index(walls.up)),),
            )
        )
        rhos.append(
            Cycle(
                f"rho_{j}",
                (CycleComponent("joining", v_slit, cfg.h_slot_index(walls.right)),),
            )
        )
        dels.append(
            Cycle(
                f"delta_{j}",
                (CycleComponent("joining", h_slit, cfg.h_slot_index(walls.down)),),
            )
        )
        lams.append(
            Cycle(
                f"lambda_{j}",
                (CycleComponent("joining", v_slit, cfg.h_slot_index(walls.left)),),
            )
        )
    return CoordinateCycles(
        tuple(alphas),
        tuple(ups),
        tuple(rhos),
        tuple(dels),
        tuple(lams),
        tuple(boxes),
        tuple(notes),
    )


# ---------------------------------------------------------------------------
# geometric coordinates


def staircase_corners(outer_edges: np.ndarray) -> np.ndarray:
    """Developed corner chain of the staircase, walked from the origin.

    Odd slots go west, even slots go south; entry 0 is the walk origin.
    """
    outer = np.asarray(outer_edges, dtype=float)
    dirs = np.where(np.arange(len(outer)) % 2 == 0, -1.0 + 0.0j, -1.0j)
    return np.concatenate([[0.0 + 0.0j], np.cumsum(outer * dirs)])


def staircase_clearance(corners: np.ndarray, z: complex) -> float:
    """Signed clearance of a point from the staircase region boundary.

    The region lies northwest of the corner chain, bounded east by the
    vertical ray above the first corner and south by the horizontal ray
    west of the last.  Positive means strictly inside; the magnitude is
    the relevant wall distance (exact away from reentrant corners).
    """
    x, y = z.real, z.imag
    if len(corners) == 1:
        return min(corners[0].real - x, y - corners[0].imag)
    y_end = corners[-1].imag
    if y >= corners[0].imag:
        return corners[0].real - x
    if y <= y_end:
        return y - y_end
    for i in range(1, len(corners), 2):
        if y > corners[i + 1].imag:
            return min(corners[i].real - x, y - y_end)
    return y - y_end


@dataclass
class GeometricCoordinates:
    """Normalized staircase edge lengths plus developed branch offsets.

    ``outer_edges`` are the 2n+2 staircase edge lengths (the ladder-cycle
    period magnitudes), normalized to sum to 1 and mirror-symmetric.
    ``branch_offsets`` are the developed positions of the m interior
    branch points relative to the walk origin; mirror partners reflect
    across the antidiagonal through the staircase midpoint.  The wall
    clearances derived from these are the remaining period magnitudes.
    """

    m: int
    n: int
    outer_edges: np.ndarray
    branch_offsets: np.ndarray

    def __post_init__(self):
        self.outer_edges = np.asarray(self.outer_edges, dtype=float)
        self.branch_offsets = np.asarray(self.branch_offsets, dtype=complex)
        if self.outer_edges.shape != (2 * self.n + 2,):
            raise ValueError("outer_edges must have length 2n+2")
        if self.branch_offsets.shape != (self.m,):
            raise ValueError("branch_offsets must have length m")

    # -- geometry helpers ---------------------------------------------------

    @property
    def walk_end(self) -> complex:
        return complex(-0.5, -0.5)

    def mirror_point(self, z: complex) -> complex:
        """Reflection across the antidiagonal through the staircase middle."""
        return self.walk_end - 1j * np.conj(z)

    def corners(self) -> np.ndarray:
        return staircase_corners(self.outer_edges)

    def wall_value(self, slot: int) -> float:
        """Line coordinate of a staircase wall: y of a tread, x of a riser."""
        w = self.corners()
        if slot % 2 == 1:
            return float(w[slot - 1].imag)
        return float(w[slot - 1].real)

    def branch_corner(self, j: int) -> complex:
        """Slit-line corner tied to the j-th odd planar point, j = 0..m.

        Horizontal coordinate from the vertical slit of branch j (the
        origin ray for j = 0), vertical from the horizontal slit of
        branch j+1 (the end ray for j = m).
        """
        xr = 0.0 if j == 0 else float(self.branch_offsets[j - 1].real)
        yi = (
            self.walk_end.imag
            if j == self.m
            else float(self.branch_offsets[j].imag)
        )
        return complex(xr, yi)

    def conjugate_corners(self) -> np.ndarray:
        """Developed corner chain of the conjugate orthodisk's outer sheet."""
        return staircase_corners(self.outer_edges[1:-1])

    def conjugate_map(self, z: complex) -> complex:
        """Send first-domain line data to the conjugate developed frame."""
        w1 = self.corners()[1]
        return 1j * np.conj(z - w1)

    def clearances(self, cfg: Configuration, j: int) -> dict[str, float]:
        """Signed wall clearances of branch point j (positive = inside box)."""
        walls = box_walls(cfg, j)
        o = self.branch_offsets[j - 1]
        return {
            "upsilon": self.wall_value(walls.up) - o.imag,
            "rho": self.wall_value(walls.right) - o.real,
            "delta": o.imag - self.wall_value(walls.down),
            "lambda": o.real - self.wall_value(walls.left),
        }

    def period_magnitudes(self, cfg: Configuration) -> dict[str, float]:
        """All coordinate-cycle period magnitudes (equal in both domains)."""
        out = {
            f"alpha_{s}": float(self.outer_edges[s - 1])
            for s in range(1, 2 * self.n + 3)
        }
        for j in range(1, self.m + 1):
            for name, val in self.clearances(cfg, j).items():
                out[f"{name}_{j}"] = val
        return out

    # -- canonical interior point and the free chart -------------------------

    @classmethod
    def cold_start(cls, cfg: Configuration) -> "GeometricCoordinates":
        """Equal staircase edges with every branch point well inside its box.

        Above-diagonal branch points sit half a cell southwest of their
        box's near corner; the self-mirrored central branch (odd m) sits
        half a cell northeast of its central walls (a point on the mirror
        line), and the rest are mirror images.
        """
        h = 1.0 / (2 * cfg.n + 2)
        edges = np.full(2 * cfg.n + 2, h)
        offs = np.zeros(cfg.m, dtype=complex)
        for j in range(1, (cfg.m + 1) // 2 + 1):
            walls = box_walls(cfg, j)
            if cfg.m % 2 == 1 and j == (cfg.m + 1) // 2:
                x = -(walls.right / 2.0) * h - h / 2.0
                y = -((walls.down - 1) / 2.0) * h + h / 2.0
            else:
                x = -(walls.right / 2.0) * h - h / 2.0
                y = -((walls.up - 1) / 2.0) * h - h / 2.0
            offs[j - 1] = complex(x, y)
        for j in range((cfg.m + 1) // 2 + 1, cfg.m + 1):
            src = offs[cfg.m - j]
            offs[j - 1] = complex(-0.5 - src.imag, -0.5 - src.real)
        return cls(cfg.m, cfg.n, edges, offs)

    def free_vector(self) -> np.ndarray:
        """Minimal real chart: n edge logits + branch offset coordinates."""
        v = [math.log(self.outer_edges[k] / self.outer_edges[self.n]) for k in range(self.n)]
        for j in range(1, self.m // 2 + 1):
            v += [self.branch_offsets[j - 1].real, self.branch_offsets[j - 1].imag]
        if self.m % 2 == 1:
            v.append(self.branch_offsets[(self.m - 1) // 2].real)
        return np.asarray(v, dtype=float)

    @classmethod
    def from_free_vector(
        cls, cfg: Configuration, v: Sequence[float]
    ) -> "GeometricCoordinates":
        v = np.asarray(v, dtype=float)
        if v.shape != (cfg.chart_size,):
            raise ValueError(
                f"free vector needs {cfg.chart_size} entries, got {v.shape}"
            )
        m, n = cfg.m, cfg.n
        w = np.concatenate([np.exp(v[:n]), [1.0]])
        half = w / (2.0 * np.sum(w))
        edges = np.concatenate([half, half[::-1]])
        offs = np.zeros(m, dtype=complex)
        pos = n
        for j in range(1, m // 2 + 1):
            offs[j - 1] = complex(v[pos], v[pos + 1])
            pos += 2
        if m % 2 == 1:
            r = v[pos]
            offs[(m - 1) // 2] = complex(r, -0.5 - r)
        gc = cls(m, n, edges, offs)
        for j in range(1, m // 2 + 1):
            offs[m - j] = gc.mirror_point(offs[j - 1])
        return gc


def validate_coordinates(
    gc: GeometricCoordinates, cfg: Configuration, tol: float = 1e-9
) -> list[str]:
    """Check positivity, normalization, symmetry, boxes, and containment.

    Returns the list of violated conditions (empty means admissible).
    Each wall violation is reported for both developed domains, since one
    period magnitude bounds a branch point in the first orthodisk and its
    reflected partner in the conjugate one.
    """
    out: list[str] = []
    if (gc.m, gc.n) != (cfg.m, cfg.n):
        return [f"coordinate shape ({gc.m},{gc.n}) != configuration ({cfg.m},{cfg.n})"]
    edges = gc.outer_edges
    if np.any(edges <= tol):
        out.append(f"outer edge lengths must be positive, min = {edges.min():.3g}")
    total = float(np.sum(edges))
    if abs(total - 1.0) > 1e-6:
        out.append(f"outer edge lengths sum to {total:.9f}, expected 1")
    asym = float(np.max(np.abs(edges - edges[::-1]), initial=0.0))
    if asym > 1e-6:
        out.append(f"outer edges break mirror symmetry by {asym:.3g}")
    for j in range(1, gc.m // 2 + 1):
        drift = abs(gc.branch_offsets[gc.m - j] - gc.mirror_point(gc.branch_offsets[j - 1]))
        if drift > 1e-6:
            out.append(f"branch {gc.m + 1 - j} breaks mirror symmetry by {drift:.3g}")
    if out:
        return out
    corners = gc.corners()
    conj = gc.conjugate_corners()
    for j in range(1, gc.m + 1):
        for name, val in gc.clearances(cfg, j).items():
            if val <= tol:
                out.append(
                    f"per {name}_{j} = {val:.3g} <= 0 "
                    f"(box {2 * j} in the Gdh domain)"
                )
                out.append(
                    f"per {name}_{j} = {val:.3g} <= 0 "
                    f"(neighboring box in the conjugate domain)"
                )
        clr = staircase_clearance(corners, complex(gc.branch_offsets[j - 1]))
        if clr <= tol:
            out.append(
                f"branch point {j} outside the outer sheet (clearance {clr:.3g})"
            )
    for j in range(gc.m + 1):
        z = gc.conjugate_map(gc.branch_corner(j))
        clr = staircase_clearance(conj, z)
        if clr <= tol:
            out.append(
                f"conjugate branch corner {j} outside its outer sheet "
                f"(clearance {clr:.3g})"
            )
    return out


# ---------------------------------------------------------------------------
# parameter-problem targets


def domain_targets(
    cfg: Configuration, gc: GeometricCoordinates
) -> tuple[DevelopTarget, DevelopTarget]:
    """Develop targets for the two orthodisks realizing the coordinates.

    The first target pins the 2n+2 staircase edges and the interior
    branch offsets; the second pins the 2n saddle-chain edges and the
    reflected slit-corner offsets, so a pair of solutions is conjugate by
    construction.
    """
    edges1 = {
        cfg.h_slot_index(s): float(gc.outer_edges[s - 1])
        for s in range(1, 2 * cfg.n + 3)
    }
    offsets1 = [
        (
            cfg.ascending_index("C1"),
            cfg.ascending_index(f"P{2 * j}"),
            complex(gc.branch_offsets[j - 1]),
        )
        for j in range(1, cfg.m + 1)
    ]
    t1 = DevelopTarget(
        edge_lengths=edges1,
        offsets=offsets1,
        normalize_edges=tuple(sorted(edges1)),
    )
    edges2 = {
        cfg.h_slot_index(s): float(gc.outer_edges[s - 1])
        for s in range(2, 2 * cfg.n + 2)
    }
    offsets2 = [
        (
            cfg.ascending_index("H1"),
            cfg.ascending_index(f"P{2 * j + 1}"),
            complex(gc.conjugate_map(gc.branch_corner(j))),
        )
        for j in range(cfg.m + 1)
    ]
    t2 = DevelopTarget(
        edge_lengths=edges2,
        offsets=offsets2,
        normalize_edges=tuple(sorted(edges2)),
    )
    return t1, t2
