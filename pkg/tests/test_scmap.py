"""Orthodisk developing map: quadrature vs closed forms and mpmath."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gamma as gamma_fn

from orthoflow.scmap import (
    DevelopTarget,
    OrthodiskSpec,
    develop,
    developed_to_svg,
    edge_length,
    period_integral,
    solve_parameter_problem,
)

from oracles import (
    oracle_edge_length,
    oracle_polyline_position,
    oracle_ray_length,
)

# the simplest genus-one example: three finite prevertices, one branch
# point of cone angle 5 pi / 2 (exponent -3 would be its partner domain)
COSTA = OrthodiskSpec((-1.0, 0.0, 1.0), (-1, -3, -1), 1)


def test_validation_rejects_even_exponents():
    with pytest.raises(ValueError):
        OrthodiskSpec((0.0,), (-2,), -2)


def test_validation_rejects_bad_sum():
    with pytest.raises(ValueError):
        OrthodiskSpec((-1.0, 1.0), (-1, -1), -1)  # sum -3, needs -2 (even)


def test_validation_rejects_unsorted():
    with pytest.raises(ValueError):
        OrthodiskSpec((1.0, -1.0, 0.0), (-1, -3, -1), 1)


def test_edge_length_lemniscatic_closed_form():
    """For the all-right-angle spec on (-1, 0, 1) the inner edge length is
    int_0^1 ds / sqrt(s (1 - s^2)) = Gamma(1/4) Gamma(1/2) / (2 Gamma(3/4)),
    the lemniscate constant."""
    spec = OrthodiskSpec((-1.0, 0.0, 1.0), (-1, -1, -1), -1)
    want = gamma_fn(0.25) * gamma_fn(0.5) / (2.0 * gamma_fn(0.75))
    assert edge_length(spec, 0) == pytest.approx(want, rel=1e-13)
    assert edge_length(spec, 1) == pytest.approx(want, rel=1e-13)


def test_edge_length_against_mpmath():
    spec = OrthodiskSpec((-2.0, -0.5, 1.0, 1.5, 4.0), (-1, 1, -3, 3, -1), -3)
    for e in range(4):
        if not spec.edge_is_finite(e):
            continue
        lo, hi = spec.prevertices[e], spec.prevertices[e + 1]
        want = float(
            oracle_edge_length(spec.prevertices, spec.exponents, lo, hi)
        )
        assert edge_length(spec, e) == pytest.approx(want, rel=1e-11)


def test_ray_length_against_mpmath():
    want = float(oracle_ray_length((-1.0, 0.0, 1.0), (-1, -3, -1), 1.0, +1))
    assert edge_length(COSTA, 2) == pytest.approx(want, rel=1e-12)
    assert edge_length(COSTA, 3) == pytest.approx(want, rel=1e-12)  # symmetry


def test_infinite_edges_report_inf():
    assert edge_length(COSTA, 0) == math.inf
    assert edge_length(COSTA, 1) == math.inf


def _random_spec(draw):
    n = draw(st.sampled_from([1, 3, 5]))
    exps = [draw(st.sampled_from([-3, -1, 1, 3])) for _ in range(n)]
    gaps = [draw(st.floats(min_value=0.3, max_value=3.0)) for _ in range(n - 1)]
    t0 = draw(st.floats(min_value=-2.0, max_value=2.0))
    ts = [t0]
    for g in gaps:
        ts.append(ts[-1] + g)
    return OrthodiskSpec(tuple(ts), tuple(exps), -4 - sum(exps))


@given(st.data())
@settings(max_examples=40, deadline=None)
def test_consecutive_edges_orthogonal(data):
    spec = _random_spec(data.draw)
    for e in range(spec.n_edges):
        d0 = spec.edge_direction(e)
        d1 = spec.edge_direction((e + 1) % spec.n_edges)
        a_v = spec.vertex_exponent(e + 1)
        # crossing vertex v multiplies the direction by i^(-a_v)
        want = d0 * np.exp(-1j * (math.pi / 2.0) * a_v)
        assert abs(d1 - want) < 1e-12
        assert abs(np.real(d0 * np.conj(d1))) < 1e-12  # perpendicular


@given(st.data())
@settings(max_examples=15, deadline=None)
def test_develop_dual_route_consistency(data):
    spec = _random_spec(data.draw)
    dev = develop(spec)
    assert dev.consistency < 1e-9


def test_develop_positions_against_mpmath():
    dev = develop(COSTA)
    got = dev.positions[2] - dev.positions[0]
    want = complex(
        oracle_polyline_position(
            COSTA.prevertices, COSTA.exponents, [-1.0, -1.0 + 1.0j, 1.0 + 1.0j, 1.0]
        )
    )
    assert got == pytest.approx(want, abs=1e-12)


def test_costa_square_periods():
    """The symmetric three-point orthodisk develops with equal horizontal
    and vertical periods (the developed picture closes up a square)."""
    dev = develop(COSTA)
    per_h = dev.period_between(0, 2)  # horizontal edges: offset is vertical
    per_v = dev.period_between(1, 3)  # vertical edges: offset is horizontal
    assert abs(per_h.real) < 1e-12
    assert abs(per_v.imag) < 1e-12
    assert abs(per_h) == pytest.approx(abs(per_v), rel=1e-12)
    assert abs(per_h) == pytest.approx(edge_length(COSTA, 2), rel=1e-12)


def test_period_between_rejects_nonparallel():
    dev = develop(COSTA)
    with pytest.raises(ValueError):
        dev.period_between(0, 1)


@given(st.data())
@settings(max_examples=10, deadline=None)
def test_period_dual_routes_agree(data):
    """Developed-offset periods equal direct interior quadrature."""
    spec = _random_spec(data.draw)
    dev = develop(spec)
    scale = max((l for l in dev.lengths if np.isfinite(l)), default=1.0)
    for ea in range(spec.n_edges):
        for eb in range(ea + 2, spec.n_edges):
            if (eb + 1) % spec.n_edges == ea:
                continue
            da = complex(dev.directions[ea])
            db = complex(dev.directions[eb])
            if abs(da.real * db.imag - da.imag * db.real) > 1e-9:
                continue  # not parallel
            try:
                want = dev.period_between(ea, eb)
            except ValueError:
                continue
            raw = period_integral(spec, ea, eb)
            perp = raw - (raw.real * da.real + raw.imag * da.imag) * da
            assert abs(perp - want) < 1e-9 * max(scale, 1.0)


def test_scale_rotates_and_stretches():
    spec = OrthodiskSpec((-1.0, 0.0, 1.0), (-1, -3, -1), 1, scale=2.0j)
    base = develop(COSTA)
    dev = develop(spec)
    assert dev.lengths[2] == pytest.approx(2.0 * base.lengths[2], rel=1e-13)
    assert complex(dev.directions[0]) == pytest.approx(
        1j * complex(base.directions[0]), abs=1e-13
    )


def test_parameter_problem_roundtrip():
    """Recover a known prevertex configuration from its developed data."""

    def build(x):
        return OrthodiskSpec((-1.0, 0.0, float(np.exp(x[0]))), (-1, -3, -1), 1)

    true_x = np.array([math.log(1.7)])
    dev = develop(build(true_x))
    target = DevelopTarget(
        edge_lengths={2: float(dev.lengths[2]), 3: float(dev.lengths[3])},
        offsets=[(0, 2, complex(dev.positions[2] - dev.positions[0]))],
        normalize_edges=(3,),
    )
    fit = solve_parameter_problem(build, np.array([0.0]), target)
    assert fit.converged
    assert fit.params[0] == pytest.approx(true_x[0], abs=1e-8)
    assert fit.scale == pytest.approx(1.0, rel=1e-8)


def test_parameter_problem_zero_dims():
    dev = develop(COSTA)
    target = DevelopTarget(
        edge_lengths={2: float(dev.lengths[2])}, normalize_edges=(2,)
    )
    fit = solve_parameter_problem(lambda x: COSTA, np.zeros(0), target)
    assert fit.residual_norm < 1e-14


def test_svg_export(tmp_path):
    dev = develop(COSTA)
    out = tmp_path / "costa.svg"
    developed_to_svg(dev, str(out))
    text = out.read_text()
    assert text.startswith("<svg")
    assert "stroke-dasharray" in text  # the four rays are dashed
    assert text.count("<line") == 4
