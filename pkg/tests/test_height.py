"""Height function: cycle scores, fits, cache, properness probes."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthoflow.config import (
    Configuration,
    GeometricCoordinates,
    dh11_color_cycles,
    validate_coordinates,
)
from orthoflow.height import (
    FIT_TOL,
    HeightCache,
    ParameterProblemFailure,
    evaluate_height,
    height_of_cycle,
)

# ---------------------------------------------------------------------------
# height_of_cycle


def test_height_of_cycle_pinned_values():
    # mpmath, 40 digits: (e - e^(1/2))^2 + (e - e^2)^2
    assert height_of_cycle(1.0, 2.0) == pytest.approx(
        22.96009207241311964, rel=1e-15
    )
    assert height_of_cycle(0.5, 3.0) == pytest.approx(
        375.8375384753569252, rel=1e-15
    )


def test_height_zero_iff_equal():
    assert height_of_cycle(1.7, 1.7) == 0.0
    assert height_of_cycle(2.0, 2.0 + 1e-9) > 0.0


@given(
    a=st.floats(min_value=0.05, max_value=20.0),
    b=st.floats(min_value=0.05, max_value=20.0),
)
@settings(max_examples=100, deadline=None)
def test_height_symmetric_and_positive(a, b):
    h_ab = height_of_cycle(a, b)
    h_ba = height_of_cycle(b, a)
    assert h_ab == h_ba
    if a == b:
        assert h_ab == 0.0
    else:
        assert h_ab > 0.0


def test_height_rejects_nonpositive():
    with pytest.raises(ValueError):
        height_of_cycle(0.0, 1.0)
    with pytest.raises(ValueError):
        height_of_cycle(1.0, -2.0)
    with pytest.raises(ValueError):
        height_of_cycle(float("nan"), 1.0)


def test_height_blows_up_at_degenerate_lengths():
    # e1 -> 0 with e2 bounded: the exp(1/e) term dominates
    assert height_of_cycle(1e-3, 1.0) == math.inf  # exp(1000) overflows
    assert height_of_cycle(0.05, 1.0) > 1e15
    assert height_of_cycle(math.inf, 1.0) == math.inf
    # no OverflowError anywhere
    assert height_of_cycle(1e-300, 1e300) == math.inf


def test_height_grows_with_separation():
    assert height_of_cycle(1.0, 2.0) < height_of_cycle(1.0, 3.0)
    assert height_of_cycle(1.0, 0.5) < height_of_cycle(1.0, 0.25)


# ---------------------------------------------------------------------------
# evaluate_height


def test_costa_height_is_zero():
    cfg = Configuration(0, 0)
    rep = evaluate_height(GeometricCoordinates.cold_start(cfg), cfg)
    assert rep.total == 0.0
    assert rep.scores == ()
    assert rep.worst is None
    # the fitted polygon is the square-symmetric quadrilateral
    assert rep.fit_gdh.spec.prevertices == pytest.approx((-1.0, 0.0, 1.0))
    assert rep.polygon_gdh.extremal_length_between(0, 2) == pytest.approx(
        1.0, abs=1e-12
    )


def test_dh11_cold_start_report():
    cfg = Configuration(1, 1)
    rep = evaluate_height(GeometricCoordinates.cold_start(cfg), cfg)
    assert {s.name for s in rep.scores} == {"mu", "nu"}
    assert rep.total > 1.0
    assert rep.total == pytest.approx(
        math.fsum(s.height for s in rep.scores)
    )
    assert rep.worst in {"mu", "nu"}
    assert rep.fit_gdh.residual_norm < FIT_TOL
    assert rep.fit_conj.residual_norm < FIT_TOL
    d = rep.to_dict()
    assert d["m"] == 1 and d["n"] == 1
    assert len(d["scores"]) == 2
    assert d["total"] == pytest.approx(rep.total)


def test_dh11_color_cycle_heights_match_system():
    # mauve shares feet with mu, blue with nu: identical scores
    cfg = Configuration(1, 1)
    gc = GeometricCoordinates.cold_start(cfg)
    cache = HeightCache()
    rep = evaluate_height(gc, cfg, cache=cache)
    cols = dh11_color_cycles(cfg)
    repc = evaluate_height(
        gc, cfg, cache=cache, cycles=(cols["mauve"], cols["blue"])
    )
    sys_h = {s.name: s.height for s in rep.scores}
    col_h = {s.name: s.height for s in repc.scores}
    assert col_h["mauve"] == pytest.approx(sys_h["mu"], rel=1e-9)
    assert col_h["blue"] == pytest.approx(sys_h["nu"], rel=1e-9)


def test_invalid_coordinates_rejected():
    cfg = Configuration(1, 1)
    gc = GeometricCoordinates.cold_start(cfg)
    bad = GeometricCoordinates(
        m=1,
        n=1,
        outer_edges=gc.outer_edges,
        branch_offsets=np.array([-0.25 - 0.25j]),  # on a staircase corner
    )
    assert validate_coordinates(bad, cfg)
    with pytest.raises(ValueError):
        evaluate_height(bad, cfg)
    # a degenerate target also defeats the fitter, so the validation gate
    # is what turns a numerical stall into a readable error
    with pytest.raises(ParameterProblemFailure):
        evaluate_height(bad, cfg, check=False)
    # check=False on a valid point gives the same answer as the gated path
    rep = evaluate_height(gc, cfg, check=False)
    assert rep.total == pytest.approx(evaluate_height(gc, cfg).total)


def test_parameter_problem_failure_names_side():
    err = ParameterProblemFailure(2, 3.2e-5)
    assert err.domain == 2
    assert err.residual == 3.2e-5
    assert "G^{-1}dh" in str(err)
    assert "3.2" in str(err)


def test_continuity_under_small_perturbation():
    cfg = Configuration(1, 1)
    gc = GeometricCoordinates.cold_start(cfg)
    cache = HeightCache()
    h0 = evaluate_height(gc, cfg, cache=cache).total
    v = gc.free_vector()
    for delta in (np.array([1e-6, 0.0]), np.array([0.0, -1e-6])):
        h1 = evaluate_height(
            GeometricCoordinates.from_free_vector(cfg, v + delta),
            cfg,
            cache=cache,
        ).total
        assert h1 == pytest.approx(h0, rel=1e-1)
        assert h1 / h0 < 10.0 and h0 / h1 < 10.0


def test_cache_warm_start_reduces_effort():
    cfg = Configuration(1, 1)
    gc = GeometricCoordinates.cold_start(cfg)
    cache = HeightCache()
    rep_cold = evaluate_height(gc, cfg, cache=cache)
    v = gc.free_vector()
    gc2 = GeometricCoordinates.from_free_vector(cfg, v + 1e-4)
    rep_warm = evaluate_height(gc2, cfg, cache=cache)
    assert (
        rep_warm.fit_gdh.n_evaluations < rep_cold.fit_gdh.n_evaluations
    )


def test_cache_is_bounded():
    cache = HeightCache(max_entries=5)
    for i in range(9):
        key = np.array([float(i)])
        cache.store(key, np.array([1.0 * i]), np.array([2.0 * i]))
    assert len(cache._keys) == 5
    # oldest entries evicted; nearest lookup works
    got = cache.lookup(np.array([8.2]))
    assert got is not None
    assert got[0] == pytest.approx([8.0])


def test_boundary_blowup_along_rays():
    """Properness at desk scale: five rays toward the boundary of the
    moduli space all push the total height past 10^3 before leaving the
    admissible region."""
    cfg = Configuration(1, 1)
    v0 = GeometricCoordinates.cold_start(cfg).free_vector()
    rays = [
        np.array([+1.0, 0.0]),
        np.array([-1.0, 0.0]),
        np.array([0.0, +0.25]),
        np.array([0.0, -0.25]),
        np.array([0.8, 0.10]),
    ]
    for d in rays:
        cache = HeightCache()
        hmax, s, step = 0.0, 0.0, 0.25
        for _ in range(40):
            v = v0 + (s + step) * d
            gc = GeometricCoordinates.from_free_vector(cfg, v)
            if validate_coordinates(gc, cfg):
                step *= 0.5  # crossed the wall: bisect toward it
                if step < 1e-3:
                    break
                continue
            s += step
            try:
                hmax = max(hmax, evaluate_height(gc, cfg, cache=cache).total)
            except ParameterProblemFailure:
                break  # conformal degeneration outran the fitter
            if hmax > 1e3:
                break
        assert hmax > 1e3, f"ray {d} reached only {hmax:.3e}"
