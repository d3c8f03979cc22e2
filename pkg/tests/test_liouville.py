"""Coordinate map, weight function, and the two fit targets."""

import numpy as np
import pytest

from slspectral.errors import NumericalError
from slspectral.liouville import compute_G, compute_l, compute_Q, compute_rho
from slspectral.mesh import SampledFunction, build_grid, cumulative_from_point, interpolate
from slspectral.problem import SLProblem


@pytest.fixture(scope="module")
def exp_problem():
    # p = r = e^y, q = 2e^y on [0, 2]: the transformed potential is the
    # constant 9/4 and every map quantity has a closed form
    return SLProblem.from_strings(0.0, 2.0, "exp(y)", "2*exp(y)", "exp(y)")


def test_symmetric_map_of_exp_problem(exp_problem):
    grid = build_grid(0.0, 2.0, 201)
    y0, x, half = compute_l(exp_problem, grid, "symmetric")
    assert y0 == pytest.approx(1.0, abs=1e-12)
    assert complex(half) == pytest.approx(1.0, abs=1e-12)
    assert np.max(np.abs(x.values - (grid.nodes - 1.0))) <= 1e-12


def test_endpoint_map_anchors_at_left(exp_problem):
    grid = build_grid(0.0, 2.0, 201)
    y0, x, total = compute_l(exp_problem, grid, "endpoint")
    assert y0 == 0.0
    assert x.values[0] == 0.0
    assert complex(total) == pytest.approx(2.0, abs=1e-12)


def test_nonlinear_map():
    # p = y, r = 1/y gives dx = dy/y, so x = log(y)
    pr = SLProblem.from_strings(1.0, 4.0, "y", "-y", "1/y")
    grid = build_grid(1.0, 4.0, 301)
    _, x, total = compute_l(pr, grid, "endpoint")
    assert np.max(np.abs(x.values - np.log(grid.nodes))) <= 1e-12
    assert complex(total) == pytest.approx(np.log(4.0), abs=1e-12)


def test_rho_and_logderiv(exp_problem):
    grid = build_grid(0.0, 2.0, 201)
    rho, ld = compute_rho(exp_problem, grid)
    assert np.max(np.abs(rho.values - np.exp(grid.nodes / 2))) <= 1e-12
    assert np.max(np.abs(ld.values - 0.5)) <= 1e-12
    assert interpolate(rho, 1.0) == pytest.approx(np.exp(0.5), abs=1e-12)


def test_transformed_potential_constant(exp_problem):
    grid = build_grid(0.0, 2.0, 201)
    Q = compute_Q(exp_problem, grid)
    assert np.max(np.abs(Q.values - 2.25)) <= 1e-8


def test_targets_match_direct_potential_integration():
    """4*sin_target must equal the x-integral of the sampled potential.

    compute_G assembles the integral from first-derivative terms only;
    compute_Q needs a numerical second derivative.  The two routes are
    independent enough that a wrong integrand weight in either one shows up
    here at O(1), in particular on problems with p != r.
    """
    cases = [
        SLProblem.from_strings(0.0, 2.0, "exp(-2*y)", "-exp(-2*y)", "(y^2+1)*exp(-2*y)"),
        SLProblem.from_strings(1.0, 4.0, "y", "-y", "1/y"),
        SLProblem.from_strings(1.0, 2.0, "y", "1/(4*y) + 2*y/(y-1/2)^2", "y"),
    ]
    for pr in cases:
        grid = build_grid(pr.a, pr.b, 2001)
        y0, _, _ = compute_l(pr, grid, "endpoint")
        cos_t, sin_t = compute_G(pr, grid, y0, slope=0.0)
        Q = compute_Q(pr, grid).values
        w = np.sqrt(pr.sample("r", grid) / pr.sample("p", grid))
        direct = cumulative_from_point(SampledFunction(grid, Q * w), y0).values
        scale = max(np.max(np.abs(direct)), 1.0)
        assert np.max(np.abs(4.0 * sin_t.values - direct)) <= 1e-7 * scale
        assert np.max(np.abs(cos_t.values - sin_t.values)) <= 1e-12  # slope 0


def test_cos_target_offset_is_half_slope(exp_problem):
    grid = build_grid(0.0, 2.0, 201)
    cos_t, sin_t = compute_G(exp_problem, grid, 1.0, slope=1.5)
    assert np.max(np.abs(cos_t.values - sin_t.values - 0.75)) <= 1e-13


def test_vanishing_p_is_rejected():
    pr = SLProblem.from_strings(1.0, 2.0, "y - 1.5", "0", "y")
    grid = build_grid(1.0, 2.0, 201)
    with pytest.raises(NumericalError):
        compute_l(pr, grid, "endpoint")


def test_symmetric_mode_needs_real_weight():
    pr = SLProblem.from_strings(0.0, np.pi, "1", "0", "exp(i*y)")
    grid = build_grid(0.0, np.pi, 201)
    with pytest.raises(NumericalError):
        compute_l(pr, grid, "symmetric")
    # endpoint mode accepts the same problem
    _, x, total = compute_l(pr, grid, "endpoint")
    assert complex(total) == pytest.approx(2.0 + 2.0j, abs=1e-10)
