"""Grid construction, panel quadrature, interpolation."""

import numpy as np
import pytest

from slspectral.mesh import (
    GridError,
    SampledFunction,
    build_grid,
    cumulative_from_point,
    cumulative_integral,
    derivative,
    interpolate,
    interpolate_many,
)


def test_build_grid_node_count_rule():
    g = build_grid(0.0, 1.0, 26)
    assert g.m == 26
    assert g.nodes[0] == 0.0 and g.nodes[-1] == 1.0
    for bad in (25, 27, 5, 0):
        with pytest.raises(GridError):
            build_grid(0.0, 1.0, bad)


def test_cumulative_exact_on_degree_five():
    # the panel rule integrates its own interpolating polynomial, so any
    # degree-5 polynomial is reproduced to roundoff
    grid = build_grid(-1.0, 3.0, 41)
    y = grid.nodes
    f = SampledFunction(grid, 2.0 * y**5 - y**3 + 0.5 * y - 3.0)
    got = cumulative_integral(f).values
    exact = (2.0 * y**6 / 6 - y**4 / 4 + 0.25 * y**2 - 3.0 * y) - (
        2.0 * (-1.0) ** 6 / 6 - 1.0 / 4 + 0.25 - 3.0 * (-1.0)
    )
    assert np.max(np.abs(got - exact)) <= 1e-13 * np.max(np.abs(exact))


def test_cumulative_convergence_order_six():
    errs = []
    for m in (21, 41, 81, 161):
        grid = build_grid(0.0, 2.0, m)
        F = cumulative_integral(SampledFunction(grid, np.exp(grid.nodes))).values
        errs.append(abs(F[-1] - (np.exp(2.0) - 1.0)))
    for coarse, fine in zip(errs, errs[1:]):
        assert coarse / fine >= 2.0**5  # halving gains at least 2^5; measured ~2^6


def test_cumulative_from_point_anchors_exactly():
    grid = build_grid(0.0, 2.0, 51)
    F = cumulative_from_point(SampledFunction(grid, np.cos(grid.nodes)), 1.2)
    # 1.2 falls on a node of this grid; the anchored value is exactly zero
    k = int(round(1.2 / (2.0 / 50)))
    assert grid.nodes[k] == pytest.approx(1.2, abs=1e-15)
    assert F.values[k] == 0.0
    exact = np.sin(grid.nodes) - np.sin(grid.nodes[k])
    assert np.max(np.abs(F.values - exact)) <= 1e-9


def test_cumulative_from_point_off_node_anchor():
    grid = build_grid(0.0, 2.0, 51)
    y0 = 0.7137
    F = cumulative_from_point(SampledFunction(grid, np.exp(grid.nodes)), y0)
    exact = np.exp(grid.nodes) - np.exp(y0)
    assert np.max(np.abs(F.values - exact)) <= 1e-9


def test_interpolate_exact_at_nodes_and_degree_five():
    grid = build_grid(0.5, 1.5, 31)
    vals = grid.nodes**5 - 2.0 * grid.nodes**2 + 1.0
    f = SampledFunction(grid, vals.astype(complex))
    for k in (0, 7, 30):
        assert interpolate(f, float(grid.nodes[k])) == vals[k]
    ys = np.linspace(0.5, 1.5, 97)
    got = interpolate_many(f, ys)
    assert np.max(np.abs(got - (ys**5 - 2.0 * ys**2 + 1.0))) <= 1e-12


def test_derivative_of_smooth_sample():
    grid = build_grid(0.0, 1.0, 201)
    d = derivative(SampledFunction(grid, np.exp(2.0 * grid.nodes)))
    exact = 2.0 * np.exp(2.0 * grid.nodes)
    assert np.max(np.abs(d.values - exact) / exact) <= 1e-8
