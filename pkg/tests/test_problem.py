"""Problem container and boundary-condition rows."""

import numpy as np
import pytest

from slspectral.errors import InputError
from slspectral.mesh import build_grid
from slspectral.problem import BoundaryConditions, SLProblem


def test_from_strings_and_values():
    pr = SLProblem.from_strings(1.0, 2.0, "y", "1/(4*y)", "y")
    assert pr.value("p", 1.5) == 1.5
    assert pr.value("q", 2.0) == pytest.approx(0.125)
    assert pr.value("dp", 1.7) == pytest.approx(1.0)
    assert pr.value("dr", 1.7) == pytest.approx(1.0)


def test_sampling_is_cached():
    pr = SLProblem.from_strings(0.0, 1.0, "1", "0", "1")
    grid = build_grid(0.0, 1.0, 26)
    assert pr.sample("p", grid) is pr.sample("p", grid)


def test_interval_must_be_increasing():
    with pytest.raises(InputError):
        SLProblem.from_strings(2.0, 1.0, "1", "0", "1")


def test_is_real_on_detects_complex_coefficients():
    grid = build_grid(0.0, 1.0, 26)
    assert SLProblem.from_strings(0.0, 1.0, "1", "0", "1").is_real_on(grid)
    assert not SLProblem.from_strings(0.0, 1.0, "1", "0", "exp(i*y)").is_real_on(grid)


def test_boundary_rows_shape_and_flags():
    rows = np.array([[1, 0, 0, 0], [0, 0, 1, 0]], dtype=complex)
    bc = BoundaryConditions(rows)
    assert bc.is_separated
    assert bc.is_real
    coupled = BoundaryConditions(np.array([[1, 0, -1, 0], [0, 1, 0, -1]], dtype=complex))
    assert not coupled.is_separated
    cplx = BoundaryConditions(np.array([[1j, 0, 0, 0], [0, 0, 1, 0]], dtype=complex))
    assert not cplx.is_real


def test_boundary_rows_validated():
    with pytest.raises(InputError):
        BoundaryConditions(np.zeros((2, 4), dtype=complex))
    with pytest.raises(InputError):
        BoundaryConditions(np.ones((2, 3), dtype=complex))
