"""Shared problem definitions and prebuilt solver states.

The four worked problems reappear across the suite; building a state takes a
noticeable fraction of a second, so states are session-scoped.
"""

import numpy as np
import pytest

from slspectral.pipeline import SolverOptions, build_solver
from slspectral.problem import BoundaryConditions, SLProblem


def dirichlet_rows():
    return np.array([[1, 0, 0, 0], [0, 0, 1, 0]], dtype=complex)


@pytest.fixture(scope="session")
def free_problem():
    return SLProblem.from_strings(0.0, np.pi, "1", "0", "1")


@pytest.fixture(scope="session")
def free_bc():
    return BoundaryConditions(dirichlet_rows())


@pytest.fixture(scope="session")
def free_state(free_problem):
    return build_solver(free_problem, SolverOptions(grid_points=1001, n_powers=40))


# Dirichlet problem with p = r = y and a double-pole potential; its kernel is
# a finite polynomial combination, so the fit is exact and the characteristic
# function has the closed form (4 + 3 w^2) sin w - 4 w cos w.
@pytest.fixture(scope="session")
def ex1_problem():
    return SLProblem.from_strings(1.0, 2.0, "y", "1/(4*y) + 2*y/(y-1/2)^2", "y")


@pytest.fixture(scope="session")
def ex1_bc():
    return BoundaryConditions(dirichlet_rows())


# g'(y0)/g(y0) = 5/3 selects the seed solution (y - 1/2)^2 / sqrt(y), for
# which the kernel is exactly a 4-term polynomial combination
EX1_G_LOGDERIV = 5.0 / 3.0


@pytest.fixture(scope="session")
def ex1_state(ex1_problem):
    return build_solver(
        ex1_problem, SolverOptions(mode="symmetric", g_logderiv=EX1_G_LOGDERIV)
    )


@pytest.fixture(scope="session")
def ex1_state_endpoint(ex1_problem):
    return build_solver(
        ex1_problem, SolverOptions(mode="endpoint", g_logderiv=EX1_G_LOGDERIV)
    )


# mixed-boundary problem u'' - 2u' + u = -lam (y^2 + 1) u in divergence form
@pytest.fixture(scope="session")
def ex3_problem():
    return SLProblem.from_strings(0.0, 2.0, "exp(-2*y)", "-exp(-2*y)", "(y^2+1)*exp(-2*y)")


@pytest.fixture(scope="session")
def ex3_bc():
    return BoundaryConditions(np.array([[1, -1, 0, 0], [0, 0, 1, 1]], dtype=complex))


@pytest.fixture(scope="session")
def ex3_state(ex3_problem):
    return build_solver(ex3_problem, SolverOptions(mode="symmetric"))
