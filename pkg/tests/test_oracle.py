"""Direct-integration verification path: closed forms first, then round trips."""

import numpy as np
import pytest
from scipy.optimize import brentq

from slspectral.problem import BoundaryConditions, SLProblem
from slspectral.oracle import (
    exact_char_ex1,
    integrate_ivp,
    oracle_char,
    oracle_eigenvalues,
    oracle_near_origin,
    oracle_self_check,
)
from slspectral.spectrum import CharFunction

from conftest import dirichlet_rows


def first_exact_root():
    ws = np.linspace(1.0, 6.0, 2001)
    vals = exact_char_ex1(ws)
    i = np.nonzero(vals[:-1] * vals[1:] < 0)[0][0]
    return brentq(exact_char_ex1, ws[i], ws[i + 1], xtol=1e-14, rtol=8.9e-16)


def test_exact_char_closed_form_values():
    assert exact_char_ex1(0.0) == 0.0
    assert exact_char_ex1(np.pi) == pytest.approx(4 * np.pi, rel=1e-14)
    # leading order near zero: 4 sin w - 4 w cos w + 3 w^2 sin w = (13/3) w^3
    w = 1e-4
    assert exact_char_ex1(w) == pytest.approx((13.0 / 3.0) * w**3, rel=1e-6)


def test_ivp_free_problem_sine(free_problem):
    sol = integrate_ivp(free_problem, 4.0, 0.0, 1.0)
    assert abs(sol.v_end) <= 1e-11
    assert np.max(np.abs(sol.v - np.sin(2 * sol.y) / 2)) <= 1e-11


def test_ivp_reproduces_polynomial_seed(ex1_problem):
    # (y - 1/2)^2 / sqrt(y) solves the lambda = 0 equation
    sol = integrate_ivp(ex1_problem, 0.0, 0.25, 0.875)
    assert abs(sol.v_end - 2.25 / np.sqrt(2)) <= 1e-10 * abs(sol.v_end)
    exact = (sol.y - 0.5) ** 2 / np.sqrt(sol.y)
    assert np.max(np.abs(sol.v - exact) / np.abs(exact)) <= 1e-10


def test_ivp_reproduces_exponential_seed():
    problem = SLProblem.from_strings(0.0, 2.0, "exp(y)", "2*exp(y)", "exp(y)")
    sol = integrate_ivp(problem, 0.0, 1.0, 1.0)
    assert abs(sol.v_end - np.exp(2.0)) <= 1e-10 * np.exp(2.0)


def test_oracle_char_free_root(free_problem, free_bc):
    val = oracle_char(free_problem, free_bc, np.array([3.0]))[0]
    assert abs(val) <= 1e-11


def test_oracle_char_at_exact_root(ex1_problem, ex1_bc):
    val = oracle_char(ex1_problem, ex1_bc, np.array([first_exact_root()]))[0]
    assert abs(val) <= 1e-9


def test_oracle_char_matches_kernel_char(
    ex1_problem, ex1_bc, ex1_state_endpoint, ex3_problem, ex3_bc, ex3_state
):
    # the two methods anchor their fundamental pairs differently; the
    # determinants differ by the constant p(y0)/p(A)
    w = 7.0
    kern = complex(CharFunction(ex1_state_endpoint, ex1_bc).value(w)[0])
    orac = complex(oracle_char(ex1_problem, ex1_bc, np.array([w]))[0])
    assert abs(kern - orac) <= 1e-6 * abs(orac)

    kern3 = complex(CharFunction(ex3_state, ex3_bc).value(w)[0])
    p0 = complex(ex3_problem.value("p", ex3_state.y0))
    pa = complex(ex3_problem.value("p", ex3_problem.a))
    orac3 = complex(oracle_char(ex3_problem, ex3_bc, np.array([w]))[0]) * p0 / pa
    assert abs(kern3 - orac3) <= 1e-6 * abs(orac3)


def test_oracle_eigenvalues_free(free_problem, free_bc):
    # omega = 10 on the scan boundary would be hit or missed by rounding luck
    spec = oracle_eigenvalues(free_problem, free_bc, omega_max=10.5)
    lams = spec.lambdas().real
    assert len(lams) == 10
    exact = np.arange(1, 11, dtype=float) ** 2
    assert np.max(np.abs(lams - exact) / exact) <= 1e-10
    assert all(rec.method == "oracle" for rec in spec.records)


def test_oracle_reproduces_closed_form_roots(ex1_problem, ex1_bc):
    spec = oracle_eigenvalues(ex1_problem, ex1_bc, omega_min=1.0, omega_max=20.0)
    got = np.sqrt(spec.lambdas().real)
    ws = np.linspace(1.0, 20.0, 8001)
    vals = exact_char_ex1(ws)
    exact = np.array(
        [
            brentq(exact_char_ex1, ws[i], ws[i + 1], xtol=1e-14, rtol=8.9e-16)
            for i in np.nonzero(vals[:-1] * vals[1:] < 0)[0]
        ]
    )
    assert len(got) == len(exact)
    assert np.max(np.abs(got - exact) / exact) <= 1e-10


def test_origin_disc_search():
    # fundamental frequency pi/7 sits inside the default cut radius
    problem = SLProblem.from_strings(0.0, 7.0, "1", "0", "1")
    bc = BoundaryConditions(dirichlet_rows())
    spec = oracle_near_origin(problem, bc, 0.5)
    assert len(spec) == 1
    rec = spec.records[0]
    assert rec.method == "oracle"
    assert abs(rec.lam - (np.pi / 7) ** 2) <= 1e-10


def test_self_check_stability(free_problem, free_bc):
    spec = oracle_eigenvalues(free_problem, free_bc)
    assert oracle_self_check(free_problem, free_bc, spec, count=3) <= 1e-11
