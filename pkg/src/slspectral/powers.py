"""Nonvanishing particular solution and the two families of formal powers.

A solution g of (p g')' - q g = 0 with g(y0) = (p(y0) r(y0))^(-1/4) seeds two
interleaved integral recursions; the resulting families (phi_k, psi_k) are the
building blocks of the closed-form solution approximations.  g is built as a
series of iterated integrals, which converges for any continuous coefficients
on a finite interval; if the leading solution vanishes somewhere, a complex
combination with the second solution is used instead.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .mesh import Grid, SampledFunction, cumulative_from_point, interpolate
from .problem import SLProblem

__all__ = [
    "ParticularSolution",
    "FormalPowerTable",
    "spps_homogeneous_solution",
    "compute_h",
    "build_formal_powers",
]

_MAX_TERMS = 60
_TERM_STOP = 1e-16
_VANISH_TOL = 1e-12


@dataclass
class ParticularSolution:
    grid: Grid
    y0: float
    g: SampledFunction
    dg: SampledFunction  # g' samples, consistent with w = p g'
    slope: complex | None = None  # set by compute_h

    def min_abs(self) -> float:
        return float(np.min(np.abs(self.g.values)))


@dataclass
class FormalPowerTable:
    n: int
    phi: list[np.ndarray]  # phi[k], k = 0..n; phi[0] = g
    psi: list[np.ndarray]  # psi[k]; psi[0] = 1/g
    sol: ParticularSolution


def _series_pair(
    p: np.ndarray, q: np.ndarray, grid: Grid, y0: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Two solutions of (p u')' = q u by iterated integrals.

    u1(y0) = 1, u1'(y0) = 0;  u2(y0) = 0, u2'(y0) = 1/p(y0).
    Returns (u1, u1', u2, u2').
    """
    inv_p = 1.0 / p

    def run(first: np.ndarray, dfirst: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        total = first.copy()
        dtotal = dfirst.copy()
        term = first
        norm = max(float(np.max(np.abs(total))), 1e-300)
        tnorm = 0.0
        for _ in range(_MAX_TERMS):
            inner = cumulative_from_point(SampledFunction(grid, q * term), y0).values
            term = cumulative_from_point(SampledFunction(grid, inv_p * inner), y0).values
            total = total + term
            dtotal = dtotal + inv_p * inner
            tnorm = float(np.max(np.abs(term)))
            norm = max(norm, float(np.max(np.abs(total))))
            if tnorm < _TERM_STOP * norm:
                return total, dtotal
            # term norms legitimately hump before the factorial decay kicks
            # in; abort only on genuine blowup
            if not np.isfinite(tnorm) or tnorm > 1e60 * norm:
                break
        if tnorm > 1e-12 * norm:
            raise NumericalError("powers", "series for the particular solution did not converge")
        return total, dtotal

    ones = np.ones(grid.m, dtype=np.complex128)
    u1, du1 = run(ones, np.zeros_like(ones))
    first2 = cumulative_from_point(SampledFunction(grid, inv_p), y0).values
    u2, du2 = run(first2, inv_p)
    return u1, du1, u2, du2


def spps_homogeneous_solution(
    problem: SLProblem, grid: Grid, y0: float, g_logderiv: complex | None = None
) -> ParticularSolution:
    """Nonvanishing g with (p g')' = q g and g(y0) = (p(y0) r(y0))^(-1/4).

    ``g_logderiv`` pins g'(y0)/g(y0); by default the first series solution is
    used, with an automatic complex combination when it vanishes somewhere.
    """
    p = problem.sample("p", grid)
    q = problem.sample("q", grid)
    if np.any(p == 0):
        raise NumericalError("powers", "p vanishes at a grid node")
    u1, du1, u2, du2 = _series_pair(p, q, grid, y0)
    p0 = interpolate(SampledFunction(grid, p), y0)

    candidates = []
    if g_logderiv is not None:
        candidates.append(complex(g_logderiv) * p0)
    else:
        candidates.append(0j)
        candidates.append(1j * p0)  # fallback: g = u1 + i p0 u2 cannot vanish for real data
    last_err = "degenerate"
    for c in candidates:
        g = u1 + c * u2
        dg = du1 + c * du2
        gmax = float(np.max(np.abs(g)))
        gmin = float(np.min(np.abs(g)))
        # a real oscillatory g crosses zero between nodes, where min|g| on the
        # grid cannot see it; reject on sign change instead
        if np.max(np.abs(g.imag)) <= 1e-13 * gmax:
            zero_free = not np.any(g.real[:-1] * g.real[1:] <= 0)
        else:
            zero_free = gmin > _VANISH_TOL * gmax
        if zero_free:
            p0r0 = interpolate(SampledFunction(grid, p), y0) * interpolate(
                SampledFunction(grid, problem.sample("r", grid)), y0
            )
            scale = np.exp(-0.25 * np.log(p0r0)) / interpolate(SampledFunction(grid, g), y0)
            sol = ParticularSolution(
                grid, y0, SampledFunction(grid, scale * g), SampledFunction(grid, scale * dg)
            )
            return sol
        last_err = f"min|g| = {gmin:.3e} <= {_VANISH_TOL} * max|g|"
    raise NumericalError("powers", f"particular solution vanishes on the grid ({last_err})")


def compute_h(sol: ParticularSolution, problem: SLProblem, y0: float) -> complex:
    """slope = sqrt(p/r) * (g'/g + rho'/rho) at y0; drives the cosine target."""
    p0 = problem.value("p", y0)
    r0 = problem.value("r", y0)
    rho_ld0 = (problem.value("dp", y0) * r0 + p0 * problem.value("dr", y0)) / (4.0 * p0 * r0)
    g0 = interpolate(sol.g, y0)
    dg0 = interpolate(sol.dg, y0)
    slope = np.sqrt(p0 / r0) * (dg0 / g0 + rho_ld0)
    sol.slope = complex(slope)
    return complex(slope)


def build_formal_powers(
    sol: ParticularSolution, problem: SLProblem, grid: Grid, y0: float, n: int
) -> FormalPowerTable:
    """Tables phi[0..n], psi[0..n] from two independent interleaved recursions.

    Each chain alternates the weights g^2 r and 1/(g^2 p), starting from 1;
    one chain opens with the r-weight, the other with the p-weight.  phi_k
    multiplies the appropriate chain value by g, psi_k divides by g.
    """
    if n < 0:
        raise NumericalError("powers", "power depth must be nonnegative")
    g = sol.g.values
    p = problem.sample("p", grid)
    r = problem.sample("r", grid)
    w_r = g * g * r
    w_p = 1.0 / (g * g * p)
    ones = np.ones(grid.m, dtype=np.complex128)

    tilde = ones  # opens with w_r; feeds phi at even k, psi at odd k
    plain = ones  # opens with w_p; feeds psi at even k, phi at odd k
    phi = [g.copy()]
    psi = [1.0 / g]
    for k in range(1, n + 1):
        odd = k % 2 == 1
        tilde = k * cumulative_from_point(
            SampledFunction(grid, tilde * (w_r if odd else w_p)), y0
        ).values
        plain = k * cumulative_from_point(
            SampledFunction(grid, plain * (w_p if odd else w_r)), y0
        ).values
        if not (np.all(np.isfinite(tilde)) and np.all(np.isfinite(plain))):
            raise NumericalError("powers", f"formal power overflow at k = {k}")
        if odd:
            phi.append(g * plain)
            psi.append(tilde / g)
        else:
            phi.append(g * tilde)
            psi.append(plain / g)
    return FormalPowerTable(n, phi, psi, sol)
