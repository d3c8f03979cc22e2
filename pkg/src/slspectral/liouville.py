"""Change of variables mapping (p v')' - q v + lambda r v = 0 to potential form.

The new coordinate is x(y) = integral of sqrt(r/p); the weight rho = (p r)^(1/4)
relates solutions of the two forms.  The module also builds the two target
functions that the kernel-coefficient fit must reproduce; both use first
derivatives of p and r only.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .mesh import (
    Grid,
    SampledFunction,
    cumulative_from_point,
    cumulative_integral,
    derivative,
    interpolate,
)
from .problem import SLProblem

__all__ = ["LiouvilleMap", "compute_l", "compute_rho", "compute_Q", "compute_G"]


@dataclass
class LiouvilleMap:
    mode: str  # "endpoint" or "symmetric"
    y0: float
    x: SampledFunction  # transformed coordinate, x(y0) = 0
    half_length: complex
    rho: SampledFunction
    rho_logderiv: SampledFunction
    cos_target: SampledFunction | None = None  # fitted by the a-coefficients
    sin_target: SampledFunction | None = None  # fitted by the b-coefficients
    slope: complex | None = None  # sqrt(p/r)*(g'/g + rho'/rho) at y0


def _sqrt_ratio(problem: SLProblem, grid: Grid) -> np.ndarray:
    p = problem.sample("p", grid)
    r = problem.sample("r", grid)
    if np.any(p == 0):
        raise NumericalError("liouville", "p vanishes at a grid node")
    ratio = r / p
    if np.any(ratio == 0) or not np.all(np.isfinite(ratio)):
        raise NumericalError("liouville", "r/p vanishes or is non-finite on the grid")
    return np.sqrt(ratio)


def compute_l(problem: SLProblem, grid: Grid, mode: str) -> tuple[float, SampledFunction, complex]:
    """Return (y0, x(y), half-length).

    endpoint mode anchors x at y0 = A; symmetric mode solves x(y0) = x(B)/2
    by bisection on the monotone interpolant, which requires r/p real and
    positive.
    """
    if mode not in ("endpoint", "symmetric"):
        raise NumericalError("liouville", f"unknown mode {mode!r}")
    w = _sqrt_ratio(problem, grid)
    if mode == "symmetric":
        scale = np.max(np.abs(w))
        if np.max(np.abs(w.imag)) > 1e-12 * scale or np.any(w.real <= 0):
            raise NumericalError("liouville", "symmetric mode needs real positive r/p")
    raw = cumulative_integral(SampledFunction(grid, w), anchor=0)
    total = complex(raw.values[-1])
    if mode == "endpoint":
        return grid.a, raw, total

    target = total.real / 2.0
    lo, hi = grid.a, grid.b
    flo = raw.values[0].real - target
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        fmid = interpolate(raw, mid).real - target
        if fmid == 0.0:
            lo = hi = mid
            break
        if (fmid < 0) == (flo < 0):
            lo, flo = mid, fmid
        else:
            hi = mid
        if hi - lo <= 1e-16 * (grid.b - grid.a):
            break
    y0 = 0.5 * (lo + hi)
    offset = interpolate(raw, y0)
    if abs(offset - target) > 1e-13 * abs(total):
        raise NumericalError("liouville", "bisection for the interval midpoint failed")
    x = SampledFunction(grid, raw.values - offset)
    return y0, x, total / 2.0


def compute_rho(problem: SLProblem, grid: Grid) -> tuple[SampledFunction, SampledFunction]:
    """Weight rho = (p r)^(1/4) (principal branch) and its log-derivative."""
    p = problem.sample("p", grid)
    r = problem.sample("r", grid)
    pr = p * r
    if np.any(pr == 0):
        raise NumericalError("liouville", "p*r vanishes at a grid node")
    jumps = np.abs(np.diff(np.angle(pr)))
    if np.any(jumps > np.pi / 2):
        raise NumericalError("liouville", "branch jump in (p*r)^(1/4) across the grid")
    rho = np.exp(0.25 * np.log(pr))
    dp = problem.sample("dp", grid)
    dr = problem.sample("dr", grid)
    logderiv = (dp * r + p * dr) / (4.0 * pr)
    return SampledFunction(grid, rho), SampledFunction(grid, logderiv)


def _p_slope(problem: SLProblem, grid: Grid) -> np.ndarray:
    """P = (p' r + p r') / (sqrt(p) r^(3/2)); the potential terms need only P."""
    p = problem.sample("p", grid)
    r = problem.sample("r", grid)
    dp = problem.sample("dp", grid)
    dr = problem.sample("dr", grid)
    if np.any(r == 0):
        raise NumericalError("liouville", "r vanishes at a grid node")
    return (dp * r + p * dr) / (np.sqrt(p) * r * np.sqrt(r))


def compute_Q(problem: SLProblem, grid: Grid) -> SampledFunction:
    """Potential of the transformed equation, sampled in y (diagnostic).

    Uses q/r + sqrt(p/r) * P'/4 + P^2/16 with P' taken numerically from the
    panel interpolant, so no second derivatives of p or r are required.
    """
    p = problem.sample("p", grid)
    q = problem.sample("q", grid)
    r = problem.sample("r", grid)
    P = _p_slope(problem, grid)
    dP = derivative(SampledFunction(grid, P)).values
    vals = q / r + np.sqrt(p / r) * dP / 4.0 + P * P / 16.0
    return SampledFunction(grid, vals)


def compute_G(
    problem: SLProblem, grid: Grid, y0: float, slope: complex
) -> tuple[SampledFunction, SampledFunction]:
    """Targets of the two coefficient fits.

    sin_target(y) = (1/4) * integral of the transformed potential from 0 to
    x(y); cos_target = slope/2 + sin_target.  The integral is rewritten in y
    so that only p, q, r and the first derivatives of p, r appear.
    """
    p = problem.sample("p", grid)
    q = problem.sample("q", grid)
    r = problem.sample("r", grid)
    P = _p_slope(problem, grid)
    P0 = interpolate(SampledFunction(grid, P), y0)
    term1 = cumulative_from_point(SampledFunction(grid, q / np.sqrt(p * r)), y0).values
    term2 = (P - P0) / 4.0
    # the squared log-derivative term carries dx = sqrt(r/p) dy, same as term1
    term3 = cumulative_from_point(SampledFunction(grid, np.sqrt(r / p) * P * P), y0).values / 16.0
    int_Q = term1 + term2 + term3
    sin_target = int_Q / 4.0
    cos_target = slope / 2.0 + sin_target
    return SampledFunction(grid, cos_target), SampledFunction(grid, sin_target)
