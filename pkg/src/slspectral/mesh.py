"""Uniform grid with panel-based spectral quadrature and interpolation.

The grid carries M nodes with M = 1 (mod 5); consecutive groups of six nodes
form degree-5 panels.  Cumulative integrals integrate each panel's
interpolating polynomial to every interior node and accumulate across panels,
so the rule is exact for polynomials of degree <= 5 and converges at order 6
for smooth integrands.  Off-grid evaluation uses the same panel polynomials,
which makes the interpolant continuous and reproduces node values exactly.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "GridError",
    "Grid",
    "SampledFunction",
    "build_grid",
    "cumulative_integral",
    "cumulative_from_point",
    "interpolate",
    "interpolate_many",
    "derivative",
]

PANEL = 5  # polynomial degree per panel; 6 nodes


class GridError(ValueError):
    pass


def _panel_matrices() -> tuple[np.ndarray, np.ndarray]:
    """Unit-spacing panel operators on nodes s = 0..5, exact to 0.5 ulp.

    cum[i, j]  = integral from 0 to i of the j-th Lagrange basis polynomial
    diff[i, j] = derivative of the j-th basis polynomial at node i

    Built in exact rational arithmetic so weight rows sum exactly.
    """
    from fractions import Fraction

    cum = np.zeros((PANEL + 1, PANEL + 1))
    diff = np.zeros((PANEL + 1, PANEL + 1))
    for j in range(PANEL + 1):
        coeffs = [Fraction(1)]  # increasing-degree coefficients
        for m in range(PANEL + 1):
            if m == j:
                continue
            den = Fraction(j - m)
            new = [Fraction(0)] * (len(coeffs) + 1)
            for k, c in enumerate(coeffs):
                new[k] += c * Fraction(-m) / den
                new[k + 1] += c / den
            coeffs = new
        anti = [Fraction(0)] + [c / (k + 1) for k, c in enumerate(coeffs)]
        der = [c * k for k, c in enumerate(coeffs)][1:]
        for i in range(PANEL + 1):
            cum[i, j] = float(sum(c * Fraction(i) ** k for k, c in enumerate(anti)))
            diff[i, j] = float(sum(c * Fraction(i) ** k for k, c in enumerate(der)))
    return cum, diff


_PANEL_CUM, _PANEL_DIFF = _panel_matrices()

# denominators of the Lagrange basis on s = 0..5
_LAGRANGE_DENOM = np.array(
    [np.prod([j - m for m in range(PANEL + 1) if m != j]) for j in range(PANEL + 1)],
    dtype=float,
)


@dataclass(frozen=True)
class Grid:
    a: float
    b: float
    m: int
    nodes: np.ndarray = field(repr=False, compare=False, default=None)

    @property
    def spacing(self) -> float:
        return (self.b - self.a) / (self.m - 1)

    @property
    def panels(self) -> int:
        return (self.m - 1) // PANEL

    def nearest_index(self, y: float) -> int:
        i = int(round((y - self.a) / self.spacing))
        return min(max(i, 0), self.m - 1)


def build_grid(a: float, b: float, m: int) -> Grid:
    if not (np.isfinite(a) and np.isfinite(b)) or not a < b:
        raise GridError(f"need finite a < b, got [{a}, {b}]")
    if m < PANEL + 1 or (m - 1) % PANEL != 0:
        raise GridError(f"node count must be >= 6 with m = 1 (mod 5), got {m}")
    nodes = a + (b - a) * np.arange(m) / (m - 1)
    nodes[-1] = b
    return Grid(a, b, m, nodes)


@dataclass
class SampledFunction:
    grid: Grid
    values: np.ndarray  # complex128, length grid.m

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.complex128)
        if self.values.shape != (self.grid.m,):
            raise GridError("sample count does not match the grid")

    def at(self, y: float) -> complex:
        return interpolate(self, y)

    __call__ = at


def _panel_view(values: np.ndarray, n_panels: int) -> np.ndarray:
    # rows overlap by one node: panel j covers indices 5j .. 5j+5
    idx = PANEL * np.arange(n_panels)[:, None] + np.arange(PANEL + 1)[None, :]
    return values[idx]


def cumulative_integral(f: SampledFunction, anchor: int = 0) -> SampledFunction:
    """Antiderivative samples vanishing exactly at node index ``anchor``."""
    grid = f.grid
    if not 0 <= anchor < grid.m:
        raise GridError(f"anchor index {anchor} outside the grid")
    vals = f.values
    if not np.all(np.isfinite(vals)):
        raise GridError("non-finite samples in integrand")
    h = grid.spacing
    panels = _panel_view(vals, grid.panels)
    inner = h * (panels @ _PANEL_CUM[1:].T)  # (n_panels, 5): integral to nodes 1..5
    out = np.empty(grid.m, dtype=np.complex128)
    out[0] = 0.0
    # accumulate panel totals in extended precision; plain cumsum roundoff
    # across thousands of panels would dominate the quadrature error
    totals = np.cumsum(inner[:, -1].astype(np.clongdouble))
    bases = np.concatenate(([0.0 + 0.0j], totals[:-1].astype(np.complex128)))
    out[1:] = (bases[:, None] + inner).reshape(-1)
    out -= out[anchor]
    return SampledFunction(grid, out)


def cumulative_from_point(f: SampledFunction, y0: float) -> SampledFunction:
    """Antiderivative vanishing at an arbitrary point ``y0`` of the interval."""
    out = cumulative_integral(f, anchor=f.grid.nearest_index(y0))
    offset = interpolate(out, y0)
    if offset != 0:
        out.values = out.values - offset
    return out


def _locate(grid: Grid, y: float) -> tuple[int, float]:
    if not grid.a - 1e-9 * (grid.b - grid.a) <= y <= grid.b + 1e-9 * (grid.b - grid.a):
        raise GridError(f"point {y} outside [{grid.a}, {grid.b}]")
    h = grid.spacing
    p = int((y - grid.a) / (PANEL * h))
    p = min(max(p, 0), grid.panels - 1)
    s = (y - grid.nodes[PANEL * p]) / h
    return p, s


def interpolate(f: SampledFunction, y: float) -> complex:
    """Panel-polynomial value at ``y``; exact at grid nodes."""
    p, s = _locate(f.grid, y)
    j = int(round(s))
    if 0 <= j <= PANEL and abs(s - j) < 1e-9:
        return complex(f.values[PANEL * p + j])
    pane = f.values[PANEL * p : PANEL * p + PANEL + 1]
    diffs = s - np.arange(PANEL + 1)
    full = np.prod(diffs)
    weights = full / (diffs * _LAGRANGE_DENOM)
    return complex(weights @ pane)


def interpolate_many(f: SampledFunction, ys: np.ndarray) -> np.ndarray:
    return np.array([interpolate(f, float(y)) for y in np.asarray(ys, dtype=float)])


def derivative(f: SampledFunction) -> SampledFunction:
    """Samples of the panel interpolant's derivative (order-5 accurate)."""
    grid = f.grid
    h = grid.spacing
    panels = _panel_view(f.values, grid.panels)
    dvals = (panels @ _PANEL_DIFF.T) / h  # (n_panels, 6)
    out = np.empty(grid.m, dtype=np.complex128)
    out[: grid.m - 1] = dvals[:, :PANEL].reshape(-1)
    out[-1] = dvals[-1, -1]
    return SampledFunction(grid, out)
