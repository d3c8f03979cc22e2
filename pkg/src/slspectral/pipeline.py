"""High-level driver: build the solver state, then search for eigenvalues.

build_solver runs the preparation stages in order (coordinate map, seed
solution, recursive function tables, coefficient fit) and returns the state
that evaluate/spectrum consume.  find_spectrum walks the requested regions:
real axis scan, imaginary axis scan for negative eigenvalues, argument
principle rectangles for complex ones.  The disc |omega| < omega_cut, where
the kernel approximation loses accuracy, is delegated to the direct
integration oracle and merged in with its own method tag.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError
from .evaluate import SolverState
from .kernel import build_basis, fit_coefficients
from .liouville import LiouvilleMap, compute_G, compute_l, compute_rho
from .mesh import build_grid
from .oracle import oracle_near_origin
from .powers import build_formal_powers, compute_h, spps_homogeneous_solution
from .problem import BoundaryConditions, SLProblem
from .spectrum import CharFunction, Spectrum, _append_root, _finalize, find_complex, scan_imaginary, scan_real

__all__ = ["SolverOptions", "SearchOptions", "build_solver", "find_spectrum", "solve"]


@dataclass
class SolverOptions:
    mode: str = "endpoint"  # "endpoint": x(A) = 0; "symmetric": x centered
    grid_points: int = 4001
    n_powers: int = 60
    n_fit: int | None = None  # None: residual-driven ladder
    g_logderiv: complex | None = None  # g'(y0)/g(y0) seed; None: auto
    omega_cut: float = 0.5

    def validate(self) -> None:
        if self.mode not in ("endpoint", "symmetric"):
            raise InputError(f"unknown mode {self.mode!r}")
        if self.grid_points < 9:
            raise InputError("grid_points must be at least 9")
        if self.n_powers < 4:
            raise InputError("n_powers must be at least 4")
        if self.omega_cut <= 0:
            raise InputError("omega_cut must be positive")


@dataclass
class SearchOptions:
    omega_min: float = 0.5  # effective lower end is max(omega_min, omega_cut)
    omega_max: float = 10.0
    scan_step: float = 0.02
    tau_max: float = 0.0  # > omega_min enables the imaginary-axis scan
    complex_search: bool = False
    rect: tuple[float, float, float, float] | None = None  # Re/Re/Im/Im bounds
    near_origin: bool = True  # oracle sweep of the |omega| < omega_cut disc
    threads: int = 1  # regions run in parallel; merge order is fixed

    def validate(self) -> None:
        if self.omega_max <= self.omega_min:
            raise InputError("omega_max must exceed omega_min")
        if self.scan_step <= 0:
            raise InputError("scan_step must be positive")
        if self.complex_search and self.rect is None:
            raise InputError("complex_search needs rectangle bounds")
        if self.threads < 1:
            raise InputError("threads must be at least 1")


@dataclass
class Diagnostics:
    eps_cos: float = 0.0
    eps_sin: float = 0.0
    n_fit: int = 0
    g_min: float = 0.0
    build_seconds: float = 0.0
    search_seconds: float = 0.0
    char_evaluations: int = 0
    error_factor: float = 0.0
    notes: list[str] = field(default_factory=list)

    def lines(self) -> list[str]:
        return [
            f"fit residuals eps1={self.eps_cos:.3e} eps2={self.eps_sin:.3e} with {self.n_fit} terms",
            f"seed solution min |g| = {self.g_min:.3e}",
            f"uniform error factor <= {self.error_factor:.3e}",
            f"build {self.build_seconds:.2f}s, search {self.search_seconds:.2f}s, "
            f"{self.char_evaluations} characteristic evaluations",
            *self.notes,
        ]


def build_solver(problem: SLProblem, options: SolverOptions | None = None) -> SolverState:
    opts = options or SolverOptions()
    opts.validate()
    t0 = time.perf_counter()
    grid = build_grid(problem.a, problem.b, opts.grid_points)
    y0, x, half = compute_l(problem, grid, opts.mode)
    rho, rho_ld = compute_rho(problem, grid)
    sol = spps_homogeneous_solution(problem, grid, y0, opts.g_logderiv)
    h = compute_h(sol, problem, y0)
    cos_t, sin_t = compute_G(problem, grid, y0, h)
    lmap = LiouvilleMap(opts.mode, y0, x, half, rho, rho_ld, cos_t, sin_t, h)
    table = build_formal_powers(sol, problem, grid, y0, opts.n_powers)
    basis = build_basis(table, lmap, opts.n_powers)
    coeffs = fit_coefficients(basis, cos_t, sin_t, opts.n_fit)
    state = SolverState(problem, grid, lmap, table, coeffs)
    diag = Diagnostics(
        eps_cos=coeffs.residual_cos,
        eps_sin=coeffs.residual_sin,
        n_fit=coeffs.n_fit,
        g_min=float(np.min(np.abs(sol.g.values))),
        build_seconds=time.perf_counter() - t0,
        error_factor=coeffs.error_factor(lmap),
    )
    state.diagnostics = diag
    return state


def find_spectrum(
    state: SolverState,
    bc: BoundaryConditions,
    search: SearchOptions | None = None,
    omega_cut: float = 0.5,
) -> Spectrum:
    opts = search or SearchOptions()
    opts.validate()
    t0 = time.perf_counter()
    lo = max(opts.omega_min, omega_cut)
    fns: list[CharFunction] = []

    def charfn() -> CharFunction:
        fn = CharFunction(state, bc)
        fns.append(fn)
        return fn

    # each region is independent; results merge in this fixed order so the
    # output does not depend on the thread count
    jobs = [lambda: scan_real(charfn(), lo, opts.omega_max, opts.scan_step)]
    if opts.tau_max > lo:
        jobs.append(lambda: scan_imaginary(charfn(), lo, opts.tau_max, opts.scan_step))
    if opts.complex_search and opts.rect is not None:

        def complex_job():
            fn = charfn()
            return find_complex(fn, *opts.rect, _rect_scale(fn, opts.rect), omega_cut=omega_cut)

        jobs.append(complex_job)
    if opts.near_origin:
        jobs.append(lambda: oracle_near_origin(state.problem, bc, omega_cut))

    if opts.threads > 1 and len(jobs) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=opts.threads) as pool:
            results = [f.result() for f in [pool.submit(j) for j in jobs]]
    else:
        results = [job() for job in jobs]

    records = []
    scan_scale = results[0].scan_scale
    for res in results:
        rows = res.records if isinstance(res, Spectrum) else res
        for rec in rows:
            _append_root(records, rec.omega, rec.residual, rec.method)

    out = _finalize(records, scan_scale)
    diag = getattr(state, "diagnostics", None)
    if diag is not None:
        diag.search_seconds = time.perf_counter() - t0
        diag.char_evaluations = sum(fn.evaluations for fn in fns)
    return out


def _rect_scale(charfn: CharFunction, rect: tuple[float, float, float, float]) -> float:
    """Median |char| near the shallow edge of the rectangle, for residual tests."""
    re0, re1, im0, im1 = rect
    probe_re = np.linspace(max(re0, 0.6), max(re1, 1.0), 32)
    probe = probe_re + 1j * min(max(im0, -0.3), im1)
    vals, _ = charfn.value_many(probe.astype(np.complex128))
    scale = float(np.median(np.abs(vals)))
    return scale if scale > 0 else 1.0


def solve(
    problem: SLProblem,
    bc: BoundaryConditions,
    solver: SolverOptions | None = None,
    search: SearchOptions | None = None,
) -> tuple[Spectrum, SolverState]:
    """One-call convenience: build, search, return (spectrum, state)."""
    sopts = solver or SolverOptions()
    state = build_solver(problem, sopts)
    spec = find_spectrum(state, bc, search, omega_cut=sopts.omega_cut)
    return spec, state
