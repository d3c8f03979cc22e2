"""Independent verification path: direct high-order integration of the ODE.

Shares nothing with the main pipeline except the expression evaluator.  The
characteristic function is assembled from two initial-value solutions with
data (1, 0) and (0, 1) at the left endpoint, integrated in the lambda
variable (entire there, no omega = 0 issue).  Many lambda values integrate in
lockstep as one stacked first-order system, which is what makes scanning
thousands of candidates affordable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import solve_ivp

from .errors import NumericalError
from .expr import compile_scalar
from .mesh import build_grid
from .problem import BoundaryConditions, SLProblem
from .spectrum import EigenvalueRecord, Spectrum, _append_root, _finalize

__all__ = [
    "exact_char_ex1",
    "IVPSolution",
    "integrate_ivp",
    "oracle_char_lambda",
    "oracle_char",
    "oracle_eigenvalues",
    "oracle_near_origin",
    "oracle_self_check",
]

_RTOL = 1e-12
_ATOL = 1e-14
_CHUNK = 1200


def exact_char_ex1(omega):
    """(4 + 3 w^2) sin w - 4 w cos w; closed-form characteristic function of
    the Dirichlet problem -v'' - v'/y + (1/(4y^2) + 2/(y-1/2)^2) v = w^2 v
    on [1, 2]."""
    w = np.asarray(omega, dtype=np.float64) if np.ndim(omega) else omega
    return (4.0 + 3.0 * w * w) * np.sin(w) - 4.0 * w * np.cos(w)


@dataclass
class _Coeffs:
    p: object
    q: object
    r: object


def _compiled(problem: SLProblem) -> _Coeffs:
    return _Coeffs(compile_scalar(problem.p), compile_scalar(problem.q), compile_scalar(problem.r))


@dataclass
class IVPSolution:
    """Dense samples of one initial-value run; w is the flux variable p v'."""

    y: np.ndarray
    v: np.ndarray
    w: np.ndarray

    @property
    def v_end(self) -> complex:
        return complex(self.v[-1])

    @property
    def w_end(self) -> complex:
        return complex(self.w[-1])


def integrate_ivp(
    problem: SLProblem,
    lam: complex,
    v0: complex,
    w0: complex,
    rtol: float = _RTOL,
    atol: float = _ATOL,
    samples: int = 201,
) -> IVPSolution:
    """Integrate (p v')' - q v + lam r v = 0 from (v0, w0) at A, w = p v'."""
    c = _compiled(problem)
    lam = complex(lam)

    def rhs(y, state):
        v = state[0] + 1j * state[1]
        w = state[2] + 1j * state[3]
        dv = w / c.p(y)
        dw = (c.q(y) - lam * c.r(y)) * v
        return [dv.real, dv.imag, dw.real, dw.imag]

    v0 = complex(v0)
    w0 = complex(w0)
    ys = np.linspace(problem.a, problem.b, samples)
    sol = solve_ivp(
        rhs,
        (problem.a, problem.b),
        [v0.real, v0.imag, w0.real, w0.imag],
        method="DOP853",
        rtol=rtol,
        atol=atol,
        t_eval=ys,
    )
    if not sol.success:
        raise NumericalError("oracle", f"integration failed: {sol.message}")
    return IVPSolution(sol.t, sol.y[0] + 1j * sol.y[1], sol.y[2] + 1j * sol.y[3])


def _integrate_pairs(
    problem: SLProblem,
    lams: np.ndarray,
    rtol: float,
    atol: float,
    coeffs: _Coeffs | None = None,
) -> np.ndarray:
    """Endpoint values for the fundamental pair at every lambda.

    Returns shape (len(lams), 4): v1(B), v1'(B), v2(B), v2'(B), where v1, v2
    have (value, derivative) data (1, 0) and (0, 1) at A.  State variable for
    the second component is w = p v' (continuous through p variations).
    """
    lams = np.asarray(lams, dtype=np.complex128)
    c = coeffs or _compiled(problem)
    a, b = problem.a, problem.b
    pa = c.p(a)
    pb = c.p(b)
    out = np.empty((lams.size, 4), dtype=np.complex128)
    for start in range(0, lams.size, _CHUNK):
        piece = lams[start : start + _CHUNK]
        k = piece.size
        lam2 = np.repeat(piece, 2)

        def rhs(y, state):
            cvec = state[0::2] + 1j * state[1::2]
            v = cvec[0::2]
            w = cvec[1::2]
            p = c.p(y)
            q = c.q(y)
            r = c.r(y)
            dv = w / p
            dw = (q - lam2 * r) * v
            dstate = np.empty_like(state)
            dstate[0::4] = dv.real
            dstate[1::4] = dv.imag
            dstate[2::4] = dw.real
            dstate[3::4] = dw.imag
            return dstate

        y0 = np.zeros(8 * k)
        # per lambda: [v1, w1, v2, w2] interleaved re/im
        y0[0::8] = 1.0
        y0[6::8] = complex(pa).real
        y0[7::8] = complex(pa).imag
        sol = solve_ivp(rhs, (a, b), y0, method="DOP853", rtol=rtol, atol=atol)
        if not sol.success:
            raise NumericalError("oracle", f"integration failed: {sol.message}")
        fin = sol.y[:, -1]
        cvec = fin[0::2] + 1j * fin[1::2]
        v1 = cvec[0::4]
        w1 = cvec[1::4]
        v2 = cvec[2::4]
        w2 = cvec[3::4]
        out[start : start + k, 0] = v1
        out[start : start + k, 1] = w1 / pb
        out[start : start + k, 2] = v2
        out[start : start + k, 3] = w2 / pb
    return out


def oracle_char_lambda(
    problem: SLProblem,
    bc: BoundaryConditions,
    lams: np.ndarray,
    rtol: float = _RTOL,
    atol: float = _ATOL,
    coeffs: _Coeffs | None = None,
) -> np.ndarray:
    """Boundary determinant at each lambda (entire function of lambda)."""
    lams = np.asarray(lams, dtype=np.complex128)
    ends = _integrate_pairs(problem, lams, rtol, atol, coeffs)
    c = bc.rows
    r1u1 = c[0, 0] + c[0, 2] * ends[:, 0] + c[0, 3] * ends[:, 1]
    r1u2 = c[0, 1] + c[0, 2] * ends[:, 2] + c[0, 3] * ends[:, 3]
    r2u1 = c[1, 0] + c[1, 2] * ends[:, 0] + c[1, 3] * ends[:, 1]
    r2u2 = c[1, 1] + c[1, 2] * ends[:, 2] + c[1, 3] * ends[:, 3]
    return r1u1 * r2u2 - r1u2 * r2u1


def oracle_char(
    problem: SLProblem,
    bc: BoundaryConditions,
    omegas: np.ndarray,
    rtol: float = _RTOL,
    atol: float = _ATOL,
    coeffs: _Coeffs | None = None,
) -> np.ndarray:
    omegas = np.asarray(omegas, dtype=np.complex128)
    return oracle_char_lambda(problem, bc, omegas * omegas, rtol, atol, coeffs)


def _lockstep_roots(
    eval_many,
    grid: np.ndarray,
    vals: np.ndarray,
    bisect_iters: int = 20,
    secant_iters: int = 14,
) -> list[float]:
    """Real roots from sign changes, all brackets narrowed in lockstep."""
    sgn = np.sign(vals)
    idx = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    roots = [float(grid[i]) for i in np.nonzero(vals == 0.0)[0]]
    if idx.size == 0:
        return roots
    lo = grid[idx].astype(np.float64)
    hi = grid[idx + 1].astype(np.float64)
    flo = vals[idx].astype(np.float64)
    fhi = vals[idx + 1].astype(np.float64)
    for _ in range(bisect_iters):
        mid = 0.5 * (lo + hi)
        fm = eval_many(mid)
        neg = flo * fm <= 0
        hi = np.where(neg, mid, hi)
        fhi = np.where(neg, fm, fhi)
        lo = np.where(neg, lo, mid)
        flo = np.where(neg, flo, fm)
    x0, x1 = lo.copy(), hi.copy()
    f0, f1 = flo.copy(), fhi.copy()
    for _ in range(secant_iters):
        denom = np.where(f1 != f0, f1 - f0, 1.0)
        x2 = x1 - f1 * (x1 - x0) / denom
        x2 = np.clip(x2, lo, hi)
        f2 = eval_many(x2)
        neg = flo * f2 <= 0
        hi = np.where(neg, x2, hi)
        lo = np.where(neg, lo, x2)
        flo = np.where(neg, flo, f2)
        x0, f0 = x1, f1
        x1, f1 = x2, f2
    roots.extend(float(t) for t in x1)
    return roots


def _real_axis_search(
    problem, bc, lo, hi, step, to_lambda, rtol, atol, coeffs
) -> list[complex]:
    """Shared scan+refine for the real-omega and imaginary-omega axes.

    `to_lambda` maps the scan parameter t to lambda: t**2 or -t**2.
    """
    n = max(8, int(math.ceil((hi - lo) / step)) + 1)
    ts = np.linspace(lo, hi, n)
    sign = 1.0 if to_lambda(1.0) > 0 else -1.0

    def eval_many(t):
        vals = oracle_char_lambda(problem, bc, sign * t * t, rtol, atol, coeffs)
        worst = float(np.max(np.abs(vals.imag))) if vals.size else 0.0
        scale = float(np.max(np.abs(vals))) if vals.size else 1.0
        if worst > 1e-6 * max(scale, 1e-300):
            raise NumericalError("oracle", "characteristic function not real on a real problem")
        return vals.real

    vals = eval_many(ts)
    roots_t = _lockstep_roots(eval_many, ts, vals)
    return [complex(sign * t * t, 0.0) for t in roots_t]


def _near_origin_search(problem, bc, radius, rtol, atol, coeffs) -> list[complex]:
    """Direct lambda-line scan through the origin disc |omega| < radius."""
    lam_max = radius * radius
    ts = np.linspace(-lam_max, lam_max, 801)

    def eval_many(lam):
        return oracle_char_lambda(problem, bc, lam, rtol, atol, coeffs).real

    vals = eval_many(ts)
    return [complex(t, 0.0) for t in _lockstep_roots(eval_many, ts, vals)]


def _complex_search(
    problem, bc, re_min, re_max, im_min, im_max, rtol, atol, coeffs, seed_step=0.25
) -> list[complex]:
    """Grid seeds at local minima of |char(omega)|, then lockstep Newton."""
    res = np.arange(re_min, re_max + seed_step, seed_step)
    ims = np.arange(im_min, im_max + seed_step, seed_step)
    grid = (res[None, :] + 1j * ims[:, None]).ravel()
    vals = np.abs(oracle_char(problem, bc, grid, rtol, atol, coeffs))
    vals = vals.reshape(ims.size, res.size)
    # |char| can vary over hundreds of orders of magnitude across the
    # rectangle, so no global threshold works; seed at every grid-local
    # minimum and let the post-Newton reduction test sort real roots out
    seeds = []
    for i in range(ims.size):
        for j in range(res.size):
            v = vals[i, j]
            neigh = vals[max(0, i - 1) : i + 2, max(0, j - 1) : j + 2]
            if np.isfinite(v) and v <= neigh.min():
                seeds.append(complex(res[j], ims[i]))
    if not seeds:
        return []
    w = np.array(seeds, dtype=np.complex128)
    for _ in range(40):
        h = 1e-7 * (1.0 + np.abs(w))
        f0 = oracle_char(problem, bc, w, rtol, atol, coeffs)
        fp = oracle_char(problem, bc, w + h, rtol, atol, coeffs)
        fm = oracle_char(problem, bc, w - h, rtol, atol, coeffs)
        df = (fp - fm) / (2.0 * h)
        ok = df != 0
        step = np.where(ok, f0 / np.where(ok, df, 1.0), 0.0)
        w = w - step
        if np.all(np.abs(step) <= 1e-12 * (1.0 + np.abs(w))):
            break
    # verify and keep the ones that really converged into the strip; a true
    # simple zero sits many orders below the char value a short step away,
    # while a noise dip or branch artifact stays at the local scale
    f0 = np.abs(oracle_char(problem, bc, w, rtol, atol, coeffs))
    delta = 0.01 * (1.0 + np.abs(w))
    fd = np.abs(oracle_char(problem, bc, w + delta, rtol, atol, coeffs))
    out = []
    margin = 2 * seed_step
    for wk, fk, fdk in zip(w, f0, fd):
        if not (np.isfinite(fk) and np.isfinite(fdk)):
            continue
        if fk > 1e-4 * fdk:
            continue
        if not (re_min - margin <= wk.real <= re_max + margin):
            continue
        if not (im_min - margin <= wk.imag <= im_max + margin):
            continue
        out.append(complex(wk) ** 2)
    return out


def _origin_disc_lams(problem, bc, radius, rtol, atol, coeffs) -> list[complex]:
    probe = build_grid(problem.a, problem.b, 256)
    if problem.is_real_on(probe) and bc.is_real:
        return _near_origin_search(problem, bc, radius, rtol, atol, coeffs)
    # complex problem: near-origin roots can sit anywhere in the disc,
    # sweep a small rectangle instead of the lambda line
    r = radius + 0.1
    return _complex_search(problem, bc, 0.0, r, -r, r, rtol, atol, coeffs, seed_step=0.05)


def _records_from_lams(problem, bc, lams, rtol, atol, coeffs) -> list[EigenvalueRecord]:
    records: list[EigenvalueRecord] = []
    for lam in lams:
        w = complex(np.sqrt(complex(lam)))
        res = float(abs(oracle_char_lambda(problem, bc, np.array([lam]), rtol, atol, coeffs)[0]))
        _append_root(records, w, res, "oracle")
    return records


def oracle_near_origin(
    problem: SLProblem,
    bc: BoundaryConditions,
    radius: float,
    rtol: float = _RTOL,
    atol: float = _ATOL,
) -> Spectrum:
    """Eigenvalues with |omega| < radius, where the kernel method is unreliable."""
    coeffs = _compiled(problem)
    lams = _origin_disc_lams(problem, bc, radius, rtol, atol, coeffs)
    records = _records_from_lams(problem, bc, lams, rtol, atol, coeffs)
    records = [rec for rec in records if abs(rec.omega) < radius]
    return _finalize(records, 0.0)


def oracle_eigenvalues(
    problem: SLProblem,
    bc: BoundaryConditions,
    omega_min: float = 0.5,
    omega_max: float = 10.0,
    scan_step: float = 0.02,
    tau_max: float = 0.0,
    near_origin: bool = True,
    complex_rect: tuple[float, float, float, float] | None = None,
    rtol: float = _RTOL,
    atol: float = _ATOL,
) -> Spectrum:
    """Full eigenvalue search by direct integration; method tag "oracle"."""
    coeffs = _compiled(problem)
    lams: list[complex] = []
    if complex_rect is None:
        lams.extend(
            _real_axis_search(problem, bc, omega_min, omega_max, scan_step, lambda t: t * t, rtol, atol, coeffs)
        )
        if tau_max > omega_min:
            lams.extend(
                _real_axis_search(problem, bc, omega_min, tau_max, scan_step, lambda t: -t * t, rtol, atol, coeffs)
            )
        if near_origin:
            lams.extend(_origin_disc_lams(problem, bc, omega_min, rtol, atol, coeffs))
    else:
        lams.extend(_complex_search(problem, bc, *complex_rect, rtol, atol, coeffs))
    return _finalize(_records_from_lams(problem, bc, lams, rtol, atol, coeffs), 0.0)


def oracle_self_check(
    problem: SLProblem,
    bc: BoundaryConditions,
    spectrum: Spectrum,
    count: int = 5,
) -> float:
    """Max relative shift of the first few eigenvalues when tolerances halve."""
    worst = 0.0
    coeffs = _compiled(problem)
    for rec in spectrum.records[:count]:
        lam = rec.lam

        def char_at(lmb, rt, at):
            return oracle_char_lambda(problem, bc, np.array([lmb]), rt, at, coeffs)[0]

        refined = []
        for rt, at in ((_RTOL, _ATOL), (_RTOL / 2, _ATOL / 2)):
            z = complex(lam)
            for _ in range(8):
                h = 1e-7 * (1.0 + abs(z))
                f0 = char_at(z, rt, at)
                df = (char_at(z + h, rt, at) - char_at(z - h, rt, at)) / (2 * h)
                if df == 0:
                    break
                z = z - f0 / df
            refined.append(z)
        shift = abs(refined[0] - refined[1]) / (1.0 + abs(refined[0]))
        worst = max(worst, shift)
    return worst
