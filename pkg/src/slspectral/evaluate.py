"""Closed-form evaluation of the approximate solutions, uniform in frequency.

Everything reduces to the moment integrals Ic(k) = int_0^x t^k cos(wt) dt and
Is(k) = int_0^x t^k sin(wt) dt for complex w and complex x.  Small |wx| uses
the entire-series form.  Otherwise the integration-by-parts recurrence is
applied in whichever direction is stable: upward while k <= |wx| (the error
multiplier is k/|wx|), downward with a zero seed at a high start index for
k > |wx| (multiplier |wx|/k).  Running either direction through the wrong
regime multiplies roundoff by roughly e^{|wx|}.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .kernel import KernelCoefficients
from .liouville import LiouvilleMap
from .mesh import Grid, SampledFunction, interpolate
from .powers import FormalPowerTable
from .problem import SLProblem

__all__ = [
    "trig_moment_cos",
    "trig_moment_sin",
    "trig_moment_table",
    "SolutionSample",
    "SolverState",
    "eval_solutions",
    "eval_solutions_many",
    "normalized_pair",
    "normalized_pair_many",
]

_OMEGA_MIN = 1e-8
_SERIES_CUT = 1.0
_SERIES_TERMS = 24


def _moments_series(kmax: int, omegas: np.ndarray, x: complex) -> tuple[np.ndarray, np.ndarray]:
    """Hatted moments moment(k)/x^(k+1) by the Taylor series in wx.

    Accumulates in extended precision: near the zeros of a moment the value
    sits far below the term scale, and double accumulation would leave a
    relative error of eps times the cancellation factor.
    """
    z = omegas.astype(np.clongdouble) * np.clongdouble(x)
    z2 = z * z
    n = omegas.size
    # terms[m] = (-1)^m z^(2m) / (2m)!
    terms = np.empty((_SERIES_TERMS, n), dtype=np.clongdouble)
    terms[0] = 1.0
    for m in range(1, _SERIES_TERMS):
        terms[m] = -terms[m - 1] * z2 / ((2 * m - 1) * (2 * m))
    hic = np.empty((n, kmax + 1), dtype=np.complex128)
    his = np.empty((n, kmax + 1), dtype=np.complex128)
    for k in range(kmax + 1):
        acc_c = np.zeros(n, dtype=np.clongdouble)
        acc_s = np.zeros(n, dtype=np.clongdouble)
        for m in range(_SERIES_TERMS - 1, -1, -1):
            acc_c += terms[m] / (k + 2 * m + 1)
            acc_s += terms[m] / ((2 * m + 1) * (k + 2 * m + 2))
        hic[:, k] = acc_c.astype(np.complex128)
        his[:, k] = (acc_s * z).astype(np.complex128)
    return hic, his


def _start_index(kmax: int, mmax: float) -> int:
    """Zero-seed start for the downward pass.  The dropped true value at K is
    damped by m^(K-k) k!/K! on the way down, so the margin must be measured
    at level kmax (the least-damped level), not at level 0."""
    logm = math.log(mmax)
    need = math.lgamma(kmax + 2) - kmax * logm + 48.7
    k = max(kmax + 2, int(mmax) + 2)
    while math.lgamma(k + 1) - k * logm < need:
        k += 8
    return k


def _moments_recurrence(kmax: int, omegas: np.ndarray, x: complex) -> tuple[np.ndarray, np.ndarray]:
    """Hatted moments for |wx| >= 1 by the two-sided stable recurrence.

    Extended precision throughout, for the same cancellation reason as the
    series branch.
    """
    z = omegas.astype(np.clongdouble) * np.clongdouble(x)
    m = np.abs(z).astype(np.float64)
    n = omegas.size
    cosz = np.cos(z)
    sinz = np.sin(z)
    hic = np.empty((n, kmax + 1), dtype=np.clongdouble)
    his = np.empty((n, kmax + 1), dtype=np.clongdouble)
    # upward sweep, trusted for k <= |z|
    hic[:, 0] = sinz / z
    his[:, 0] = (1.0 - cosz) / z
    for k in range(1, kmax + 1):
        hic[:, k] = sinz / z - (k / z) * his[:, k - 1]
        his[:, k] = -cosz / z + (k / z) * hic[:, k - 1]
    need_down = m < kmax
    if np.any(need_down):
        zi = z[need_down]
        ci = cosz[need_down]
        si = sinz[need_down]
        kstart = _start_index(kmax, float(np.max(m[need_down])))
        cur_c = np.zeros(zi.size, dtype=np.clongdouble)
        cur_s = np.zeros(zi.size, dtype=np.clongdouble)
        dic = np.empty((zi.size, kmax + 1), dtype=np.clongdouble)
        dis = np.empty((zi.size, kmax + 1), dtype=np.clongdouble)
        for k in range(kstart, 0, -1):
            cur_c, cur_s = (zi * cur_s + ci) / k, (si - zi * cur_c) / k
            if k - 1 <= kmax:
                dic[:, k - 1] = cur_c
                dis[:, k - 1] = cur_s
        keep_up = np.arange(kmax + 1)[None, :] <= m[need_down, None]
        hic[need_down] = np.where(keep_up, hic[need_down], dic)
        his[need_down] = np.where(keep_up, his[need_down], dis)
    return hic.astype(np.complex128), his.astype(np.complex128)


def trig_moment_table(kmax: int, omegas: np.ndarray, x: complex) -> tuple[np.ndarray, np.ndarray]:
    """Moment arrays, shape (len(omegas), kmax+1), for fixed upper limit x."""
    omegas = np.asarray(omegas, dtype=np.complex128)
    n = omegas.size
    if x == 0:
        zeros = np.zeros((n, kmax + 1), dtype=np.complex128)
        return zeros, zeros.copy()
    if np.any(np.abs(omegas) < _OMEGA_MIN):
        raise NumericalError("evaluate", f"|omega| below {_OMEGA_MIN}")
    hic = np.empty((n, kmax + 1), dtype=np.complex128)
    his = np.empty((n, kmax + 1), dtype=np.complex128)
    small = np.abs(omegas * x) < _SERIES_CUT
    if np.any(small):
        hic[small], his[small] = _moments_series(kmax, omegas[small], x)
    big = ~small
    if np.any(big):
        hic[big], his[big] = _moments_recurrence(kmax, omegas[big], x)
    xp = x ** np.arange(1, kmax + 2)
    ic = hic * xp[None, :]
    is_ = his * xp[None, :]
    if not (np.all(np.isfinite(ic)) and np.all(np.isfinite(is_))):
        raise NumericalError("evaluate", f"moment overflow at x = {x}")
    return ic, is_


def trig_moment_cos(k: int, omega: complex, x: complex) -> complex:
    """int_0^x t^k cos(omega t) dt; omega = 0 is the caller's limit case."""
    ic, _ = trig_moment_table(k, np.array([omega]), x)
    return complex(ic[0, k])


def trig_moment_sin(k: int, omega: complex, x: complex) -> complex:
    """int_0^x t^k sin(omega t) dt."""
    _, is_ = trig_moment_table(k, np.array([omega]), x)
    return complex(is_[0, k])


# ---------------------------------------------------------------------------
# solver state and evaluation


@dataclass
class SolutionSample:
    """Values of the two solution approximations at one (omega, y).

    v1, v2 carry the raw data (1/rho0, ...) and (0, ...) at y0; *_prime are
    d/dy values, *_domega are d/domega values.  Fields are scalars or omega
    arrays depending on the constructor used.
    """

    omega: object
    y: float
    v1: object
    v2: object
    v1_prime: object
    v2_prime: object
    v1_domega: object
    v2_domega: object
    v1_prime_domega: object
    v2_prime_domega: object


class _Station:
    """Per-evaluation-point data: interpolated coefficient sums and scalars."""

    __slots__ = ("x", "rho", "glog", "sr", "p", "ac", "bs", "aps", "bpc", "at_origin")

    def __init__(self, state: "SolverState", y: float):
        lm = state.lmap
        self.x = complex(interpolate(lm.x, y))
        self.rho = complex(interpolate(lm.rho, y))
        g = complex(interpolate(state.table.sol.g, y))
        dg = complex(interpolate(state.table.sol.dg, y))
        self.glog = dg / g
        p = complex(state.problem.value("p", y))
        r = complex(state.problem.value("r", y))
        self.p = p
        self.sr = complex(np.sqrt(r / p))
        grid = state.grid
        self.ac = np.array([interpolate(SampledFunction(grid, row), y) for row in state._ac])
        self.bs = np.array([interpolate(SampledFunction(grid, row), y) for row in state._bs])
        self.aps = np.array([interpolate(SampledFunction(grid, row), y) for row in state._aps])
        self.bpc = np.array([interpolate(SampledFunction(grid, row), y) for row in state._bpc])
        self.at_origin = self.x == 0


class SolverState:
    """Precomputed coefficient sums; evaluating is then moments + dot products.

    Immutable after construction apart from the internal station cache, so
    evaluation over omega batches can proceed freely.
    """

    def __init__(
        self,
        problem: SLProblem,
        grid: Grid,
        lmap: LiouvilleMap,
        table: FormalPowerTable,
        coeffs: KernelCoefficients,
    ):
        self.problem = problem
        self.grid = grid
        self.lmap = lmap
        self.table = table
        self.coeffs = coeffs
        self.diagnostics: dict = {}
        n_fit = coeffs.n_fit
        m = grid.m
        a = coeffs.a
        b = coeffs.b
        phi = table.phi
        psi = table.psi
        ac = np.zeros((n_fit + 1, m), dtype=np.complex128)
        bs = np.zeros((n_fit + 1, m), dtype=np.complex128)
        aps = np.zeros((n_fit + 1, m), dtype=np.complex128)
        bpc = np.zeros((n_fit + 1, m), dtype=np.complex128)
        for k in range(n_fit + 1):
            for n in range(max(k, 1), n_fit + 1):
                c = 2.0 * math.comb(n, k)
                if k % 2 == 0:
                    ac[k] += (c * a[n]) * phi[n - k]
                    bpc[k] += (c * b[n]) * psi[n - k]
                else:
                    bs[k] += (c * b[n]) * phi[n - k]
                    aps[k] += (c * a[n]) * psi[n - k]
        ac[0] += 2.0 * a[0] * phi[0]
        bpc[0] += 2.0 * b[0] * psi[0]
        self._ac, self._bs, self._aps, self._bpc = ac, bs, aps, bpc
        self._stations: dict[float, _Station] = {}

        y0 = lmap.y0
        p0 = complex(problem.value("p", y0))
        r0 = complex(problem.value("r", y0))
        rho0 = complex(np.exp(0.25 * np.log(p0 * r0)))
        rho_logderiv0 = (
            problem.value("dp", y0) * r0 + p0 * problem.value("dr", y0)
        ) / (4.0 * p0 * r0)
        sqrt_pr0 = complex(np.sqrt(p0 / r0))
        slope = table.sol.slope
        if slope is None:
            raise NumericalError("evaluate", "particular solution slope not set")
        self.y0 = y0
        self.rho0 = rho0
        self.norm_alpha = rho0
        self.norm_beta = rho0 * rho_logderiv0 * sqrt_pr0 - slope * rho0
        self.norm_gamma = rho0 * sqrt_pr0

    def station(self, y: float) -> _Station:
        key = float(y)
        st = self._stations.get(key)
        if st is None:
            st = _Station(self, key)
            self._stations[key] = st
        return st


def eval_solutions_many(state: SolverState, omegas: np.ndarray, y: float) -> SolutionSample:
    """Vectorized evaluation over an omega array at one point y."""
    omegas = np.asarray(omegas, dtype=np.complex128)
    if np.any(np.abs(omegas) < _OMEGA_MIN):
        raise NumericalError("evaluate", f"|omega| below {_OMEGA_MIN}")
    st = state.station(y)
    n_fit = state.coeffs.n_fit
    if st.at_origin:
        z = np.zeros_like(omegas)
        inv_rho = 1.0 / st.rho
        v1 = np.full_like(omegas, inv_rho)
        v2 = z.copy()
        v1p = np.full_like(omegas, st.glog * inv_rho)
        v2p = np.full_like(omegas, st.sr * inv_rho)
        return SolutionSample(omegas, y, v1, v2, v1p, v2p, z.copy(), z.copy(), z.copy(), z.copy())
    ic, is_ = trig_moment_table(n_fit + 1, omegas, st.x)
    icK = ic[:, : n_fit + 1]
    isK = is_[:, : n_fit + 1]
    ic1 = ic[:, 1 : n_fit + 2]
    is1 = is_[:, 1 : n_fit + 2]
    wx = omegas * st.x
    coswx = np.cos(wx)
    sinwx = np.sin(wx)
    rho = st.rho
    p = st.p
    sr = st.sr
    glog = st.glog
    x = st.x

    v1 = coswx / rho + icK @ st.ac
    v2 = (sinwx / rho + isK @ st.bs) / omegas
    v1p = -omegas * (sr / rho) * sinwx + glog * v1 + (omegas / p) * (isK @ st.aps)
    v2p = (sr / rho) * coswx + glog * v2 - (icK @ st.bpc) / p
    dv1 = -(x / rho) * sinwx - is1 @ st.ac
    dv2 = ((x / rho) * coswx - v2 + ic1 @ st.bs) / omegas
    dv1p = (
        -(sr / rho) * (sinwx + wx * coswx)
        + glog * dv1
        + (isK @ st.aps + omegas * (ic1 @ st.aps)) / p
    )
    dv2p = -(x * sr / rho) * sinwx + glog * dv2 + (is1 @ st.bpc) / p
    return SolutionSample(omegas, y, v1, v2, v1p, v2p, dv1, dv2, dv1p, dv2p)


def eval_solutions(state: SolverState, omega: complex, y: float) -> SolutionSample:
    """Solution values at one (omega, y)."""
    s = eval_solutions_many(state, np.array([omega]), y)
    return SolutionSample(
        complex(omega),
        y,
        *(complex(getattr(s, f)[0]) for f in (
            "v1", "v2", "v1_prime", "v2_prime",
            "v1_domega", "v2_domega", "v1_prime_domega", "v2_prime_domega",
        )),
    )


def _normalize(state: SolverState, s: SolutionSample) -> SolutionSample:
    al, be, ga = state.norm_alpha, state.norm_beta, state.norm_gamma
    return SolutionSample(
        s.omega,
        s.y,
        al * s.v1 + be * s.v2,
        ga * s.v2,
        al * s.v1_prime + be * s.v2_prime,
        ga * s.v2_prime,
        al * s.v1_domega + be * s.v2_domega,
        ga * s.v2_domega,
        al * s.v1_prime_domega + be * s.v2_prime_domega,
        ga * s.v2_prime_domega,
    )


def normalized_pair(state: SolverState, omega: complex, y: float) -> SolutionSample:
    """Pair normalized to V1(y0) = 1, V1'(y0) = 0, V2(y0) = 0, V2'(y0) = 1."""
    return _normalize(state, eval_solutions(state, omega, y))


def normalized_pair_many(state: SolverState, omegas: np.ndarray, y: float) -> SolutionSample:
    return _normalize(state, eval_solutions_many(state, omegas, y))
