"""Kernel-image bases and the least-squares coefficient fit.

The cosine/sine images of the transmuted powers span the space in which the
two target functions are approximated; the fitted coefficients feed the
closed-form solution evaluation.  Plain least squares on column-scaled design
matrices; minimax fitting is out of scope.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NumericalError
from .liouville import LiouvilleMap
from .mesh import SampledFunction
from .powers import FormalPowerTable

__all__ = ["KernelBasis", "KernelCoefficients", "build_basis", "fit_coefficients"]

_LADDER_START = 8
_LADDER_STEP = 4
_LADDER_CAP = 40
_IMPROVEMENT = 0.10


@dataclass
class KernelBasis:
    n: int
    cos_basis: list[np.ndarray]  # index 0..n
    sin_basis: list[np.ndarray]  # index 0..n; entry 0 unused (zeros)
    lmap: LiouvilleMap
    table: FormalPowerTable


@dataclass
class KernelCoefficients:
    a: np.ndarray  # length n_fit+1
    b: np.ndarray  # length n_fit+1; b[0] = slope/2 by definition, not fitted
    residual_cos: float  # sup-norm misfit of the cosine target
    residual_sin: float
    n_fit: int

    def worst_residual(self) -> float:
        return max(self.residual_cos, self.residual_sin)

    def error_factor(self, lmap: LiouvilleMap, strip: float = 1.0) -> float:
        """Heuristic uniform-error factor max(eps)*max|1/rho|*sinh(C|b|)/C."""
        rho_sup = float(np.max(1.0 / np.abs(lmap.rho.values)))
        c = max(strip, 1e-12)
        geo = rho_sup * math.sinh(c * abs(lmap.half_length)) / c
        return max(self.residual_cos, self.residual_sin) * geo


def build_basis(table: FormalPowerTable, lmap: LiouvilleMap, n: int) -> KernelBasis:
    """Images of x^m under the two half-kernels, sampled on the grid.

    cos_basis[m] = rho * sum over even k <= m of C(m,k) x^k phi_{m-k}
    sin_basis[m] = rho * sum over odd  k <= m of C(m,k) x^k phi_{m-k}
    """
    if n > table.n:
        raise NumericalError("kernel", f"basis depth {n} exceeds table depth {table.n}")
    rho = lmap.rho.values
    x = lmap.x.values
    xpow = [np.ones_like(x)]
    for _ in range(n):
        xpow.append(xpow[-1] * x)
    cos_basis, sin_basis = [], []
    for m in range(n + 1):
        ceven = np.zeros_like(x)
        codd = np.zeros_like(x)
        for k in range(m + 1):
            term = math.comb(m, k) * xpow[k] * table.phi[m - k]
            if k % 2 == 0:
                ceven = ceven + term
            else:
                codd = codd + term
        cos_basis.append(rho * ceven)
        sin_basis.append(rho * codd)
    return KernelBasis(n, cos_basis, sin_basis, lmap, table)


def _single_fit(
    basis: KernelBasis, cos_target: np.ndarray, sin_target: np.ndarray, n_fit: int
) -> KernelCoefficients:
    ac = np.stack(basis.cos_basis[: n_fit + 1], axis=1)
    as_ = np.stack(basis.sin_basis[1 : n_fit + 1], axis=1)
    a, res_c = _lstsq_extended(ac, cos_target)
    b_tail, res_s = _lstsq_extended(as_, sin_target)
    slope = basis.table.sol.slope
    if slope is None:
        raise NumericalError("kernel", "particular solution slope not set")
    b = np.concatenate(([slope / 2.0], b_tail))
    return KernelCoefficients(a, b, res_c, res_s, n_fit)


def _lstsq_extended(mat: np.ndarray, target: np.ndarray) -> tuple[np.ndarray, float]:
    """Least squares by Gram-Schmidt QR in 80-bit arithmetic.

    LAPACK's double-precision solvers leave a residual floor around
    cond(mat) * eps, which the condition of high-degree columns turns into
    1e-7 territory; the extended-precision projection stays two to three
    orders lower.  Returns (coefficients, sup-norm residual).
    """
    scale = np.max(np.abs(mat), axis=0)
    if np.any(scale == 0):
        raise NumericalError("kernel", "degenerate basis column")
    q = (mat / scale).astype(np.clongdouble)
    n = q.shape[1]
    r = np.zeros((n, n), dtype=np.clongdouble)
    for j in range(n):
        for _ in range(2):  # one reorthogonalization pass keeps Q orthonormal
            proj = q[:, :j].conj().T @ q[:, j]
            q[:, j] -= q[:, :j] @ proj
            r[:j, j] += proj
        nrm = np.sqrt(np.vdot(q[:, j], q[:, j]).real)
        if nrm == 0:
            raise NumericalError("kernel", "dependent basis columns")
        r[j, j] = nrm
        q[:, j] /= nrm
    tl = target.astype(np.clongdouble)
    c = q.conj().T @ tl
    coefs = np.zeros(n, dtype=np.clongdouble)
    for j in range(n - 1, -1, -1):
        coefs[j] = (c[j] - r[j, j + 1 :] @ coefs[j + 1 :]) / r[j, j]
    resid = float(np.max(np.abs(tl - (mat / scale).astype(np.clongdouble) @ coefs)))
    return (coefs / scale).astype(np.complex128), resid


def fit_coefficients(
    basis: KernelBasis,
    cos_target: SampledFunction,
    sin_target: SampledFunction,
    n_fit: int | None = None,
) -> KernelCoefficients:
    """Least-squares coefficients for both targets.

    With ``n_fit`` given, one fit of that size.  Otherwise sizes 8, 12, ...
    up to min(n, 40) are tried and the climb stops early once growing the fit
    by 4 improves the worse residual by less than 10%; the best fit wins.
    """
    gc = cos_target.values
    gs = sin_target.values
    if n_fit is not None:
        if not 1 <= n_fit <= basis.n:
            raise NumericalError("kernel", f"fit size {n_fit} outside 1..{basis.n}")
        return _single_fit(basis, gc, gs, n_fit)
    best: KernelCoefficients | None = None
    rung = min(_LADDER_START, basis.n)
    while True:
        fit = _single_fit(basis, gc, gs, rung)
        if best is None or fit.worst_residual() < best.worst_residual():
            improved = best is None or fit.worst_residual() < (1.0 - _IMPROVEMENT) * best.worst_residual()
            best = fit
        else:
            improved = False
        if not improved or rung >= min(basis.n, _LADDER_CAP):
            break
        rung = min(rung + _LADDER_STEP, basis.n, _LADDER_CAP)
    return best
