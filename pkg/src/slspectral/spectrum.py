"""Eigenvalue search: scan, refine, and the complex-plane winding search.

The characteristic function is the 2x2 determinant of the boundary rows
applied to the normalized solution pair.  Its zeros in omega give the
eigenvalues lambda = omega^2.  Searches work on the omega plane; results are
reported with the principal square root of lambda so that conjugate and
mirrored roots deduplicate cleanly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NumericalError
from .evaluate import SolverState, normalized_pair_many
from .mesh import build_grid
from .problem import BoundaryConditions

__all__ = [
    "EigenvalueRecord",
    "Spectrum",
    "CharFunction",
    "scan_real",
    "scan_imaginary",
    "refine_newton",
    "find_complex",
]

_NEWTON_ITERS = 30
_NEWTON_TOL = 1e-13
_DIP_FACTOR = 1e-3
_WINDING_TOL = 0.05
_MIN_RECT_SIDE = 0.1
_PERTURB_RETRIES = 5


@dataclass
class EigenvalueRecord:
    """One eigenvalue: lam = omega**2, residual = |char| at the root."""

    index: int
    omega: complex
    lam: complex
    residual: float
    method: str


@dataclass
class Spectrum:
    records: list[EigenvalueRecord] = field(default_factory=list)
    scan_scale: float = 0.0

    def lambdas(self) -> np.ndarray:
        return np.array([rec.lam for rec in self.records])

    def omegas(self) -> np.ndarray:
        return np.array([rec.omega for rec in self.records])

    def __len__(self) -> int:
        return len(self.records)


class CharFunction:
    """char(omega) and its omega-derivative from the boundary determinant."""

    def __init__(self, state: SolverState, bc: BoundaryConditions):
        self.state = state
        self.bc = bc
        self.y_left = state.problem.a
        self.y_right = state.problem.b
        self.is_real = state.problem.is_real_on(state.grid) and bc.is_real
        self.evaluations = 0

    def value_many(self, omegas: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        omegas = np.asarray(omegas, dtype=np.complex128)
        self.evaluations += omegas.size
        sa = normalized_pair_many(self.state, omegas, self.y_left)
        sb = normalized_pair_many(self.state, omegas, self.y_right)
        c = self.bc.rows
        rows = []
        drows = []
        for i in (0, 1):
            for (v, vp, vb, vbp) in (
                (sa.v1, sa.v1_prime, sb.v1, sb.v1_prime),
                (sa.v2, sa.v2_prime, sb.v2, sb.v2_prime),
            ):
                rows.append(c[i, 0] * v + c[i, 1] * vp + c[i, 2] * vb + c[i, 3] * vbp)
            for (v, vp, vb, vbp) in (
                (sa.v1_domega, sa.v1_prime_domega, sb.v1_domega, sb.v1_prime_domega),
                (sa.v2_domega, sa.v2_prime_domega, sb.v2_domega, sb.v2_prime_domega),
            ):
                drows.append(c[i, 0] * v + c[i, 1] * vp + c[i, 2] * vb + c[i, 3] * vbp)
        r1v1, r1v2, r2v1, r2v2 = rows
        d1v1, d1v2, d2v1, d2v2 = drows
        char = r1v1 * r2v2 - r1v2 * r2v1
        dchar = d1v1 * r2v2 + r1v1 * d2v2 - d1v2 * r2v1 - r1v2 * d2v1
        return char, dchar

    def value(self, omega: complex) -> tuple[complex, complex]:
        c, d = self.value_many(np.array([omega]))
        return complex(c[0]), complex(d[0])


def _principal_omega(omega: complex) -> complex:
    """sqrt(omega^2) on the principal branch, so +-omega collapse."""
    return complex(np.sqrt(complex(omega) ** 2))


def _dedupe_key_match(records: list[EigenvalueRecord], omega: complex) -> bool:
    w = _principal_omega(omega)
    for rec in records:
        if abs(rec.omega - w) <= 1e-9 * (1.0 + abs(w)):
            return True
    return False


def _append_root(
    records: list[EigenvalueRecord],
    omega: complex,
    residual: float,
    method: str,
) -> None:
    w = _principal_omega(omega)
    if not _dedupe_key_match(records, w):
        records.append(EigenvalueRecord(0, w, w * w, residual, method))


def _finalize(records: list[EigenvalueRecord], scan_scale: float) -> Spectrum:
    records.sort(key=lambda rec: (rec.lam.real, rec.lam.imag))
    for i, rec in enumerate(records):
        rec.index = i + 1
    return Spectrum(records, scan_scale)


def refine_newton(
    charfn: CharFunction,
    omega0: complex,
    bracket: tuple[float, float] | None = None,
    axis: str = "real",
) -> tuple[complex, bool, float]:
    """Newton from omega0; optional bisection fallback on a bracket.

    `axis` selects how a real bracket maps into the omega plane ("real" or
    "imag"); Newton itself runs in the full complex plane.
    """
    w = complex(omega0)
    prev_f = None
    prev_w = None
    best_w, best_res = w, math.inf
    converged = False
    for _ in range(_NEWTON_ITERS):
        f, df = charfn.value(w)
        if abs(f) < best_res:
            best_w, best_res = w, abs(f)
        if df != 0:
            step = f / df
        elif prev_f is not None and f != prev_f:
            step = f * (w - prev_w) / (f - prev_f)
        else:
            break
        prev_f, prev_w = f, w
        if abs(w - step) < 1e-7:
            break
        w = w - step
        if abs(step) <= _NEWTON_TOL * (1.0 + abs(w)):
            converged = True
            f, _ = charfn.value(w)
            if abs(f) < best_res:
                best_w, best_res = w, abs(f)
            break
    if not converged and bracket is not None:
        w, res = _bisect(charfn, bracket, axis)
        if res < best_res:
            best_w, best_res = w, res
        converged = True
    return best_w, converged, best_res


def _bisect(charfn: CharFunction, bracket: tuple[float, float], axis: str) -> tuple[complex, float]:
    to_omega = (lambda t: complex(t)) if axis == "real" else (lambda t: 1j * t)
    lo, hi = bracket
    flo = charfn.value(to_omega(lo))[0].real
    fhi = charfn.value(to_omega(hi))[0].real
    if flo == 0.0:
        return to_omega(lo), 0.0
    if fhi == 0.0:
        return to_omega(hi), 0.0
    if flo * fhi > 0:
        w = to_omega(0.5 * (lo + hi))
        return w, abs(charfn.value(w)[0])
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        fm = charfn.value(to_omega(mid))[0].real
        if fm == 0.0:
            return to_omega(mid), 0.0
        if flo * fm < 0:
            hi = mid
        else:
            lo, flo = mid, fm
    w = to_omega(0.5 * (lo + hi))
    return w, abs(charfn.value(w)[0])


def _scan_axis(
    charfn: CharFunction,
    lo: float,
    hi: float,
    step: float,
    axis: str,
) -> tuple[Spectrum, np.ndarray, np.ndarray]:
    """Shared machinery for the real-omega and imaginary-omega scans."""
    if hi <= lo:
        raise NumericalError("spectrum", "empty scan range")
    m = int(math.ceil((hi - lo) / step)) + 1
    while (m - 1) % 5 != 0 or m < 6:
        m += 1
    wgrid = build_grid(lo, hi, m)
    ws = wgrid.nodes if axis == "real" else 1j * wgrid.nodes
    char, _ = charfn.value_many(ws)
    vals = char.real if charfn.is_real else char
    absf = np.abs(vals)
    median = float(np.median(absf))
    if median == 0.0:
        raise NumericalError("spectrum", "characteristic function vanished on the whole scan")
    records: list[EigenvalueRecord] = []
    fr = np.asarray(vals).real
    to_omega = (lambda t: complex(t)) if axis == "real" else (lambda t: 1j * t)

    # sign-change brackets, refined by batched Newton
    sgn = np.sign(fr)
    idx = np.nonzero(sgn[:-1] * sgn[1:] < 0)[0]
    exact = np.nonzero(fr == 0.0)[0]
    seeds = []
    brackets = []
    for i in idx:
        t0, t1 = wgrid.nodes[i], wgrid.nodes[i + 1]
        # secant seed inside the bracket
        t = t0 - fr[i] * (t1 - t0) / (fr[i + 1] - fr[i])
        seeds.append(to_omega(t))
        brackets.append((float(t0), float(t1)))
    done = [False] * len(seeds)
    if seeds:
        w = np.array(seeds, dtype=np.complex128)
        active = np.ones(len(seeds), dtype=bool)
        for _ in range(_NEWTON_ITERS):
            if not active.any():
                break
            c, d = charfn.value_many(w[active])
            ok = d != 0
            step_w = np.where(ok, c / np.where(ok, d, 1.0), 0.0)
            wa = w[active] - step_w
            small = ok & (np.abs(step_w) <= _NEWTON_TOL * (1.0 + np.abs(wa)))
            lost = np.abs(wa) < 1e-7
            prev_active = np.nonzero(active)[0]
            w[prev_active] = np.where(lost, w[active], wa)
            for j, k in enumerate(prev_active):
                if small[j]:
                    active[k] = False
                    done[k] = True
                elif lost[j] or not ok[j]:
                    active[k] = False
        for k, seed in enumerate(seeds):
            if done[k]:
                res = abs(charfn.value(w[k])[0])
                lo_k, hi_k = brackets[k]
                pos = w[k].real if axis == "real" else w[k].imag
                if lo_k - step <= pos <= hi_k + step and res <= 1e-8 * median:
                    _append_root(records, w[k], res, "newton")
                    continue
            wb, conv, res = refine_newton(charfn, seed, brackets[k], axis)
            if res <= 1e-8 * median:
                _append_root(records, wb, res, "newton" if conv else "scan")
    for i in exact:
        _append_root(records, to_omega(wgrid.nodes[i]), 0.0, "scan")

    # grazing dips: |char| small without a sign change, e.g. double roots
    bracketed = set()
    for i in idx:
        bracketed.add(int(i))
        bracketed.add(int(i) + 1)
    for i in range(1, m - 1):
        if absf[i] < _DIP_FACTOR * median and absf[i] <= absf[i - 1] and absf[i] <= absf[i + 1]:
            if i in bracketed:
                continue
            w_stat = _stationary_newton(charfn, to_omega(wgrid.nodes[i]))
            if w_stat is None or abs(w_stat - to_omega(wgrid.nodes[i])) > 10 * step:
                continue
            res = abs(charfn.value(w_stat)[0])
            if res <= 1e-8 * median:
                _append_root(records, w_stat, res, "newton")
    spectrum = _finalize(records, median)
    return spectrum, wgrid.nodes, vals


def _stationary_newton(charfn: CharFunction, w0: complex) -> complex | None:
    """Newton on char' (finite-difference second derivative) for dips."""
    w = complex(w0)
    for _ in range(_NEWTON_ITERS):
        h = 1e-6 * (1.0 + abs(w))
        _, d0 = charfn.value(w)
        _, dp = charfn.value(w + h)
        _, dm = charfn.value(w - h)
        d2 = (dp - dm) / (2 * h)
        if d2 == 0 or abs(w) < 1e-6:
            return None
        step = d0 / d2
        w = w - step
        if abs(step) <= 1e-11 * (1.0 + abs(w)):
            return w
    return None


def scan_real(charfn: CharFunction, omega_min: float, omega_max: float, step: float = 0.02) -> Spectrum:
    """Find real-omega eigenvalues (positive lambda) on [omega_min, omega_max]."""
    spectrum, _, _ = _scan_axis(charfn, omega_min, omega_max, step, "real")
    return spectrum


def scan_imaginary(charfn: CharFunction, tau_min: float, tau_max: float, step: float = 0.02) -> Spectrum:
    """Find eigenvalues with omega = i tau (negative lambda), tau in [tau_min, tau_max]."""
    spectrum, _, _ = _scan_axis(charfn, tau_min, tau_max, step, "imag")
    return spectrum


# ---------------------------------------------------------------------------
# complex search by the argument principle


def _contour_points(re0, re1, im0, im1, per_side):
    pts = []
    for a, b in (
        ((re0, im0), (re1, im0)),
        ((re1, im0), (re1, im1)),
        ((re1, im1), (re0, im1)),
        ((re0, im1), (re0, im0)),
    ):
        for t in np.linspace(0.0, 1.0, per_side, endpoint=False):
            pts.append(complex(a[0] + (b[0] - a[0]) * t, a[1] + (b[1] - a[1]) * t))
    return np.array(pts)


def _winding(charfn: CharFunction, rect, scale: float):
    """Winding number of char around the rectangle, or None on a contour zero.

    Refines the contour sampling until every phase step is below pi/2, so no
    zero can slip between samples unnoticed.
    """
    re0, re1, im0, im1 = rect
    pts = _contour_points(re0, re1, im0, im1, 16)
    vals, _ = charfn.value_many(pts)
    for _ in range(18):
        if np.min(np.abs(vals)) < 1e-13 * scale:
            return None, 0.0
        dphi = np.angle(np.roll(vals, -1) / vals)
        if np.max(np.abs(dphi)) < 0.5 * math.pi:
            total = float(np.sum(dphi)) / (2.0 * math.pi)
            return total, float(np.min(np.abs(vals)))
        mids = 0.5 * (pts + np.roll(pts, -1))
        mvals, _ = charfn.value_many(mids)
        inter_p = np.empty(pts.size * 2, dtype=np.complex128)
        inter_v = np.empty(vals.size * 2, dtype=np.complex128)
        inter_p[0::2] = pts
        inter_p[1::2] = mids
        inter_v[0::2] = vals
        inter_v[1::2] = mvals
        pts, vals = inter_p, inter_v
    raise NumericalError("spectrum", "contour phase refinement did not settle")


def find_complex(
    charfn: CharFunction,
    re_min: float,
    re_max: float,
    im_min: float,
    im_max: float,
    scale: float,
    omega_cut: float = 0.5,
) -> list[EigenvalueRecord]:
    """All roots of char in the rectangle, by winding counts + subdivision."""
    records: list[EigenvalueRecord] = []
    rng = np.random.default_rng(1234)

    def count(rect) -> int | None:
        for attempt in range(_PERTURB_RETRIES + 1):
            r = rect
            if attempt:
                eps = 1e-3 * max(r[1] - r[0], r[3] - r[2]) * attempt
                jitter = rng.uniform(-eps, eps, size=4)
                r = (r[0] - abs(jitter[0]), r[1] + abs(jitter[1]), r[2] - abs(jitter[2]), r[3] + abs(jitter[3]))
            w, _ = _winding(charfn, r, scale)
            if w is None:
                continue
            n = round(w)
            if abs(w - n) <= _WINDING_TOL:
                return n
        raise NumericalError("spectrum", f"winding count failed on rectangle {rect}")

    def visit(rect, depth=0):
        re0, re1, im0, im1 = rect
        if max(abs(re0), abs(re1)) <= omega_cut and max(abs(im0), abs(im1)) <= omega_cut:
            return
        n = count(rect)
        if n == 0:
            return
        wide = max(re1 - re0, im1 - im0)
        if wide > _MIN_RECT_SIDE and depth < 60:
            if re1 - re0 >= im1 - im0:
                mid = 0.5 * (re0 + re1)
                visit((re0, mid, im0, im1), depth + 1)
                visit((mid, re1, im0, im1), depth + 1)
            else:
                mid = 0.5 * (im0 + im1)
                visit((re0, re1, im0, mid), depth + 1)
                visit((re0, re1, mid, im1), depth + 1)
            return
        center = complex(0.5 * (re0 + re1), 0.5 * (im0 + im1))
        w, conv, res = refine_newton(charfn, center)
        margin = 0.5 * wide + 1e-6
        inside = (re0 - margin <= w.real <= re1 + margin) and (im0 - margin <= w.imag <= im1 + margin)
        if conv and inside and res <= 1e-6 * scale:
            _append_root(records, w, res, "argument-principle")
            if n > 1 and depth < 60:
                # more roots share this box: split further to separate them
                mid_r = 0.5 * (re0 + re1)
                mid_i = 0.5 * (im0 + im1)
                for sub in (
                    (re0, mid_r, im0, mid_i),
                    (mid_r, re1, im0, mid_i),
                    (re0, mid_r, mid_i, im1),
                    (mid_r, re1, mid_i, im1),
                ):
                    visit(sub, depth + 1)
        elif depth < 60:
            mid_r = 0.5 * (re0 + re1)
            mid_i = 0.5 * (im0 + im1)
            for sub in (
                (re0, mid_r, im0, mid_i),
                (mid_r, re1, im0, mid_i),
                (re0, mid_r, mid_i, im1),
                (mid_r, re1, mid_i, im1),
            ):
                visit(sub, depth + 1)

    visit((re_min, re_max, im_min, im_max))
    return records
