"""Batch front end: problem file in, eigenvalue CSV out.

The problem file is INI-style with three sections:

    [problem]
    A = 1.0
    B = 2.0
    p = y
    q = 1/(4*y) + 2*y/(y-1/2)^2
    r = y

    [boundary]
    row1 = 1, 0, 0, 0
    row2 = 0, 0, 1, 0

    [solver]
    mode = symmetric
    omega_min = 1.0
    omega_max = 101.0

Complex entries are written like "0.5+0.5i".  Exit codes: 0 success,
1 problem-file error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import configparser
import sys
import time
from pathlib import Path

import numpy as np

from .errors import InputError, NumericalError, SLSpectralError
from .evaluate import SolverState, normalized_pair_many
from .oracle import oracle_eigenvalues
from .pipeline import SearchOptions, SolverOptions, build_solver, find_spectrum
from .problem import BoundaryConditions, SLProblem
from .spectrum import CharFunction, Spectrum

__all__ = ["main"]

_CSV_HEADER = "index,re_lambda,im_lambda,re_omega,im_omega,residual,method"


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _parse_complex(text: str, where: str) -> complex:
    cleaned = text.strip().replace(" ", "").replace("i", "j")
    try:
        return complex(cleaned)
    except ValueError:
        raise InputError(f"{where}: cannot read complex number from {text.strip()!r}") from None


def _parse_row(text: str, where: str) -> list[complex]:
    parts = [t for t in text.split(",") if t.strip()]
    if len(parts) != 4:
        raise InputError(f"{where}: expected four comma-separated entries, got {len(parts)}")
    return [_parse_complex(t, where) for t in parts]


def _get(cfg: configparser.ConfigParser, section: str, key: str) -> str:
    if not cfg.has_section(section):
        raise InputError(f"missing section [{section}]")
    if not cfg.has_option(section, key):
        raise InputError(f"missing key {key!r} in section [{section}]")
    return cfg.get(section, key)


def load_problem_file(path: str) -> tuple[SLProblem, BoundaryConditions, SolverOptions, SearchOptions]:
    cfg = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg.read_file(fh)
    except OSError as e:
        raise InputError(f"cannot read problem file: {e}") from e
    except configparser.Error as e:
        # configparser errors carry the offending line in their message
        raise InputError(f"problem file parse error: {e}") from e

    try:
        a = float(_get(cfg, "problem", "A"))
        b = float(_get(cfg, "problem", "B"))
    except ValueError as e:
        raise InputError(f"[problem] A/B must be real numbers: {e}") from None
    problem = SLProblem.from_strings(
        a, b, _get(cfg, "problem", "p"), _get(cfg, "problem", "q"), _get(cfg, "problem", "r")
    )
    bc = BoundaryConditions(
        np.array(
            [
                _parse_row(_get(cfg, "boundary", "row1"), "[boundary] row1"),
                _parse_row(_get(cfg, "boundary", "row2"), "[boundary] row2"),
            ]
        )
    )

    sv = cfg["solver"] if cfg.has_section("solver") else {}

    def fval(key: str, default: float) -> float:
        raw = sv.get(key)
        if raw is None:
            return default
        try:
            return float(raw)
        except ValueError:
            raise InputError(f"[solver] {key} must be a number, got {raw!r}") from None

    def ival(key: str, default: int | None) -> int | None:
        raw = sv.get(key)
        if raw is None:
            return default
        try:
            return int(raw)
        except ValueError:
            raise InputError(f"[solver] {key} must be an integer, got {raw!r}") from None

    solver = SolverOptions(
        mode=sv.get("mode", "endpoint").strip(),
        grid_points=ival("grid_points", 4001),
        n_powers=ival("n_powers", 60),
        n_fit=ival("n_fit", None),
        g_logderiv=(
            _parse_complex(sv["g_logderiv_y0"], "[solver] g_logderiv_y0")
            if "g_logderiv_y0" in sv
            else None
        ),
        omega_cut=fval("omega_cut", 0.5),
    )
    rect = None
    complex_search = sv.get("complex_search", "false").strip().lower() in ("1", "true", "yes", "on")
    if complex_search:
        rect = (
            fval("complex_re_min", 0.0),
            fval("complex_re_max", 10.0),
            fval("complex_im_min", -5.0),
            fval("complex_im_max", 5.0),
        )
    search = SearchOptions(
        omega_min=fval("omega_min", 0.5),
        omega_max=fval("omega_max", 10.0),
        scan_step=fval("scan_step", 0.02),
        tau_max=fval("tau_max", 0.0),
        complex_search=complex_search,
        rect=rect,
        near_origin=sv.get("near_origin", "true").strip().lower() in ("1", "true", "yes", "on"),
    )
    solver.validate()
    search.validate()
    return problem, bc, solver, search


def write_spectrum_csv(path: Path, spectrum: Spectrum) -> None:
    lines = [_CSV_HEADER]
    for rec in spectrum.records:
        lines.append(
            ",".join(
                [
                    str(rec.index),
                    _fmt(rec.lam.real),
                    _fmt(rec.lam.imag),
                    _fmt(rec.omega.real),
                    _fmt(rec.omega.imag),
                    _fmt(rec.residual),
                    rec.method,
                ]
            )
        )
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _dump_char(path: Path, state: SolverState, bc: BoundaryConditions, search: SearchOptions) -> None:
    charfn = CharFunction(state, bc)
    n = max(8, int(np.ceil((search.omega_max - search.omega_min) / search.scan_step)) + 1)
    omegas = np.linspace(search.omega_min, search.omega_max, n)
    vals, _ = charfn.value_many(omegas.astype(np.complex128))
    lines = ["omega,re_char,im_char"]
    for w, v in zip(omegas, vals):
        lines.append(f"{_fmt(w)},{_fmt(v.real)},{_fmt(v.imag)}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _dump_coeffs(path: Path, state: SolverState) -> None:
    c = state.coeffs
    lines = ["name,index,re,im"]
    for name, arr in (("a", c.a), ("b", c.b)):
        for k, v in enumerate(arr):
            lines.append(f"{name},{k},{_fmt(v.real)},{_fmt(v.imag)}")
    lines.append(f"eps_cos,0,{_fmt(c.residual_cos)},0")
    lines.append(f"eps_sin,0,{_fmt(c.residual_sin)},0")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _dump_solution(path: Path, state: SolverState, omega: complex) -> None:
    ys = state.grid.nodes
    cols = ["y"]
    for name in ("v1", "v1_prime", "v2", "v2_prime"):
        cols += [f"re_{name}", f"im_{name}"]
    lines = [",".join(cols)]
    w = np.array([omega], dtype=np.complex128)
    for y in ys:
        s = normalized_pair_many(state, w, float(y))
        row = [_fmt(y)]
        for v in (s.v1[0], s.v1_prime[0], s.v2[0], s.v2_prime[0]):
            row += [_fmt(v.real), _fmt(v.imag)]
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _run_solve(args: argparse.Namespace) -> int:
    t0 = time.perf_counter()
    problem, bc, solver, search = load_problem_file(args.file)
    if args.threads is not None:
        search.threads = args.threads
    out_dir = Path(args.out) if args.out else Path.cwd()
    out_dir.mkdir(parents=True, exist_ok=True)

    if args.oracle:
        spectrum = oracle_eigenvalues(
            problem,
            bc,
            omega_min=max(search.omega_min, solver.omega_cut),
            omega_max=search.omega_max,
            scan_step=search.scan_step,
            tau_max=search.tau_max,
            near_origin=search.near_origin,
            complex_rect=search.rect if search.complex_search else None,
        )
        write_spectrum_csv(out_dir / "spectrum_oracle.csv", spectrum)
        print(
            f"oracle: {len(spectrum)} eigenvalues in {time.perf_counter() - t0:.2f}s",
            file=sys.stderr,
        )
        return 0

    state = build_solver(problem, solver)
    spectrum = find_spectrum(state, bc, search, omega_cut=solver.omega_cut)
    write_spectrum_csv(out_dir / "spectrum.csv", spectrum)
    if args.dump_char:
        _dump_char(out_dir / "char.csv", state, bc, search)
    if args.dump_coeffs:
        _dump_coeffs(out_dir / "coeffs.csv", state)
    if args.dump_solution is not None:
        omega = _parse_complex(args.dump_solution, "--dump-solution")
        _dump_solution(out_dir / "solution.csv", state, omega)
    for line in state.diagnostics.lines():
        print(line, file=sys.stderr)
    print(f"{len(spectrum)} eigenvalues -> {out_dir / 'spectrum.csv'}", file=sys.stderr)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="slspectral",
        description="Sturm-Liouville eigenvalue solver.",
        epilog=(
            "spectrum.csv columns: index, re_lambda, im_lambda, re_omega, im_omega, "
            "residual, method; floats carry 17 significant digits."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)
    ps = sub.add_parser("solve", help="solve the problem described by an INI file")
    ps.add_argument("file", help="problem file (sections [problem], [boundary], [solver])")
    ps.add_argument("--out", help="output directory (default: current)")
    ps.add_argument("--dump-char", action="store_true", help="also write char.csv over the scan range")
    ps.add_argument("--dump-coeffs", action="store_true", help="also write coeffs.csv (fit coefficients)")
    ps.add_argument("--dump-solution", metavar="OMEGA", help="also write solution.csv at this omega")
    ps.add_argument("--oracle", action="store_true", help="run the direct-integration oracle instead")
    ps.add_argument("--threads", type=int, help="parallel workers for disjoint search regions")

    args = parser.parse_args(argv)
    try:
        return _run_solve(args)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 2
    except SLSpectralError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
