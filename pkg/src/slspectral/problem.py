"""Problem description: interval, coefficient expressions, boundary rows."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import expr
from .errors import InputError
from .mesh import Grid

__all__ = ["SLProblem", "BoundaryConditions"]


@dataclass
class SLProblem:
    """Equation (p v')' - q v + lambda r v = 0 on [a, b]."""

    a: float
    b: float
    p: expr.Expr
    q: expr.Expr
    r: expr.Expr
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b) and self.a < self.b):
            raise InputError(f"interval [{self.a}, {self.b}] must be finite and increasing")

    @classmethod
    def from_strings(cls, a: float, b: float, p: str, q: str, r: str) -> "SLProblem":
        try:
            return cls(float(a), float(b), expr.parse(p), expr.parse(q), expr.parse(r))
        except expr.ExprSyntaxError as e:
            raise InputError(f"bad coefficient expression: {e}") from e

    @property
    def dp(self) -> expr.Expr:
        if "dp" not in self._cache:
            self._cache["dp"] = expr.differentiate(self.p)
        return self._cache["dp"]

    @property
    def dr(self) -> expr.Expr:
        if "dr" not in self._cache:
            self._cache["dr"] = expr.differentiate(self.r)
        return self._cache["dr"]

    def sample(self, which: str, grid: Grid) -> np.ndarray:
        """Coefficient samples on the grid; which in {p, q, r, dp, dr}."""
        key = ("sample", which, grid.a, grid.b, grid.m)
        if key not in self._cache:
            ast = {"p": self.p, "q": self.q, "r": self.r, "dp": self.dp, "dr": self.dr}[which]
            vals = expr.evaluate(ast, grid.nodes)
            if not np.all(np.isfinite(vals)):
                raise InputError(f"coefficient {which!r} is non-finite on the grid")
            self._cache[key] = vals
        return self._cache[key]

    def value(self, which: str, y: float) -> complex:
        ast = {"p": self.p, "q": self.q, "r": self.r, "dp": self.dp, "dr": self.dr}[which]
        return expr.evaluate(ast, complex(y))

    def is_real_on(self, grid: Grid) -> bool:
        for which in ("p", "q", "r"):
            vals = self.sample(which, grid)
            scale = np.max(np.abs(vals)) or 1.0
            if np.max(np.abs(vals.imag)) > 1e-12 * scale:
                return False
        return True


@dataclass
class BoundaryConditions:
    """Two rows (c1, c2, c3, c4): c1 v(A) + c2 v'(A) + c3 v(B) + c4 v'(B) = 0."""

    rows: np.ndarray

    def __post_init__(self):
        self.rows = np.asarray(self.rows, dtype=np.complex128)
        if self.rows.shape != (2, 4):
            raise InputError("boundary conditions need two rows of four entries")
        if np.all(self.rows[0] == 0) or np.all(self.rows[1] == 0):
            raise InputError("boundary row is identically zero")

    @property
    def is_separated(self) -> bool:
        return bool(np.all(self.rows[0, 2:] == 0))

    @property
    def is_real(self) -> bool:
        return bool(np.max(np.abs(self.rows.imag)) == 0)
