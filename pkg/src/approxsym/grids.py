"""Floating-point presentation layer: grid evaluation of the closed-form
solutions and the numeric residual-scaling study.

This is the only module where floats appear.  Every value is computed as an
exact rational first and converted to float at the very end, so the printed
numbers are correctly rounded.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .algebra import RationalExpr, T, X
from .solutions import (C_BIG, C_LOW, K, SolutionCandidate, galilean_close,
                        galilean_reduce, galilean_w0,
                        linear_drift_candidate, residual)

PARAM_SYMBOLS = {"c": C_LOW, "C": C_BIG, "k1": K[0], "k2": K[1],
                 "k3": K[2], "k4": K[3]}

SOLUTION_KINDS = ("galilean_unperturbed", "galilean_approximate",
                  "linear_drift")

FIGURE_PARAMS = {"c": Fraction(1), "C": Fraction(1), "k1": Fraction(1),
                 "k2": Fraction(1), "k4": Fraction(1)}


@dataclass(frozen=True)
class GridSpec:
    """Sampling grid; the t range must not contain 0 (the solutions have
    poles there)."""

    x_range: tuple
    t_range: tuple
    nx: int = 61
    nt: int = 30
    eps: Fraction = Fraction(1, 10)
    params: dict = field(default_factory=lambda: dict(FIGURE_PARAMS))

    def __post_init__(self):
        if self.nx < 2 or self.nt < 2:
            raise ValueError("nx and nt must be at least 2")
        x0, x1 = self.x_range
        t0, t1 = self.t_range
        if not (x0 < x1 and t0 < t1):
            raise ValueError("ranges must be increasing")
        if t0 <= 0 <= t1:
            raise ValueError("t range must exclude 0")

    @staticmethod
    def figure_defaults() -> "GridSpec":
        return GridSpec(x_range=(Fraction(-3), Fraction(3)),
                        t_range=(Fraction(1, 10), Fraction(3)))


def linspace(a: Fraction, b: Fraction, n: int) -> list[Fraction]:
    step = Fraction(b - a, n - 1)
    return [a + i * step for i in range(n)]


@lru_cache(maxsize=None)
def solution_expr(kind: str) -> RationalExpr:
    """The exact closed form for a named solution, with symbolic parameters."""
    if kind == "galilean_unperturbed":
        return galilean_w0()
    if kind == "galilean_approximate":
        closure = galilean_close(galilean_reduce())
        return closure.solution.expr
    if kind == "linear_drift":
        return linear_drift_candidate().expr
    raise ValueError(f"unknown solution kind {kind!r}")


@lru_cache(maxsize=None)
def residual_expr(kind: str) -> RationalExpr:
    return residual(SolutionCandidate(expr=solution_expr(kind)))


def _bind_params(expr: RationalExpr, params: dict) -> RationalExpr:
    assignment = {PARAM_SYMBOLS[name]: Fraction(value)
                  for name, value in params.items()}
    return expr.eval_partial(assignment)


def evaluate_grid(spec: GridSpec, kind: str) -> list[tuple]:
    """Rows (x, t, value) as exact fractions, t-major then x."""
    expr = _bind_params(solution_expr(kind), spec.params)
    xs = linspace(*spec.x_range, spec.nx)
    ts = linspace(*spec.t_range, spec.nt)
    rows = []
    for tv in ts:
        for xv in xs:
            rows.append((xv, tv, expr.evaluate({X: xv, T: tv}, spec.eps)))
    return rows


def grid_csv(spec: GridSpec, kind: str) -> str:
    lines = ["x,t,w"]
    for xv, tv, wv in evaluate_grid(spec, kind):
        lines.append(f"{float(xv)!r},{float(tv)!r},{float(wv)!r}")
    return "\n".join(lines) + "\n"


def sup_residual(spec: GridSpec, kind: str, eps: Fraction) -> Fraction:
    """Exact sup-norm of the symbolic residual over the grid at a given
    parameter value."""
    expr = _bind_params(residual_expr(kind), spec.params)
    xs = linspace(*spec.x_range, spec.nx)
    ts = linspace(*spec.t_range, spec.nt)
    best = Fraction(0)
    for tv in ts:
        row_assign = {T: tv}
        bound_t = expr.eval_partial(row_assign)
        for xv in xs:
            value = abs(bound_t.evaluate({X: xv}, eps))
            if value > best:
                best = value
    return best


def residual_scaling(spec: GridSpec, eps_list: list[Fraction],
                     kind: str = "galilean_approximate") -> dict:
    """Sup-norm residuals for a decreasing list of parameter values and their
    successive ratios; a first-order-accurate solution shows ratios near 4
    when each parameter halves."""
    if any(e <= 0 for e in eps_list):
        raise ValueError("parameter values must be positive")
    if any(a <= b for a, b in zip(eps_list, eps_list[1:])):
        raise ValueError("parameter values must be strictly decreasing")
    sups = [sup_residual(spec, kind, e) for e in eps_list]
    ratios = []
    for (e0, s0), (e1, s1) in zip(zip(eps_list, sups),
                                  zip(eps_list[1:], sups[1:])):
        ratios.append({
            "eps_pair": [str(e0), str(e1)],
            "ratio": float(s0 / s1) if s1 else None,
        })
    return {
        "solution": kind,
        "rows": [{"eps": str(e), "sup_residual": float(s),
                  "sup_residual_exact": str(s)}
                 for e, s in zip(eps_list, sups)],
        "ratios": ratios,
    }
