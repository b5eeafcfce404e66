"""Grid evaluation and the numeric residual-scaling study."""

from fractions import Fraction

import pytest

from approxsym.grids import (FIGURE_PARAMS, GridSpec, evaluate_grid, grid_csv,
                             linspace, residual_scaling, solution_expr,
                             sup_residual)

Q = Fraction


def spec(**kw):
    base = dict(x_range=(Q(-3), Q(3)), t_range=(Q(1, 10), Q(3)),
                nx=5, nt=3)
    base.update(kw)
    return GridSpec(**base)


def test_spec_validation():
    with pytest.raises(ValueError):
        spec(nx=1)
    with pytest.raises(ValueError):
        spec(t_range=(Q(-1), Q(1)))  # contains 0
    with pytest.raises(ValueError):
        spec(t_range=(Q(0), Q(1)))   # touches 0
    with pytest.raises(ValueError):
        spec(x_range=(Q(3), Q(-3)))
    # negative-t windows are fine as long as 0 is excluded
    spec(t_range=(Q(-2), Q(-1, 10)))


def test_linspace_exact():
    pts = linspace(Q(-3), Q(3), 5)
    assert pts == [Q(-3), Q(-3, 2), Q(0), Q(3, 2), Q(3)]
    pts = linspace(Q(1, 10), Q(3), 30)
    assert pts[0] == Q(1, 10) and pts[-1] == Q(3)
    assert len(set(pts)) == 30


def test_unperturbed_values():
    rows = evaluate_grid(spec(), "galilean_unperturbed")
    lookup = {(xv, tv): wv for xv, tv, wv in rows}
    assert lookup[(Q(0), Q(1, 10))] == Q(5, 3)  # (1-0)/0.6
    # numerator vanishes on the x = c line
    assert lookup[(Q(3), Q(3))] == Q(1 - 3, 18)
    spec1 = spec(params={**FIGURE_PARAMS, "c": Q(3)})
    rows1 = evaluate_grid(spec1, "galilean_unperturbed")
    assert all(wv == 0 for xv, tv, wv in rows1 if xv == 3)


def test_grid_row_order_t_major():
    rows = evaluate_grid(spec(), "galilean_unperturbed")
    ts = [tv for _, tv, _ in rows]
    assert ts == sorted(ts)
    xs_first_block = [xv for xv, tv, _ in rows if tv == Q(1, 10)]
    assert xs_first_block == linspace(Q(-3), Q(3), 5)


def test_csv_format_and_float_fidelity():
    csv = grid_csv(spec(), "galilean_unperturbed")
    lines = csv.splitlines()
    assert lines[0] == "x,t,w"
    assert len(lines) == 1 + 5 * 3
    # every printed float is the correctly rounded image of the exact value
    rows = evaluate_grid(spec(), "galilean_unperturbed")
    for line, (xv, tv, wv) in zip(lines[1:], rows):
        fx, ft, fw = line.split(",")
        assert float(fx) == float(xv)
        assert float(ft) == float(tv)
        assert float(fw) == float(wv)
        assert abs(float(fw) - wv) <= abs(wv) * Q(1, 2 ** 52) + Q(1, 2 ** 60)


def test_eps_zero_streams_identical():
    a = grid_csv(spec(eps=Q(0)), "galilean_unperturbed")
    b = grid_csv(spec(eps=Q(0)), "galilean_approximate")
    assert a == b


def test_sup_residual_linear_drift_exact():
    # residual -6 eps^2 x + 6 eps^4 x^2 peaks at x = -3
    s = spec()
    e = Q(1, 10)
    got = sup_residual(s, "linear_drift", e)
    assert got == 18 * e ** 2 + 54 * e ** 4


def test_scaling_linear_drift_ratios_near_four():
    rep = residual_scaling(spec(), [Q(1, 10), Q(1, 20), Q(1, 40)],
                           kind="linear_drift")
    ratios = [r["ratio"] for r in rep["ratios"]]
    assert all(3.5 <= r <= 4.5 for r in ratios)


def test_scaling_requires_decreasing_positive():
    with pytest.raises(ValueError):
        residual_scaling(spec(), [Q(1, 20), Q(1, 10)])
    with pytest.raises(ValueError):
        residual_scaling(spec(), [Q(1, 10), Q(0)])


def test_scaling_galilean_asymptotic_regime():
    """Once the parameter is small enough for the quadratic term to
    dominate, the ratios settle near 4."""
    rep = residual_scaling(spec(), [Q(1, 40), Q(1, 80), Q(1, 160)])
    ratios = [r["ratio"] for r in rep["ratios"]]
    assert all(3.5 <= r <= 4.5 for r in ratios)


def test_solution_expr_unknown_kind():
    with pytest.raises(ValueError):
        solution_expr("unknown")
