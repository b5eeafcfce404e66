"""Jet calculus: total derivatives, prolongation, manifold restriction."""

from fractions import Fraction

import pytest

from approxsym.algebra import EpsSeries, Poly, T, W, X
from approxsym.equations import (evolution_manifold, gardner_manifold, kdv,
                                 kdv_manifold, kdv_poly)
from approxsym.jets import (JetOrderError, SolutionManifold,
                            SubstitutionCycleError, VectorField,
                            apply_prolonged, jet, prolong,
                            restrict_to_manifold, total_derivative)

x, t, w = Poly.var(X), Poly.var(T), Poly.var(W)
wx, wt = Poly.var(jet(1, 0)), Poly.var(jet(0, 1))


def test_jet_naming_and_identity():
    assert jet(0, 0) is W
    assert jet(2, 1).name == "w_xxt"
    assert jet(2, 1) is jet(2, 1)
    with pytest.raises(ValueError):
        jet(-1, 0)


def test_total_derivative_examples():
    assert total_derivative(w, "x") == wx
    assert total_derivative(w * w, "x") == 2 * w * wx
    got = total_derivative(Poly.const(-1) - 6 * t * wx, "t")
    assert got == -6 * wx - 6 * t * Poly.var(jet(1, 1))


def test_total_derivative_order_overflow():
    deep = Poly.var(jet(5, 0))
    with pytest.raises(JetOrderError):
        total_derivative(deep, "x")
    # order 5 itself is reachable from order 4
    assert total_derivative(Poly.var(jet(4, 0)), "x") == Poly.var(jet(5, 0))


def test_total_derivatives_commute():
    e = w * wx + x * t * w
    dxdt = total_derivative(total_derivative(e, "x"), "t")
    dtdx = total_derivative(total_derivative(e, "t"), "x")
    assert dxdt == dtdx


def test_prolong_constant_field_trivial():
    v1 = VectorField.make(1, 0, 0, order=0)
    pv = prolong(v1, 3)
    for idx, coeff in pv.jet_coeffs.items():
        if idx != (0, 0):
            assert coeff.is_zero(), idx


def test_prolong_galilean_first_order():
    v3 = VectorField.make(6 * t, 0, -1, order=0)
    pv = prolong(v3, 1)
    assert pv.coeff(0, 1) == EpsSeries.lift(-6 * wx, 0)
    assert pv.coeff(1, 0).is_zero()


def test_prolong_scaling_weights():
    v4 = VectorField.make(x, 3 * t, -2 * w, order=0)
    pv = prolong(v4, 1)
    # w_t carries scaling weight -5
    assert pv.coeff(0, 1) == EpsSeries.lift(-5 * wt, 0)
    assert pv.coeff(1, 0) == EpsSeries.lift(-3 * wx, 0)


def test_apply_prolonged_exact_symmetries():
    F0 = kdv(0)
    v3 = VectorField.make(6 * t, 0, -1, order=0)
    assert apply_prolonged(prolong(v3, 3), F0).is_zero()

    v4 = VectorField.make(x, 3 * t, -2 * w, order=0)
    out = apply_prolonged(prolong(v4, 3), F0)
    assert out == EpsSeries.lift(-5 * kdv_poly(), 0)

    zero = VectorField.make(0, 0, 0, order=0)
    assert apply_prolonged(prolong(zero, 3), F0).is_zero()


def test_apply_prolonged_insufficient_order_rejected():
    v = VectorField.make(1, 0, 0, order=0)
    pv = prolong(v, 1)
    with pytest.raises(JetOrderError):
        apply_prolonged(pv, kdv(0))  # needs third-order jets


def test_apply_prolonged_is_derivation():
    v = VectorField.make(x * w, t, w * w, order=0)
    pv = prolong(v, 2)
    F = EpsSeries.lift(w * wx + t, 0)
    G = EpsSeries.lift(x * w - wx, 0)
    left = apply_prolonged(pv, F * G)
    right = apply_prolonged(pv, F) * G + F * apply_prolonged(pv, G)
    assert left == right


def test_prolongation_linearity():
    a = VectorField.make(x, 0, w, order=0)
    b = VectorField.make(6 * t, t, -1, order=0)
    combo = VectorField.make(3 * x + 12 * t, 2 * t, 3 * w - 2, order=0)
    pa, pb, pc = prolong(a, 3), prolong(b, 3), prolong(combo, 3)
    for idx in pc.jet_coeffs:
        expect = pa.jet_coeffs[idx] * 3 + pb.jet_coeffs[idx] * 2
        assert pc.jet_coeffs[idx] == expect, idx


def test_restrict_examples():
    m = kdv_manifold(0)
    got = restrict_to_manifold(EpsSeries.lift(wt, 0), m)
    assert got == EpsSeries.lift(6 * w * wx - Poly.var(jet(3, 0)), 0)

    untouched = restrict_to_manifold(EpsSeries.lift(wx, 0), m)
    assert untouched == EpsSeries.lift(wx, 0)

    gm = gardner_manifold(1)
    got = restrict_to_manifold(EpsSeries.lift(Poly.var(jet(1, 1)), 1), gm)
    expect = total_derivative(gm.replacement, "x")
    assert got == expect


def test_restriction_eliminates_solved_family():
    m = kdv_manifold(0)
    e = EpsSeries.lift(Poly.var(jet(2, 1)) + w * wt + t * Poly.var(jet(1, 1)), 0)
    out = restrict_to_manifold(e, m)
    for sym in out.symbols():
        if sym.jet_index is not None:
            assert sym.jet_index[1] == 0, sym


def test_substitution_cycle_rejected():
    with pytest.raises(SubstitutionCycleError):
        SolutionManifold(solved_jet=(0, 1),
                         replacement=EpsSeries.lift(wt * w, 0))
    with pytest.raises(SubstitutionCycleError):
        SolutionManifold(solved_jet=(0, 1),
                         replacement=EpsSeries.lift(Poly.var(jet(1, 1)), 0))


def test_evolution_manifold_requires_unit_wt():
    with pytest.raises(ValueError):
        evolution_manifold(EpsSeries.lift(2 * wt - w, 0))


def test_exact_symmetries_vanish_on_manifold():
    """Each reference generator of the unperturbed equation kills it on the
    solution manifold."""
    from approxsym.solver import reference_kdv_basis
    F0 = kdv(0)
    m = kdv_manifold(0)
    for name, field in reference_kdv_basis(order=0):
        out = restrict_to_manifold(apply_prolonged(prolong(field, 3), F0), m)
        assert out.is_zero(), name


def test_vector_field_arithmetic_and_render():
    v = VectorField.make(6 * t, 0, -1, order=1)
    s = v.scale(Fraction(1, 2))
    assert s.xi.level(0) == 3 * t
    shifted = v.shift_eps()
    assert shifted.xi.level(0).is_zero()
    assert shifted.xi.level(1) == 6 * t
    assert "d/dx" in v.render() and "d/dw" in v.render()
    assert (v - v).is_zero()
