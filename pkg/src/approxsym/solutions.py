"""Approximate invariants, invariant solutions and their residuals.

Everything here is exact.  The small parameter is carried to series order 4,
which is the true polynomial degree of every residual in this module, so no
truncation ever discards information; the o(eps) verdict inspects levels 0
and 1 of a cleared numerator.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from .algebra import (EpsSeries, Poly, RationalExpr, Symbol, T, W, X,
                      collect_coefficients, param)
from .jets import VectorField, jet, total_derivative
from .solver import (DeterminingSystem, monomials_xtw,
                     reference_gardner_basis)

SOL_ORDER = 4

ALPHA = param("alpha")
BETA = param("beta")
GAMMA = param("gamma")
C_LOW = param("c")
C_BIG = param("C")
K = [param(f"k{i}") for i in range(1, 5)]
F_SYM = param("F")
FT_SYM = param("Ft")
FTT_SYM = param("Ftt")

_X, _T, _W = Poly.var(X), Poly.var(T), Poly.var(W)


def lift(p, den=None, order: int = SOL_ORDER) -> RationalExpr:
    num = p if isinstance(p, EpsSeries) else EpsSeries.lift(p, order)
    if num.order != order:
        num = EpsSeries.from_levels(list(num.coeffs), order)
    return RationalExpr(num, den)


def with_eps(level0, level1, den=None, order: int = SOL_ORDER) -> RationalExpr:
    return RationalExpr(EpsSeries.from_levels([level0, level1], order), den)


def eps_times(r: RationalExpr, k: int = 1) -> RationalExpr:
    return RationalExpr(r.num.shift(k), r.den)


def is_o_eps(r: RationalExpr) -> bool:
    """o(eps) test on the cleared numerator: levels 0 and 1 vanish."""
    return r.num.level(0).is_zero() and r.num.level(1).is_zero()


# time-differentiation rules for symbols that secretly depend on t
_T_CHAIN = {F_SYM: FT_SYM, FT_SYM: FTT_SYM}


def _poly_d(p: Poly, var: Symbol, use_chain: bool) -> Poly:
    out = p.diff(var)
    if use_chain and var is T:
        for s, ds in _T_CHAIN.items():
            out = out + p.diff(s) * Poly.var(ds)
    return out


def rational_diff(r: RationalExpr, var: Symbol,
                  use_chain: bool = False) -> RationalExpr:
    num = (EpsSeries([_poly_d(c, var, use_chain) for c in r.num.coeffs])
           * r.den - r.num * _poly_d(r.den, var, use_chain))
    return RationalExpr(num, r.den * r.den)


def poly_over(p: Poly, sym: Symbol, num: Poly, den: Poly) -> RationalExpr:
    """Substitute the rational value num/den for ``sym`` in a polynomial."""
    k_max = p.degree_in(sym)
    acc = Poly.zero()
    buckets: dict[int, Poly] = {}
    for m, cf in p.terms.items():
        e = 0
        rest = []
        for s, ex in m:
            if s is sym:
                e = ex
            else:
                rest.append((s, ex))
        piece = Poly({tuple(rest): cf})
        buckets[e] = buckets.get(e, Poly.zero()) + piece
    for e, piece in buckets.items():
        acc = acc + piece * num ** e * den ** (k_max - e)
    return RationalExpr(EpsSeries.lift(acc, SOL_ORDER), den ** k_max)


def rational_sub(r: RationalExpr, sym: Symbol, num: Poly,
                 den: Poly) -> RationalExpr:
    """Substitute num/den for ``sym`` throughout a rational expression."""
    out = lift(Poly.zero())
    for lvl, coeff in enumerate(r.num.coeffs):
        if not coeff.is_zero():
            out = out + eps_times(poly_over(coeff, sym, num, den), lvl)
    den_sub = poly_over(r.den, sym, num, den)
    # (out.num/out.den) / (den_sub.num/den_sub.den)
    return RationalExpr(out.num * den_sub.den,
                        out.den * den_sub.num.level(0))


# ---------------------------------------------------------------------------
# approximate invariants


@dataclass
class ApproxInvariant:
    """J = J0 + eps*J1, expected to satisfy X(J) = o(eps)."""

    j0: RationalExpr
    j1: RationalExpr
    label: str = ""

    def combined(self) -> RationalExpr:
        return self.j0 + eps_times(self.j1)

    def render(self) -> str:
        if self.j1.is_zero():
            return self.j0.render()
        return f"({self.j0.render()}) + eps*({self.j1.render()})"


def field_as_rational_coeffs(v: VectorField) -> list[RationalExpr]:
    return [lift(EpsSeries.from_levels(list(comp.coeffs), SOL_ORDER))
            for comp in v.components()]


def check_invariant(v: VectorField, inv: ApproxInvariant):
    """Apply the field to J = J0 + eps*J1 and test the result is o(eps).

    Returns (holds, residual as a RationalExpr).
    """
    total = inv.combined()
    coeffs = field_as_rational_coeffs(v)
    residual = lift(Poly.zero())
    for coeff, var in zip(coeffs, (X, T, W)):
        residual = residual + coeff * rational_diff(total, var)
    return is_o_eps(residual), residual


# ---------------------------------------------------------------------------
# the published invariant table


def _basis_fields() -> dict[str, VectorField]:
    return dict(reference_gardner_basis(order=1))


def _combo(coeffs: dict) -> VectorField:
    fields = _basis_fields()
    out = None
    for name, coef in coeffs.items():
        piece = fields[name].scale(coef)
        out = piece if out is None else out + piece
    return out


def reference_invariant_rows() -> list[dict]:
    """Every row of the published reduction table, with case splits spelled
    out and all expressions built as exact rational data."""
    x, t, w = _X, _T, _W
    al, be, ga = Poly.var(ALPHA), Poly.var(BETA), Poly.var(GAMMA)
    zero = lift(Poly.zero())

    def inv(j0_num, j0_den=None, j1_num=None, j1_den=None):
        j0 = lift(j0_num, j0_den)
        j1 = lift(j1_num if j1_num is not None else Poly.zero(), j1_den)
        return ApproxInvariant(j0=j0, j1=j1)

    A = 6 * ga * t + al  # recurring denominator in the last row

    # F(x, t, w) as printed: x*w*(-1 - 2g + 3a/A) + x^2*(3ag/(2A^2) - (g^2+g)/A)
    F_primary = (lift(x * w) * (lift(-1 - 2 * ga) + lift(3 * al, A))
                 + lift(x * x) * (lift(3 * al * ga, 2 * A * A)
                                  - lift(ga * ga + ga, A)))
    # alternative reading of the same display, with the final group not
    # multiplied by x^2 (the printed source is ambiguous here)
    F_alternative = (lift(x * w) * (lift(-1 - 2 * ga) + lift(3 * al, A))
                     + lift(x * x) * lift(3 * al * ga, 2 * A * A)
                     - lift(ga * ga + ga, A))
    G_expr = lift(-(8 * ga * t ** 3 + 2 * al * t * t - be * t * x), be)
    H_expr = lift(-(ga * (1 + 2 * ga) * t * t), 2 * be) \
        + lift(2 * (1 - ga) * t * w)

    def rational_inv(j0: RationalExpr, j1: RationalExpr) -> ApproxInvariant:
        return ApproxInvariant(j0=j0, j1=j1)

    rows = [
        {"operator": "v1", "field": _combo({"v1": 1}), "cases": [
            {"condition": "", "invariants": [inv(t), inv(w)]}]},
        {"operator": "v2", "field": _combo({"v2": 1}), "cases": [
            {"condition": "", "invariants": [inv(x), inv(w)]}]},
        {"operator": "v3", "field": _combo({"v3": 1}), "cases": [
            {"condition": "", "invariants": [
                inv(t),
                rational_inv(lift(x + 6 * t * w),
                             lift(-(12 * x * w * t + x * x), 6 * t))]}]},
        {"operator": "v4", "field": _combo({"v4": 1}), "cases": [
            {"condition": "", "invariants": [inv(t), inv(w)]}]},
        {"operator": "v5", "field": _combo({"v5": 1}), "cases": [
            {"condition": "", "invariants": [inv(x), inv(w)]}]},
        {"operator": "v6", "field": _combo({"v6": 1}), "cases": [
            {"condition": "", "invariants": [inv(t), inv(x + 6 * t * w)]}]},
        {"operator": "v7", "field": _combo({"v7": 1}), "cases": [
            {"condition": "", "invariants": [
                rational_inv(lift(t, x ** 3), zero), inv(x * x * w)]}]},
        {"operator": "v2 + alpha*v6",
         "field": _combo({"v2": 1, "v6": al}), "cases": [
            {"condition": "", "invariants": [
                inv(x, None, -3 * al * t * t), inv(w, None, al * t)]}]},
        {"operator": "v5 + alpha*v1", "field": None, "cases": [
            {"condition": "alpha != 0",
             "field": _combo({"v5": 1, "v1": al}),
             "invariants": [inv(al * t, None, -x), inv(w)]},
            {"condition": "alpha = 0",
             "field": _combo({"v5": 1}),
             "invariants": [inv(x), inv(w)]}]},
        {"operator": "v3 + alpha*v2 + beta*v5",
         "field": _combo({"v3": 1, "v2": al, "v5": be}), "cases": [
            {"condition": "", "invariants": [
                inv(3 * t * t - al * x, None, -be * x),
                inv(t + al * w, None,
                    -Fraction(1, 3) * x - 2 * t * w + be * w)]}]},
        {"operator": "v6 + alpha*v1 + beta*v5", "field": None, "cases": [
            {"condition": "alpha != 0",
             "field": _combo({"v6": 1, "v1": al, "v5": be}),
             "invariants": [inv(al * t, None, -be * x),
                            inv(al * w, None, x)]},
            {"condition": "alpha = 0",
             "field": _combo({"v6": 1, "v5": be}),
             "invariants": [inv(3 * t * t - be * x), inv(t + be * w)]}]},
        {"operator": "v7 + alpha*v1 + beta*v2 + gamma*v3",
         "field": None, "cases": [
            {"condition": "alpha = beta = gamma = 0",
             "field": _combo({"v7": 1}),
             "invariants": [rational_inv(lift(t, x ** 3), zero),
                            inv(x * x * w)]},
            {"condition": "beta = 0, alpha^2 + gamma^2 != 0",
             "field": _combo({"v7": 1, "v1": al, "v3": ga}),
             "invariants": [
                 rational_inv(lift(t), lift(-3 * t * x, A)),
                 rational_inv(lift(ga * (x + 6 * t * w) + al * w),
                              F_primary)],
             "note": "F display read with the whole second group times x^2"},
            {"condition": "beta != 0",
             "field": _combo({"v7": 1, "v1": al, "v2": be, "v3": ga}),
             "invariants": [
                 rational_inv(lift(al * t - be * x + 3 * ga * t * t), G_expr),
                 rational_inv(lift(be * w + ga * t), H_expr)]}]},
    ]
    rows.append({
        "operator": "v7 + alpha*v1 + gamma*v3 (alternative F reading)",
        "field": None,
        "informational": True,
        "cases": [
            {"condition": "beta = 0, alpha^2 + gamma^2 != 0",
             "field": _combo({"v7": 1, "v1": al, "v3": ga}),
             "invariants": [
                 rational_inv(lift(ga * (x + 6 * t * w) + al * w),
                              F_alternative)],
             "note": "F display read with the final group outside x^2"}]})
    return rows


def check_all_table3(corrupt: tuple | None = None) -> dict:
    """Audit every row (and every case split) of the published invariant
    table; discrepancies are reported with exact residuals and, where the
    low-degree re-solve finds one, a suggested correction.

    ``corrupt=(row_index, case_index)`` flips a sign in one invariant before
    checking; used as a negative control.
    """
    rows_out = []
    errata = 0
    for ri, row in enumerate(reference_invariant_rows()):
        cases_out = []
        for ci, case in enumerate(row["cases"]):
            field = case.get("field") or row["field"]
            invariants = list(case["invariants"])
            if corrupt == (ri, ci):
                bad = invariants[-1]
                invariants[-1] = ApproxInvariant(
                    j0=bad.j0 + lift(_T * _W), j1=bad.j1)
            verdicts = []
            for inv in invariants:
                holds, residual = check_invariant(field, inv)
                verdicts.append({
                    "invariant": inv.render(),
                    "holds": holds,
                    "residual": None if holds else residual.render(),
                })
            ok = all(v["holds"] for v in verdicts)
            entry = {
                "condition": case.get("condition", ""),
                "verdict": "confirmed" if ok else "erratum",
                "invariants": verdicts,
            }
            if note := case.get("note"):
                entry["note"] = note
            if not ok and not row.get("informational"):
                errata += 1
                entry["suggested"] = resolve_invariants(field)
            if not ok and row.get("informational"):
                entry["verdict"] = "refuted reading"
            cases_out.append(entry)
        rows_out.append({
            "operator": row["operator"],
            "informational": bool(row.get("informational")),
            "cases": cases_out,
        })
    return {
        "rows": rows_out,
        "errata_count": errata,
        "verdict": "pass" if errata == 0 else "erratum",
    }


def resolve_invariants(v: VectorField, degree: int = 2,
                       max_suggestions: int = 2) -> list[str]:
    """Low-degree re-solve of X(J) = o(eps) with polynomial J0, J1.

    Returns rendered nonconstant solutions in a deterministic order,
    preferring candidates with nonconstant order-zero part and skipping
    candidates whose gradient is functionally dependent on an earlier pick.
    """
    monos = monomials_xtw(degree)
    n_unknowns = []
    m_unknowns = []
    N = Poly.zero()
    M = Poly.zero()
    for k, mono in enumerate(monos):
        un = param(f"invN_{k:03d}")
        um = param(f"invM_{k:03d}")
        n_unknowns.append(un)
        m_unknowns.append(um)
        N = N + Poly.var(un) * mono
        M = M + Poly.var(um) * mono
    xi0, tau0, eta0 = (c.level(0) for c in v.components())
    xi1, tau1, eta1 = (c.level(1) for c in v.components())

    def apply0(p):
        return xi0 * p.diff(X) + tau0 * p.diff(T) + eta0 * p.diff(W)

    def apply1(p):
        return xi1 * p.diff(X) + tau1 * p.diff(T) + eta1 * p.diff(W)

    system = DeterminingSystem(unknowns=n_unknowns + m_unknowns)
    system.add_from_poly(apply0(N))
    system.add_from_poly(apply0(M) + apply1(N))
    system.dedup()
    space = system.solve()

    candidates = []
    for vec in space.basis:
        assign = space.assignment(vec)
        n_poly = Poly.zero()
        m_poly = Poly.zero()
        for k, mono in enumerate(monos):
            n_poly = n_poly + assign.get(n_unknowns[k], Fraction(0)) * mono
            m_poly = m_poly + assign.get(m_unknowns[k], Fraction(0)) * mono
        if n_poly.is_constant() and m_poly.is_constant():
            continue
        candidates.append((n_poly, m_poly))
    candidates.sort(key=lambda nm: (nm[0].is_constant(), ))

    suggestions = []
    picked_gradients: list[list[Poly]] = []
    for n_poly, m_poly in candidates:
        grad = [n_poly.diff(X), n_poly.diff(T), n_poly.diff(W)]
        if any(not g.is_zero() for g in grad):
            if any(_gradients_proportional(grad, g0)
                   for g0 in picked_gradients):
                continue
            picked_gradients.append(grad)
        suggestions.append(
            ApproxInvariant(j0=lift(n_poly), j1=lift(m_poly)).render())
        if len(suggestions) >= max_suggestions:
            break
    return suggestions


def _gradients_proportional(a: list[Poly], b: list[Poly]) -> bool:
    for i in range(3):
        for j in range(i + 1, 3):
            if not (a[i] * b[j] - a[j] * b[i]).is_zero():
                return False
    return True


# ---------------------------------------------------------------------------
# solution candidates and residuals


@dataclass
class SolutionCandidate:
    """A proposed w(x, t) including the small parameter and free constants."""

    expr: RationalExpr
    constraints: list = dc_field(default_factory=list)
    label: str = ""


def residual(candidate: SolutionCandidate,
             use_chain: bool = False) -> RationalExpr:
    """Exact residual of w_t - 6 (w + eps w^2) w_x + w_xxx at the candidate.

    With ``use_chain`` the symbol F is treated as an unknown function of t
    (its derivative is the symbol Ft), so reduction to an ordinary
    differential equation can be read off the result.
    """
    w = candidate.expr
    w_t = rational_diff(w, T, use_chain)
    w_x = rational_diff(w, X, use_chain)
    w_xxx = rational_diff(rational_diff(w_x, X, use_chain), X, use_chain)
    return w_t - 6 * (w + eps_times(w * w)) * w_x + w_xxx


def linear_drift_candidate() -> SolutionCandidate:
    """w = -eps*x, the translation-Galilean invariant solution."""
    return SolutionCandidate(expr=with_eps(Poly.zero(), -_X),
                             label="w = -eps*x")


def galilean_w0() -> RationalExpr:
    """W = (c - x) / (6t), the unperturbed Galilean-invariant solution."""
    return lift(Poly.var(C_LOW) - _X, 6 * _T)


# ---------------------------------------------------------------------------
# the Galilean reduction


@dataclass
class GalileanReduction:
    ks: list
    c: Poly
    x0_annihilates: bool
    k3_removed: bool
    pde_rhs: RationalExpr          # right side of 6t * v_x = ...
    transformed_matches: bool      # v_z + (k1 + k4 c + 6 k2 z)/(6y) + 2z = 0
    transformed_rhs_zy: RationalExpr
    v_particular: RationalExpr     # in the original (x, t) variables
    v_particular_zy: RationalExpr


def galilean_reduce(k1=None, k2=None, k3=None, k4=None, c=None) -> GalileanReduction:
    """Derive the first-order condition for an invariant perturbation
    w = W + eps*v(x,t) of the Galilean solution, change variables to
    z = (c-x)/(6t), y = t, and integrate polynomially in z.

    The perturbing field is v3 + k1 v4 + k2 v5 + k3 v6 + k4 v7; k3 drops out
    of the condition.
    """
    ks = [Poly.const(v) if v is not None else Poly.var(K[i])
          for i, v in enumerate((k1, k2, k3, k4))]
    c_poly = Poly.const(c) if c is not None else Poly.var(C_LOW)
    fields = _basis_fields()
    x_eps = fields["v3"]
    for kp, name in zip(ks, ("v4", "v5", "v6", "v7")):
        x_eps = x_eps + fields[name].scale(kp)

    big_w = RationalExpr(EpsSeries.lift(c_poly - _X, SOL_ORDER), 6 * _T)
    w_minus = lift(_W) - big_w

    # apply the full field; level 0 must vanish identically
    coeffs = field_as_rational_coeffs(x_eps)
    applied = lift(Poly.zero())
    for coeff, var in zip(coeffs, (X, T, W)):
        applied = applied + coeff * rational_diff(w_minus, var)
    x0_ok = applied.num.level(0).is_zero()

    # condition at level 1, with w on the invariant surface (w -> W)
    level1 = RationalExpr(EpsSeries.lift(applied.num.level(1), SOL_ORDER),
                          applied.den)
    pde_rhs = rational_sub(level1, W, c_poly - _X, 6 * _T)
    k3_removed = K[2] not in _poly_symbols(pde_rhs)

    # transform to z = (c - x)/(6t), y = t:   6t v_x = rhs  <=>  v_z = -rhs(z,y)
    zs, ys = param("z"), param("y")
    in_zy = rational_sub(
        rational_sub(pde_rhs, X, c_poly - 6 * Poly.var(ys) * Poly.var(zs),
                     Poly.const(1)),
        T, Poly.var(ys), Poly.const(1))
    claimed = (lift(ks[0] + ks[3] * c_poly + 6 * ks[1] * Poly.var(zs),
                    6 * Poly.var(ys)) + lift(2 * Poly.var(zs)))
    transformed_matches = (in_zy - claimed).is_zero()

    # integrate v_z = -rhs(z, y) in z (polynomial in z, rational in y)
    v_zy = _integrate_in_z(in_zy, zs)
    v_xy = rational_sub(
        rational_sub(v_zy, zs, c_poly - _X, 6 * _T), ys, _T, Poly.const(1))
    return GalileanReduction(
        ks=ks, c=c_poly, x0_annihilates=x0_ok, k3_removed=k3_removed,
        pde_rhs=pde_rhs, transformed_matches=transformed_matches,
        transformed_rhs_zy=in_zy, v_particular=v_xy, v_particular_zy=v_zy)


def _poly_symbols(r: RationalExpr) -> set:
    out = r.den.symbols()
    for cpoly in r.num.coeffs:
        out |= cpoly.symbols()
    return out


def _integrate_in_z(rhs: RationalExpr, zs: Symbol) -> RationalExpr:
    """- integral of rhs dz, for rhs polynomial in z over a z-free
    denominator."""
    if zs in rhs.den.symbols():
        raise ValueError("denominator depends on z; cannot integrate "
                         "polynomially")
    out_levels = []
    for cpoly in rhs.num.coeffs:
        acc = Poly.zero()
        for mono, coeff in cpoly.terms.items():
            e = 0
            rest = []
            for s, ex in mono:
                if s is zs:
                    e = ex
                else:
                    rest.append((s, ex))
            piece = Poly({tuple(rest): coeff * Fraction(-1, e + 1)})
            acc = acc + piece * Poly.var(zs) ** (e + 1)
        out_levels.append(acc)
    return RationalExpr(EpsSeries(out_levels), rhs.den)


@dataclass
class GalileanClosure:
    reduction: GalileanReduction
    ode_confirmed: bool            # eps^1 residual reduces to t F' + F = 0
    ode_leftover: str | None
    solution: SolutionCandidate    # the closed form with F = C/t
    residual_o_eps: bool
    residual_expr: RationalExpr


def galilean_close(reduction: GalileanReduction) -> GalileanClosure:
    """Insert w = W + eps*(v + F(t)) into the perturbed equation, confirm the
    eps^1 coefficient reduces to t*F' + F = 0, and return the closed form
    with F = C/t together with its residual verdict."""
    big_w = RationalExpr(EpsSeries.lift(reduction.c - _X, SOL_ORDER), 6 * _T)
    v_general = reduction.v_particular + lift(Poly.var(F_SYM))
    trial = SolutionCandidate(
        expr=big_w + eps_times(v_general),
        label="w = W + eps*(v + F(t))")
    res = residual(trial, use_chain=True)
    level1 = res.num.level(1)
    split = collect_coefficients(level1, [F_SYM, FT_SYM, FTT_SYM])
    f_mono = ((F_SYM, 1),)
    ft_mono = ((FT_SYM, 1),)
    c_f = split.get(f_mono, Poly.zero())
    c_ft = split.get(ft_mono, Poly.zero())
    leftover = level1 - c_f * Poly.var(F_SYM) - c_ft * Poly.var(FT_SYM)
    ode_ok = leftover.is_zero() and (c_ft == c_f * _T) and not c_f.is_zero()
    # F = C/t satisfies t F' + F = 0; build the explicit closed form
    v_closed = reduction.v_particular + lift(Poly.var(C_BIG), _T)
    closed = SolutionCandidate(
        expr=big_w + eps_times(v_closed),
        constraints=["t != 0"],
        label="approximately Galilean-invariant solution")
    res_closed = residual(closed)
    return GalileanClosure(
        reduction=reduction,
        ode_confirmed=ode_ok,
        ode_leftover=None if ode_ok else leftover.render(),
        solution=closed,
        residual_o_eps=is_o_eps(res_closed),
        residual_expr=res_closed)


def galilean_invariance_roundtrip(closure: GalileanClosure) -> bool:
    """Check the derived v satisfies the level-1 invariance condition
    exactly: applying the perturbing field to w - W - eps*v is o(eps) on the
    perturbed surface."""
    red = closure.reduction
    fields = _basis_fields()
    x_eps = fields["v3"]
    for kp, name in zip(red.ks, ("v4", "v5", "v6", "v7")):
        x_eps = x_eps + fields[name].scale(kp)
    big_w = RationalExpr(EpsSeries.lift(red.c - _X, SOL_ORDER), 6 * _T)
    surface = lift(_W) - big_w - eps_times(red.v_particular
                                           + lift(Poly.var(C_BIG), _T))
    coeffs = field_as_rational_coeffs(x_eps)
    applied = lift(Poly.zero())
    for coeff, var in zip(coeffs, (X, T, W)):
        applied = applied + coeff * rational_diff(surface, var)
    # restrict to the surface w = W + eps*(v + C/t): substitute for w
    v_full = red.v_particular + lift(Poly.var(C_BIG), _T)
    w_val = big_w + eps_times(v_full)
    out = lift(Poly.zero())
    for lvl, cpoly in enumerate(applied.num.coeffs):
        piece = _sub_rational_series(cpoly, W, w_val)
        out = out + eps_times(piece, lvl)
    return out.num.level(0).is_zero() and out.num.level(1).is_zero()


def _sub_rational_series(p: Poly, sym: Symbol,
                         value: RationalExpr) -> RationalExpr:
    """Substitute a full rational series for a symbol in a polynomial."""
    k_max = p.degree_in(sym)
    out = lift(Poly.zero())
    pw: dict[int, RationalExpr] = {0: lift(Poly.const(1)), 1: value}
    for e in range(2, k_max + 1):
        pw[e] = pw[e - 1] * value
    buckets: dict[int, Poly] = {}
    for m, cf in p.terms.items():
        e = 0
        rest = []
        for s, ex in m:
            if s is sym:
                e = ex
            else:
                rest.append((s, ex))
        buckets[e] = buckets.get(e, Poly.zero()) + Poly({tuple(rest): cf})
    for e, piece in buckets.items():
        out = out + lift(piece) * pw[e]
    return out


# ---------------------------------------------------------------------------
# the transformation identity between the two equations


def gardner_transform_check() -> dict:
    """u = w + ep w_x + ep^2 w^2 maps solutions of the perturbed equation to
    solutions of the unperturbed one; the exact polynomial form is

        u_t - 6 u u_x + u_xxx = (1 + ep D_x + 2 ep^2 w) G,

    with G the perturbed equation written with ep^2 as its parameter.  The
    check is carried out with the parameter exact (a plain symbol), no
    truncation anywhere.
    """
    ep = Poly.var(param("ep"))
    wp, wx = _W, Poly.var(jet(1, 0))
    u = wp + ep * wx + ep * ep * wp * wp
    du_t = total_derivative(u, "t")
    du_x = total_derivative(u, "x")
    du_xxx = total_derivative(total_derivative(du_x, "x"), "x")
    lhs = du_t - 6 * u * du_x + du_xxx

    g_eq = (Poly.var(jet(0, 1)) - 6 * (wp + ep * ep * wp * wp) * wx
            + Poly.var(jet(3, 0)))
    rhs = g_eq + ep * total_derivative(g_eq, "x") + 2 * ep * ep * wp * g_eq

    diff = lhs - rhs
    return {
        "holds": diff.is_zero(),
        "difference": diff.render(),
        "lhs": lhs.render(),
        "rhs_factored": "(1 + ep*D_x + 2*ep^2*w) applied to the perturbed "
                        "equation in ep^2",
    }
