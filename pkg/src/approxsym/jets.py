"""Jet coordinates for one dependent variable w(x, t), total derivatives,
prolongation of point vector fields, and restriction to a solution manifold.

Jet symbols are named ``w_`` followed by one ``x`` per x-derivative and one
``t`` per t-derivative (w_x, w_xt, w_xxx, ...).  A jet index is the pair
(nx, nt); (0, 0) is w itself.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .algebra import EpsSeries, Poly, Symbol, T, W, X

# Restriction of a third-order evolution equation substitutes the solved jet
# family w_t, w_xt, w_xxt; the last of those needs two total x-derivatives of
# the replacement, which touch the pure 5th-order jet.  Order 4 is reached
# already inside third prolongations, before any manifold substitution.
MAX_JET_ORDER = 5

JetIndex = tuple  # (nx, nt)


class JetOrderError(ValueError):
    """A jet beyond the configured maximal order would be required."""

    def __init__(self, index: JetIndex, max_order: int):
        self.index = index
        super().__init__(
            f"jet w_{'x' * index[0]}{'t' * index[1]} exceeds max order {max_order}")


def jet(nx: int, nt: int) -> Symbol:
    """The jet symbol for nx x-derivatives and nt t-derivatives of w."""
    if nx < 0 or nt < 0:
        raise ValueError("negative derivative counts")
    if nx == 0 and nt == 0:
        return W
    return Symbol("w_" + "x" * nx + "t" * nt, "jet", jet_index=(nx, nt))


def jet_index(sym: Symbol) -> JetIndex | None:
    if sym is W:
        return (0, 0)
    return sym.jet_index


# pre-register every jet up to the maximal order so rendering order is fixed
for _total in range(1, MAX_JET_ORDER + 1):
    for _nt in range(0, _total + 1):
        jet(_total - _nt, _nt)


def total_derivative(e, direction: str, max_order: int = MAX_JET_ORDER):
    """Total derivative D_x or D_t on a Poly or EpsSeries over jets.

    D(e) = de/d(direction) + sum over jets J of w_{J+direction} * de/dw_J,
    with w itself counted among the jets.
    """
    if isinstance(e, EpsSeries):
        return EpsSeries([total_derivative(c, direction, max_order)
                          for c in e.coeffs])
    if direction == "x":
        base, step = X, (1, 0)
    elif direction == "t":
        base, step = T, (0, 1)
    else:
        raise ValueError(f"unknown direction {direction!r}")
    out = e.diff(base)
    for sym in e.symbols():
        idx = jet_index(sym)
        if idx is None:
            continue
        nxt = (idx[0] + step[0], idx[1] + step[1])
        if nxt[0] + nxt[1] > max_order:
            raise JetOrderError(nxt, max_order)
        out = out + e.diff(sym) * Poly.var(jet(*nxt))
    return out


@dataclass(frozen=True)
class VectorField:
    """Point vector field xi*d/dx + tau*d/dt + eta*d/dw with series
    coefficients depending on (x, t, w) only."""

    xi: EpsSeries
    tau: EpsSeries
    eta: EpsSeries

    def __post_init__(self):
        if not (self.xi.order == self.tau.order == self.eta.order):
            raise ValueError("component truncation orders differ")

    @property
    def order(self) -> int:
        return self.xi.order

    @staticmethod
    def make(xi, tau, eta, order: int = 1) -> "VectorField":
        def to_series(v):
            if isinstance(v, EpsSeries):
                return v
            return EpsSeries.lift(v, order)
        return VectorField(to_series(xi), to_series(tau), to_series(eta))

    def is_zero(self) -> bool:
        return self.xi.is_zero() and self.tau.is_zero() and self.eta.is_zero()

    def components(self) -> tuple[EpsSeries, EpsSeries, EpsSeries]:
        return (self.xi, self.tau, self.eta)

    def __add__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.xi + other.xi, self.tau + other.tau,
                           self.eta + other.eta)

    def __sub__(self, other: "VectorField") -> "VectorField":
        return VectorField(self.xi - other.xi, self.tau - other.tau,
                           self.eta - other.eta)

    def __neg__(self) -> "VectorField":
        return VectorField(-self.xi, -self.tau, -self.eta)

    def scale(self, c) -> "VectorField":
        return VectorField(self.xi * c, self.tau * c, self.eta * c)

    def shift_eps(self, k: int = 1) -> "VectorField":
        """Multiply the whole field by eps^k (truncating)."""
        return VectorField(self.xi.shift(k), self.tau.shift(k), self.eta.shift(k))

    def apply_to(self, f) -> EpsSeries:
        """Apply the field as a first-order operator to a scalar in (x, t, w)."""
        if isinstance(f, Poly):
            f = EpsSeries.lift(f, self.order)
        return (self.xi * f.diff(X) + self.tau * f.diff(T)
                + self.eta * f.diff(W))

    def render(self) -> str:
        parts = []
        for comp, name in ((self.xi, "d/dx"), (self.tau, "d/dt"),
                           (self.eta, "d/dw")):
            if not comp.is_zero():
                parts.append(f"({comp.render()}) {name}")
        return " + ".join(parts) if parts else "0"

    __str__ = render


@dataclass
class ProlongedField:
    """A vector field together with its jet coefficients up to some order."""

    base: VectorField
    order: int
    jet_coeffs: dict = field(default_factory=dict)  # JetIndex -> EpsSeries

    def coeff(self, nx: int, nt: int) -> EpsSeries:
        return self.jet_coeffs[(nx, nt)]


def prolong(v: VectorField, order: int,
            max_order: int = MAX_JET_ORDER) -> ProlongedField:
    """Prolong a point field to jet coordinates via the characteristic form.

    With Q = eta - xi*w_x - tau*w_t, the coefficient attached to d/dw_J is
    D_J(Q) + xi*w_{J+x} + tau*w_{J+t}; this is uniform in the jet order.
    """
    if order > max_order:
        raise JetOrderError((order, 0), max_order)
    n = v.order
    wx = Poly.var(jet(1, 0))
    wt = Poly.var(jet(0, 1))
    q = v.eta - v.xi * wx - v.tau * wt
    coeffs: dict = {(0, 0): v.eta}
    # D_J(Q) built by walking x-derivatives first, then t-derivatives
    dq: dict = {(0, 0): q}
    for total in range(1, order + 1):
        for nt in range(0, total + 1):
            nx = total - nt
            prev = (nx - 1, nt) if nx else (nx, nt - 1)
            dq[(nx, nt)] = total_derivative(dq[prev], "x" if nx else "t",
                                            max_order)
            up_x = Poly.var(jet(nx + 1, nt))
            up_t = Poly.var(jet(nx, nt + 1))
            coeffs[(nx, nt)] = dq[(nx, nt)] + v.xi * up_x + v.tau * up_t
    return ProlongedField(base=v, order=order, jet_coeffs=coeffs)


def apply_prolonged(pv: ProlongedField, F: EpsSeries) -> EpsSeries:
    """Directional derivative of a jet expression along a prolonged field."""
    needed = set()
    for sym in F.symbols():
        idx = jet_index(sym)
        if idx is not None:
            needed.add(idx)
    too_deep = [idx for idx in needed if idx[0] + idx[1] > pv.order]
    if too_deep:
        raise JetOrderError(sorted(too_deep)[-1], pv.order)
    out = pv.base.xi * F.diff(X) + pv.base.tau * F.diff(T)
    for idx in sorted(needed):
        out = out + pv.jet_coeffs[idx] * F.diff(jet(*idx))
    return out


class SubstitutionCycleError(ValueError):
    pass


@dataclass(frozen=True)
class SolutionManifold:
    """An evolution equation solved for one jet (w_t here): on the manifold
    every t-derivative of w is a consequence of the replacement."""

    solved_jet: JetIndex
    replacement: EpsSeries

    def __post_init__(self):
        nx0, nt0 = self.solved_jet
        for sym in self.replacement.symbols():
            idx = jet_index(sym)
            if idx is not None and idx[0] >= nx0 and idx[1] >= nt0:
                raise SubstitutionCycleError(
                    f"replacement mentions {sym.name}, a derivative of the "
                    f"solved jet")


def restrict_to_manifold(e: EpsSeries, m: SolutionManifold,
                         max_order: int = MAX_JET_ORDER) -> EpsSeries:
    """Eliminate the solved-jet family by repeated substitution of the
    replacement and its total derivatives."""
    if m.solved_jet != (0, 1):
        raise ValueError("only manifolds solved for w_t are supported")

    reps: dict = {(0, 1): m.replacement}

    def rep(idx: JetIndex) -> EpsSeries:
        if idx in reps:
            return reps[idx]
        nx, nt = idx
        if nt == 1:
            value = total_derivative(rep((nx - 1, 1)), "x", max_order)
        else:
            lower = rep((nx, nt - 1))
            value = _substitute_all(total_derivative(lower, "t", max_order))
        reps[idx] = value
        return value

    def _substitute_all(expr: EpsSeries) -> EpsSeries:
        while True:
            t_jets = sorted(
                idx for idx in (jet_index(s) for s in expr.symbols())
                if idx is not None and idx[1] >= 1)
            if not t_jets:
                return expr
            for idx in reversed(t_jets):
                expr = expr.substitute(jet(*idx), rep(idx))

    return _substitute_all(e)
