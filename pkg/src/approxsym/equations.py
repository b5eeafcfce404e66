"""The governing equations: the unperturbed third-order evolution equation
(KdV) and its first-order perturbation (Gardner), plus their solution
manifolds solved for w_t."""

from __future__ import annotations

from .algebra import EpsSeries, Poly, W
from .jets import SolutionManifold, jet

WX = Poly.var(jet(1, 0))
WT = Poly.var(jet(0, 1))
WXXX = Poly.var(jet(3, 0))
WP = Poly.var(W)


def kdv_poly() -> Poly:
    """w_t - 6 w w_x + w_xxx as a plain jet polynomial."""
    return WT - 6 * WP * WX + WXXX


def perturbation_poly() -> Poly:
    """The order-eps part of the perturbed equation: -6 w^2 w_x."""
    return -6 * WP * WP * WX


def kdv(order: int = 0) -> EpsSeries:
    return EpsSeries.lift(kdv_poly(), order)


def gardner(order: int = 1) -> EpsSeries:
    """w_t - 6 (w + eps w^2) w_x + w_xxx, truncated at the given order."""
    return EpsSeries.from_levels([kdv_poly(), perturbation_poly()], order)


def evolution_manifold(F: EpsSeries) -> SolutionManifold:
    """Solve F = 0 for w_t.  Requires F to be w_t plus w_t-free terms."""
    wt = jet(0, 1)
    dF = F.diff(wt)
    if not (dF.level(0) == Poly.const(1)
            and all(c.is_zero() for c in dF.coeffs[1:])):
        raise ValueError("equation is not in evolution form with unit w_t")
    replacement = EpsSeries.lift(WT, F.order) - F
    return SolutionManifold(solved_jet=(0, 1), replacement=replacement)


def kdv_manifold(order: int = 0) -> SolutionManifold:
    return evolution_manifold(kdv(order))


def gardner_manifold(order: int = 1) -> SolutionManifold:
    return evolution_manifold(gardner(order))
