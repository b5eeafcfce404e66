"""Lie-algebraic structure of the seven-dimensional approximate algebra:
commutators modulo eps^2, solvability, the adjoint representation through
terminating Lie series, and the one-dimensional optimal system replay."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial

from .algebra import Poly, param
from .jets import VectorField
from .solver import (in_span, primitive, reference_gardner_basis, rref,
                     solve_in_span)

MU = param("mu")
NU = param("nu")


def bracket(v: VectorField, w: VectorField) -> VectorField:
    """Commutator of two point fields, components truncated at their order."""
    if v.order != w.order:
        raise ValueError("truncation order mismatch in bracket")
    return VectorField(
        v.apply_to(w.xi) - w.apply_to(v.xi),
        v.apply_to(w.tau) - w.apply_to(v.tau),
        v.apply_to(w.eta) - w.apply_to(v.eta))


class ClosureError(ValueError):
    def __init__(self, i: int, j: int, residual: VectorField):
        self.pair = (i, j)
        self.residual = residual
        super().__init__(
            f"bracket of basis elements {i + 1}, {j + 1} leaves the span; "
            f"residual {residual}")


@dataclass
class LieAlgebra:
    """Finite basis of vector fields with rational structure constants
    computed modulo eps^(order+1)."""

    labels: list
    basis: list
    structure: dict = field(default_factory=dict)  # (i, j) -> coord tuple

    @property
    def dim(self) -> int:
        return len(self.basis)

    @staticmethod
    def from_fields(labels: list, fields: list) -> "LieAlgebra":
        alg = LieAlgebra(labels=list(labels), basis=list(fields))
        n = alg.dim
        for i in range(n):
            for j in range(n):
                br = bracket(fields[i], fields[j])
                coords = in_span(fields, br)
                if coords is None:
                    raise ClosureError(i, j, br)
                alg.structure[(i, j)] = tuple(coords)
        return alg

    def bracket_coords(self, a: list, b: list) -> list:
        """Structure-constant expansion of the bracket of two coordinate
        vectors whose entries may be rationals or Polys."""
        out = [Poly.zero() for _ in range(self.dim)]
        for i in range(self.dim):
            ai = a[i]
            if _is_zero_entry(ai):
                continue
            for j in range(self.dim):
                bj = b[j]
                if _is_zero_entry(bj):
                    continue
                cij = self.structure[(i, j)]
                prod = _entry_mul(ai, bj)
                for k in range(self.dim):
                    if cij[k]:
                        out[k] = out[k] + prod * cij[k]
        return out

    def check_antisymmetry(self) -> bool:
        n = self.dim
        return all(
            all(self.structure[(i, j)][k] == -self.structure[(j, i)][k]
                for k in range(n))
            for i in range(n) for j in range(n))

    def check_jacobi(self) -> bool:
        """Jacobi identity on all basis triples, through the structure
        constants (equivalently: on the fields modulo the truncation)."""
        n = self.dim
        for i in range(n):
            ei = _unit(n, i)
            for j in range(n):
                ej = _unit(n, j)
                for k in range(n):
                    ek = _unit(n, k)
                    total = [Poly.zero()] * n
                    for a, b, c in ((ei, ej, ek), (ej, ek, ei), (ek, ei, ej)):
                        inner = self.bracket_coords(b, c)
                        term = self.bracket_coords(a, inner)
                        total = [x + y for x, y in zip(total, term)]
                    if any(not x.is_zero() for x in total):
                        return False
        return True

    def field_from_coords(self, coords: list) -> VectorField:
        out = self.basis[0].scale(0)
        for c, b in zip(coords, self.basis):
            if not _is_zero_entry(c):
                out = out + b.scale(c)
        return out

    def coords_render(self, coords, labels: list | None = None) -> str:
        """Render a coordinate vector as a combination of basis labels."""
        labels = labels or self.labels
        parts = []
        for c, name in zip(coords, labels):
            p = c if isinstance(c, Poly) else Poly.const(c)
            if p.is_zero():
                continue
            if p == Poly.const(1):
                term = name
            elif p == Poly.const(-1):
                term = f"-{name}"
            elif p.is_constant() or len(p.terms) == 1:
                term = f"{p.render()}*{name}"
            else:
                term = f"({p.render()})*{name}"
            if not parts:
                parts.append(term)
            else:
                parts.append(f" + {term}" if not term.startswith("-")
                             else f" - {term[1:]}")
        return "".join(parts) if parts else "0"


def _is_zero_entry(v) -> bool:
    if isinstance(v, Poly):
        return v.is_zero()
    return v == 0


def _entry_mul(a, b):
    pa = a if isinstance(a, Poly) else Poly.const(a)
    pb = b if isinstance(b, Poly) else Poly.const(b)
    return pa * pb


def _unit(n: int, i: int) -> list:
    return [Fraction(1) if j == i else Fraction(0) for j in range(n)]


def commutator_table(alg: LieAlgebra) -> list:
    """Entry (i, j) is the coordinate vector of [v_i, v_j]."""
    return [[list(alg.structure[(i, j)]) for j in range(alg.dim)]
            for i in range(alg.dim)]


# ---------------------------------------------------------------------------
# derived series and ideals


def _span_reduce(vectors: list) -> list:
    rows = [list(v) for v in vectors if any(x != 0 for x in v)]
    if not rows:
        return []
    reduced, _ = rref(rows)
    return [primitive(row) for row in reduced]


def derived_series(alg: LieAlgebra) -> list:
    """Successive derived subalgebras as (dimension, basis coordinate
    vectors), down to the zero algebra (or until stationary)."""
    current = [_unit(alg.dim, i) for i in range(alg.dim)]
    series = [(len(current), current)]
    while current:
        brackets = []
        for a in current:
            for b in current:
                v = alg.bracket_coords(a, b)
                brackets.append([x.constant_value() for x in v])
        nxt = _span_reduce(brackets)
        series.append((len(nxt), nxt))
        if len(nxt) == len(current):
            break
        current = nxt
    return series


def is_solvable(alg: LieAlgebra) -> bool:
    return derived_series(alg)[-1][0] == 0


def is_ideal_in(alg: LieAlgebra, sub: list, big: list) -> bool:
    """True when bracket(big, sub) stays inside the span of ``sub``."""
    sub_vectors = [list(v) for v in sub]
    for b in big:
        for s in sub:
            v = [x.constant_value() for x in alg.bracket_coords(b, s)]
            if any(v) and solve_in_span(sub_vectors, v) is None:
                return False
    return True


def ideal_chain_report(alg: LieAlgebra) -> list:
    """Verify the ascending chain of ideals
    0 < <v4> < <v4,v5> < <v4,v5,v6> < <v4..v7> < <v1,v4..v7>
      < <v1,v2,v4..v7> < g, each member an ideal in its successor."""
    chain_indices = [[], [3], [3, 4], [3, 4, 5], [3, 4, 5, 6],
                     [0, 3, 4, 5, 6], [0, 1, 3, 4, 5, 6],
                     list(range(alg.dim))]
    report = []
    for lower, upper in zip(chain_indices, chain_indices[1:]):
        sub = [_unit(alg.dim, i) for i in lower]
        big = [_unit(alg.dim, i) for i in upper]
        ok = True if not sub else is_ideal_in(alg, sub, big)
        report.append({
            "member": "<" + ",".join(alg.labels[i] for i in lower) + ">"
                      if lower else "0",
            "inside": "<" + ",".join(alg.labels[i] for i in upper) + ">",
            "is_ideal": ok,
        })
    return report


# ---------------------------------------------------------------------------
# adjoint representation


class AdjointSeriesError(RuntimeError):
    pass


@dataclass
class AdjointMap:
    """Matrix of Ad(exp(mu * v_i)) = exp(-mu * ad_i) on the algebra.

    ``columns[j]`` is the coordinate vector (Poly in the parameter) of the
    image of basis element j.  The Lie series terminates because ad is
    nilpotent here; the degree at which it terminated is recorded.
    """

    generator_index: int
    parameter: Poly
    columns: list
    termination_degree: int

    def apply(self, coords: list) -> list:
        n = len(self.columns)
        out = [Poly.zero() for _ in range(n)]
        for j in range(n):
            cj = coords[j]
            if _is_zero_entry(cj):
                continue
            for k in range(n):
                col = self.columns[j][k]
                if not col.is_zero():
                    out[k] = out[k] + _entry_mul(cj, col)
        return out

    def compose(self, other: "AdjointMap") -> list:
        """Columns of self o other (apply ``other`` first)."""
        return [self.apply(col) for col in other.columns]


def adjoint_map(alg: LieAlgebra, i: int, mu=None,
                max_terms: int | None = None) -> AdjointMap:
    """Terminating Lie series Ad(exp(mu v_i)) v_j =
    v_j - mu [v_i, v_j] + mu^2/2 [v_i, [v_i, v_j]] - ...

    Fails if the series has not terminated after dim + 1 terms, which would
    signal a non-nilpotent adjoint action.
    """
    n = alg.dim
    if max_terms is None:
        max_terms = n + 1
    mu_poly = mu if isinstance(mu, Poly) else (
        Poly.var(MU) if mu is None else Poly.const(mu))
    ei = _unit(n, i)
    columns = []
    termination = 0
    for j in range(n):
        acc = [Poly.const(x) for x in _unit(n, j)]
        current = [Poly.const(x) for x in _unit(n, j)]
        k = 0
        while True:
            current = alg.bracket_coords(ei, current)
            k += 1
            if all(c.is_zero() for c in current):
                break
            if k > max_terms:
                raise AdjointSeriesError(
                    f"Lie series for generator {i + 1} did not terminate "
                    f"within {max_terms} terms")
            coeff = (-mu_poly) ** k * Fraction(1, factorial(k))
            acc = [a + coeff * c for a, c in zip(acc, current)]
        termination = max(termination, k)
        columns.append(acc)
    return AdjointMap(generator_index=i, parameter=mu_poly, columns=columns,
                      termination_degree=termination)


def adjoint_table(alg: LieAlgebra) -> list:
    """Entry (i, j): coordinates (Polys in mu) of Ad(exp(mu v_i)) v_j."""
    table = []
    for i in range(alg.dim):
        ad = adjoint_map(alg, i)
        table.append([ad.columns[j] for j in range(alg.dim)])
    return table


# ---------------------------------------------------------------------------
# optimal system replay


def normalize_optimal(alg: LieAlgebra, coords: list,
                      script: list) -> tuple[list, list]:
    """Apply a composition of adjoint maps to a coordinate vector.

    ``script`` lists (generator_index, parameter) pairs, rightmost applied
    first, matching the conventional composition order.  A parameter may be
    a Poly, a rational, or a (numerator, denominator) pair of Polys; an
    identically-zero denominator is rejected, a nonconstant one is returned
    as a genericity side condition.
    """
    conditions = []
    current = [c if isinstance(c, Poly) else Poly.const(c) for c in coords]
    for gen_index, parameter in reversed(script):
        if isinstance(parameter, tuple):
            num, den = parameter
            den = den if isinstance(den, Poly) else Poly.const(den)
            if den.is_zero():
                raise ZeroDivisionError(
                    "identically-zero denominator in adjoint parameter")
            if not den.is_constant():
                conditions.append(f"{den.render()} != 0")
                raise NotImplementedError(
                    "non-constant denominators are not needed by the replay")
            mu_val = (num if isinstance(num, Poly) else Poly.const(num)) \
                * Fraction(1, den.constant_value())
        else:
            mu_val = parameter if isinstance(parameter, Poly) \
                else Poly.const(parameter)
        ad = adjoint_map(alg, gen_index, mu=mu_val)
        current = ad.apply(current)
    return current, conditions


def _a(i: int) -> Poly:
    return Poly.var(param(f"a{i}"))


def optimal_system_cases(alg: LieAlgebra) -> list:
    """The six nontrivial strata of the one-dimensional optimal system, each
    with its start vector, genericity conditions, adjoint script, and the
    claimed normal form."""
    one = Poly.const(1)
    zero = Poly.zero()
    a1, a2, a3, a4, a5, a6 = (_a(i) for i in range(1, 7))
    sixth = Fraction(1, 6)

    def c(*vals):
        return list(vals)

    return [
        {
            "name": "a7 nonzero (scaled to 1)",
            "conditions": ["a7 != 0"],
            "start": c(a1, a2, a3, a4, a5, a6, one),
            "script": [(0, a4 - 3 * a6 * a5), (1, a5 * Fraction(1, 3)),
                       (2, a6 * Fraction(-1, 2))],
            "claimed": c(a1 - 3 * a2 * a6 - 2 * a3 * a5, a2, a3, zero, zero,
                         zero, one),
            "representative": "v7 + alpha*v1 + beta*v2 + gamma*v3",
        },
        {
            "name": "a7 = 0, a3 nonzero (scaled to 1)",
            "conditions": ["a3 != 0"],
            "start": c(a1, a2, one, a4, a5, a6, zero),
            "script": [(1, a1 * sixth),
                       (4, (a1 * a6 + 2 * a4) * Fraction(1, 12)),
                       (6, a6 * Fraction(1, 2))],
            "claimed": c(zero, a2, one, zero,
                         (3 * a2 * a6 + 2 * a5) * Fraction(1, 2), zero, zero),
            "representative": "v3 + alpha*v2 + beta*v5",
        },
        {
            "name": "a3 = a7 = 0, a2 nonzero (scaled to 1)",
            "conditions": ["a2 != 0"],
            "start": c(a1, one, zero, a4, a5, a6, zero),
            "script": [(2, a1 * Fraction(-1, 6)),
                       (5, (a1 * a5 - 3 * a4) * Fraction(1, 18)),
                       (6, a5 * Fraction(-1, 3))],
            "claimed": c(zero, one, zero, zero, zero, a6, zero),
            "representative": "v2 + alpha*v6",
        },
        {
            "name": "a2 = a3 = a7 = 0, a6 nonzero (scaled to 1)",
            "conditions": ["a6 != 0"],
            "start": c(a1, zero, zero, a4, a5, one, zero),
            "script": [(1, a4 * sixth)],
            "claimed": c(a1, zero, zero, zero, a5, one, zero),
            "representative": "v6 + alpha*v1 + beta*v5",
        },
        {
            "name": "a2 = a3 = a6 = a7 = 0, a5 nonzero (scaled to 1)",
            "conditions": ["a5 != 0"],
            "start": c(a1, zero, zero, a4, one, zero, zero),
            "script": [(2, a4 * Fraction(-1, 6))],
            "claimed": c(a1, zero, zero, zero, one, zero, zero),
            "representative": "v5 + alpha*v1",
        },
        {
            "name": "a2 = a3 = a5 = a6 = a7 = 0, a1 nonzero (scaled to 1)",
            "conditions": ["a1 != 0"],
            "start": c(one, zero, zero, a4, zero, zero, zero),
            "script": [(6, -a4)],
            "claimed": c(one, zero, zero, zero, zero, zero, zero),
            "representative": "v1",
        },
    ]


OPTIMAL_REPRESENTATIVES = [
    "v1",
    "v4",
    "v2 + alpha*v6",
    "v3 + alpha*v2 + beta*v5",
    "v5 + alpha*v1",
    "v6 + alpha*v1 + beta*v5",
    "v7 + alpha*v1 + beta*v2 + gamma*v3",
]


def verify_optimal_system(alg: LieAlgebra) -> dict:
    """Replay every normalization of the optimal-system construction and
    compare with the claimed normal forms; also record the residual stratum
    (multiples of v4, fixed by the whole adjoint action)."""
    strata = []
    all_ok = True
    for case in optimal_system_cases(alg):
        computed, conditions = normalize_optimal(alg, case["start"],
                                                 case["script"])
        ok = all((x - (y if isinstance(y, Poly) else Poly.const(y))).is_zero()
                 for x, y in zip(computed, case["claimed"]))
        all_ok = all_ok and ok
        strata.append({
            "name": case["name"],
            "conditions": case["conditions"] + conditions,
            "script": [(alg.labels[g], p.render() if isinstance(p, Poly)
                        else str(p)) for g, p in case["script"]],
            "computed": alg.coords_render(computed),
            "claimed": alg.coords_render(case["claimed"]),
            "confirmed": ok,
            "representative": case["representative"],
        })
    # the v4 stratum: adjoint representation acts trivially on it
    v4 = _unit(alg.dim, 3)
    v4_fixed = True
    for i in range(alg.dim):
        image = adjoint_map(alg, i).apply(v4)
        expect = [Poly.const(x) for x in v4]
        if any(not (a - b).is_zero() for a, b in zip(image, expect)):
            v4_fixed = False
    strata.append({
        "name": "only a4 nonzero",
        "conditions": ["a4 != 0"],
        "script": [],
        "computed": alg.labels[3],
        "claimed": alg.labels[3],
        "confirmed": v4_fixed,
        "representative": "v4",
    })
    return {
        "strata": strata,
        "representatives": OPTIMAL_REPRESENTATIVES,
        "all_confirmed": all_ok and v4_fixed,
    }


def gardner_algebra() -> LieAlgebra:
    ref = reference_gardner_basis(order=1)
    return LieAlgebra.from_fields([name for name, _ in ref],
                                  [f for _, f in ref])


# ---------------------------------------------------------------------------
# reference tables (constants as they appear in the published tables)

# entry (i, j) of the commutator table: {basis index (1-based): coefficient}
REFERENCE_COMMUTATOR: dict = {
    (1, 7): {4: 1},
    (2, 3): {1: 6},
    (2, 6): {4: 6},
    (2, 7): {5: 3},
    (3, 2): {1: -6},
    (3, 5): {4: -6},
    (3, 7): {6: -2},
    (5, 3): {4: 6},
    (6, 2): {4: -6},
    (7, 1): {4: -1},
    (7, 2): {5: -3},
    (7, 3): {6: 2},
}

# entry (i, j) of the adjoint table: {basis index: {mu power: coefficient}};
# entries equal to v_j itself are omitted.
REFERENCE_ADJOINT: dict = {
    (1, 7): {7: {0: 1}, 4: {1: -1}},
    (2, 3): {3: {0: 1}, 1: {1: -6}},
    (2, 6): {6: {0: 1}, 4: {1: -6}},
    (2, 7): {7: {0: 1}, 5: {1: -3}},
    (3, 2): {2: {0: 1}, 1: {1: 6}},
    (3, 5): {5: {0: 1}, 4: {1: 6}},
    (3, 7): {7: {0: 1}, 6: {1: 2}},
    (5, 3): {3: {0: 1}, 4: {1: -6}},
    (6, 2): {2: {0: 1}, 4: {1: 6}},
    (7, 1): {1: {0: 1}, 4: {1: 1}},
    (7, 2): {2: {0: 1}, 5: {1: 3}},
    (7, 3): {3: {0: 1}, 6: {1: -2}},
}


def reference_commutator_coords(i: int, j: int, dim: int = 7) -> list:
    entry = REFERENCE_COMMUTATOR.get((i + 1, j + 1), {})
    return [Fraction(entry.get(k + 1, 0)) for k in range(dim)]


def reference_adjoint_coords(i: int, j: int, dim: int = 7) -> list:
    entry = REFERENCE_ADJOINT.get((i + 1, j + 1))
    if entry is None:
        entry = {j + 1: {0: 1}}
    out = []
    for k in range(dim):
        spec_entry = entry.get(k + 1, {})
        p = Poly.zero()
        for power, coeff in spec_entry.items():
            p = p + Poly.const(coeff) * Poly.var(MU) ** power
        out.append(p)
    return out
