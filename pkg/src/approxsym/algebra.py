"""Exact arithmetic kernel: symbols, multivariate polynomials over the
rationals, truncated power series in a small parameter, and quotients.

Everything in this module is exact.  No floating point enters anywhere;
zero-testing is structural equality of canonical forms, which is what the
rest of the package relies on when it claims an identity "holds".
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Iterable, Mapping, Sequence, Union

Rat = Union[int, Fraction]

_KIND_RANK = {"independent": 0, "dependent": 1, "jet": 2, "parameter": 3}


def _natural_key(name: str) -> tuple:
    # "C10" sorts after "C2"
    parts = re.split(r"(\d+)", name)
    return tuple((1, int(p)) if p.isdigit() else (0, p) for p in parts if p != "")


class Symbol:
    """Interned named symbol with a fixed kind and a deterministic sort key.

    Kinds: ``independent`` (x, t), ``dependent`` (w), ``jet`` (w_x, w_xt, ...),
    ``parameter`` (everything else: equation constants, group parameters,
    solver unknowns).  The sort key orders independent < dependent < jet <
    parameter, jets by (total order, number of t-derivatives), other kinds by
    natural name order; it is stable across processes and creation order.
    """

    __slots__ = ("name", "kind", "jet_index", "sort_key")

    _registry: dict[str, "Symbol"] = {}

    def __new__(cls, name: str, kind: str = "parameter",
                jet_index: tuple[int, int] | None = None) -> "Symbol":
        existing = cls._registry.get(name)
        if existing is not None:
            if existing.kind != kind or existing.jet_index != jet_index:
                raise ValueError(
                    f"symbol {name!r} already registered with kind "
                    f"{existing.kind!r}; kind is fixed at creation")
            return existing
        if kind not in _KIND_RANK:
            raise ValueError(f"unknown symbol kind {kind!r}")
        if (kind == "jet") != (jet_index is not None):
            raise ValueError("jet symbols (and only jet symbols) carry a jet index")
        self = object.__new__(cls)
        self.name = name
        self.kind = kind
        self.jet_index = jet_index
        if kind == "jet":
            nx, nt = jet_index
            sub = (nx + nt, nt)
        else:
            sub = _natural_key(name)
        self.sort_key = (_KIND_RANK[kind], sub)
        cls._registry[name] = self
        return self

    def __repr__(self) -> str:
        return self.name

    def __lt__(self, other: "Symbol") -> bool:
        return self.sort_key < other.sort_key

    def __hash__(self) -> int:
        return hash(self.name)

    def __eq__(self, other: object) -> bool:
        return self is other


# A monomial is a tuple of (symbol, exponent) pairs, exponents > 0, sorted by
# the symbol sort key.  The empty tuple is the monomial 1.
Monomial = tuple

ONE_MONOMIAL: Monomial = ()


def _mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for s, e in b:
        d[s] = d.get(s, 0) + e
    return tuple(sorted(d.items(), key=lambda it: it[0].sort_key))


def _mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


def _mono_sort_key(m: Monomial):
    # graded lexicographic, for deterministic rendering and iteration
    return (_mono_degree(m), tuple((s.sort_key, e) for s, e in m))


def _mono_render(m: Monomial) -> str:
    if not m:
        return "1"
    return "*".join(s.name if e == 1 else f"{s.name}^{e}" for s, e in m)


class Poly:
    """Sparse multivariate polynomial with exact rational coefficients.

    Canonical form: no zero coefficients stored, monomials unique, so ``==``
    is a reliable identity test.  Instances are immutable; all operations
    return new polynomials.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, Fraction] | None = None):
        self.terms: dict[Monomial, Fraction] = (
            {m: c for m, c in terms.items() if c} if terms else {})

    # -- constructors -----------------------------------------------------

    @staticmethod
    def zero() -> "Poly":
        return Poly()

    @staticmethod
    def const(value: Rat) -> "Poly":
        q = Fraction(value)
        return Poly({ONE_MONOMIAL: q}) if q else Poly()

    @staticmethod
    def var(sym: Symbol) -> "Poly":
        return Poly({((sym, 1),): Fraction(1)})

    @staticmethod
    def _from_raw(terms: dict) -> "Poly":
        p = object.__new__(Poly)
        p.terms = {m: c for m, c in terms.items() if c}
        return p

    # -- queries -----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(m == ONE_MONOMIAL for m in self.terms)

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"not a constant polynomial: {self}")
        return self.terms.get(ONE_MONOMIAL, Fraction(0))

    def symbols(self) -> set[Symbol]:
        out: set[Symbol] = set()
        for m in self.terms:
            out.update(s for s, _ in m)
        return out

    def total_degree(self) -> int:
        return max((_mono_degree(m) for m in self.terms), default=0)

    def degree_in(self, sym: Symbol) -> int:
        deg = 0
        for m in self.terms:
            for s, e in m:
                if s is sym:
                    deg = max(deg, e)
        return deg

    def coefficient(self, m: Monomial) -> Fraction:
        return self.terms.get(m, Fraction(0))

    # -- ring operations ----------------------------------------------------

    def __add__(self, other) -> "Poly":
        other = _as_poly(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly._from_raw(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly._from_raw({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        return self + (-_as_poly(other))

    def __rsub__(self, other) -> "Poly":
        return _as_poly(other) + (-self)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            q = Fraction(other)
            if not q:
                return Poly()
            return Poly._from_raw({m: c * q for m, c in self.terms.items()})
        other = _as_poly(other)
        out: dict[Monomial, Fraction] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                m = _mono_mul(ma, mb)
                v = out.get(m)
                out[m] = ca * cb if v is None else v + ca * cb
        return Poly._from_raw(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative polynomial power")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base if n > 1 else base
            n >>= 1
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    # -- calculus and structure ----------------------------------------------

    def diff(self, sym: Symbol) -> "Poly":
        """Exact formal partial derivative with respect to one symbol."""
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            for i, (s, e) in enumerate(m):
                if s is sym:
                    if e == 1:
                        newm = m[:i] + m[i + 1:]
                    else:
                        newm = m[:i] + ((s, e - 1),) + m[i + 1:]
                    v = out.get(newm)
                    out[newm] = c * e if v is None else v + c * e
                    break
        return Poly._from_raw(out)

    def substitute(self, sym: Symbol, replacement: "Poly") -> "Poly":
        """Substitute a polynomial for every occurrence of ``sym``."""
        powers: dict[int, Poly] = {0: Poly.const(1), 1: replacement}
        out = Poly()
        for m, c in self.terms.items():
            e_sym = 0
            rest = []
            for s, e in m:
                if s is sym:
                    e_sym = e
                else:
                    rest.append((s, e))
            piece = Poly._from_raw({tuple(rest): c})
            if e_sym:
                if e_sym not in powers:
                    p = powers[1]
                    for k in range(2, e_sym + 1):
                        if k not in powers:
                            powers[k] = powers[k - 1] * p
                piece = piece * powers[e_sym]
            out = out + piece
        return out

    def evaluate(self, assignment: Mapping[Symbol, Rat]) -> Fraction:
        total = Fraction(0)
        for m, c in self.terms.items():
            v = c
            for s, e in m:
                try:
                    v *= Fraction(assignment[s]) ** e
                except KeyError:
                    raise KeyError(f"no value assigned to symbol {s.name}")
            total += v
        return total

    def eval_partial(self, assignment: Mapping[Symbol, Rat]) -> "Poly":
        """Substitute rational values for some symbols, keeping the rest."""
        out: dict[Monomial, Fraction] = {}
        for m, c in self.terms.items():
            v = c
            rest = []
            for s, e in m:
                if s in assignment:
                    v *= Fraction(assignment[s]) ** e
                else:
                    rest.append((s, e))
            key = tuple(rest)
            prev = out.get(key)
            out[key] = v if prev is None else prev + v
        return Poly._from_raw(out)

    # -- rendering ------------------------------------------------------------

    def sorted_terms(self) -> list[tuple[Monomial, Fraction]]:
        return sorted(self.terms.items(), key=lambda it: _mono_sort_key(it[0]),
                      reverse=True)

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts: list[str] = []
        for m, c in self.sorted_terms():
            mono = _mono_render(m)
            if m == ONE_MONOMIAL:
                body = str(c) if c > 0 else str(-c)
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            if not parts:
                parts.append(body if c > 0 else f"-{body}")
            else:
                parts.append(f" + {body}" if c > 0 else f" - {body}")
        return "".join(parts)

    __str__ = render

    def __repr__(self) -> str:
        return f"Poly({self.render()})"


def _as_poly(v) -> Poly:
    if isinstance(v, Poly):
        return v
    if isinstance(v, (int, Fraction)):
        return Poly.const(v)
    if isinstance(v, Symbol):
        return Poly.var(v)
    raise TypeError(f"cannot coerce {type(v).__name__} to Poly")


def collect_coefficients(p: Poly, basis: Iterable[Symbol]) -> dict[Monomial, Poly]:
    """Split ``p`` as a sum of monomials in ``basis`` times coefficient
    polynomials free of the basis symbols.

    The result reassembles exactly: sum(mono * coeff) == p.
    """
    basis_set = set(basis)
    out: dict[Monomial, dict] = {}
    for m, c in p.terms.items():
        in_basis = []
        rest = []
        for s, e in m:
            (in_basis if s in basis_set else rest).append((s, e))
        key = tuple(in_basis)
        bucket = out.setdefault(key, {})
        rk = tuple(rest)
        prev = bucket.get(rk)
        bucket[rk] = c if prev is None else prev + c
    return {k: Poly._from_raw(v) for k, v in out.items()
            if any(val for val in v.values())}


class EpsSeries:
    """Truncated expansion a0 + eps*a1 + ... + eps^p * ap with Poly levels.

    Arithmetic discards every term of order above the truncation order; two
    series of different orders cannot be combined (that would silently change
    the error class of the result).
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence[Poly]):
        if not coeffs:
            raise ValueError("a series needs at least the order-0 coefficient")
        self.coeffs: tuple[Poly, ...] = tuple(coeffs)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @staticmethod
    def lift(p, order: int) -> "EpsSeries":
        """Embed an eps-free polynomial (or scalar) at level 0."""
        return EpsSeries([_as_poly(p)] + [Poly.zero()] * order)

    @staticmethod
    def from_levels(levels: Sequence, order: int) -> "EpsSeries":
        out = [_as_poly(l) for l in levels[:order + 1]]
        out += [Poly.zero()] * (order + 1 - len(out))
        return EpsSeries(out)

    @staticmethod
    def zero(order: int) -> "EpsSeries":
        return EpsSeries([Poly.zero()] * (order + 1))

    def level(self, i: int) -> Poly:
        return self.coeffs[i] if i <= self.order else Poly.zero()

    def is_zero(self) -> bool:
        """True iff the series is o(eps^order)-zero: every level vanishes."""
        return all(c.is_zero() for c in self.coeffs)

    def _check_order(self, other: "EpsSeries") -> None:
        if self.order != other.order:
            raise ValueError(
                f"truncation order mismatch: {self.order} vs {other.order}")

    def __add__(self, other) -> "EpsSeries":
        other = _as_series(other, self.order)
        self._check_order(other)
        return EpsSeries([a + b for a, b in zip(self.coeffs, other.coeffs)])

    __radd__ = __add__

    def __neg__(self) -> "EpsSeries":
        return EpsSeries([-a for a in self.coeffs])

    def __sub__(self, other) -> "EpsSeries":
        return self + (-_as_series(other, self.order))

    def __rsub__(self, other) -> "EpsSeries":
        return _as_series(other, self.order) + (-self)

    def __mul__(self, other) -> "EpsSeries":
        if isinstance(other, (int, Fraction, Poly, Symbol)):
            p = _as_poly(other)
            return EpsSeries([a * p for a in self.coeffs])
        self._check_order(other)
        n = self.order
        levels = [Poly.zero()] * (n + 1)
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            for j in range(0, n + 1 - i):
                b = other.coeffs[j]
                if not b.is_zero():
                    levels[i + j] = levels[i + j] + a * b
        return EpsSeries(levels)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, EpsSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def shift(self, k: int) -> "EpsSeries":
        """Multiply by eps^k, truncating at the series order."""
        n = self.order
        levels = [Poly.zero()] * (n + 1)
        for i in range(0, n + 1 - k):
            levels[i + k] = self.coeffs[i]
        return EpsSeries(levels)

    def diff(self, sym: Symbol) -> "EpsSeries":
        return EpsSeries([a.diff(sym) for a in self.coeffs])

    def symbols(self) -> set[Symbol]:
        out: set[Symbol] = set()
        for a in self.coeffs:
            out.update(a.symbols())
        return out

    def substitute(self, sym: Symbol, replacement) -> "EpsSeries":
        """Substitute a Poly or an EpsSeries for ``sym``, truncating."""
        if isinstance(replacement, Poly):
            return EpsSeries([a.substitute(sym, replacement) for a in self.coeffs])
        self._check_order(replacement)
        n = self.order
        # expand level by level: sym^k contributes replacement^k, truncated
        out = EpsSeries.zero(n)
        rep_pows: dict[int, EpsSeries] = {0: EpsSeries.lift(1, n), 1: replacement}
        for lvl, a in enumerate(self.coeffs):
            buckets: dict[int, dict] = {}
            for m, c in a.terms.items():
                e_sym = 0
                rest = []
                for s, e in m:
                    if s is sym:
                        e_sym = e
                    else:
                        rest.append((s, e))
                buckets.setdefault(e_sym, {})
                rk = tuple(rest)
                prev = buckets[e_sym].get(rk)
                buckets[e_sym][rk] = c if prev is None else prev + c
            for e_sym, terms in buckets.items():
                if e_sym not in rep_pows:
                    for k in range(2, e_sym + 1):
                        if k not in rep_pows:
                            rep_pows[k] = rep_pows[k - 1] * rep_pows[1]
                piece = EpsSeries.lift(Poly._from_raw(terms), n) * rep_pows[e_sym]
                out = out + piece.shift(lvl)
        return out

    def eval_partial(self, assignment: Mapping[Symbol, Rat]) -> "EpsSeries":
        return EpsSeries([a.eval_partial(assignment) for a in self.coeffs])

    def to_eps_poly(self, eps: Symbol) -> Poly:
        """View the series as an ordinary polynomial in the symbol ``eps``."""
        out = Poly.zero()
        e = Poly.var(eps)
        for i, a in enumerate(self.coeffs):
            if not a.is_zero():
                out = out + a * e ** i
        return out

    @staticmethod
    def from_eps_poly(p: Poly, eps: Symbol, order: int) -> "EpsSeries":
        levels = [dict() for _ in range(order + 1)]
        for m, c in p.terms.items():
            e_eps = 0
            rest = []
            for s, e in m:
                if s is eps:
                    e_eps = e
                else:
                    rest.append((s, e))
            if e_eps > order:
                continue
            rk = tuple(rest)
            prev = levels[e_eps].get(rk)
            levels[e_eps][rk] = c if prev is None else prev + c
        return EpsSeries([Poly._from_raw(d) for d in levels])

    def render(self) -> str:
        parts = []
        for i, a in enumerate(self.coeffs):
            if a.is_zero():
                continue
            if i == 0:
                parts.append(a.render())
            else:
                head = "eps" if i == 1 else f"eps^{i}"
                parts.append(f"{head}*({a.render()})")
        return " + ".join(parts) if parts else "0"

    __str__ = render

    def __repr__(self) -> str:
        return f"EpsSeries({self.render()}; order={self.order})"


def _as_series(v, order: int) -> EpsSeries:
    if isinstance(v, EpsSeries):
        return v
    return EpsSeries.lift(v, order)


class RationalExpr:
    """Quotient of a truncated series by an eps-free nonzero polynomial.

    No reduction to lowest terms is attempted anywhere; equality and
    zero-testing clear denominators by cross-multiplication, which is exact.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: EpsSeries, den: Poly | None = None):
        if den is None:
            den = Poly.const(1)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator polynomial")
        self.num = num
        self.den = den

    @staticmethod
    def lift(p, order: int) -> "RationalExpr":
        return RationalExpr(EpsSeries.lift(p, order))

    @property
    def order(self) -> int:
        return self.num.order

    def is_zero(self) -> bool:
        """o(eps^order)-zero test of the numerator."""
        return self.num.is_zero()

    def equals(self, other: "RationalExpr") -> bool:
        return (self.num * other.den - other.num * self.den).is_zero()

    def __add__(self, other) -> "RationalExpr":
        other = _as_rational(other, self.order)
        if self.den == other.den:
            return RationalExpr(self.num + other.num, self.den)
        return RationalExpr(self.num * other.den + other.num * self.den,
                            self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "RationalExpr":
        return RationalExpr(-self.num, self.den)

    def __sub__(self, other) -> "RationalExpr":
        return self + (-_as_rational(other, self.order))

    def __rsub__(self, other) -> "RationalExpr":
        return _as_rational(other, self.order) + (-self)

    def __mul__(self, other) -> "RationalExpr":
        if isinstance(other, (int, Fraction, Poly, Symbol)):
            return RationalExpr(self.num * _as_poly(other), self.den)
        other = _as_rational(other, self.order)
        return RationalExpr(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def diff(self, sym: Symbol) -> "RationalExpr":
        # quotient rule; denominators are eps-free so den.diff is a Poly
        dden = self.den.diff(sym)
        num = self.num.diff(sym) * self.den - self.num * dden
        return RationalExpr(num, self.den * self.den)

    def substitute(self, sym: Symbol, replacement: Poly) -> "RationalExpr":
        return RationalExpr(self.num.substitute(sym, replacement),
                            self.den.substitute(sym, replacement))

    def eval_partial(self, assignment: Mapping[Symbol, Rat]) -> "RationalExpr":
        return RationalExpr(self.num.eval_partial(assignment),
                            self.den.eval_partial(assignment))

    def evaluate(self, assignment: Mapping[Symbol, Rat],
                 eps_value: Rat) -> Fraction:
        den = self.den.evaluate(assignment)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at evaluation point")
        e = Fraction(eps_value)
        num = Fraction(0)
        for i, level in enumerate(self.num.coeffs):
            num += level.evaluate(assignment) * e ** i
        return num / den

    def render(self) -> str:
        if self.den == Poly.const(1):
            return self.num.render()
        return f"({self.num.render()}) / ({self.den.render()})"

    __str__ = render

    def __repr__(self) -> str:
        return f"RationalExpr({self.render()})"


def _as_rational(v, order: int) -> RationalExpr:
    if isinstance(v, RationalExpr):
        return v
    return RationalExpr(_as_series(v, order))


# Shared workspace symbols.  x, t are the independent variables and w the
# dependent one throughout the package; eps is reserved for exact
# (untruncated) computations that keep the small parameter symbolic.
X = Symbol("x", "independent")
T = Symbol("t", "independent")
W = Symbol("w", "dependent")
EPS = Symbol("eps", "parameter")


def param(name: str) -> Symbol:
    return Symbol(name, "parameter")
