"""Seeded randomized law suites shared by the property tests and the
acceptance gate.  Each runner executes ``n`` independent random cases and
asserts the law exactly on every one."""

import random
from fractions import Fraction

from approxsym.algebra import EpsSeries, Poly, T, W, X, param
from approxsym.jets import VectorField, jet, prolong, total_derivative
from approxsym.structure import adjoint_map, bracket, gardner_algebra

BASE_SYMBOLS = [X, T, W, param("p1"), param("p2"), param("p3")]

_ALG = None


def _algebra():
    global _ALG
    if _ALG is None:
        _ALG = gardner_algebra()
    return _ALG


def random_poly(rng, symbols=BASE_SYMBOLS, max_terms=5, max_degree=4):
    p = Poly.zero()
    for _ in range(rng.randint(0, max_terms)):
        coeff = Fraction(rng.randint(-9, 9), rng.randint(1, 9))
        mono = Poly.const(1)
        for _ in range(rng.randint(0, max_degree)):
            mono = mono * Poly.var(rng.choice(symbols))
        p = p + coeff * mono
    return p


def random_jet_poly(rng, max_jet_order=3, max_terms=4, max_degree=3):
    jets = [jet(nx, nt) for total in range(1, max_jet_order + 1)
            for nt in range(total + 1) for nx in (total - nt,)]
    return random_poly(rng, BASE_SYMBOLS[:3] + jets, max_terms, max_degree)


def random_point_poly(rng, max_terms=3, max_degree=2):
    return random_poly(rng, [X, T, W], max_terms, max_degree)


def random_field(rng, order=1):
    def comp():
        return EpsSeries.from_levels(
            [random_point_poly(rng) for _ in range(order + 1)], order)
    return VectorField(comp(), comp(), comp())


def run_ring_laws(n, seed=0):
    rng = random.Random(seed)
    for i in range(n):
        a, b, c = (random_poly(rng) for _ in range(3))
        assert a + b == b + a, i
        assert a * b == b * a, i
        assert (a + b) + c == a + (b + c), i
        assert (a * b) * c == a * (b * c), i
        assert a * (b + c) == a * b + a * c, i
        assert (a + Poly.zero() == a) and (a * Poly.const(1) == a), i
    return n


def run_leibniz(n, seed=1):
    rng = random.Random(seed)
    for i in range(n):
        a, b = random_poly(rng), random_poly(rng)
        s = rng.choice(BASE_SYMBOLS)
        assert (a * b).diff(s) == a.diff(s) * b + a * b.diff(s), i
    return n


def run_total_derivative_commutation(n, seed=2):
    rng = random.Random(seed)
    for i in range(n):
        e = random_jet_poly(rng)
        dxdt = total_derivative(total_derivative(e, "x"), "t")
        dtdx = total_derivative(total_derivative(e, "t"), "x")
        assert dxdt == dtdx, i
    return n


def run_prolongation_linearity(n, seed=3, order=3):
    rng = random.Random(seed)
    for i in range(n):
        a = random_field(rng, order=0)
        b = random_field(rng, order=0)
        ca = Fraction(rng.randint(-5, 5))
        cb = Fraction(rng.randint(-5, 5))
        combo = a.scale(ca) + b.scale(cb)
        pa, pb, pc = (prolong(v, order) for v in (a, b, combo))
        for idx in pc.jet_coeffs:
            expect = pa.jet_coeffs[idx] * ca + pb.jet_coeffs[idx] * cb
            assert pc.jet_coeffs[idx] == expect, (i, idx)
    return n


def run_bracket_antisymmetry_jacobi(n, seed=4):
    rng = random.Random(seed)
    alg = _algebra()

    def rand_coords():
        return [Fraction(rng.randint(-3, 3)) for _ in range(7)]

    for i in range(n):
        fa = alg.field_from_coords(rand_coords())
        fb = alg.field_from_coords(rand_coords())
        fc = alg.field_from_coords(rand_coords())
        assert (bracket(fa, fb) + bracket(fb, fa)).is_zero(), i
        jac = (bracket(bracket(fa, fb), fc)
               + bracket(bracket(fb, fc), fa)
               + bracket(bracket(fc, fa), fb))
        assert jac.is_zero(), i
    return n


def run_adjoint_automorphism(n, seed=5):
    rng = random.Random(seed)
    alg = _algebra()
    for i in range(n):
        gen = rng.randrange(7)
        mu = Fraction(rng.randint(-6, 6), rng.randint(1, 6))
        ad = adjoint_map(alg, gen, mu=mu)
        u = [Poly.const(Fraction(rng.randint(-3, 3))) for _ in range(7)]
        v = [Poly.const(Fraction(rng.randint(-3, 3))) for _ in range(7)]
        lhs = ad.apply(alg.bracket_coords(u, v))
        rhs = alg.bracket_coords(ad.apply(u), ad.apply(v))
        assert all((p - q).is_zero() for p, q in zip(lhs, rhs)), i
    return n


def run_adjoint_group_law(n, seed=6):
    rng = random.Random(seed)
    alg = _algebra()
    for i in range(n):
        gen = rng.randrange(7)
        mu = Fraction(rng.randint(-6, 6), rng.randint(1, 6))
        nu = Fraction(rng.randint(-6, 6), rng.randint(1, 6))
        a = adjoint_map(alg, gen, mu=mu)
        b = adjoint_map(alg, gen, mu=nu)
        composed = a.compose(b)
        summed = adjoint_map(alg, gen, mu=mu + nu)
        for j in range(7):
            for k in range(7):
                assert (composed[j][k] - summed.columns[j][k]).is_zero(), \
                    (i, j, k)
    return n


LAW_SUITES = [
    ("ring laws", run_ring_laws),
    ("Leibniz rule", run_leibniz),
    ("total-derivative commutation", run_total_derivative_commutation),
    ("prolongation linearity", run_prolongation_linearity),
    ("bracket antisymmetry and Jacobi", run_bracket_antisymmetry_jacobi),
    ("adjoint automorphism", run_adjoint_automorphism),
    ("adjoint one-parameter group law", run_adjoint_group_law),
]
