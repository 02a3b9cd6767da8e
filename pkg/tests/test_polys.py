import random
from fractions import Fraction

import pytest
import sympy

from flipiet.errors import DegreeCapExceeded
from flipiet.polys import (IntPolynomial, char_poly, count_roots,
                           factor_rational, is_irreducible, isolate_real_roots,
                           mat_det, mat_mul, poly_from_roots, quasi_positive,
                           root_bound, squarefree_part, sturm_chain)

A = ((2, 4, 6, 5, 2), (0, 2, 1, 1, 1), (0, 0, 3, 2, 0),
     (1, 2, 2, 2, 1), (1, 3, 5, 4, 2))
QUARTIC = IntPolynomial((1, -8, 18, -10, 1))


def test_char_poly_of_product_matrix():
    cp = char_poly(A)
    # (t - 1) * quartic, expanded
    assert cp.coeffs == (-1, 9, -26, 28, -11, 1)


def test_char_poly_small_cases():
    assert char_poly(((1, 0), (0, 1))).coeffs == (1, -2, 1)
    assert char_poly(((1, 1), (1, 0))).coeffs == (-1, -1, 1)


def test_factor_product_matrix_char_poly():
    fl = factor_rational(char_poly(A))
    assert [(f.coeffs, m) for f, m in fl] == [((-1, 1), 1), ((1, -8, 18, -10, 1), 1)]


def test_quartic_irreducible():
    assert is_irreducible(QUARTIC)


def test_factor_simple():
    fl = factor_rational(IntPolynomial((-1, 0, 1)))  # t^2 - 1
    assert [(f.coeffs, m) for f, m in fl] == [((-1, 1), 1), ((1, 1), 1)]


def test_factor_multiplicity():
    p = poly_from_roots([1, 1, 2])
    fl = factor_rational(p)
    assert [(f.coeffs, m) for f, m in fl] == [((-2, 1), 1), ((-1, 1), 2)]


def test_factor_degree_cap():
    with pytest.raises(DegreeCapExceeded):
        factor_rational(IntPolynomial((1,) + (0,) * 8 + (1,)))


def test_factor_roundtrip_randomized():
    rng = random.Random(7)
    t = sympy.symbols("t")
    for _ in range(1000):
        deg = rng.randint(1, 6)
        coeffs = [rng.randint(-6, 6) for _ in range(deg)] + [rng.choice([1, -1, 2, -3])]
        p = IntPolynomial(tuple(coeffs))
        if p.degree < 1:
            continue
        factors = factor_rational(p)
        prod = IntPolynomial((1,))
        for f, m in factors:
            for _ in range(m):
                prod = prod * f
        assert prod.coeffs == p.primitive().coeffs
        for f, _ in factors:
            expr = sum(c * t ** i for i, c in enumerate(f.coeffs))
            assert sympy.Poly(expr, t).is_irreducible


def test_isolation_product_matrix():
    roots = isolate_real_roots(char_poly(A))
    assert len(roots) == 5
    approx = sorted((float(a) + float(b)) / 2 for a, b in roots)
    targets = [0.2249, 0.3575, 1.0, 1.5881, 7.8294]
    for got, want in zip(approx, targets):
        a, b = [r for r in roots if r[0] <= got <= r[1]][0]
        assert a < want < b or abs(got - want) < float(b - a)


def test_isolation_no_real_roots():
    assert isolate_real_roots(IntPolynomial((1, 0, 1))) == []


def test_isolation_sqrt2():
    roots = isolate_real_roots(IntPolynomial((-2, 0, 1)))
    assert len(roots) == 2
    lo, hi = roots[1]
    assert lo < Fraction(141421356, 10 ** 8) < hi


def test_isolation_rational_root_at_bisection_point():
    # roots at 0 and +-1/2: bisection midpoints hit them
    p = poly_from_roots([0]) * IntPolynomial((-1, 0, 4))
    roots = isolate_real_roots(p)
    assert len(roots) == 3
    for (a, b), want in zip(roots, (Fraction(-1, 2), 0, Fraction(1, 2))):
        assert a < want < b


def test_sturm_count_interval():
    chain = sturm_chain(char_poly(A))
    assert count_roots(chain, Fraction(1), root_bound(char_poly(A))) == 2
    assert count_roots(chain, Fraction(0), Fraction(1)) == 3  # 0.225, 0.358, and 1


def test_squarefree_part():
    p = poly_from_roots([2, 2, 3])
    assert squarefree_part(p).coeffs == poly_from_roots([2, 3]).coeffs


def test_sympy_oracle_on_random_factors():
    t = sympy.symbols("t")
    rng = random.Random(11)
    for _ in range(50):
        deg = rng.randint(2, 6)
        coeffs = [rng.randint(-9, 9) for _ in range(deg)] + [1]
        p = IntPolynomial(tuple(coeffs))
        mine = sorted((f.coeffs, m) for f, m in factor_rational(p))
        expr = sum(c * t ** i for i, c in enumerate(p.coeffs))
        theirs = []
        const, pairs = sympy.factor_list(expr)
        for f, m in pairs:
            fc = tuple(int(v) for v in reversed(sympy.Poly(f, t).all_coeffs()))
            if fc[-1] < 0:
                fc = tuple(-v for v in fc)
            theirs.append((fc, int(m)))
        assert mine == sorted(theirs)


def test_matrix_helpers():
    assert mat_det(A) == 1
    ident = tuple(tuple(int(i == j) for j in range(5)) for i in range(5))
    assert mat_mul(A, ident) == A
    assert quasi_positive(A)
    assert not quasi_positive(ident)
    assert not quasi_positive(((0, 1), (1, 0)))  # periodic, irreducible


def test_factor_at_degree_cap():
    # degree 8 exercises the widest certified factor search (k up to 4)
    q1 = IntPolynomial((1, -8, 18, -10, 1))
    q2 = IntPolynomial((1, 1, 0, 0, 1))
    fl = factor_rational(q1 * q2)
    assert [(f.coeffs, m) for f, m in fl] == [((1, -8, 18, -10, 1), 1),
                                              ((1, 1, 0, 0, 1), 1)]
    # 1 + t + ... + t^8 factors into the degree-2 and degree-6 cyclotomics
    fl2 = factor_rational(IntPolynomial((1,) * 9))
    assert [(f.coeffs, m) for f, m in fl2] == [((1, 1, 1), 1),
                                               ((1, 0, 0, 1, 0, 0, 1), 1)]
    # t^8 + 2 is irreducible (Eisenstein at 2): exhaustion must certify it
    fl3 = factor_rational(IntPolynomial((2, 0, 0, 0, 0, 0, 0, 0, 1)))
    assert len(fl3) == 1 and fl3[0][0].degree == 8
