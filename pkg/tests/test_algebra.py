import random

import pytest

from isojac.algebra.linalg import determinant, inverse, kernel, mat_mul, rank, solve
from isojac.algebra.poly import (is_irreducible, poly_divmod, poly_eval, poly_factor, poly_gcd,
                                 poly_inv_mod, poly_mul, poly_mod, poly_resultant, poly_roots, trim)
from isojac.algebra.rings import (FIELD_EXTENSION, PrimeField, QuotientAlgebra, SeriesRing,
                                  extension_field)
from isojac.algebra.series import (RationalFraction, hensel_root, pade_fraction, pade_reconstruct,
                                   series_from_poly)
from isojac.errors import Inconsistent, NoPadeSolution, NoSquareRoot, NonUnit

F = PrimeField(1009)


def test_prime_field_rejects_composites():
    for n in (1, 2, 9, 1001):
        with pytest.raises(ValueError):
            PrimeField(n)


def test_designated_square_root():
    for p in (131, 1009, 1013):
        K = PrimeField(p)
        for a in range(1, p):
            if K.is_square(a):
                r = K.sqrt(a)
                assert r * r % p == a and r <= p - r
            else:
                with pytest.raises(NoSquareRoot):
                    K.sqrt(a)


def test_inverse_of_zero():
    with pytest.raises(NonUnit):
        F.inv(0)


@pytest.mark.parametrize("p,d", [(131, 2), (1009, 2), (131, 3), (7, 4)])
def test_extension_field_axioms(p, d):
    K = PrimeField(p)
    L = extension_field(K, d)
    assert L.order == p ** d
    rng = random.Random(p + d)
    for _ in range(50):
        a, b, c = L.random(rng), L.random(rng), L.random(rng)
        assert L.mul(a, L.add(b, c)) == L.add(L.mul(a, b), L.mul(a, c))
        if not L.is_zero(a):
            assert L.mul(a, L.inv(a)) == L.one
            assert L.pow(a, L.order - 1) == L.one
        assert L.frobenius(L.mul(a, b)) == L.mul(L.frobenius(a), L.frobenius(b))
        assert L.frobenius(a, d) == a


def test_extension_square_roots():
    L = extension_field(F, 2)
    rng = random.Random(1)
    for _ in range(30):
        a = L.random(rng)
        s = L.mul(a, a)
        r = L.sqrt(s)
        assert L.mul(r, r) == s
    # every element of F is a square in F_p^2
    assert all(L.is_square(L.from_int(c)) for c in range(1, 30))


def test_series_inverse_and_hensel():
    S = SeriesRing(F, 12)
    rng = random.Random(2)
    a = tuple([F.random(rng) or 1] + [F.random(rng) for _ in range(11)])
    assert S.mul(a, S.inv(a)) == S.one
    # square root of 1 + t by Newton iteration
    f = [S.neg(S.from_coeffs([1, 1])), S.zero, S.one]
    r = hensel_root(S, f, 1)
    assert S.mul(r, r) == S.from_coeffs([1, 1])


def test_poly_division_and_gcd():
    rng = random.Random(3)
    for _ in range(30):
        f = trim(F, [F.random(rng) for _ in range(7)])
        g = trim(F, [F.random(rng) for _ in range(4)])
        q, r = poly_divmod(F, f, g)
        back = poly_mul(F, q, g)
        back = back + [0] * (len(f) - len(back))
        r = r + [0] * (len(f) - len(r))
        assert trim(F, [F.add(x, y) for x, y in zip(back, r)]) == f
        assert len(trim(F, r)) < len(g)
        h = [F.random(rng) for _ in range(3)] + [1]
        gg = poly_gcd(F, poly_mul(F, f, h), poly_mul(F, g, h))
        assert poly_mod(F, gg, h) == [] or poly_mod(F, h, gg) == []


def test_poly_inverse_mod():
    m = [3, 0, 1, 5, 1]
    f = [2, 7, 1]
    inv = poly_inv_mod(F, f, m)
    assert poly_mod(F, poly_mul(F, f, inv), m) == [1]


def test_roots_against_brute_force():
    K = PrimeField(131)
    rng = random.Random(4)
    for _ in range(20):
        f = [K.random(rng) for _ in range(5)] + [1]
        want = sorted(x for x in range(131) if poly_eval(K, f, x) == 0)
        assert sorted(poly_roots(K, f)) == want


def test_irreducibility_against_brute_force():
    K = PrimeField(7)
    for a in range(7):
        for b in range(7):
            f = [b, a, 1]
            has_root = any(poly_eval(K, f, x) == 0 for x in range(7))
            assert is_irreducible(K, f) == (not has_root)


def test_factorization_multiplies_back():
    rng = random.Random(5)
    f = [F.random(rng) for _ in range(6)] + [1]
    g = poly_mul(F, f, f)
    prod = [1]
    lc, factors = poly_factor(F, g)
    assert lc == 1
    for fac, e in factors:
        for _ in range(e):
            prod = poly_mul(F, prod, fac)
    assert prod == g


def test_resultant_detects_common_root():
    f = poly_mul(F, [5, 1], [7, 1])
    g = poly_mul(F, [5, 1], [9, 1])
    assert poly_resultant(F, f, g) == 0
    assert poly_resultant(F, f, [9, 1]) != 0


def test_linear_algebra():
    rng = random.Random(6)
    A = [[F.random(rng) for _ in range(4)] for _ in range(4)]
    x = [F.random(rng) for _ in range(4)]
    b = [sum(A[i][j] * x[j] for j in range(4)) % F.p for i in range(4)]
    assert solve(F, A, b) == x
    I = mat_mul(F, A, inverse(F, A))
    assert I == [[1 if i == j else 0 for j in range(4)] for i in range(4)]
    assert determinant(F, A) != 0
    B = A[:3] + [[(A[0][j] + A[1][j]) % F.p for j in range(4)]]
    assert rank(F, B) == 3
    (v,) = kernel(F, [list(c) for c in zip(*B)])
    assert all(sum(v[i] * B[i][j] for i in range(4)) % F.p == 0 for j in range(4))
    with pytest.raises(Inconsistent):
        solve(F, [[1, 1], [1, 1]], [1, 2])


def test_pade_round_trip():
    K = PrimeField(131)
    num = [3, 1, 4, 1]
    den = [1, 5, 9]
    S = SeriesRing(K, 10)
    s = S.div(series_from_poly(S, num), series_from_poly(S, den))
    n, d = pade_reconstruct(s, 3, 2, S)
    assert (n, d) == (num, den)
    with pytest.raises(NoPadeSolution):
        pade_reconstruct(s, 2, 1, S)


def test_pade_fraction_recentred():
    f = RationalFraction(F, [1, 2, 3], [5, 0, 1])
    s = f.expand(17, 10)
    assert pade_fraction(s, SeriesRing(F, 10), 2, 2, 17) == f


def test_rational_fraction_arithmetic():
    a = RationalFraction(F, [1, 2], [3, 1])
    b = RationalFraction(F, [4, 0, 1], [1, 1])
    assert (a + b) - b == a
    assert (a * b) / b == a
    assert a(5) == F.div(11, 8)
    assert RationalFraction.from_json(F, a.to_json()) == a
    assert (a - a).degree() == 0


def test_element_wrapper():
    L = QuotientAlgebra(F, [1, 0, 1], FIELD_EXTENSION)
    i = L.gen()
    assert L.mul(i, i) == L.from_int(-1)
    x = L(3)
    assert (x * x).value == L.from_int(9)
