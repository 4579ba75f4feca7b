import random
from collections import Counter

import pytest
import sympy

from corpus import DATA, exhaustive_factor_degrees, gl32_cached
from isospec.arith import primes_up_to
from isospec.errors import InsufficientCensus, NotPrime, ParseError, RamifiedPrime, ZeroDiscriminant
from isospec.numberfields import (
    census_equal,
    compare_censuses,
    dirichlet_coefficients,
    distinct_degree_factorization,
    factor_degrees_mod_p,
    poly_discriminant,
    splitting_census,
)
from isospec.polynomials import IntPolynomial, parse_polynomial

X = sympy.Symbol("x")


def poly(*coeffs):
    return IntPolynomial(tuple(coeffs))


X2P1 = poly(1, 0, 1)
X2M2 = poly(-2, 0, 1)


def load(name):
    return parse_polynomial((DATA / name).read_text())


def to_sympy(f):
    return sum(c * X ** k for k, c in enumerate(f.coefficients))


class TestParsing:
    def test_fixture(self):
        assert load("trinks_7.poly").coefficients == (3, -7, 0, 0, 0, 0, 0, 1)

    @pytest.mark.parametrize("text", ["", "1 x 2", "1 2\n3 4", "0 0"])
    def test_errors(self, text):
        with pytest.raises(ParseError):
            parse_polynomial(text)


class TestDiscriminant:
    def test_examples(self):
        assert poly_discriminant(X2P1) == -4
        assert poly_discriminant(X2M2) == 8

    def test_repeated_root(self):
        with pytest.raises(ZeroDiscriminant):
            poly_discriminant(poly(1, -2, 1))

    def test_sympy_oracle(self):
        rng = random.Random(6)
        for _ in range(150):
            n = rng.randint(2, 7)
            c = [rng.randint(-9, 9) for _ in range(n)] + [rng.choice([1, 1, 2, -3])]
            ref = int(sympy.discriminant(to_sympy(IntPolynomial(tuple(c))), X))
            if ref == 0:
                with pytest.raises(ZeroDiscriminant):
                    poly_discriminant(IntPolynomial(tuple(c)))
            else:
                assert poly_discriminant(IntPolynomial(tuple(c))) == ref


class TestFactorDegrees:
    def test_examples(self):
        assert factor_degrees_mod_p(X2P1, 5).partition == (1, 1)
        assert factor_degrees_mod_p(X2P1, 3).partition == (2,)
        # 2 is not a cube mod 7 (cubes are 0, 1, 6), so x^3 - 2 has no root there
        assert factor_degrees_mod_p(poly(-2, 0, 0, 1), 7).partition == (3,)

    def test_errors(self):
        with pytest.raises(RamifiedPrime):
            factor_degrees_mod_p(X2P1, 2)
        with pytest.raises(NotPrime):
            factor_degrees_mod_p(X2P1, 9)

    def test_exhaustive_oracle(self):
        rng = random.Random(13)
        checked = 0
        for p in (3, 5, 7, 11, 13):
            for _ in range(60):
                n = rng.randint(1, 4)
                c = [rng.randint(-20, 20) for _ in range(n)] + [1]
                f = IntPolynomial(tuple(c))
                try:
                    disc = poly_discriminant(f)
                except ZeroDiscriminant:
                    continue
                if disc % p == 0:
                    continue
                assert list(factor_degrees_mod_p(f, p).partition) == exhaustive_factor_degrees(c, p)
                checked += 1
        assert checked > 200

    def test_factors_reassemble(self):
        rng = random.Random(14)
        for _ in range(100):
            p = rng.choice([3, 5, 7, 11, 13, 101])
            n = rng.randint(1, 6)
            c = [rng.randrange(p) for _ in range(n)] + [1]
            f = sympy.Poly(list(reversed(c)), X, modulus=p)
            if sympy.gcd(f, f.diff(X)).degree() > 0:
                continue
            prod = sympy.Poly(1, X, modulus=p)
            for u, d in distinct_degree_factorization(c, p):
                assert (len(u) - 1) % d == 0
                prod *= sympy.Poly(list(reversed(u)), X, modulus=p)
            assert prod == f

    def test_degree_conservation(self):
        f = load("trinks_7.poly")
        for p, t in splitting_census(f, 500).entries.items():
            assert sum(t.partition) == 7


class TestCensus:
    def test_x2p1(self):
        c = splitting_census(X2P1, 10)
        assert {p: t.partition for p, t in c.entries.items()} == {3: (2,), 5: (1, 1), 7: (2,)}
        assert c.skipped == (2,)

    def test_x2m2(self):
        c = splitting_census(X2M2, 10)
        assert {p: t.partition for p, t in c.entries.items()} == {3: (2,), 5: (2,), 7: (1, 1)}
        assert c.skipped == (2,)

    def test_linear(self):
        c = splitting_census(poly(-1, 1), 30)
        assert all(t.partition == (1,) for t in c.entries.values()) and not c.skipped

    def test_cover(self):
        f = load("trinks_7_sibling.poly")
        c = splitting_census(f, 200)
        assert sorted([*c.entries, *c.skipped]) == primes_up_to(200)

    def test_bound(self):
        with pytest.raises(ValueError):
            splitting_census(X2P1, 1)

    def test_csv(self):
        assert splitting_census(X2P1, 5).to_csv() == 'prime,partition\n3,"[2]"\n5,"[1,1]"\n'


class TestComparison:
    def test_reflexive(self):
        assert census_equal(X2P1, X2P1, 100).equal

    def test_control_pair(self):
        # brute-force residue characters of -1 and 2
        oracle = next(p for p in primes_up_to(50)[1:]
                      if any(x * x % p == p - 1 for x in range(p)) != any(x * x % p == 2 for x in range(p)))
        r = census_equal(X2P1, X2M2, 50)
        assert not r.equal and r.first_disagreement == oracle == 5

    def test_symmetric(self):
        a = splitting_census(X2P1, 200)
        b = splitting_census(poly(1, 1, 1), 200)
        assert compare_censuses(a, b) == compare_censuses(b, a)

    def test_degree_mismatch(self):
        r = census_equal(X2P1, poly(-2, 0, 0, 1), 50)
        assert not r.equal and r.compared_count == 0


class TestDirichlet:
    def test_x2p1(self):
        a = dirichlet_coefficients(splitting_census(X2P1, 10), 10)
        assert a == [1, 0, 0, 0, 2, 0, 0, 0, 1, 0]

    def test_linear(self):
        a = dirichlet_coefficients(splitting_census(poly(-1, 1), 30), 30)
        assert a == [1] * 30

    def test_insufficient(self):
        with pytest.raises(InsufficientCensus):
            dirichlet_coefficients(splitting_census(X2P1, 10), 11)

    def test_brute_force_ideal_count(self):
        # a_n for Q(i) away from 2: number of ideals of norm n = (1/4) #{x^2 + y^2 = n}
        a = dirichlet_coefficients(splitting_census(X2P1, 200), 200)
        for n in range(1, 201, 2):
            reps = sum(1 for x in range(-15, 16) for y in range(-15, 16) if x * x + y * y == n)
            assert a[n - 1] == reps // 4


@pytest.fixture(scope="module")
def pair():
    return load("trinks_7.poly"), load("trinks_7_sibling.poly")


class TestDegreeSevenPair:
    def test_sympy_validation(self, pair):
        for f in pair:
            g = to_sympy(f)
            assert sympy.Poly(g, X).is_irreducible
            assert sympy.factorint(int(sympy.discriminant(g, X))) == {3: 8, 7: 8}
            assert poly_discriminant(f) == 3 ** 8 * 7 ** 8

    def test_fields_not_isomorphic(self, pair):
        f1, f2 = (to_sympy(f) for f in pair)
        K = sympy.QQ.algebraic_field(sympy.CRootOf(f1, 0))
        own = sorted(g.degree() for g, _ in sympy.Poly(f1, X, domain=K).factor_list()[1])
        other = sorted(g.degree() for g, _ in sympy.Poly(f2, X, domain=K).factor_list()[1])
        # point stabilizer of GL(3,2): orbits 1 + 6 on points, 3 + 4 on lines
        assert own == [1, 6] and other == [3, 4]

    def test_equal_census(self, pair):
        r = census_equal(*pair, 10_000)
        assert r.equal and r.compared_count > 1200

    def test_chebotarev_frequencies(self, pair):
        G, _, _ = gl32_cached()
        expected = Counter()
        for g in G.elements:
            expected[tuple(sorted(g.cycle_type(), reverse=True))] += 1
        for f in pair:
            freq = splitting_census(f, 10_000).frequencies()
            assert set(freq) == set(expected)
            for ct, k in expected.items():
                assert abs(freq[ct] - k / G.order) <= 0.05, (ct, freq[ct], k / G.order)
