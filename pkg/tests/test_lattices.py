import math
import random
from collections import Counter
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from corpus import box_scan, padic_hilbert
from isospec.errors import BudgetExceeded, Degenerate, NotPositiveDefinite, NotPrime, ParseError, UnknownName
from isospec.lattices import (
    GramMatrix,
    builtin_lattice,
    dual_gram,
    norm_counts,
    parse_gram,
    short_vectors,
    theta_coefficients,
    torus_spectrum,
)
from isospec.lattices.commensurability import (
    random_integral_form,
    random_unimodular,
    spectrally_commensurable,
)
from isospec.lattices.forms import (
    INFINITY,
    diagonalize,
    diagonalize_form,
    hasse_invariant,
    hilbert_symbol,
    rationally_similar,
    relevant_primes,
)
from isospec.linalg import matmul, transpose

Z2 = GramMatrix(((1, 0), (0, 1)))
A2 = GramMatrix(((2, 1), (1, 2)))


def gram(rows):
    return GramMatrix(tuple(tuple(r) for r in rows))


class TestGram:
    def test_parse(self):
        g = parse_gram("2\n1 1/2\n1/2 3\n")
        assert g.entries[0][1] == Fraction(1, 2) and g.determinant() == Fraction(11, 4)

    @pytest.mark.parametrize("text", ["2\n1 0\n", "2\n1 a\n0 1\n", "x\n", "2\n1 0 0\n0 1\n", "2\n1 1/0\n0 1\n"])
    def test_parse_errors(self, text):
        with pytest.raises(ParseError):
            parse_gram(text)

    def test_not_symmetric(self):
        with pytest.raises(ValueError):
            gram([[1, 1], [0, 1]])

    def test_not_positive_definite(self):
        with pytest.raises(NotPositiveDefinite):
            gram([[1, 2], [2, 1]])

    def test_dual(self):
        assert dual_gram(Z2) == Z2
        assert dual_gram(gram([[2]])).entries == ((Fraction(1, 2),),)

    def test_builtins(self):
        assert builtin_lattice("Zn:3").entries == ((1, 0, 0), (0, 1, 0), (0, 0, 1))
        assert builtin_lattice("Zn(3)") == builtin_lattice("Zn:3")
        for name, n in [("E8", 8), ("E8E8", 16), ("D16plus", 16)]:
            g = builtin_lattice(name)
            assert g.dimension == n and g.determinant() == 1 and g.is_even()

    def test_e8_self_dual(self):
        e8 = builtin_lattice("E8")
        inv = dual_gram(e8)
        assert inv.is_integral() and inv.determinant() == 1

    def test_unknown(self):
        with pytest.raises(UnknownName):
            builtin_lattice("E7")


class TestEnumeration:
    def test_z2(self):
        vs = short_vectors(Z2, 1)
        assert len(vs) == 5 and vs[0] == ((0, 0), 0)

    def test_a2(self):
        vs = short_vectors(A2, 2)
        assert len(vs) == 7 and all(q == 2 for _, q in vs[1:])

    def test_e8_roots(self):
        assert len(short_vectors(builtin_lattice("E8"), 2)) == 241

    def test_box_scan_oracle(self):
        rng = random.Random(2024)
        for _ in range(100):
            n = rng.randint(1, 3)
            g = random_integral_form(rng, n, 5)
            if rng.random() < 0.3:
                g = g.scaled(Fraction(1, rng.randint(2, 4)))
            bound = Fraction(rng.randint(0, 30), rng.choice([1, 1, 2, 3]))
            ref = box_scan(g, bound)
            assert short_vectors(g, bound) == ref
            assert norm_counts(g, bound) == dict(Counter(q for _, q in ref))

    def test_theta_examples(self):
        th = theta_coefficients(Z2, 2)
        assert [th[0], th[1], th[2]] == [1, 4, 4]
        th = theta_coefficients(gram([[3]]), 3)
        assert [th[k] for k in range(4)] == [1, 0, 0, 2]

    def test_e8_theta(self):
        th = theta_coefficients(builtin_lattice("E8"), 6)
        # 240 sigma_3(m) at norm 2m
        assert [th[2], th[4], th[6]] == [240, 2160, 6720]

    def test_budget(self):
        with pytest.raises(BudgetExceeded):
            norm_counts(builtin_lattice("E8"), 4, budget=100)
        with pytest.raises(BudgetExceeded):
            short_vectors(builtin_lattice("E8"), 4, budget=100)

    def test_counts_even(self):
        rng = random.Random(9)
        for _ in range(20):
            g = random_integral_form(rng, 3, 6)
            assert all(c % 2 == 0 for q, c in norm_counts(g, 25).items() if q)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 10**6))
    def test_theta_invariant_under_unimodular(self, seed):
        rng = random.Random(seed)
        n = rng.randint(2, 4)
        g = random_integral_form(rng, n, 5)
        U = random_unimodular(rng, n, steps=8)
        assert norm_counts(g, 20) == norm_counts(g.transformed(U), 20)


class TestTorus:
    def test_circle(self):
        s = torus_spectrum(gram([[1]]), 9)
        assert list(s.eigenvalues()) == [0, 1, 1, 4, 4, 9, 9]

    def test_z2_vs_a2(self):
        s1, s2 = torus_spectrum(Z2, 2), torus_spectrum(A2, 2)
        first1 = [m for q, m in s1.multiplicities if q][0]
        first2 = [m for q, m in s2.multiplicities if q][0]
        assert (first1, first2) == (4, 6)
        assert s1.multiplicities != s2.multiplicities

    def test_cutoff_zero(self):
        assert torus_spectrum(Z2, 0).multiplicities == ((0, 1),)

    def test_csv(self):
        assert torus_spectrum(gram([[1]]), 1).to_csv() == "eigenvalue_over_4pi2,multiplicity\n0,1\n1,2\n"


class TestDiagonalize:
    def test_identity(self):
        assert diagonalize_form(builtin_lattice("Zn:3")) == [1, 1, 1]

    def test_a2(self):
        assert diagonalize_form(A2) == [2, Fraction(3, 2)]

    def test_hyperbolic(self):
        d, P = diagonalize([[0, 1], [1, 0]])
        assert d == [1, -1]
        assert matmul(matmul(P, [[0, 1], [1, 0]]), transpose(P)) == [[1, 0], [0, -1]]

    def test_reconstruction(self):
        rng = random.Random(4)
        for _ in range(50):
            n = rng.randint(1, 5)
            a = [[0] * n for _ in range(n)]
            for i in range(n):
                for j in range(i, n):
                    a[i][j] = a[j][i] = rng.randint(-3, 3)
            try:
                d, P = diagonalize(a)
            except Degenerate:
                assert round(np.linalg.det(np.array(a, dtype=float))) == 0
                continue
            D = matmul(matmul(P, a), transpose(P))
            assert D == [[d[i] if i == j else 0 for j in range(n)] for i in range(n)]


class TestHilbert:
    def test_examples(self):
        for p in (2, 3, 5, INFINITY):
            for b in (1, -1, 2, 3, Fraction(-7, 5)):
                assert hilbert_symbol(1, b, p) == 1
        assert hilbert_symbol(-1, -1, INFINITY) == -1
        assert hilbert_symbol(-1, -1, 2) == -1

    def test_not_prime(self):
        with pytest.raises(NotPrime):
            hilbert_symbol(2, 3, 4)

    def test_padic_oracle(self):
        values = [Fraction(n, d) for n in range(-10, 11) if n for d in range(1, 11)]
        rng = random.Random(1)
        for p in (2, 3, 5, 7, 11, 13):
            for _ in range(250):
                a, b = rng.choice(values), rng.choice(values)
                assert hilbert_symbol(a, b, p) == padic_hilbert(a, b, p), (a, b, p)

    def test_product_formula(self):
        rng = random.Random(2)
        for _ in range(200):
            a = Fraction(rng.choice([-1, 1]) * rng.randint(1, 500), rng.randint(1, 500))
            b = Fraction(rng.choice([-1, 1]) * rng.randint(1, 500), rng.randint(1, 500))
            places = [*relevant_primes(a, b), INFINITY]
            assert math.prod(hilbert_symbol(a, b, v) for v in places) == 1

    @settings(max_examples=200, deadline=None)
    @given(st.integers(-60, 60).filter(bool), st.integers(-60, 60).filter(bool),
           st.integers(-60, 60).filter(bool), st.sampled_from([2, 3, 5, 7, 11, 13, INFINITY]))
    def test_bimultiplicative(self, a, a2, b, p):
        assert hilbert_symbol(a * a2, b, p) == hilbert_symbol(a, b, p) * hilbert_symbol(a2, b, p)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(-60, 60).filter(bool), st.integers(-60, 60).filter(bool),
           st.sampled_from([2, 3, 5, 7, INFINITY]))
    def test_symmetric(self, a, b, p):
        assert hilbert_symbol(a, b, p) == hilbert_symbol(b, a, p)


class TestHasse:
    def test_all_ones(self):
        for p in (2, 3, 5, INFINITY):
            assert hasse_invariant([1, 1, 1, 1], p) == 1

    def test_single_pair(self):
        assert hasse_invariant([2, Fraction(3, 2)], 3) == hilbert_symbol(2, Fraction(3, 2), 3)

    def test_reordering(self):
        d = [2, Fraction(3, 2), -5, 7]
        for p in (2, 3, 5, 7, INFINITY):
            assert hasse_invariant(d, p) == hasse_invariant(d[::-1], p)

    def test_path_independence(self):
        rng = random.Random(8)
        for _ in range(40):
            n = rng.randint(2, 4)
            g = random_integral_form(rng, n, 6)
            while True:
                T = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
                if round(np.linalg.det(np.array(T, dtype=float))) != 0:
                    break
            h = matmul(matmul(transpose(T), g.entries), T)
            d1, d2 = diagonalize_form(g), diagonalize_form(h)
            for p in [*relevant_primes(*d1, *d2), INFINITY]:
                assert hasse_invariant(d1, p) == hasse_invariant(d2, p)


class TestSimilarity:
    def test_self(self):
        v = rationally_similar(A2, A2)
        assert v.similar and v.scaling == 1

    def test_z2_a2(self):
        assert not rationally_similar(Z2, A2).similar

    def test_scaled(self):
        # 2 is not a norm from Q(sqrt(-3)), so c = 1 fails and c = 1/2 is needed
        v = rationally_similar(A2, A2.scaled(2))
        assert v.similar and v.scaling == Fraction(1, 2)

    def test_scaling_by_a_norm(self):
        # 3 is a norm from Q(sqrt(-3)): 3 * A2 is an index-3 sublattice of A2
        v = rationally_similar(A2, A2.scaled(3))
        assert v.similar and v.scaling == 1

    def test_milnor_pair(self):
        v = rationally_similar(builtin_lattice("E8E8"), builtin_lattice("D16plus"))
        assert v.similar and v.scaling == 1

    def test_dimension_mismatch(self):
        assert not rationally_similar(Z2, gram([[1]])).similar

    def test_similar_does_not_imply_isospectral(self):
        # diag(1, 4) is congruent to Z^2 over Q but has a different theta series
        g = gram([[1, 0], [0, 4]])
        assert rationally_similar(Z2, g).similar
        assert torus_spectrum(Z2, 10).multiplicities != torus_spectrum(g, 10).multiplicities
        assert not spectrally_commensurable(Z2, g, 10).verdict


class TestCommensurable:
    def test_rescaling(self):
        r = spectrally_commensurable(A2, A2.scaled(2), 20)
        assert r.verdict and r.multiplicity_respecting
        # spectra are dual norms, so scaling the form by 2 halves every value
        assert r.scaling in (2, Fraction(1, 2))
        assert "finite cutoff" in r.caveat

    def test_one_dimensional(self):
        r = spectrally_commensurable(gram([[1]]), gram([[Fraction(97, 61)]]), 50)
        assert r.verdict and r.scaling == Fraction(97, 61)

    def test_z2_a2(self):
        assert not spectrally_commensurable(Z2, A2, 20).verdict

    def test_multiplicity_option(self):
        r = spectrally_commensurable(A2, A2.transformed([[1, 1], [0, 1]]), 10, multiplicities=True)
        assert r.verdict and r.scaling == 1 and r.multiplicity_respecting
