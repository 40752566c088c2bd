import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.special import comb

from grusslab import operators as ops
from grusslab.funcspace import standard_corpus

FAMILY_BUILDERS = {
    "bernstein": lambda n, x: ops.bernstein_at(n, x),
    "sdelta": lambda n, x: ops.sdelta_at(n, x),
    "king": lambda n, x: ops.king_at(n, x),
    "bbh": lambda n, x: ops.bbh_at(n, 4.0 * x / (1.0 - x + 1e-9)),
    "szasz": lambda n, x: ops.szasz_at(n, 50.0 * x),
    "baskakov": lambda n, x: ops.baskakov_at(n, 50.0 * x),
}


class TestBernstein:
    def test_degree_one_half(self):
        L = ops.bernstein_at(1, 0.5)
        assert L.nodes.tolist() == [0.0, 1.0]
        assert L.weights.tolist() == [0.5, 0.5]

    def test_degree_two_half(self):
        L = ops.bernstein_at(2, 0.5)
        assert np.allclose(L.weights, [0.25, 0.5, 0.25], atol=1e-15)

    def test_endpoint_point_mass(self):
        for n in (1, 5, 64):
            L = ops.bernstein_at(n, 0.0)
            assert L.weights[0] == 1.0 and np.all(L.weights[1:] == 0.0)

    def test_matches_binomial_oracle(self):
        for n in (3, 8, 17):
            for x in (0.1, 0.37, 0.5, 0.93):
                L = ops.bernstein_at(n, x)
                oracle = [comb(n, k, exact=True) * x ** k * (1 - x) ** (n - k)
                          for k in range(n + 1)]
                assert np.allclose(L.weights, oracle, rtol=1e-13, atol=1e-300)

    def test_domain_error(self):
        with pytest.raises(ValueError):
            ops.bernstein_at(4, 1.2)


class TestSdelta:
    def test_interpolatory_at_knots(self, corpus01):
        f = corpus01["sinpi"]
        for n in (2, 7, 64):
            for k in range(n + 1):
                L = ops.sdelta_at(n, k / n)
                assert len(L.weights) == 1 and L.weights[0] == 1.0
                assert ops.apply(L, f) == float(f(k / n))

    def test_hat_between_knots(self):
        L = ops.sdelta_at(2, 0.25)
        assert L.nodes.tolist() == [0.0, 0.5]
        assert np.allclose(L.weights, [0.5, 0.5], atol=1e-15)
        L = ops.sdelta_at(1, 1.0 / 3.0)
        assert L.nodes.tolist() == [0.0, 1.0]
        assert np.allclose(L.weights, [2.0 / 3.0, 1.0 / 3.0], atol=1e-15)

    def test_linear_reproduction(self, corpus01):
        e1 = corpus01["e1"]
        for n in (1, 5, 32):
            for x in np.linspace(0, 1, 17):
                assert ops.apply(ops.sdelta_at(n, float(x)), e1) == \
                    pytest.approx(x, abs=1e-13)


class TestSzasz:
    def test_point_mass_at_zero(self):
        L = ops.szasz_at(5, 0.0)
        assert L.nodes.tolist() == [0.0] and L.weights.tolist() == [1.0]
        assert L.tail_mass_bound == 0.0

    def test_poisson_oracle(self):
        L = ops.szasz_at(1, 1.0, 1e-12)
        oracle = [math.exp(-1) / math.factorial(k) for k in range(len(L.weights))]
        assert np.allclose(L.weights, oracle, rtol=1e-14)
        assert abs(L.weights.sum() - 1.0) <= 1e-12

    def test_mean_identity(self):
        L = ops.szasz_at(4, 2.5, 1e-12)
        assert float(L.weights @ L.nodes) == pytest.approx(2.5, abs=1e-9)

    def test_bad_tail_eps(self):
        with pytest.raises(ValueError):
            ops.szasz_at(2, 1.0, 0.0)

    def test_truncation_stability(self, corpus_ray):
        f = corpus_ray["expneg"]
        for x in (0.5, 7.0, 50.0):
            a = ops.apply(ops.szasz_at(8, x, 1e-8), f)
            b = ops.apply(ops.szasz_at(8, x, 1e-9), f)
            assert abs(a - b) < 10.0 * 1e-8 * 1.0


class TestBaskakov:
    def test_point_mass_at_zero(self):
        L = ops.baskakov_at(3, 0.0)
        assert L.weights.tolist() == [1.0]

    def test_geometric_oracle(self):
        L = ops.baskakov_at(1, 1.0, 1e-12)
        oracle = 0.5 ** (np.arange(len(L.weights)) + 1.0)
        assert np.allclose(L.weights, oracle, rtol=1e-14)
        assert abs(L.weights.sum() - 1.0) <= 1e-12

    def test_mean_identity(self):
        L = ops.baskakov_at(2, 1.0, 1e-12)
        assert float(L.weights @ L.nodes) == pytest.approx(1.0, abs=1e-9)

    def test_negbin_oracle_small(self):
        n, x = 3, 0.6
        L = ops.baskakov_at(n, x, 1e-12)
        ks = np.arange(len(L.weights))
        oracle = comb(n + ks - 1, ks) * x ** ks / (1 + x) ** (n + ks)
        assert np.allclose(L.weights, oracle, rtol=1e-12)

    def test_truncation_stability(self, corpus_ray):
        f = corpus_ray["sinpi"]
        for x in (0.5, 7.0, 50.0):
            a = ops.apply(ops.baskakov_at(4, x, 1e-8), f)
            b = ops.apply(ops.baskakov_at(4, x, 1e-9), f)
            assert abs(a - b) < 10.0 * 1e-8 * 1.0


class TestBBH:
    def test_degree_one_expansion(self):
        for x in (0.0, 0.5, 3.0):
            L = ops.bbh_at(1, x)
            assert L.nodes.tolist() == [0.0, 1.0]
            assert np.allclose(L.weights, [1 / (1 + x), x / (1 + x)], atol=1e-15)

    def test_point_mass_at_zero(self):
        L = ops.bbh_at(6, 0.0)
        assert L.weights[0] == 1.0

    def test_degree_two_at_one(self):
        L = ops.bbh_at(2, 1.0)
        assert np.allclose(L.nodes, [0.0, 0.5, 2.0], atol=0)
        assert np.allclose(L.weights, [0.25, 0.5, 0.25], atol=1e-15)


class TestKing:
    def test_r_star_values(self):
        for x in (0.0, 0.3, 1.0):
            assert ops.r_star(1, x) == pytest.approx(x * x, abs=1e-15)
        assert ops.r_star(2, 0.0) == 0.0
        for n in (2, 5, 64):
            assert ops.r_star(n, 1.0) == pytest.approx(1.0, abs=1e-12)

    def test_r_star_quadratic(self):
        for n in (2, 3, 17, 64):
            for x in np.linspace(0, 1, 21):
                r = ops.r_star(n, float(x))
                assert 0.0 <= r <= 1.0
                assert r / n + (n - 1) / n * r * r == pytest.approx(x * x, abs=1e-12)

    def test_degree_one_weights(self):
        for x in (0.2, 0.9):
            L = ops.king_at(1, x)
            assert np.allclose(L.weights, [1 - x * x, x * x], atol=1e-15)

    def test_endpoints(self):
        for n in (1, 4, 32):
            assert ops.king_at(n, 0.0).weights[0] == 1.0
            assert ops.king_at(n, 1.0).weights[-1] == pytest.approx(1.0, abs=1e-12)

    def test_reproduces_e2(self, corpus01):
        e2 = corpus01["e2"]
        for n in (1, 2, 8, 64):
            for x in np.linspace(0, 1, 11):
                assert ops.apply(ops.king_at(n, float(x)), e2) == pytest.approx(
                    x * x, abs=1e-9)


class TestTwoPoint:
    @pytest.mark.parametrize("a", [0.0, 0.25, 0.5, 1.0])
    def test_weights(self, a):
        L = ops.two_point(a)
        assert L.weights.tolist() == [1.0 - a, a]

    def test_range_error(self):
        with pytest.raises(ValueError):
            ops.two_point(1.5)

    def test_apply_e1(self, corpus01):
        for a in (0.0, 0.25, 0.7):
            assert ops.apply(ops.two_point(a), corpus01["e1"]) == a


class TestMeasureExample:
    def test_point_mass_multiplicative(self, corpus01):
        t, rhs = ops.measure_example_T(0.0, corpus01["sinpi"], corpus01["e2"])
        assert t == 0.0 and rhs == 0.0

    def test_lebesgue_variance_of_identity(self, corpus01):
        t, rhs = ops.measure_example_T(1.0, corpus01["e1"], corpus01["e1"])
        assert t == pytest.approx(1.0 / 12.0, abs=1e-12)
        assert rhs == pytest.approx(0.5, abs=1e-12)

    def test_half_coefficient(self, corpus01):
        _, rhs = ops.measure_example_T(0.5, corpus01["e1"], corpus01["e1"])
        assert rhs == pytest.approx(0.5 * 0.5 * 1.5, abs=1e-12)

    def test_bound_holds_on_corpus(self, corpus01):
        for a in (0.1, 0.5, 0.9):
            for f in ("e1", "halfstep", "sinpi"):
                for g in ("e2", "randlip"):
                    t, rhs = ops.measure_example_T(a, corpus01[f], corpus01[g])
                    assert abs(t) <= rhs + 8.0 / 2048.0 * 2.0

    def test_quad_n_validation(self, corpus01):
        with pytest.raises(ValueError):
            ops.measure_example_T(0.5, corpus01["e1"], corpus01["e1"], quad_n=0)


class TestApplyAndT:
    def test_partition_of_unity(self, corpus01):
        for n in (1, 6, 64):
            for x in (0.0, 0.31, 1.0):
                assert ops.apply(ops.bernstein_at(n, x), corpus01["e0"]) == \
                    pytest.approx(1.0, abs=1e-13)

    def test_linear_reproduction(self, corpus01):
        e1 = corpus01["e1"]
        for n in (1, 6, 64):
            for x in np.linspace(0, 1, 9):
                assert ops.apply(ops.bernstein_at(n, float(x)), e1) == \
                    pytest.approx(x, abs=1e-13)

    def test_domain_violation(self, corpus01):
        L = ops.bbh_at(2, 1.0)  # nodes reach 2.0
        with pytest.raises(ValueError):
            ops.apply(L, corpus01["e1"])

    def test_second_moment_bernstein(self, corpus01):
        e1 = corpus01["e1"]
        for n in (1, 4, 16):
            for x in (0.2, 0.5, 0.77):
                t = ops.chebyshev_T(ops.bernstein_at(n, x), e1, e1)
                assert t == pytest.approx(x * (1 - x) / n, abs=1e-13)

    def test_constant_gives_zero(self, corpus01):
        for L in (ops.bernstein_at(5, 0.3), ops.two_point(0.7)):
            assert abs(ops.chebyshev_T(L, corpus01["e0"], corpus01["e2"])) < 1e-14

    def test_two_point_product(self, corpus01):
        e1 = corpus01["e1"]
        for a in (0.1, 0.25, 0.5):
            assert ops.chebyshev_T(ops.two_point(a), e1, e1) == \
                pytest.approx(a * (1 - a), abs=1e-15)


class TestPairwiseIdentity:
    def test_two_point_exact(self, corpus01):
        e1 = corpus01["e1"]
        for a in (0.1, 0.5, 0.8):
            assert ops.pairwise_identity(ops.two_point(a), e1, e1) == \
                pytest.approx(a * (1 - a), abs=1e-16)

    def test_constant_is_exact_zero(self, corpus01):
        L = ops.bernstein_at(7, 0.41)
        assert ops.pairwise_identity(L, corpus01["e0"], corpus01["randlip"]) == 0.0

    def test_cross_check_bernstein(self, corpus01):
        L = ops.bernstein_at(3, 0.3)
        t1 = ops.chebyshev_T(L, corpus01["e1"], corpus01["e2"])
        t2 = ops.pairwise_identity(L, corpus01["e1"], corpus01["e2"])
        assert t1 == pytest.approx(t2, rel=1e-12, abs=1e-15)

    @given(st.sampled_from(["bernstein", "sdelta", "king", "bbh"]),
           st.integers(1, 16), st.floats(0.01, 0.99))
    def test_identity_equivalence_property(self, family, n, x):
        corpus = standard_corpus((0.0, 1.0) if family != "bbh" else (0.0, math.inf))
        L = FAMILY_BUILDERS[family](n, x)
        f, g = corpus["sinpi"], corpus["expneg"]
        t1 = ops.chebyshev_T(L, f, g)
        t2 = ops.pairwise_identity(L, f, g)
        assert abs(t1 - t2) <= 1e-10 * max(abs(t1), abs(t2)) + 1e-13


class TestPointFunctionalInvariants:
    @given(st.sampled_from(sorted(FAMILY_BUILDERS)), st.integers(1, 32),
           st.floats(0.0, 0.999))
    def test_partition_and_positivity(self, family, n, x):
        L = FAMILY_BUILDERS[family](n, x)
        assert abs(L.weights.sum() - 1.0) <= L.tail_mass_bound + 1e-10
        assert L.positive and L.weights.min() >= -1e-12
        assert np.unique(L.nodes).size == L.nodes.size

    def test_sign_flip_breaks_partition(self):
        L = ops.bernstein_at(6, 0.37)
        w = L.weights.copy()
        k = int(np.argmax(w))
        w[k] = -w[k]
        with pytest.raises(ValueError):
            ops.PointFunctional(L.nodes, w, positive=False)

    def test_positive_flag_rejects_negative_weight(self):
        with pytest.raises(ValueError):
            ops.PointFunctional(np.array([0.0, 0.5, 1.0]),
                                np.array([0.5, 1.0, -0.5]), positive=True)

    def test_duplicate_nodes_rejected(self):
        with pytest.raises(ValueError):
            ops.PointFunctional(np.array([0.2, 0.2]), np.array([0.5, 0.5]),
                                positive=True)


class TestOperatorSpec:
    def test_roundtrip(self):
        spec = ops.parse_operator_spec("two_point:1:0.25")
        assert spec == ops.OperatorSpec("two_point", 1, 0.25)
        assert spec.spec_string() == "two_point:1:0.25"
        assert ops.parse_operator_spec("bernstein:8") == ops.OperatorSpec("bernstein", 8)

    def test_validation(self):
        with pytest.raises(ValueError):
            ops.parse_operator_spec("durrmeyer:4")
        with pytest.raises(ValueError):
            ops.OperatorSpec("two_point", 1, 1.5)
        with pytest.raises(ValueError):
            ops.OperatorSpec("bernstein", 0)


def test_chebyshev_monotone_signs(corpus01):
    e1, e2 = corpus01["e1"], corpus01["e2"]
    one_minus = standard_corpus((0.0, 1.0))["e1"]
    L = ops.bernstein_at(8, 0.4)
    assert ops.chebyshev_T(L, e1, e2) > 0.0
    for a in (0.2, 0.5, 0.9):
        t = ops.chebyshev_T(ops.two_point(a), e1, e1)
        assert t >= 0.0
    # antimonotone pair through the pairwise route
    import grusslab.funcspace as fs
    anti = fs.RealFunction("one_minus_e1", (0.0, 1.0),
                           lambda v: 1.0 - np.asarray(v, float))
    for a in (0.2, 0.5, 0.9):
        assert ops.chebyshev_T(ops.two_point(a), e1, anti) == \
            pytest.approx(-a * (1 - a), abs=1e-15)
