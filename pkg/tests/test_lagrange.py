import math

import numpy as np
import pytest

from grusslab import lagrange as lag
from grusslab import operators as ops
from grusslab.funcspace import NodeSet, oscillation


def direct_basis_oracle(n, x):
    """l_k(x) from the defining product quotient (small n only)."""
    nodes = lag.chebyshev_grid(n).nodes
    out = np.empty(n)
    for k in range(n):
        num = den = 1.0
        for j in range(n):
            if j != k:
                num *= x - nodes[j]
                den *= nodes[k] - nodes[j]
        out[k] = num / den
    return out


class TestGrid:
    def test_nodes_sorted_symmetric(self):
        for n in (1, 2, 9, 64):
            g = lag.chebyshev_grid(n)
            assert np.all(np.diff(g.nodes) > 0)
            assert np.all(np.abs(g.nodes) < 1.0)
            assert np.allclose(g.nodes, -g.nodes[::-1], atol=1e-15)

    def test_explicit_cosines(self):
        g = lag.chebyshev_grid(3)
        want = np.sort(np.cos((2 * np.arange(1, 4) - 1) * math.pi / 6))
        assert np.allclose(g.nodes, want, atol=1e-15)


class TestBasis:
    def test_single_node(self):
        L = lag.lagrange_basis(1, 0.3)
        assert L.weights.tolist() == [1.0]

    def test_two_nodes_at_center(self):
        L = lag.lagrange_basis(2, 0.0)
        assert np.allclose(L.weights, [0.5, 0.5], atol=1e-15)
        assert np.allclose(np.abs(L.nodes), math.sqrt(2) / 2, atol=1e-15)

    def test_node_hit_is_delta(self):
        for n in (2, 5, 16):
            nodes = lag.chebyshev_grid(n).nodes
            for k in (0, n - 1):
                w = lag.basis_weights(n, float(nodes[k]))
                assert w[k] == 1.0 and np.count_nonzero(w) == 1

    def test_matches_product_oracle(self):
        for n in (2, 3, 5, 8):
            for x in (-0.9, -0.33, 0.11, 0.97):
                got = lag.basis_weights(n, x)
                assert np.allclose(got, direct_basis_oracle(n, x), atol=1e-12)

    def test_partition_of_unity(self):
        for n in (1, 2, 7, 33, 64):
            for x in np.linspace(-1, 1, 41):
                assert np.sum(lag.basis_weights(n, float(x))) == pytest.approx(
                    1.0, abs=1e-12)

    def test_polynomial_reproduction(self):
        # interpolation is exact on polynomials of degree < n
        for n in (2, 4, 8):
            nodes = lag.chebyshev_grid(n).nodes
            for deg in range(n):
                for x in np.linspace(-1, 1, 17):
                    w = lag.basis_weights(n, float(x))
                    assert float(w @ nodes ** deg) == pytest.approx(
                        x ** deg, abs=1e-9)

    def test_domain_check(self):
        with pytest.raises(ValueError):
            lag.lagrange_basis(4, 1.5)


class TestLebesgue:
    def test_degree_one_constant(self):
        for x in (-1.0, 0.2, 1.0):
            assert lag.lebesgue_function(1, x) == 1.0

    def test_two_nodes(self):
        assert lag.lebesgue_function(2, 0.0) == pytest.approx(1.0, abs=1e-15)
        assert lag.lebesgue_function(2, 1.0) == pytest.approx(math.sqrt(2), abs=1e-14)

    def test_at_least_one_and_one_at_nodes(self):
        for n in (2, 5, 16):
            for x in np.linspace(-1, 1, 33):
                assert lag.lebesgue_function(n, float(x)) >= 1.0 - 1e-12
            for xk in lag.chebyshev_grid(n).nodes:
                assert lag.lebesgue_function(n, float(xk)) == pytest.approx(
                    1.0, abs=1e-12)

    def test_constants(self):
        assert lag.lebesgue_constant(1) == 1.0
        assert lag.lebesgue_constant(2) == pytest.approx(math.sqrt(2), abs=1e-6)
        assert lag.lebesgue_constant(3) == pytest.approx(5.0 / 3.0, abs=1e-6)

    def test_grid_size_validation(self):
        with pytest.raises(ValueError):
            lag.lebesgue_constant(4, grid_size=64)

    def test_rivlin_window_small(self):
        for n in (2, 3, 8, 32):
            gap = lag.rivlin_gap(n)
            assert lag.RIVLIN_LO < gap < lag.RIVLIN_HI


class TestPairProductSum:
    def test_degree_one_zero(self):
        assert lag.pair_product_sum(1, 0.4) == 0.0

    def test_two_nodes_center(self):
        assert lag.pair_product_sum(2, 0.0) == pytest.approx(0.25, abs=1e-15)

    def test_zero_at_nodes(self):
        for n in (2, 6, 17):
            for xk in lag.chebyshev_grid(n).nodes:
                assert lag.pair_product_sum(n, float(xk)) == 0.0

    def test_half_difference_vs_double_sum(self):
        for n in (2, 4, 9):
            for x in (-0.77, 0.05, 0.93):
                w = lag.basis_weights(n, x)
                brute = sum(
                    abs(w[k] * w[m])
                    for k in range(n) for m in range(k + 1, n)
                )
                assert lag.pair_product_sum(n, x) == pytest.approx(brute, abs=1e-12)


class TestBounds:
    def test_constant_function_trivial(self, corpus_pm):
        res = lag.lagrange_new_bound(5, corpus_pm["e0"], corpus_pm["sinpi"], 0.37)
        assert res.lhs <= 1e-13
        assert res.rhs["new_osc"] >= 0.0

    def test_equality_two_nodes_center(self, corpus_pm):
        res = lag.lagrange_new_bound(2, corpus_pm["e1"], corpus_pm["e1"], 0.0)
        assert res.lhs == pytest.approx(0.5, abs=1e-14)
        assert res.rhs["new_osc"] == pytest.approx(0.5, abs=1e-14)

    def test_generic_pair_holds(self, corpus_pm):
        for x in (-0.9, 0.3, 0.84):
            res = lag.lagrange_new_bound(4, corpus_pm["absmid"], corpus_pm["sinpi"], x)
            assert res.lhs <= res.rhs["new_osc"] + 1e-10

    def test_matches_signed_bound_route(self, corpus_pm):
        from grusslab.bounds import new_bound_signed
        for n in (2, 5):
            for x in (-0.4, 0.66):
                L = lag.lagrange_basis(n, x)
                direct = new_bound_signed(L, corpus_pm["e2"], corpus_pm["randlip"])
                res = lag.lagrange_new_bound(n, corpus_pm["e2"], corpus_pm["randlip"], x)
                assert direct == pytest.approx(res.rhs["new_osc"], rel=1e-12, abs=1e-15)

    def test_classical_forms(self, corpus_pm):
        e0 = corpus_pm["e0"]
        forms = lag.lagrange_classical_bound(4, e0, e0)
        assert forms["classical_norm"] == 0.0

        e1 = corpus_pm["e1"]
        forms = lag.lagrange_classical_bound(2, e1, e1)
        lam = math.sqrt(2)
        assert forms["classical_norm"] == pytest.approx(
            0.25 * lam * (1 + lam) * 4.0, rel=1e-6)
        # dominates the pointwise functional everywhere
        xs = np.linspace(-1, 1, 101)
        worst = max(abs(ops.chebyshev_T(lag.lagrange_basis(2, float(x)), e1, e1))
                    for x in xs)
        assert worst <= forms["classical_norm"] + 1e-12

    def test_norm_form_below_log_form(self, corpus_pm):
        f, g = corpus_pm["e1"], corpus_pm["e2"]
        for n in range(2, 65):
            forms = lag.lagrange_classical_bound(n, f, g)
            assert forms["classical_norm"] <= forms["classical_log"] + 1e-12
            assert forms["classical_log"] <= forms["classical_log_stated"] + 1e-12


class TestIdempotence:
    def test_interpolation_at_nodes(self, corpus_pm):
        f = corpus_pm["sinpi"]
        for n in (2, 6, 31):
            for xk in lag.chebyshev_grid(n).nodes:
                L = lag.lagrange_basis(n, float(xk))
                assert ops.apply(L, f) == float(f(xk))

    def test_oscillation_over_nodes(self, corpus_pm):
        n = 8
        nodes = NodeSet(lag.chebyshev_grid(n).nodes)
        assert oscillation(corpus_pm["e1"], nodes) == pytest.approx(
            2 * math.cos(math.pi / 16), abs=1e-14)


def test_hermann_ratio_positive():
    for n in (2, 8, 32):
        assert lag.hermann_ratio(n, 257) > 0.0
