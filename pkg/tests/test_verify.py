import json

import pytest

from grusslab import operators as ops
from grusslab.verify import (SuiteConfig, build_point_functional,
                             conjecture_scan, monotone_chebyshev_check,
                             run_suite, sharpness_suite)

FAST = dict(degrees=(1, 2, 4), x_grid=17, grid_n=201, conjecture_nmax=6, quad_n=256)


@pytest.fixture(scope="module")
def fast_report():
    return run_suite(SuiteConfig(**FAST))


class TestRunSuite:
    def test_reduced_suite_passes(self, fast_report):
        assert fast_report.passed
        assert fast_report.suites["bound_sweep"]["failures"] == 0

    def test_coverage(self, fast_report):
        assert set(fast_report.coverage["families"]) == {
            "bernstein", "sdelta", "szasz", "baskakov", "bbh", "king",
            "two_point", "measure_example", "lagrange_cheb"}
        for name in ("new_osc", "gruss_quarter", "mercer", "classical_ws",
                     "measure_support", "classical_norm"):
            assert name in fast_report.coverage["bounds"]

    def test_worst_margin_witnesses_complete(self, fast_report):
        for name, rec in fast_report.suites["bound_sweep"]["worst_margins"].items():
            for key in ("margin", "operator", "n", "x", "f", "g", "lhs"):
                assert key in rec, (name, key)

    def test_constant_corpus_all_zero(self):
        rep = run_suite(SuiteConfig(functions=("e0",), **FAST))
        assert rep.passed
        for rec in rep.suites["bound_sweep"]["worst_margins"].values():
            assert abs(rec["lhs"]) <= 1e-9

    def test_bernstein_identity_equality_case(self):
        rep = run_suite(SuiteConfig(families=("bernstein",), degrees=(1,),
                                    functions=("e1",), x_grid=17, grid_n=201,
                                    conjecture_nmax=2))
        assert rep.passed
        worst = rep.suites["bound_sweep"]["worst_margins"]["classical_ws"]
        assert abs(worst["margin"]) <= 1e-10

    def test_determinism_byte_identical(self):
        cfg = SuiteConfig(families=("bernstein", "two_point"), degrees=(1, 3),
                          x_grid=9, grid_n=101, conjecture_nmax=3)
        a = run_suite(cfg).to_json()
        b = run_suite(cfg).to_json()
        assert a == b

    def test_thread_count_does_not_change_output(self):
        cfg1 = SuiteConfig(families=("bernstein", "szasz"), degrees=(2, 4),
                           x_grid=9, grid_n=101, conjecture_nmax=3, threads=1)
        cfg4 = SuiteConfig(families=("bernstein", "szasz"), degrees=(2, 4),
                           x_grid=9, grid_n=101, conjecture_nmax=3, threads=4)
        a = json.loads(run_suite(cfg1).to_json())
        b = json.loads(run_suite(cfg4).to_json())
        a["config"].pop("threads")
        b["config"].pop("threads")
        assert a == b

    def test_report_is_valid_json_schema_one(self, fast_report):
        payload = json.loads(fast_report.to_json())
        assert payload["schema"] == 1
        assert set(payload) == {"schema", "config", "environment", "suites",
                                "coverage", "pass"}

    def test_config_validation(self):
        with pytest.raises(ValueError):
            SuiteConfig(degrees=())
        with pytest.raises(ValueError):
            SuiteConfig(families=("weird",))
        with pytest.raises(ValueError):
            SuiteConfig(functions=("nope",))

    def test_worker_count_env(self, monkeypatch):
        cfg = SuiteConfig(**FAST)
        monkeypatch.delenv("GRUSS_LAB_THREADS", raising=False)
        assert cfg.worker_count() == 1
        monkeypatch.setenv("GRUSS_LAB_THREADS", "3")
        assert cfg.worker_count() == 3
        monkeypatch.setenv("GRUSS_LAB_THREADS", "junk")
        assert cfg.worker_count() == 1
        assert SuiteConfig(threads=2, **FAST).worker_count() == 2


class TestConjectures:
    def test_degree_one_exactly_convex(self):
        rows = conjecture_scan(1, 101)
        # phi_1 = 2x^2 - 2x + 1: constant positive second difference
        assert rows[0]["min_second_difference"] > 0.0
        assert rows[0]["first_difference_sign_changes"] == 1
        assert rows[0]["min_gap_to_half"] >= -1e-12

    def test_scan_up_to_16(self):
        rows = conjecture_scan(16, 257)
        for row in rows:
            assert row["min_gap_to_half"] >= -1e-12
            assert row["first_difference_sign_changes"] == 1
            assert row["min_second_difference"] > -1e-12

    def test_validation(self):
        with pytest.raises(ValueError):
            conjecture_scan(0)


class TestSharpness:
    def test_all_witnesses_tight(self):
        rows = sharpness_suite()
        kinds = {r["witness"] for r in rows}
        assert kinds == {"bernstein_classical_identity", "two_point_oscillation",
                         "two_point_mercer", "lagrange_pair_product",
                         "signed_two_point"}
        for row in rows:
            assert row["gap"] <= 1e-10, row

    def test_stated_witness_values(self):
        rows = {(r["witness"], r["n"], r["x"]): r for r in sharpness_suite()}
        rec = rows[("bernstein_classical_identity", 4, 0.3)]
        assert rec["lhs"] == pytest.approx(0.0525, abs=1e-12)
        rec = rows[("two_point_oscillation", 1, 0.5)]
        assert rec["lhs"] == 0.25 and rec["rhs"] == 0.25
        rec = rows[("lagrange_pair_product", 2, 0.0)]
        assert rec["lhs"] == pytest.approx(0.5, abs=1e-14)


class TestMonotone:
    def test_signs(self):
        out = monotone_chebyshev_check(SuiteConfig(**FAST))
        assert out["pass"]
        assert out["min_comonotone_T"] >= -1e-12
        assert out["max_antimonotone_T"] <= 1e-12


class TestBuildFunctional:
    @pytest.mark.parametrize("spec_text,x", [
        ("bernstein:4", 0.3), ("sdelta:8", 0.22), ("szasz:2", 3.0),
        ("baskakov:2", 3.0), ("bbh:5", 2.0), ("king:3", 0.7),
        ("two_point:1:0.25", 0.0), ("lagrange_cheb:6", 0.1),
    ])
    def test_families_build(self, spec_text, x):
        spec = ops.parse_operator_spec(spec_text)
        L = build_point_functional(spec, x)
        assert abs(L.weights.sum() - 1.0) <= L.tail_mass_bound + 1e-10

    def test_measure_has_no_point_form(self):
        with pytest.raises(ValueError):
            build_point_functional(ops.OperatorSpec("measure_example", 1, 0.5), 0.1)
