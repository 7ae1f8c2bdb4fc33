import math

import numpy as np
import pytest

from rkrp import (
    CodeSpec,
    ConfigurationError,
    FixedSet,
    TrialConfig,
    alpha_to_big_n,
    avg_log_condition,
    eta_summary,
    log_condition_samples,
    mds_check,
    run_trials,
)
from rkrp.metrics import TrialRecord


class TestRunTrials:
    def test_deterministic(self):
        config = TrialConfig(kind="rkrp_nonsystematic", m=2, n=2, big_n=6,
                             num_trials=5, base_seed=42)
        first = run_trials(config)
        second = run_trials(config)
        assert first == second

    def test_record_fields(self):
        config = TrialConfig(kind="rkrp_nonsystematic", m=2, n=3, big_n=8,
                             num_trials=3, base_seed=0)
        records = run_trials(config)
        assert len(records) == 3
        for t, rec in enumerate(records):
            assert rec.seed == t
            assert rec.kind == "rkrp_nonsystematic"
            assert (rec.m, rec.n, rec.big_n) == (2, 3, 8)
            assert 0 <= rec.s1 <= 6
            assert not rec.singular_flag
            assert rec.relative_err < 1e-9
            assert math.isfinite(rec.log_cond)

    def test_systematic_all_survive_is_exact(self):
        # copied blocks are the worker outputs verbatim; the only error
        # against independently recomputed truth is summation-order noise
        config = TrialConfig(kind="rkrp_systematic", m=2, n=2, big_n=7,
                             num_trials=4, base_seed=1,
                             model=FixedSet(range(1, 5)))
        for rec in run_trials(config):
            assert rec.s1 == 0
            assert rec.relative_err < 1e-14
            assert rec.log_cond == 0.0

    def test_s1_counts_systematic_stragglers(self):
        # workers 2 and 3 of the K=4 systematic set never respond
        config = TrialConfig(kind="rkrp_systematic", m=2, n=2, big_n=8,
                             num_trials=2, base_seed=2,
                             model=FixedSet([1, 4, 5, 6, 7, 8]))
        for rec in run_trials(config):
            assert rec.s1 == 2
            assert rec.relative_err < 1e-10

    def test_polynomial_large_k_is_flagged_singular(self):
        # an ill-conditioned enough system trips the pivot alarm instead
        # of silently emitting garbage
        config = TrialConfig(kind="polynomial", m=7, n=7, big_n=49,
                             num_trials=2, base_seed=3)
        records = run_trials(config)
        assert all(r.singular_flag for r in records)
        assert all(r.relative_err is None for r in records)
        assert all(math.isnan(r.log_cond) for r in records)

    def test_all_entries_flag(self):
        config = TrialConfig(kind="rkrp_nonsystematic", m=2, n=2, big_n=5,
                             num_trials=3, base_seed=4, all_entries=True)
        for rec in run_trials(config):
            assert rec.relative_err < 1e-9

    def test_custom_data_dims(self):
        config = TrialConfig(kind="rkrp_nonsystematic", m=2, n=2, big_n=5,
                             num_trials=2, base_seed=5, data_dims=(6, 3, 10))
        for rec in run_trials(config):
            assert rec.relative_err < 1e-9

    def test_config_validation(self):
        with pytest.raises(ConfigurationError):
            TrialConfig(kind="rkrp_nonsystematic", m=2, n=2, big_n=6,
                        num_trials=0, base_seed=0)
        with pytest.raises(ConfigurationError):
            TrialConfig(kind="rkrp_nonsystematic", m=2, n=2, big_n=3,
                        num_trials=1, base_seed=0)


class TestEtaSummary:
    def _rec(self, err, singular=False):
        return TrialRecord(seed=0, kind="rkrp_nonsystematic", m=1, n=1,
                           big_n=1, s1=0, relative_err=err,
                           log_cond=float("nan") if singular else 0.0,
                           singular_flag=singular)

    def test_mean_and_stderr_by_hand(self):
        mean, stderr, total, singular = eta_summary(
            [self._rec(1.0), self._rec(3.0)])
        assert mean == 2.0
        assert stderr == pytest.approx(np.std([1.0, 3.0], ddof=1) / math.sqrt(2))
        assert (total, singular) == (2, 0)

    def test_single_record_has_zero_stderr(self):
        mean, stderr, total, singular = eta_summary([self._rec(0.5)])
        assert (mean, stderr, total, singular) == (0.5, 0.0, 1, 0)

    def test_singular_records_excluded_and_counted(self):
        mean, stderr, total, singular = eta_summary(
            [self._rec(2.0), self._rec(None, singular=True), self._rec(4.0)])
        assert mean == 3.0
        assert (total, singular) == (3, 1)

    def test_all_singular(self):
        mean, stderr, total, singular = eta_summary(
            [self._rec(None, singular=True)] * 3)
        assert math.isnan(mean) and math.isnan(stderr)
        assert (total, singular) == (3, 3)


class TestMdsCheck:
    def test_single_block_never_fails(self):
        out = mds_check("rkrp_nonsystematic", 1, 1, 3, num_subsets=50, seed=0)
        assert out == {"failures": 0, "trials": 50}

    def test_nonsystematic_random_subsets(self):
        out = mds_check("rkrp_nonsystematic", 2, 3, 10, num_subsets=300, seed=1)
        assert out["failures"] == 0

    def test_systematic_random_patterns(self):
        out = mds_check("rkrp_systematic", 2, 3, 10, num_subsets=300, seed=2)
        assert out["failures"] == 0

    def test_detects_deficient_spec(self):
        # rows 1 and 2 identical: any subset containing both is deficient
        p = np.array([[1.0, 2.0], [1.0, 2.0], [0.5, -1.0], [2.0, 0.3],
                      [0.1, 0.9], [1.4, -0.6]])
        q = np.array([[1.0, -1.0], [1.0, -1.0], [0.7, 2.0], [-0.2, 1.1],
                      [0.8, 0.4], [-1.3, 0.5]])
        bad = CodeSpec(kind="rkrp_nonsystematic", m=2, n=2, big_n=6, p=p, q=q)
        out = mds_check("rkrp_nonsystematic", 2, 2, 6, num_subsets=200,
                        seed=3, spec=bad)
        assert out["failures"] >= 1


class TestAlphaToBigN:
    @pytest.mark.parametrize("big_k,alpha,expected", [
        (49, 0.0, 49),
        (49, 0.05, 52),
        (49, 0.3, 70),       # exact division must not be promoted to 71
        (49, 0.9, 490),
        (49, 0.95, 980),
        (100, 0.05, 106),
        (36, 0.1, 40),
    ])
    def test_values(self, big_k, alpha, expected):
        assert alpha_to_big_n(big_k, alpha) == expected

    def test_ceiling_not_rounding(self):
        # ceil(49 / 0.72) = 69; naive round(49 * 1.28) would give 63
        assert alpha_to_big_n(49, 0.28) == 69

    def test_range_validation(self):
        with pytest.raises(ConfigurationError):
            alpha_to_big_n(49, 1.0)
        with pytest.raises(ConfigurationError):
            alpha_to_big_n(49, -0.1)


class TestLogCondition:
    def test_deterministic(self):
        a = log_condition_samples("rkrp_nonsystematic", 3, 3, 0.2, 20, seed=7)
        b = log_condition_samples("rkrp_nonsystematic", 3, 3, 0.2, 20, seed=7)
        assert np.array_equal(a, b)

    def test_systematic_alpha_zero_is_identity(self):
        # N = K: every systematic worker responds, nothing to solve
        samples = log_condition_samples("rkrp_systematic", 3, 3, 0.0, 25, seed=8)
        assert np.all(samples == 0.0)

    def test_nonsystematic_level(self):
        samples = log_condition_samples("rkrp_nonsystematic", 7, 7, 0.1, 60, seed=9)
        assert 5.0 < samples.mean() < 7.0

    def test_orthopoly_grows_with_alpha(self):
        low = log_condition_samples("orthopoly", 7, 7, 0.1, 30, seed=10).mean()
        high = log_condition_samples("orthopoly", 7, 7, 0.9, 30, seed=10).mean()
        assert high > low + 2.0

    def test_unknown_kind(self):
        with pytest.raises(ConfigurationError):
            log_condition_samples("mystery", 2, 2, 0.1, 5, seed=0)

    def test_avg_log_condition_shape(self):
        curve = avg_log_condition("rkrp_nonsystematic", 2, 2, [0.0, 0.2, 0.4],
                                  num_samples=10, seed=11)
        assert [alpha for alpha, _ in curve] == [0.0, 0.2, 0.4]
        assert all(math.isfinite(v) for _, v in curve)
