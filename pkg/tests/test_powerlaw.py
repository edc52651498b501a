import math

import numpy as np
import pytest
from scipy import special

from nvsyn.powerlaw import (
    CountSample,
    DegenerateTail,
    DomainError,
    InsufficientData,
    InsufficientTail,
    analyze_counts,
    bootstrap_gof,
    fit_alpha,
    generate_powerlaw_sample,
    likelihood_ratio_test,
    plot_data,
    relationship_count_distribution,
    select_xmin,
)


def synthetic_sample(n=5000, alpha=2.5, x_min=3, seed=7):
    rng = np.random.default_rng(seed)
    return CountSample.from_iterable(generate_powerlaw_sample(n, alpha, x_min, rng))


class TestCountSample:
    def test_rejects_invalid(self):
        with pytest.raises(InsufficientData):
            CountSample(())
        with pytest.raises(DomainError):
            CountSample((1, 0))

    def test_tail(self):
        s = CountSample((1, 2, 3, 5))
        assert list(s.tail(3)) == [3, 5]


class TestGenerator:
    def test_mean_matches_zeta_ratio(self):
        # E[X] for alpha=3, x_min=1 is zeta(2)/zeta(3).
        rng = np.random.default_rng(11)
        draws = generate_powerlaw_sample(200_000, 3.0, 1, rng)
        expected = float(special.zeta(2.0) / special.zeta(3.0))
        assert draws.mean() == pytest.approx(expected, rel=0.01)

    def test_support_starts_at_xmin(self):
        rng = np.random.default_rng(1)
        draws = generate_powerlaw_sample(1000, 2.2, 4, rng)
        assert draws.min() >= 4

    def test_deterministic_under_seed(self):
        a = generate_powerlaw_sample(100, 2.5, 2, np.random.default_rng(5))
        b = generate_powerlaw_sample(100, 2.5, 2, np.random.default_rng(5))
        assert np.array_equal(a, b)


class TestFit:
    @pytest.mark.parametrize("seed", range(5))
    def test_parameter_recovery(self, seed):
        sample = synthetic_sample(n=10_000, alpha=2.5, x_min=3, seed=seed)
        fit = fit_alpha(sample, x_min=3)
        assert fit.alpha == pytest.approx(2.5, abs=0.1)
        assert fit.alpha_se == pytest.approx((fit.alpha - 1) / math.sqrt(fit.n_tail))

    def test_mle_maximizes_likelihood(self):
        sample = synthetic_sample(n=2000)
        fit = fit_alpha(sample, x_min=3)
        tail = sample.tail(3)

        def loglik(a):
            return -len(tail) * math.log(float(special.zeta(a, 3))) - a * float(
                np.log(tail).sum()
            )

        for off in (-0.05, 0.05):
            assert loglik(fit.alpha) >= loglik(fit.alpha + off)

    def test_degenerate_and_thin_tails(self):
        with pytest.raises(DegenerateTail):
            fit_alpha(CountSample((4,) * 50), x_min=4)
        with pytest.raises(InsufficientTail):
            fit_alpha(CountSample((1, 1, 1, 9)), x_min=9)

    def test_select_xmin_recovers_true_cutoff(self):
        hits = 0
        for seed in range(10):
            sample = synthetic_sample(n=8000, alpha=2.5, x_min=3, seed=100 + seed)
            fit = select_xmin(sample)
            if abs(fit.x_min - 3) <= 1:
                hits += 1
        assert hits >= 8

    def test_select_xmin_requires_tail(self):
        with pytest.raises(InsufficientTail):
            select_xmin(CountSample((1, 2, 3)))


class TestBootstrap:
    def test_serial_equals_parallel(self):
        sample = synthetic_sample(n=800, seed=3)
        fit = select_xmin(sample)
        serial = bootstrap_gof(sample, fit, n_bootstrap=20, seed=42, n_jobs=1)
        parallel = bootstrap_gof(sample, fit, n_bootstrap=20, seed=42, n_jobs=4)
        assert serial.p_value == parallel.p_value
        assert serial.replicate_ks_summary == parallel.replicate_ks_summary

    def test_true_powerlaw_not_rejected(self):
        sample = synthetic_sample(n=1500, seed=9)
        fit = select_xmin(sample)
        gof = bootstrap_gof(sample, fit, n_bootstrap=60, seed=1, n_jobs=4)
        assert gof.p_value > 0.1
        assert gof.discarded < 60


class TestLikelihoodRatio:
    def test_powerlaw_data_favors_powerlaw_over_exponential(self):
        sample = synthetic_sample(n=5000, seed=2)
        fit = select_xmin(sample)
        res = likelihood_ratio_test(sample, fit, "exponential")
        assert res.normalized_ratio > 0
        assert res.favored == "power-law"

    def test_exponential_data_favors_alternative(self):
        rng = np.random.default_rng(4)
        draws = rng.geometric(0.1, size=5000)
        sample = CountSample.from_iterable(draws)
        fit = fit_alpha(sample, x_min=1)
        res = likelihood_ratio_test(sample, fit, "exponential")
        assert res.normalized_ratio < 0
        assert res.favored == "alternative"

    def test_unknown_alternative(self):
        sample = synthetic_sample(n=500)
        fit = select_xmin(sample)
        with pytest.raises(DomainError):
            likelihood_ratio_test(sample, fit, "cauchy")

    def test_all_three_alternatives_run(self):
        sample = synthetic_sample(n=3000, seed=6)
        report = analyze_counts(sample, with_gof=False)
        names = [c.alternative for c in report.comparisons]
        assert names == ["exponential", "lognormal", "stretched-exponential"]
        for c in report.comparisons:
            assert math.isfinite(c.normalized_ratio)


class TestSeedDistribution:
    def test_relationship_counts_fit(self, seed_index):
        sample = relationship_count_distribution(seed_index)
        assert len(sample) == len(seed_index.relationship_papers)
        fit = select_xmin(sample)
        assert fit.alpha > 1.01
        assert fit.n_tail >= 10


class TestPlotData:
    def test_format_and_mass_balance(self):
        sample = synthetic_sample(n=2000, seed=8)
        fit = select_xmin(sample)
        text = plot_data(sample, fit)
        lines = text.strip().split("\n")
        assert lines[0] == "x\tempirical_ccdf\tfitted_ccdf\tempirical_pdf\tfitted_pdf"
        rows = [line.split("\t") for line in lines[1:]]
        xs = [int(r[0]) for r in rows]
        assert xs == sorted(xs)
        emp_pdf_total = sum(float(r[3]) for r in rows)
        assert emp_pdf_total == pytest.approx(1.0)
        for r in rows:
            if int(r[0]) < fit.x_min:
                assert r[2] == "" and r[4] == ""
            else:
                assert float(r[2]) >= 0 and float(r[4]) > 0
