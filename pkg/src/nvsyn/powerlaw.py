"""Discrete power-law fitting for replication-count distributions.

Maximum-likelihood fitting of the discrete power law
p(x) = x^-alpha / zeta(alpha, x_min), KS-based x_min selection,
semiparametric bootstrap goodness of fit, and Vuong likelihood-ratio
comparison against exponential, lognormal, and stretched-exponential
alternatives. All randomness flows through explicit integer seeds; the
bootstrap spawns one child generator per replicate so serial and parallel
runs are bit-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np
from joblib import Parallel, delayed
from scipy import optimize, special


class DomainError(Exception):
    """Argument outside the mathematically valid domain."""


class InsufficientData(DomainError):
    """Sample is empty or otherwise too small to fit."""


class InsufficientTail(DomainError):
    """Too few observations at or above x_min."""


class DegenerateTail(DomainError):
    """All tail observations identical; alpha is unidentifiable."""


class AlternativeFitFailure(DomainError):
    """An alternative distribution could not be fit to the tail."""


MIN_TAIL = 10
_ALPHA_LO, _ALPHA_HI = 1.01, 6.0


@dataclass(frozen=True)
class CountSample:
    """An immutable sample of positive integer counts."""

    values: tuple[int, ...]

    def __post_init__(self):
        if not self.values:
            raise InsufficientData("empty count sample")
        if any((not isinstance(v, (int, np.integer))) or v < 1 for v in self.values):
            raise DomainError("counts must be positive integers")

    @classmethod
    def from_iterable(cls, values) -> "CountSample":
        return cls(tuple(int(v) for v in values))

    def tail(self, x_min: int) -> np.ndarray:
        arr = np.asarray(self.values, dtype=np.int64)
        return arr[arr >= x_min]

    def __len__(self) -> int:
        return len(self.values)


@dataclass
class PowerLawFit:
    alpha: float
    x_min: int
    n_tail: int
    alpha_se: float
    log_likelihood: float
    ks_statistic: float

    def to_dict(self) -> dict:
        return {
            "alpha": self.alpha,
            "x_min": self.x_min,
            "n_tail": self.n_tail,
            "alpha_se": self.alpha_se,
            "log_likelihood": self.log_likelihood,
            "ks_statistic": self.ks_statistic,
        }


@dataclass
class GoodnessOfFit:
    p_value: float
    n_bootstrap: int
    observed_ks: float
    seed: int
    discarded: int = 0
    replicate_ks_summary: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "p_value": self.p_value,
            "n_bootstrap": self.n_bootstrap,
            "observed_ks": self.observed_ks,
            "seed": self.seed,
            "discarded": self.discarded,
            "replicate_ks_summary": self.replicate_ks_summary,
        }


@dataclass
class LikelihoodRatioResult:
    alternative: str
    normalized_ratio: float
    p_value: float
    favored: str  # "power-law" | "alternative" | "indeterminate"

    def to_dict(self) -> dict:
        return {
            "alternative": self.alternative,
            "normalized_ratio": self.normalized_ratio,
            "p_value": self.p_value,
            "favored": self.favored,
        }


@dataclass
class PowerLawReport:
    fit: PowerLawFit
    gof: Optional[GoodnessOfFit]
    comparisons: list[LikelihoodRatioResult] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "fit": self.fit.to_dict(),
            "gof": self.gof.to_dict() if self.gof else None,
            "comparisons": [c.to_dict() for c in self.comparisons],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)


def _hurwitz_zeta(s: float, q: float) -> float:
    return float(special.zeta(s, q))


def _powerlaw_loglik(alpha: float, tail: np.ndarray, x_min: int) -> float:
    n = len(tail)
    return -n * math.log(_hurwitz_zeta(alpha, x_min)) - alpha * float(np.log(tail).sum())


def fit_alpha(sample: CountSample, x_min: int) -> PowerLawFit:
    """Discrete MLE for the tail exponent at fixed x_min.

    Maximizes L(alpha) = -n ln zeta(alpha, x_min) - alpha * sum(ln x) by
    bounded scalar minimization; the likelihood is strictly concave in
    alpha so the bracket (1.01, 6.0) is safe for empirical count data.
    """
    if x_min < 1:
        raise DomainError(f"x_min must be >= 1, got {x_min}")
    tail = sample.tail(x_min)
    if len(tail) < 2:
        raise InsufficientTail(f"only {len(tail)} observations at or above x_min={x_min}")
    if np.all(tail == tail[0]):
        raise DegenerateTail("all tail observations identical")

    res = optimize.minimize_scalar(
        lambda a: -_powerlaw_loglik(a, tail, x_min),
        bounds=(_ALPHA_LO, _ALPHA_HI),
        method="bounded",
        options={"xatol": 1e-6},
    )
    alpha = float(res.x)
    n = len(tail)
    return PowerLawFit(
        alpha=alpha,
        x_min=x_min,
        n_tail=n,
        alpha_se=(alpha - 1.0) / math.sqrt(n),
        log_likelihood=_powerlaw_loglik(alpha, tail, x_min),
        ks_statistic=_ks_statistic(tail, alpha, x_min),
    )


def _powerlaw_pmf(alpha: float, x_min: int, x_max: int) -> np.ndarray:
    """pmf over integers x_min..x_max (unnormalized truncation of the full pmf)."""
    xs = np.arange(x_min, x_max + 1, dtype=np.float64)
    return xs ** (-alpha) / _hurwitz_zeta(alpha, x_min)


def _ks_statistic(tail: np.ndarray, alpha: float, x_min: int) -> float:
    """KS distance between the empirical tail CDF and the model CDF."""
    xs = np.unique(tail)
    x_max = int(xs[-1])
    pmf = _powerlaw_pmf(alpha, x_min, x_max)
    model_cdf_all = np.cumsum(pmf)
    model_cdf = model_cdf_all[xs - x_min]
    empirical = np.searchsorted(np.sort(tail), xs, side="right") / len(tail)
    return float(np.max(np.abs(empirical - model_cdf)))


def select_xmin(sample: CountSample, min_tail: int = MIN_TAIL) -> PowerLawFit:
    """Scan candidate x_min values and keep the fit with the smallest KS
    distance; ties go to the smaller x_min (more data retained)."""
    candidates = sorted(set(sample.values))
    best: Optional[PowerLawFit] = None
    for x_min in candidates:
        tail = sample.tail(x_min)
        if len(tail) < min_tail:
            break
        if np.all(tail == tail[0]):
            continue
        fit = fit_alpha(sample, x_min)
        if best is None or fit.ks_statistic < best.ks_statistic - 1e-12:
            best = fit
    if best is None:
        raise InsufficientTail(f"no candidate x_min leaves a tail of >= {min_tail}")
    return best


def generate_powerlaw_sample(
    n: int, alpha: float, x_min: int, rng: np.random.Generator
) -> np.ndarray:
    """Draw n integers from the discrete power law via inverse CDF.

    The pmf is tabulated from x_min upward, doubling the table until it
    covers every requested quantile, so draws match the analytic CDF
    exactly (no continuous approximation).
    """
    if alpha <= 1.0:
        raise DomainError("alpha must exceed 1 for a normalizable pmf")
    u = rng.random(n)
    x_max = max(10 * x_min, 1024)
    while True:
        cdf = np.cumsum(_powerlaw_pmf(alpha, x_min, x_max))
        if cdf[-1] >= u.max() or x_max > 10**9:
            break
        x_max *= 2
    idx = np.searchsorted(cdf, u, side="left")
    return (x_min + np.minimum(idx, len(cdf) - 1)).astype(np.int64)


def _bootstrap_replicate(
    seed_pair: tuple[int, int],
    body: np.ndarray,
    n_total: int,
    n_tail: int,
    alpha: float,
    x_min: int,
    min_tail: int,
) -> float:
    """One semiparametric bootstrap KS value.

    With probability n_tail/n each synthetic point is a model draw from
    the fitted tail, otherwise a resample of the observed body (< x_min).
    The synthetic sample is then refit (x_min re-selected) exactly as the
    real data was.
    """
    rng = np.random.default_rng(seed_pair)
    from_tail = rng.random(n_total) < (n_tail / n_total)
    n_model = int(from_tail.sum())
    parts = []
    if n_model:
        parts.append(generate_powerlaw_sample(n_model, alpha, x_min, rng))
    n_body = n_total - n_model
    if n_body:
        if len(body):
            parts.append(rng.choice(body, size=n_body, replace=True))
        else:
            parts.append(generate_powerlaw_sample(n_body, alpha, x_min, rng))
    synthetic = CountSample.from_iterable(np.concatenate(parts))
    try:
        return select_xmin(synthetic, min_tail=min_tail).ks_statistic
    except DomainError:
        return math.inf


def bootstrap_gof(
    sample: CountSample,
    fit: PowerLawFit,
    n_bootstrap: int = 1000,
    seed: int = 0,
    n_jobs: int = 1,
    min_tail: int = MIN_TAIL,
) -> GoodnessOfFit:
    """Semiparametric bootstrap p-value for the power-law hypothesis.

    p = fraction of synthetic KS values at or above the observed one.
    Each replicate i uses np.random.default_rng([seed, i]), so results are
    independent of n_jobs.
    """
    arr = np.asarray(sample.values, dtype=np.int64)
    body = arr[arr < fit.x_min]
    jobs = (
        delayed(_bootstrap_replicate)(
            (seed, i), body, len(arr), fit.n_tail, fit.alpha, fit.x_min, min_tail
        )
        for i in range(n_bootstrap)
    )
    ks_values = Parallel(n_jobs=n_jobs)(jobs)
    ok = [ks for ks in ks_values if math.isfinite(ks)]
    if not ok:
        raise InsufficientData("all bootstrap replicates failed to refit")
    p = sum(1 for ks in ok if ks >= fit.ks_statistic) / len(ok)
    arr = np.asarray(ok)
    summary = {
        "min": float(arr.min()),
        "median": float(np.median(arr)),
        "max": float(arr.max()),
    }
    return GoodnessOfFit(
        p_value=p,
        n_bootstrap=n_bootstrap,
        observed_ks=fit.ks_statistic,
        seed=seed,
        discarded=n_bootstrap - len(ok),
        replicate_ks_summary=summary,
    )


# ---------------------------------------------------------------------------
# Alternative tail distributions, discretized onto the integers >= x_min.


def _discrete_logpmf_from_density(log_density, x_min: int, x_max: int) -> np.ndarray:
    """Normalize a log-density evaluated at integers >= x_min into a log-pmf."""
    xs = np.arange(x_min, x_max + 1, dtype=np.float64)
    logs = log_density(xs)
    logs -= special.logsumexp(logs)
    return logs


def _fit_exponential(tail: np.ndarray, x_min: int):
    """Closed-form discrete (geometric) MLE: lam = ln(1 + 1/(mean - x_min))."""
    mean = float(tail.mean())
    if mean <= x_min:
        raise AlternativeFitFailure("degenerate tail for exponential fit")
    lam = math.log(1.0 + 1.0 / (mean - x_min))
    # log pmf of the geometric shifted to x_min: (1 - e^-lam) e^{-lam (x - x_min)}
    const = math.log(1.0 - math.exp(-lam))
    return lambda xs: const - lam * (np.asarray(xs, dtype=np.float64) - x_min)


def _fit_by_grid(tail: np.ndarray, x_min: int, log_density_factory, x0, bounds):
    """MLE for a discretized density by numerical optimization."""
    x_max = int(tail.max())

    def nll(params):
        try:
            logpmf = _discrete_logpmf_from_density(log_density_factory(params), x_min, x_max)
        except (ValueError, FloatingPointError):
            return 1e18
        if not np.all(np.isfinite(logpmf)):
            return 1e18
        return -float(logpmf[tail - x_min].sum())

    res = optimize.minimize(nll, x0=x0, bounds=bounds, method="L-BFGS-B")
    if not np.isfinite(res.fun) or res.fun >= 1e17:
        raise AlternativeFitFailure("alternative optimization failed")
    params = res.x
    x_big = x_max  # pmf support capped at the observed maximum for scoring
    logpmf = _discrete_logpmf_from_density(log_density_factory(params), x_min, x_big)
    return lambda xs: logpmf[np.asarray(xs, dtype=np.int64) - x_min]


def _fit_lognormal(tail: np.ndarray, x_min: int):
    logs = np.log(tail)
    x0 = (float(logs.mean()), max(float(logs.std()), 0.1))

    def factory(params):
        mu, sigma = params
        return lambda xs: -np.log(xs) - ((np.log(xs) - mu) ** 2) / (2.0 * sigma**2)

    return _fit_by_grid(tail, x_min, factory, x0=x0, bounds=[(-20, 20), (1e-3, 20)])


def _fit_stretched_exponential(tail: np.ndarray, x_min: int):
    def factory(params):
        lam, beta = params
        return lambda xs: np.log(xs) * (beta - 1.0) - lam * (np.asarray(xs, float) ** beta)

    return _fit_by_grid(
        tail, x_min, factory, x0=(0.5, 0.5), bounds=[(1e-6, 50), (1e-2, 2.0)]
    )


_ALTERNATIVES = {
    "exponential": _fit_exponential,
    "lognormal": _fit_lognormal,
    "stretched-exponential": _fit_stretched_exponential,
}


def likelihood_ratio_test(
    sample: CountSample, fit: PowerLawFit, alternative: str
) -> LikelihoodRatioResult:
    """Vuong test of the fitted power law against one alternative.

    The normalized ratio R = sum(d_i) / (sigma_d sqrt(n)) with
    d_i = lpl_i - lalt_i; two-sided p = erfc(|R| / sqrt(2)). Positive R
    favors the power law; the sign is only meaningful when p is small.
    """
    if alternative not in _ALTERNATIVES:
        raise DomainError(f"unknown alternative {alternative!r}")
    tail = sample.tail(fit.x_min)
    x_max = int(tail.max())
    pl_logpmf_all = -fit.alpha * np.log(np.arange(fit.x_min, x_max + 1, dtype=np.float64))
    pl_logpmf_all -= math.log(_hurwitz_zeta(fit.alpha, fit.x_min))
    pl_ll = pl_logpmf_all[tail - fit.x_min]

    alt_logpmf = _ALTERNATIVES[alternative](tail, fit.x_min)
    alt_ll = np.asarray(alt_logpmf(tail), dtype=np.float64)

    d = pl_ll - alt_ll
    n = len(d)
    sigma = float(d.std())
    if sigma < 1e-12:
        return LikelihoodRatioResult(alternative, 0.0, 1.0, "indeterminate")
    ratio = float(d.sum() / (sigma * math.sqrt(n)))
    p = float(special.erfc(abs(ratio) / math.sqrt(2.0)))
    if p > 0.1:
        favored = "indeterminate"
    else:
        favored = "power-law" if ratio > 0 else "alternative"
    return LikelihoodRatioResult(alternative, ratio, p, favored)


def analyze_counts(
    sample: CountSample,
    n_bootstrap: int = 1000,
    seed: int = 0,
    n_jobs: int = 1,
    alternatives: Sequence[str] = ("exponential", "lognormal", "stretched-exponential"),
    with_gof: bool = True,
) -> PowerLawReport:
    """Full pipeline: x_min selection, fit, bootstrap GoF, alternatives."""
    fit = select_xmin(sample)
    gof = (
        bootstrap_gof(sample, fit, n_bootstrap=n_bootstrap, seed=seed, n_jobs=n_jobs)
        if with_gof
        else None
    )
    comparisons = []
    for alt in alternatives:
        try:
            comparisons.append(likelihood_ratio_test(sample, fit, alt))
        except AlternativeFitFailure as exc:
            comparisons.append(
                LikelihoodRatioResult(alt, math.nan, math.nan, f"fit-failed: {exc}")
            )
    return PowerLawReport(fit=fit, gof=gof, comparisons=comparisons)


def relationship_count_distribution(idx) -> CountSample:
    """One value per (state, cue) relationship: its distinct-paper count."""
    values = list(idx.relationship_papers.values())
    if not values:
        raise InsufficientData("empty evidence index")
    return CountSample.from_iterable(values)


def plot_data(sample: CountSample, fit: PowerLawFit) -> str:
    """Tab-separated CCDF/PDF point series for external log-log plotting.

    Columns: x, empirical_ccdf, fitted_ccdf, empirical_pdf, fitted_pdf.
    Fitted columns are blank below x_min; the fitted tail is scaled by the
    empirical tail fraction so the curves overlay directly.
    """
    arr = np.sort(np.asarray(sample.values, dtype=np.int64))
    xs = np.unique(arr)
    n = len(arr)
    emp_ccdf = 1.0 - np.searchsorted(arr, xs, side="left") / n
    emp_pdf = np.diff(np.searchsorted(arr, xs, side="right"), prepend=0) / n

    x_max = int(xs[-1])
    pmf = _powerlaw_pmf(fit.alpha, fit.x_min, x_max)
    cdf = np.cumsum(pmf)
    tail_frac = fit.n_tail / n

    lines = ["x\tempirical_ccdf\tfitted_ccdf\tempirical_pdf\tfitted_pdf"]
    for i, x in enumerate(xs):
        if x < fit.x_min:
            fitted_ccdf = fitted_pdf = ""
        else:
            k = int(x) - fit.x_min
            fitted_ccdf = f"{tail_frac * (1.0 - cdf[k]):.6g}"
            fitted_pdf = f"{tail_frac * pmf[k]:.6g}"
        lines.append(
            f"{int(x)}\t{emp_ccdf[i]:.6g}\t{fitted_ccdf}\t{emp_pdf[i]:.6g}\t{fitted_pdf}"
        )
    return "\n".join(lines) + "\n"
