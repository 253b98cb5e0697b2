"""Fit statistics comparing observed lattice distributions to predictions.

Three complementary views: a Pearson chi-square goodness-of-fit test on raw
counts, a signed distance-weighted deviation (the Z statistic) that detects
mass drifting toward or away from the mean, and a relative entropy gap
D_te.  Group-level values aggregate into t tests and confidence intervals
at the treatment level.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import DegenerateTheory, InsufficientData, InvalidConfidence
from .lattice import (LatticeDistribution, MeanObservation, lattice_cells,
                      mean_observation)
from .maxent import MaxentPrediction, binomial_prediction, lattice_freedoms
from .special import (chi_square_cdf, chi_square_quantile,
                      student_t_quantile, student_t_two_sided_p)


@dataclass(frozen=True)
class ChiSquareReport:
    """Pearson GOF result.

    `impossible` marks observations in zero-probability cells, which force
    an infinite statistic instead of an exception; `cells_used` counts the
    lattice cells with positive expectation that entered the sum, and
    `min_expected` their smallest expected count (edge cells strain the
    chi-square approximation, and this is how you see it).
    """

    statistic: float
    freedoms: int
    criterion: float
    exceeds: bool
    cells_used: int
    p_value: float
    significance: float
    sample_size: int
    min_expected: float
    impossible: bool


@dataclass(frozen=True)
class DeviationReport:
    """Pattern statistics for one session: Z, the entropy gap D_te, and the
    signed per-cell density residuals (observed minus predicted)."""

    d_te: float
    z: float
    per_cell: dict[tuple[int, int], float]
    s_e: float
    s_t: float


@dataclass(frozen=True)
class TTestReport:
    """One-sample two-sided t test with a matching confidence interval."""

    t: float
    p_value: float
    freedoms: int
    mean: float
    ci_low: float
    ci_high: float
    confidence: float


@dataclass(frozen=True)
class SummaryStats:
    """Mean, standard error, and t-based confidence interval of a sample."""

    mean: float
    std_error: float
    ci_low: float
    ci_high: float
    confidence: float
    sample_count: int


def pearson_statistic(observed: LatticeDistribution,
                      prediction: MaxentPrediction) -> float:
    """Sum of (O - T*E)^2 / (T*E) over cells with E > 0, no pooling.

    An observation in a zero-expectation cell makes the statistic infinite
    (the observation is impossible under the prediction).
    """
    total = observed.total
    acc = 0.0
    for cell in lattice_cells(observed.n):
        expected = total * prediction.densities[cell]
        count = observed.count(*cell)
        if expected == 0.0:
            if count:
                return math.inf
            continue
        acc += (count - expected) ** 2 / expected
    return acc


def chi_square_gof(observed: LatticeDistribution,
                   prediction: MaxentPrediction | None = None,
                   significance: float = 0.05) -> ChiSquareReport:
    """Test an observed distribution against a Maxent prediction.

    The prediction defaults to the one fitted from the observed mean.
    Freedoms are (n+1)^2 - 3: cells minus normalization minus the two
    fitted moments.  No cells are pooled.
    """
    if not 0.0 < significance < 1.0:
        raise InvalidConfidence(
            f"significance must be in (0, 1), got {significance}")
    if prediction is None:
        prediction = binomial_prediction(mean_observation(observed),
                                         observed.n)
    total = observed.total
    statistic = 0.0
    impossible = False
    cells_used = 0
    min_expected = math.inf
    for cell in lattice_cells(observed.n):
        expected = total * prediction.densities[cell]
        count = observed.count(*cell)
        if expected == 0.0:
            if count:
                impossible = True
            continue
        cells_used += 1
        min_expected = min(min_expected, expected)
        statistic += (count - expected) ** 2 / expected
    if impossible:
        statistic = math.inf
    freedoms = lattice_freedoms(observed.n)
    criterion = chi_square_quantile(freedoms, 1.0 - significance)
    p_value = 0.0 if impossible else 1.0 - chi_square_cdf(freedoms, statistic)
    return ChiSquareReport(statistic=statistic, freedoms=freedoms,
                           criterion=criterion,
                           exceeds=statistic > criterion,
                           cells_used=cells_used, p_value=p_value,
                           significance=significance, sample_size=total,
                           min_expected=min_expected, impossible=impossible)


def entropy_deviation(s_e: float, s_t: float) -> float:
    """Relative entropy gap D_te = 1 - S_e / S_t (positive when the data
    are more concentrated than the prediction)."""
    if s_t == 0.0:
        raise DegenerateTheory("theoretical entropy is zero")
    return 1.0 - s_e / s_t


def z_from_densities(observed_densities: Mapping[tuple[int, int], float],
                     predicted_densities: Mapping[tuple[int, int], float],
                     mean: tuple[float, float], n: int) -> float:
    """Distance-weighted density deviation.

    Z = sum_ij ||(i/n, j/n) - mean||_2 * (E_ij - rho_ij).  Positive Z means
    observed mass sits nearer the mean than predicted (more concentrated);
    negative Z means mass pushed outward.
    """
    o_p, o_q = mean
    acc = 0.0
    for (i, j) in lattice_cells(n):
        dist = math.hypot(i / n - o_p, j / n - o_q)
        acc += dist * (predicted_densities[(i, j)]
                       - observed_densities.get((i, j), 0.0))
    return acc


def z_statistic(observed: LatticeDistribution,
                prediction: MaxentPrediction,
                mean: MeanObservation | None = None) -> float:
    """Z for an observed distribution, anchored at `mean` (defaults to the
    observed mean, which equals the prediction's when self-fitted)."""
    if mean is None:
        mean = mean_observation(observed)
    return z_from_densities(observed.densities(), prediction.densities,
                            (mean.o_p, mean.o_q), observed.n)


def residual_grid(observed: LatticeDistribution,
                  prediction: MaxentPrediction) -> dict[tuple[int, int], float]:
    """Per-cell density residuals rho_ij - E_ij (observed minus predicted).
    Residuals sum to zero since both densities are normalized."""
    densities = observed.densities()
    return {cell: densities[cell] - prediction.densities[cell]
            for cell in lattice_cells(observed.n)}


def deviation_report(observed: LatticeDistribution,
                     prediction: MaxentPrediction | None = None,
                     mean: MeanObservation | None = None,
                     s_e: float | None = None) -> DeviationReport:
    """Z, D_te, and per-cell residuals for one session.  Pass s_e to reuse
    an already computed observed entropy."""
    from .maxent import entropy
    if prediction is None:
        prediction = binomial_prediction(mean_observation(observed),
                                         observed.n)
    if s_e is None:
        s_e = entropy(observed.densities(), observed.n)
    return DeviationReport(
        d_te=entropy_deviation(s_e, prediction.s_t),
        z=z_statistic(observed, prediction, mean),
        per_cell=residual_grid(observed, prediction),
        s_e=s_e, s_t=prediction.s_t)


def summarize(values: Sequence[float],
              confidence: float = 0.95) -> SummaryStats:
    """Mean, standard error, and t-based confidence interval.

    A constant sample collapses the interval to the mean.  Needs at least
    two observations.
    """
    if len(values) < 2:
        raise InsufficientData(
            f"summary needs at least 2 values, got {len(values)}")
    if not 0.0 < confidence < 1.0:
        raise InvalidConfidence(
            f"confidence must be in (0, 1), got {confidence}")
    count = len(values)
    mean = math.fsum(values) / count
    var = math.fsum((v - mean) ** 2 for v in values) / (count - 1)
    se = math.sqrt(var / count)
    if se == 0.0:
        return SummaryStats(mean=mean, std_error=0.0, ci_low=mean,
                            ci_high=mean, confidence=confidence,
                            sample_count=count)
    half = student_t_quantile(count - 1, 0.5 + confidence / 2.0) * se
    return SummaryStats(mean=mean, std_error=se, ci_low=mean - half,
                        ci_high=mean + half, confidence=confidence,
                        sample_count=count)


def one_sample_t_test(values: Sequence[float], mu0: float = 0.0,
                      confidence: float = 0.95) -> TTestReport:
    """Two-sided one-sample t test of mean(values) against mu0.

    Needs at least two observations.  A zero-variance sample degenerates to
    t = 0 (p = 1) when the mean hits mu0 exactly, else t = +-inf with
    p = 0; reported, not raised.
    """
    if len(values) < 2:
        raise InsufficientData(
            f"t test needs at least 2 values, got {len(values)}")
    if not 0.0 < confidence < 1.0:
        raise InvalidConfidence(
            f"confidence must be in (0, 1), got {confidence}")
    count = len(values)
    freedoms = count - 1
    mean = math.fsum(values) / count
    var = math.fsum((v - mean) ** 2 for v in values) / freedoms
    se = math.sqrt(var / count)
    if se == 0.0:
        t = 0.0 if mean == mu0 else math.copysign(math.inf, mean - mu0)
        return TTestReport(t=t, p_value=1.0 if t == 0.0 else 0.0,
                           freedoms=freedoms, mean=mean, ci_low=mean,
                           ci_high=mean, confidence=confidence)
    t = (mean - mu0) / se
    p = student_t_two_sided_p(freedoms, t)
    half = student_t_quantile(freedoms, 0.5 + confidence / 2.0) * se
    return TTestReport(t=t, p_value=p, freedoms=freedoms, mean=mean,
                       ci_low=mean - half, ci_high=mean + half,
                       confidence=confidence)
