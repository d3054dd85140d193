"""Exact P-values by exhaustive enumeration of the outcome space.

For n observations there are only 2**n possible outcome vectors, and the
null assigns each one probability prod mu_k^y_k (1-mu_k)^(1-y_k) with mu
taken from the observed-data tested fit. Summing those weights over the
outcomes whose refitted statistic reaches the observed value gives the
quantity the simulation estimates, with no Monte-Carlo error at all. That
makes this module the independent check on the whole simulation pipeline,
which is why it deliberately reuses the same fitting and statistic code.

Enumeration cost doubles per observation; the hard cap keeps refit counts
near a million, which is minutes of work.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .datamodel import Dataset, ModelSpec
from .errors import ConfigError, NumericalError
from .fitting import DEFAULT_FIT_CONFIG, FitConfig, design_matrix, fit_batch
from .statistics import StatisticKind, evaluate_batch

MAX_EXACT_N = 20
_CHUNK = 4096


@dataclass(frozen=True)
class ExactPValue:
    p_exact: float
    outcomes_enumerated: int


def _outcome_rows(start: int, stop: int, n: int) -> np.ndarray:
    """Rows start..stop-1 of the full 2**n outcome table; bit j of the row
    index is observation j's outcome."""
    idx = np.arange(start, stop, dtype=np.uint64)[:, None]
    shifts = np.arange(n, dtype=np.uint64)[None, :]
    return ((idx >> shifts) & np.uint64(1)).astype(np.float64)


def exact_pvalues(
    d: Dataset,
    tested: ModelSpec,
    full: ModelSpec,
    kinds: tuple[StatisticKind, ...],
    cfg: FitConfig = DEFAULT_FIT_CONFIG,
) -> list[ExactPValue]:
    """Exact P-values for several statistics in one enumeration pass."""
    if d.n > MAX_EXACT_N:
        raise ConfigError(
            f"exact enumeration is capped at n = {MAX_EXACT_N}; this dataset has n = {d.n}"
        )
    kinds = tuple(kinds)
    if not kinds:
        raise ConfigError("at least one statistic is required")

    Xd_tested = design_matrix(d, tested)
    Xd_full = design_matrix(d, full)
    same = tested.included == full.included

    Yobs = d.y.astype(np.float64)[None, :]
    _, mu_t_obs, _, _ = fit_batch(Xd_tested, Yobs, cfg)
    if same:
        mu_f_obs = mu_t_obs
    else:
        _, mu_f_obs, _, _ = fit_batch(Xd_full, Yobs, cfg)
    obs_vals = evaluate_batch(kinds, Yobs, mu_t_obs, mu_f_obs)[0]

    # log-space weights survive means clamped to the working range's edge
    mu_hat = mu_t_obs[0]
    log_mu = np.log(mu_hat)
    log_1m = np.log(1.0 - mu_hat)

    total = 1 << d.n
    p = np.zeros(len(kinds))
    weight_sum = 0.0
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        Y = _outcome_rows(start, stop, d.n)
        lw = np.zeros(stop - start)
        for j in range(d.n):
            lw += np.where(Y[:, j] == 1.0, log_mu[j], log_1m[j])
        w = np.exp(lw)
        weight_sum += float(np.sum(w))
        _, mu_t, _, _ = fit_batch(Xd_tested, Y, cfg)
        if same:
            mu_f = mu_t
        else:
            _, mu_f, _, _ = fit_batch(Xd_full, Y, cfg)
        vals = evaluate_batch(kinds, Y, mu_t, mu_f)
        # accumulate in outcome-index order so p_exact is bit-stable
        for col in range(len(kinds)):
            p[col] += float(np.sum(np.where(vals[:, col] >= obs_vals[col], w, 0.0)))

    if abs(weight_sum - 1.0) > 1e-10:
        raise NumericalError(
            f"outcome weights sum to {weight_sum!r}, expected 1 within 1e-10"
        )
    return [ExactPValue(p_exact=float(v), outcomes_enumerated=total) for v in p]


def exact_pvalue(
    d: Dataset,
    tested: ModelSpec,
    full: ModelSpec,
    stat: StatisticKind,
    cfg: FitConfig = DEFAULT_FIT_CONFIG,
) -> ExactPValue:
    """Exact P-value for a single statistic; see exact_pvalues."""
    return exact_pvalues(d, tested, full, (stat,), cfg)[0]
