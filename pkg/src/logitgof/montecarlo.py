"""Monte-Carlo estimation of exact P-values by parametric bootstrap.

The procedure: fit the tested model to the data, draw simulated outcome
vectors from its fitted means, refit both models to every draw, and count
how often each simulated statistic is at least the observed one. The
fraction b/i is the P-value estimate.

Determinism is a hard requirement here. Every simulation's randomness comes
from a counter-based generator keyed by (master_seed, simulation index), and
all fitting and statistic kernels are batch-size invariant, so the resulting
counts do not depend on chunking or on the number of worker threads.
"""
from __future__ import annotations

import math
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .datamodel import Dataset, ModelSpec
from .errors import ConfigError
from .fitting import DEFAULT_FIT_CONFIG, FitConfig, design_matrix, fit_batch
from .statistics import StatisticKind, evaluate_batch


@dataclass(frozen=True)
class SimulationPlan:
    """Everything needed to reproduce one Monte-Carlo run exactly."""

    dataset: Dataset
    tested: ModelSpec
    full: ModelSpec
    statistics: tuple[StatisticKind, ...]
    num_simulations: int
    master_seed: int
    fit_config: FitConfig = DEFAULT_FIT_CONFIG

    def __post_init__(self):
        object.__setattr__(self, "statistics", tuple(self.statistics))
        if not self.statistics:
            raise ConfigError("a simulation plan needs at least one statistic")
        if self.num_simulations < 1:
            raise ConfigError("num_simulations must be at least 1")
        if not 0 <= self.master_seed < 2**64:
            raise ConfigError("master_seed must fit in 64 unsigned bits")
        self.tested.check_against(self.dataset)
        self.full.check_against(self.dataset)
        if not set(self.tested.included) <= set(self.full.included):
            raise ConfigError("the tested model must be nested in the full model")
        if set(self.full.included) != set(range(self.dataset.m)):
            raise ConfigError("the full model must use every covariate in the dataset")


@dataclass(frozen=True)
class PValueEstimate:
    """One statistic's Monte-Carlo result.

    The integers b (exceed_count) and i (num_simulations) are authoritative;
    p_hat and std_error are derived views rounded once through float.
    """

    statistic: StatisticKind
    observed_value: float
    exceed_count: int
    num_simulations: int

    @property
    def p_hat(self) -> float:
        return self.exceed_count / self.num_simulations

    @property
    def std_error(self) -> float:
        p = self.p_hat
        return math.sqrt(p * (1.0 - p) / self.num_simulations)

    @property
    def p_upper_bound(self) -> float | None:
        """1/i when no simulation reached the observed value, else None.

        A zero count never means P = 0; it means the estimate resolved to
        below one part in i, and reports render it as '<= 1/i'.
        """
        if self.exceed_count == 0:
            return 1.0 / self.num_simulations
        return None


def draw_outcomes(master_seed: int, start: int, stop: int, mu_gen: np.ndarray) -> np.ndarray:
    """Simulated outcome rows for simulation indices [start, stop).

    Each simulation owns a fixed, disjoint counter range of the Philox
    stream: index k gets counters [k*S, (k+1)*S) where S blocks yield just
    enough doubles for n observations. Any chunking of indices therefore
    reproduces the same rows.
    """
    n = mu_gen.shape[0]
    S = (n + 3) // 4
    bg = np.random.Philox(key=master_seed, counter=start * S)
    u = np.random.Generator(bg).random((stop - start, 4 * S))[:, :n]
    return (u < mu_gen[None, :]).astype(np.float64)


def _fit_means(Xd_tested, Xd_full, Y, cfg, same):
    _, mu_t, conv_t, _ = fit_batch(Xd_tested, Y, cfg)
    if same:
        return mu_t, mu_t, conv_t
    _, mu_f, conv_f, _ = fit_batch(Xd_full, Y, cfg)
    return mu_t, mu_f, conv_t & conv_f


def observed_statistics(plan: SimulationPlan):
    """Fit both models to the real data and evaluate every statistic.

    Returns (values, mu_tested, mu_full, converged) where values is a list
    of (StatisticKind, float) in plan order.
    """
    d = plan.dataset
    Xd_tested = design_matrix(d, plan.tested)
    Xd_full = design_matrix(d, plan.full)
    same = plan.tested.included == plan.full.included
    Y = d.y.astype(np.float64)[None, :]
    mu_t, mu_f, conv = _fit_means(Xd_tested, Xd_full, Y, plan.fit_config, same)
    vals = evaluate_batch(plan.statistics, Y, mu_t, mu_f)[0]
    pairs = list(zip(plan.statistics, (float(v) for v in vals)))
    return pairs, mu_t[0], mu_f[0], bool(conv[0])


def run_one_simulation(plan: SimulationPlan, index: int) -> np.ndarray:
    """Statistic values for simulation `index` alone, bit-identical to the
    row that a batched run produces for the same index."""
    if not 0 <= index < plan.num_simulations:
        raise ConfigError(f"simulation index {index} outside 0..{plan.num_simulations - 1}")
    d = plan.dataset
    Xd_tested = design_matrix(d, plan.tested)
    Xd_full = design_matrix(d, plan.full)
    same = plan.tested.included == plan.full.included
    mu_gen, _, _ = _fit_means(
        Xd_tested, Xd_full, d.y.astype(np.float64)[None, :], plan.fit_config, same
    )
    Y = draw_outcomes(plan.master_seed, index, index + 1, mu_gen[0])
    mu_t, mu_f, _ = _fit_means(Xd_tested, Xd_full, Y, plan.fit_config, same)
    return evaluate_batch(plan.statistics, Y, mu_t, mu_f)[0]


def _chunk_size(n: int) -> int:
    # keep chunk * n work arrays around a few MB; clamp so tiny datasets do
    # not explode the chunk count and huge ones still batch usefully
    return max(256, min(8192, 262144 // max(n, 1)))


def estimate_pvalues(plan: SimulationPlan, workers: int = 1, progress=None):
    """Run the full plan and return a list of PValueEstimate in plan order.

    workers sets the thread count; results are identical for any value
    because chunk boundaries are fixed by the plan and exceedance counts
    are integers, so summation order cannot matter. progress, if given, is
    called as progress(done, total) after each chunk under a lock. Raising
    from the callback cancels the run; nothing is mutated, so a cancelled
    run leaves no partial state behind.
    """
    if workers < 1:
        raise ConfigError("workers must be at least 1")
    d = plan.dataset
    observed, mu_tested, _, _ = observed_statistics(plan)
    obs_vals = np.array([v for _, v in observed])

    Xd_tested = design_matrix(d, plan.tested)
    Xd_full = design_matrix(d, plan.full)
    same = plan.tested.included == plan.full.included

    i = plan.num_simulations
    chunk = _chunk_size(d.n)
    spans = [(s, min(s + chunk, i)) for s in range(0, i, chunk)]
    lock = threading.Lock()
    done_sims = 0

    def run_span(span):
        nonlocal done_sims
        start, stop = span
        Y = draw_outcomes(plan.master_seed, start, stop, mu_tested)
        mu_t, mu_f, _ = _fit_means(Xd_tested, Xd_full, Y, plan.fit_config, same)
        vals = evaluate_batch(plan.statistics, Y, mu_t, mu_f)
        counts = np.sum(vals >= obs_vals[None, :], axis=0).astype(np.int64)
        if progress is not None:
            with lock:
                done_sims += stop - start
                progress(done_sims, i)
        return counts

    if workers == 1:
        totals = sum(run_span(s) for s in spans)
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            totals = sum(pool.map(run_span, spans))

    return [
        PValueEstimate(
            statistic=kind,
            observed_value=val,
            exceed_count=int(c),
            num_simulations=i,
        )
        for (kind, val), c in zip(observed, totals)
    ]
