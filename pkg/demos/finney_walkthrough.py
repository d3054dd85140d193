"""Run the whole test battery on the embedded bioassay dataset.

The package ships one dataset: 39 observations of a binary response with
two continuous covariates. This script tests the model that uses both
covariates, so the tested and full models coincide (l = m = 2), and then
reruns with the covariates dropped from the tested model (l = 0) to show
what the full-model ordering buys.

The interesting part of the first run is the contrast inside the table.
The global discrepancy measures (deviance, Freeman-Tukey, Pearson,
Euclidean) come out comfortable, near .2 to .4, while the KS statistics
ordered by fitted means sit near .0075. The model passes the usual
whole-sample checks and still fails along the fitted-probability axis.

Budget is 20,000 simulations per run to keep the demo quick. At that size
the estimates wander by a few units in the third decimal across seeds;
push num_simulations to 1,000,000 to reproduce reference values tightly.
"""
import sys

from logitgof import ExperimentConfig, emit_report, run_experiment

BATTERY = [
    "ks:mu-full", "ks:mu-tested", "ks:residual",
    "deviance", "freeman-tukey", "pearson-chi2", "euclidean",
    "hl:3:mu-tested", "hl:5:mu-tested",
]


def show(title, doc):
    print(f"== {title} ==")
    report = run_experiment(ExperimentConfig.from_dict(doc))
    sys.stdout.write(emit_report(report, "text").decode("utf-8"))
    print()


show("tested model = full model (l = 2, m = 2)", {
    "dataset": "finney",
    "dependent": "response",
    "tested": ["volume", "rate"],
    "full": ["volume", "rate"],
    "statistics": BATTERY,
    "num_simulations": 20_000,
    "master_seed": 7,
})

# Same data, but now the tested model is intercept-only while the ordering
# still comes from the two-covariate fit. The mean-ordered KS collapses to
# a zero exceedance count (rendered as an upper bound), while the same
# statistic under the tested model's own ordering stays near .25: ordering
# by a richer model's means is where the power comes from.
show("intercept-only tested model (l = 0, m = 2)", {
    "dataset": "finney",
    "dependent": "response",
    "tested": [],
    "full": ["volume", "rate"],
    "statistics": ["ks:mu-full", "ks:mu-tested", "deviance"],
    "num_simulations": 20_000,
    "master_seed": 7,
})
