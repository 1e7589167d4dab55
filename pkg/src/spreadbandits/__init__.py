"""Resource-spreading Gaussian bandits.

A small library for bandit problems where the learner divides one unit of
measurement power across arms each round and observation noise shrinks with
committed power.  Ships weighted sufficient statistics, the closed-form
bivariate-t posterior they induce, a power-spreading Thompson sampling
policy with one-hot and oracle baselines, regret benchmarks, and a
frequency-domain peak-gain estimation front end, plus a deterministic
simulation runner and CLI.
"""

from .core import (
    ArmStats,
    BanditInstance,
    Outcome,
    PowerProfile,
    batch_stats,
    new_instance,
    sample_outcome,
    update_stats,
)
from .posterior import (
    OptimalityBelief,
    PosteriorParams,
    estimate_rho,
    posterior_density,
    posterior_radial_tail,
    sample_posterior,
)
from .policies import (
    KINDS,
    ORACLE,
    TS_KNOWN,
    TS_UNKNOWN,
    UNIFORM,
    WTS,
    PolicyState,
    make_policy,
    observe,
    oracle_step,
    policy_step,
    ts_step,
    uniform_step,
    wts_step,
)
from .bounds import (
    BoundConstants,
    RegretTrace,
    chi2_cdf_even,
    h,
    lower_bound_constants,
    mean_exceedance,
    power_lower_constants,
    regret_step,
    variance_tail_bound,
)
from .sysid import (
    FrequencyGrid,
    GainEstimate,
    GainProblem,
    dft,
    freq_response,
    gain_estimate,
    grid_from_fir,
    idft,
    run_experiment,
    synth_multisine,
)
from .config import RunConfig, load_config, parse_config
from .runner import RunReport, TraceRow, run, run_replication
from .verify import CheckResult, all_passed, run_verification
from .rng import stream
from . import errors

__version__ = "0.1.0"

__all__ = [
    "ArmStats", "BanditInstance", "Outcome", "PowerProfile",
    "batch_stats", "new_instance", "sample_outcome", "update_stats",
    "OptimalityBelief", "PosteriorParams", "estimate_rho",
    "posterior_density", "posterior_radial_tail", "sample_posterior",
    "KINDS", "ORACLE", "TS_KNOWN", "TS_UNKNOWN", "UNIFORM", "WTS",
    "PolicyState", "make_policy", "observe", "oracle_step", "policy_step",
    "ts_step", "uniform_step", "wts_step",
    "BoundConstants", "RegretTrace", "chi2_cdf_even", "h",
    "lower_bound_constants", "mean_exceedance", "power_lower_constants",
    "regret_step", "variance_tail_bound",
    "FrequencyGrid", "GainEstimate", "GainProblem", "dft", "freq_response",
    "gain_estimate", "grid_from_fir", "idft", "run_experiment",
    "synth_multisine",
    "RunConfig", "load_config", "parse_config",
    "RunReport", "TraceRow", "run", "run_replication",
    "CheckResult", "all_passed", "run_verification",
    "stream", "errors",
]
