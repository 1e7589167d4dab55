"""Allocation policies over a power-weighted bandit instance.

Five policy kinds share one state layout and one observation hook:

* ``wts`` - weighted Thompson sampling.  Rounds 1-3 spread power uniformly;
  from round 4 on the policy plays the Monte Carlo optimality belief of
  :func:`spreadbandits.posterior.estimate_rho`, floored away from zero and
  renormalised, so every arm keeps a strictly positive trickle of power and
  its statistics never freeze.
* ``ts_known`` / ``ts_unknown`` - classical one-hot Thompson sampling
  baselines.  After a round-robin warm-up (one pass for known variance,
  three passes for unknown), each round draws one mean per arm from its
  posterior (Gaussian when sigma^2 is known, the bivariate-t otherwise) and
  commits all power to the draw of largest norm.
* ``oracle`` - all power on the true best arm every round.
* ``uniform`` - the flat profile every round.

A state is owned by exactly one simulation run; the step functions read it
and :func:`observe` folds one round of outcomes into it in place.
"""

import numpy as np

from .core import ArmStats, BanditInstance, Outcome, PowerProfile
from .errors import InsufficientData, ProfileMismatch, WrongKind
from .posterior import _rho_counts

WTS = "wts"
TS_KNOWN = "ts_known"
TS_UNKNOWN = "ts_unknown"
ORACLE = "oracle"
UNIFORM = "uniform"
KINDS = (WTS, TS_KNOWN, TS_UNKNOWN, ORACLE, UNIFORM)

# stable ids keying the per-policy random streams (do not reorder)
KIND_IDS = {WTS: 0, TS_KNOWN: 1, TS_UNKNOWN: 2, ORACLE: 3, UNIFORM: 4}

# uniform rounds before WTS starts playing its belief
WTS_WARMUP_ROUNDS = 3
# round-robin passes before the TS baselines start sampling
TS_KNOWN_WARMUP_PASSES = 1
TS_UNKNOWN_WARMUP_PASSES = 3
# the played profile is max(rho, RHO_FLOOR / K), renormalised
RHO_FLOOR = 1e-6


class PolicyState:
    """Mutable per-run state: arm statistics plus policy configuration.

    ``round`` is the 1-based index of the round about to be played.
    """

    __slots__ = ("kind", "per_arm", "round", "config")

    def __init__(self, kind: str, per_arm: list, round: int = 1,
                 config: dict | None = None):
        if kind not in KINDS:
            raise WrongKind(f"unknown policy kind {kind!r}")
        self.kind = kind
        self.per_arm = per_arm
        self.round = int(round)
        self.config = {} if config is None else config

    @property
    def n_arms(self) -> int:
        return len(self.per_arm)

    def __repr__(self) -> str:
        return (f"PolicyState(kind={self.kind!r}, K={self.n_arms}, "
                f"round={self.round})")


def make_policy(kind: str, instance: BanditInstance,
                mc_samples: int = 1024) -> PolicyState:
    """Fresh state for ``kind`` against ``instance``.

    Baselines receive only what they are entitled to know: ``ts_known``
    keeps the variance vector, ``oracle`` the best-arm index, and ``wts`` /
    ``ts_unknown`` nothing beyond the arm count.
    """
    if kind not in KINDS:
        raise WrongKind(f"unknown policy kind {kind!r}")
    K = instance.n_arms
    # profiles are immutable, so the constant ones are built once and reused
    config: dict = {
        "uniform": PowerProfile.uniform(K),
        "one_hot": tuple(PowerProfile.one_hot(K, k) for k in range(K)),
    }
    if kind == WTS:
        config["mc_samples"] = int(mc_samples)
    elif kind == TS_KNOWN:
        config["sigma2"] = instance.variances.copy()
    elif kind == ORACLE:
        config["k_star"] = instance.k_star
    return PolicyState(kind, [ArmStats() for _ in range(K)], 1, config)


def _uniform_profile(state: PolicyState) -> PowerProfile:
    prof = state.config.get("uniform")
    return PowerProfile.uniform(state.n_arms) if prof is None else prof


def _one_hot_profile(state: PolicyState, k: int) -> PowerProfile:
    cached = state.config.get("one_hot")
    return PowerProfile.one_hot(state.n_arms, k) if cached is None \
        else cached[k]


def wts_step(state: PolicyState, rng: np.random.Generator) -> PowerProfile:
    """Emit the WTS profile for the current round."""
    if state.kind != WTS:
        raise WrongKind(f"wts_step on a {state.kind!r} state")
    K = state.n_arms
    t = state.round
    if t <= WTS_WARMUP_ROUNDS:
        return _uniform_profile(state)
    per = state.per_arm
    z = np.array([st.z for st in per])
    S = np.array([st.S for st in per])
    if np.any(z <= 0.0) or np.any(S <= 0.0):
        # guarded although unreachable after the uniform warm-up
        k = int(np.argmin(np.minimum(z, S)))
        raise InsufficientData(
            f"arm {k} statistics degenerate at round {t} "
            f"(z={z[k]}, S={S[k]})")
    xbar = np.array([(st.mean_x, st.mean_y) for st in per])
    M = state.config["mc_samples"]
    counts = _rho_counts(z, S, float(t), xbar, M, rng)
    q = np.maximum(counts / M, RHO_FLOOR / K)
    return PowerProfile(q / q.sum())


def ts_step(state: PolicyState, rng: np.random.Generator) -> PowerProfile:
    """Emit the one-hot Thompson profile for the current round."""
    if state.kind not in (TS_KNOWN, TS_UNKNOWN):
        raise WrongKind(f"ts_step on a {state.kind!r} state")
    K = state.n_arms
    t = state.round
    passes = (TS_KNOWN_WARMUP_PASSES if state.kind == TS_KNOWN
              else TS_UNKNOWN_WARMUP_PASSES)
    if t <= passes * K:
        return _one_hot_profile(state, (t - 1) % K)

    n_obs = np.array([round(st.z) for st in state.per_arm], dtype=np.int64)
    xbar = np.array([(st.mean_x, st.mean_y) for st in state.per_arm])
    if state.kind == TS_KNOWN:
        if np.any(n_obs < 1):
            raise InsufficientData("ts_known needs every arm observed once")
        scale = np.sqrt(state.config["sigma2"] / (2.0 * n_obs))
        draws = xbar + scale[:, None] * rng.normal(size=(K, 2))
        norms2 = (draws * draws).sum(axis=1)
    else:
        if np.any(n_obs < 3):
            raise InsufficientData(
                "ts_unknown needs every arm observed three times")
        S = np.array([st.S for st in state.per_arm])
        u = 1.0 - rng.random(K)
        v = rng.random(K)
        # bivariate-t posterior of an arm with n one-hot observations is the
        # weighted posterior at z = n, round index n + 1
        d2 = (S / n_obs) * np.expm1(-np.log(u) / (n_obs - 2.0))
        b2 = (xbar * xbar).sum(axis=1)
        norms2 = b2 + 2.0 * np.sqrt(b2 * d2) * np.cos((2.0 * np.pi) * v)
        norms2 += d2
    return _one_hot_profile(state, int(np.argmax(norms2)))


def oracle_step(state: PolicyState) -> PowerProfile:
    """All power on the known best arm."""
    if state.kind != ORACLE:
        raise WrongKind(f"oracle_step on a {state.kind!r} state")
    return _one_hot_profile(state, state.config["k_star"])


def uniform_step(state: PolicyState) -> PowerProfile:
    """The flat profile, every round."""
    if state.kind != UNIFORM:
        raise WrongKind(f"uniform_step on a {state.kind!r} state")
    return _uniform_profile(state)


def policy_step(state: PolicyState, rng: np.random.Generator) -> PowerProfile:
    """Dispatch to the step function of ``state.kind``."""
    if state.kind == WTS:
        return wts_step(state, rng)
    if state.kind in (TS_KNOWN, TS_UNKNOWN):
        return ts_step(state, rng)
    if state.kind == ORACLE:
        return oracle_step(state)
    return uniform_step(state)


def observe(state: PolicyState, profile: PowerProfile,
            outcome: Outcome) -> PolicyState:
    """Fold one round of outcomes into ``state`` (mutates and returns it)."""
    K = state.n_arms
    if len(profile) != K:
        raise ProfileMismatch(f"profile has {len(profile)} entries, state {K}")
    if len(outcome) != K:
        raise ProfileMismatch(f"outcome has {len(outcome)} entries, state {K}")
    powers = profile.p.tolist()
    values = outcome.values
    for k in range(K):
        state.per_arm[k].update(powers[k], values[k])
    state.round += 1
    return state
