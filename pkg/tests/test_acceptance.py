"""End-to-end acceptance gate.

Each test reproduces one headline property of the library at a stated
tolerance: the closed-form observation laws, the posterior sampler, the
policy-level regret ordering, power divergence, peak-gain recovery, the
signal-processing identities, trace determinism, and the benchmark
constants.  Statistical tests use fixed seeds; runtime budgets are part of
the assertions.
"""

import math
import time

import numpy as np
import pytest
import scipy.stats

from spreadbandits import (
    BanditInstance,
    FrequencyGrid,
    PosteriorParams,
    PowerProfile,
    RunConfig,
    chi2_cdf_even,
    dft,
    freq_response,
    grid_from_fir,
    idft,
    lower_bound_constants,
    run,
    sample_posterior,
    synth_multisine,
)
from spreadbandits.core import ArmStats, batch_stats

# five arms, norms 0.8 / 0.15 / 0.10 / 0.05 / 0.0: every suboptimal arm has
# gap-to-sigma ratio exactly 1, the hardest corner of the required range,
# and the small sub-arm norms keep early-round beliefs from collapsing
REGRET_MEANS = [[0.8, 0.0], [0.15, 0.0], [0.0, 0.10], [-0.05, 0.0],
                [0.0, 0.0]]
REGRET_VARIANCES = [0.25, 0.4225, 0.49, 0.5625, 0.64]
REGRET_T = 20000
REGRET_REPS = 100


@pytest.fixture(scope="module")
def regret_study(tmp_path_factory):
    """One shared WTS-vs-TS study; the ordering and divergence tests read it."""
    out = tmp_path_factory.mktemp("regret") / "study"
    cfg = RunConfig(
        mode="simulate",
        T=REGRET_T,
        replications=REGRET_REPS,
        seed=0,
        policies=("wts", "ts_unknown"),
        mc_samples=512,
        thin=10000,
        out=str(out),
        means=np.array(REGRET_MEANS),
        variances=np.array(REGRET_VARIANCES),
    )
    return cfg, run(cfg, workers=8, quiet=True)


def test_mean_concentration_equality():
    # full power on one arm for 10 rounds, sigma^2 = 1:
    # P(|xbar - mu| >= 0.5) = exp(-10 * 0.25) exactly
    t0 = time.perf_counter()
    reps, rounds, eps = 200000, 10, 0.5
    rng = np.random.default_rng(101)
    obs = rng.normal(scale=math.sqrt(0.5), size=(reps, rounds, 2))
    xbar = obs.mean(axis=1)
    freq = float((np.hypot(xbar[:, 0], xbar[:, 1]) >= eps).mean())
    target = math.exp(-2.5)
    elapsed = time.perf_counter() - t0
    print(f"exceedance {freq:.6f} vs {target:.6f} "
          f"(tol 0.003), {elapsed:.2f}s")
    assert abs(freq - target) <= 0.003
    assert elapsed < 10.0


def test_scatter_chi2_law_and_independence():
    # 2 S(8) / sigma^2 follows chi-square with 14 dof, independent of xbar
    t0 = time.perf_counter()
    n, rounds = 10000, 8
    rng = np.random.default_rng(102)
    obs = rng.normal(scale=math.sqrt(0.5), size=(n, rounds, 2))
    xbar = obs.mean(axis=1)
    dev = obs - xbar[:, None, :]
    S = (dev * dev).sum(axis=(1, 2))
    ks = scipy.stats.kstest(2.0 * S,
                            lambda x: chi2_cdf_even(14, x)).statistic
    corr = float(np.corrcoef(xbar[:, 0], S)[0, 1])
    elapsed = time.perf_counter() - t0
    print(f"KS {ks:.5f} (tol {1.63 / math.sqrt(n):.5f}), "
          f"|corr| {abs(corr):.5f} (tol 0.03), {elapsed:.2f}s")
    assert ks < 1.63 / math.sqrt(n)
    assert abs(corr) < 0.03
    assert elapsed < 10.0


def test_posterior_tail_identity():
    # sampler exceedance matches (1 + z d^2/S)^{-(t-3)} on a parameter grid
    t0 = time.perf_counter()
    rng = np.random.default_rng(11)
    draws_per = 100000
    worst = 0.0
    for z, S, t in [(1.0, 1.0, 4), (4.0, 1.0, 5), (10.0, 3.0, 20)]:
        params = PosteriorParams(z, np.zeros(2), S, t)
        draws = sample_posterior(params, rng, size=draws_per)
        radii = np.hypot(draws[:, 0], draws[:, 1])
        for delta in (0.25, 0.5, 1.0, 2.0):
            freq = float((radii >= delta).mean())
            target = (1.0 + z * delta * delta / S) ** (-(t - 3.0))
            se = math.sqrt(target * (1.0 - target) / draws_per)
            dev_se = abs(freq - target) / se
            worst = max(worst, dev_se)
            assert abs(freq - target) <= 3.0 * se, \
                f"(z={z}, S={S}, t={t}, delta={delta}): {dev_se:.2f} SE"
    elapsed = time.perf_counter() - t0
    print(f"worst deviation {worst:.2f} SE (tol 3), {elapsed:.2f}s")
    assert elapsed < 30.0


def test_incremental_batch_equivalence():
    # folding rounds one at a time agrees with the closed-form batch stats
    t0 = time.perf_counter()
    rng = np.random.default_rng(104)
    for _ in range(1000):
        n = int(rng.integers(2, 1001))
        powers = rng.uniform(0.0, 1.0, size=n)
        powers[rng.random(n) < 0.2] = 0.0
        if not np.any(powers > 0.0):
            powers[0] = 0.5
        values = rng.normal(size=(n, 2))
        st = ArmStats()
        for p, x in zip(powers, values):
            st.update(p, x if p > 0.0 else None)
        bat = batch_stats(powers, values)
        assert np.isclose(st.z, bat.z, rtol=1e-9, atol=1e-12)
        assert np.allclose(st.xbar, bat.xbar, rtol=1e-9, atol=1e-9)
        assert np.isclose(st.S, bat.S, rtol=1e-9, atol=1e-9)
    elapsed = time.perf_counter() - t0
    print(f"1000 trajectories equivalent, {elapsed:.2f}s")
    assert elapsed < 5.0


def test_regret_ordering_and_growth(regret_study):
    cfg, report = regret_study
    inst = BanditInstance(np.array(REGRET_MEANS), np.array(REGRET_VARIANCES))
    ratios = np.delete(inst.gaps / np.sqrt(inst.variances), inst.k_star)
    assert np.all((ratios >= 1.0) & (ratios <= 3.0))

    finals = {kind: np.array([o.final_cum for o in report.outputs
                              if o.policy == kind])
              for kind in ("wts", "ts_unknown")}
    mean_wts = finals["wts"].mean()
    mean_ts = finals["ts_unknown"].mean()
    pooled_se = math.sqrt(finals["wts"].var(ddof=1) / REGRET_REPS
                          + finals["ts_unknown"].var(ddof=1) / REGRET_REPS)

    # (a) WTS beats the non-spreading baseline by a clear margin
    assert mean_ts - mean_wts >= 2.0 * pooled_se

    # (b) WTS sits under the benchmark-constant reference line
    cap = 5.0 * lower_bound_constants(inst).spreading_unknown \
        * math.log(REGRET_T)
    assert mean_wts <= cap

    # (c) doubling the horizon grows regret sublinearly
    half = np.array([row.regret_cum
                     for o in report.outputs if o.policy == "wts"
                     for row in o.rows if row.t == REGRET_T // 2])
    assert half.shape[0] == REGRET_REPS
    ratio = mean_wts / half.mean()
    print(f"wts {mean_wts:.2f} vs ts_unknown {mean_ts:.2f} "
          f"(2 SE {2 * pooled_se:.2f}), cap {cap:.1f}, "
          f"growth ratio {ratio:.3f}, {report.elapsed_s:.0f}s")
    assert ratio < 1.4
    assert report.elapsed_s < 300.0


def test_power_divergence(regret_study):
    # every arm's cumulative power keeps growing and clears 3 by the horizon
    _, report = regret_study
    wts = [o for o in report.outputs if o.policy == "wts"]
    assert len(wts) == REGRET_REPS
    z_final = np.array([o.z_snapshots[REGRET_T] for o in wts])
    z_tenth = np.array([o.z_snapshots[REGRET_T // 10] for o in wts])
    print(f"min z(T) {z_final.min():.2f} (tol 3), "
          f"min growth {(z_final - z_tenth).min():.2f}")
    assert z_final.min() >= 3.0
    assert np.all(z_final > z_tenth)


def test_peak_gain_recovery(tmp_path):
    # resonant 16-tap filter, peak gain 1 at an interior grid bin, flat
    # noise |H| = 0.5; WTS-driven measurement recovers the peak gain
    t0 = time.perf_counter()
    K = 16
    grid = FrequencyGrid(K)
    w0 = grid.omegas[7]
    taps = np.array([0.9 ** n * math.sin(w0 * (n + 1)) for n in range(K)])
    taps /= np.max(np.abs(freq_response(taps, grid.omegas)))

    prob = grid_from_fir(taps, [0.5], K)
    assert prob.peak_gain == pytest.approx(1.0, rel=1e-12)
    assert 0 < prob.peak_bin < K - 1
    np.testing.assert_allclose(np.abs(prob.h_resp), 0.5, atol=1e-12)

    reps = 20
    cfg = RunConfig(
        mode="gain", T=5000, replications=reps, seed=0, policies=("wts",),
        mc_samples=1024, thin=5000, out=str(tmp_path / "gain"),
        g_coeffs=taps, h_coeffs=np.array([0.5]), K=K,
    )
    report = run(cfg, workers=8, quiet=True)
    errors = np.array([abs(o.rows[-1].beta_hat - prob.peak_gain)
                       for o in report.outputs])
    hits = int((errors <= 0.05).sum())
    elapsed = time.perf_counter() - t0
    print(f"{hits}/{reps} within 0.05 (tol >= {math.ceil(0.9 * reps)}), "
          f"max err {errors.max():.4f}, {elapsed:.0f}s")
    assert hits >= math.ceil(0.9 * reps)
    assert elapsed < 120.0


def test_transform_identities():
    rng = np.random.default_rng(105)
    x = rng.normal(size=33) + 1j * rng.normal(size=33)
    assert np.max(np.abs(idft(dft(x)) - x)) < 1e-9

    for K in (2, 5, 16):
        grid = FrequencyGrid(K)
        prof = PowerProfile(rng.dirichlet(np.ones(K)))
        u = synth_multisine(prof, grid)
        X = dft(u)
        parseval = abs(np.sum(np.abs(X) ** 2) - grid.N * np.sum(u * u))
        assert parseval < 1e-9
        got = np.abs(X[1:K + 1])
        want = (grid.N / 2.0) * np.sqrt(prof.p)
        assert np.max(np.abs(got - want)) < 1e-9


def test_trace_determinism(tmp_path):
    def cfg(name, **kw):
        base = dict(
            mode="simulate", T=40, replications=10, seed=0,
            policies=("wts", "ts_unknown"), mc_samples=64, thin=1,
            out=str(tmp_path / name),
            means=np.array([[2.0, 0.0], [0.9, 1.2], [0.0, 0.8]]),
            variances=np.array([0.25, 0.5, 1.0]),
        )
        base.update(kw)
        return RunConfig(**base)

    a = run(cfg("a"), quiet=True)
    b = run(cfg("b"), quiet=True)
    bytes_a = open(a.csv_path, "rb").read()
    assert bytes_a == open(b.csv_path, "rb").read()

    # raising the replication count only appends traces
    more = run(cfg("more", replications=20), quiet=True)

    def by_rep(path):
        rows = {}
        for ln in open(path).read().splitlines()[1:]:
            parts = ln.split(",")
            rows.setdefault((parts[0], int(parts[1])), []).append(ln)
        return rows

    small, large = by_rep(a.csv_path), by_rep(more.csv_path)
    assert len(large) == 2 * len(small)
    for key, lines in small.items():
        assert large[key] == lines

    other = run(cfg("seeded", seed=1), quiet=True)
    assert open(other.csv_path, "rb").read() != bytes_a


def test_bound_constants():
    inst = BanditInstance(np.array([[2.0, 0.0], [1.0, 0.0]]),
                          np.array([1.0, 1.0]))
    c = lower_bound_constants(inst)
    assert abs(c.spreading_unknown - 1.0) <= 1e-12
    assert abs(c.ns_unknown - 1.0 / math.log(2.0)) <= 1e-12

    rng = np.random.default_rng(106)
    for _ in range(1000):
        K = int(rng.integers(2, 8))
        means = rng.normal(size=(K, 2)) * rng.uniform(0.5, 3.0)
        variances = rng.uniform(0.05, 4.0, size=K)
        c = lower_bound_constants(BanditInstance(means, variances))
        assert c.ns_unknown >= c.spreading_unknown - 1e-12
