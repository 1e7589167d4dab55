"""Peak-gain estimation of a sampled filter as a bandit problem.

A stable discrete-time system G is probed on the odd frequency grid

    omega_k = 2 pi k / (2K + 1),   k = 1..K,   N = 2K + 1,

one arm per grid frequency.  Measuring with a power-p_k multisine

    u_tau = sum_k sqrt(p_k) sin(omega_k tau),   tau = 0..N-1,

puts energy |U(omega_k)| = (N/2) sqrt(p_k) in bin k and nothing elsewhere
(the grid is leakage-free because 2k is never divisible by N).  A frequency-
domain measurement of bin k then behaves exactly like a power-weighted
bandit observation: mean [Re G, Im G](omega_k), per-coordinate variance
|H(omega_k)|^2 / (2 p_k) with H the noise shaping filter.  The peak gain
estimate reads off the arm with the most accumulated power:

    k_hat = argmax_k z_k,   beta_hat = |xbar_{k_hat}|.

:func:`grid_from_fir` builds the induced bandit instance from FIR
coefficient lists; :func:`run_experiment` samples its canonical observation
law directly.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import BanditInstance, Outcome, PowerProfile, new_instance, sample_outcome
from .errors import (
    DimensionMismatch,
    EmptyInput,
    NoData,
    TiedPeak,
    TooFewArms,
    ZeroNoiseBin,
)

# two bins tie when their gains differ by no more than this
PEAK_TIE_TOL = 1e-12


@dataclass(frozen=True, eq=False)
class FrequencyGrid:
    """The K odd-DFT bin frequencies 2 pi k / (2K + 1), k = 1..K."""

    K: int
    N: int = field(init=False)
    omegas: np.ndarray = field(init=False)

    def __post_init__(self):
        K = int(self.K)
        if K < 1:
            raise TooFewArms(f"grid needs K >= 1, got {K}")
        N = 2 * K + 1
        object.__setattr__(self, "K", K)
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "omegas",
                           2.0 * np.pi * np.arange(1, K + 1) / N)


@dataclass(frozen=True, eq=False)
class GainProblem:
    """A system/noise response pair on a grid plus the induced instance."""

    grid: FrequencyGrid
    g_resp: np.ndarray  # complex G(e^{j omega_k})
    h_resp: np.ndarray  # complex H(e^{j omega_k})
    instance: BanditInstance

    @property
    def peak_gain(self) -> float:
        return float(np.max(np.abs(self.g_resp)))

    @property
    def peak_bin(self) -> int:
        return int(np.argmax(np.abs(self.g_resp)))


@dataclass(frozen=True)
class GainEstimate:
    """Peak-gain readout after ``t`` rounds."""

    beta_hat: float
    k_hat: int
    t: int


def freq_response(coeffs, omegas) -> np.ndarray:
    """Evaluate an FIR transfer sum_tau c_tau e^{-j omega tau} on ``omegas``."""
    coeffs = np.asarray(coeffs, dtype=np.float64)
    if coeffs.ndim != 1 or coeffs.shape[0] == 0:
        raise DimensionMismatch("coefficients must be a nonempty 1-d array")
    omegas = np.asarray(omegas, dtype=np.float64)
    taus = np.arange(coeffs.shape[0])
    return np.exp(-1j * np.outer(omegas, taus)) @ coeffs


def grid_from_fir(g_coeffs, h_coeffs, K: int) -> GainProblem:
    """Build the bandit view of FIR system ``g`` under FIR noise shaping ``h``.

    Arm means are [Re G, Im G] at each bin, variances |H|^2.  Fails when the
    noise response vanishes at a bin or when two bins tie for the largest
    gain within ``PEAK_TIE_TOL``.
    """
    if int(K) < 2:
        raise TooFewArms(f"need at least 2 bins, got {K}")
    grid = FrequencyGrid(int(K))
    g_resp = freq_response(g_coeffs, grid.omegas)
    h_resp = freq_response(h_coeffs, grid.omegas)
    noise = np.abs(h_resp)
    if np.any(noise <= 0.0):
        raise ZeroNoiseBin("noise response vanishes at a grid frequency")
    gain = np.abs(g_resp)
    order = np.argsort(gain)
    if gain[order[-1]] - gain[order[-2]] <= PEAK_TIE_TOL:
        raise TiedPeak(
            f"largest gains tie within {PEAK_TIE_TOL}: "
            f"bins {order[-1]} and {order[-2]}")
    means = np.column_stack([g_resp.real, g_resp.imag])
    instance = new_instance(means, noise * noise)
    return GainProblem(grid, g_resp, h_resp, instance)


def run_experiment(problem: GainProblem, profile: PowerProfile,
                   rng: np.random.Generator) -> Outcome:
    """One round of frequency-domain measurements under ``profile``.

    Samples the induced instance's observation law directly; bins with zero
    power are unexcited and return nothing.
    """
    return sample_outcome(problem.instance, profile, rng)


def synth_multisine(profile: PowerProfile, grid: FrequencyGrid) -> np.ndarray:
    """The length-N input signal realising ``profile``:
    u_tau = sum_k sqrt(p_k) sin(omega_k tau)."""
    if len(profile) != grid.K:
        raise DimensionMismatch(
            f"profile has {len(profile)} entries for {grid.K} bins")
    taus = np.arange(grid.N)
    return np.sin(np.outer(taus, grid.omegas)) @ np.sqrt(profile.p)


def dft(x) -> np.ndarray:
    """Plain O(N^2) DFT:  X_m = sum_tau x_tau e^{-j 2 pi m tau / N}."""
    x = np.asarray(x)
    if x.ndim != 1 or x.shape[0] == 0:
        raise EmptyInput("dft needs a nonempty 1-d sequence")
    N = x.shape[0]
    m = np.arange(N)
    return np.exp(-2j * np.pi * np.outer(m, m) / N) @ x.astype(np.complex128)


def idft(X) -> np.ndarray:
    """Inverse of :func:`dft`:  x_tau = (1/N) sum_m X_m e^{j 2 pi m tau / N}."""
    X = np.asarray(X)
    if X.ndim != 1 or X.shape[0] == 0:
        raise EmptyInput("idft needs a nonempty 1-d sequence")
    N = X.shape[0]
    m = np.arange(N)
    return (np.exp(2j * np.pi * np.outer(m, m) / N) @ X.astype(np.complex128)
            / N)


def gain_estimate(per_arm, t: int) -> GainEstimate:
    """Read the peak-gain estimate off per-arm statistics.

    The reported bin is the one with the most accumulated power (lowest
    index on ties); the estimate is the norm of its weighted mean.
    """
    z = np.array([st.z for st in per_arm])
    if z.shape[0] == 0 or np.all(z <= 0.0):
        raise NoData("no bin has received any power yet")
    k_hat = int(np.argmax(z))
    st = per_arm[k_hat]
    beta = float(np.hypot(st.mean_x, st.mean_y))
    return GainEstimate(beta_hat=beta, k_hat=k_hat, t=int(t))
