"""Measurement sampling, maximum-likelihood estimation, and Monte Carlo campaigns.

Counts are drawn per four-port trial, (theta, phi) is recovered by the exact
closed-form multinomial MLE (with an independent grid maximizer as oracle),
and repeated campaigns produce M x MSE statistics, error bars, and
Heisenberg-scaling sweeps with their Cramér-Rao and shot-noise references.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import DegenerateConfigurationError, SingularBoundError
from .information import crb_bound
from .probes import antiparallel_qfim_closed, outcome_probabilities

__all__ = [
    "NOISE_MODELS",
    "TrialConfig",
    "Estimate",
    "TrialStatistics",
    "SweepPoint",
    "trial_rng",
    "sample_counts",
    "mle_closed_form",
    "mle_grid",
    "run_trials",
    "error_bars",
    "heisenberg_sweep",
]

NOISE_MODELS = ("multinomial", "poisson")

# Fraction of failed estimates beyond which a campaign is rejected as
# degenerate.  Not applied at shots = 1, where every estimate is non-ok by
# quantization alone.
_MAX_FAILURE_FRACTION = 0.10

_GOLDEN = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class TrialConfig:
    """One simulated campaign: true angles, iteration count, and sampling plan.

    Angles are radians and must satisfy 0 <= theta, phi < pi/(2N), the
    identifiable range of the four-port outcome model.
    """

    theta_true: float
    phi_true: float
    n_iter: int
    shots: int
    repeats: int
    seed: int
    noise_model: str = "multinomial"

    def __post_init__(self):
        if self.n_iter < 1:
            raise ValueError("n_iter must be >= 1")
        limit = np.pi / (2 * self.n_iter)
        for name, value in (("theta_true", self.theta_true), ("phi_true", self.phi_true)):
            if not 0.0 <= value < limit:
                raise ValueError(
                    f"{name} = {value!r} violates 0 <= angle < pi/(2N) = {limit!r} for N = {self.n_iter}"
                )
        if self.shots < 1:
            raise ValueError("shots must be >= 1")
        if self.repeats < 2:
            raise ValueError("repeats must be >= 2")
        if self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if self.noise_model not in NOISE_MODELS:
            raise ValueError(f"noise_model must be one of {NOISE_MODELS}")


@dataclass(frozen=True)
class Estimate:
    """A joint (theta, phi) estimate with its identifiability status."""

    theta_hat: float
    phi_hat: float
    status: str  # "ok", "phi-unidentifiable", or "boundary"


@dataclass(frozen=True)
class TrialStatistics:
    """Squared-error statistics of one campaign of repeated estimates.

    MSE and covariance are radians^2; the m_times_* fields are the same
    quantities multiplied by the shot count M (dimensionless), which is the
    scale on which the Cramér-Rao references qcrb_theta / qcrb_phi live.
    se_* fields are standard errors of the corresponding m_times_* sample
    statistics; err_theta / err_phi are Monte Carlo error-bar half-widths
    (NaN until filled in by error_bars).  Statistics cover ok and boundary
    estimates (n_ok + n_boundary of them); n_failed counts the excluded
    phi-unidentifiable trials.
    """

    mse_theta: float
    mse_phi: float
    covariance: float
    m_times_mse_theta: float
    m_times_mse_phi: float
    m_times_covariance: float
    se_m_mse_theta: float
    se_m_mse_phi: float
    se_m_covariance: float
    qcrb_theta: float
    qcrb_phi: float
    n_ok: int
    n_boundary: int
    n_failed: int
    err_theta: float = float("nan")
    err_phi: float = float("nan")


@dataclass(frozen=True)
class SweepPoint:
    """One row of a Heisenberg sweep: campaign statistics plus references."""

    n_iter: int
    stats: TrialStatistics
    snl_theta: float
    snl_phi: float


def trial_rng(seed: int, trial_index: int, resample_index: int = 0) -> np.random.Generator:
    """Counter-based substream keyed by (seed, trial index, resample index).

    Each key selects a disjoint 2^128-block slice of one Philox stream, so
    draws are identical no matter in which order trials are executed.
    """
    if seed < 0 or trial_index < 0 or resample_index < 0:
        raise ValueError("seed, trial_index and resample_index must be non-negative")
    counter = (int(resample_index) << 192) | (int(trial_index) << 128)
    return np.random.Generator(np.random.Philox(key=int(seed), counter=counter))


def sample_counts(
    probs: np.ndarray, shots: int, noise_model: str, rng: np.random.Generator
) -> np.ndarray:
    """Draw per-port counts for one trial.

    multinomial: counts sum to exactly ``shots``.  poisson: each port is an
    independent Poisson with mean shots * p_k, so the total fluctuates.
    """
    probs = np.asarray(probs, dtype=float)
    if np.min(probs) < -1e-12 or abs(probs.sum() - 1.0) > 1e-10:
        raise ValueError(f"invalid outcome distribution: sum = {probs.sum()!r}")
    if shots < 1:
        raise ValueError("shots must be >= 1")
    probs = np.maximum(probs, 0.0)
    probs = probs / probs.sum()
    if noise_model == "multinomial":
        return rng.multinomial(shots, probs)
    if noise_model == "poisson":
        return rng.poisson(shots * probs)
    raise ValueError(f"noise_model must be one of {NOISE_MODELS}")


def _check_counts(counts: np.ndarray) -> np.ndarray:
    counts = np.asarray(counts, dtype=float)
    if counts.shape != (4,):
        raise ValueError("expected four per-port counts")
    if np.min(counts) < 0 or not np.all(np.isfinite(counts)):
        raise ValueError("counts must be non-negative and finite")
    if counts.sum() <= 0:
        raise ValueError("total count must be >= 1 for estimation")
    return counts


def mle_closed_form(counts: np.ndarray, n_iter: int = 1) -> Estimate:
    """Exact maximizer of the four-port multinomial log-likelihood.

    With n34 = n3 + n4 and M the total, the likelihood factorizes over the
    two angles, giving s_hat = (2 n2 + n34) / (2M), theta_hat =
    (2/N) arcsin(sqrt(s_hat)) and phi_hat = (1/N) arctan(sqrt(n3/n4)).

    Status is "phi-unidentifiable" when n34 = 0 (no counts carry phase
    information) and "boundary" when the constrained maximizer sits on an
    edge of [0, pi/(2N)]^2: phi_hat pinned to 0 (n3 = 0) or pi/(2N)
    (n4 = 0), or theta_hat pinned to pi/(2N) (s_hat > 1/2).  Boundary
    estimates carry the constrained-MLE values and remain usable.
    """
    counts = _check_counts(counts)
    if n_iter < 1:
        raise ValueError("n_iter must be >= 1")
    n1, n2, n3, n4 = counts
    total = counts.sum()
    n34 = n3 + n4
    limit = np.pi / (2 * n_iter)
    s_hat = (2.0 * n2 + n34) / (2.0 * total)
    theta_hat = 2.0 * np.arcsin(np.sqrt(s_hat)) / n_iter
    pinned = False
    if theta_hat > limit + 1e-12:
        theta_hat, pinned = limit, True
    elif theta_hat > limit:
        theta_hat = limit  # round-trip dust from arcsin at s_hat = 1/2
    if n34 == 0:
        return Estimate(float(theta_hat), float("nan"), "phi-unidentifiable")
    if n3 == 0:
        phi_hat, pinned = 0.0, True
    elif n4 == 0:
        phi_hat, pinned = limit, True
    else:
        phi_hat = np.arctan(np.sqrt(n3 / n4)) / n_iter
    return Estimate(float(theta_hat), float(phi_hat), "boundary" if pinned else "ok")


def _loglik_terms(count: float, prob: np.ndarray) -> np.ndarray:
    """count * log(prob) with the 0 * log 0 := 0 convention."""
    with np.errstate(divide="ignore", invalid="ignore"):
        vals = count * np.log(prob)
    if count == 0:
        return np.zeros_like(np.asarray(prob, dtype=float))
    return vals


def _golden_max(f: Callable[[float], float], lo: float, hi: float, iterations: int) -> float:
    a, b = lo, hi
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iterations):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


def mle_grid(counts: np.ndarray, n_iter: int = 1, resolution: int = 512) -> Estimate:
    """Independent likelihood maximizer over a grid on [0, pi/(2N)]^2.

    Takes the arg-max of the log-likelihood on a resolution x resolution
    grid (ties broken toward smaller (theta, phi) lexicographically) and
    refines each coordinate with 40 golden-section iterations within one
    grid cell.  Serves as the oracle for mle_closed_form.
    """
    counts = _check_counts(counts)
    if n_iter < 1:
        raise ValueError("n_iter must be >= 1")
    if resolution < 16:
        raise ValueError("resolution must be >= 16")
    n1, n2, n3, n4 = counts
    n34 = n3 + n4
    limit = np.pi / (2 * n_iter)
    thetas = np.linspace(0.0, limit, resolution)
    phis = np.linspace(0.0, limit, resolution)

    def theta_part(theta: np.ndarray) -> np.ndarray:
        a = n_iter * np.asarray(theta, dtype=float)
        return (
            _loglik_terms(n1, np.cos(0.5 * a) ** 4)
            + _loglik_terms(n2, np.sin(0.5 * a) ** 4)
            + _loglik_terms(n34, 0.5 * np.sin(a) ** 2)
        )

    def phi_part(phi: np.ndarray) -> np.ndarray:
        b = n_iter * np.asarray(phi, dtype=float)
        return _loglik_terms(n3, np.sin(b) ** 2) + _loglik_terms(n4, np.cos(b) ** 2)

    grid = theta_part(thetas)[:, None] + phi_part(phis)[None, :]
    flat_index = int(np.argmax(grid))  # first maximum in row-major order
    i, j = divmod(flat_index, resolution)
    cell = limit / (resolution - 1)

    theta_hat = _golden_max(
        lambda t: float(theta_part(t)), max(0.0, thetas[i] - cell), min(limit, thetas[i] + cell), 40
    )
    phi_hat = _golden_max(
        lambda p: float(phi_part(p)), max(0.0, phis[j] - cell), min(limit, phis[j] + cell), 40
    )

    # Status conventions mirror the closed form: they are properties of the
    # count pattern, not of the maximizer used.
    s_hat = (2.0 * n2 + n34) / (2.0 * counts.sum())
    if n34 == 0:
        return Estimate(float(theta_hat), float("nan"), "phi-unidentifiable")
    status = "boundary" if (n3 == 0 or n4 == 0 or s_hat > 0.5 + 1e-12) else "ok"
    return Estimate(float(theta_hat), float(phi_hat), status)


def run_trials(config: TrialConfig, resample_index: int = 0) -> TrialStatistics:
    """Run one campaign of repeated sampled estimates at the true parameters.

    Each of ``config.repeats`` trials draws counts from its own
    (seed, trial, resample) substream and is estimated by mle_closed_form.
    phi-unidentifiable estimates carry no phase value and are excluded from
    the statistics and counted in n_failed; boundary estimates carry the
    constrained-MLE values and are kept (dropping them biases the MSE below
    the Cramér-Rao bound wherever a port's expected count is small).  More
    than 10% failures (for shots > 1, where failures signal degeneracy
    rather than quantization) raise DegenerateConfigurationError.
    """
    probs = outcome_probabilities(config.theta_true, config.phi_true, config.n_iter)
    thetas, phis = [], []
    n_ok = n_boundary = n_failed = 0
    for trial in range(config.repeats):
        rng = trial_rng(config.seed, trial, resample_index)
        counts = sample_counts(probs, config.shots, config.noise_model, rng)
        if counts.sum() == 0:  # possible under poisson noise at tiny shot counts
            n_failed += 1
            continue
        estimate = mle_closed_form(counts, config.n_iter)
        if estimate.status == "phi-unidentifiable":
            n_failed += 1
            continue
        if estimate.status == "boundary":
            n_boundary += 1
        else:
            n_ok += 1
        thetas.append(estimate.theta_hat)
        phis.append(estimate.phi_hat)
    if config.shots > 1 and n_failed > _MAX_FAILURE_FRACTION * config.repeats:
        raise DegenerateConfigurationError(
            f"{n_failed}/{config.repeats} estimates failed; true theta = "
            f"{config.theta_true!r} is too close to a sin(N theta) = 0 zero for N = {config.n_iter}"
        )
    return _statistics(np.asarray(thetas), np.asarray(phis), n_ok, n_boundary, n_failed, config)


def _statistics(
    thetas: np.ndarray,
    phis: np.ndarray,
    n_ok: int,
    n_boundary: int,
    n_failed: int,
    config: TrialConfig,
) -> TrialStatistics:
    shots = float(config.shots)
    n = thetas.size
    nan = float("nan")
    if n == 0:
        mse_t = mse_p = cov = se_t = se_p = se_c = nan
    else:
        sq_t = (thetas - config.theta_true) ** 2
        sq_p = (phis - config.phi_true) ** 2
        mse_t = float(np.mean(sq_t))
        mse_p = float(np.mean(sq_p))
        if n >= 2:
            dt = thetas - thetas.mean()
            dp = phis - phis.mean()
            cross = dt * dp
            cov = float(cross.sum() / (n - 1))
            se_t = float(shots * np.std(sq_t, ddof=1) / np.sqrt(n))
            se_p = float(shots * np.std(sq_p, ddof=1) / np.sqrt(n))
            se_c = float(shots * np.std(cross, ddof=1) / np.sqrt(n))
        else:
            cov = se_t = se_p = se_c = nan
    try:
        bound = crb_bound(
            antiparallel_qfim_closed(config.theta_true, config.n_iter),
            config.shots,
            names=("theta", "phi"),
        )
        qcrb_theta = shots * float(bound[0, 0])
        qcrb_phi = shots * float(bound[1, 1])
    except SingularBoundError:
        qcrb_theta = 1.0 / (2.0 * config.n_iter**2)
        qcrb_phi = float("inf")
    return TrialStatistics(
        mse_theta=mse_t,
        mse_phi=mse_p,
        covariance=cov,
        m_times_mse_theta=shots * mse_t,
        m_times_mse_phi=shots * mse_p,
        m_times_covariance=shots * cov,
        se_m_mse_theta=se_t,
        se_m_mse_phi=se_p,
        se_m_covariance=se_c,
        qcrb_theta=qcrb_theta,
        qcrb_phi=qcrb_phi,
        n_ok=int(n_ok),
        n_boundary=int(n_boundary),
        n_failed=int(n_failed),
    )


def error_bars(config: TrialConfig, resamples: int = 100) -> tuple[float, float]:
    """Monte Carlo error bars for the M x MSE values of a campaign.

    Runs ``resamples`` independent Poisson-noise repetitions of the campaign
    with seeds derived from config.seed + resample index and returns the
    standard deviation of M x MSE for theta and phi.
    """
    if resamples < 2:
        raise ValueError("resamples must be >= 2")
    base = dataclasses.replace(config, noise_model="poisson")
    m_mse_theta = np.empty(resamples)
    m_mse_phi = np.empty(resamples)
    for r in range(resamples):
        stats = run_trials(dataclasses.replace(base, seed=config.seed + 1 + r))
        m_mse_theta[r] = stats.m_times_mse_theta
        m_mse_phi[r] = stats.m_times_mse_phi
    return float(np.std(m_mse_theta, ddof=1)), float(np.std(m_mse_phi, ddof=1))


def heisenberg_sweep(
    theta: float,
    phi: float,
    n_list: Sequence[int],
    shots: int,
    repeats: int,
    seed: int,
    noise_model: str = "multinomial",
) -> list[SweepPoint]:
    """One campaign per iteration count N, with QCRB and shot-noise references.

    The shot-noise reference treats N iterations as N independent single-pass
    uses: M x MSE_SNL(theta) = 1/(2N), M x MSE_SNL(phi) = 1/(2N sin^2(N theta)).
    """
    for n in n_list:
        limit = np.pi / (2 * n)
        if not (0.0 <= theta < limit and 0.0 <= phi < limit):
            raise ValueError(
                f"angles (theta={theta!r}, phi={phi!r}) violate 0 <= angle < pi/(2N) "
                f"= {limit!r} for N = {n}"
            )
    points = []
    for n in n_list:
        config = TrialConfig(theta, phi, int(n), shots, repeats, seed, noise_model)
        stats = run_trials(config)
        sin_sq = float(np.sin(n * theta) ** 2)
        snl_theta = 1.0 / (2.0 * n)
        snl_phi = 1.0 / (2.0 * n * sin_sq) if sin_sq > 0 else float("inf")
        points.append(SweepPoint(n_iter=int(n), stats=stats, snl_theta=snl_theta, snl_phi=snl_phi))
    return points
