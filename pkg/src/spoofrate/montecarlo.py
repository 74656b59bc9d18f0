"""Sample-level check of the analytic rates.

Draws unit-power CSCG source, target and noise symbols, forms Bob's
received signal ``y = h sqrt(P) s + g (alpha s + beta x) + n`` and
compares empirical second moments with the closed-form powers.  Rates are
checked through the Gaussian mutual-information formula, not by decoding.

Samples are generated in fixed-size chunks.  Chunk ``k`` draws from its own
stream ``SeedSequence(seed, spawn_key=(k,))``, and chunk sums are reduced
in chunk order, so results do not depend on how many workers run.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import kernels
from .scenario import Scenario, SpoofingDesign, evaluate

CHUNK = 1 << 16
_LN2 = math.log(2.0)


@dataclass(frozen=True)
class SimConfig:
    n_samples: int = 1_000_000
    seed: int = 0
    workers: int = 1

    def __post_init__(self):
        if self.n_samples < 10_000:
            raise ValueError("n_samples must be at least 1e4")
        if self.workers < 1:
            raise ValueError("workers must be positive")


@dataclass(frozen=True)
class EmpiricalReport:
    n: int
    source_power: float
    source_power_se: float
    target_power: float
    target_power_se: float
    noise_power: float
    noise_power_se: float
    received_power: float
    sinr: float
    sinr_se: float
    rate: float
    rate_se: float
    tin_success: bool

    def as_dict(self):
        return dict(self.__dict__)


def cscg(rng: np.random.Generator, size: int) -> np.ndarray:
    """Unit-variance circularly symmetric complex Gaussian samples."""
    z = rng.standard_normal((size, 2))
    return (z[:, 0] + 1j * z[:, 1]) * math.sqrt(0.5)


def _chunks(n: int):
    full, rest = divmod(n, CHUNK)
    sizes = [CHUNK] * full + ([rest] if rest else [])
    return list(enumerate(sizes))


def _map_chunks(fn, n: int, workers: int) -> np.ndarray:
    jobs = _chunks(n)
    if workers == 1:
        parts = [fn(k, size) for k, size in jobs]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(lambda job: fn(*job), jobs))
    return np.sum(np.vstack(parts), axis=0)


def _stream(seed: int, k: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(k,))))


def _mean_se(total: float, sq_total: float, n: int) -> tuple[float, float]:
    mean = total / n
    var = max(sq_total / n - mean * mean, 0.0) * n / (n - 1)
    return mean, math.sqrt(var / n)


def simulate(sc: Scenario, d: SpoofingDesign, cfg: SimConfig = SimConfig()) -> EmpiricalReport:
    """Empirical powers, SINR and rate of design ``d`` at Bob.

    The SINR estimate is the ratio of the mean target power to the mean
    power of source-plus-noise; its standard error comes from the delta
    method with the sample (co)variances.
    """
    evaluate(sc, d)  # rejects designs over budget
    hsp = sc.h * math.sqrt(sc.P)

    def work(k, size):
        rng = _stream(cfg.seed, k)
        s, x, n = cscg(rng, size), cscg(rng, size), cscg(rng, size)
        return kernels.moment_sums(hsp, sc.g, complex(d.alpha), complex(d.beta), s, x, n)

    sums = _map_chunks(work, cfg.n_samples, cfg.workers)
    n = cfg.n_samples
    T, T_se = _mean_se(sums[0], sums[1], n)
    S, S_se = _mean_se(sums[2], sums[3], n)
    N, N_se = _mean_se(sums[4], sums[5], n)
    D, D_se = _mean_se(sums[6], sums[7], n)
    Y = sums[8] / n
    cov_td = (sums[10] / n - T * D) / n
    sinr = T / D
    var = (T_se / D) ** 2 + (T * D_se / D ** 2) ** 2 - 2.0 * T / D ** 3 * cov_td
    sinr_se = math.sqrt(max(var, 0.0))
    rate = math.log1p(sinr) / _LN2
    rate_se = sinr_se / ((1.0 + sinr) * _LN2)
    return EmpiricalReport(n, S, S_se, T, T_se, N, N_se, Y, sinr, sinr_se, rate, rate_se,
                           bool(T >= S + sc.delta1))


@dataclass(frozen=True)
class CapacityEstimate:
    capacity: float
    se: float
    signal_power: float
    noise_power: float


def estimate_capacity(sc: Scenario, cfg: SimConfig = SimConfig()) -> CapacityEstimate:
    """Gaussian mutual-information estimate of the unspoofed link capacity."""
    hsp = sc.h * math.sqrt(sc.P)

    def work(k, size):
        rng = _stream(cfg.seed, k)
        s, n = cscg(rng, size), cscg(rng, size)
        sig = np.abs(hsp * s) ** 2
        noise = np.abs(n) ** 2
        return np.array([sig.sum(), (sig * sig).sum(), noise.sum(), (noise * noise).sum()])

    sums = _map_chunks(work, cfg.n_samples, cfg.workers)
    n = cfg.n_samples
    S, S_se = _mean_se(sums[0], sums[1], n)
    N, N_se = _mean_se(sums[2], sums[3], n)
    snr = S / N
    snr_se = math.sqrt((S_se / N) ** 2 + (S * N_se / N ** 2) ** 2)
    return CapacityEstimate(math.log1p(snr) / _LN2, snr_se / ((1.0 + snr) * _LN2), S, N)
