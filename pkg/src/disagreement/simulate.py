"""Monte Carlo comparison of balance dispersion and geometric discrepancy.

Samples are generated in fixed-size blocks, each with its own child seed
spawned from the master seed, so the sample (and the report) is the same
whatever the number of workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.stats import rankdata

from disagreement.metrics import InvalidArityError

BLOCK_SIZE = 1 << 14
SAMPLERS = ("uniform", "neutral")


class SimulationConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SimulationConfig:
    sample_count: int = 100_000
    arity: int = 3
    seed: int = 0
    sampler: str = "uniform"
    # Dirichlet concentrations for the neutral sampler; default puts 3x weight on the middle category
    alpha: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        if self.sample_count < 1:
            raise SimulationConfigError(f"sample_count must be >= 1, got {self.sample_count}")
        if self.arity < 2:
            raise SimulationConfigError(f"arity must be >= 2, got {self.arity}")
        if not 0 <= self.seed < 2**64:
            raise SimulationConfigError("seed must be an unsigned 64-bit integer")
        if self.sampler not in SAMPLERS:
            raise SimulationConfigError(f"sampler must be one of {SAMPLERS}, got {self.sampler!r}")
        if self.alpha is not None:
            if len(self.alpha) != self.arity:
                raise SimulationConfigError("alpha needs one concentration per category")
            if any(not a > 0 for a in self.alpha):
                raise SimulationConfigError("alpha concentrations must be > 0")

    def concentrations(self) -> np.ndarray:
        if self.alpha is not None:
            return np.asarray(self.alpha, dtype=float)
        a = np.ones(self.arity)
        if self.sampler == "neutral":
            a[self.arity // 2] = 3.0
        return a

    def as_dict(self) -> dict:
        return {
            "sample_count": self.sample_count,
            "arity": self.arity,
            "seed": self.seed,
            "sampler": self.sampler,
            "alpha": [float(a) for a in self.concentrations()],
        }


def _block(config: SimulationConfig, seed_seq: np.random.SeedSequence, size: int) -> np.ndarray:
    rng = np.random.default_rng(seed_seq)
    if config.sampler == "uniform" and config.alpha is None:
        # normalized i.i.d. exponentials are uniform on the simplex
        g = rng.standard_exponential((size, config.arity))
    else:
        g = rng.standard_gamma(config.concentrations(), (size, config.arity))
    return g / g.sum(axis=1, keepdims=True)


def sample_shares(config: SimulationConfig, workers: int = 1) -> np.ndarray:
    """(sample_count, arity) array of share vectors, deterministic in the seed."""
    n_blocks = -(-config.sample_count // BLOCK_SIZE)
    children = np.random.SeedSequence(config.seed).spawn(n_blocks)
    sizes = [min(BLOCK_SIZE, config.sample_count - i * BLOCK_SIZE) for i in range(n_blocks)]
    if workers > 1 and n_blocks > 1:
        with ThreadPoolExecutor(workers) as pool:
            blocks = list(pool.map(lambda args: _block(config, *args), zip(children, sizes)))
    else:
        blocks = [_block(config, c, s) for c, s in zip(children, sizes)]
    return np.concatenate(blocks, axis=0)


def dispersion_many(shares: np.ndarray) -> np.ndarray:
    up, down = shares[:, 0], shares[:, 2]
    radicand = up + down - (up - down) ** 2
    return np.sqrt(np.clip(radicand, 0.0, None))


def discrepancy_many(shares: np.ndarray) -> np.ndarray:
    n = shares.shape[1]
    dist = np.linalg.norm(shares - 1.0 / n, axis=1)
    return np.clip(1.0 - dist / math.sqrt((n - 1) / n), 0.0, 1.0)


@dataclass(frozen=True)
class ComparisonReport:
    sample_count: int
    pearson_correlation: float
    spearman_correlation: float
    correlation_defined: bool
    mean_disp: float
    mean_d: float
    stddev_disp: float
    stddev_d: float
    share_disp_greater: float
    disp: np.ndarray = field(repr=False, compare=False)
    d: np.ndarray = field(repr=False, compare=False)

    def as_dict(self) -> dict:
        def num(x: float):
            return None if math.isnan(x) else float(x)

        return {
            "sample_count": self.sample_count,
            "pearson_correlation": num(self.pearson_correlation),
            "spearman_correlation": num(self.spearman_correlation),
            "correlation_defined": self.correlation_defined,
            "mean_disp": float(self.mean_disp),
            "mean_d": float(self.mean_d),
            "stddev_disp": float(self.stddev_disp),
            "stddev_d": float(self.stddev_d),
            "share_disp_greater": float(self.share_disp_greater),
        }


def _pearson(x: np.ndarray, y: np.ndarray) -> float:
    xc, yc = x - x.mean(), y - y.mean()
    return float(np.dot(xc, yc) / math.sqrt(np.dot(xc, xc) * np.dot(yc, yc)))


def compare_samples(shares: np.ndarray | Sequence[Sequence[float]]) -> ComparisonReport:
    """Dispersion vs discrepancy statistics over three-category samples.

    Correlations are NaN with ``correlation_defined=False`` when either
    statistic has zero variance over the sample.
    """
    shares = np.asarray(shares, dtype=float)
    if shares.ndim != 2 or shares.shape[0] == 0:
        raise SimulationConfigError("need a non-empty (n, 3) sample")
    if shares.shape[1] != 3:
        raise InvalidArityError(f"dispersion is defined for three categories only, got arity {shares.shape[1]}")
    disp = dispersion_many(shares)
    d = discrepancy_many(shares)
    sd_disp, sd_d = float(disp.std()), float(d.std())
    defined = sd_disp > 0 and sd_d > 0 and len(d) > 1
    if defined:
        pearson = _pearson(disp, d)
        spearman = _pearson(rankdata(disp), rankdata(d))
    else:
        pearson = spearman = math.nan
    return ComparisonReport(
        sample_count=len(d),
        pearson_correlation=pearson,
        spearman_correlation=spearman,
        correlation_defined=defined,
        mean_disp=float(disp.mean()),
        mean_d=float(d.mean()),
        stddev_disp=sd_disp,
        stddev_d=sd_d,
        share_disp_greater=float(np.mean(disp > d)),
        disp=disp,
        d=d,
    )


def compare(config: SimulationConfig, workers: int = 1) -> ComparisonReport:
    if config.arity != 3:
        raise InvalidArityError(f"dispersion comparison needs arity 3, got {config.arity}")
    return compare_samples(sample_shares(config, workers))
