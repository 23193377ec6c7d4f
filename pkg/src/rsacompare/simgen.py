"""Synthetic data generation: structured covariances, multivariate-normal
features, linear-model responses, and radial voxel activation maps."""

import hashlib
from dataclasses import dataclass, field

import numpy as np

INTERCEPT = 1.0
BETA_LARGE = 0.5
BETA_SMALL = 0.4

_PD_EIG_FLOOR = 1e-10
_PD_MAX_RESAMPLES = 100


@dataclass(frozen=True)
class CovarianceSpec:
    """Population feature covariance: unit variances, block correlations.

    The first p/2 features form the relevant block, the rest the irrelevant
    block. Cross-block correlations are drawn uniformly from cross_range.
    """

    p: int
    rho_relevant: float
    rho_irrelevant: float
    cross_range: tuple = (0.0, 0.1)

    def __post_init__(self):
        if self.p < 2 or self.p % 2 != 0:
            raise ValueError(f"p must be a positive even integer, got {self.p}")
        for name in ("rho_relevant", "rho_irrelevant"):
            rho = getattr(self, name)
            if not 0.0 <= rho < 1.0:
                raise ValueError(f"{name} must lie in [0, 1), got {rho}")
        lo, hi = self.cross_range
        if not (0.0 <= lo <= hi < 1.0):
            raise ValueError(f"cross_range must satisfy 0 <= lo <= hi < 1, got {self.cross_range}")


@dataclass(frozen=True)
class EffectSpec:
    """Linear-model coefficients for one data-generating process."""

    beta_relevant: float
    noise_variance: float
    intercept: float = INTERCEPT
    beta_irrelevant: float = 0.0

    def __post_init__(self):
        if self.noise_variance < 0:
            raise ValueError("noise_variance must be nonnegative")


@dataclass(frozen=True)
class SimCondition:
    """One cell of an experiment grid with its realized population covariance."""

    condition_id: str
    n: int
    noise_variance: float
    sigma: np.ndarray
    rho_relevant: float = None
    rho_irrelevant: float = None


@dataclass(frozen=True)
class RadialConfig:
    """Geometry of the simulated activation map."""

    g: int = 11
    noise_sd: float = 0.2

    def __post_init__(self):
        if self.g < 3 or self.g % 2 == 0:
            raise ValueError(f"grid side must be odd and >= 3, got {self.g}")
        if self.noise_sd < 0:
            raise ValueError("noise_sd must be nonnegative")


@dataclass(frozen=True)
class VoxelCondition:
    condition_id: str
    n: int
    noise_variance: float
    sigma: np.ndarray
    radial: RadialConfig = field(default_factory=RadialConfig)
    rho_relevant: float = None
    rho_irrelevant: float = None


@dataclass(frozen=True)
class SimDataset:
    """One replication: shared features with one response per model."""

    x: np.ndarray
    y_large: np.ndarray
    y_small: np.ndarray
    condition_id: str
    replication: int


@dataclass(frozen=True)
class VoxelDataset:
    x: np.ndarray
    y_large: np.ndarray
    y_small: np.ndarray
    v_large: np.ndarray
    v_small: np.ndarray
    condition_id: str
    replication: int
    g: int


def derive_stream(base_seed: int, condition_id: str, replication: int, label: str) -> np.random.Generator:
    """Reproducible, statistically independent substream for one stochastic decision.

    Keyed by hashing the (condition, replication, label) tuple, so streams are
    identical across runs and worker schedules, and adding a stream label
    never perturbs any other stream.
    """
    if base_seed < 0:
        raise ValueError("base_seed must be nonnegative")
    key = f"{condition_id}|{replication}|{label}".encode()
    digest = hashlib.blake2b(key, digest_size=16).digest()
    words = np.frombuffer(digest, dtype=np.uint32)
    ss = np.random.SeedSequence([base_seed, *words.tolist()])
    return np.random.default_rng(ss)


def build_covariance(spec: CovarianceSpec, rng: np.random.Generator) -> np.ndarray:
    """Assemble the block covariance, redrawing cross-block entries until PD.

    Only the uniform cross-block draws are resampled; the fixed block
    correlations are part of the population and never adjusted.
    """
    half = spec.p // 2
    sigma = np.empty((spec.p, spec.p))
    sigma[:half, :half] = spec.rho_relevant
    sigma[half:, half:] = spec.rho_irrelevant
    lo, hi = spec.cross_range
    for _ in range(_PD_MAX_RESAMPLES):
        cross = rng.uniform(lo, hi, size=(half, half))
        sigma[:half, half:] = cross
        sigma[half:, :half] = cross.T
        np.fill_diagonal(sigma, 1.0)
        if np.linalg.eigvalsh(sigma)[0] > _PD_EIG_FLOOR:
            return sigma.copy()
    raise ValueError(
        f"covariance for {spec} not positive definite after {_PD_MAX_RESAMPLES} cross-block resamples"
    )


def sample_features(sigma: np.ndarray, n: int, rng: np.random.Generator) -> np.ndarray:
    """Draw n rows from N(0, sigma) via a Cholesky factor."""
    try:
        chol = np.linalg.cholesky(sigma)
    except np.linalg.LinAlgError as exc:
        raise ValueError("feature covariance is not positive definite") from exc
    return rng.standard_normal((n, sigma.shape[0])) @ chol.T


def generate_response(x: np.ndarray, effect: EffectSpec, rng: np.random.Generator) -> np.ndarray:
    """y = intercept + x beta + noise, with the first half of the features relevant."""
    n, p = x.shape
    beta = np.full(p, effect.beta_irrelevant)
    beta[: p // 2] = effect.beta_relevant
    noise = rng.normal(0.0, np.sqrt(effect.noise_variance), n)
    return effect.intercept + x @ beta + noise


def generate_replication(condition, r: int, base_seed: int) -> SimDataset:
    """One paired replication: shared X, independent noise per model."""
    stream = lambda label: derive_stream(base_seed, condition.condition_id, r, label)
    x = sample_features(condition.sigma, condition.n, stream("features"))
    y_large = generate_response(
        x, EffectSpec(beta_relevant=BETA_LARGE, noise_variance=condition.noise_variance), stream("noise_large")
    )
    y_small = generate_response(
        x, EffectSpec(beta_relevant=BETA_SMALL, noise_variance=condition.noise_variance), stream("noise_small")
    )
    return SimDataset(x=x, y_large=y_large, y_small=y_small, condition_id=condition.condition_id, replication=r)


def radial_base(cfg: RadialConfig) -> np.ndarray:
    """Noise-free activation template with its unique maximum 1 at the center.

    Distances from the central cell decay linearly to 0 at the farthest
    corner; squaring and rescaling by (m + max)/max(m + max) maps the grid
    into [0.5, 1].
    """
    coords = np.arange(1, cfg.g + 1, dtype=float)
    center = (cfg.g + 1) / 2.0
    dist = np.hypot(coords[:, None] - center, coords[None, :] - center)
    gamma = 1.0 - dist / dist.max()
    m = gamma * gamma
    shifted = m + m.max()
    return shifted / shifted.max()


def voxel_map(y: float, m_norm: np.ndarray, noise_sd: float, rng: np.random.Generator) -> np.ndarray:
    """Scale a noisy copy of the template by the response, flattened row-major.

    Negative responses use the reversed map 1 - m + min(m), which keeps the
    central voxel as the signed maximum.
    """
    m_pos = m_norm + rng.normal(0.0, noise_sd, m_norm.shape)
    if y >= 0:
        return (m_pos * y).ravel()
    m_rev = 1.0 - m_pos + m_pos.min()
    return (m_rev * y).ravel()


def generate_voxel_replication(condition, r: int, base_seed: int) -> VoxelDataset:
    """Voxel-pattern replication on top of the behavioral generator.

    Map noise is redrawn per stimulus from a single stream, larger-model rows
    first, so adding a method never perturbs another stream.
    """
    base = generate_replication(condition, r, base_seed)
    cfg = condition.radial
    m_norm = radial_base(cfg)
    rng = derive_stream(base_seed, condition.condition_id, r, "voxel_noise")
    v_large = np.stack([voxel_map(y, m_norm, cfg.noise_sd, rng) for y in base.y_large])
    v_small = np.stack([voxel_map(y, m_norm, cfg.noise_sd, rng) for y in base.y_small])
    return VoxelDataset(
        x=base.x,
        y_large=base.y_large,
        y_small=base.y_small,
        v_large=v_large,
        v_small=v_small,
        condition_id=condition.condition_id,
        replication=r,
        g=cfg.g,
    )
