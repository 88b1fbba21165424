"""Trial configuration, profiles and the per-trial random streams."""
import dataclasses
import os
import zlib
from dataclasses import dataclass, field

import numpy as np

from ..errors import InputError
from ..opcore import KERNEL_TOL

DEFAULT_SEED = 20240611
SIZES_N = (1, 2, 3)
SIZES_H = (1, 2, 4)
SIZES_COEFF = (1, 2, 3)
MAX_POLY_DEGREE = 4

PROFILES = {
    "quick": {"trials": 200, "fock_degree": 6, "metric_degree": 512},
    "full": {"trials": 1000, "fock_degree": 8, "metric_degree": 2048},
}


@dataclass(frozen=True)
class TrialConfig:
    """Everything that determines a batch of trials.

    Size fields left as None are drawn per trial from the default sets
    (n in {1,2,3}, d_H in {1,2,4}, coefficient dims <= 3, degree <= 4).
    tolerance None means the check's own default.
    """
    seed: int = DEFAULT_SEED
    trials: int = 200
    n: int | None = None
    m: int | None = None
    d_H: int | None = None
    coeff_dim: int | None = None
    degree: int | None = None
    fock_degree: int = 6
    metric_degree: int = 512
    r_values: tuple = (0.5, 0.9, 0.999)
    tolerance: float | None = None
    schur_mode: str = "certified"
    herglotz_mode: str = "structure"
    filter_samples: int = 10_000
    profile: str = "quick"

    def __post_init__(self):
        if not 0 <= self.seed < 2**64:
            raise InputError("seed must lie in [0, 2^64)")
        for name in ("trials", "fock_degree", "metric_degree", "filter_samples"):
            if getattr(self, name) <= 0:
                raise InputError(f"{name} must be positive")
        for name in ("n", "m", "d_H", "coeff_dim", "degree"):
            v = getattr(self, name)
            if v is not None and v <= 0:
                raise InputError(f"{name} must be positive")
        if self.tolerance is not None and self.tolerance < KERNEL_TOL:
            raise InputError(f"tolerance must be >= {KERNEL_TOL}")
        if not all(0.0 < r < 1.0 for r in self.r_values):
            raise InputError("r values must lie in (0, 1)")
        if self.schur_mode not in ("certified", "estimated"):
            raise InputError(f"unknown schur mode {self.schur_mode!r}")
        if self.herglotz_mode not in ("structure", "cayley", "filter"):
            raise InputError(f"unknown herglotz mode {self.herglotz_mode!r}")

    @classmethod
    def from_profile(cls, profile="quick", **overrides):
        if profile not in PROFILES:
            raise InputError(f"unknown profile {profile!r}")
        values = dict(PROFILES[profile], profile=profile)
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)

    def to_json(self):
        out = dataclasses.asdict(self)
        out["r_values"] = list(self.r_values)
        return out


def env_seed(default=DEFAULT_SEED):
    raw = os.environ.get("NCBALL_SEED")
    if raw is None or raw == "":
        return default
    try:
        return int(raw)
    except ValueError as exc:
        raise InputError(f"NCBALL_SEED must be an integer, got {raw!r}") from exc


def trial_rng(seed, check_id, trial):
    """Counter-based stream: (seed, check, trial) -> independent generator."""
    ss = np.random.SeedSequence([int(seed) & 0xFFFFFFFF, int(seed) >> 32,
                                 zlib.crc32(check_id.encode()), int(trial)])
    return np.random.Generator(np.random.Philox(ss))


@dataclass
class Sizes:
    n: int
    m: int
    h: int
    e: int
    degree: int
    extra: dict = field(default_factory=dict)


def draw_sizes(rng, cfg):
    pick = lambda v, opts: int(v) if v is not None else int(rng.choice(opts))
    return Sizes(
        n=pick(cfg.n, SIZES_N),
        m=pick(cfg.m, SIZES_N),
        h=pick(cfg.d_H, SIZES_H),
        e=pick(cfg.coeff_dim, SIZES_COEFF),
        degree=pick(cfg.degree, tuple(range(1, MAX_POLY_DEGREE + 1))),
    )
