import os
from dataclasses import dataclass
from pathlib import Path

from dotenv import load_dotenv

from .errors import ConfigError

# Load environment variables (an optional .env next to the working directory)
load_dotenv(override=True)

DEFAULT_SEED = 2025


@dataclass(frozen=True)
class Settings:
    row_cap: int = 10_000_000
    tol: float = 1e-10
    seed: int = DEFAULT_SEED
    exact_threshold: int = 200
    power_iter_cap: int = 10_000
    simplex_iter_cap: int = 100_000
    cond_threshold: float = 1e12
    workers: int = 1
    output_dir: Path = Path("outputs")


def _read(name, cast, default):
    raw = os.getenv(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        value = cast(raw.strip())
    except ValueError as e:
        raise ConfigError(f"{name}={raw!r} is not a valid {cast.__name__}") from e
    return value


def _seed(raw):
    # Accept hex seeds ("0x7e9") as well as decimal ones
    return int(raw, 0)


def load_settings():
    """Read NBBD_* variables, falling back to the documented defaults."""
    defaults = Settings()
    settings = Settings(
        row_cap=_read("NBBD_ROW_CAP", int, defaults.row_cap),
        tol=_read("NBBD_TOL", float, defaults.tol),
        seed=_read("NBBD_SEED", _seed, defaults.seed),
        exact_threshold=_read("NBBD_EXACT_THRESHOLD", int, defaults.exact_threshold),
        power_iter_cap=_read("NBBD_POWER_ITER_CAP", int, defaults.power_iter_cap),
        simplex_iter_cap=_read("NBBD_SIMPLEX_ITER_CAP", int, defaults.simplex_iter_cap),
        cond_threshold=_read("NBBD_COND_THRESHOLD", float, defaults.cond_threshold),
        workers=_read("NBBD_WORKERS", int, defaults.workers),
        output_dir=Path(_read("NBBD_OUTPUT_DIR", str, str(defaults.output_dir))),
    )

    if settings.row_cap < 1:
        raise ConfigError("NBBD_ROW_CAP must be positive")
    if not settings.tol > 0:
        raise ConfigError("NBBD_TOL must be positive")
    if settings.workers < 1:
        raise ConfigError("NBBD_WORKERS must be at least 1")
    if settings.power_iter_cap < 1 or settings.simplex_iter_cap < 1:
        raise ConfigError("iteration caps must be positive")
    return settings


settings = load_settings()
