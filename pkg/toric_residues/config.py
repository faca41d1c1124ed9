import os
from dataclasses import dataclass, replace


def strtobool(value):
    """Convert a string representation of truth to True or False"""
    value = str(value).strip().lower()
    if value in ("y", "yes", "t", "true", "on", "1"):
        return True
    if value in ("n", "no", "f", "false", "off", "0"):
        return False
    raise ValueError(f"Invalid truth value {value!r}")


@dataclass(frozen=True)
class Settings:
    max_terms: int = 1_000_000
    jobs: int = 1
    seed: int = 0
    samples: int = 12
    seed_samples: int = 100
    log_level: str = "INFO"
    log_all_requests: bool = False

    @classmethod
    def from_env(cls, environ=None):
        env = os.environ if environ is None else environ
        return cls(
            max_terms=int(env.get("TORIC_MAX_TERMS", cls.max_terms)),
            jobs=int(env.get("TORIC_JOBS", cls.jobs)),
            seed=int(env.get("TORIC_SEED", cls.seed)),
            samples=int(env.get("TORIC_SAMPLES", cls.samples)),
            seed_samples=int(env.get("TORIC_SEED_SAMPLES", cls.seed_samples)),
            log_level=env.get("LOG_LEVEL", cls.log_level).upper(),
            log_all_requests=strtobool(env.get("LOG_ALL_REQUESTS", "false")),
        )

    def override(self, **values):
        """Copy with every non-None keyword applied"""
        return replace(self, **{k: v for k, v in values.items() if v is not None})
