from __future__ import annotations

import hashlib
import json
import os
from dataclasses import asdict, dataclass, replace
from typing import Optional

JOBS_ENV = "CYCDEP_JOBS"


def default_jobs() -> int:
    raw = os.environ.get(JOBS_ENV)
    if raw:
        try:
            jobs = int(raw)
        except ValueError:
            raise ValueError(f"{JOBS_ENV} must be an integer, got {raw!r}") from None
        if jobs < 1:
            raise ValueError(f"{JOBS_ENV} must be positive, got {jobs}")
        return jobs
    return 1


@dataclass(frozen=True)
class SolverConfig:
    """Knobs for the search pipeline.

    The defaults (degree threshold 20000, sieve primes below 1000) are the
    operating point of the original computation.  ``bit_ceiling`` bounds the
    size of any single exact intermediate; ``magnitude_prescreen`` enables
    the cheap ``(|x|-1)**phi(k) > Y`` rejection ahead of exact evaluation.
    """

    exact_degree_threshold: int = 20000
    sieve_prime_bound: int = 1000
    bit_ceiling: int = 1 << 27
    magnitude_prescreen: bool = True
    jobs: int = 1
    checkpoint_path: Optional[str] = None
    output_path: Optional[str] = None

    def __post_init__(self):
        for name in ("exact_degree_threshold", "sieve_prime_bound", "bit_ceiling", "jobs"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be positive")

    def with_(self, **changes) -> "SolverConfig":
        return replace(self, **changes)

    def solver_fields(self) -> dict:
        """The fields that influence certificate content."""
        d = asdict(self)
        for name in ("jobs", "checkpoint_path", "output_path"):
            d.pop(name)
        return d

    @property
    def config_hash(self) -> str:
        blob = json.dumps(self.solver_fields(), sort_keys=True).encode()
        return hashlib.sha256(blob).hexdigest()[:16]
