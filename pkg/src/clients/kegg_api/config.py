"""Configuration for the KEGG REST client."""

import os
from dataclasses import dataclass, field

DEFAULT_BASE_URL = "https://rest.kegg.jp"


@dataclass
class KeggAPIConfig:
    """Configuration for the KEGG REST client."""

    base_url: str = field(
        default_factory=lambda: os.getenv("PATHMAP_KEGG_BASE_URL", DEFAULT_BASE_URL)
    )
    timeout: float = 30.0  # seconds
    max_retries: int = 3
    min_request_interval: float = 0.35  # seconds between outbound requests

    # Circuit breaker settings
    circuit_failure_threshold: int = 5
    circuit_recovery_timeout: int = 60  # seconds

    def __post_init__(self):
        """Validate configuration values."""
        self.base_url = self.base_url.rstrip("/")

        if self.timeout <= 0:
            raise ValueError("timeout must be positive")

        if self.max_retries < 1:
            raise ValueError("max_retries must be at least 1")

        if self.min_request_interval < 0:
            raise ValueError("min_request_interval must be non-negative")

        if self.circuit_failure_threshold <= 0:
            raise ValueError("circuit_failure_threshold must be positive")

        if self.circuit_recovery_timeout <= 0:
            raise ValueError("circuit_recovery_timeout must be positive")
