from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Configuration settings for tcs-forge."""

    # Search
    threads: int = Field(
        default=1, ge=1, description="Worker threads for the candidate scan"
    )
    max_scan: int = Field(
        default=250_000,
        description="Maximum number of classes a search may scan before failing",
    )
    twist_radius: int = Field(
        default=4, ge=0, description="Box radius for Mukai twist matching"
    )

    # Oracles
    oracle_radius: int = Field(
        default=20,
        description="Box radius of the naive scan cross-checking stability verdicts",
    )
    restriction_samples: int = Field(
        default=20, description="Random classes per chart for identity checks"
    )
    seed: int = Field(default=0, description="Seed for oracle sampling")

    # Logging
    log_level: str = Field(
        default="INFO",
        description="Logging level (DEBUG, INFO, WARNING, ERROR, CRITICAL)",
    )

    model_config = SettingsConfigDict(env_prefix="TCS_FORGE_", case_sensitive=False)
