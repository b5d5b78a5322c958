"""Application configuration."""
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application settings."""

    model_config = SettingsConfigDict(
        env_prefix="QSTAT_",
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=False,
        extra="ignore",
    )

    # q-algebra
    q_one_band: float = 1e-12
    cq_one_band: float = 1e-6

    # Quadrature oracle
    quad_tol: float = 1e-10
    quad_rel_tol: float = 1e-12
    quad_limit: int = 2000

    # Root finding
    root_tol: float = 1e-12

    # Experiments
    seed: int = 20240601
    workers: int = 1

    # Output
    log_level: str = "WARNING"
    output_digits: int = 15


settings = Settings()
