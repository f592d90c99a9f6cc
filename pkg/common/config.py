from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Application configuration"""

    model_config = SettingsConfigDict(
        env_prefix="SBATCH_", env_file=".env", case_sensitive=False, extra="ignore"
    )

    # Logging
    log_level: str = "INFO"

    # Solver
    workers: int = 1
    time_limit_seconds: float = 60.0
    node_limit: Optional[int] = None
    seed: int = 0

    # Oracle
    oracle_job_cap: int = 8

    # Generator
    setup_restart_limit: int = 100
    core_budget_seconds: float = 30.0
    core_node_limit: int = 20000

    # Bench
    bench_workers: int = 2
    gantt_scale: int = 24

    # Metrics (0 disables the exporter)
    metrics_port: int = 0


settings = Settings()
