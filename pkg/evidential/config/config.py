from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    PROJECT_NAME: str = "Evidential Reasoning Engine"

    # Frame Settings
    CAPACITY: int = 2**20
    DENSE_FRAME_LIMIT: int = 20

    # Numeric Settings
    TOLERANCE: float = 1e-9
    PRUNE_THRESHOLD: float = 1e-12
    CONFLICT_THRESHOLD: float = 1e-12
    PSEUDO_TOLERANCE: float = 1e-12
    TIE_TOLERANCE: float = 1e-12
    SIGNIFICANT_DIGITS: int = 12

    # Propagation Settings
    PROPAGATION_WORKERS: int = 1

    # Logging Settings
    LOG_LEVEL: str = "WARNING"
    LOG_FILE: Optional[str] = None

    model_config = SettingsConfigDict(
        env_prefix="EVIDENTIAL_",
        env_file=".env",
        case_sensitive=True,
        extra="ignore",
    )


settings = Settings()
