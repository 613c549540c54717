# pacrank/utils/settings.py
import pathlib
from functools import lru_cache

from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Project root; the .env file lives next to requirements.txt
base_dir = pathlib.Path(__file__).parent.parent.parent.absolute()
env_path = base_dir / ".env"


class Settings(BaseSettings):
    model_config = SettingsConfigDict(
        env_prefix="PACRANK_",
        env_file=env_path,
        env_file_encoding="utf-8",
        extra="ignore",
    )

    seed:          int = 0
    workers:       int = Field(default=1, ge=1)
    results_dir:   pathlib.Path = base_dir / "results"
    database_url:  str = f"sqlite:///{base_dir / 'results' / 'pacrank.db'}"
    log_level:     str = "WARNING"
    log_config:    pathlib.Path = base_dir / "logging.ini"
    # first block of vectorised draws inside compare; blocks double afterwards
    compare_block: int = Field(default=64, ge=1)


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    """
    Return the process-wide Settings.
    lru_cache ensures the environment and .env are read once.
    """
    return Settings()
