import logging
from functools import lru_cache

from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Process settings read from the environment and an optional .env"""

    model_config = SettingsConfigDict(env_file=".env", case_sensitive=True, extra="ignore")

    # Where every command writes when --out is not given
    OUTPUT_DIR: str = "./output"

    LOG_LEVEL: str = "INFO"
    LOG_FILE: str = "switchgraph.log"
    LOGS_DIR: str = "./logs"

    # Alternative defaults file; empty means the packaged config/config.yaml
    CONFIG_PATH: str = ""

    @field_validator("LOG_LEVEL")
    @classmethod
    def known_level(cls, v: str) -> str:
        level = v.strip().upper()
        if not isinstance(logging.getLevelName(level), int):
            raise ValueError(f"unknown log level {v!r}")
        return level


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings()


def clear_settings_cache() -> None:
    """Forget the cached settings so the next call re-reads the environment"""
    get_settings.cache_clear()
