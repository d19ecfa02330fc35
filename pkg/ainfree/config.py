import logging
from functools import lru_cache
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    """Runtime settings, read from AINFREE_* environment variables"""

    model_config = SettingsConfigDict(env_prefix="AINFREE_")

    threads: int = 1
    log_level: str = "INFO"
    leaves: int = 3
    arity: Optional[int] = None
    sign_leaves: int = 6

    def arity_for(self, leaves: int) -> int:
        return self.arity if self.arity is not None else leaves


@lru_cache()
def get_settings() -> Settings:
    return Settings()


def configure_logging(level: Optional[str] = None) -> None:
    """Set up root logging once for the CLI or the ASGI app"""
    logging.basicConfig(
        level=(level or get_settings().log_level).upper(),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
