# src/config.py
from __future__ import annotations

import logging
import os
from dataclasses import dataclass

from dotenv import load_dotenv

load_dotenv()


@dataclass
class Settings:
    # Numerics
    ATOL: float = float(os.getenv("TWISTKIT_ATOL", "1e-10"))
    RANK_RCOND: float = float(os.getenv("TWISTKIT_RANK_RCOND", "1e-12"))

    # Randomized searches
    SEED: int = int(os.getenv("TWISTKIT_SEED", "20240601"))
    HERMITIAN_RETRIES: int = int(os.getenv("TWISTKIT_HERMITIAN_RETRIES", "16"))
    INVERTIBLE_DRAWS: int = int(os.getenv("TWISTKIT_INVERTIBLE_DRAWS", "3"))

    # Report assembly
    CHECK_MAX_WORKERS: int = int(os.getenv("TWISTKIT_CHECK_MAX_WORKERS", "8"))

    # Logging
    LOG_LEVEL: str = os.getenv("TWISTKIT_LOG_LEVEL", "WARNING")


settings = Settings()

LOG_FORMAT = "[%(levelname)s] %(name)s: %(message)s"


def configure_logging(level: str | None = None) -> None:
    """Install one stream handler on the package logger (idempotent)."""
    logger = logging.getLogger("src")
    logger.setLevel((level or settings.LOG_LEVEL).upper())
    if not logger.handlers:
        handler = logging.StreamHandler()
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
        logger.addHandler(handler)
