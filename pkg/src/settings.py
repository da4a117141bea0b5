# settings.py
"""
Runtime configuration and logging setup
Values come from the environment (optionally a .env file) and can be
overridden by command-line flags
"""

import logging
import os
import sys
from dataclasses import dataclass

import colorlog
from dotenv import load_dotenv

load_dotenv()

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name, '').strip()
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        logging.getLogger(__name__).warning(f"Ignoring non-integer {name}={raw!r}, using {default}")
        return default


@dataclass(frozen=True)
class Settings:
    workers: int = 1
    precision: int = 128
    padic_max_depth: int = 64
    sample_digits: int = 24
    max_pending_boxes: int = 5_000_000
    prime_cap: int = 10**7
    decimals: int = 6
    progress: bool = True

    @classmethod
    def from_env(cls) -> 'Settings':
        """Build settings from LOCSOL_* environment variables"""
        return cls(
            workers=max(1, _env_int('LOCSOL_WORKERS', 1)),
            precision=max(8, _env_int('LOCSOL_PRECISION', 128)),
            padic_max_depth=max(1, _env_int('LOCSOL_PADIC_DEPTH', 64)),
            sample_digits=max(8, _env_int('LOCSOL_SAMPLE_DIGITS', 24)),
            max_pending_boxes=max(1, _env_int('LOCSOL_MAX_PENDING', 5_000_000)),
            prime_cap=_env_int('LOCSOL_PRIME_CAP', 10**7),
            decimals=_env_int('LOCSOL_DECIMALS', 6),
            progress=_env_int('LOCSOL_PROGRESS', 1) != 0,
        )


SETTINGS = Settings.from_env()


def configure_logging(level: str = 'INFO') -> None:
    """Install a coloured handler on the root logger (idempotent)"""
    root = logging.getLogger()
    root.setLevel(level.upper() if isinstance(level, str) else level)
    for handler in root.handlers:
        if getattr(handler, '_locsol', False):
            return

    handler = logging.StreamHandler(sys.stderr)
    if sys.stderr.isatty():
        handler.setFormatter(colorlog.ColoredFormatter('%(log_color)s' + LOG_FORMAT))
    else:
        handler.setFormatter(logging.Formatter(LOG_FORMAT))
    handler._locsol = True
    root.addHandler(handler)
