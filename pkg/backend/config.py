import os
import logging
from dataclasses import dataclass
from typing import Tuple

from dotenv import load_dotenv

load_dotenv()

# Enhanced logging setup
LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()
logging.basicConfig(
    level=getattr(logging, LOG_LEVEL, logging.INFO),
    format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
)
logger = logging.getLogger("torsors")


def parse_window(text: str) -> Tuple[int, int]:
    """Parse a `LO:HI` window string"""
    try:
        lo_text, hi_text = text.split(":")
        lo, hi = int(lo_text), int(hi_text)
    except ValueError:
        raise ValueError(f"Window must look like LO:HI, got {text!r}")
    if lo > hi:
        raise ValueError(f"Window lower bound {lo} exceeds upper bound {hi}")
    return lo, hi


def parse_extend(text: str) -> str:
    """Validate an extension policy: off, auto or c=K"""
    text = text.strip().lower()
    if text in ("off", "auto"):
        return text
    if text.startswith("c="):
        try:
            c = int(text[2:])
        except ValueError:
            raise ValueError(f"Extension factor must be an integer, got {text!r}")
        if c < 1:
            raise ValueError(f"Extension factor must be positive, got {c}")
        return f"c={c}"
    raise ValueError(f"Extension policy must be off, auto or c=K, got {text!r}")


# Env variables
TORSOR_PREC = int(os.getenv("TORSOR_PREC", "32"))
TORSOR_WINDOW = parse_window(os.getenv("TORSOR_WINDOW", "-64:64"))
TORSOR_EXTEND = parse_extend(os.getenv("TORSOR_EXTEND", "off"))
TORSOR_SEED = int(os.getenv("TORSOR_SEED", "0"))
TORSOR_MAX_FIELD = int(os.getenv("TORSOR_MAX_FIELD", "65536"))
TORSOR_RATE_LIMIT = os.getenv("TORSOR_RATE_LIMIT", "30/minute")

if TORSOR_PREC < 2:
    raise ValueError("TORSOR_PREC must be at least 2")


@dataclass(frozen=True)
class Settings:
    prec: int = TORSOR_PREC
    window: Tuple[int, int] = TORSOR_WINDOW
    extend: str = TORSOR_EXTEND
    seed: int = TORSOR_SEED
    max_field: int = TORSOR_MAX_FIELD
    rate_limit: str = TORSOR_RATE_LIMIT


def get_settings() -> Settings:
    return Settings()


def log_settings(settings: Settings) -> None:
    logger.info("Settings Status:")
    logger.info(f"TORSOR_PREC: ✅ {settings.prec}")
    logger.info(f"TORSOR_WINDOW: ✅ {settings.window[0]}:{settings.window[1]}")
    logger.info(f"TORSOR_EXTEND: ✅ {settings.extend}")
    logger.info(f"TORSOR_SEED: ✅ {settings.seed}")
    logger.info(f"TORSOR_MAX_FIELD: ✅ {settings.max_field}")
    logger.info(f"TORSOR_RATE_LIMIT: ✅ {settings.rate_limit}")


log_settings(get_settings())
