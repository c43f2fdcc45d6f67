import os
import logging
from pathlib import Path
from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()

LOG_LEVEL = os.environ.get("LOG_LEVEL", "INFO").upper()

logging.basicConfig(
    level=getattr(logging, LOG_LEVEL, logging.INFO),
    format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
)

logger = logging.getLogger("bhmirror.config")
logger.debug("⚙️ Initializing BH Mirror configuration...")


class Config:
    """Base configuration class (shared across all environments)."""

    PROJECT_NAME = "BH Mirror"

    # Eager enumeration guard: |G_f| = det E must stay desk-scale.
    MAX_GROUP_ORDER = 100_000

    CORPUS_FILE = Path(__file__).resolve().parent.parent / "modules" / "corpus" / "data" / "corpus.txt"
    # Entries in flight at once. Checks are CPU-bound and share one interpreter,
    # so this bounds concurrency; it does not add parallelism.
    CORPUS_WORKERS = 4

    DEFAULT_ENGINE = "both"
    DEFAULT_FORMAT = "text"

    LOG_LEVEL = os.environ.get("LOG_LEVEL", "INFO").upper()
    DEBUG = False

    def __init__(self):
        logger.debug("Base Config initialized.")
        logger.debug(f"MAX_GROUP_ORDER = {self.MAX_GROUP_ORDER}")


class DevelopmentConfig(Config):
    """Configuration for local development."""
    DEBUG = True

    def __init__(self):
        super().__init__()
        logger.debug("💻 Using Development Configuration")


class ProductionConfig(Config):
    """Configuration for production."""

    def __init__(self):
        super().__init__()
        logger.debug("🏭 Using Production Configuration")


ENVIRONMENT = os.environ.get("APP_ENV", "production").lower()

if ENVIRONMENT == "development":
    config = DevelopmentConfig()
else:
    config = ProductionConfig()

logger.debug(f"✅ Active configuration: {config.__class__.__name__}")
logger.debug(f"🧠 Log level: {LOG_LEVEL}")


def apply_log_level(cfg: Config) -> int:
    """Development runs log everything under bhmirror.*; otherwise LOG_LEVEL applies."""
    level = logging.DEBUG if cfg.DEBUG else getattr(logging, cfg.LOG_LEVEL, logging.INFO)
    logging.getLogger("bhmirror").setLevel(level)
    return level


apply_log_level(config)
