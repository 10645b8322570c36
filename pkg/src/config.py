"""
Environment configuration and logging setup
"""
import logging
import logging.config
import os
from pathlib import Path

import yaml
from dotenv import load_dotenv

from src.errors import OutOfRange

# Load environment variables from .env file
load_dotenv()

PROJECT_ROOT = Path(__file__).parent.parent


def setup_logging(config_path: Path | None = None) -> None:
    """Set up logging based on logging.yaml file"""
    if config_path is None:
        config_path = Path(os.getenv("LOG_CONFIG", PROJECT_ROOT / "logging.yaml"))
    logs_dir = PROJECT_ROOT / "logs"

    if not config_path.exists():
        logging.basicConfig(level=os.getenv("LOG_LEVEL", "WARNING").upper())
        logging.getLogger("hodge_mod.config").debug(f"Config file not found: {config_path}")
        return

    # Ensure logs directory exists
    logs_dir.mkdir(exist_ok=True)

    with open(config_path, "r", encoding="utf-8") as f:
        config = yaml.safe_load(f.read())

    # Update log file paths to be absolute
    for handler_config in config.get("handlers", {}).values():
        if "filename" in handler_config:
            log_file = logs_dir / Path(handler_config["filename"]).name
            handler_config["filename"] = str(log_file.absolute())

    level = os.getenv("LOG_LEVEL")
    if level and "console" in config.get("handlers", {}):
        config["handlers"]["console"]["level"] = level.upper()

    logging.config.dictConfig(config)


def default_jobs() -> int:
    """Worker count for enumeration when --jobs is not given"""
    raw = os.getenv("HODGE_JOBS", "1")
    try:
        jobs = int(raw)
    except ValueError:
        raise OutOfRange(f"HODGE_JOBS must be a positive integer, got {raw!r}")
    if jobs < 1:
        raise OutOfRange(f"HODGE_JOBS must be a positive integer, got {raw!r}")
    return jobs


def api_settings() -> dict:
    """Binding options for the HTTP service"""
    return {
        "host": os.getenv("API_HOST", "127.0.0.1"),
        "port": int(os.getenv("API_PORT", "8000")),
        "reload": os.getenv("DEBUG", "false").lower() == "true",
        "log_level": os.getenv("LOG_LEVEL", "info").lower(),
    }
