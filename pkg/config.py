"""
Environment configuration and logging setup for the sklyanin toolkit
"""
import os
import logging
from logging.handlers import RotatingFileHandler
from dotenv import load_dotenv

# Load environment variables
load_dotenv()

BASE_DIR = os.path.dirname(os.path.abspath(__file__))

# Log file for computations, sweeps and errors
LOG_DIR = os.environ.get("LOG_DIR", os.path.join(BASE_DIR, "logs"))
LOG_FILE = os.environ.get("LOG_FILE", "sklyanin.log")
LOG_LEVEL = os.environ.get("LOG_LEVEL", "INFO").upper()
LOG_TO_FILE = os.environ.get("LOG_TO_FILE", "true").lower() == "true"

# Numerical defaults (library functions always accept explicit overrides)
THETA_TOLERANCE = float(os.environ.get("THETA_TOLERANCE", "1e-15"))
THETA_MAX_TERMS = int(os.environ.get("THETA_MAX_TERMS", "200"))
POLE_THRESHOLD = float(os.environ.get("POLE_THRESHOLD", "1e-6"))
CONTOUR_NODES = int(os.environ.get("CONTOUR_NODES", "256"))
CONTOUR_RADIUS = float(os.environ.get("CONTOUR_RADIUS", "0.25"))
CHECK_TOLERANCE = float(os.environ.get("CHECK_TOLERANCE", "1e-6"))

# Service settings
SECRET_KEY = os.environ.get("SECRET_KEY", "dev-secret-key-change-in-production")
DATABASE_URL = os.environ.get("DATABASE_URL", "sqlite:///sklyanin.db")
MAX_SAMPLES = int(os.environ.get("MAX_SAMPLES", "200"))

# Celery settings for background verification sweeps
CELERY_BROKER_URL = os.environ.get("CELERY_BROKER_URL", "redis://localhost:6379/0")
CELERY_RESULT_BACKEND = os.environ.get("CELERY_RESULT_BACKEND", "redis://localhost:6379/0")
CELERY_TASK_TIMEOUT = int(os.environ.get("CELERY_TASK_TIMEOUT", "1800"))  # 30 minutes
CELERY_WORKER_CONCURRENCY = int(os.environ.get("CELERY_WORKER_CONCURRENCY", "2"))
JOB_RETENTION_HOURS = int(os.environ.get("JOB_RETENTION_HOURS", "72"))  # finished sweeps are purged after this

_logging_configured = False


def configure_logging(level=None, to_file=None):
    """Configure console + rotating file logging once per process.

    Args:
        level (str): Overrides LOG_LEVEL when given (e.g. "DEBUG").
        to_file (bool): Overrides LOG_TO_FILE when given.

    Returns:
        logging.Logger: the root logger.
    """
    global _logging_configured
    root = logging.getLogger()
    level_name = (level or LOG_LEVEL).upper()
    root.setLevel(getattr(logging, level_name, logging.INFO))

    if _logging_configured:
        return root

    logging.basicConfig(level=getattr(logging, level_name, logging.INFO))

    write_file = LOG_TO_FILE if to_file is None else to_file
    if write_file:
        try:
            os.makedirs(LOG_DIR, exist_ok=True)
            file_handler = RotatingFileHandler(
                os.path.join(LOG_DIR, LOG_FILE),
                maxBytes=5 * 1024 * 1024,  # 5 MB
                backupCount=5,
                encoding="utf-8",
            )
            file_handler.setLevel(logging.INFO)
            file_handler.setFormatter(
                logging.Formatter(
                    "%(asctime)s | %(levelname)s | %(message)s",
                    datefmt="%Y-%m-%d %H:%M:%S",
                )
            )
            root.addHandler(file_handler)
        except OSError as e:
            root.warning(f"File logging disabled: {str(e)}")

    _logging_configured = True
    return root
