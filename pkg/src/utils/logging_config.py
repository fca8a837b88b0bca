import logging
import sys
from .config import get_config


def setup_logging(level: str = None):
    """Sets up root logging from the 'logging' section of the config."""
    config = get_config()
    log_config = config.get('logging', {})
    log_level = (level or log_config.get('level', 'INFO')).upper()
    log_format = log_config.get('format', '%(asctime)s - %(name)s - %(levelname)s - %(message)s')

    if log_config.get('rich', False):
        from rich.logging import RichHandler

        handler = RichHandler(rich_tracebacks=True, show_path=False)
        log_format = "%(message)s"
    else:
        handler = logging.StreamHandler(sys.stdout)

    logging.basicConfig(
        level=getattr(logging, log_level, logging.INFO),
        format=log_format,
        handlers=[handler],
        force=True,
    )


def get_logger(name: str) -> logging.Logger:
    """Returns a logger instance."""
    return logging.getLogger(name)


def progress_enabled() -> bool:
    """tqdm bars only for an interactive stdout at INFO or below."""
    return sys.stdout.isatty() and logging.getLogger().getEffectiveLevel() <= logging.INFO
