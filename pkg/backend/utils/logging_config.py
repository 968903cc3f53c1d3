import logging
import sys

from utils.config import Settings

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def setup_logging(settings: Settings) -> None:
    """Configure root logging once: stderr always, plus a file when POLYTOK_LOG_FILE is set."""
    handlers: list[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if settings.log_file is not None:
        handlers.append(logging.FileHandler(settings.log_file, mode='a', encoding='utf-8'))

    logging.basicConfig(level=settings.log_level.upper(),
                        format=LOG_FORMAT,
                        handlers=handlers,
                        force=True)
