# pacrank/utils/logging.py
import logging
import logging.config
from typing import Optional

from rich.logging import RichHandler

from pacrank.utils.settings import get_settings

_configured = False


def configure_logging(level: Optional[str] = None) -> None:
    """Load logging.ini once, then apply the requested level to the pacrank logger."""
    global _configured
    settings = get_settings()
    if not _configured:
        if settings.log_config.exists():
            logging.config.fileConfig(settings.log_config, disable_existing_loggers=False)
        else:
            logging.basicConfig(
                format="[%(name)s] %(message)s",
                handlers=[RichHandler(show_path=False)],
            )
        _configured = True
    logging.getLogger("pacrank").setLevel((level or settings.log_level).upper())
