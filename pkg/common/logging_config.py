import logging
import sys
from datetime import datetime, timezone
from typing import Any, Dict

from pythonjsonlogger import jsonlogger


class CustomJsonFormatter(jsonlogger.JsonFormatter):
    """JSON formatter with timestamp, level, logger and run id fields"""

    def add_fields(
        self,
        log_record: Dict[str, Any],
        record: logging.LogRecord,
        message_dict: Dict[str, Any],
    ) -> None:
        super().add_fields(log_record, record, message_dict)

        log_record["timestamp"] = datetime.now(timezone.utc).isoformat()
        log_record["level"] = record.levelname
        log_record["logger"] = record.name

        if hasattr(record, "run_id"):
            log_record["run_id"] = record.run_id


def setup_logging(service_name: str, log_level: str = "INFO") -> logging.Logger:
    """Configure structured logging.

    Records go to stderr: stdout is reserved for JSON results of the CLI.
    """

    logger = logging.getLogger(service_name)
    logger.setLevel(getattr(logging, log_level.upper()))
    logger.propagate = False

    logger.handlers.clear()

    handler = logging.StreamHandler(sys.stderr)
    formatter = CustomJsonFormatter("%(timestamp)s %(level)s %(logger)s %(message)s")
    handler.setFormatter(formatter)
    logger.addHandler(handler)

    return logger


class RunLogger(logging.LoggerAdapter):
    """Stamp the id of one solve or bench row on the records logged through it.

    Each run holds its own adapter, so concurrent runs sharing a logger keep
    their ids apart.
    """

    def __init__(self, logger: logging.Logger, run_id: str):
        super().__init__(logger, {"run_id": run_id})

    @property
    def run_id(self) -> str:
        return self.extra["run_id"]

    def process(self, msg, kwargs):
        kwargs["extra"] = {**kwargs.get("extra", {}), "run_id": self.run_id}
        return msg, kwargs
