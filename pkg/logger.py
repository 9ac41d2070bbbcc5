import json
import logging
import os
import sys
from datetime import datetime, timezone

# attributes every LogRecord carries; anything else came in through `extra=`
_RESERVED = set(vars(logging.makeLogRecord({}))) | {"message", "asctime"}


class JsonLineFormatter(logging.Formatter):
    def format(self, record):
        payload = {
            "time": datetime.fromtimestamp(record.created, tz=timezone.utc).isoformat(),
            "level": record.levelname,
            "message": record.getMessage(),
        }
        for key, value in vars(record).items():
            if key not in _RESERVED:
                payload[key] = value
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload, default=str)


_handler = logging.StreamHandler(sys.stderr)
_handler.setFormatter(JsonLineFormatter())

logging.basicConfig(
    level=os.environ.get("MMRANK_LOG_LEVEL", "INFO").upper(), handlers=[_handler]
)
logger = logging.getLogger("mmrank")

_progress = {"enabled": sys.stderr.isatty()}


def set_progress(enabled: bool):
    """Turn tqdm progress bars on or off (off for --json runs)."""
    _progress["enabled"] = enabled


def progress_disabled() -> bool:
    return not _progress["enabled"]
