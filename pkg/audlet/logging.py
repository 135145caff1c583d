import logging
import threading

from pythonjsonlogger.json import JsonFormatter

_MAX_LOG_LINES = 2000
_RETURNED_LOG_LINES = 500
DEFAULT_LOG_FORMAT = "%(asctime)s %(name)s %(levelname)s %(message)s"
_log_lines: list[str] = []
_log_lock = threading.Lock()
_setup_done = False


class CustomJsonFormatter(JsonFormatter):
    def __init__(self, *args: object, **kwargs: object) -> None:
        if not args:
            kwargs.setdefault("fmt", DEFAULT_LOG_FORMAT)
        super().__init__(*args, **kwargs, json_ensure_ascii=False)


class InMemoryLogHandler(logging.Handler):
    """Keeps the latest formatted records so CLI runs can dump them on failure."""

    def emit(self, record: logging.LogRecord) -> None:
        message = self.format(record)
        with _log_lock:
            _log_lines.append(message)
            if len(_log_lines) > _MAX_LOG_LINES:
                del _log_lines[: _MAX_LOG_LINES // 2]


def get_logs(limit: int = _RETURNED_LOG_LINES) -> list[str]:
    with _log_lock:
        return list(_log_lines[-limit:])


def setup_logging(level: int | str = logging.INFO) -> logging.Logger:
    global _setup_done  # noqa: PLW0603
    root_logger = logging.getLogger()
    if _setup_done:
        root_logger.setLevel(level)
        return root_logger

    formatter = CustomJsonFormatter()
    # stderr keeps stdout free for tables printed by the CLI
    handler = logging.StreamHandler()
    handler.setFormatter(formatter)
    memory_handler = InMemoryLogHandler()
    memory_handler.setFormatter(formatter)

    root_logger.setLevel(level)
    root_logger.addHandler(handler)
    root_logger.addHandler(memory_handler)

    _setup_done = True
    return root_logger
