import json
import logging

from audlet.config.commons import DEFAULT_MAX_LCM
from audlet.config.settings import get_settings
from audlet.logging import CustomJsonFormatter, get_logs, setup_logging


def test_settings_defaults(monkeypatch):
    monkeypatch.delenv("AUDLET_MAX_LCM", raising=False)
    assert get_settings().max_lcm == DEFAULT_MAX_LCM


def test_settings_from_environment(monkeypatch):
    monkeypatch.setenv("AUDLET_MAX_LCM", "64")
    monkeypatch.setenv("AUDLET_CG_TOL", "1e-6")
    settings = get_settings()
    assert settings.max_lcm == 64
    assert settings.cg_tol == 1e-6


def test_json_formatter():
    record = logging.LogRecord(
        name="audlet.test",
        level=logging.INFO,
        pathname=__file__,
        lineno=1,
        msg="designed %d channels",
        args=(35,),
        exc_info=None,
    )
    payload = json.loads(CustomJsonFormatter().format(record))
    assert payload["message"] == "designed 35 channels"
    assert payload["levelname"] == "INFO"
    assert payload["name"] == "audlet.test"


def test_setup_logging_is_idempotent():
    root = setup_logging()
    handlers = list(root.handlers)
    assert setup_logging(logging.DEBUG) is root
    assert root.handlers == handlers
    assert root.level == logging.DEBUG


def test_recent_logs_are_kept():
    setup_logging()
    logging.getLogger("audlet.test").warning("frame bound %s", "estimated")
    lines = get_logs(5)
    assert len(lines) <= 5
    assert any("frame bound estimated" in line for line in lines)
