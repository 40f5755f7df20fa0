import logging

import pytest

from backend.config import Settings, log_settings, parse_extend, parse_window


def test_settings_status_is_logged_at_info(caplog):
    caplog.set_level(logging.INFO, logger="torsors")
    log_settings(Settings(prec=16, window=(-8, 8), extend="auto"))
    messages = [r.getMessage() for r in caplog.records if r.name == "torsors"]
    assert messages[0] == "Settings Status:"
    assert "TORSOR_PREC: ✅ 16" in messages
    assert "TORSOR_WINDOW: ✅ -8:8" in messages
    assert "TORSOR_EXTEND: ✅ auto" in messages
    assert all(r.levelno == logging.INFO for r in caplog.records if r.name == "torsors")


def test_parse_window_and_extend():
    assert parse_window("-4:9") == (-4, 9)
    assert parse_extend(" C=3 ") == "c=3"
    with pytest.raises(ValueError):
        parse_window("9:-4")
    with pytest.raises(ValueError):
        parse_extend("c=0")
