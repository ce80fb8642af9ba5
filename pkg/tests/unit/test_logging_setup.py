"""ロギング設定のテスト"""

import json
import logging
import sys

import pytest

from src.models.config import LoggingConfig
from src.utils.logging_setup import JsonFormatter, _ManagedHandler, setup_logging


def _managed() -> list[logging.Handler]:
    return [h for h in logging.getLogger().handlers if isinstance(h, _ManagedHandler)]


@pytest.mark.unit
class TestJsonFormatter:
    """JsonFormatter"""

    def test_format(self) -> None:
        """1行のJSON"""
        record = logging.LogRecord(
            "src.certify", logging.WARNING, __file__, 1, "区間: %s", ("空",), None
        )
        payload = json.loads(JsonFormatter().format(record))

        assert payload["level"] == "WARNING"
        assert payload["logger"] == "src.certify"
        assert payload["message"] == "区間: 空"
        assert payload["timestamp"].endswith("+00:00")
        assert "exception" not in payload

    def test_exception(self) -> None:
        """例外情報を含む"""
        try:
            raise RuntimeError("失敗")
        except RuntimeError:
            record = logging.LogRecord(
                "src", logging.ERROR, __file__, 1, "エラー", (), sys.exc_info()
            )
        payload = json.loads(JsonFormatter().format(record))
        assert "RuntimeError: 失敗" in payload["exception"]


@pytest.mark.unit
class TestSetupLogging:
    """setup_logging"""

    def test_level_and_formatter(self) -> None:
        """レベルとフォーマッタの設定"""
        setup_logging(LoggingConfig(level="debug", format="json"))

        handlers = _managed()
        assert len(handlers) == 1
        assert isinstance(handlers[0].formatter, JsonFormatter)
        assert logging.getLogger().level == logging.DEBUG

    def test_handler_replaced(self) -> None:
        """再設定ではハンドラを置き換える"""
        setup_logging(LoggingConfig())
        setup_logging(LoggingConfig(level="WARNING"))

        assert len(_managed()) == 1
        assert logging.getLogger().level == logging.WARNING

    def test_invalid_level(self) -> None:
        """不正なログレベル"""
        with pytest.raises(ValueError):
            setup_logging(LoggingConfig(level="VERBOSE"))
