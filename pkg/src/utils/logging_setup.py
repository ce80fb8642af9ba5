"""ロギング設定

テキスト形式または1行JSON形式でルートロガーを設定する
"""

import json
import logging
import sys
from datetime import datetime, timezone

from src.models.config import LoggingConfig

TEXT_FORMAT = "%(asctime)s %(levelname)s [%(name)s] %(message)s"


class JsonFormatter(logging.Formatter):
    """1レコード1行のJSONフォーマッタ"""

    def format(self, record: logging.LogRecord) -> str:
        payload = {
            "timestamp": datetime.fromtimestamp(record.created, timezone.utc).isoformat(),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload, ensure_ascii=False)


class _ManagedHandler(logging.StreamHandler):
    """setup_logging が追加したハンドラの目印"""


def setup_logging(config: LoggingConfig) -> None:
    """ルートロガーを設定

    以前に setup_logging が追加したハンドラは置き換える

    Args:
        config: ロギング設定

    Raises:
        ValueError: 不正なログレベル
    """
    level = logging.getLevelName(config.level.upper())
    if not isinstance(level, int):
        raise ValueError(f"不正なログレベル: {config.level}")

    stream = sys.stdout if config.output == "stdout" else sys.stderr
    handler = _ManagedHandler(stream)
    if config.format == "json":
        handler.setFormatter(JsonFormatter())
    else:
        handler.setFormatter(logging.Formatter(TEXT_FORMAT))

    root = logging.getLogger()
    for existing in [h for h in root.handlers if isinstance(h, _ManagedHandler)]:
        root.removeHandler(existing)
    root.addHandler(handler)
    root.setLevel(level)
