"""テスト共通フィクスチャ"""

import logging
from collections.abc import Iterator

import numpy as np
import pytest

from src.utils.logging_setup import _ManagedHandler


@pytest.fixture
def rng() -> np.random.Generator:
    """固定シードの乱数生成器"""
    return np.random.default_rng(20240601)


@pytest.fixture(autouse=True)
def _reset_managed_handlers() -> Iterator[None]:
    """setup_logging が追加したハンドラをテストごとに外す"""
    yield
    root = logging.getLogger()
    for handler in [h for h in root.handlers if isinstance(h, _ManagedHandler)]:
        root.removeHandler(handler)
