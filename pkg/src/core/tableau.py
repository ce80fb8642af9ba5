"""Butcherテーブルの構築と入出力

JSON形式 {"a": [[...]], "b": [...]} の読み書き、既知スキームの取得、
Euler連結型テーブルの生成を行う
"""

import json
import logging
import math
from collections.abc import Sequence
from fractions import Fraction
from pathlib import Path
from typing import Any

from src.models.errors import ConsistencyError, DomainError, ShapeError
from src.models.tableau import ButcherTableau

logger = logging.getLogger(__name__)

CONSISTENCY_TOL = 1e-12

Coefficient = float | int | str


def parse_coefficient(value: Any) -> float:
    """係数を実数に変換

    文字列は有理数（"1/2", "0.25"）として厳密に解釈する

    Args:
        value: 数値または有理数文字列

    Returns:
        float: 係数値

    Raises:
        ShapeError: 数値として解釈できない
    """
    if isinstance(value, bool):
        raise ShapeError(f"係数に真偽値は使用できません: {value!r}")
    if isinstance(value, int | float):
        result = float(value)
    elif isinstance(value, str):
        try:
            result = float(Fraction(value.strip()))
        except (ValueError, ZeroDivisionError) as e:
            raise ShapeError(f"係数を解釈できません: {value!r}") from e
    else:
        raise ShapeError(f"係数の型が不正です: {type(value).__name__}")

    if not math.isfinite(result):
        raise ShapeError(f"係数が有限値ではありません: {value!r}")
    return result


def build_tableau(
    a: Sequence[Sequence[Coefficient]],
    b: Sequence[Coefficient],
    name: str = "",
) -> ButcherTableau:
    """検証済みButcherテーブルを構築

    Args:
        a: s×s 係数行列
        b: 長さ s の重み
        name: スキーム名

    Returns:
        ButcherTableau: 検証済みテーブル

    Raises:
        ShapeError: a が正方でない、または b の長さが一致しない
        ConsistencyError: |Σb - 1| > 1e-12
    """
    s = len(b)
    if s == 0:
        raise ShapeError("重み b が空です")
    if len(a) != s or any(len(row) != s for row in a):
        raise ShapeError(f"係数行列 a は {s}×{s} である必要があります")

    a_values = tuple(tuple(parse_coefficient(v) for v in row) for row in a)
    b_values = tuple(parse_coefficient(v) for v in b)

    defect = abs(math.fsum(b_values) - 1.0)
    if defect > CONSISTENCY_TOL:
        raise ConsistencyError(f"重みの和が1ではありません: Σb = {math.fsum(b_values)!r}")

    return ButcherTableau(a=a_values, b=b_values, name=name, consistency_defect=defect)


def euler_chain_tableau(b: Sequence[Coefficient], name: str = "") -> ButcherTableau:
    """Euler連結型テーブル（i > j で a_ij = b_j）を構築

    1ステップが幅 b_1 h, ..., b_s h の Euler 法 s 回と等価になる

    Raises:
        DomainError: 負の重みを含む
    """
    weights = [parse_coefficient(v) for v in b]
    negative = [w for w in weights if w < 0]
    if negative:
        raise DomainError(f"Euler連結型の重みは非負である必要があります: {negative}")

    s = len(weights)
    a = [[weights[j] if i > j else 0.0 for j in range(s)] for i in range(s)]
    return build_tableau(a, weights, name=name or f"euler_chain_{s}")


_NAMED_TABLEAUX: dict[str, tuple[list[list[Coefficient]], list[Coefficient]]] = {
    "euler": ([["0"]], ["1"]),
    "runge": ([["0", "0"], ["1/2", "0"]], ["0", "1"]),
    "two_stage_euler": ([["0", "0"], ["1/2", "0"]], ["1/2", "1/2"]),
    "heun": ([["0", "0"], ["1", "0"]], ["1/2", "1/2"]),
    "rk4": (
        [
            ["0", "0", "0", "0"],
            ["1/2", "0", "0", "0"],
            ["0", "1/2", "0", "0"],
            ["0", "0", "1", "0"],
        ],
        ["1/6", "1/3", "1/3", "1/6"],
    ),
    "implicit_midpoint": ([["1/2"]], ["1"]),
}


def available_tableaux() -> list[str]:
    """登録済みスキーム名の一覧"""
    return sorted(_NAMED_TABLEAUX)


def named_tableau(name: str) -> ButcherTableau:
    """既知スキームのテーブルを取得

    Raises:
        ShapeError: 未登録のスキーム名
    """
    if name not in _NAMED_TABLEAUX:
        raise ShapeError(f"未知のスキームです: {name}（候補: {', '.join(available_tableaux())}）")
    a, b = _NAMED_TABLEAUX[name]
    return build_tableau(a, b, name=name)


def load_tableau(path: Path) -> ButcherTableau:
    """JSONファイルからテーブル読み込み

    Args:
        path: {"a": [[...]], "b": [...]} 形式のJSONファイル

    Raises:
        FileNotFoundError: ファイルが存在しない
        ShapeError: JSON構造が不正
        ConsistencyError: Σb ≠ 1
    """
    if not path.exists():
        raise FileNotFoundError(f"テーブルファイルが見つかりません: {path}")

    try:
        with open(path, encoding="utf-8") as f:
            data = json.load(f)
    except json.JSONDecodeError as e:
        raise ShapeError(f"JSON解析エラー: {path} - {e}") from e

    if not isinstance(data, dict) or "a" not in data or "b" not in data:
        raise ShapeError(f"テーブルJSONには 'a' と 'b' が必要です: {path}")
    a, b = data["a"], data["b"]
    if not isinstance(b, list) or not isinstance(a, list) or not all(
        isinstance(row, list) for row in a
    ):
        raise ShapeError(f"'a' は行列、'b' はベクトルである必要があります: {path}")

    tableau = build_tableau(a, b, name=str(data.get("name", path.stem)))
    logger.debug(f"テーブル読み込み: {path} (s={tableau.s}, explicit={tableau.explicit})")
    return tableau


def dump_tableau(tableau: ButcherTableau, path: Path) -> None:
    """テーブルをJSONファイルに書き出し"""
    payload: dict[str, Any] = dict(tableau.to_dict())
    if tableau.name:
        payload["name"] = tableau.name
    with open(path, "w", encoding="utf-8") as f:
        json.dump(payload, f, indent=2)
