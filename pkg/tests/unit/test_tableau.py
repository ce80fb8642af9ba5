"""Butcherテーブルのテスト"""

import json
from pathlib import Path

import numpy as np
import pytest

from src.core.tableau import (
    available_tableaux,
    build_tableau,
    dump_tableau,
    euler_chain_tableau,
    load_tableau,
    named_tableau,
    parse_coefficient,
)
from src.models.errors import ConsistencyError, DomainError, ShapeError


@pytest.mark.unit
class TestParseCoefficient:
    """係数の解釈"""

    def test_rational_string(self) -> None:
        """有理数文字列"""
        assert parse_coefficient("1/2") == 0.5
        assert parse_coefficient(" 1/3 ") == pytest.approx(1.0 / 3.0, abs=0.0)

    def test_decimal_string(self) -> None:
        """小数文字列"""
        assert parse_coefficient("0.25") == 0.25

    def test_numbers(self) -> None:
        """数値はそのまま"""
        assert parse_coefficient(1) == 1.0
        assert parse_coefficient(0.75) == 0.75

    @pytest.mark.parametrize("value", ["abc", "1/0", True, None, float("nan"), "inf"])
    def test_invalid(self, value: object) -> None:
        """解釈できない値"""
        with pytest.raises(ShapeError):
            parse_coefficient(value)


@pytest.mark.unit
class TestBuildTableau:
    """テーブル構築と検証"""

    def test_two_stage_euler(self) -> None:
        """a=[[0,0],[1/2,0]], b=[1/2,1/2]"""
        tableau = build_tableau([["0", "0"], ["1/2", "0"]], ["1/2", "1/2"], name="ex")

        assert tableau.s == 2
        assert tableau.explicit is True
        np.testing.assert_array_equal(tableau.a_matrix, [[0.0, 0.0], [0.5, 0.0]])
        np.testing.assert_array_equal(tableau.b_vector, [0.5, 0.5])

    def test_non_square(self) -> None:
        """a が正方でない"""
        with pytest.raises(ShapeError):
            build_tableau([[0.0, 0.0]], [0.5, 0.5])

    def test_length_mismatch(self) -> None:
        """b の長さが一致しない"""
        with pytest.raises(ShapeError):
            build_tableau([[0.0]], [0.5, 0.5])

    def test_empty(self) -> None:
        """空のテーブル"""
        with pytest.raises(ShapeError):
            build_tableau([], [])

    def test_weights_not_summing_to_one(self) -> None:
        """Σb ≠ 1"""
        with pytest.raises(ConsistencyError):
            build_tableau([[0.0, 0.0], [0.5, 0.0]], [0.5, 0.6])

    def test_consistency_tolerance(self) -> None:
        """1e-12 以内のずれは許容"""
        tableau = build_tableau([[0.0, 0.0], [1.0, 0.0]], [0.5, 0.5 + 1e-13])
        assert tableau.consistency_defect <= 1e-12

    def test_implicit_flag(self) -> None:
        """対角成分があれば陰的"""
        assert named_tableau("implicit_midpoint").explicit is False


@pytest.mark.unit
class TestNamedTableaux:
    """登録済みスキーム"""

    def test_available(self) -> None:
        """一覧に主要スキームが含まれる"""
        names = available_tableaux()
        for name in ("euler", "runge", "two_stage_euler", "heun", "rk4"):
            assert name in names

    def test_runge(self) -> None:
        """Runge法 b = [0, 1], a21 = 1/2"""
        runge = named_tableau("runge")
        np.testing.assert_array_equal(runge.b_vector, [0.0, 1.0])
        assert runge.a_matrix[1, 0] == 0.5

    def test_unknown(self) -> None:
        """未登録の名前"""
        with pytest.raises(ShapeError):
            named_tableau("nonexistent")


@pytest.mark.unit
class TestEulerChain:
    """Euler連結型テーブル"""

    def test_equal_weights_is_two_stage_euler(self) -> None:
        """b=[1/2,1/2] は2段1次のテーブル"""
        chain = euler_chain_tableau(["1/2", "1/2"])
        assert chain.a == named_tableau("two_stage_euler").a
        assert chain.b == named_tableau("two_stage_euler").b

    def test_lower_triangle_repeats_weights(self) -> None:
        """i > j で a_ij = b_j"""
        chain = euler_chain_tableau([0.2, 0.3, 0.5])
        expected = [[0.0, 0.0, 0.0], [0.2, 0.0, 0.0], [0.2, 0.3, 0.0]]
        np.testing.assert_array_equal(chain.a_matrix, expected)
        assert chain.name == "euler_chain_3"

    def test_negative_weight(self) -> None:
        """負の重み"""
        with pytest.raises(DomainError):
            euler_chain_tableau([1.5, -0.5])


@pytest.mark.unit
class TestTableauFiles:
    """JSON入出力"""

    def test_load_with_rational_strings(self, tmp_path: Path) -> None:
        """有理数文字列を含むJSON"""
        path = tmp_path / "heun.json"
        path.write_text(json.dumps({"a": [["0", "0"], ["1", "0"]], "b": ["1/2", "1/2"]}))

        tableau = load_tableau(path)

        assert tableau.name == "heun"
        assert tableau.b == (0.5, 0.5)

    def test_dump_then_load(self, tmp_path: Path) -> None:
        """書き出したファイルを読み戻せる"""
        path = tmp_path / "rk4.json"
        dump_tableau(named_tableau("rk4"), path)

        loaded = load_tableau(path)

        assert loaded.name == "rk4"
        assert loaded.a == named_tableau("rk4").a

    def test_missing_file(self, tmp_path: Path) -> None:
        """ファイルが存在しない"""
        with pytest.raises(FileNotFoundError):
            load_tableau(tmp_path / "missing.json")

    def test_broken_json(self, tmp_path: Path) -> None:
        """JSON構文エラー"""
        path = tmp_path / "broken.json"
        path.write_text("{not json")
        with pytest.raises(ShapeError):
            load_tableau(path)

    def test_missing_keys(self, tmp_path: Path) -> None:
        """a, b がない"""
        path = tmp_path / "partial.json"
        path.write_text(json.dumps({"a": [[0]]}))
        with pytest.raises(ShapeError):
            load_tableau(path)
