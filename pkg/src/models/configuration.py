"""反例構成のモデル

Runge法の2軌道（開始点・中間点・終了点と傾き）、6本の制約の余裕、
膨張率最大化の結果
"""

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.models.step import Point

CONSTRAINT_PAIRS: tuple[tuple[str, str], ...] = (
    ("k0", "k0_tilde"),
    ("kh", "kh_tilde"),
    ("k0", "kh"),
    ("k0_tilde", "kh_tilde"),
    ("k0", "kh_tilde"),
    ("k0_tilde", "kh"),
)
"""制約に現れる傾きの組（対応する点は POINT_OF で引く）"""

POINT_OF: dict[str, str] = {
    "k0": "x0",
    "k0_tilde": "x0_tilde",
    "kh": "xh",
    "kh_tilde": "xh_tilde",
}


class Configuration(BaseModel):
    """Runge法1ステップの2軌道

    xh = x0 + (h/2) k0, x̃h = x̃0 + (h/2) k̃0, x1 = x0 + h kh, x̃1 = x̃0 + h k̃h
    """

    model_config = ConfigDict(frozen=True)

    x0: Point = Field(description="開始点 x0")
    x0_tilde: Point = Field(description="開始点 x̃0")
    xh: Point = Field(description="中間点 xh")
    xh_tilde: Point = Field(description="中間点 x̃h")
    x1: Point = Field(description="終了点 x1")
    x1_tilde: Point = Field(description="終了点 x̃1")
    k0: Point = Field(description="傾き k0")
    k0_tilde: Point = Field(description="傾き k̃0")
    kh: Point = Field(description="傾き kh")
    kh_tilde: Point = Field(description="傾き k̃h")
    L: float = Field(gt=0, description="Lipschitz定数")
    h: float = Field(gt=0, description="ステップ幅")

    def vector(self, name: str) -> np.ndarray:
        """名前で点または傾きを取得"""
        return np.array(getattr(self, name), dtype=float)

    @property
    def dim(self) -> int:
        return len(self.x0)

    def to_dict(self) -> dict[str, Any]:
        return self.model_dump(mode="json")


class ConstraintReport(BaseModel):
    """6本の凸性・L-平滑性制約 (1/L)‖Δk‖² ≤ -⟨Δk, Δx⟩ の余裕"""

    model_config = ConfigDict(frozen=True)

    slacks: tuple[float, ...] = Field(description="余裕 RHS - LHS（6個）")
    scales: tuple[float, ...] = Field(description="各制約の大きさ max(1, |LHS|, |RHS|)")
    all_satisfied: bool = Field(description="全制約が許容誤差内で成立")


class SearchResult(BaseModel):
    """膨張率最大化の結果"""

    model_config = ConfigDict(frozen=True)

    configuration: Configuration = Field(description="最良の構成")
    ratio: float = Field(description="最良の膨張率 ‖x̃1-x1‖²/‖x̃0-x0‖²")
    gain: float = Field(description="(ratio - 1)/(Lh)³")
    dim: int = Field(description="次元 d")
    starts: int = Field(description="スタート数")
    feasible_starts: int = Field(description="実行可能解に収束したスタート数")
    max_violation: float = Field(description="最良解の最大制約違反（正規化）")
    start_values: list[float | None] = Field(
        default_factory=list, description="各スタートの gain（不成功は None）"
    )


class ReducedSolution(BaseModel):
    """差分ベクトル Δ0, Δh のみの縮約問題の解"""

    model_config = ConfigDict(frozen=True)

    delta0: Point = Field(description="数値解 Δ0 = k̃0 - k0")
    delta_h: Point = Field(description="数値解 Δh = k̃h - kh")
    value: float = Field(description="‖δ1‖²")
    slacks: tuple[float, float] = Field(description="2本の制約の余裕（正規化）")
    leading_delta0: Point = Field(description="主要項 [-L/2, L/2]")
    leading_delta_h: Point = Field(description="主要項 [L³h²/64, -L²h/8]")
    reflected_delta0: Point = Field(description="第1軸に関する鏡映解の Δ0")
    reflected_delta_h: Point = Field(description="第1軸に関する鏡映解の Δh")
