"""半正定値判定と縮小区間の結果モデル"""

import math
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field


class PsdVerdict(BaseModel):
    """半正定値判定の結果

    is_psd ⇔ min_eigenvalue ≥ -tolerance_used
    """

    model_config = ConfigDict(frozen=True)

    is_psd: bool = Field(description="半正定値か")
    min_eigenvalue: float = Field(description="最小固有値")
    tolerance_used: float = Field(description="使用した許容誤差")


class EigenSample(BaseModel):
    """区間探索のプレスキャン点"""

    model_config = ConfigDict(frozen=True)

    h: float = Field(description="ステップ幅")
    min_eigenvalue: float = Field(description="M̄(h) の最小固有値")
    is_psd: bool = Field(description="許容誤差込みの判定")


class ContractivityInterval(BaseModel):
    """凸縮小性区間 (0, h_max]

    status:
        finite: h_max が有限
        infinite: H_CAP およびそれ以上の標本でも半正定値（+∞ マーカー）
        empty: 0⁺ を含む証明可能な区間が存在しない
    """

    model_config = ConfigDict(frozen=True)

    status: Literal["finite", "infinite", "empty"] = Field(description="区間の種類")
    h_max: float | None = Field(default=None, description="区間の右端（finite のみ）")
    L: float = Field(gt=0, description="Lipschitz定数")
    h_cap: float = Field(gt=0, description="探索上限 H_CAP")
    disconnected_samples: list[float] = Field(
        default_factory=list, description="区間外で半正定値となった h の標本"
    )
    min_eig_samples: list[EigenSample] = Field(
        default_factory=list, description="プレスキャンの最小固有値"
    )

    @property
    def empty(self) -> bool:
        return self.status == "empty"

    @property
    def upper(self) -> float:
        """区間の右端（empty は 0、infinite は +∞）"""
        if self.status == "infinite":
            return math.inf
        return self.h_max if self.h_max is not None else 0.0

    def to_dict(self) -> dict[str, Any]:
        """CLI出力用の辞書 {"h_max", "empty", "min_eig_samples", ...}"""
        h_max: float | str | None = self.h_max
        if self.status == "infinite":
            h_max = "inf"
        return {
            "h_max": h_max,
            "empty": self.empty,
            "status": self.status,
            "L": self.L,
            "h_cap": self.h_cap,
            "disconnected_samples": self.disconnected_samples,
            "min_eig_samples": [sample.model_dump() for sample in self.min_eig_samples],
        }


class OptimalityReport(BaseModel):
    """陽的スキームの最適性（h ≤ 2s/L）検証結果"""

    model_config = ConfigDict(frozen=True)

    s: int = Field(description="段数")
    L: float = Field(description="Lipschitz定数")
    largest_certified_h: float = Field(description="半正定値が確認された最大の h")
    bound: float = Field(description="上界 2s/L")
    bound_holds: bool = Field(description="largest_certified_h ≤ 2s/L + tol")
    boundary_psd: bool = Field(description="M̄(2s/L) が許容誤差内で半正定値か")
    boundary_min_eigenvalue: float = Field(description="正規化 M̄(2s/L) の最小固有値")
    structure_holds: bool | None = Field(
        default=None, description="b_i = 1/s, a_ij = b_j (i>j) の構造検査（境界で半正定値の場合のみ）"
    )
    max_weight_deviation: float | None = Field(default=None, description="max |b_i - 1/s|")
    max_coefficient_deviation: float | None = Field(
        default=None, description="max |a_ij - b_j| (i>j)"
    )
