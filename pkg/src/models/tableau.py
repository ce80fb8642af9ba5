"""Butcherテーブルと縮小性行列のモデル"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field


class ButcherTableau(BaseModel):
    """s段Runge-Kutta法の係数

    生成は src.core.tableau.build_tableau 経由で行い、形状と Σb = 1 を検証する
    """

    model_config = ConfigDict(frozen=True)

    a: tuple[tuple[float, ...], ...] = Field(description="係数行列 a（行優先）")
    b: tuple[float, ...] = Field(description="重み b")
    name: str = Field(default="", description="スキーム名")
    consistency_defect: float = Field(default=0.0, description="|Σb - 1|")

    @property
    def s(self) -> int:
        """段数"""
        return len(self.b)

    @property
    def explicit(self) -> bool:
        """陽的（j ≥ i で a_ij = 0）か"""
        return all(self.a[i][j] == 0.0 for i in range(self.s) for j in range(i, self.s))

    @property
    def a_matrix(self) -> np.ndarray:
        return np.array(self.a, dtype=float).reshape(self.s, self.s)

    @property
    def b_vector(self) -> np.ndarray:
        return np.array(self.b, dtype=float)

    def to_dict(self) -> dict[str, list[list[float]] | list[float]]:
        """JSON形式 {"a": [[...]], "b": [...]} に変換"""
        return {"a": [list(row) for row in self.a], "b": list(self.b)}


class ContractivityMatrix(BaseModel):
    """対称行列 M̄(h) = (2h b_i / L) δ_ij + h² m_ij"""

    model_config = ConfigDict(frozen=True)

    entries: tuple[tuple[float, ...], ...] = Field(description="行列成分")
    h: float = Field(gt=0, description="ステップ幅")
    L: float = Field(gt=0, description="勾配のLipschitz定数")

    @property
    def matrix(self) -> np.ndarray:
        return np.array(self.entries, dtype=float)
