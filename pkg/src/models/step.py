"""RKステップの記録モデル"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

Point = tuple[float, ...]


def as_point(values: np.ndarray) -> Point:
    """numpy配列をタプルに変換"""
    return tuple(float(v) for v in np.ravel(values))


class StepRecord(BaseModel):
    """1ステップ分の記録

    X_i = x0 + h Σ_j a_ij k_j、x1 = x0 + h Σ_j b_j k_j
    """

    model_config = ConfigDict(frozen=True)

    x0: Point = Field(description="開始点")
    x1: Point = Field(description="終了点")
    stage_points: tuple[Point, ...] = Field(description="段の点 X_i")
    slopes: tuple[Point, ...] = Field(description="傾き k_i = -∇V(X_i)")
    h: float = Field(gt=0, description="ステップ幅")

    @property
    def end(self) -> np.ndarray:
        return np.array(self.x1)

    @property
    def slope_matrix(self) -> np.ndarray:
        """傾きを s×d 行列として取得"""
        return np.array(self.slopes)
