"""区分線形凸ポテンシャルと平滑化のモデル"""

from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from src.models.step import Point


class AffinePiece(BaseModel):
    """アフィン片 π(ζ) = F + ⟨G, ζ - Z⟩"""

    model_config = ConfigDict(frozen=True)

    Z: Point = Field(description="接点 Z")
    G: Point = Field(description="勾配 G")
    F: float = Field(description="Z での値 F")

    def value(self, zeta: np.ndarray) -> float:
        return self.F + float(np.dot(self.G, np.asarray(zeta, dtype=float) - np.array(self.Z)))

    @property
    def intercept(self) -> float:
        """原点での値 F - ⟨G, Z⟩"""
        return self.F - float(np.dot(self.G, self.Z))


class PWLConvexPotential(BaseModel):
    """アフィン片の最大 V̂(ζ) = max_i π_i(ζ)"""

    model_config = ConfigDict(frozen=True)

    pieces: tuple[AffinePiece, ...] = Field(min_length=1, description="アフィン片")
    L_prime: float = Field(gt=0, description="Lipschitz定数 L′ = αL")
    h: float = Field(gt=0, description="ステップ幅")

    @property
    def theta(self) -> float:
        return self.L_prime * self.h

    def anchors(self) -> np.ndarray:
        return np.array([p.Z for p in self.pieces])

    def gradients(self) -> np.ndarray:
        return np.array([p.G for p in self.pieces])

    def values_at(self, points: np.ndarray) -> np.ndarray:
        """各点・各片の π_i（n × 片数）"""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        intercepts = np.array([p.intercept for p in self.pieces])
        return pts @ self.gradients().T + intercepts

    def value(self, zeta: np.ndarray) -> float:
        return float(self.values_at(zeta).max())


class HalfPlane(BaseModel):
    """{ζ : ⟨normal, ζ⟩ + offset ≥ 0}（normal は単位ベクトル）"""

    model_config = ConfigDict(frozen=True)

    normal: tuple[float, float] = Field(description="単位法線")
    offset: float = Field(description="定数項")
    against: int = Field(description="比較相手の片の番号（0始まり）")

    @property
    def coeffs(self) -> tuple[float, float, float]:
        return (self.normal[0], self.normal[1], self.offset)


class Region(BaseModel):
    """R_i = {ζ : π_i(ζ) ≥ π_j(ζ) ∀j}"""

    model_config = ConfigDict(frozen=True)

    index: int = Field(description="片の番号（0始まり）")
    half_planes: tuple[HalfPlane, ...] = Field(description="境界の半平面")
    empty: bool = Field(default=False, description="空の領域")


class Tessellation(BaseModel):
    """領域分割"""

    model_config = ConfigDict(frozen=True)

    regions: tuple[Region, ...] = Field(description="各片の領域")

    def to_dict(self) -> dict[str, Any]:
        return self.model_dump(mode="json")


class WitnessResult(BaseModel):
    """平滑ポテンシャル上の Runge 法の非縮小性の証拠"""

    model_config = ConfigDict(frozen=True)

    L: float = Field(description="目標 Lipschitz 定数")
    L_prime: float = Field(description="構成に用いた L′ = αL")
    alpha: float = Field(description="安全係数 α")
    h: float = Field(description="ステップ幅")
    kernel_width: float = Field(description="核の一辺 ℓ")
    effective_lipschitz: float | None = Field(
        default=None, description="較正時の ∇V の Lipschitz 定数の推定値"
    )
    ratio: float = Field(description="‖x̃1-x1‖² / ‖x̃0-x0‖²")
    formula_ratio: float = Field(description="ν による閉形式の値")
    lam: float = Field(description="λ = |S(Z3)∩R3| / ℓ²")
    mu: float = Field(description="μ = |S(Z4)∩R4| / ℓ²")
    nu: float = Field(description="ν = μ - (1 - λ)")
    difference: Point = Field(description="x̃1 - x1")

    def to_dict(self) -> dict[str, Any]:
        return self.model_dump(mode="json")
