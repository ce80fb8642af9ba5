"""CLI出力モデルと実行マニフェスト"""

from datetime import datetime
from typing import Any

from pydantic import BaseModel, Field

from src.models.certificate import EigenSample
from src.models.configuration import Configuration, ConstraintReport, SearchResult
from src.models.potential import WitnessResult


class TableauCheckResult(BaseModel):
    """tableau-check の出力"""

    tableau: str = Field(description="スキーム名")
    s: int = Field(description="段数")
    explicit: bool = Field(description="陽的か")
    L: float = Field(description="Lipschitz定数")
    h: float = Field(description="ステップ幅")
    matrix: list[list[float]] = Field(description="M̄(h)")
    min_eigenvalue: float = Field(description="最小固有値")
    tolerance: float = Field(description="使用した許容誤差")
    is_psd: bool = Field(description="半正定値か")


class IntervalResult(BaseModel):
    """interval の出力（h_max は無限区間で "inf"、空なら null）"""

    tableau: str = Field(description="スキーム名")
    h_max: float | str | None = Field(description="区間の右端")
    empty: bool = Field(description="区間が存在しない")
    status: str = Field(description="finite / infinite / empty")
    L: float = Field(description="Lipschitz定数")
    h_cap: float = Field(description="探索上限")
    disconnected_samples: list[float] = Field(description="区間外で半正定値となった h")
    min_eig_samples: list[EigenSample] = Field(description="プレスキャンの最小固有値")


class CounterexampleResult(BaseModel):
    """counterexample の出力"""

    L: float = Field(description="Lipschitz定数")
    h: float = Field(description="ステップ幅")
    smooth: bool = Field(description="平滑化ポテンシャルで検証したか")
    configuration: Configuration | None = Field(default=None, description="閉形式の構成")
    rescaled: Configuration | None = Field(default=None, description="有界勾配版の構成")
    constraints: ConstraintReport | None = Field(default=None, description="6本の制約の余裕")
    dilation: float | None = Field(default=None, description="膨張率")
    growth_formula: float | None = Field(default=None, description="閉形式の膨張率")
    witness: WitnessResult | None = Field(default=None, description="平滑化ポテンシャル上の検証")
    figure: dict[str, Any] | None = Field(default=None, description="図データ（点と矢印）")


class SearchReport(BaseModel):
    """search の出力"""

    L: float = Field(description="Lipschitz定数")
    h: float = Field(description="ステップ幅")
    dim: int = Field(description="次元")
    seed: int = Field(description="乱数シード")
    best: SearchResult = Field(description="(L, h) での最良解")
    coefficient: float | None = Field(default=None, description="(ratio-1)/(Lh)³ のフィット係数")
    fit_steps: list[float] = Field(default_factory=list, description="フィットに使った Lh")
    fit_gains: list[float] = Field(default_factory=list, description="各 Lh での (ratio-1)/(Lh)³")


class ArtifactRecord(BaseModel):
    """出力ファイル"""

    path: str = Field(description="出力ディレクトリからの相対パス")
    sha256: str = Field(description="SHA-256")
    size: int = Field(description="バイト数")


class RunManifest(BaseModel):
    """実行マニフェスト（時刻以外は同じ入力で再現される）"""

    command: str = Field(description="サブコマンド")
    parameters: dict[str, Any] = Field(description="L, h, シード, 許容誤差など")
    artifacts: list[ArtifactRecord] = Field(default_factory=list, description="出力ファイル一覧")
    version: str = Field(description="ツールのバージョン")
    created_at: datetime = Field(description="実行時刻（UTC）")


COMMAND_MODELS: dict[str, type[BaseModel]] = {
    "tableau-check": TableauCheckResult,
    "interval": IntervalResult,
    "counterexample": CounterexampleResult,
    "search": SearchReport,
    "manifest": RunManifest,
}
