"""設定モデル

YAMLファイルおよび環境変数（RKCONTRACT_ 接頭辞）からの設定読み込みとバリデーション
"""

from pathlib import Path
from typing import Literal

import yaml
from pydantic import BaseModel, Field
from pydantic_settings import BaseSettings, SettingsConfigDict


class LoggingConfig(BaseModel):
    """ロギング設定"""

    level: str = Field(default="INFO", description="ログレベル")
    format: Literal["text", "json"] = Field(default="text", description="ログフォーマット")
    output: Literal["stdout", "stderr"] = Field(default="stderr", description="出力先")


class CertifyConfig(BaseModel):
    """半正定値判定・縮小区間探索の設定"""

    tolerance_scale: float = Field(
        default=1e-10, gt=0, description="固有値許容誤差の係数（×max(1, ‖M‖∞)）"
    )
    grid_points: int = Field(default=256, ge=8, description="区間探索の対数グリッド点数")
    bisection_iterations: int = Field(default=60, ge=1, description="二分法の反復回数")
    cap_factor: float = Field(default=10.0, gt=1, description="探索上限 H_CAP = cap_factor·2s/L")
    infinity_samples: int = Field(default=10, ge=1, description="無限区間判定の追加サンプル数")


class SearchConfig(BaseModel):
    """膨張率最大化（拡張ラグランジュ法）の設定"""

    starts: int = Field(default=20, ge=1, description="マルチスタート数")
    seed: int = Field(default=0, description="乱数シード")
    max_outer: int = Field(default=60, ge=1, description="外側反復の上限")
    penalty0: float = Field(default=10.0, gt=0, description="初期ペナルティ")
    feasibility_tol: float = Field(default=1e-10, gt=0, description="制約違反の許容値")
    fit_steps: list[float] = Field(
        default_factory=lambda: [0.01, 0.02, 0.05],
        description="3次係数フィットに使うステップ（1/L 単位）",
    )


class PotentialConfig(BaseModel):
    """平滑化ポテンシャル構成の設定"""

    width_grid: int = Field(default=256, ge=2, description="カーネル幅探索の L'h グリッド点数")
    width_safety: float = Field(default=0.9, gt=0, le=1, description="カーネル幅の安全係数")
    alpha_safety: float = Field(default=0.9, gt=0, le=1, description="α較正の安全係数")
    lipschitz_grid_fraction: int = Field(
        default=20, ge=2, description="Lipschitz推定グリッド間隔（ℓ/この値）"
    )
    close_pairs: int = Field(default=10000, ge=0, description="近接ペアのサンプル数")
    close_separation_fraction: float = Field(
        default=100.0, gt=1, description="近接ペアの距離（ℓ/この値）"
    )
    seed: int = Field(default=0, description="乱数シード")


class Config(BaseSettings):
    """全体設定

    環境変数からの読み込みもサポート（例: RKCONTRACT_THREADS=4）
    """

    model_config = SettingsConfigDict(
        env_prefix="RKCONTRACT_",
        env_file=".env",
        env_file_encoding="utf-8",
        env_nested_delimiter="__",
        extra="ignore",
    )

    logging: LoggingConfig = Field(default_factory=LoggingConfig)
    certify: CertifyConfig = Field(default_factory=CertifyConfig)
    search: SearchConfig = Field(default_factory=SearchConfig)
    potential: PotentialConfig = Field(default_factory=PotentialConfig)

    threads: int | None = Field(default=None, ge=1, description="並列マルチスタート数の上限")

    @classmethod
    def from_yaml(cls, config_path: Path) -> "Config":
        """YAMLファイルから設定読み込み

        Args:
            config_path: 設定ファイルパス

        Returns:
            Config: 設定オブジェクト

        Raises:
            FileNotFoundError: 設定ファイルが存在しない
            yaml.YAMLError: YAML解析エラー
        """
        if not config_path.exists():
            raise FileNotFoundError(f"設定ファイルが見つかりません: {config_path}")

        with open(config_path, encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}

        return cls(**data)
