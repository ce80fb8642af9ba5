"""例外定義

ライブラリ全体で使用する例外階層
CLIはこれらを終了コードに変換する
"""


class RKContractivityError(Exception):
    """本パッケージの基底例外"""


class ShapeError(RKContractivityError, ValueError):
    """行列・ベクトルの形状不正、非対称入力、次元不一致"""


class ConsistencyError(RKContractivityError, ValueError):
    """係数の整合性違反（Σb ≠ 1 など）"""


class DomainError(RKContractivityError, ValueError):
    """パラメータが定義域外（h ≤ 0, L ≤ 0, hL' > 1 など）"""


class UnsupportedError(RKContractivityError):
    """未サポートの入力（陽的積分器に陰的テーブルを渡した場合など）"""


class PreconditionError(RKContractivityError, ValueError):
    """定理の仮定を満たさない入力"""


class CalibrationError(RKContractivityError):
    """安全係数の較正失敗"""


class WitnessError(RKContractivityError):
    """非縮小性の証人計算が期待と一致しない"""


class ConstructionError(RKContractivityError):
    """ポテンシャル構成の失敗（カーネル幅が見つからない等）"""
