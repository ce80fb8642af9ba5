"""代数的安定性行列 m と縮小性行列 M̄(h)

m_ij = b_i a_ij + b_j a_ji - b_i b_j
M̄(h)_ij = (2h b_i / L) δ_ij + h² m_ij
"""

import numpy as np

from src.models.errors import DomainError
from src.models.tableau import ButcherTableau, ContractivityMatrix


def m_matrix(tableau: ButcherTableau) -> np.ndarray:
    """行列 m を計算

    P + Pᵀ - bbᵀ の形で組み立てるため、結果は厳密に対称
    """
    a = tableau.a_matrix
    b = tableau.b_vector
    p = b[:, None] * a
    return p + p.T - np.outer(b, b)


def _check_positive(h: float, L: float) -> None:
    if not h > 0:
        raise DomainError(f"ステップ幅 h は正である必要があります: h={h}")
    if not L > 0:
        raise DomainError(f"Lipschitz定数 L は正である必要があります: L={L}")


def mbar_matrix(tableau: ButcherTableau, h: float, L: float) -> ContractivityMatrix:
    """縮小性行列 M̄(h) を計算

    Args:
        tableau: Butcherテーブル
        h: ステップ幅
        L: 勾配のLipschitz定数

    Returns:
        ContractivityMatrix: M̄(h)

    Raises:
        DomainError: h ≤ 0 または L ≤ 0
    """
    _check_positive(h, L)
    entries = (2.0 * h / L) * np.diag(tableau.b_vector) + h * h * m_matrix(tableau)
    return ContractivityMatrix(
        entries=tuple(tuple(float(v) for v in row) for row in entries), h=h, L=L
    )


def normalized_mbar(tableau: ButcherTableau, theta: float) -> np.ndarray:
    """正規化行列 (L/h)·M̄(h) = 2 diag(b) + θ m（θ = hL）

    M̄(h) と同じ半正定値性を持ち、成分が O(1) に保たれる
    """
    if not theta > 0:
        raise DomainError(f"θ = hL は正である必要があります: θ={theta}")
    return 2.0 * np.diag(tableau.b_vector) + theta * m_matrix(tableau)
