"""縮小性定理の性質検査

- 陽的スキームの最適性: M̄(h) ⪰ 0 ならば h ≤ 2s/L、等号で Euler 連結型 b_i = 1/s
- 2軌道の距離変化の恒等式
"""

import logging

import numpy as np

from src.certify.interval import contractivity_interval
from src.certify.psd import check_psd
from src.core.matrices import m_matrix, normalized_mbar
from src.core.tableau import build_tableau
from src.models.certificate import OptimalityReport
from src.models.errors import DomainError, PreconditionError, ShapeError
from src.models.tableau import ButcherTableau

logger = logging.getLogger(__name__)

BOUND_TOL = 1e-8
BOUNDARY_PSD_SCALE = 1e-9
STRUCTURE_TOL = 1e-8


def verify_euler_optimality(tableau: ButcherTableau, L: float) -> OptimalityReport:
    """陽的・正重みスキームについて h ≤ 2s/L と等号時の構造を検査

    Args:
        tableau: 陽的テーブル（全重み > 0）
        L: Lipschitz定数

    Returns:
        OptimalityReport: 検査結果

    Raises:
        PreconditionError: 陰的テーブル、または非正の重み
    """
    if not tableau.explicit:
        raise PreconditionError("陽的スキームのみ対象です")
    if np.any(tableau.b_vector <= 0):
        raise PreconditionError(f"重みはすべて正である必要があります: b={list(tableau.b)}")

    s = tableau.s
    bound = 2.0 * s / L
    interval = contractivity_interval(tableau, L)
    largest = max([interval.upper, *interval.disconnected_samples])

    boundary = check_psd(
        normalized_mbar(tableau, 2.0 * s), tolerance_scale=BOUNDARY_PSD_SCALE
    )

    structure_holds: bool | None = None
    weight_dev: float | None = None
    coeff_dev: float | None = None
    if boundary.is_psd:
        a = tableau.a_matrix
        b = tableau.b_vector
        weight_dev = float(np.abs(b - 1.0 / s).max())
        lower = np.tril_indices(s, k=-1)
        coeff_dev = float(np.abs(a[lower] - b[lower[1]]).max()) if s > 1 else 0.0
        structure_holds = weight_dev <= STRUCTURE_TOL and coeff_dev <= STRUCTURE_TOL
        logger.debug(f"境界 h=2s/L で半正定値: 構造検査={structure_holds}")

    return OptimalityReport(
        s=s,
        L=L,
        largest_certified_h=largest,
        bound=bound,
        bound_holds=largest <= bound + BOUND_TOL,
        boundary_psd=boundary.is_psd,
        boundary_min_eigenvalue=boundary.min_eigenvalue,
        structure_holds=structure_holds,
        max_weight_deviation=weight_dev,
        max_coefficient_deviation=coeff_dev,
    )


def pairwise_contraction_identity_check(
    tableau: ButcherTableau,
    h: float,
    L: float,
    slopes: np.ndarray,
    slopes_tilde: np.ndarray,
    x0: np.ndarray,
    x0_tilde: np.ndarray,
) -> float:
    """距離変化の恒等式の残差

    ‖x̃₁-x₁‖² = ‖x̃₀-x₀‖² + 2h Σ b_i ⟨Δk_i, ΔX_i⟩ - h² Σ m_ij ⟨Δk_i, Δk_j⟩
    の両辺の差の絶対値を返す。段の点 X_i は傾きから再構成する。

    Args:
        tableau: Butcherテーブル
        h: ステップ幅
        L: Lipschitz定数（恒等式自体には現れない）
        slopes: 傾き k（s×d）
        slopes_tilde: 傾き k̃（s×d）
        x0: 初期点
        x0_tilde: もう一方の初期点

    Returns:
        float: 残差

    Raises:
        ShapeError: 次元不一致
        DomainError: h ≤ 0 または L ≤ 0
    """
    if not (h > 0 and L > 0):
        raise DomainError(f"h, L は正である必要があります: h={h}, L={L}")

    k = np.atleast_2d(np.asarray(slopes, dtype=float))
    kt = np.atleast_2d(np.asarray(slopes_tilde, dtype=float))
    p = np.atleast_1d(np.asarray(x0, dtype=float))
    pt = np.atleast_1d(np.asarray(x0_tilde, dtype=float))
    s = tableau.s
    if k.shape != kt.shape or k.shape[0] != s or p.shape != pt.shape or k.shape[1] != p.shape[0]:
        raise ShapeError(
            f"次元が一致しません: k={k.shape}, k̃={kt.shape}, x0={p.shape}, x̃0={pt.shape}, s={s}"
        )

    a = tableau.a_matrix
    b = tableau.b_vector

    stages = p + h * (a @ k)
    stages_tilde = pt + h * (a @ kt)
    x1 = p + h * (b @ k)
    x1_tilde = pt + h * (b @ kt)

    dk = kt - k
    dx = stages_tilde - stages
    gram = dk @ dk.T

    lhs = float(np.sum((x1_tilde - x1) ** 2))
    rhs = (
        float(np.sum((pt - p) ** 2))
        + 2.0 * h * float(np.sum(b * np.einsum("ij,ij->i", dk, dx)))
        - h * h * float(np.sum(m_matrix(tableau) * gram))
    )
    return abs(lhs - rhs)


def random_explicit_tableau(s: int, rng: np.random.Generator) -> ButcherTableau:
    """ランダムな陽的テーブル（a は [-1, 1] 一様の狭義下三角、b は Dirichlet 標本）"""
    a = np.tril(rng.uniform(-1.0, 1.0, size=(s, s)), k=-1)
    b = rng.dirichlet(np.ones(s))
    b = b / b.sum()
    return build_tableau(a.tolist(), b.tolist(), name=f"random_{s}")
