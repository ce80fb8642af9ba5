"""凸縮小性区間の計算

正規化行列 N(θ) = 2 diag(b) + θ m（θ = hL）の最小固有値を対数グリッドで
プレスキャンし、符号変化を二分法で詰める。N(θ) と M̄(h) の半正定値性は同値。
"""

import logging
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import Any

import numpy as np

from src.certify.psd import DEFAULT_TOLERANCE_SCALE, check_psd
from src.core.matrices import m_matrix, normalized_mbar
from src.models.certificate import ContractivityInterval, EigenSample
from src.models.errors import DomainError
from src.models.tableau import ButcherTableau

logger = logging.getLogger(__name__)

GRID_POINTS = 256
BISECTION_ITERATIONS = 60
CAP_FACTOR = 10.0
INFINITY_SAMPLES = 10
# プレスキャン下端 θ_cap·GRID_SPAN
GRID_SPAN = 1e-3
# 格子より下の探索の下端 θ_cap·FLOOR_SPAN
FLOOR_SPAN = 1e-12


class _Probe:
    """θ ごとの半正定値判定"""

    def __init__(self, tableau: ButcherTableau, tolerance_scale: float):
        self.tableau = tableau
        self.tolerance_scale = tolerance_scale

    def __call__(self, theta: float) -> tuple[bool, float]:
        verdict = check_psd(
            normalized_mbar(self.tableau, theta), tolerance_scale=self.tolerance_scale
        )
        return verdict.is_psd, verdict.min_eigenvalue


def _bisect(probe: _Probe, lo: float, hi: float, iterations: int) -> float:
    """lo で半正定値、hi で非半正定値として境界を詰め、最後の半正定値点を返す"""
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if probe(mid)[0]:
            lo = mid
        else:
            hi = mid
    return lo


def _positive_at_origin(tableau: ButcherTableau) -> bool:
    """十分小さい θ > 0 で N(θ) が半正定値か

    b_i < 0 なら N(θ)_ii < 0。b_i = 0 の段は N(θ)_ii = 0 なので、
    m の同じ行がすべて 0 のときに限り切り離せる。
    """
    b = tableau.b_vector
    if np.any(b < 0):
        return False
    zero = b == 0
    return not np.any(m_matrix(tableau)[zero])


def contractivity_interval(
    tableau: ButcherTableau,
    L: float,
    grid_points: int = GRID_POINTS,
    bisection_iterations: int = BISECTION_ITERATIONS,
    cap_factor: float = CAP_FACTOR,
    infinity_samples: int = INFINITY_SAMPLES,
    tolerance_scale: float = DEFAULT_TOLERANCE_SCALE,
) -> ContractivityInterval:
    """凸縮小性区間 (0, h_max] を計算

    Args:
        tableau: Butcherテーブル
        L: 勾配のLipschitz定数
        grid_points: プレスキャン点数
        bisection_iterations: 二分法の反復回数
        cap_factor: 探索上限 H_CAP = cap_factor·2s/L
        infinity_samples: +∞ 判定に使う H_CAP 超の標本数
        tolerance_scale: 固有値許容誤差の係数

    Returns:
        ContractivityInterval: 0⁺ を含む最大の連続区間と、区間外の半正定値標本

    Raises:
        DomainError: L ≤ 0
    """
    if not L > 0:
        raise DomainError(f"Lipschitz定数 L は正である必要があります: L={L}")

    probe = _Probe(tableau, tolerance_scale)
    theta_cap = cap_factor * 2.0 * tableau.s
    thetas = np.geomspace(theta_cap * GRID_SPAN, theta_cap, grid_points)
    scan = [probe(float(theta)) for theta in thetas]

    samples = [
        EigenSample(h=float(theta) / L, min_eigenvalue=float(theta) / L**2 * eig, is_psd=ok)
        for theta, (ok, eig) in zip(thetas, scan, strict=True)
    ]
    passed = [ok for ok, _ in scan]
    common: dict[str, Any] = {"L": L, "h_cap": theta_cap / L, "min_eig_samples": samples}

    if not passed[0]:
        if not _positive_at_origin(tableau):
            disconnected = [float(t) / L for t, ok in zip(thetas, passed, strict=True) if ok]
            if disconnected:
                logger.warning(f"0⁺ を含まない半正定値標本があります: {len(disconnected)}点")
            logger.info(f"縮小区間なし: {tableau.name or 'tableau'} (L={L})")
            return ContractivityInterval(
                status="empty", disconnected_samples=disconnected, **common
            )
        # 0 は半正定値側。格子の下を θ_cap·FLOOR_SPAN まで降順に探して二分法の下端を決める
        lo, hi = 0.0, float(thetas[0])
        for theta in np.geomspace(hi, theta_cap * FLOOR_SPAN, grid_points)[1:]:
            if probe(float(theta))[0]:
                lo = float(theta)
                break
            hi = float(theta)
        theta_max = _bisect(probe, lo, hi, bisection_iterations)
        first_fail = 0
    elif all(passed):
        rng = np.random.default_rng(0)
        extra = theta_cap * 10.0 ** rng.uniform(0.0, 3.0, size=infinity_samples)
        if all(probe(float(theta))[0] for theta in extra):
            logger.info(f"無条件縮小: {tableau.name or 'tableau'} (L={L})")
            return ContractivityInterval(status="infinite", **common)
        return ContractivityInterval(status="finite", h_max=theta_cap / L, **common)
    else:
        first_fail = passed.index(False)
        theta_max = _bisect(
            probe, float(thetas[first_fail - 1]), float(thetas[first_fail]), bisection_iterations
        )

    disconnected = [
        float(t) / L for t, ok in zip(thetas[first_fail:], passed[first_fail:], strict=True) if ok
    ]
    if disconnected:
        logger.warning(
            f"半正定値となる h の集合が区間ではありません: {len(disconnected)}点が区間外"
        )

    h_max = theta_max / L
    logger.info(f"縮小区間: {tableau.name or 'tableau'} (0, {h_max:.12g}] (L={L})")
    return ContractivityInterval(
        status="finite", h_max=h_max, disconnected_samples=disconnected, **common
    )


def interval_sweep(
    tableaux: Sequence[ButcherTableau],
    L: float,
    max_workers: int | None = None,
) -> list[ContractivityInterval]:
    """複数テーブルの区間を独立タスクとして並列計算（入力順で返す）"""
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(lambda t: contractivity_interval(t, L), tableaux))
