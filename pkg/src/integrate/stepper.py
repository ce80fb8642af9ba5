"""陽的RKステップと2軌道の縮小率

k_j = -∇V(X_j)、X_i = x0 + h Σ_{j<i} a_ij k_j、x1 = x0 + h Σ b_j k_j
"""

import csv
import logging
from pathlib import Path

import numpy as np

from src.integrate.fields import GradientField
from src.models.errors import DomainError, ShapeError, UnsupportedError
from src.models.step import StepRecord, as_point
from src.models.tableau import ButcherTableau

logger = logging.getLogger(__name__)


def rk_step(
    tableau: ButcherTableau, field: GradientField, x0: np.ndarray, h: float
) -> StepRecord:
    """陽的RK法で1ステップ進める

    Args:
        tableau: 陽的Butcherテーブル
        field: 勾配場
        x0: 開始点
        h: ステップ幅

    Returns:
        StepRecord: 段の点・傾き・終了点

    Raises:
        UnsupportedError: 陰的テーブル
        DomainError: h ≤ 0
        ShapeError: 点の次元が場と一致しない
    """
    if not tableau.explicit:
        raise UnsupportedError(f"陽的スキームのみ積分できます: {tableau.name or 'tableau'}")
    if not h > 0:
        raise DomainError(f"ステップ幅 h は正である必要があります: h={h}")

    start = np.asarray(x0, dtype=float)
    if start.shape != (field.dim,):
        raise ShapeError(f"開始点の次元が不正です: {start.shape} (期待: ({field.dim},))")

    a = tableau.a_matrix
    b = tableau.b_vector
    slopes = np.zeros((tableau.s, field.dim))
    stages = np.zeros((tableau.s, field.dim))
    for i in range(tableau.s):
        stages[i] = start + h * (a[i, :i] @ slopes[:i])
        slopes[i] = -field.eval(stages[i])

    end = start + h * (b @ slopes)
    return StepRecord(
        x0=as_point(start),
        x1=as_point(end),
        stage_points=tuple(as_point(p) for p in stages),
        slopes=tuple(as_point(k) for k in slopes),
        h=h,
    )


def contraction_ratio(
    tableau: ButcherTableau,
    field: GradientField,
    x0: np.ndarray,
    x0_tilde: np.ndarray,
    h: float,
) -> float:
    """1ステップ後の距離の二乗比 ‖x̃₁-x₁‖² / ‖x̃₀-x₀‖²

    Raises:
        DomainError: x0 = x̃0
    """
    p = np.asarray(x0, dtype=float)
    pt = np.asarray(x0_tilde, dtype=float)
    initial = float(np.sum((pt - p) ** 2))
    if initial == 0.0:
        raise DomainError("2つの初期点が一致しています")

    step = rk_step(tableau, field, p, h)
    step_tilde = rk_step(tableau, field, pt, h)
    return float(np.sum((step_tilde.end - step.end) ** 2)) / initial


def integrate(
    tableau: ButcherTableau,
    field: GradientField,
    x0: np.ndarray,
    h: float,
    steps: int,
) -> np.ndarray:
    """steps 回のステップを実行し、軌道（steps+1 × d）を返す"""
    if steps < 0:
        raise DomainError(f"ステップ数は非負である必要があります: steps={steps}")
    trajectory = [np.asarray(x0, dtype=float)]
    for _ in range(steps):
        trajectory.append(rk_step(tableau, field, trajectory[-1], h).end)
    return np.vstack(trajectory)


def write_trajectory_csv(path: Path, trajectory: np.ndarray, h: float) -> None:
    """軌道を CSV（t, x_1, ..., x_d）に書き出し"""
    points = np.atleast_2d(trajectory)
    header = ["t"] + [f"x_{i + 1}" for i in range(points.shape[1])]
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for n, point in enumerate(points):
            writer.writerow([repr(n * h)] + [repr(float(v)) for v in point])
    logger.debug(f"軌道CSV出力: {path} ({points.shape[0]}行)")
