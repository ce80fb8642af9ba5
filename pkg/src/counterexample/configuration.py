"""Runge法の反例構成

閉形式の傾き k0, k̃0, kh, k̃h と開始点 x0 = [0, 0], x̃0 = [1, 0] から
2軌道を組み立て、6本の制約と膨張率を評価する
"""

import logging
from typing import Any

import numpy as np

from src.models.configuration import CONSTRAINT_PAIRS, POINT_OF, Configuration, ConstraintReport
from src.models.errors import DomainError
from src.models.step import as_point

logger = logging.getLogger(__name__)

FEASIBILITY_TOL = 1e-12
ARROW_SCALE = 0.8


def _check_positive(L: float, h: float) -> None:
    if not (L > 0 and h > 0):
        raise DomainError(f"L, h は正である必要があります: L={L}, h={h}")


def configuration_from_slopes(
    k0: np.ndarray,
    k0_tilde: np.ndarray,
    kh: np.ndarray,
    kh_tilde: np.ndarray,
    L: float,
    h: float,
    x0: np.ndarray | None = None,
    x0_tilde: np.ndarray | None = None,
) -> Configuration:
    """傾きと開始点から Runge 法の点を計算して構成を作る

    開始点の既定値は x0 = 0, x̃0 = e1
    """
    _check_positive(L, h)
    slopes = [np.asarray(v, dtype=float) for v in (k0, k0_tilde, kh, kh_tilde)]
    d = slopes[0].shape[0]
    start = np.zeros(d) if x0 is None else np.asarray(x0, dtype=float)
    if x0_tilde is None:
        start_tilde = np.zeros(d)
        start_tilde[0] = 1.0
    else:
        start_tilde = np.asarray(x0_tilde, dtype=float)

    s0, s0t, sh, sht = slopes
    return Configuration(
        x0=as_point(start),
        x0_tilde=as_point(start_tilde),
        xh=as_point(start + (h / 2.0) * s0),
        xh_tilde=as_point(start_tilde + (h / 2.0) * s0t),
        x1=as_point(start + h * sh),
        x1_tilde=as_point(start_tilde + h * sht),
        k0=as_point(s0),
        k0_tilde=as_point(s0t),
        kh=as_point(sh),
        kh_tilde=as_point(sht),
        L=L,
        h=h,
    )


def paper_configuration(L: float, h: float) -> Configuration:
    """閉形式の非縮小構成

    k0 = [0, -3/h], k̃0 = [-L/2, -3/h + L/2], kh = [0, -3/h + L],
    k̃h = [L³h²/64, -3/h + L - L²h/8]

    Raises:
        DomainError: L ≤ 0 または h ≤ 0
    """
    _check_positive(L, h)
    return configuration_from_slopes(
        np.array([0.0, -3.0 / h]),
        np.array([-L / 2.0, -3.0 / h + L / 2.0]),
        np.array([0.0, -3.0 / h + L]),
        np.array([L**3 * h**2 / 64.0, -3.0 / h + L - L**2 * h / 8.0]),
        L,
        h,
    )


def check_constraints(config: Configuration, tol: float = FEASIBILITY_TOL) -> ConstraintReport:
    """6本の制約 (1/L)‖Δk‖² ≤ -⟨Δk, Δx⟩ の余裕を計算

    許容誤差は各制約の大きさ max(1, |LHS|, |RHS|) に対する相対値
    """
    slacks: list[float] = []
    scales: list[float] = []
    for first, second in CONSTRAINT_PAIRS:
        dk = config.vector(second) - config.vector(first)
        dx = config.vector(POINT_OF[second]) - config.vector(POINT_OF[first])
        lhs = float(dk @ dk) / config.L
        rhs = -float(dk @ dx)
        slacks.append(rhs - lhs)
        scales.append(max(1.0, abs(lhs), abs(rhs)))

    satisfied = all(slack >= -tol * scale for slack, scale in zip(slacks, scales, strict=True))
    return ConstraintReport(slacks=tuple(slacks), scales=tuple(scales), all_satisfied=satisfied)


def dilation(config: Configuration) -> float:
    """膨張率 ‖x̃1-x1‖² / ‖x̃0-x0‖²

    Raises:
        DomainError: x̃0 = x0
    """
    initial = config.vector("x0_tilde") - config.vector("x0")
    norm0 = float(initial @ initial)
    if norm0 == 0.0:
        raise DomainError("2つの初期点が一致しています")
    final = config.vector("x1_tilde") - config.vector("x1")
    return float(final @ final) / norm0


def growth_formula(L: float, h: float) -> float:
    """閉形式の膨張率 1 + (Lh)³/32 + (Lh)⁴/64 + (Lh)⁶/4096"""
    t = L * h
    return 1.0 + t**3 / 32.0 + t**4 / 64.0 + t**6 / 4096.0


def scale_configuration(config: Configuration, factor: float) -> Configuration:
    """全点と全傾きを factor 倍（関係式・制約・膨張率を保つ）"""
    if not factor > 0:
        raise DomainError(f"倍率は正である必要があります: {factor}")
    fields: dict[str, Any] = {
        name: as_point(factor * config.vector(name))
        for name in (
            "x0", "x0_tilde", "xh", "xh_tilde", "x1", "x1_tilde",
            "k0", "k0_tilde", "kh", "kh_tilde",
        )
    }
    return Configuration(L=config.L, h=config.h, **fields)


def rescaled_configuration(config: Configuration) -> Configuration:
    """有界勾配版: 傾きを h 倍し x̃0 = [h, 0] とした構成"""
    return scale_configuration(config, config.h)


def figure_data(config: Configuration, arrow_scale: float = ARROW_SCALE) -> dict[str, Any]:
    """点と矢印の図データ

    矢印は各点から h·k を arrow_scale 倍して描く（h = 1 では傾きの 0.8 倍）
    """
    points = {
        name: list(getattr(config, name))
        for name in ("x0", "x0_tilde", "xh", "xh_tilde", "x1", "x1_tilde")
    }
    arrows = [
        {
            "label": slope,
            "anchor": list(getattr(config, POINT_OF[slope])),
            "vector": as_point(arrow_scale * config.h * config.vector(slope)),
        }
        for slope in ("k0", "k0_tilde", "kh", "kh_tilde")
    ]
    return {"L": config.L, "h": config.h, "arrow_scale": arrow_scale, "points": points, "arrows": arrows}
