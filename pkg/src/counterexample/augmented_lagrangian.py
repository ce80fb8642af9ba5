"""拡張ラグランジュ法（不等式制約 g(x) ≤ 0）

内側の最小化は scipy.optimize.minimize（L-BFGS-B）、乗数更新は
Powell-Hestenes-Rockafellar 型、違反が十分減らない場合はペナルティを倍にする
"""

import logging
from collections.abc import Callable

import numpy as np
from pydantic import BaseModel, ConfigDict, Field
from scipy.optimize import minimize

logger = logging.getLogger(__name__)

ObjectiveFn = Callable[[np.ndarray], tuple[float, np.ndarray]]
ConstraintFn = Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]]


class AugmentedLagrangianResult(BaseModel):
    """拡張ラグランジュ法の結果"""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    x: np.ndarray = Field(description="解")
    fun: float = Field(description="目的関数値")
    violation: float = Field(description="最大制約違反 max(0, max g)")
    multipliers: np.ndarray = Field(description="ラグランジュ乗数")
    penalty: float = Field(description="最終ペナルティ")
    outer_iterations: int = Field(description="外側反復回数")
    converged: bool = Field(description="収束判定")


def augmented_lagrangian(
    fun: ObjectiveFn,
    constraints: ConstraintFn,
    x0: np.ndarray,
    penalty0: float = 10.0,
    max_outer: int = 60,
    tol: float = 1e-10,
    multiplier_tol: float = 1e-9,
    violation_decrease: float = 0.25,
    inner_options: dict[str, float | int] | None = None,
) -> AugmentedLagrangianResult:
    """min f(x) s.t. g(x) ≤ 0 を解く

    Args:
        fun: x ↦ (f(x), ∇f(x))
        constraints: x ↦ (g(x), ∂g/∂x)（m 個の制約、ヤコビアンは m×n）
        x0: 初期値
        penalty0: 初期ペナルティ ρ
        max_outer: 外側反復の上限
        tol: 許容制約違反
        multiplier_tol: 乗数変化の収束判定（1 + ‖λ‖ に対する相対値）
        violation_decrease: 違反がこの比率まで減らなければ ρ を倍にする
        inner_options: L-BFGS-B のオプション

    Returns:
        AugmentedLagrangianResult: 最後の反復点
    """
    options: dict[str, float | int] = {"maxiter": 5000, "ftol": 1e-15, "gtol": 1e-12}
    if inner_options:
        options.update(inner_options)

    x = np.asarray(x0, dtype=float).copy()
    g0, _ = constraints(x)
    multipliers = np.zeros_like(g0)
    penalty = penalty0
    previous_violation = np.inf
    violation = float(max(0.0, g0.max()))
    converged = False
    iteration = 0

    def merit(z: np.ndarray, lam: np.ndarray, rho: float) -> tuple[float, np.ndarray]:
        value, grad = fun(z)
        g, jac = constraints(z)
        shifted = np.maximum(0.0, lam + rho * g)
        value += float((shifted @ shifted - lam @ lam) / (2.0 * rho))
        return value, grad + jac.T @ shifted

    for iteration in range(1, max_outer + 1):
        inner = minimize(
            merit,
            x,
            args=(multipliers, penalty),
            jac=True,
            method="L-BFGS-B",
            options=options,
        )
        if not inner.success:
            # 直線探索の打ち切りは許容し、得られた点で乗数更新を続ける
            logger.debug(f"内側最小化が未収束: {inner.message}")
        x = inner.x

        g, _ = constraints(x)
        violation = float(max(0.0, g.max()))
        updated = np.maximum(0.0, multipliers + penalty * g)
        change = float(np.abs(updated - multipliers).max())
        multipliers = updated

        logger.debug(
            f"外側反復 {iteration}: 違反={violation:.3e}, 乗数変化={change:.3e}, ρ={penalty:g}"
        )
        if violation <= tol and change <= multiplier_tol * (1.0 + float(np.abs(multipliers).max())):
            converged = True
            break
        if violation > tol and violation > violation_decrease * previous_violation:
            penalty *= 2.0
        previous_violation = violation

    value, _ = fun(x)
    return AugmentedLagrangianResult(
        x=x,
        fun=value,
        violation=violation,
        multipliers=multipliers,
        penalty=penalty,
        outer_iterations=iteration,
        converged=converged,
    )
