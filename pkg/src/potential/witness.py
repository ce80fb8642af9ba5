"""平滑化ポテンシャル上での Runge 法の非縮小性の検証

x0 = Z1, x̃0 = Z2 から1ステップ進めると xh = Z3, x̃h = Z4 となり、
x̃1 - x1 = [1 + νθ³/64, -νθ²/8]（θ = L′h, ν = λ + μ - 1）
"""

import logging

import numpy as np

from src.core.tableau import named_tableau
from src.integrate.stepper import rk_step
from src.models.config import PotentialConfig
from src.models.errors import DomainError, WitnessError
from src.models.potential import WitnessResult
from src.models.step import as_point
from src.potential.mollified import MollifiedPotential, build_counterexample_potential

logger = logging.getLogger(__name__)

FORMULA_TOL = 1e-10


def witness_formula(nu: float, theta: float) -> float:
    """‖x̃1-x1‖² = 1 + νθ³/32 + ν²θ⁴/64 + ν²θ⁶/4096"""
    return 1.0 + nu * theta**3 / 32.0 + nu**2 * theta**4 / 64.0 + nu**2 * theta**6 / 4096.0


def witness_noncontractivity(
    L: float,
    h: float,
    potential: MollifiedPotential | None = None,
    settings: PotentialConfig | None = None,
) -> WitnessResult:
    """平滑化ポテンシャル上で Runge 法を1ステップ実行し膨張を確認

    Args:
        L: 目標 Lipschitz 定数
        h: ステップ幅
        potential: 構成済みポテンシャル（省略時は構成する）
        settings: 構成の設定

    Returns:
        WitnessResult: 膨張率と λ, μ, ν

    Raises:
        DomainError: αLh > 1 など構成の範囲外
        WitnessError: 閉形式との不一致、または膨張率 ≤ 1
    """
    if potential is not None and potential.h != h:
        raise DomainError(f"ポテンシャルのステップ幅と一致しません: {potential.h} != {h}")
    m = potential or build_counterexample_potential(L, h, settings)
    anchors = m.base.anchors()
    runge = named_tableau("runge")
    field = m.field()

    step = rk_step(runge, field, anchors[0], h)
    step_tilde = rk_step(runge, field, anchors[1], h)
    difference = step_tilde.end - step.end
    initial = anchors[1] - anchors[0]
    ratio = float(difference @ difference) / float(initial @ initial)

    lam = float(m.weights(anchors[2])[2])
    mu = float(m.weights(anchors[3])[3])
    nu = lam + mu - 1.0
    theta = m.L_prime * h
    expected = np.array([1.0 + nu * theta**3 / 64.0, -nu * theta**2 / 8.0])
    formula = witness_formula(nu, theta)

    logger.info(
        f"非縮小性の検証: L={L}, h={h}, L′h={theta:.6g}, λ={lam:.6f}, μ={mu:.6f}, "
        f"ratio-1={ratio - 1.0:.6e}"
    )
    mismatch = float(np.abs(difference - expected).max())
    if mismatch > FORMULA_TOL or abs(ratio - formula) > FORMULA_TOL:
        raise WitnessError(
            f"閉形式と一致しません: x̃1-x1={difference.tolist()}, 期待値={expected.tolist()}, "
            f"ratio={ratio!r}, formula={formula!r}"
        )
    if not ratio > 1.0:
        raise WitnessError(f"膨張が確認できません: ratio={ratio!r}, ν={nu!r}")

    return WitnessResult(
        L=L,
        L_prime=m.L_prime,
        alpha=m.alpha if m.alpha is not None else m.L_prime / L,
        h=h,
        kernel_width=m.kernel_width,
        effective_lipschitz=m.lipschitz_estimate,
        ratio=ratio,
        formula_ratio=formula,
        lam=lam,
        mu=mu,
        nu=nu,
        difference=as_point(difference),
    )
