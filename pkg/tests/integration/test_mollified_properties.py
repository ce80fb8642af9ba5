"""較正済み平滑化ポテンシャルの凸性・平滑性の検査"""

import numpy as np
import pytest

from src.potential.mollified import (
    MollifiedPotential,
    build_counterexample_potential,
    choose_kernel_width,
    effective_lipschitz,
    kernel_inclusions,
)
from src.potential.pwl import build_pwl, classify

L = 1.0
H = 0.5


@pytest.fixture(scope="module")
def potential() -> MollifiedPotential:
    """L = 1, h = 1/2 で較正したポテンシャル"""
    return build_counterexample_potential(L, H)


def _sample_points(
    potential: MollifiedPotential, rng: np.random.Generator, n: int
) -> np.ndarray:
    """半分は接点の外接矩形から一様、残りは Z3, Z4 の近く（境界付近）"""
    width = potential.kernel_width
    anchors = potential.base.anchors()
    lo = anchors.min(axis=0) - width
    hi = anchors.max(axis=0) + width
    uniform = rng.uniform(lo, hi, size=(n - n // 2, 2))
    centers = anchors[rng.integers(2, 4, size=n // 2)]
    near = centers + rng.uniform(-width, width, size=(n // 2, 2))
    return np.vstack([uniform, near])


@pytest.mark.integration
@pytest.mark.slow
class TestCalibratedPotential:
    """build_counterexample_potential の結果"""

    def test_calibration(self, potential: MollifiedPotential) -> None:
        """L′h ≤ 1 かつ Lipschitz 推定 ≤ L"""
        assert potential.alpha is not None
        assert potential.lipschitz_estimate is not None
        assert 0.0 < potential.alpha < 1.0
        assert potential.L_prime * potential.h <= 1.0
        assert potential.lipschitz_estimate <= L

    def test_finite_difference_gradient(
        self, potential: MollifiedPotential, rng: np.random.Generator
    ) -> None:
        """中心差分と ∇V の一致"""
        step = 1e-5 * potential.kernel_width
        for point in _sample_points(potential, rng, 200):
            fd = np.array(
                [
                    (potential.value(point + step * e) - potential.value(point - step * e))
                    / (2.0 * step)
                    for e in np.eye(2)
                ]
            )
            np.testing.assert_allclose(fd, potential.gradient(point), rtol=0.0, atol=1e-6)

    def test_partition_of_unity(
        self, potential: MollifiedPotential, rng: np.random.Generator
    ) -> None:
        """Σ |S(ζ)∩R_i| / ℓ² = 1"""
        for point in _sample_points(potential, rng, 1000):
            assert potential.areas(point).sum() == pytest.approx(1.0, abs=1e-12)

    def test_midpoint_convexity(
        self, potential: MollifiedPotential, rng: np.random.Generator
    ) -> None:
        """V((a+b)/2) ≤ (V(a)+V(b))/2"""
        a = _sample_points(potential, rng, 1000)
        b = a + rng.normal(scale=potential.kernel_width, size=a.shape)
        va = potential.values(a)
        vb = potential.values(b)
        vm = potential.values(0.5 * (a + b))
        assert np.all(vm <= 0.5 * (va + vb) + 1e-12)

    def test_cocoercivity(self, potential: MollifiedPotential, rng: np.random.Generator) -> None:
        """⟨∇V(a)-∇V(b), a-b⟩ ≥ ‖∇V(a)-∇V(b)‖²/L"""
        a = _sample_points(potential, rng, 10000)
        b = a + rng.normal(scale=0.5 * potential.kernel_width, size=a.shape)
        dg = potential.gradients(a) - potential.gradients(b)
        dx = a - b

        inner = np.einsum("ij,ij->i", dg, dx)
        bound = np.einsum("ij,ij->i", dg, dg) / L
        scale = 1.0 + np.linalg.norm(dg, axis=1) * np.linalg.norm(dx, axis=1)
        assert np.all(inner >= bound - 1e-9 * scale)

    def test_alpha_independent_of_step(self, potential: MollifiedPotential) -> None:
        """別の h で較正しても α はほぼ同じ"""
        other = build_counterexample_potential(L, H / 2.0)
        assert other.alpha is not None and potential.alpha is not None
        assert other.alpha == pytest.approx(potential.alpha, rel=0.05)

    def test_areas_against_monte_carlo(
        self, potential: MollifiedPotential, rng: np.random.Generator
    ) -> None:
        """厳密な面積比とモンテカルロ法の一致（5σ）"""
        width = potential.kernel_width
        samples = 1_000_000
        for center in _sample_points(potential, rng, 20):
            points = center + width * (rng.random((samples, 2)) - 0.5)
            counts = np.bincount(classify(potential.base, points), minlength=4)
            fractions = counts / samples
            areas = potential.areas(center)
            # 1領域に収まる正方形では面積比が 1 を丸め誤差分だけ超える
            p = np.clip(areas, 0.0, 1.0)
            sigma = np.sqrt(p * (1.0 - p) / samples)
            assert np.all(np.abs(fractions - areas) <= 5.0 * sigma + 1e-9)


@pytest.mark.integration
class TestLipschitzEstimate:
    """effective_lipschitz"""

    def test_linear_in_lipschitz_parameter(self) -> None:
        """L′h と ℓ を固定して L′ を2倍にすると推定値も2倍"""
        width = 0.05
        single = MollifiedPotential(build_pwl(0.5, 1.0), width)
        double = MollifiedPotential(build_pwl(1.0, 0.5), width)

        first = effective_lipschitz(single, grid_fraction=10, close_pairs=0)
        second = effective_lipschitz(double, grid_fraction=10, close_pairs=0)
        assert second == pytest.approx(2.0 * first, rel=0.05)


@pytest.mark.integration
class TestKernelWidth:
    """choose_kernel_width"""

    @pytest.fixture(scope="class")
    def width(self) -> float:
        return choose_kernel_width()

    def test_positive(self, width: float) -> None:
        """ℓ > 0"""
        assert width > 0.0

    @pytest.mark.parametrize("theta", [1.0, 1.0 / 256.0])
    def test_inclusions_at_grid_ends(self, width: float, theta: float) -> None:
        """L′h = 1 と 1/256 で4つの包含が成立"""
        assert kernel_inclusions(build_pwl(theta, 1.0), width) == (True, True, True, True)

    def test_square_reaches_fourth_region(self, width: float) -> None:
        """L′h が小さいと R3/R4 の境界が Z3 に近づき S(Z3) ⊄ R3"""
        potential = MollifiedPotential(build_pwl(1.0 / 256.0, 1.0), width)
        areas = potential.areas(potential.base.anchors()[2])
        assert areas[3] > 0.0
        assert areas[2] + areas[3] == pytest.approx(1.0, abs=1e-9)
