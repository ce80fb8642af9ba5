"""箱型核による平滑化のテスト"""

import numpy as np
import pytest

from src.models.errors import DomainError
from src.models.potential import AffinePiece, PWLConvexPotential
from src.potential.mollified import (
    MollifiedPotential,
    effective_lipschitz,
    kernel_inclusions,
    sample_grid,
)
from src.potential.pwl import build_pwl

WIDTH = 0.2


@pytest.fixture
def mollified() -> MollifiedPotential:
    """L′h = 1 のポテンシャルを幅 0.2 で平滑化"""
    return MollifiedPotential(build_pwl(1.0, 1.0), WIDTH)


def _random_points(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.uniform([-0.5, -2.0], [1.5, 0.5], size=(n, 2))


@pytest.mark.unit
class TestMollifiedPotential:
    """MollifiedPotential"""

    def test_interior_matches_piece(self, mollified: MollifiedPotential) -> None:
        """S(Z1) ⊂ R1 なら ∇V = G1、V = π1"""
        z1 = np.array(mollified.base.pieces[0].Z)
        np.testing.assert_array_equal(mollified.weights(z1), [1.0, 0.0, 0.0, 0.0])
        np.testing.assert_allclose(mollified.gradient(z1), mollified.base.pieces[0].G)
        assert mollified.value(z1) == pytest.approx(mollified.base.pieces[0].F, abs=1e-12)

    def test_partition_of_unity(
        self, mollified: MollifiedPotential, rng: np.random.Generator
    ) -> None:
        """Σ |S(ζ)∩R_i| / ℓ² = 1"""
        for point in _random_points(rng, 300):
            areas = mollified.areas(point)
            assert areas.sum() == pytest.approx(1.0, abs=1e-12)
            assert np.all(areas >= 0.0)

    def test_gradient_is_convex_combination(
        self, mollified: MollifiedPotential, rng: np.random.Generator
    ) -> None:
        """重みは非負で和が1"""
        for point in _random_points(rng, 100):
            weights = mollified.weights(point)
            assert weights.sum() == pytest.approx(1.0, abs=1e-12)
            assert np.all(weights >= 0.0)
            np.testing.assert_allclose(
                mollified.gradient(point), weights @ mollified.base.gradients()
            )

    def test_boundary_blend(self, mollified: MollifiedPotential) -> None:
        """R1 と R2 の境界 x = y + 1/2 上の点では半分ずつ"""
        weights = mollified.weights(np.array([0.5, 0.0]))
        np.testing.assert_allclose(weights, [0.5, 0.5, 0.0, 0.0], atol=1e-12)

    def test_batch_matches_single(
        self, mollified: MollifiedPotential, rng: np.random.Generator
    ) -> None:
        """gradients と gradient の一致"""
        points = _random_points(rng, 50)
        batch = mollified.gradients(points)
        for point, row in zip(points, batch, strict=True):
            np.testing.assert_allclose(row, mollified.gradient(point), atol=1e-12)
        values = mollified.values(points[:5])
        assert values.shape == (5,)

    def test_monotone_gradient(
        self, mollified: MollifiedPotential, rng: np.random.Generator
    ) -> None:
        """⟨∇V(a) - ∇V(b), a - b⟩ ≥ 0"""
        a = _random_points(rng, 300)
        b = _random_points(rng, 300)
        diff = mollified.gradients(a) - mollified.gradients(b)
        inner = np.einsum("ij,ij->i", diff, a - b)
        assert inner.min() >= -1e-12

    def test_value_not_below_pwl(
        self, mollified: MollifiedPotential, rng: np.random.Generator
    ) -> None:
        """凸関数の平均なので V ≥ V̂"""
        for point in _random_points(rng, 50):
            assert mollified.value(point) >= mollified.base.value(point) - 1e-12

    def test_field(self, mollified: MollifiedPotential) -> None:
        """積分器用の勾配場"""
        field = mollified.field()
        assert field.dim == 2
        assert field.lipschitz_bound is None
        np.testing.assert_allclose(field(np.zeros(2)), mollified.gradient(np.zeros(2)))

    def test_nonpositive_width(self) -> None:
        """ℓ ≤ 0"""
        with pytest.raises(DomainError):
            MollifiedPotential(build_pwl(1.0, 1.0), 0.0)


@pytest.mark.unit
class TestKernelInclusions:
    """核の包含条件"""

    def test_small_width(self) -> None:
        """十分小さい幅ではすべて成立"""
        assert kernel_inclusions(build_pwl(1.0, 1.0), 1e-3) == (True, True, True, True)

    def test_large_width(self) -> None:
        """大きすぎる幅では S(Z1) ⊂ R1 が崩れる"""
        assert kernel_inclusions(build_pwl(1.0, 1.0), 2.0)[0] is False


@pytest.mark.unit
class TestSampleGrid:
    """格子サンプル"""

    def test_shape(self, mollified: MollifiedPotential) -> None:
        """n² 行 × 5 列"""
        samples = sample_grid(mollified, (-0.5, 1.5, -2.0, 0.5), 4)
        assert samples.shape == (16, 5)
        assert samples[0, 0] == -0.5
        assert samples[-1, 1] == 0.5

    def test_too_few_points(self, mollified: MollifiedPotential) -> None:
        """n < 2"""
        with pytest.raises(DomainError):
            sample_grid(mollified, (0.0, 1.0, 0.0, 1.0), 1)


@pytest.mark.unit
class TestEffectiveLipschitz:
    """effective_lipschitz"""

    def test_zero_jump(self) -> None:
        """勾配がすべて等しい（V がアフィン）なら推定値は 0"""
        gradient = (0.3, -0.2)
        anchors = build_pwl(1.0, 1.0).anchors()
        pieces = tuple(
            AffinePiece(
                Z=(float(z[0]), float(z[1])),
                G=gradient,
                F=float(np.dot(gradient, z)),
            )
            for z in anchors
        )
        potential = MollifiedPotential(PWLConvexPotential(pieces=pieces, L_prime=1.0, h=1.0), WIDTH)

        assert effective_lipschitz(potential, close_pairs=1000) == pytest.approx(0.0, abs=1e-12)
