"""縮小性定理の性質検査のテスト"""

import numpy as np
import pytest

from src.certify.theorems import (
    pairwise_contraction_identity_check,
    random_explicit_tableau,
    verify_euler_optimality,
)
from src.core.tableau import euler_chain_tableau, named_tableau
from src.counterexample.configuration import paper_configuration
from src.models.errors import DomainError, PreconditionError, ShapeError


@pytest.mark.unit
class TestVerifyEulerOptimality:
    """h ≤ 2s/L と等号時の構造"""

    def test_equal_weight_chain_attains_bound(self) -> None:
        """b=[1/2,1/2] は h = 4 = 2s/L に到達し構造検査も通る"""
        report = verify_euler_optimality(euler_chain_tableau(["1/2", "1/2"]), 1.0)

        assert report.largest_certified_h == pytest.approx(4.0, rel=1e-9)
        assert report.bound == 4.0
        assert report.bound_holds is True
        assert report.boundary_psd is True
        assert report.structure_holds is True
        assert report.max_weight_deviation == pytest.approx(0.0, abs=1e-15)

    def test_unequal_weight_chain(self) -> None:
        """b=[3/4,1/4] は 8/3 < 4"""
        report = verify_euler_optimality(euler_chain_tableau(["3/4", "1/4"]), 1.0)

        assert report.largest_certified_h == pytest.approx(8.0 / 3.0, rel=1e-9)
        assert report.bound_holds is True
        assert report.boundary_psd is False
        assert report.structure_holds is None

    def test_heun_below_bound(self) -> None:
        """Heun法は 2 < 4"""
        report = verify_euler_optimality(named_tableau("heun"), 1.0)
        assert report.largest_certified_h == pytest.approx(2.0, rel=1e-9)
        assert report.boundary_psd is False

    def test_implicit_rejected(self) -> None:
        """陰的スキーム"""
        with pytest.raises(PreconditionError):
            verify_euler_optimality(named_tableau("implicit_midpoint"), 1.0)

    def test_nonpositive_weight_rejected(self) -> None:
        """重み 0 を含む（Runge法）"""
        with pytest.raises(PreconditionError):
            verify_euler_optimality(named_tableau("runge"), 1.0)

    def test_random_three_stage(self, rng: np.random.Generator) -> None:
        """ランダムな3段スキームは 6/L を超えない"""
        for _ in range(20):
            tableau = random_explicit_tableau(3, rng)
            if np.any(tableau.b_vector <= 0):
                continue
            report = verify_euler_optimality(tableau, 1.0)
            assert report.largest_certified_h <= 6.0 + 1e-8


@pytest.mark.unit
class TestPairwiseIdentity:
    """距離変化の恒等式"""

    def test_zero_slopes(self) -> None:
        """傾き 0 では残差 0"""
        zeros = np.zeros((2, 2))
        residual = pairwise_contraction_identity_check(
            named_tableau("runge"), 0.5, 1.0, zeros, zeros, np.array([1.0, 2.0]), np.array([-3.0, 0.5])
        )
        assert residual == 0.0

    def test_runge_counterexample(self) -> None:
        """閉形式の反例構成（L=2, h=1）"""
        config = paper_configuration(2.0, 1.0)
        slopes = np.array([config.k0, config.kh])
        slopes_tilde = np.array([config.k0_tilde, config.kh_tilde])
        residual = pairwise_contraction_identity_check(
            named_tableau("runge"),
            config.h,
            config.L,
            slopes,
            slopes_tilde,
            config.vector("x0"),
            config.vector("x0_tilde"),
        )
        assert residual < 1e-10

    def test_random_slopes(self, rng: np.random.Generator) -> None:
        """ランダムな傾きとテーブル"""
        for _ in range(100):
            s = int(rng.integers(1, 5))
            tableau = random_explicit_tableau(s, rng)
            residual = pairwise_contraction_identity_check(
                tableau,
                float(rng.uniform(0.01, 2.0)),
                1.0,
                rng.normal(size=(s, 2)),
                rng.normal(size=(s, 2)),
                rng.normal(size=2),
                rng.normal(size=2),
            )
            assert residual < 1e-10

    def test_dimension_mismatch(self) -> None:
        """次元不一致"""
        with pytest.raises(ShapeError):
            pairwise_contraction_identity_check(
                named_tableau("runge"), 1.0, 1.0, np.zeros((2, 2)), np.zeros((2, 3)),
                np.zeros(2), np.zeros(2),
            )

    def test_nonpositive_step(self) -> None:
        """h ≤ 0"""
        with pytest.raises(DomainError):
            pairwise_contraction_identity_check(
                named_tableau("euler"), 0.0, 1.0, np.zeros((1, 1)), np.zeros((1, 1)),
                np.zeros(1), np.ones(1),
            )
