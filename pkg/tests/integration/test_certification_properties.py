"""縮小区間の性質のランダム検査"""

import numpy as np
import pytest

from src.certify.interval import contractivity_interval
from src.certify.theorems import (
    pairwise_contraction_identity_check,
    random_explicit_tableau,
    verify_euler_optimality,
)
from src.core.tableau import build_tableau, euler_chain_tableau


@pytest.mark.integration
@pytest.mark.slow
class TestEulerOptimality:
    """陽的スキームの縮小区間は 2s/L を超えない"""

    def test_random_tableaux(self, rng: np.random.Generator) -> None:
        """ランダムな陽的・正重みテーブル 1000 個"""
        checked = 0
        for _ in range(250):
            for s in (1, 2, 3, 4):
                report = verify_euler_optimality(random_explicit_tableau(s, rng), 1.0)
                assert report.bound_holds, report
                if report.boundary_psd:
                    assert report.structure_holds is True, report
                checked += 1
        assert checked == 1000

    @pytest.mark.parametrize("s", [2, 3, 4])
    def test_equal_chain_attains_bound(self, s: int) -> None:
        """b_i = 1/s の Euler 連鎖は h = 2s/L に達し、構造検査を通る"""
        report = verify_euler_optimality(euler_chain_tableau([1.0 / s] * s), 2.0)
        assert report.largest_certified_h == pytest.approx(s, rel=1e-8)
        assert report.boundary_psd is True
        assert report.structure_holds is True


@pytest.mark.integration
class TestEulerChain:
    """Euler 連鎖の区間は 2/(L·max b)"""

    def test_random_weights(self, rng: np.random.Generator) -> None:
        """ランダムな正の重み 100 通り"""
        for _ in range(100):
            s = int(rng.integers(1, 7))
            L = float(10.0 ** rng.uniform(-1.0, 1.0))
            b = rng.dirichlet(np.ones(s))
            interval = contractivity_interval(euler_chain_tableau(b.tolist()), L)

            assert interval.status == "finite"
            assert interval.h_max is not None
            assert interval.h_max == pytest.approx(2.0 / (L * b.max()), rel=1e-8)


@pytest.mark.integration
class TestPairwiseIdentity:
    """距離変化の恒等式"""

    def test_random_schemes(self, rng: np.random.Generator) -> None:
        """陽的・陰的テーブルとランダムな傾きで残差が丸め誤差程度"""
        for _ in range(200):
            s = int(rng.integers(1, 5))
            d = int(rng.integers(1, 4))
            if rng.random() < 0.5:
                tableau = random_explicit_tableau(s, rng)
            else:
                b = rng.dirichlet(np.ones(s))
                tableau = build_tableau(rng.uniform(-1.0, 1.0, size=(s, s)).tolist(), b.tolist())
            h = float(rng.uniform(0.01, 2.0))
            k = rng.normal(size=(s, d))
            kt = rng.normal(size=(s, d))
            x0 = rng.normal(size=d)
            x0t = rng.normal(size=d)

            residual = pairwise_contraction_identity_check(tableau, h, 1.0, k, kt, x0, x0t)
            scale = 1.0 + float(np.sum((x0t - x0) ** 2)) + h * h * float(np.sum((kt - k) ** 2))
            assert residual <= 1e-11 * scale * (1.0 + h)
