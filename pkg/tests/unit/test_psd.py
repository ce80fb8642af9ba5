"""半正定値判定のテスト"""

import numpy as np
import pytest

from src.certify.psd import check_psd, default_tolerance, principal_minors_psd
from src.models.errors import ShapeError


@pytest.mark.unit
class TestCheckPsd:
    """check_psd"""

    def test_zero_matrix(self) -> None:
        """[[0]] は半正定値、最小固有値 0"""
        verdict = check_psd([[0.0]])
        assert verdict.is_psd is True
        assert verdict.min_eigenvalue == 0.0

    def test_runge_matrix(self) -> None:
        """[[0, 0.5], [0.5, 1]] は非半正定値（最小固有値 (1-√2)/2）"""
        verdict = check_psd([[0.0, 0.5], [0.5, 1.0]])
        assert verdict.is_psd is False
        assert verdict.min_eigenvalue == pytest.approx((1.0 - np.sqrt(2.0)) / 2.0, abs=1e-14)

    def test_verdict_matches_tolerance(self) -> None:
        """is_psd ⇔ 最小固有値 ≥ -tolerance"""
        matrix = np.diag([1.0, -5e-11])
        verdict = check_psd(matrix)
        assert verdict.tolerance_used == pytest.approx(1e-10)
        assert verdict.is_psd is True
        assert check_psd(matrix, tol=1e-11).is_psd is False

    def test_tolerance_scales_with_norm(self) -> None:
        """許容誤差 1e-10·max(1, ‖M‖∞)"""
        matrix = np.array([[3.0, 1.0], [1.0, 3.0]])
        assert default_tolerance(matrix) == pytest.approx(4e-10)
        assert default_tolerance(np.eye(2) * 1e-3) == pytest.approx(1e-10)

    def test_non_symmetric(self) -> None:
        """非対称な入力"""
        with pytest.raises(ShapeError):
            check_psd([[1.0, 0.0], [1e-9, 1.0]])

    def test_not_square(self) -> None:
        """正方でない入力"""
        with pytest.raises(ShapeError):
            check_psd(np.zeros((2, 3)))

    def test_non_finite(self) -> None:
        """有限でない成分"""
        with pytest.raises(ShapeError):
            check_psd([[np.inf]])


@pytest.mark.unit
class TestAgainstPrincipalMinors:
    """主小行列式による総当たり判定との一致"""

    def test_random_matrices(self, rng: np.random.Generator) -> None:
        """4×4 以下の乱数行列（明確に正定値または不定値のもの）"""
        checked = 0
        for _ in range(300):
            n = int(rng.integers(1, 5))
            x = rng.normal(size=(n, n))
            matrix = x @ x.T if rng.random() < 0.5 else 0.5 * (x + x.T)
            eigenvalues = np.linalg.eigvalsh(matrix)
            if np.abs(eigenvalues).min() < 1e-3:
                continue
            assert check_psd(matrix).is_psd == principal_minors_psd(matrix)
            checked += 1
        assert checked > 100

    def test_singular_psd(self) -> None:
        """階数落ちの半正定値行列"""
        v = np.array([1.0, 2.0, -1.0])
        matrix = np.outer(v, v)
        assert check_psd(matrix).is_psd is True
        assert principal_minors_psd(matrix) is True
