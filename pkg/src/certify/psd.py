"""対称行列の半正定値判定

最小固有値は対称固有値ソルバー（LAPACK syevd）で求める
"""

import itertools

import numpy as np

from src.models.certificate import PsdVerdict
from src.models.errors import ShapeError

SYMMETRY_TOL = 1e-12
DEFAULT_TOLERANCE_SCALE = 1e-10


def _as_square(matrix: np.ndarray | list[list[float]]) -> np.ndarray:
    m = np.asarray(matrix, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ShapeError(f"正方行列が必要です: shape={m.shape}")
    if not np.all(np.isfinite(m)):
        raise ShapeError("行列に有限でない成分が含まれています")
    return m


def default_tolerance(matrix: np.ndarray, scale: float = DEFAULT_TOLERANCE_SCALE) -> float:
    """許容誤差 scale·max(1, ‖M‖∞)"""
    return scale * max(1.0, float(np.abs(matrix).sum(axis=1).max()))


def check_psd(
    matrix: np.ndarray | list[list[float]],
    tol: float | None = None,
    tolerance_scale: float = DEFAULT_TOLERANCE_SCALE,
) -> PsdVerdict:
    """半正定値判定

    Args:
        matrix: 対称行列
        tol: 許容誤差（省略時 tolerance_scale·max(1, ‖M‖∞)）
        tolerance_scale: 省略時許容誤差の係数

    Returns:
        PsdVerdict: 判定結果

    Raises:
        ShapeError: 正方でない、または非対称性が 1e-12 を超える
    """
    m = _as_square(matrix)
    asymmetry = float(np.abs(m - m.T).max())
    if asymmetry > SYMMETRY_TOL:
        raise ShapeError(f"対称行列ではありません: 非対称性={asymmetry:.3e}")

    tolerance = default_tolerance(m, tolerance_scale) if tol is None else tol
    min_eig = float(np.linalg.eigvalsh(m)[0])
    return PsdVerdict(
        is_psd=min_eig >= -tolerance, min_eigenvalue=min_eig, tolerance_used=tolerance
    )


def principal_minors_psd(
    matrix: np.ndarray | list[list[float]], tol: float = DEFAULT_TOLERANCE_SCALE
) -> bool:
    """全主小行列式による半正定値判定（小行列用の総当たり）

    k 次の主小行列式を -tol·scale^k と比較する
    """
    m = _as_square(matrix)
    n = m.shape[0]
    scale = max(1.0, float(np.abs(m).sum(axis=1).max()))
    for k in range(1, n + 1):
        for idx in itertools.combinations(range(n), k):
            minor = float(np.linalg.det(m[np.ix_(idx, idx)]))
            if minor < -tol * scale**k:
                return False
    return True
