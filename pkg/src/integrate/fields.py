"""勾配場

x ↦ ∇V(x) を呼び出し可能オブジェクトとメタデータ（次元・Lipschitz上界）で表す
"""

from collections.abc import Callable

import numpy as np

from src.models.errors import ShapeError

GradientFn = Callable[[np.ndarray], np.ndarray]

LIPSCHITZ_SLACK = 1e-9


class GradientField:
    """評価可能な勾配場

    eval は決定的かつ読み取り専用で、並行呼び出しに対して安全であること
    """

    def __init__(
        self,
        gradient: GradientFn,
        dim: int,
        lipschitz_bound: float | None = None,
        name: str = "",
    ):
        """初期化

        Args:
            gradient: x ↦ ∇V(x)
            dim: 次元 d
            lipschitz_bound: 宣言された Lipschitz 定数 L（不明なら None）
            name: 表示名
        """
        if dim < 1:
            raise ShapeError(f"次元は1以上である必要があります: dim={dim}")
        self._gradient = gradient
        self.dim = dim
        self.lipschitz_bound = lipschitz_bound
        self.name = name

    def eval(self, x: np.ndarray) -> np.ndarray:
        """勾配を評価

        Raises:
            ShapeError: 入力または出力の次元が dim と異なる
        """
        point = np.asarray(x, dtype=float)
        if point.shape != (self.dim,):
            raise ShapeError(f"点の次元が不正です: {point.shape} (期待: ({self.dim},))")
        value = np.asarray(self._gradient(point), dtype=float)
        if value.shape != (self.dim,):
            raise ShapeError(f"勾配の次元が不正です: {value.shape} (期待: ({self.dim},))")
        return value

    def __call__(self, x: np.ndarray) -> np.ndarray:
        return self.eval(x)

    def spot_check_lipschitz(
        self, rng: np.random.Generator, pairs: int = 100, scale: float = 1.0
    ) -> bool:
        """ランダムな点対で ‖∇V(x)-∇V(y)‖ ≤ L‖x-y‖ を抜き取り検査（証明ではない）"""
        if self.lipschitz_bound is None:
            return True
        for _ in range(pairs):
            x = rng.normal(scale=scale, size=self.dim)
            y = rng.normal(scale=scale, size=self.dim)
            lhs = float(np.linalg.norm(self.eval(x) - self.eval(y)))
            rhs = self.lipschitz_bound * float(np.linalg.norm(x - y))
            if lhs > rhs * (1.0 + LIPSCHITZ_SLACK):
                return False
        return True


def zero_field(dim: int) -> GradientField:
    """V ≡ 0 の勾配場"""
    return GradientField(lambda x: np.zeros_like(x), dim, lipschitz_bound=0.0, name="zero")


def quadratic_field(q: np.ndarray, name: str = "quadratic") -> GradientField:
    """V(x) = ½⟨Qx, x⟩ の勾配場 ∇V(x) = Qx（Q は対称半正定値）"""
    matrix = np.asarray(q, dtype=float)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise ShapeError(f"Q は正方行列である必要があります: shape={matrix.shape}")
    eigenvalues = np.linalg.eigvalsh(0.5 * (matrix + matrix.T))
    return GradientField(
        lambda x: matrix @ x,
        matrix.shape[0],
        lipschitz_bound=float(max(eigenvalues.max(), 0.0)),
        name=name,
    )


def random_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar 分布に従うランダム直交行列"""
    q, r = np.linalg.qr(rng.normal(size=(dim, dim)))
    return q * np.sign(np.diag(r))


def random_quadratic_field(dim: int, L: float, rng: np.random.Generator) -> GradientField:
    """Q = Uᵀ diag(λ) U（λ は [0, L] 一様）の L-平滑凸二次ポテンシャル"""
    u = random_orthogonal(dim, rng)
    lam = rng.uniform(0.0, L, size=dim)
    field = quadratic_field(u.T @ np.diag(lam) @ u, name="random_quadratic")
    field.lipschitz_bound = L
    return field


def isometry_conjugate(field: GradientField, rotation: np.ndarray, shift: np.ndarray) -> GradientField:
    """等長変換 T(x) = Rx + c による共役場 x ↦ R ∇V(Rᵀ(x - c))"""
    r = np.asarray(rotation, dtype=float)
    c = np.asarray(shift, dtype=float)
    return GradientField(
        lambda x: r @ field.eval(r.T @ (x - c)),
        field.dim,
        lipschitz_bound=field.lipschitz_bound,
        name=f"{field.name}_conjugated",
    )
