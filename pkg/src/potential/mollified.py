"""箱型核による平滑化

V(ζ) = (1/ℓ²) ∫_{S(ζ)} V̂、S(ζ) は中心 ζ・一辺 ℓ の正方形。
∇V(ζ) は面積 |S(ζ)∩R_i| を重みとする G_i の凸結合で、面積は正方形を各領域の
半平面でクリップして靴紐公式で求める（値は各片を重心で評価した面積加重和）
"""

import logging
from functools import lru_cache

import numpy as np

from src.integrate.fields import GradientField
from src.models.config import PotentialConfig
from src.models.errors import CalibrationError, ConstructionError, DomainError
from src.models.potential import PWLConvexPotential
from src.potential.geometry import Vertex, area_and_centroid, clip_polygon, contains, square
from src.potential.pwl import Bounds, build_pwl, tessellate

logger = logging.getLogger(__name__)

CLIP_TOL = 1e-13
"""クリッピングの共線判定（×ℓ）"""

COVERAGE_TOL = 1e-12
WIDTH_ITERATIONS = 50
WIDTH_UPPER = 4.0
WIDTH_LOWER = 1e-9

_CORNER_OFFSETS = 0.5 * np.array([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])


class MollifiedPotential:
    """区分線形凸ポテンシャルを箱型核で平滑化したポテンシャル

    構築後は不変で、評価は並行呼び出しに対して安全
    """

    def __init__(
        self,
        base: PWLConvexPotential,
        kernel_width: float,
        alpha: float | None = None,
        target_lipschitz: float | None = None,
        lipschitz_estimate: float | None = None,
    ):
        """初期化

        Args:
            base: 平滑化する区分線形ポテンシャル
            kernel_width: 核の一辺 ℓ
            alpha: 安全係数 α（L′ = αL、較正済みの場合）
            target_lipschitz: 目標 Lipschitz 定数 L
            lipschitz_estimate: 較正時の ∇V の Lipschitz 推定値
        """
        if not kernel_width > 0:
            raise DomainError(f"核の幅は正である必要があります: ℓ={kernel_width}")

        self.base = base
        self.kernel_width = kernel_width
        self.alpha = alpha
        self.target_lipschitz = target_lipschitz
        self.lipschitz_estimate = lipschitz_estimate
        self.tessellation = tessellate(base)

        self._planes = [
            tuple(hp.coeffs for hp in region.half_planes) for region in self.tessellation.regions
        ]
        self._plane_arrays = [np.array(p, dtype=float).reshape(-1, 3) for p in self._planes]
        self._empty = [region.empty for region in self.tessellation.regions]
        self._gradients = base.gradients()
        self._intercepts = np.array([p.intercept for p in base.pieces])
        self._tol = CLIP_TOL * kernel_width

    @property
    def L_prime(self) -> float:
        return self.base.L_prime

    @property
    def h(self) -> float:
        return self.base.h

    def _single_region(self, points: np.ndarray) -> np.ndarray:
        """正方形 S(ζ) が1つの領域に収まる点はその番号、それ以外は -1"""
        corners = points[:, None, :] + self.kernel_width * _CORNER_OFFSETS[None, :, :]
        result = np.full(points.shape[0], -1)
        for i, planes in enumerate(self._plane_arrays):
            if self._empty[i]:
                continue
            if planes.size == 0:
                inside = np.ones(points.shape[0], dtype=bool)
            else:
                distances = corners @ planes[:, :2].T + planes[:, 2]
                inside = (distances >= 0.0).all(axis=(1, 2))
            result[(result < 0) & inside] = i
        return result

    def cells(self, zeta: np.ndarray) -> list[tuple[float, Vertex]]:
        """各領域について (|S(ζ)∩R_i|, その重心)"""
        window = square(zeta, self.kernel_width)
        out: list[tuple[float, Vertex]] = []
        for planes, empty in zip(self._planes, self._empty, strict=True):
            if empty:
                out.append((0.0, (float(zeta[0]), float(zeta[1]))))
                continue
            out.append(area_and_centroid(clip_polygon(window, planes, self._tol)))
        return out

    def areas(self, zeta: np.ndarray) -> np.ndarray:
        """|S(ζ)∩R_i| / ℓ²（正規化しない生の面積比）"""
        point = np.asarray(zeta, dtype=float)
        return np.array([a for a, _ in self.cells(point)]) / self.kernel_width**2

    def weights(self, zeta: np.ndarray) -> np.ndarray:
        """勾配の重み（和が1になるよう面積の総和で割る）"""
        point = np.asarray(zeta, dtype=float)
        single = int(self._single_region(point[None, :])[0])
        weights = np.zeros(len(self._planes))
        if single >= 0:
            weights[single] = 1.0
            return weights
        raw = np.array([a for a, _ in self.cells(point)])
        return raw / raw.sum()

    def gradient(self, zeta: np.ndarray) -> np.ndarray:
        return self.weights(zeta) @ self._gradients

    def value(self, zeta: np.ndarray) -> float:
        point = np.asarray(zeta, dtype=float)
        single = int(self._single_region(point[None, :])[0])
        if single >= 0:
            # 対称な核でのアフィン関数の畳み込みは元の関数
            return float(self._gradients[single] @ point + self._intercepts[single])
        total = 0.0
        weight = 0.0
        for i, (area, centroid) in enumerate(self.cells(point)):
            if area > 0.0:
                total += area * float(self._gradients[i] @ centroid + self._intercepts[i])
                weight += area
        return total / weight

    def gradients(self, points: np.ndarray) -> np.ndarray:
        """複数点の勾配（n × 2）"""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        single = self._single_region(pts)
        out = np.empty_like(pts)
        fast = single >= 0
        out[fast] = self._gradients[single[fast]]
        for k in np.flatnonzero(~fast):
            out[k] = self.gradient(pts[k])
        return out

    def values(self, points: np.ndarray) -> np.ndarray:
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        return np.array([self.value(p) for p in pts])

    def field(self) -> GradientField:
        """積分器に渡す勾配場"""
        return GradientField(
            self.gradient, 2, lipschitz_bound=self.target_lipschitz, name="mollified_pwl"
        )


def kernel_inclusions(potential: PWLConvexPotential, width: float) -> tuple[bool, bool, bool, bool]:
    """S(Z1)⊂R1, S(Z2)⊂R2, S(Z3)⊂R3∪R4, S(Z4)⊂R3∪R4 の判定

    前2つは正方形の頂点の包含、後2つは R3, R4 との共通部分の面積の和で判定する
    """
    return _inclusions(_region_planes(potential), potential.anchors(), width)


def _region_planes(potential: PWLConvexPotential) -> list[tuple[tuple[float, float, float], ...]]:
    return [tuple(hp.coeffs for hp in r.half_planes) for r in tessellate(potential).regions]


def _inclusions(
    planes: list[tuple[tuple[float, float, float], ...]], anchors: np.ndarray, width: float
) -> tuple[bool, bool, bool, bool]:
    tol = CLIP_TOL * width

    def covered(center: np.ndarray) -> bool:
        window = square(center, width)
        area = sum(area_and_centroid(clip_polygon(window, planes[k], tol))[0] for k in (2, 3))
        return area >= (1.0 - COVERAGE_TOL) * width**2

    return (
        contains(square(anchors[0], width), planes[0]),
        contains(square(anchors[1], width), planes[1]),
        covered(anchors[2]),
        covered(anchors[3]),
    )


def _largest_width(potential: PWLConvexPotential) -> float:
    """4つの包含が成り立つ最大の ℓ（二分法）"""
    planes = _region_planes(potential)
    anchors = potential.anchors()
    if not all(_inclusions(planes, anchors, WIDTH_LOWER)):
        raise ConstructionError(f"L′h={potential.theta} で包含を満たす核の幅がありません")
    if all(_inclusions(planes, anchors, WIDTH_UPPER)):
        return WIDTH_UPPER

    lo, hi = WIDTH_LOWER, WIDTH_UPPER
    for _ in range(WIDTH_ITERATIONS):
        mid = 0.5 * (lo + hi)
        if all(_inclusions(planes, anchors, mid)):
            lo = mid
        else:
            hi = mid
    return lo


@lru_cache(maxsize=8)
def choose_kernel_width(grid_points: int = 256, safety: float = 0.9) -> float:
    """L′h ∈ (0, 1] の全グリッド点で包含を満たす核の幅 ℓ

    包含は正規化座標では L′h にのみ依存するので、L′ = θ, h = 1 で評価する

    Args:
        grid_points: L′h のグリッド点数（k/grid_points, k = 1..grid_points）
        safety: 最小値に掛ける安全係数

    Returns:
        float: 核の一辺 ℓ

    Raises:
        ConstructionError: 包含を満たす幅が見つからない
    """
    thetas = np.arange(1, grid_points + 1) / grid_points
    limits = np.array([_largest_width(build_pwl(float(t), 1.0)) for t in thetas])
    width = safety * float(limits.min())
    logger.info(
        f"核の幅: ℓ={width:.6f} (最小許容幅 {limits.min():.6f} at L′h={thetas[limits.argmin()]:.4f})"
    )
    return width


def effective_lipschitz(
    potential: MollifiedPotential,
    grid_fraction: int = 20,
    close_pairs: int = 10000,
    close_separation_fraction: float = 100.0,
    seed: int = 0,
) -> float:
    """∇V の Lipschitz 定数の経験的推定

    全 Z_i の外接矩形を 2ℓ 広げた範囲で、間隔 ℓ/grid_fraction の格子の隣接点
    （縦・横・斜め）と、距離 ℓ/close_separation_fraction のランダムな近接ペアの
    差分商の最大値
    """
    width = potential.kernel_width
    anchors = potential.base.anchors()
    lo = anchors.min(axis=0) - 2.0 * width
    hi = anchors.max(axis=0) + 2.0 * width

    spacing = width / grid_fraction
    xs = np.arange(lo[0], hi[0] + 0.5 * spacing, spacing)
    ys = np.arange(lo[1], hi[1] + 0.5 * spacing, spacing)
    gx, gy = np.meshgrid(xs, ys, indexing="ij")
    grid = potential.gradients(np.column_stack([gx.ravel(), gy.ravel()]))
    grid = grid.reshape(len(xs), len(ys), 2)

    diagonal = spacing * np.sqrt(2.0)
    quotients = [
        np.linalg.norm(grid[1:, :] - grid[:-1, :], axis=-1).max() / spacing,
        np.linalg.norm(grid[:, 1:] - grid[:, :-1], axis=-1).max() / spacing,
        np.linalg.norm(grid[1:, 1:] - grid[:-1, :-1], axis=-1).max() / diagonal,
        np.linalg.norm(grid[1:, :-1] - grid[:-1, 1:], axis=-1).max() / diagonal,
    ]

    if close_pairs > 0:
        rng = np.random.default_rng(seed)
        separation = width / close_separation_fraction
        starts = rng.uniform(lo, hi, size=(close_pairs, 2))
        angles = rng.uniform(0.0, 2.0 * np.pi, size=close_pairs)
        ends = starts + separation * np.column_stack([np.cos(angles), np.sin(angles)])
        diffs = potential.gradients(starts) - potential.gradients(ends)
        quotients.append(np.linalg.norm(diffs, axis=-1).max() / separation)

    estimate = float(max(quotients))
    logger.debug(
        f"Lipschitz推定: {estimate:.6g} (= {estimate * width / potential.L_prime:.4f}·L′/ℓ)"
    )
    return estimate


@lru_cache(maxsize=64)
def _unit_lipschitz(
    theta: float,
    width: float,
    grid_fraction: int,
    close_pairs: int,
    close_separation_fraction: float,
    seed: int,
) -> float:
    """L′ = 1 あたりの Lipschitz 推定（勾配の差は L′ に比例し、形状は L′h のみに依存）"""
    potential = MollifiedPotential(build_pwl(theta, 1.0), width)
    estimate = effective_lipschitz(potential, grid_fraction, close_pairs, close_separation_fraction, seed)
    return estimate / theta


def build_counterexample_potential(
    L: float, h: float, settings: PotentialConfig | None = None
) -> MollifiedPotential:
    """凸かつ L-平滑な平滑化ポテンシャルを構成

    α = safety·L / (L′ = L での Lipschitz 推定) と較正し、L′ = αL で再構成して
    推定値が L 以下であることを確認する（不足なら1回だけ再較正）。
    較正は L′h ≤ 1 となる h_cal = min(h, 1/L) で行う

    Args:
        L: 目標 Lipschitz 定数
        h: ステップ幅
        settings: 構成の設定

    Returns:
        MollifiedPotential: 較正済みポテンシャル

    Raises:
        DomainError: L ≤ 0, h ≤ 0 または αLh > 1
        CalibrationError: 2回の較正で L-平滑性を確認できない
    """
    if not (L > 0 and h > 0):
        raise DomainError(f"L, h は正である必要があります: L={L}, h={h}")
    cfg = settings or PotentialConfig()
    width = choose_kernel_width(cfg.width_grid, cfg.width_safety)

    def lipschitz_at(L_prime: float) -> float:
        return L_prime * _unit_lipschitz(
            min(L_prime * h, 1.0),
            width,
            cfg.lipschitz_grid_fraction,
            cfg.close_pairs,
            cfg.close_separation_fraction,
            cfg.seed,
        )

    alpha = cfg.alpha_safety * L / lipschitz_at(L)
    for round_ in (1, 2):
        L_prime = alpha * L
        if L_prime * h > 1.0:
            raise DomainError(
                f"αLh ≤ 1 の範囲でのみ構成できます: α={alpha:.6f}, L={L}, h={h}, αLh={L_prime * h:.6f}"
            )
        estimate = lipschitz_at(L_prime)
        logger.debug(f"較正 {round_}: α={alpha:.6f}, Lipschitz推定={estimate:.6g}, L={L}")
        if estimate <= L:
            logger.info(
                f"平滑化ポテンシャル構成: L={L}, h={h}, α={alpha:.6f}, ℓ={width:.6f}, "
                f"Lipschitz推定={estimate:.6g}"
            )
            return MollifiedPotential(
                build_pwl(L_prime, h),
                width,
                alpha=alpha,
                target_lipschitz=L,
                lipschitz_estimate=estimate,
            )
        alpha *= cfg.alpha_safety * L / estimate

    raise CalibrationError(f"α の較正に失敗しました: L={L}, h={h}, α={alpha:.6f}")


def sample_grid(potential: MollifiedPotential, bounds: Bounds, n: int) -> np.ndarray:
    """窓内の n×n 格子での V と ∇V（列: x, y, V, dV/dx, dV/dy）"""
    if n < 2:
        raise DomainError(f"格子点数は2以上である必要があります: n={n}")
    x_min, x_max, y_min, y_max = bounds
    gx, gy = np.meshgrid(np.linspace(x_min, x_max, n), np.linspace(y_min, y_max, n), indexing="ij")
    points = np.column_stack([gx.ravel(), gy.ravel()])
    return np.column_stack([points, potential.values(points), potential.gradients(points)])
