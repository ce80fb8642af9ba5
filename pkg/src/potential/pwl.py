"""区分線形凸補間ポテンシャルと領域分割

4点 Z_i・勾配 G_i・値 F_i の Hermite 凸補間の最小解 V̂(ζ) = max_i π_i(ζ) を構成し、
各片が最大となる領域 R_i を半平面の共通部分として表す
"""

import logging

import numpy as np

from src.models.errors import ConsistencyError, DomainError
from src.models.potential import AffinePiece, HalfPlane, PWLConvexPotential, Region, Tessellation
from src.potential.geometry import Polygon, Vertex, clip_polygon, signed_distance

logger = logging.getLogger(__name__)

LIMIT_THETA = 1e-3
"""L′h ↓ 0 の極限として評価する L′h"""

SEGMENT_TOL = 1e-9

Bounds = tuple[float, float, float, float]
"""(x_min, x_max, y_min, y_max)"""

Segment = tuple[int, int, Vertex, Vertex]
"""(片 i, 片 j, 始点, 終点)（i < j、0始まり）"""


def build_pwl(L_prime: float, h: float) -> PWLConvexPotential:
    """非縮小性の反例となる4片の区分線形凸ポテンシャル

    θ = L′h として
    Z = [0,0], [1,0], [0,-3/2], [1-θ/4, -3/2+θ/4]、
    G = [0,3/h], [L′/2, 3/h-L′/2], [0, 3/h-L′], [-L′θ²/64, 3/h-L′+L′θ/8]、
    F = 0, L′/4, -9/(2h)+9L′/8, -9/(2h)+15L′/8-L′θ/4+L′θ²/128

    Args:
        L_prime: Lipschitz定数 L′
        h: ステップ幅

    Returns:
        PWLConvexPotential: 12個の必要条件 F_i > π_j(Z_i) を確認済みのポテンシャル

    Raises:
        DomainError: L′ ≤ 0, h ≤ 0 または L′h > 1
        ConsistencyError: 必要条件が成り立たない
    """
    if not (L_prime > 0 and h > 0):
        raise DomainError(f"L′, h は正である必要があります: L′={L_prime}, h={h}")
    theta = L_prime * h
    if theta > 1.0:
        raise DomainError(f"L′h ≤ 1 の範囲でのみ構成できます: L′h={theta}")

    anchors = [(0.0, 0.0), (1.0, 0.0), (0.0, -1.5), (1.0 - theta / 4.0, -1.5 + theta / 4.0)]
    drift = 3.0 / h
    gradients = [
        (0.0, drift),
        (L_prime / 2.0, drift - L_prime / 2.0),
        (0.0, drift - L_prime),
        (-L_prime * theta**2 / 64.0, drift - L_prime + L_prime * theta / 8.0),
    ]
    values = [
        0.0,
        L_prime / 4.0,
        -4.5 / h + 9.0 * L_prime / 8.0,
        -4.5 / h + 15.0 * L_prime / 8.0 - L_prime * theta / 4.0 + L_prime * theta**2 / 128.0,
    ]
    potential = PWLConvexPotential(
        pieces=tuple(
            AffinePiece(Z=z, G=g, F=f) for z, g, f in zip(anchors, gradients, values, strict=True)
        ),
        L_prime=L_prime,
        h=h,
    )

    slacks = necessary_condition_slacks(potential)
    off_diagonal = slacks[~np.eye(len(potential.pieces), dtype=bool)]
    if not np.all(off_diagonal > 0.0):
        raise ConsistencyError(
            f"必要条件 F_i > π_j(Z_i) が成り立ちません: 最小余裕={off_diagonal.min():.3e}"
        )
    logger.debug(f"区分線形ポテンシャル構成: L′={L_prime}, h={h}, 最小余裕={off_diagonal.min():.3e}")
    return potential


def necessary_condition_slacks(potential: PWLConvexPotential) -> np.ndarray:
    """余裕 F_i - π_j(Z_i) の行列（対角は 0）"""
    anchors = potential.anchors()
    values = np.array([p.F for p in potential.pieces])
    slacks = values[:, None] - potential.values_at(anchors)
    np.fill_diagonal(slacks, 0.0)
    return slacks


def gradient_jump_constant(potential: PWLConvexPotential) -> float:
    """勾配の跳び max ‖G_i - G_j‖ / L′"""
    g = potential.gradients()
    jumps = np.linalg.norm(g[:, None, :] - g[None, :, :], axis=-1)
    return float(jumps.max() / potential.L_prime)


def tessellate(potential: PWLConvexPotential) -> Tessellation:
    """各片の領域を半平面 {π_i ≥ π_j} の共通部分として求める

    勾配が等しい組は定数項の符号で判定し、同値なら番号の小さい片の側に含める
    """
    regions: list[Region] = []
    pieces = potential.pieces
    for i, piece in enumerate(pieces):
        half_planes: list[HalfPlane] = []
        empty = False
        for j, other in enumerate(pieces):
            if j == i:
                continue
            dg = np.subtract(piece.G, other.G)
            dc = piece.intercept - other.intercept
            norm = float(np.hypot(dg[0], dg[1]))
            if norm == 0.0:
                if dc < 0.0 or (dc == 0.0 and j < i):
                    empty = True
                continue
            half_planes.append(
                HalfPlane(
                    normal=(float(dg[0] / norm), float(dg[1] / norm)),
                    offset=dc / norm,
                    against=j,
                )
            )
        if empty:
            logger.debug(f"空の領域: R{i + 1}")
        regions.append(Region(index=i, half_planes=tuple(half_planes), empty=empty))
    return Tessellation(regions=tuple(regions))


def classify(potential: PWLConvexPotential, points: np.ndarray) -> np.ndarray:
    """各点が属する領域の番号（同値は番号の小さい方）"""
    return np.argmax(potential.values_at(points), axis=1)


def _window(bounds: Bounds) -> Polygon:
    x_min, x_max, y_min, y_max = bounds
    return [(x_min, y_min), (x_max, y_min), (x_max, y_max), (x_min, y_max)]


def region_polygons(tessellation: Tessellation, bounds: Bounds) -> list[Polygon]:
    """窓 bounds で切り取った各領域の多角形（空なら []）"""
    window = _window(bounds)
    return [
        [] if region.empty else clip_polygon(window, [hp.coeffs for hp in region.half_planes])
        for region in tessellation.regions
    ]


def tessellation_segments(potential: PWLConvexPotential, bounds: Bounds) -> list[Segment]:
    """窓内の領域境界の線分

    各領域の多角形の辺のうち、ある半平面の境界線上にあるものを境界とする
    """
    tessellation = tessellate(potential)
    polygons = region_polygons(tessellation, bounds)
    scale = max(1.0, *(abs(b) for b in bounds))
    segments: list[Segment] = []
    for region, polygon in zip(tessellation.regions, polygons, strict=True):
        n = len(polygon)
        for k in range(n):
            start, end = polygon[k], polygon[(k + 1) % n]
            if start == end:
                continue
            for hp in region.half_planes:
                on_line = (
                    abs(signed_distance(start, hp.coeffs)) <= SEGMENT_TOL * scale
                    and abs(signed_distance(end, hp.coeffs)) <= SEGMENT_TOL * scale
                )
                if on_line:
                    # 共有辺は番号の小さい領域の側で1回だけ数える
                    if hp.against > region.index:
                        segments.append((region.index, hp.against, start, end))
                    break
    return segments


def limit_potential() -> PWLConvexPotential:
    """L′h ↓ 0 の極限（正規化座標 L′ = θ, h = 1 で十分小さい θ）"""
    return build_pwl(LIMIT_THETA, 1.0)
