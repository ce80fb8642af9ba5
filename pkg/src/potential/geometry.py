"""平面凸多角形の半平面クリッピング・面積・重心

半平面は単位法線 n と定数 c で {p : ⟨n, p⟩ + c ≥ 0} と表す。
多角形は反時計回りの頂点列（float の組のリスト）
"""

from collections.abc import Iterable, Sequence

Vertex = tuple[float, float]
Polygon = list[Vertex]
HalfPlaneCoeffs = tuple[float, float, float]
"""(n_x, n_y, c)"""


def square(center: Sequence[float], side: float) -> Polygon:
    """中心 center・一辺 side の軸平行正方形（反時計回り）"""
    cx, cy = float(center[0]), float(center[1])
    r = side / 2.0
    return [(cx - r, cy - r), (cx + r, cy - r), (cx + r, cy + r), (cx - r, cy + r)]


def signed_distance(point: Sequence[float], half_plane: HalfPlaneCoeffs) -> float:
    nx, ny, c = half_plane
    return nx * point[0] + ny * point[1] + c


def clip_half_plane(polygon: Polygon, half_plane: HalfPlaneCoeffs, tol: float = 0.0) -> Polygon:
    """Sutherland–Hodgman 法で1本の半平面に対してクリップ

    距離が -tol 以上の頂点は内側とみなす（境界上の頂点を重複させない）
    """
    if not polygon:
        return []

    values = [signed_distance(p, half_plane) for p in polygon]
    if all(v >= -tol for v in values):
        return list(polygon)
    if all(v < -tol for v in values):
        return []

    out: Polygon = []
    previous, v_prev = polygon[-1], values[-1]
    for current, v_cur in zip(polygon, values, strict=True):
        cur_in = v_cur >= -tol
        prev_in = v_prev >= -tol
        if cur_in != prev_in:
            t = v_prev / (v_prev - v_cur)
            out.append(
                (
                    previous[0] + t * (current[0] - previous[0]),
                    previous[1] + t * (current[1] - previous[1]),
                )
            )
        if cur_in:
            out.append(current)
        previous, v_prev = current, v_cur
    return out


def clip_polygon(
    polygon: Polygon, half_planes: Iterable[HalfPlaneCoeffs], tol: float = 0.0
) -> Polygon:
    """半平面の共通部分に対して順にクリップ"""
    out = list(polygon)
    for half_plane in half_planes:
        out = clip_half_plane(out, half_plane, tol)
        if not out:
            break
    return out


def area_and_centroid(polygon: Polygon) -> tuple[float, Vertex]:
    """靴紐公式による面積と重心（頂点3未満または面積0なら (0, 先頭頂点)）"""
    n = len(polygon)
    if n < 3:
        return 0.0, polygon[0] if polygon else (0.0, 0.0)

    # 桁落ちを避けるため先頭頂点を原点に平行移動して計算
    ox, oy = polygon[0]
    twice_area = 0.0
    cx = 0.0
    cy = 0.0
    for i in range(n):
        x1, y1 = polygon[i][0] - ox, polygon[i][1] - oy
        x2, y2 = polygon[(i + 1) % n][0] - ox, polygon[(i + 1) % n][1] - oy
        cross = x1 * y2 - x2 * y1
        twice_area += cross
        cx += (x1 + x2) * cross
        cy += (y1 + y2) * cross

    if twice_area == 0.0:
        return 0.0, polygon[0]
    area = 0.5 * twice_area
    return abs(area), (ox + cx / (6.0 * area), oy + cy / (6.0 * area))


def polygon_area(polygon: Polygon) -> float:
    return area_and_centroid(polygon)[0]


def contains(polygon: Polygon, half_planes: Iterable[HalfPlaneCoeffs], tol: float = 0.0) -> bool:
    """全頂点が半平面の共通部分に入っているか（凸なので多角形全体の包含と同値）"""
    planes = list(half_planes)
    return all(signed_distance(p, hp) >= -tol for p in polygon for hp in planes)
