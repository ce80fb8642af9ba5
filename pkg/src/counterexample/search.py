"""膨張率 ‖x̃1-x1‖² の数値最大化

x0 = 0, x̃0 = e1 を固定し、自由ベクトル k0, k̃0, kh, k̃h を次の無次元変数で表す
（θ = Lh > 0 に対して線形な全単射）:

    a  = h k0                    （第1段の移動量）
    D0 = (k̃0 - k0) / L
    c  = (kh - k0) / L
    Dh = (k̃h - kh) / L = diag(θ², θ, ..., θ) E

目的関数は J = (‖δ1‖² - 1)/θ³ = 2E_1 + θ³E_1² + θ‖E_⊥‖²、制約は L で割った
6本の不等式（第2段内の制約のみさらに θ² で割る）。
"""

import logging
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from src.counterexample.augmented_lagrangian import augmented_lagrangian
from src.counterexample.configuration import configuration_from_slopes
from src.models.configuration import Configuration, ReducedSolution, SearchResult
from src.models.errors import DomainError

logger = logging.getLogger(__name__)

DEFAULT_STARTS = 20
FEASIBILITY_TOL = 1e-10
FIT_STEPS = (0.01, 0.02, 0.05)

_FULL_BLOCKS = ("a", "D0", "c", "E")
_REDUCED_BLOCKS = ("D0", "E")
# 乱数初期値の標準偏差（ブロックごと）
_START_SPREAD = {"a": 2.0, "D0": 0.5, "c": 0.5, "E": 0.5}


class DilationProblem:
    """無次元化した膨張率最大化問題

    reduced=True のときは差分 Δ0, Δh のみを変数とし、段内の2制約だけを課す
    """

    def __init__(self, L: float, h: float, dim: int, reduced: bool = False):
        if not (L > 0 and h > 0):
            raise DomainError(f"L, h は正である必要があります: L={L}, h={h}")
        if dim < 1:
            raise DomainError(f"次元は1以上である必要があります: d={dim}")

        self.L = L
        self.h = h
        self.dim = dim
        self.theta = L * h
        self.reduced = reduced
        self.blocks = _REDUCED_BLOCKS if reduced else _FULL_BLOCKS
        self.n = len(self.blocks) * dim

        self.scale = np.full(dim, self.theta)
        self.scale[0] = self.theta**2
        self._constraints = self._build_constraints()

    def _place(self, parts: dict[str, np.ndarray]) -> np.ndarray:
        """ブロック行列 (d × n) を組み立て"""
        out = np.zeros((self.dim, self.n))
        for name, block in parts.items():
            k = self.blocks.index(name)
            out[:, k * self.dim : (k + 1) * self.dim] = block
        return out

    def block(self, z: np.ndarray, name: str) -> np.ndarray:
        k = self.blocks.index(name)
        return z[k * self.dim : (k + 1) * self.dim]

    def _build_constraints(self) -> list[tuple[np.ndarray, np.ndarray, np.ndarray, float]]:
        """各制約 ‖w‖² + ⟨w, y⟩ ≤ 0（w = Wz, y = Yz + y0）を (W, Y, y0, 重み) で表す"""
        d = self.dim
        eye = np.eye(d)
        e1 = np.zeros(d)
        e1[0] = 1.0
        zero = np.zeros(d)
        s = np.diag(self.scale)
        half_theta = 0.5 * self.theta * eye

        rows = [
            (self._place({"D0": eye}), self._place({}), e1, 1.0),
            (self._place({"E": s}), self._place({"D0": half_theta}), e1, 1.0 / self.theta**2),
        ]
        if not self.reduced:
            rows += [
                (self._place({"c": eye}), self._place({"a": 0.5 * eye}), zero, 1.0),
                (
                    self._place({"D0": -eye, "c": eye, "E": s}),
                    self._place({"a": 0.5 * eye, "D0": half_theta}),
                    zero,
                    1.0,
                ),
                (
                    self._place({"c": eye, "E": s}),
                    self._place({"a": 0.5 * eye, "D0": half_theta}),
                    e1,
                    1.0,
                ),
                (self._place({"D0": -eye, "c": eye}), self._place({"a": 0.5 * eye}), -e1, 1.0),
            ]
        return rows

    def constraints(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """正規化した制約値とヤコビアン"""
        values = np.empty(len(self._constraints))
        jac = np.empty((len(self._constraints), self.n))
        for i, (w_map, y_map, y0, weight) in enumerate(self._constraints):
            w = w_map @ z
            y = y_map @ z + y0
            values[i] = weight * (w @ w + w @ y)
            jac[i] = weight * (2.0 * w_map.T @ w + w_map.T @ y + y_map.T @ w)
        return values, jac

    def gain(self, z: np.ndarray) -> float:
        """J = (‖δ1‖² - 1)/θ³"""
        dh = self.scale * self.block(z, "E")
        return float(2.0 * dh[0] / self.theta**2 + dh @ dh / self.theta)

    def negative_gain(self, z: np.ndarray) -> tuple[float, np.ndarray]:
        """最小化用の -J と勾配"""
        dh = self.scale * self.block(z, "E")
        direction = 2.0 * dh / self.theta
        direction[0] += 2.0 / self.theta**2
        grad = np.zeros(self.n)
        k = self.blocks.index("E")
        grad[k * self.dim : (k + 1) * self.dim] = -self.scale * direction
        return -self.gain(z), grad

    def differences(self, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        """Δ0 = k̃0 - k0, Δh = k̃h - kh"""
        return self.L * self.block(z, "D0"), self.L * self.scale * self.block(z, "E")

    def to_configuration(self, z: np.ndarray) -> Configuration:
        """変数から構成を復元（全変数版のみ）"""
        if self.reduced:
            raise DomainError("縮約問題の変数からは構成を復元できません")
        k0 = self.block(z, "a") / self.h
        k0_tilde = k0 + self.L * self.block(z, "D0")
        kh = k0 + self.L * self.block(z, "c")
        kh_tilde = kh + self.L * self.scale * self.block(z, "E")
        return configuration_from_slopes(k0, k0_tilde, kh, kh_tilde, self.L, self.h)

    def from_configuration(self, config: Configuration) -> np.ndarray:
        """x0 = 0, x̃0 = e1 の構成を変数に変換（次元が小さければ 0 で埋める）"""
        if config.dim > self.dim:
            raise DomainError(f"構成の次元 {config.dim} が問題の次元 {self.dim} を超えています")

        def padded(name: str) -> np.ndarray:
            out = np.zeros(self.dim)
            out[: config.dim] = config.vector(name)
            return out

        k0, k0t, kh, kht = (padded(n) for n in ("k0", "k0_tilde", "kh", "kh_tilde"))
        parts = {
            "a": self.h * k0,
            "D0": (k0t - k0) / self.L,
            "c": (kh - k0) / self.L,
            "E": (kht - kh) / self.L / self.scale,
        }
        return np.concatenate([parts[name] for name in self.blocks])

    def random_start(self, rng: np.random.Generator) -> np.ndarray:
        return np.concatenate(
            [rng.normal(scale=_START_SPREAD[name], size=self.dim) for name in self.blocks]
        )


def _solve(
    problem: DilationProblem,
    z0: np.ndarray,
    penalty0: float,
    max_outer: int,
    feasibility_tol: float,
) -> tuple[np.ndarray, float, float]:
    """1スタート分の解 (z, J, 最大違反)"""
    result = augmented_lagrangian(
        problem.negative_gain,
        problem.constraints,
        z0,
        penalty0=penalty0,
        max_outer=max_outer,
        tol=feasibility_tol,
    )
    violation = float(max(0.0, problem.constraints(result.x)[0].max()))
    return result.x, problem.gain(result.x), violation


def _multistart(
    problem: DilationProblem,
    seed: int,
    starts: int,
    initial: list[np.ndarray],
    max_workers: int | None,
    penalty0: float,
    max_outer: int,
    feasibility_tol: float,
) -> list[tuple[np.ndarray, float, float]]:
    """初期値ごとに独立に解く（各スタートの乱数は SeedSequence から派生）"""
    children = np.random.SeedSequence(seed).spawn(starts)
    points = list(initial) + [
        problem.random_start(np.random.default_rng(child)) for child in children
    ]

    def task(z0: np.ndarray) -> tuple[np.ndarray, float, float]:
        return _solve(problem, z0, penalty0, max_outer, feasibility_tol)

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        return list(executor.map(task, points))


def _pick_best(
    outcomes: list[tuple[np.ndarray, float, float]], feasibility_tol: float
) -> tuple[int, list[float | None]]:
    """実行可能解の中で J 最大（同値は先頭）。実行可能解がなければ違反最小"""
    values: list[float | None] = [
        gain if violation <= feasibility_tol else None for _, gain, violation in outcomes
    ]
    feasible = [i for i, v in enumerate(values) if v is not None]
    if feasible:
        best = max(feasible, key=lambda i: (values[i], -i))
    else:
        best = min(range(len(outcomes)), key=lambda i: (outcomes[i][2], i))
    return best, values


def maximize_dilation(
    L: float,
    h: float,
    d: int = 2,
    seed: int = 0,
    starts: int = DEFAULT_STARTS,
    initial: Configuration | None = None,
    max_workers: int | None = None,
    penalty0: float = 10.0,
    max_outer: int = 60,
    feasibility_tol: float = FEASIBILITY_TOL,
) -> SearchResult:
    """6本の制約の下で膨張率を最大化（マルチスタート拡張ラグランジュ法）

    大域最適性は保証しない

    Args:
        L: Lipschitz定数
        h: ステップ幅
        d: 次元
        seed: 乱数シード
        starts: 乱数スタート数
        initial: 追加の初期構成（x0 = 0, x̃0 = e1）
        max_workers: 並列スタート数の上限
        penalty0: 初期ペナルティ
        max_outer: 外側反復の上限
        feasibility_tol: 許容制約違反（正規化値）

    Returns:
        SearchResult: 最良の構成と膨張率
    """
    problem = DilationProblem(L, h, d)
    warm = [problem.from_configuration(initial)] if initial is not None else []
    outcomes = _multistart(
        problem, seed, starts, warm, max_workers, penalty0, max_outer, feasibility_tol
    )
    best, values = _pick_best(outcomes, feasibility_tol)
    z, gain, violation = outcomes[best]

    feasible = sum(v is not None for v in values)
    if feasible < len(outcomes):
        logger.warning(f"実行不可能なまま終了したスタート: {len(outcomes) - feasible}/{len(outcomes)}")

    theta = problem.theta
    ratio = 1.0 + theta**3 * gain
    logger.info(
        f"膨張率最大化: d={d}, L={L}, h={h} -> ratio-1={ratio - 1.0:.6e}, "
        f"(ratio-1)/(Lh)³={gain:.6f}"
    )
    return SearchResult(
        configuration=problem.to_configuration(z),
        ratio=ratio,
        gain=gain,
        dim=d,
        starts=len(outcomes),
        feasible_starts=feasible,
        max_violation=violation,
        start_values=values,
    )


def reduced_maximization(
    L: float,
    h: float,
    seed: int = 0,
    starts: int = 8,
    max_workers: int | None = None,
    feasibility_tol: float = FEASIBILITY_TOL,
) -> ReducedSolution:
    """差分 Δ0, Δh のみの縮約問題を解き、主要項の閉形式と並べて返す

    Raises:
        DomainError: Lh > 1（主要項の比較が意味を持たない）
    """
    if L * h > 1.0:
        raise DomainError(f"縮約問題は Lh ≤ 1 で扱います: Lh={L * h}")

    problem = DilationProblem(L, h, 2, reduced=True)
    outcomes = _multistart(problem, seed, starts, [], max_workers, 10.0, 60, feasibility_tol)
    best, _ = _pick_best(outcomes, feasibility_tol)
    z, gain, _ = outcomes[best]

    delta0, delta_h = problem.differences(z)
    slack = -problem.constraints(z)[0]
    theta = problem.theta
    return ReducedSolution(
        delta0=tuple(float(v) for v in delta0),
        delta_h=tuple(float(v) for v in delta_h),
        value=1.0 + theta**3 * gain,
        slacks=(float(slack[0]), float(slack[1])),
        leading_delta0=(-L / 2.0, L / 2.0),
        leading_delta_h=(L**3 * h**2 / 64.0, -(L**2) * h / 8.0),
        reflected_delta0=(-L / 2.0, -L / 2.0),
        reflected_delta_h=(L**3 * h**2 / 64.0, L**2 * h / 8.0),
    )


def fit_cubic_coefficient(
    L: float,
    steps: tuple[float, ...] = FIT_STEPS,
    d: int = 2,
    seed: int = 0,
    starts: int = DEFAULT_STARTS,
    max_workers: int | None = None,
) -> tuple[float, list[SearchResult]]:
    """(max ratio - 1) ≈ C (Lh)³ の係数 C を最小二乗で推定

    Args:
        steps: h·L の値の列

    Returns:
        (係数 C, 各ステップの探索結果)
    """
    results = [
        maximize_dilation(L, step / L, d=d, seed=seed, starts=starts, max_workers=max_workers)
        for step in steps
    ]
    theta3 = np.array([(r.configuration.L * r.configuration.h) ** 3 for r in results])
    excess = np.array([r.gain for r in results]) * theta3
    coefficient = float(theta3 @ excess / (theta3 @ theta3))
    logger.info(f"3次係数フィット: C={coefficient:.6f} (d={d})")
    return coefficient, results
