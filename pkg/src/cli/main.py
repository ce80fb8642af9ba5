"""コマンドラインインターフェース

サブコマンド:
    tableau-check   M̄(h) の半正定値判定
    interval        凸縮小性区間 (0, h_max] の計算
    counterexample  Runge 法の非縮小構成（--smooth で平滑化ポテンシャル上の検証）
    search          膨張率の数値最大化と 3次係数のフィット
    schema          各コマンドの出力JSONスキーマ

終了コード: 0 成功、2 入力エラー、3 数値エラー、4 構成の範囲外
"""

import argparse
import csv
import io
import logging
import sys
from collections.abc import Callable, Sequence
from datetime import datetime, timezone
from pathlib import Path

import numpy as np
import yaml
from pydantic import BaseModel, ValidationError

from src import __version__
from src.certify.interval import contractivity_interval
from src.certify.psd import check_psd
from src.core.matrices import mbar_matrix
from src.core.tableau import available_tableaux, load_tableau, named_tableau
from src.counterexample.configuration import (
    check_constraints,
    dilation,
    figure_data,
    growth_formula,
    paper_configuration,
    rescaled_configuration,
)
from src.counterexample.search import fit_cubic_coefficient, maximize_dilation
from src.models.config import Config
from src.models.errors import ConsistencyError, DomainError, RKContractivityError, ShapeError
from src.models.results import (
    COMMAND_MODELS,
    ArtifactRecord,
    CounterexampleResult,
    IntervalResult,
    RunManifest,
    SearchReport,
    TableauCheckResult,
)
from src.models.tableau import ButcherTableau
from src.potential.mollified import build_counterexample_potential, sample_grid
from src.potential.pwl import limit_potential, tessellation_segments
from src.potential.witness import witness_noncontractivity
from src.utils.export import (
    figure_csv,
    figure_svg,
    segments_csv,
    sha256_of_file,
    tessellation_svg,
    to_json,
    write_figure_csv,
    write_figure_svg,
    write_grid_csv,
    write_json,
    write_segments_csv,
    write_tessellation_svg,
)
from src.utils.logging_setup import setup_logging

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_NUMERICAL = 3
EXIT_INFEASIBLE = 4

CONFIG_PATH = Path("config/config.yaml")
GRID_SAMPLES = 41

CSV_HELP = """CSV列:
  interval        h, min_eigenvalue, is_psd
  counterexample  kind, label, x, y, dx, dy（点と 0.8·h·k の矢印）
  counterexample --smooth  region_i, region_j, x0, y0, x1, y1（領域境界の線分）
  tessellation_limit.csv   L′h → 0 の極限の領域境界（列は同上）
  potential_grid.csv       x, y, V, dV_dx, dV_dy
"""


class InputError(RKContractivityError, ValueError):
    """コマンドライン引数の不正"""


Handler = Callable[[argparse.Namespace, Config], int]


def _positive(name: str, value: float | None) -> float:
    if value is None:
        raise InputError(f"--{name} を指定してください")
    if not (np.isfinite(value) and value > 0):
        raise InputError(f"--{name} は正の有限値である必要があります: {value}")
    return float(value)


def _resolve_tableau(spec: str | None) -> ButcherTableau:
    """ファイルパスまたは登録済みスキーム名からテーブルを取得"""
    if spec is None:
        raise InputError("--tableau を指定してください")
    path = Path(spec)
    if path.exists():
        return load_tableau(path)
    if spec in available_tableaux():
        return named_tableau(spec)
    raise FileNotFoundError(
        f"テーブルが見つかりません: {spec}（登録済み: {', '.join(available_tableaux())}）"
    )


class _Output:
    """stdout への出力と --out ディレクトリへの成果物書き出し"""

    def __init__(
        self, args: argparse.Namespace, config: Config, formats: Sequence[str] = ("json",)
    ):
        if args.format not in formats:
            raise InputError(f"{args.command} は --format {args.format} に対応していません")
        self.args = args
        self.config = config
        self.out_dir: Path | None = Path(args.out) if args.out else None
        self.written: list[Path] = []
        if self.out_dir is not None:
            self.out_dir.mkdir(parents=True, exist_ok=True)

    def file(self, name: str, writer: Callable[[Path], None]) -> None:
        if self.out_dir is None:
            return
        path = self.out_dir / name
        writer(path)
        self.written.append(path)

    def finish(self, result: BaseModel, text: dict[str, str]) -> None:
        """結果を書き出して --format に応じた内容を stdout に出力"""
        payload = result.model_dump(mode="json")
        self.file("result.json", lambda p: write_json(p, payload))
        if self.out_dir is not None:
            self._write_manifest()

        fmt = self.args.format
        if fmt == "json":
            print(to_json(payload))
        else:
            sys.stdout.write(text[fmt])

    def _write_manifest(self) -> None:
        assert self.out_dir is not None
        parameters = {
            key: (str(value) if isinstance(value, Path) else value)
            for key, value in vars(self.args).items()
            if key not in {"handler", "config", "out"}
        }
        parameters["settings"] = self.config.model_dump(mode="json", exclude={"logging"})
        manifest = RunManifest(
            command=self.args.command,
            parameters=parameters,
            artifacts=[
                ArtifactRecord(
                    path=path.name, sha256=sha256_of_file(path), size=path.stat().st_size
                )
                for path in self.written
            ],
            version=__version__,
            created_at=datetime.now(timezone.utc),
        )
        write_json(self.out_dir / "manifest.json", manifest.model_dump(mode="json"))
        logger.info(f"成果物出力: {self.out_dir} ({len(self.written)}ファイル + manifest.json)")


def cmd_tableau_check(args: argparse.Namespace, config: Config) -> int:
    tableau = _resolve_tableau(args.tableau)
    L = _positive("L", args.L)
    h = _positive("h", args.h)

    matrix = mbar_matrix(tableau, h, L)
    verdict = check_psd(matrix.matrix, tolerance_scale=config.certify.tolerance_scale)
    result = TableauCheckResult(
        tableau=tableau.name,
        s=tableau.s,
        explicit=tableau.explicit,
        L=L,
        h=h,
        matrix=[list(row) for row in matrix.entries],
        min_eigenvalue=verdict.min_eigenvalue,
        tolerance=verdict.tolerance_used,
        is_psd=verdict.is_psd,
    )
    _Output(args, config).finish(result, {})
    return EXIT_OK


def cmd_interval(args: argparse.Namespace, config: Config) -> int:
    tableau = _resolve_tableau(args.tableau)
    L = _positive("L", args.L)
    cfg = config.certify

    interval = contractivity_interval(
        tableau,
        L,
        grid_points=cfg.grid_points,
        bisection_iterations=cfg.bisection_iterations,
        cap_factor=cfg.cap_factor,
        infinity_samples=cfg.infinity_samples,
        tolerance_scale=cfg.tolerance_scale,
    )
    result = IntervalResult(tableau=tableau.name, **interval.to_dict())

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(["h", "min_eigenvalue", "is_psd"])
    for sample in interval.min_eig_samples:
        writer.writerow([repr(sample.h), repr(sample.min_eigenvalue), sample.is_psd])
    samples_csv = buffer.getvalue()

    output = _Output(args, config, formats=("json", "csv"))
    output.file("samples.csv", lambda p: p.write_text(samples_csv, encoding="utf-8"))
    output.finish(result, {"csv": samples_csv})
    return EXIT_OK


def cmd_counterexample(args: argparse.Namespace, config: Config) -> int:
    L = _positive("L", args.L)
    h = _positive("h", args.h)
    output = _Output(args, config, formats=("json", "csv", "svg"))

    if not args.smooth:
        configuration = paper_configuration(L, h)
        figure = figure_data(configuration)
        result = CounterexampleResult(
            L=L,
            h=h,
            smooth=False,
            configuration=configuration,
            rescaled=rescaled_configuration(configuration),
            constraints=check_constraints(configuration),
            dilation=dilation(configuration),
            growth_formula=growth_formula(L, h),
            figure=figure,
        )
        output.file("figure.csv", lambda p: write_figure_csv(p, figure))
        output.file("figure.svg", lambda p: write_figure_svg(p, figure))
        output.finish(result, {"csv": figure_csv(figure), "svg": figure_svg(figure)})
        return EXIT_OK

    settings = config.potential
    if args.seed is not None:
        settings = settings.model_copy(update={"seed": args.seed})
    potential = build_counterexample_potential(L, h, settings)
    witness = witness_noncontractivity(L, h, potential=potential)
    anchors = potential.base.anchors()
    margin = 1.0
    bounds = (
        float(anchors[:, 0].min() - margin),
        float(anchors[:, 0].max() + margin),
        float(anchors[:, 1].min() - margin),
        float(anchors[:, 1].max() + margin),
    )
    segments = tessellation_segments(potential.base, bounds)
    limit = limit_potential()
    limit_segments = tessellation_segments(limit, bounds)
    result = CounterexampleResult(L=L, h=h, smooth=True, witness=witness)

    output.file("tessellation.csv", lambda p: write_segments_csv(p, segments))
    output.file("tessellation.svg", lambda p: write_tessellation_svg(p, segments, anchors, bounds))
    output.file("tessellation_limit.csv", lambda p: write_segments_csv(p, limit_segments))
    output.file(
        "tessellation_limit.svg",
        lambda p: write_tessellation_svg(p, limit_segments, limit.anchors(), bounds),
    )
    output.file(
        "potential_grid.csv",
        lambda p: write_grid_csv(p, sample_grid(potential, bounds, GRID_SAMPLES)),
    )
    output.finish(
        result,
        {
            "csv": segments_csv(segments),
            "svg": tessellation_svg(segments, anchors, bounds),
        },
    )
    return EXIT_OK


def cmd_search(args: argparse.Namespace, config: Config) -> int:
    L = _positive("L", args.L)
    h = _positive("h", args.h) if args.h is not None else 0.01 / L
    if args.dim < 1:
        raise InputError(f"--dim は1以上である必要があります: {args.dim}")
    cfg = config.search
    seed = args.seed if args.seed is not None else cfg.seed
    starts = args.starts if args.starts is not None else cfg.starts

    best = maximize_dilation(
        L,
        h,
        d=args.dim,
        seed=seed,
        starts=starts,
        max_workers=config.threads,
        penalty0=cfg.penalty0,
        max_outer=cfg.max_outer,
        feasibility_tol=cfg.feasibility_tol,
    )
    report = SearchReport(L=L, h=h, dim=args.dim, seed=seed, best=best)
    if not args.no_fit:
        coefficient, results = fit_cubic_coefficient(
            L, tuple(cfg.fit_steps), d=args.dim, seed=seed, starts=starts, max_workers=config.threads
        )
        report = report.model_copy(
            update={
                "coefficient": coefficient,
                "fit_steps": list(cfg.fit_steps),
                "fit_gains": [r.gain for r in results],
            }
        )

    _Output(args, config).finish(report, {})
    return EXIT_OK


def cmd_schema(args: argparse.Namespace, config: Config) -> int:
    names = [args.schema_command] if args.schema_command else list(COMMAND_MODELS)
    schemas = {name: COMMAND_MODELS[name].model_json_schema() for name in names}
    print(to_json(schemas))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    """引数パーサーを構築"""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, default=None, help="設定YAMLファイル")
    common.add_argument("--log-level", default=None, help="ログレベル（設定ファイルより優先）")
    common.add_argument("--out", type=Path, default=None, help="成果物の出力ディレクトリ")
    common.add_argument(
        "--format", choices=["json", "csv", "svg"], default="json", help="標準出力の形式"
    )
    common.add_argument("--seed", type=int, default=None, help="乱数シード")

    parser = argparse.ArgumentParser(
        prog="rkcontract",
        description="Runge-Kutta法の凸縮小性の証明と非縮小性の反例構成",
        epilog=CSV_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("tableau-check", parents=[common], help="M̄(h) の半正定値判定")
    p.add_argument("--tableau", required=True, help="テーブルJSONのパスまたはスキーム名")
    p.add_argument("--L", type=float, required=True, help="Lipschitz定数")
    p.add_argument("--h", type=float, required=True, help="ステップ幅")
    p.set_defaults(handler=cmd_tableau_check)

    p = sub.add_parser("interval", parents=[common], help="凸縮小性区間の計算")
    p.add_argument("--tableau", required=True, help="テーブルJSONのパスまたはスキーム名")
    p.add_argument("--L", type=float, required=True, help="Lipschitz定数")
    p.set_defaults(handler=cmd_interval)

    p = sub.add_parser("counterexample", parents=[common], help="Runge法の非縮小構成")
    p.add_argument("--L", type=float, required=True, help="Lipschitz定数")
    p.add_argument("--h", type=float, required=True, help="ステップ幅")
    p.add_argument("--smooth", action="store_true", help="平滑化ポテンシャル上で検証")
    p.set_defaults(handler=cmd_counterexample)

    p = sub.add_parser("search", parents=[common], help="膨張率の数値最大化")
    p.add_argument("--L", type=float, default=1.0, help="Lipschitz定数")
    p.add_argument("--h", type=float, default=None, help="ステップ幅（既定 0.01/L）")
    p.add_argument("--dim", type=int, default=2, help="次元 d")
    p.add_argument("--starts", type=int, default=None, help="マルチスタート数")
    p.add_argument("--no-fit", action="store_true", help="3次係数のフィットを省略")
    p.set_defaults(handler=cmd_search)

    p = sub.add_parser("schema", parents=[common], help="出力JSONスキーマ")
    p.add_argument(
        "schema_command", nargs="?", choices=list(COMMAND_MODELS), help="対象コマンド"
    )
    p.set_defaults(handler=cmd_schema)
    return parser


def _load_config(path: Path | None) -> Config:
    """--config、既定パス config/config.yaml、環境変数の順で設定を解決"""
    if path is not None:
        return Config.from_yaml(path)
    if CONFIG_PATH.exists():
        return Config.from_yaml(CONFIG_PATH)
    return Config()


def main(argv: Sequence[str] | None = None) -> int:
    """エントリーポイント

    Args:
        argv: 引数（省略時は sys.argv）

    Returns:
        int: 終了コード
    """
    parser = build_parser()
    args = parser.parse_args(argv)

    try:
        config = _load_config(args.config)
        if args.log_level:
            config.logging.level = args.log_level
        setup_logging(config.logging)
    except (FileNotFoundError, yaml.YAMLError, ValidationError, ValueError) as e:
        print(f"設定エラー: {e}", file=sys.stderr)
        return EXIT_INPUT

    handler: Handler = args.handler
    try:
        return handler(args, config)
    except (FileNotFoundError, ShapeError, ConsistencyError, InputError) as e:
        logger.error(f"入力エラー: {e}")
        return EXIT_INPUT
    except DomainError as e:
        logger.error(f"構成の範囲外: {e}")
        return EXIT_INFEASIBLE
    except (RKContractivityError, np.linalg.LinAlgError, FloatingPointError) as e:
        logger.error(f"数値エラー: {e}", exc_info=True)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
