# -*- coding: utf-8 -*-
"""
命令行入口

用法：
    lfmodel synth --out data/synth --seed 7
    lfmodel fit --manifest data/synth/manifest.json --out out/fit
    lfmodel predict --preset dgdp-annual --manifest data/au/manifest.json
    lfmodel report --manifest m.json --projections p.json --horizon 8 --out out/report

成功时把 JSON 摘要写到 stdout，退出码 0；
失败时把错误记录写到 stderr 与 <out>/error.json，退出码见 docs/cli.md。
日志一律写到 stderr。
"""

import argparse
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from lfmodel import __version__
from lfmodel.core.errors import InvalidArgument
from lfmodel.tools import CommandResult

from api.commands import build_kit
from api.config import settings
from api.models import COMMANDS, RunSpec

logger = logging.getLogger(__name__)


def _csv_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(",") if item.strip()]


def _int_list(text: str) -> List[int]:
    try:
        return [int(item) for item in _csv_list(text)]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"expected comma separated integers: {text}") from e


def build_parser() -> argparse.ArgumentParser:
    kit = build_kit()
    parser = argparse.ArgumentParser(
        prog="lfmodel",
        description="Labour-force driven models of inflation and unemployment.",
        epilog="commands:\n" + kit.get_descriptions(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--version", action="version", version=f"lfmodel {__version__}")

    data = parser.add_argument_group("data")
    data.add_argument("--manifest", help="data manifest JSON")
    data.add_argument("--projections", help="manifest with projected regressors")
    data.add_argument("--from", dest="from_period", help="first reliable period, e.g. 1970 or 1983-04")
    data.add_argument("--frequency", choices=["ANNUAL", "QUARTERLY", "MONTHLY"])

    model = parser.add_argument_group("model")
    model.add_argument("--config", help="fit config JSON")
    model.add_argument("--preset", help="built-in model name")
    model.add_argument("--model", help="fit.json or model JSON")
    model.add_argument("--breaks", type=_csv_list, help="comma separated break periods")
    model.add_argument("--target", help="target role, e.g. UE, DGDP, CPI")
    model.add_argument("--horizon", type=int)
    model.add_argument("--start", help="first forecast period")

    diag = parser.add_argument_group("diagnostics")
    diag.add_argument("--adf-lags", type=int, default=1)
    diag.add_argument("--johansen-lags", type=int, default=2)
    diag.add_argument("--trend", choices=["NONE", "CONSTANT"], default="NONE")
    diag.add_argument(
        "--deterministic", choices=["NONE", "CONSTANT", "CONSTANT_TREND"], default="CONSTANT"
    )

    run = parser.add_argument_group("run")
    run.add_argument("--out", default=settings.output.output_dir)
    run.add_argument("--seed", type=int, default=settings.run.seed)
    run.add_argument("--workers", type=int, default=settings.run.workers)
    run.add_argument("--replications", type=int, default=10_000)
    run.add_argument("--sizes", type=_int_list, help="sample sizes for tables")
    run.add_argument("--length", type=int, default=300, help="synthetic sample length")
    run.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    return parser


def _spec_from_args(args: argparse.Namespace) -> RunSpec:
    fields = vars(args).copy()
    fields.pop("verbose", None)
    try:
        return RunSpec.model_validate(fields)
    except ValidationError as e:
        raise InvalidArgument(f"invalid arguments: {e.errors(include_url=False)}") from e


def _report_failure(result: CommandResult, out: str):
    text = json.dumps(result.error, ensure_ascii=False, sort_keys=True, default=str)
    print(text, file=sys.stderr)
    try:
        path = Path(out)
        path.mkdir(parents=True, exist_ok=True)
        (path / "error.json").write_text(text + "\n", encoding="utf-8")
    except OSError as e:
        logger.warning(f"[CLI] cannot write error.json: {e}")


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else settings.run.log_level,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )

    try:
        spec = _spec_from_args(args)
    except InvalidArgument as e:
        result = CommandResult.fail(e.to_record())
    else:
        result = build_kit().run(spec.command, spec)

    if not result.success:
        _report_failure(result, args.out)
        return result.exit_code

    print(json.dumps({"data": result.data, "files": result.files}, default=str,
                     ensure_ascii=False, indent=2, sort_keys=True))
    return 0


if __name__ == "__main__":
    sys.exit(main())
