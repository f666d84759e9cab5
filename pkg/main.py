# main.py - [v1.0] 平面曲线 Milnor 代数极小自由分解 / 强 Ziegler 对判定
# 子命令：resolve / compare / singular / catalog (list | resolve | verify-all | export)
# 退出码：0 正常 | 1 目录校验失败 | 2 输入错误 | 3 曲线非既约 | 4 未知目录键 | 10 Betti 表不同 | 11 断言等价但表相同

import os
import sys
import argparse
from typing import Any, Dict, List, Optional

from core.catalog import catalog_entries, catalog_entry, export_catalog, verify_all
from core.config_utils import (
    ConfigManager,
    get_config,
    get_logging_config,
    get_output_config,
    validate_config,
)
from core.curvelab import Curve, Verdict, milnor_analysis, singular_report, ziegler_verdict
from core.state import reset_cache
from core.textio import (
    FORMAT_VERSION,
    catalog_list_doc,
    compare_report,
    read_curve_file,
    resolve_report,
    singular_report_doc,
    verify_report,
    write_report,
)
from core.utils import (
    EXIT_DISTINCT,
    EXIT_FAILED,
    EXIT_INCONCLUSIVE,
    EXIT_INPUT,
    EXIT_NON_REDUCED,
    EXIT_OK,
    NonReducedCurveError,
    configure_logging,
    exit_code_for,
    log,
    set_verbose,
)

EPILOG = """exit codes:
  0   success (compare: Betti tables equal, combinatorics not asserted)
  1   catalog verify-all: at least one FAIL row
  2   input error (syntax, schema, degree mismatch, not homogeneous, field mismatch)
  3   curve is not reduced (Hilbert function of S/J does not stabilise)
  4   unknown catalog key
  5   saturation did not stabilise within saturation.max_iterations
  10  compare: Betti tables distinct (StrongZiegler when --assert-combinatorics)
  11  compare: combinatorics asserted and Betti tables equal (Inconclusive)

FILE|KEY arguments naming an existing path are read as curve files,
otherwise they are looked up in the built-in catalog.
"""


# ============ 参数 ============
def _global_flags() -> argparse.ArgumentParser:
    # default=SUPPRESS: 子命令前后都可以写, 互不覆盖
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--json", action="store_true", default=argparse.SUPPRESS,
                   help="machine-readable output (format_version 1)")
    p.add_argument("--check", action="store_true", default=argparse.SUPPRESS,
                   help="enable internal verifications (S-pair re-check, d∘d = 0, Hilbert and Koszul cross-checks)")
    p.add_argument("--cache", action="store_true", default=argparse.SUPPRESS,
                   help="memoise Gröbner bases (sqlite under ZIEGLER_CACHE_DIR when set)")
    p.add_argument("--max-degree", type=int, default=argparse.SUPPRESS,
                   help="Hilbert profile upper degree (default regularity + guard band)")
    p.add_argument("--config", default=argparse.SUPPRESS, help="config file (default config.yaml)")
    p.add_argument("--quiet", action="store_true", default=argparse.SUPPRESS,
                   help="suppress [TAG] progress logging")
    return p


def build_parser() -> argparse.ArgumentParser:
    flags = _global_flags()
    ap = argparse.ArgumentParser(
        prog="ziegler",
        description="Minimal graded free resolutions of Milnor algebras of plane curves.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
        parents=[flags],
    )
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("resolve", parents=[flags], help="minimal resolution and Betti table of M(B)")
    p.add_argument("curve", metavar="FILE|KEY")

    p = sub.add_parser("compare", parents=[flags], help="compare the Betti tables of two curves")
    p.add_argument("a", metavar="A")
    p.add_argument("b", metavar="B")
    p.add_argument("--assert-combinatorics", action="store_true",
                   help="treat A and B as combinatorially equivalent")

    p = sub.add_parser("singular", parents=[flags], help="Tjurina number, Hilbert profile, saturation pieces")
    p.add_argument("curve", metavar="FILE|KEY")

    p = sub.add_parser("catalog", parents=[flags], help="built-in curve catalog")
    csub = p.add_subparsers(dest="catalog_command", required=True)
    csub.add_parser("list", parents=[flags], help="list catalog entries")
    cp = csub.add_parser("resolve", parents=[flags], help="resolve one catalog entry")
    cp.add_argument("key", metavar="KEY")
    csub.add_parser("verify-all", parents=[flags], help="recompute every entry against its expected table")
    cp = csub.add_parser("export", parents=[flags], help="write every entry as a curve file")
    cp.add_argument("directory", metavar="DIR", nargs="?", default=None)
    return ap


# ============ 工具 ============
def load_curve(arg: str) -> Curve:
    """已存在的路径按曲线文件读取, 否则按目录键查找"""
    if os.path.exists(arg):
        return read_curve_file(arg)
    return catalog_entry(arg).curve


def _emit(doc: Dict[str, Any], args: argparse.Namespace) -> None:
    fmt = "machine" if getattr(args, "json", False) else get_output_config()["format"]
    sys.stdout.write(write_report(doc, fmt).decode("utf-8"))
    sys.stdout.flush()


def _unicode() -> bool:
    return bool(get_output_config()["unicode"])


def _apply_flags(args: argparse.Namespace) -> Optional[int]:
    """加载配置 + 命令行覆盖; 配置有错误时返回退出码"""
    manager = ConfigManager()
    if getattr(args, "config", None):
        manager.reload(args.config)
    else:
        get_config()

    if getattr(args, "check", False):
        manager.override("engine", "check", True)
    if getattr(args, "cache", False):
        manager.override("engine", "cache", True)
        reset_cache()

    configure_logging(get_logging_config())
    if getattr(args, "quiet", False):
        set_verbose(False)

    result = validate_config(manager.config)
    for w in result["warnings"]:
        log("CLI", f"⚠️ {w}")
    if result["errors"]:
        for e in result["errors"]:
            print(f"[CLI] ❌ {e}", file=sys.stderr)
        return EXIT_INPUT
    return None


# ============ 子命令 ============
def _resolve_curve(c: Curve, args: argparse.Namespace) -> int:
    a = milnor_analysis(c, getattr(args, "max_degree", None))
    if not a.reduced_ok:
        raise NonReducedCurveError(c.name, a.hilbert_profile)
    _emit(resolve_report(c, a.resolution, a.betti, a.tjurina, a.regularity, _unicode()), args)
    return EXIT_OK


def cmd_resolve(args: argparse.Namespace) -> int:
    return _resolve_curve(load_curve(args.curve), args)


def cmd_compare(args: argparse.Namespace) -> int:
    a, b = load_curve(args.a), load_curve(args.b)
    v = ziegler_verdict(a, b, args.assert_combinatorics, getattr(args, "max_degree", None))
    _emit(compare_report(a.name, b.name, v), args)
    if not v.betti_equal:
        return EXIT_DISTINCT
    if v.verdict == Verdict.INCONCLUSIVE:
        return EXIT_INCONCLUSIVE
    return EXIT_OK


def cmd_singular(args: argparse.Namespace) -> int:
    c = load_curve(args.curve)
    report = singular_report(c, getattr(args, "max_degree", None))
    _emit(singular_report_doc(c, report), args)
    return EXIT_OK if report.reduced_ok else EXIT_NON_REDUCED


def _list_rows() -> List[Dict[str, Any]]:
    return [
        {
            "key": e.key,
            "group": e.group,
            "label": e.combinatorics_label,
            "degree": e.curve.degree,
            "field": e.field.name,
            "components": "+".join(e.curve.labels()),
        }
        for e in catalog_entries()
    ]


def cmd_catalog(args: argparse.Namespace) -> int:
    sub = args.catalog_command
    if sub == "list":
        _emit(catalog_list_doc(_list_rows()), args)
        return EXIT_OK
    if sub == "resolve":
        return _resolve_curve(catalog_entry(args.key).curve, args)
    if sub == "verify-all":
        rows = verify_all(max_degree=getattr(args, "max_degree", None))
        doc = verify_report(rows)
        _emit(doc, args)
        return EXIT_OK if doc["failed"] == 0 else EXIT_FAILED
    if sub == "export":
        paths = export_catalog(args.directory)
        _emit({"format_version": FORMAT_VERSION, "command": "export", "paths": paths}, args)
        return EXIT_OK
    raise ValueError(f"unknown catalog command {sub!r}")


COMMANDS = {
    "resolve": cmd_resolve,
    "compare": cmd_compare,
    "singular": cmd_singular,
    "catalog": cmd_catalog,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    code = _apply_flags(args)
    if code is not None:
        return code
    try:
        return COMMANDS[args.command](args)
    except OSError as e:
        print(f"[CLI] ❌ {e}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as e:
        code = exit_code_for(e)
        if code is None:
            raise
        print(f"[CLI] ❌ {e}", file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
