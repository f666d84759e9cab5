# core/catalog.py - 曲线目录 (17 条) + 复现校验
# -*- coding: utf-8 -*-
"""
目录里每条曲线都以解析器文法的源串保存, 载入时解析:
- 系数按原样抄录 (分数保留, 不通分), 规范化交给下游
- 二次域条目用 'r' 表示 √2
- group 把同一 Zariski 组的成员绑在一起, 组内两两断言组合等价

verify(entry) 重新计算 Betti 表并与期望表比对, 失败写进报告行, 从不抛异常。
"""

import os
import threading
import time
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field as dc_field, replace
from itertools import combinations
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .config_utils import get_catalog_config
from .curvelab import (
    Component,
    Curve,
    Verdict,
    census_check,
    milnor_analysis,
    tjurina_from_betti,
)
from .resolution import BettiTable
from .scalars import QQ, Field, QuadraticField
from .textio import betti_to_triples, parse_poly, write_curve_file
from .utils import CurveSchemaError, UnknownCatalogKeyError, log

SQRT2 = QuadraticField(2)


@dataclass(frozen=True)
class CatalogEntry:
    key: str
    curve: Curve
    combinatorics_label: str
    expected_betti: Optional[BettiTable]
    group: str
    # 分支标签 -> 源串
    sources: Dict[str, str] = dc_field(default_factory=dict)
    note: str = ""

    @property
    def field(self) -> Field:
        return self.curve.field


# ==================== 分支源串 ====================
# 六尖点六次曲线
SEXTIC_B1 = "(x^2 + y^2 + z^2)^3 + (x^3 + y^3 + z^3)^2"
SEXTIC_B2 = ("x^6 - x^4*y^2 + 1/3*x^2*y^4 - 1/27*y^6 + 2*x^3*y^2*z - 2*x^4*z^2"
             " - 5/3*x^2*y^2*z^2 - 2/9*y^4*z^2 + 4/3*x^2*z^4 + 5/9*y^2*z^4 - 8/27*z^6")

# Cmb123, 定义在 Q(√2) 上
CMB123 = {
    "C": ("conic", "-x^2 + y*z"),
    "L1": ("line", "3*x + y + 2*z"),
    "L2": ("line", "-3*x + y + 2*z"),
    "D": ("conic", "(12*r - 18)*x^2 + (-36*r + 51)*x*z + y*z + (24*r - 34)*z^2"),
    "M1": ("line", "2*r*x + y + 2*z"),
    "M2": ("line", "-2*r*x + y + 2*z"),
}

CMB124 = {
    "C": ("conic", "-x^2 + y*z"),
    "L1": ("line", "3*x + y + 2*z"),
    "L2": ("line", "-3*x + y + 2*z"),
    "D": ("conic", "-9/8*x^2 + y*z"),
    "M1": ("line", "-x + y - 2*z"),
    "M2": ("line", "y - z"),
}

CMB212 = {
    "C1": ("conic", "x^2 + x*y + y^2 - 27/4*z^2"),
    "C2": ("conic", "676*x^2 + 764*x*y + 676*y^2 - 4563*z^2"),
    "M0": ("line", "y"),
    "M1": ("line", "15*x + 8*y - 39*z"),
    "M2": ("line", "15*x + 8*y + 39*z"),
    "M3": ("line", "8*x + 15*y - 39*z"),
}

CMB223 = {
    "C1": ("conic", "-x^2 + y*z"),
    "C2": ("conic", "-10*x*y + y^2 + 25*y*z - 36*z^2"),
    "D": ("conic", "-5/4*x^2 + 2*x*z + y*z - 3*z^2"),
    "M1": ("line", "-32/5*x + y + 256/25*z"),
    "M2": ("line", "y"),
    "M3": ("line", "-10*x + y + 25*z"),
    "M4": ("line", "-18/5*x + y + 81/25*z"),
}

CMB224 = {
    "C1": ("conic", "-x^2 + y*z + 2*z^2"),
    "C2": ("conic", "x^2 + y^2 - 2*y*z - 4*z^2"),
    "D": ("conic", "-1/2*x^2 + y*z + 2*z^2"),
    "M1": ("line", "-x + y"),
    "M2": ("line", "-3*x + y + 4*z"),
}


# ==================== 期望 Betti 表 ====================
def _table(*triples: Tuple[int, int, int]) -> BettiTable:
    return BettiTable({(i, j): b for i, j, b in triples})


BETTI_SEXTIC_B1 = _table((0, 0, 1), (1, 5, 3), (2, 8, 1), (2, 10, 3), (3, 11, 1), (3, 12, 1))
BETTI_SEXTIC_B2 = _table((0, 0, 1), (1, 5, 3), (2, 9, 2), (2, 10, 3), (3, 11, 3))
BETTI_DEG7_FIRST = _table((0, 0, 1), (1, 6, 3), (2, 9, 1), (2, 10, 1), (2, 11, 1), (3, 12, 1))
BETTI_DEG7_SECOND = _table((0, 0, 1), (1, 6, 3), (2, 10, 4), (3, 11, 2))
BETTI_B51 = _table((0, 0, 1), (1, 6, 3), (2, 9, 1), (2, 10, 1), (2, 12, 1), (3, 13, 1))
BETTI_B52 = _table((0, 0, 1), (1, 6, 3), (2, 10, 3), (2, 11, 1), (3, 11, 1), (3, 12, 1))
BETTI_B4 = _table((0, 0, 1), (1, 6, 3), (2, 10, 3), (3, 12, 1))
BETTI_DEG8_B1 = _table((0, 0, 1), (1, 7, 3), (2, 11, 1), (2, 12, 2), (3, 14, 1))
BETTI_DEG8_B23 = _table((0, 0, 1), (1, 7, 3), (2, 12, 5), (3, 13, 3))

CENSUS_SEXTIC = {"cusp": 6}
CENSUS_DEG8 = {"node": 7, "tacnode": 6, "triple": 2}


# ==================== 组装 ====================
def _build(key: str, fld: Field, pieces: Dict[str, Tuple[str, str]], labels: Sequence[str],
           label: str, expected: Optional[BettiTable], group: str, note: str = "") -> CatalogEntry:
    comps = []
    sources = {}
    for lab in labels:
        kind, src = pieces[lab]
        comps.append(Component(lab, kind, parse_poly(src, fld)))
        sources[lab] = src
    return CatalogEntry(key, Curve(key, fld, comps), label, expected, group, sources, note)


# (key, 域, 分支表, 分支标签, 组合标签, 期望表, 组, 说明)
_ENTRY_TABLE = [
    ("sextic-B1", QQ, {"B": ("sextic-irreducible", SEXTIC_B1)}, ["B"],
     "sextic-6-cusps", BETTI_SEXTIC_B1, "sextic", "six cusps on a conic"),
    ("sextic-B2", QQ, {"B": ("sextic-irreducible", SEXTIC_B2)}, ["B"],
     "sextic-6-cusps", BETTI_SEXTIC_B2, "sextic", "six cusps not on a conic"),
    ("deg7-B1,1", SQRT2, CMB123, ["C", "L1", "L2", "D", "M1"], "Cmb123", BETTI_DEG7_FIRST, "deg7-B1"),
    ("deg7-B1,2", SQRT2, CMB123, ["C", "L1", "L2", "D", "M2"], "Cmb123", BETTI_DEG7_SECOND, "deg7-B1"),
    ("deg7-B2,1", QQ, CMB124, ["C", "L1", "L2", "D", "M1"], "Cmb124", BETTI_DEG7_FIRST, "deg7-B2"),
    ("deg7-B2,2", QQ, CMB124, ["C", "L1", "L2", "D", "M2"], "Cmb124", BETTI_DEG7_SECOND, "deg7-B2"),
    ("deg7-B3,1", QQ, CMB212, ["C1", "C2", "M0", "M1", "M2"], "Cmb212", BETTI_DEG7_FIRST, "deg7-B3"),
    ("deg7-B3,2", QQ, CMB212, ["C1", "C2", "M0", "M1", "M3"], "Cmb212", BETTI_DEG7_SECOND, "deg7-B3"),
    ("deg7-B4,1", QQ, CMB223, ["C1", "C2", "D", "M1"], "Cmb223", BETTI_B4, "deg7-B4"),
    ("deg7-B4,2", QQ, CMB223, ["C1", "C2", "D", "M2"], "Cmb223", BETTI_B4, "deg7-B4"),
    ("deg7-B4,3", QQ, CMB223, ["C1", "C2", "D", "M3"], "Cmb223", BETTI_B4, "deg7-B4"),
    ("deg7-B4,4", QQ, CMB223, ["C1", "C2", "D", "M4"], "Cmb223", BETTI_B4, "deg7-B4"),
    ("deg7-B5,1", QQ, CMB224, ["C1", "C2", "D", "M1"], "Cmb224", BETTI_B51, "deg7-B5"),
    ("deg7-B5,2", QQ, CMB224, ["C1", "C2", "D", "M2"], "Cmb224", BETTI_B52, "deg7-B5"),
    ("deg8-B1", QQ, CMB223, ["C1", "C2", "D", "M1", "M2"], "cmb223-plus-bitangent", BETTI_DEG8_B1, "deg8"),
    ("deg8-B2", QQ, CMB223, ["C1", "C2", "D", "M1", "M3"], "cmb223-plus-bitangent", BETTI_DEG8_B23, "deg8"),
    ("deg8-B3", QQ, CMB223, ["C1", "C2", "D", "M3", "M4"], "cmb223-plus-bitangent", BETTI_DEG8_B23, "deg8"),
]

_ENTRIES_LOCK = threading.Lock()
_ENTRIES: Dict[str, List[CatalogEntry]] = {}


def catalog_entries() -> List[CatalogEntry]:
    """全部 17 条, 固定顺序"""
    with _ENTRIES_LOCK:
        if "all" not in _ENTRIES:
            _ENTRIES["all"] = [_build(*row) for row in _ENTRY_TABLE]
        return list(_ENTRIES["all"])


def catalog_keys() -> List[str]:
    return [row[0] for row in _ENTRY_TABLE]


def catalog_entry(key: str) -> CatalogEntry:
    for e in catalog_entries():
        if e.key == key:
            return e
    raise UnknownCatalogKeyError(key)


def catalog_groups() -> Dict[str, List[str]]:
    groups: Dict[str, List[str]] = {}
    for e in catalog_entries():
        groups.setdefault(e.group, []).append(e.key)
    return groups


def expected_verdicts() -> List[Tuple[str, str, Verdict]]:
    """组内两两: 期望表不同 => StrongZiegler, 相同 => Inconclusive"""
    out = []
    by_key = {e.key: e for e in catalog_entries()}
    for keys in catalog_groups().values():
        for ka, kb in combinations(keys, 2):
            same = by_key[ka].expected_betti == by_key[kb].expected_betti
            out.append((ka, kb, Verdict.INCONCLUSIVE if same else Verdict.STRONG_ZIEGLER))
    return out


def census(entry: CatalogEntry) -> Optional[Dict[str, int]]:
    if entry.group == "sextic":
        return dict(CENSUS_SEXTIC)
    if entry.group == "deg8":
        return dict(CENSUS_DEG8)
    return None


def corrupt(entry: CatalogEntry, component_label: str, new_poly: str) -> CatalogEntry:
    """替换一个分支的多项式, 期望表不变 (负对照)"""
    if component_label not in entry.curve.labels():
        raise CurveSchemaError(f"components.{component_label}", "no such component")
    comps = []
    for comp in entry.curve.components:
        if comp.label == component_label:
            comp = Component(comp.label, comp.kind, parse_poly(new_poly, entry.field))
        comps.append(comp)
    sources = dict(entry.sources)
    sources[component_label] = new_poly
    curve = Curve(entry.key, entry.field, comps)
    return replace(entry, curve=curve, sources=sources, note="corrupted")


# ==================== 校验 ====================
def verify(entry: CatalogEntry, max_degree: Optional[int] = None) -> Dict[str, Any]:
    row: Dict[str, Any] = {
        "key": entry.key,
        "group": entry.group,
        "label": entry.combinatorics_label,
        "status": "FAIL",
        "betti": [],
        "expected": betti_to_triples(entry.expected_betti) if entry.expected_betti else [],
        "tjurina": None,
        "reduced": None,
        "message": "",
    }
    try:
        a = milnor_analysis(entry.curve, max_degree)
    except Exception as e:
        row["message"] = f"{type(e).__name__}: {e}"
        log("CATALOG", f"❌ {entry.key}: {row['message']}")
        return row

    row["betti"] = betti_to_triples(a.betti)
    row["tjurina"] = a.tjurina
    row["reduced"] = a.reduced_ok
    problems = []
    if not a.reduced_ok:
        problems.append("non-reduced (Hilbert profile does not stabilise)")
    if entry.expected_betti is not None and a.betti != entry.expected_betti:
        problems.append("Betti table differs from the expected one")
    if a.reduced_ok and tjurina_from_betti(a.betti) != a.tjurina:
        problems.append("Betti numerator disagrees with the Hilbert function")
    counts = census(entry)
    if counts is not None and a.reduced_ok:
        ok, tau, want = census_check(entry.curve, counts, analysis=a)
        if not ok:
            problems.append(f"singularity census expects tjurina {want}, got {tau}")

    if problems:
        row["message"] = "; ".join(problems)
        log("CATALOG", f"❌ {entry.key}: {row['message']}")
    else:
        row["status"] = "PASS"
        log("CATALOG", f"✅ {entry.key}: PASS (τ = {a.tjurina})")
    return row


def verify_all(entries: Optional[Sequence[CatalogEntry]] = None, workers: Optional[int] = None,
               max_degree: Optional[int] = None) -> List[Dict[str, Any]]:
    """并发校验; 输出顺序与目录顺序一致, 与完成顺序无关"""
    entries = list(entries) if entries is not None else catalog_entries()
    workers = workers or get_catalog_config()["workers"]
    order = {e.key: k for k, e in enumerate(entries)}
    rows: List[Dict[str, Any]] = []

    log("CATALOG", f"🚀 正在校验 {len(entries)} 条曲线（{workers}线程）...")
    start_time = time.time()
    with ThreadPoolExecutor(max_workers=workers) as executor:
        futures = {executor.submit(verify, e, max_degree): e.key for e in entries}
        for future in as_completed(futures):
            rows.append(future.result())

    rows.sort(key=lambda r: order[r["key"]])
    passed = sum(1 for r in rows if r["status"] == "PASS")
    elapsed = time.time() - start_time
    log("CATALOG", f"✅ 完成：{passed}/{len(rows)} PASS，耗时 {elapsed:.1f}秒")
    return rows


def export_file_name(key: str) -> str:
    return key.replace(",", "_") + ".json"


def export_catalog(directory: Optional[str] = None) -> List[str]:
    directory = directory or get_catalog_config()["data_dir"]
    os.makedirs(directory, exist_ok=True)
    paths = []
    for e in catalog_entries():
        path = os.path.join(directory, export_file_name(e.key))
        write_curve_file(e.curve, path)
        paths.append(path)
    log("CATALOG", f"💾 已导出 {len(paths)} 个曲线文件到 {directory}")
    return paths
