# core/textio.py - 多项式解析 / 曲线文件 / 报告序列化
# -*- coding: utf-8 -*-
"""
多项式文法 (必须显式写 '*'):
  expr   := ['+'|'-'] term (('+'|'-') term)*
  term   := factor ('*' factor)*
  factor := primary ('^' nat)*
  primary:= rational | 'x' | 'y' | 'z' | 'r' | '(' expr ')'
  rational := int ('/' int)?
'r' 表示 √d, 只在二次域上合法; 空白忽略。

曲线文件 (UTF-8 JSON):
  {"name": ..., "field": {"kind": "rational"} | {"kind": "quadratic", "d": 2},
   "components": [{"label": ..., "kind": ..., "poly": ...}, ...]}

报告: format_version = 1 的扁平字典, machine 格式为排序键的 JSON。
"""

import json
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import pandas as pd

from .curvelab import (
    KIND_DEGREES,
    Component,
    Curve,
    SingularReport,
    ZieglerVerdict,
    ar_generator_degrees,
)
from .polyring import VARIABLES, Poly
from .resolution import (
    BettiTable,
    FreeResolution,
    betti_numerator,
    render_betti_diagram,
    render_resolution,
)
from .scalars import Field, QQ, QuadExt, QuadraticField, field_of
from .utils import CurveSchemaError, PolySyntaxError

FORMAT_VERSION = 1


# ==================== 词法 ====================
def _tokenize(src: str) -> List[Tuple[str, Any, int]]:
    """(类型, 值, 位置); 类型 ∈ int | var | op | end"""
    tokens = []
    i, n = 0, len(src)
    while i < n:
        ch = src[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and src[j].isdigit():
                j += 1
            tokens.append(("int", int(src[i:j]), i))
            i = j
            continue
        if ch in "xyzr":
            tokens.append(("var", ch, i))
            i += 1
            continue
        if ch in "+-*/^()":
            tokens.append(("op", ch, i))
            i += 1
            continue
        raise PolySyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, n))
    return tokens


# ==================== 语法 ====================
class _Parser:
    def __init__(self, src: str, field: Field):
        self.field = field
        self.tokens = _tokenize(src)
        self.k = 0

    def peek(self):
        return self.tokens[self.k]

    def take(self):
        tok = self.tokens[self.k]
        self.k += 1
        return tok

    def expect_op(self, op: str):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise PolySyntaxError(f"expected '{op}'", pos)

    def parse(self) -> Poly:
        value = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            if kind in ("int", "var") or (kind == "op" and val == "("):
                raise PolySyntaxError("expected operator (implicit multiplication is not supported)", pos)
            raise PolySyntaxError(f"unexpected {val!r}", pos)
        return value

    def expr(self) -> Poly:
        sign = 1
        kind, val, _ = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        value = self.term()
        if sign < 0:
            value = -value
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                value = value + rhs if val == "+" else value - rhs
            else:
                return value

    def term(self) -> Poly:
        value = self.factor()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "*":
                self.take()
                value = value * self.factor()
            else:
                return value

    def factor(self) -> Poly:
        value = self.primary()
        while True:
            kind, val, _ = self.peek()
            if kind == "op" and val == "^":
                self.take()
                k2, exp, pos = self.take()
                if k2 != "int":
                    raise PolySyntaxError("expected a natural exponent", pos)
                value = value ** exp
            else:
                return value

    def primary(self) -> Poly:
        kind, val, pos = self.take()
        if kind == "int":
            nk, nv, _ = self.peek()
            if nk == "op" and nv == "/":
                self.take()
                dk, den, dpos = self.take()
                if dk != "int":
                    raise PolySyntaxError("expected an integer denominator", dpos)
                if den == 0:
                    raise PolySyntaxError("division by zero", dpos)
                return Poly.constant(self.field, Fraction(val, den))
            return Poly.constant(self.field, val)
        if kind == "var":
            if val == "r":
                if self.field.is_rational:
                    raise PolySyntaxError("'r' requires a quadratic field", pos)
                return Poly.constant(self.field, self.field.generator())
            return Poly.variable(self.field, val)
        if kind == "op" and val == "(":
            value = self.expr()
            self.expect_op(")")
            return value
        if kind == "end":
            raise PolySyntaxError("unexpected end of input", pos)
        raise PolySyntaxError(f"unexpected {val!r}", pos)


def parse_poly(src: str, field: Field = QQ) -> Poly:
    if not isinstance(src, str):
        raise PolySyntaxError("expression must be a string", 0)
    return _Parser(src, field).parse()


# ==================== 渲染 ====================
def _monomial_string(m) -> str:
    parts = []
    for v, e in zip(VARIABLES, m):
        if e == 1:
            parts.append(v)
        elif e > 1:
            parts.append(f"{v}^{e}")
    return "*".join(parts)


def _quad_string(c: QuadExt) -> str:
    parts = []
    if c.a:
        parts.append(str(c.a))
    b = c.b
    if b == 1:
        rpart = "r"
    elif b == -1:
        rpart = "-r"
    else:
        rpart = f"{b}*r"
    if parts:
        parts.append(("- " + rpart[1:]) if rpart.startswith("-") else ("+ " + rpart))
    else:
        parts.append(rpart)
    return "(" + " ".join(parts) + ")"


def render_poly(f: Poly) -> str:
    """按 grevlex 降序输出, 结果可被 parse_poly 读回同一个多项式"""
    if f.is_zero():
        return "0"
    out = []
    for k, (c, m) in enumerate(f.terms()):
        mon = _monomial_string(m)
        if isinstance(c, QuadExt) and c.b:
            body = _quad_string(c) + (f"*{mon}" if mon else "")
            sign = "+"
        else:
            q = c.a if isinstance(c, QuadExt) else c
            sign = "-" if q < 0 else "+"
            q = abs(q)
            if mon:
                body = mon if q == 1 else f"{q}*{mon}"
            else:
                body = str(q)
        if k == 0:
            out.append(body if sign == "+" else f"-{body}")
        else:
            out.append(f"{sign} {body}")
    return " ".join(out)


# ==================== 曲线文件 ====================
def document_to_curve(doc: Any) -> Curve:
    if not isinstance(doc, dict):
        raise CurveSchemaError("$", "document must be an object")
    if "name" not in doc:
        raise CurveSchemaError("name", "missing key")
    if not isinstance(doc["name"], str) or not doc["name"]:
        raise CurveSchemaError("name", "must be a non-empty string")
    if "field" not in doc:
        raise CurveSchemaError("field", "missing key")
    fdoc = doc["field"]
    if not isinstance(fdoc, dict):
        raise CurveSchemaError("field", "must be an object")
    kind = fdoc.get("kind")
    if kind not in ("rational", "quadratic"):
        raise CurveSchemaError("field.kind", f"must be 'rational' or 'quadratic', got {kind!r}")
    if kind == "quadratic":
        d = fdoc.get("d")
        if not isinstance(d, int) or isinstance(d, bool):
            raise CurveSchemaError("field.d", "must be an integer")
        try:
            field = QuadraticField(d)
        except ValueError as e:
            raise CurveSchemaError("field.d", str(e)) from e
    else:
        field = field_of(fdoc)

    comps = doc.get("components")
    if comps is None:
        raise CurveSchemaError("components", "missing key")
    if not isinstance(comps, list) or not comps:
        raise CurveSchemaError("components", "must be a non-empty list")
    components = []
    for k, cdoc in enumerate(comps):
        path = f"components[{k}]"
        if not isinstance(cdoc, dict):
            raise CurveSchemaError(path, "must be an object")
        for key in ("label", "kind", "poly"):
            if key not in cdoc:
                raise CurveSchemaError(f"{path}.{key}", "missing key")
            if not isinstance(cdoc[key], str):
                raise CurveSchemaError(f"{path}.{key}", "must be a string")
        if cdoc["kind"] not in KIND_DEGREES:
            raise CurveSchemaError(f"{path}.kind", f"unknown kind '{cdoc['kind']}'")
        try:
            poly = parse_poly(cdoc["poly"], field)
        except PolySyntaxError as e:
            raise CurveSchemaError(f"{path}.poly", str(e)) from e
        components.append(Component(cdoc["label"], cdoc["kind"], poly))
    return Curve(doc["name"], field, components)


def curve_to_document(c: Curve) -> Dict[str, Any]:
    return {
        "name": c.name,
        "field": c.field.descriptor(),
        "components": [
            {"label": comp.label, "kind": comp.kind, "poly": render_poly(comp.poly)}
            for comp in c.components
        ],
    }


def read_curve_file(path: str) -> Curve:
    with open(path, "r", encoding="utf-8") as f:
        text = f.read()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise CurveSchemaError("$", f"invalid JSON: {e.msg} (line {e.lineno})") from e
    return document_to_curve(doc)


def write_curve_file(c: Curve, path: str) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(curve_to_document(c), f, ensure_ascii=False, indent=2)
        f.write("\n")


# ==================== 报告 ====================
def betti_to_triples(B: BettiTable) -> List[List[int]]:
    return [[i, j, b] for i, j, b in B.triples()]


def betti_from_triples(triples: Sequence[Sequence[int]]) -> BettiTable:
    return BettiTable({(int(i), int(j)): int(b) for i, j, b in triples})


def resolve_report(c: Curve, R: FreeResolution, B: BettiTable, tjurina: Optional[int],
                   regularity: int, unicode: bool = True) -> Dict[str, Any]:
    n = betti_numerator(B)
    return {
        "format_version": FORMAT_VERSION,
        "command": "resolve",
        "curve": c.name,
        "field": c.field.descriptor(),
        "degree": c.degree,
        "betti": betti_to_triples(B),
        "resolution": render_resolution(R, unicode=unicode),
        "regularity": regularity,
        "tjurina": tjurina,
        "ar_degrees": ar_generator_degrees(B, c.degree),
        "numerator": {
            "at_one": n.at_one,
            "derivative_at_one": n.derivative_at_one,
            "second_derivative_half": n.second_derivative_half,
        },
    }


def compare_report(name_a: str, name_b: str, v: ZieglerVerdict) -> Dict[str, Any]:
    return {
        "format_version": FORMAT_VERSION,
        "command": "compare",
        "curves": [name_a, name_b],
        "betti": {
            "a": betti_to_triples(v.betti_a) if v.betti_a else [],
            "b": betti_to_triples(v.betti_b) if v.betti_b else [],
        },
        "betti_equal": v.betti_equal,
        "witness": list(v.witness) if v.witness else None,
        "combinatorics_asserted": v.combinatorics_asserted,
        "verdict": v.verdict.value,
        "violations": list(v.assertion_violations),
    }


def singular_report_doc(c: Curve, r: SingularReport) -> Dict[str, Any]:
    return {
        "format_version": FORMAT_VERSION,
        "command": "singular",
        "curve": c.name,
        "reduced": r.reduced_ok,
        "tjurina": r.tjurina,
        "regularity": r.regularity,
        "hilbert_profile": [[t, v] for t, v in r.hilbert_profile],
        "saturated_piece_dims": {str(k): v for k, v in sorted(r.saturated_piece_dims.items())},
        "cusp_locus_dims": {str(k): v for k, v in sorted(r.cusp_locus_dims.items())},
        "cusp_locus_available": r.cusp_locus_available,
        "conic_through_cusps": r.conic_through_cusps,
    }


def verify_report(rows: Sequence[Dict[str, Any]]) -> Dict[str, Any]:
    passed = sum(1 for r in rows if r["status"] == "PASS")
    return {
        "format_version": FORMAT_VERSION,
        "command": "verify-all",
        "rows": list(rows),
        "passed": passed,
        "failed": len(rows) - passed,
    }


def catalog_list_doc(rows: Sequence[Dict[str, Any]]) -> Dict[str, Any]:
    return {"format_version": FORMAT_VERSION, "command": "list", "entries": list(rows)}


_REQUIRED = {
    "resolve": ("curve", "field", "degree", "betti", "resolution", "regularity", "tjurina"),
    "compare": ("curves", "betti", "betti_equal", "witness", "combinatorics_asserted", "verdict"),
    "singular": ("curve", "reduced", "tjurina", "hilbert_profile", "saturated_piece_dims",
                 "cusp_locus_dims", "conic_through_cusps"),
    "verify-all": ("rows", "passed", "failed"),
    "list": ("entries",),
    "export": ("paths",),
}

_VERDICTS = ("StrongZiegler", "Inconclusive", "NotComparable")


def _check_triples(value: Any, where: str, problems: List[str]) -> None:
    if not isinstance(value, list):
        problems.append(f"{where}: must be a list")
        return
    for k, t in enumerate(value):
        if not (isinstance(t, list) and len(t) == 3 and all(isinstance(x, int) for x in t)):
            problems.append(f"{where}[{k}]: must be an [i, j, beta] integer triple")


def validate_report(doc: Any) -> List[str]:
    """format_version 1 结构检查, 返回问题列表 (空列表 = 通过)"""
    problems: List[str] = []
    if not isinstance(doc, dict):
        return ["report must be an object"]
    if doc.get("format_version") != FORMAT_VERSION:
        problems.append(f"format_version must be {FORMAT_VERSION}")
    cmd = doc.get("command")
    if cmd not in _REQUIRED:
        problems.append(f"unknown command {cmd!r}")
        return problems
    for key in _REQUIRED[cmd]:
        if key not in doc:
            problems.append(f"missing key '{key}'")
    if problems:
        return problems

    if cmd == "resolve":
        _check_triples(doc["betti"], "betti", problems)
    elif cmd == "compare":
        _check_triples(doc["betti"].get("a"), "betti.a", problems)
        _check_triples(doc["betti"].get("b"), "betti.b", problems)
        if doc["verdict"] not in _VERDICTS:
            problems.append(f"verdict must be one of {_VERDICTS}")
    elif cmd == "verify-all":
        for k, row in enumerate(doc["rows"]):
            if row.get("status") not in ("PASS", "FAIL"):
                problems.append(f"rows[{k}].status must be PASS or FAIL")
            if "key" not in row:
                problems.append(f"rows[{k}]: missing key 'key'")
            _check_triples(row.get("betti", []), f"rows[{k}].betti", problems)
    elif cmd == "singular":
        for k, pair in enumerate(doc["hilbert_profile"]):
            if not (isinstance(pair, list) and len(pair) == 2):
                problems.append(f"hilbert_profile[{k}]: must be a [t, dim] pair")
    return problems


# ==================== 文本输出 ====================
def _text_resolve(doc: Dict[str, Any]) -> List[str]:
    B = betti_from_triples(doc["betti"])
    lines = [
        f"{doc['curve']}  (degree {doc['degree']}, field {doc['field']['kind']})",
        doc["resolution"],
        "",
        render_betti_diagram(B),
        "",
        f"regularity = {doc['regularity']}, tjurina = {doc['tjurina']}",
        f"AR generator degrees = {doc.get('ar_degrees', [])}",
    ]
    return lines


def _text_compare(doc: Dict[str, Any]) -> List[str]:
    a, b = doc["curves"]
    Ba, Bb = betti_from_triples(doc["betti"]["a"]), betti_from_triples(doc["betti"]["b"])
    lines = [f"[{a}]", render_resolution(Ba), render_betti_diagram(Ba), "",
             f"[{b}]", render_resolution(Bb), render_betti_diagram(Bb), ""]
    if doc["betti_equal"]:
        lines.append("Betti tables: equal")
    else:
        lines.append(f"Betti tables: distinct (first difference at {tuple(doc['witness'])})")
    lines.append(f"verdict: {doc['verdict']}")
    for v in doc.get("violations", []):
        lines.append(f"warning: {v}")
    return lines


def _text_singular(doc: Dict[str, Any]) -> List[str]:
    profile = ", ".join(f"{t}:{v}" for t, v in doc["hilbert_profile"])
    lines = [
        f"{doc['curve']}",
        f"reduced = {doc['reduced']}",
        f"tjurina = {doc['tjurina']}",
        f"Hilbert profile of S/J: {profile}",
    ]
    if doc["saturated_piece_dims"]:
        dims = ", ".join(f"k={k}: {v}" for k, v in doc["saturated_piece_dims"].items())
        lines.append(f"dim (J^sat)_k: {dims}")
    if doc["cusp_locus_dims"]:
        dims = ", ".join(f"k={k}: {v}" for k, v in doc["cusp_locus_dims"].items())
        lines.append(f"dim (cusp locus)_k: {dims}")
        lines.append(f"conic through the cusps: {'yes' if doc['conic_through_cusps'] else 'no'}")
    elif doc["reduced"] and not doc.get("cusp_locus_available", True):
        lines.append("dim (cusp locus)_k: unavailable")
    return lines


def _text_verify(doc: Dict[str, Any]) -> List[str]:
    if not doc["rows"]:
        return ["(no entries)"]
    df = pd.DataFrame([
        {
            "key": r["key"],
            "status": r["status"],
            "tjurina": r.get("tjurina"),
            "reduced": r.get("reduced"),
            "betti": " ".join(f"{i},{j}:{b}" for i, j, b in r.get("betti", [])),
            "message": r.get("message", ""),
        }
        for r in doc["rows"]
    ])
    return [df.to_string(index=False), "", f"{doc['passed']} PASS, {doc['failed']} FAIL"]


def _text_list(doc: Dict[str, Any]) -> List[str]:
    if not doc["entries"]:
        return ["(empty catalog)"]
    return [pd.DataFrame(doc["entries"]).to_string(index=False)]


def _text_export(doc: Dict[str, Any]) -> List[str]:
    return [f"wrote {p}" for p in doc["paths"]]


_TEXT = {
    "resolve": _text_resolve,
    "compare": _text_compare,
    "singular": _text_singular,
    "verify-all": _text_verify,
    "list": _text_list,
    "export": _text_export,
}


def write_report(doc: Dict[str, Any], fmt: str = "text") -> bytes:
    if fmt == "machine":
        return (json.dumps(doc, sort_keys=True, ensure_ascii=False, indent=2) + "\n").encode("utf-8")
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    return ("\n".join(_TEXT[doc["command"]](doc)) + "\n").encode("utf-8")
