# core/resolution.py - 分次自由分解 + Betti 表 v1.1
# -*- coding: utf-8 -*-
"""
S/J 的分次自由分解:
  F_0 = S ← F_1 (J 的约化 GB) ← F_2 (Schreyer 合冲) ← F_3 ...
每一层的合冲基已按 lex 排序, 所以长度 <= 3。
Schreyer 分解一般不极小, minimize() 反复消去常数项得到极小分解,
betti_table() 只接受极小分解。

独立校验通道:
- hilbert_from_betti: 由 Betti 表算 Hilbert 函数, 与首项计数比较
- koszul_betti:       Koszul 复形同调逐次数算 β_ij, 与 minimize 结果比较
"""

from dataclasses import dataclass, field as dc_field
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from .config_utils import get_engine_config, get_output_config, get_resolution_config
from .groebner import (
    GroebnerBasis,
    _lex_sort,
    hilbert_function,
    ideal_basis,
    normal_form,
    standard_monomials,
    syzygies,
)
from .polyring import UNIT_VECTORS, Poly, mono_degree, mono_mul
from .scalars import Field, FieldElement, QQ
from .utils import NotMinimalError, ZieglerError, log, timed

Matrix = Dict[Tuple[int, int], Poly]


# ========== 数据结构 ==========
@dataclass
class FreeResolution:
    """
    twist_vectors[i]  F_i = ⊕ S(-a) 的扭向量, i = 0..p
    differentials[i-1] 是 d_i : F_i -> F_{i-1}, 稀疏矩阵 {(行, 列): Poly}
    """
    twist_vectors: List[List[int]]
    differentials: List[Matrix]
    minimal: bool
    field: Field = QQ

    @property
    def length(self) -> int:
        return len(self.differentials)

    def rank(self, i: int) -> int:
        return len(self.twist_vectors[i])

    def differential(self, i: int) -> Matrix:
        return self.differentials[i - 1]

    def dense(self, i: int) -> List[List[Poly]]:
        rows, cols = self.rank(i - 1), self.rank(i)
        zero = Poly.zero(self.field)
        d = self.differential(i)
        return [[d.get((r, c), zero) for c in range(cols)] for r in range(rows)]


@dataclass
class BettiTable:
    entries: Dict[Tuple[int, int], int] = dc_field(default_factory=dict)

    def __post_init__(self):
        self.entries = {(int(i), int(j)): int(b) for (i, j), b in self.entries.items() if b}

    def __eq__(self, other) -> bool:
        if not isinstance(other, BettiTable):
            return NotImplemented
        return self.entries == other.entries

    def get(self, i: int, j: int) -> int:
        return self.entries.get((i, j), 0)

    def items(self):
        return sorted(self.entries.items())

    def triples(self) -> List[Tuple[int, int, int]]:
        return [(i, j, b) for (i, j), b in self.items()]

    def total(self, i: int) -> int:
        return sum(b for (k, _), b in self.entries.items() if k == i)

    @property
    def length(self) -> int:
        return max((i for i, _ in self.entries), default=0)

    def alternating_sum(self) -> int:
        return sum((-1) ** i * b for (i, _), b in self.entries.items())

    def twists(self, i: int) -> List[int]:
        out = []
        for (k, j), b in self.items():
            if k == i:
                out.extend([j] * b)
        return out

    def __repr__(self) -> str:
        inner = ", ".join(f"({i},{j}):{b}" for (i, j), b in self.items())
        return f"BettiTable({{{inner}}})"


@dataclass
class BettiNumerator:
    """N(t) = Σ (-1)^i β_ij t^j 及其在 t = 1 处的值"""
    coefficients: Dict[int, int]
    at_one: int
    derivative_at_one: int
    second_derivative_half: int


# ========== 构造分解 ==========
def free_resolution(J: GroebnerBasis) -> FreeResolution:
    """S/J 的 Schreyer 分解 (一般不极小)"""
    field = J.field
    if J.rank != 1:
        raise ValueError("free_resolution expects an ideal")
    gb = J if J.reduced else ideal_basis(J.polys(), field)
    max_length = get_resolution_config()["max_length"]

    twist_vectors: List[List[int]] = [[0]]
    differentials: List[Matrix] = []
    if gb.is_zero():
        return FreeResolution(twist_vectors, differentials, True, field)

    level = GroebnerBasis(_lex_sort(list(gb.generators), gb.order), gb.order, True, field, (0,))
    twist_vectors.append(level.degrees())
    differentials.append({(0, c): g.as_poly() for c, g in enumerate(level.generators)})

    step = 1
    while True:
        step += 1
        with timed("RES", f"第 {step} 层合冲"):
            nxt = syzygies(level)
        if not nxt.generators:
            break
        if step > max_length:
            raise ZieglerError(f"resolution longer than {max_length}: lex ordering of the basis was lost")
        d: Matrix = {}
        for c, s in enumerate(nxt.generators):
            for r, poly in enumerate(s.components()):
                if poly:
                    d[(r, c)] = poly
        twist_vectors.append(nxt.degrees())
        differentials.append(d)
        log("RES", f"F_{step}: 秩 {len(nxt)}")
        level = nxt

    R = FreeResolution(twist_vectors, differentials, False, field)
    if get_engine_config()["check"] and not check_complex(R):
        raise ZieglerError("d∘d ≠ 0 in the Schreyer resolution")
    return R


def _find_unit(R: FreeResolution) -> Optional[Tuple[int, int, int]]:
    """按 i 升序、行优先扫描第一个非零常数项"""
    for i in range(1, R.length + 1):
        d = R.differential(i)
        for (r, c) in sorted(d):
            p = d[(r, c)]
            if p and p.is_constant():
                return i, r, c
    return None


def _drop_row(d: Matrix, row: int) -> Matrix:
    return {((r if r < row else r - 1), c): p for (r, c), p in d.items() if r != row}


def _drop_col(d: Matrix, col: int) -> Matrix:
    return {(r, (c if c < col else c - 1)): p for (r, c), p in d.items() if c != col}


def minimize(R: FreeResolution) -> FreeResolution:
    """
    反复找 d_i 中的常数项 u = d_i[r][c]:
      d_i'[p][q] = d_i[p][q] - d_i[p][c]·d_i[r][q]/u, 删去第 r 行第 c 列
      d_{i+1} 删去第 c 行, d_{i-1} 删去第 r 列
    """
    twists = [list(t) for t in R.twist_vectors]
    diffs = [dict(d) for d in R.differentials]
    removed = 0
    work = FreeResolution(twists, diffs, False, R.field)

    while True:
        hit = _find_unit(work)
        if hit is None:
            break
        i, r, c = hit
        d = diffs[i - 1]
        u_inv = 1 / d[(r, c)].constant_value()
        col_c = {p: v for (p, q), v in d.items() if q == c and p != r}
        row_r = {q: v.scale(u_inv) for (p, q), v in d.items() if p == r and q != c}
        for p, a in col_c.items():
            for q, b in row_r.items():
                v = d.get((p, q))
                nv = (v - a * b) if v is not None else -(a * b)
                if nv:
                    d[(p, q)] = nv
                else:
                    d.pop((p, q), None)
        d = _drop_col(_drop_row(d, r), c)
        diffs[i - 1] = d
        if i < len(diffs):
            diffs[i] = _drop_row(diffs[i], c)
        if i >= 2:
            diffs[i - 2] = _drop_col(diffs[i - 2], r)
        del twists[i][c]
        del twists[i - 1][r]
        removed += 1

    while len(twists) > 1 and not twists[-1]:
        twists.pop()
        diffs.pop()
    if removed:
        log("MIN", f"🧹 消去 {removed} 对平凡直和项")
    return FreeResolution(twists, diffs, True, R.field)


# ========== Betti 表与 Hilbert 级数 ==========
def betti_table(R: FreeResolution) -> BettiTable:
    if not R.minimal:
        raise NotMinimalError()
    entries: Dict[Tuple[int, int], int] = {}
    for i, tw in enumerate(R.twist_vectors):
        for j in tw:
            entries[(i, j)] = entries.get((i, j), 0) + 1
    return BettiTable(entries)


def betti_numerator(B: BettiTable) -> BettiNumerator:
    if not B.entries:
        return BettiNumerator({}, 0, 0, 0)
    top = max(j for _, j in B.entries)
    coeffs = np.zeros(top + 1, dtype=np.int64)
    for (i, j), b in B.entries.items():
        coeffs[j] += (-1) ** i * b
    js = np.arange(top + 1, dtype=np.int64)
    n1 = int(coeffs.sum())
    dn1 = int((js * coeffs).sum())
    d2 = int((js * (js - 1) // 2 * coeffs).sum())
    return BettiNumerator({int(j): int(c) for j, c in enumerate(coeffs) if c}, n1, dn1, d2)


def regularity(B: BettiTable) -> int:
    return max((j - i for (i, j) in B.entries), default=0)


def hilbert_from_betti(B: BettiTable, t: int) -> int:
    """Σ_i (-1)^i Σ_j β_ij · C(t - j + 2, 2)"""
    total = 0
    for (i, j), b in B.entries.items():
        if t - j >= 0:
            total += (-1) ** i * b * comb(t - j + 2, 2)
    return total


def _matmul(a: Matrix, b: Matrix) -> Matrix:
    by_row: Dict[int, List[Tuple[int, Poly]]] = {}
    for (k, c), v in b.items():
        by_row.setdefault(k, []).append((c, v))
    out: Matrix = {}
    for (r, k), u in a.items():
        for c, v in by_row.get(k, ()):
            prev = out.get((r, c))
            nv = u * v if prev is None else prev + u * v
            if nv:
                out[(r, c)] = nv
            else:
                out.pop((r, c), None)
    return out


def check_complex(R: FreeResolution) -> bool:
    """d_{i-1}∘d_i = 0, 且每个非零项 (r, c) 齐次且次数 = a_c - a_r"""
    for i in range(1, R.length + 1):
        rows, cols = R.twist_vectors[i - 1], R.twist_vectors[i]
        for (r, c), p in R.differential(i).items():
            if not p.is_homogeneous() or p.degree() != cols[c] - rows[r]:
                log("CHECK", f"❌ d_{i}[{r},{c}] 次数不符")
                return False
    for i in range(2, R.length + 1):
        if _matmul(R.differential(i - 1), R.differential(i)):
            log("CHECK", f"❌ d_{i - 1}∘d_{i} ≠ 0")
            return False
    return True


# ========== 展示 ==========
def _module_string(twists: Sequence[int], plus: str) -> str:
    if not twists:
        return "0"
    counts: Dict[int, int] = {}
    for j in twists:
        counts[j] = counts.get(j, 0) + 1
    parts = []
    for j in sorted(counts):
        k = counts[j]
        parts.append(f"S({-j})" + (f"^{k}" if k > 1 else ""))
    return plus.join(parts)


def render_resolution(R: Union[FreeResolution, BettiTable], unicode: Optional[bool] = None) -> str:
    """0 → S(-12) → S(-9)⊕S(-10)⊕S(-11) → S(-6)^3 → S(0), 高同调指标在左"""
    if unicode is None:
        unicode = get_output_config()["unicode"]
    arrow, plus = (" → ", "⊕") if unicode else (" -> ", " + ")
    if isinstance(R, FreeResolution):
        levels = [list(t) for t in R.twist_vectors]
    else:
        levels = [R.twists(i) for i in range(R.length + 1)]
    parts = ["0"] + [_module_string(levels[i], plus) for i in range(len(levels) - 1, -1, -1)]
    return arrow.join(parts)


def betti_diagram(B: BettiTable) -> pd.DataFrame:
    """行 = j - i, 列 = i 的常规 Betti 图, 末行为 total"""
    if not B.entries:
        return pd.DataFrame()
    cols = list(range(B.length + 1))
    rows = sorted({j - i for (i, j) in B.entries})
    rows = list(range(min(rows), max(rows) + 1))
    data = [[B.get(i, i + r) for i in cols] for r in rows]
    df = pd.DataFrame(data, index=rows, columns=cols)
    df.loc["total"] = [B.total(i) for i in cols]
    df.index.name = "j-i"
    return df


def render_betti_diagram(B: BettiTable) -> str:
    df = betti_diagram(B)
    if df.empty:
        return "(empty)"
    return df.astype(object).where(df != 0, "-").to_string()


# ========== Koszul 同调 ==========
def _rank(rows: List[List[FieldElement]]) -> int:
    """精确 Gauss 消元求秩"""
    mat = [list(r) for r in rows if any(r)]
    if not mat:
        return 0
    ncols = len(mat[0])
    rank = 0
    for col in range(ncols):
        pivot = None
        for k in range(rank, len(mat)):
            if mat[k][col]:
                pivot = k
                break
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        inv = 1 / mat[rank][col]
        prow = [v * inv for v in mat[rank]]
        mat[rank] = prow
        for k in range(len(mat)):
            if k != rank and mat[k][col]:
                f = mat[k][col]
                mat[k] = [a - f * b for a, b in zip(mat[k], prow)]
        rank += 1
        if rank == len(mat):
            break
    return rank


_WEDGE = {
    0: [()],
    1: [(0,), (1,), (2,)],
    2: [(0, 1), (0, 2), (1, 2)],
    3: [(0, 1, 2)],
}


def _koszul_rank(G: GroebnerBasis, i: int, j: int, basis_cache: Dict[int, list]) -> int:
    """∂_i : ∧^i ⊗ (S/J)_{j-i} -> ∧^{i-1} ⊗ (S/J)_{j-i+1} 的秩"""
    if i < 1 or i > 3 or j - i < 0:
        return 0

    def std(t):
        if t not in basis_cache:
            basis_cache[t] = standard_monomials(G, t)
        return basis_cache[t]

    src, dst = std(j - i), std(j - i + 1)
    if not src or not dst:
        return 0
    dst_index = {m: k for k, m in enumerate(dst)}
    targets = _WEDGE[i - 1]
    target_index = {w: k for k, w in enumerate(targets)}
    width = len(targets) * len(dst)
    field = G.field
    rows = []
    for wedge in _WEDGE[i]:
        for m in src:
            row = [field.zero] * width
            for pos, a in enumerate(wedge):
                sign = 1 if pos % 2 == 0 else -1
                rest = wedge[:pos] + wedge[pos + 1:]
                image = normal_form(Poly.monomial(field, mono_mul(m, UNIT_VECTORS[a])), G)
                base = target_index[rest] * len(dst)
                for mon, c in image.coeffs.items():
                    k = base + dst_index[mon]
                    row[k] = row[k] + sign * c
            rows.append(row)
    return _rank(rows)


def koszul_betti(G: GroebnerBasis, max_degree: int) -> BettiTable:
    """β_ij = C(3,i)·HF(j-i) - rank ∂_i - rank ∂_{i+1}, j <= max_degree"""
    if G.rank != 1:
        raise ValueError("koszul_betti expects an ideal")
    basis_cache: Dict[int, list] = {}
    entries: Dict[Tuple[int, int], int] = {}
    for j in range(max_degree + 1):
        for i in range(0, 4):
            if j - i < 0:
                continue
            dim = comb(3, i) * hilbert_function(G, j - i)
            if not dim:
                continue
            b = dim - _koszul_rank(G, i, j, basis_cache) - _koszul_rank(G, i + 1, j, basis_cache)
            if b:
                entries[(i, j)] = b
    return BettiTable(entries)
