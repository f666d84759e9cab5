# core/groebner.py - Buchberger 引擎 v1.2 (理想 + 扭自由模子模)
# -*- coding: utf-8 -*-
"""
Gröbner 引擎:
1. 模元素 GradedModuleElement: {(位置, 单项式): 系数}, 带扭向量 (a_1..a_r) 描述 ⊕S(-a_i)
2. 项序 TermOrder: 每个项映射到一个整数键 (越大越靠前), 三种实现
   - GrevlexTOP       用户侧默认序: 扭后次数 > grevlex > 位置 (小下标优先)
   - PositionOverTerm 求任意生成元合冲用: 前 top_rank 个位置整体压过其余位置
   - SchreyerOrder    分解内部的诱导序: m·e_i 比较 m·LT(g_i), 相同时小下标优先
3. normal_form / s_pair / buchberger (正规选择策略 + Gebauer–Möller 判据)
4. syzygies (Schreyer) / syzygy_module (任意生成元) / ideal_quotient / ideal_intersection
5. saturate_irrelevant: J ← (J:x) ∩ (J:y) ∩ (J:z) 直到约化 GB 不再变化
   saturate_by_variables: 逐变量 J : v^∞ (grevlex 末变量整除) 再求交, 无迭代上限
6. hilbert_function: 数 t 次标准单项式 (numpy 向量化整除判断)

约定:
- Gröbner 基元素一律首一 (两种系数域都一样)
- 缓存里 Q 上的多项式以本原整系数形式保存, 读出后再化首一
"""

import hashlib
import heapq
import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np

from .config_utils import get_engine_config, get_saturation_config
from .polyring import (
    ONE,
    Monomial,
    Poly,
    grevlex_key,
    mono_coprime,
    mono_degree,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
    monomials_of_degree,
)
from .scalars import Field, FieldElement, QQ, QuadExt, check_same_field
from .state import get_cache
from .utils import SaturationError, ZieglerError, log

Term = Tuple[int, Monomial]

_POS_BITS = 16
_POS_MASK = (1 << _POS_BITS) - 1
_TOP_FLAG = 1 << 240


# ========== 项序 ==========
class TermOrder:
    """项 -> 整数键; 键越大项越大, 不同项的键互不相同"""

    name = "abstract"

    def __init__(self):
        self._memo: Dict[Term, int] = {}

    def key(self, term: Term) -> int:
        k = self._memo.get(term)
        if k is None:
            k = self._compute(term)
            self._memo[term] = k
        return k

    def _compute(self, term: Term) -> int:
        raise NotImplementedError

    def __repr__(self) -> str:
        return f"<{self.name}>"


class GrevlexTOP(TermOrder):
    name = "grevlex-TOP"

    def __init__(self, twists: Sequence[int] = (0,)):
        super().__init__()
        self.twists = tuple(twists)

    def key(self, term: Term) -> int:
        pos, m = term
        return (((m[0] + m[1] + m[2] + self.twists[pos]) << 80)
                | (grevlex_key(m) << _POS_BITS) | (_POS_MASK - pos))


class PositionOverTerm(TermOrder):
    name = "position-over-term"

    def __init__(self, top_rank: int, twists: Sequence[int]):
        super().__init__()
        self.top_rank = top_rank
        self.inner = GrevlexTOP(twists)
        self.twists = self.inner.twists

    def key(self, term: Term) -> int:
        k = self.inner.key(term)
        return k | _TOP_FLAG if term[0] < self.top_rank else k


class SchreyerOrder(TermOrder):
    name = "schreyer"

    def __init__(self, leads: Sequence[Term], previous: TermOrder):
        super().__init__()
        if len(leads) > _POS_MASK:
            raise ZieglerError("too many generators for the Schreyer order")
        self.leads = list(leads)
        self.previous = previous

    def _compute(self, term: Term) -> int:
        i, m = term
        p, lm = self.leads[i]
        return (self.previous.key((p, mono_mul(m, lm))) << _POS_BITS) | (_POS_MASK - i)


# ========== 模元素 ==========
class GradedModuleElement:
    __slots__ = ("field", "twists", "terms")

    def __init__(self, field: Field, twists: Sequence[int],
                 terms: Optional[Dict[Term, FieldElement]] = None):
        self.field = field
        self.twists = tuple(twists)
        self.terms = terms if terms is not None else {}

    @classmethod
    def from_polys(cls, polys: Sequence[Poly], twists: Optional[Sequence[int]] = None,
                   field: Optional[Field] = None) -> "GradedModuleElement":
        polys = list(polys)
        if field is None:
            if not polys:
                raise ValueError("empty component vector needs an explicit field")
            field = polys[0].field
        for p in polys:
            check_same_field(field, p.field)
        twists = tuple(twists) if twists is not None else (0,) * len(polys)
        if len(twists) != len(polys):
            raise ValueError("twist vector length must equal the number of components")
        terms = {(i, m): c for i, p in enumerate(polys) for m, c in p.coeffs.items()}
        return cls(field, twists, terms)

    @classmethod
    def from_poly(cls, p: Poly) -> "GradedModuleElement":
        return cls(p.field, (0,), {(0, m): c for m, c in p.coeffs.items()})

    @classmethod
    def basis_vector(cls, field: Field, twists: Sequence[int], i: int) -> "GradedModuleElement":
        return cls(field, twists, {(i, ONE): field.one})

    @property
    def rank(self) -> int:
        return len(self.twists)

    def component(self, i: int) -> Poly:
        return Poly(self.field, {m: c for (p, m), c in self.terms.items() if p == i}, trusted=True)

    def components(self) -> List[Poly]:
        out: List[Dict[Monomial, FieldElement]] = [{} for _ in self.twists]
        for (p, m), c in self.terms.items():
            out[p][m] = c
        return [Poly(self.field, d, trusted=True) for d in out]

    def as_poly(self) -> Poly:
        if self.rank != 1:
            raise ValueError("not an ideal element")
        return self.component(0)

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def degree(self) -> Optional[int]:
        """齐次元素的次数 deg(m) + a_pos; 零元素为 None"""
        for (p, m) in self.terms:
            return mono_degree(m) + self.twists[p]
        return None

    def is_homogeneous(self) -> bool:
        return len({mono_degree(m) + self.twists[p] for (p, m) in self.terms}) <= 1

    def lead(self, order: TermOrder) -> Tuple[Term, FieldElement]:
        if not self.terms:
            raise ZieglerError("zero element has no leading term")
        t = max(self.terms, key=order.key)
        return t, self.terms[t]

    def scale(self, c) -> "GradedModuleElement":
        c = self.field.coerce(c)
        if not c:
            return GradedModuleElement(self.field, self.twists)
        return GradedModuleElement(self.field, self.twists, {t: v * c for t, v in self.terms.items()})

    def mul_term(self, c, mon: Monomial) -> "GradedModuleElement":
        if not c:
            return GradedModuleElement(self.field, self.twists)
        return GradedModuleElement(
            self.field, self.twists,
            {(p, mono_mul(m, mon)): v * c for (p, m), v in self.terms.items()})

    def _combine(self, other: "GradedModuleElement", sign: int) -> "GradedModuleElement":
        check_same_field(self.field, other.field)
        if self.twists != other.twists:
            raise ValueError("ambient twists differ")
        out = dict(self.terms)
        for t, c in other.terms.items():
            v = out.get(t)
            v = (c if sign > 0 else -c) if v is None else (v + c if sign > 0 else v - c)
            if v:
                out[t] = v
            else:
                out.pop(t, None)
        return GradedModuleElement(self.field, self.twists, out)

    def __add__(self, other: "GradedModuleElement") -> "GradedModuleElement":
        return self._combine(other, 1)

    def __sub__(self, other: "GradedModuleElement") -> "GradedModuleElement":
        return self._combine(other, -1)

    def __neg__(self) -> "GradedModuleElement":
        return GradedModuleElement(self.field, self.twists, {t: -c for t, c in self.terms.items()})

    def monic(self, order: TermOrder) -> "GradedModuleElement":
        if not self.terms:
            return self
        _, lc = self.lead(order)
        if lc == 1:
            return self
        return self.scale(1 / lc)

    def frozen(self) -> frozenset:
        return frozenset(self.terms.items())

    def __eq__(self, other) -> bool:
        if not isinstance(other, GradedModuleElement):
            return NotImplemented
        return self.field == other.field and self.twists == other.twists and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.twists, self.frozen()))

    def __repr__(self) -> str:
        comps = ", ".join(str(p) for p in self.components())
        return f"GradedModuleElement(({comps}), twists={self.twists})"


ModuleLike = Union[Poly, GradedModuleElement]


def _as_element(g: ModuleLike) -> GradedModuleElement:
    if isinstance(g, GradedModuleElement):
        return g
    if isinstance(g, Poly):
        return GradedModuleElement.from_poly(g)
    raise TypeError(f"expected Poly or GradedModuleElement, got {type(g).__name__}")


@dataclass
class GroebnerBasis:
    generators: List[GradedModuleElement]
    order: TermOrder
    reduced: bool
    field: Field = QQ
    twists: Tuple[int, ...] = (0,)

    def __len__(self) -> int:
        return len(self.generators)

    def __iter__(self):
        return iter(self.generators)

    @property
    def rank(self) -> int:
        return len(self.twists)

    def leads(self) -> List[Term]:
        return [g.lead(self.order)[0] for g in self.generators]

    def lead_monomials(self) -> List[Monomial]:
        return [m for _, m in self.leads()]

    def polys(self) -> List[Poly]:
        return [g.as_poly() for g in self.generators]

    def is_zero(self) -> bool:
        return not self.generators

    def is_unit(self) -> bool:
        return any(m == ONE for m in self.lead_monomials()) if self.rank == 1 else False

    def canonical(self) -> frozenset:
        """约化 GB 的规范形式, 用来判断两个理想相等"""
        return frozenset(g.frozen() for g in self.generators)

    def degrees(self) -> List[int]:
        return [g.degree() for g in self.generators]


# ========== 约化 ==========
def _reducer_index(G: Sequence[GradedModuleElement], order: TermOrder):
    """按位置分桶: pos -> [(首项单项式, 下标, 首系数的逆, 元素)]"""
    index: Dict[int, list] = {}
    for idx, g in enumerate(G):
        if not g:
            continue
        (p, lm), lc = g.lead(order)
        index.setdefault(p, []).append((lm, idx, 1 / lc if lc != 1 else None, g))
    return index


def _reduce(f: GradedModuleElement, G: Sequence[GradedModuleElement], order: TermOrder,
            full: bool, top_rank: Optional[int], transcript: bool):
    index = _reducer_index(G, order)
    key = order.key
    work = dict(f.terms)
    heap = [(-key(t), t) for t in work]
    heapq.heapify(heap)
    remainder: Dict[Term, FieldElement] = {}
    quotients: Dict[Tuple[int, Monomial], FieldElement] = {}

    while heap:
        _, t = heapq.heappop(heap)
        c = work.get(t)
        if c is None:
            continue
        pos, m = t
        if top_rank is not None and pos >= top_rank:
            break
        found = None
        for cand in index.get(pos, ()):
            lm = cand[0]
            if lm[0] <= m[0] and lm[1] <= m[1] and lm[2] <= m[2]:
                found = cand
                break
        if found is None:
            if not full:
                break
            remainder[t] = work.pop(t)
            continue

        lm, idx, inv, g = found
        q = c if inv is None else c * inv
        mult = (m[0] - lm[0], m[1] - lm[1], m[2] - lm[2])
        del work[t]
        for (gp, gm), gc in g.terms.items():
            if gp == pos and gm == lm:
                continue
            nt = (gp, (gm[0] + mult[0], gm[1] + mult[1], gm[2] + mult[2]))
            old = work.get(nt)
            if old is None:
                work[nt] = -(q * gc)
                heapq.heappush(heap, (-key(nt), nt))
            else:
                v = old - q * gc
                if v:
                    work[nt] = v
                else:
                    del work[nt]
        if transcript:
            qk = (idx, mult)
            prev = quotients.get(qk)
            quotients[qk] = q if prev is None else prev + q

    remainder.update(work)
    return GradedModuleElement(f.field, f.twists, remainder), quotients


def normal_form(f: ModuleLike, G: Union["GroebnerBasis", Sequence[ModuleLike]],
                order: Optional[TermOrder] = None, *, full: bool = True,
                top_rank: Optional[int] = None, transcript: bool = False):
    """
    f 对 G 的余式 (确定性: 总是用 G 中第一个首项整除的元素)
    - full=False   只约化首项, 首项不可约时停止
    - top_rank     只约化位置 < top_rank 的项 (合冲计算用)
    - transcript   额外返回商 {(下标, 乘子单项式): 系数}, 满足 f - 余式 = Σ 系数·乘子·G[下标]
    """
    is_poly = isinstance(f, Poly)
    elem = _as_element(f)
    if isinstance(G, GroebnerBasis):
        order = order or G.order
        gens = G.generators
    else:
        gens = [_as_element(g) for g in G]
    order = order or GrevlexTOP(elem.twists)
    for g in gens:
        check_same_field(elem.field, g.field)
    rem, quotients = _reduce(elem, gens, order, full, top_rank, transcript)
    out = rem.as_poly() if is_poly else rem
    return (out, quotients) if transcript else out


def s_pair(g1: ModuleLike, g2: ModuleLike, order: Optional[TermOrder] = None) -> ModuleLike:
    """首项在同一位置时的 S-对; 不同位置按定义为零"""
    is_poly = isinstance(g1, Poly)
    a, b = _as_element(g1), _as_element(g2)
    order = order or GrevlexTOP(a.twists)
    (p1, m1), c1 = a.lead(order)
    (p2, m2), c2 = b.lead(order)
    if p1 != p2:
        out = GradedModuleElement(a.field, a.twists)
    else:
        L = mono_lcm(m1, m2)
        out = a.mul_term(1 / c1, mono_div(L, m1)) - b.mul_term(1 / c2, mono_div(L, m2))
    return out.as_poly() if is_poly else out


# ========== Buchberger ==========
def minimalize(G: Sequence[GradedModuleElement], order: TermOrder) -> List[GradedModuleElement]:
    """去掉首项被其他元素首项整除的元素 (首项相同时保留先出现的)"""
    out: List[GradedModuleElement] = []
    kept: List[Term] = []
    for g in sorted(G, key=lambda h: order.key(h.lead(order)[0])):
        p, lm = g.lead(order)[0]
        if all(not (q == p and mono_divides(lq, lm)) for q, lq in kept):
            out.append(g)
            kept.append((p, lm))
    return out


def interreduce(G: Sequence[GradedModuleElement], order: TermOrder) -> List[GradedModuleElement]:
    """每个元素对其余元素取完全正规形, 再化首一; 输入须已 minimalize"""
    G = list(G)
    out = []
    for i, g in enumerate(G):
        rest = G[:i] + G[i + 1:]
        r, _ = _reduce(g, rest, order, True, None, False)
        out.append(r.monic(order))
    out.sort(key=lambda h: order.key(h.lead(order)[0]), reverse=True)
    return out


def buchberger(gens: Sequence[ModuleLike], order: Optional[TermOrder] = None, *,
               reduce: bool = True, top_rank: Optional[int] = None,
               keep_input: bool = False, field: Optional[Field] = None,
               twists: Optional[Sequence[int]] = None) -> GroebnerBasis:
    """
    Buchberger 算法
    - 选对: 正规策略 (lcm 扭后次数最低者优先, 同次数按项序)
    - 判据: Gebauer–Möller 链判据; 乘积判据只在秩 1 (或 top_rank == 1) 时使用
    - top_rank: 只让前 top_rank 个位置参与约化, 顶部为零的结果直接丢弃
    - keep_input: 输入原样保留在基里 (只化首一), syzygy_module 需要
    """
    elems = [_as_element(g) for g in gens]
    if field is None:
        field = elems[0].field if elems else QQ
    if twists is None:
        twists = elems[0].twists if elems else (0,)
    twists = tuple(twists)
    for e in elems:
        check_same_field(field, e.field)
        if e.twists != twists:
            raise ValueError("generators live in different ambient modules")
    elems = [e for e in elems if e]
    order = order or GrevlexTOP(twists)
    product_ok = (top_rank if top_rank is not None else len(twists)) == 1

    G: List[GradedModuleElement] = []
    leads: List[Term] = []
    pairs: Dict[Tuple[int, int], Monomial] = {}
    heap: List[Tuple[int, int, int, int]] = []

    def add(h: GradedModuleElement) -> None:
        new = len(G)
        pos_f, lm_f = h.lead(order)[0]

        # 链判据: 旧对的 lcm 被新首项整除且与两端的新 lcm 都不同 -> 删除
        for pr, L in list(pairs.items()):
            i, j = pr
            if leads[i][0] != pos_f or not mono_divides(lm_f, L):
                continue
            if L != mono_lcm(leads[i][1], lm_f) and L != mono_lcm(leads[j][1], lm_f):
                del pairs[pr]

        groups: Dict[Monomial, List[int]] = {}
        for i, (pi, mi) in enumerate(leads):
            if pi == pos_f:
                groups.setdefault(mono_lcm(mi, lm_f), []).append(i)
        kept: List[Monomial] = []
        for L in sorted(groups, key=grevlex_key):
            if all(not mono_divides(L2, L) for L2 in kept):
                kept.append(L)
        for L in kept:
            grp = groups[L]
            if product_ok and any(mono_coprime(leads[i][1], lm_f) for i in grp):
                continue
            i = min(grp)
            pairs[(i, new)] = L
            heapq.heappush(heap, (mono_degree(L) + twists[pos_f], order.key((pos_f, L)), i, new))

        G.append(h)
        leads.append((pos_f, lm_f))

    def usable(h: GradedModuleElement) -> bool:
        if not h:
            return False
        if top_rank is not None and h.lead(order)[0][0] >= top_rank:
            return False
        return True

    for e in sorted(elems, key=lambda e: (e.degree(), order.key(e.lead(order)[0]))):
        if keep_input:
            h = e
        else:
            h, _ = _reduce(e, G, order, False, top_rank, False)
        if usable(h):
            add(h.monic(order))

    processed = 0
    while heap:
        _, _, i, j = heapq.heappop(heap)
        L = pairs.pop((i, j), None)
        if L is None:
            continue
        processed += 1
        (p, mi), (_, mj) = leads[i], leads[j]
        s = G[i].mul_term(1, mono_div(L, mi)) - G[j].mul_term(1, mono_div(L, mj))
        h, _ = _reduce(s, G, order, False, top_rank, False)
        if usable(h):
            add(h.monic(order))

    if reduce:
        G = interreduce(minimalize(G, order), order)
    if processed > 200:
        log("GB", f"🔧 {processed} 个 S-对, 基大小 {len(G)}")

    gb = GroebnerBasis(G, order, reduce, field, twists)
    if get_engine_config()["check"] and not check_groebner(gb, top_rank=top_rank):
        raise ZieglerError("S-pair re-check failed: result is not a Gröbner basis")
    return gb


def check_groebner(G: GroebnerBasis, top_rank: Optional[int] = None) -> bool:
    """全部 S-对都约化到零 (测试 / --check 用)"""
    gens = G.generators
    leads = G.leads()
    for i in range(len(gens)):
        for j in range(i + 1, len(gens)):
            if leads[i][0] != leads[j][0]:
                continue
            if top_rank is not None and leads[i][0] >= top_rank:
                continue
            s = s_pair(gens[i], gens[j], G.order)
            r, _ = _reduce(s, gens, G.order, top_rank is None, top_rank, False)
            if top_rank is None and r:
                return False
            if top_rank is not None and any(p < top_rank for p, _ in r.terms):
                return False
    return True


# ========== 合冲 ==========
def _schreyer_pairs(leads: Sequence[Term]) -> List[Tuple[int, int]]:
    """
    对每个 i 只保留 j > i 中 m_ij = lcm/lm_i 极小的那些 (相等时取最小 j)
    剪枝后的 τ_ij 首项生成同一个单项式子模, 仍是 Schreyer 序下的 GB
    """
    out = []
    for i, (pi, mi) in enumerate(leads):
        cands: List[Tuple[Monomial, int]] = []
        for j in range(i + 1, len(leads)):
            pj, mj = leads[j]
            if pj != pi:
                continue
            cands.append((mono_div(mono_lcm(mi, mj), mi), j))
        cands.sort(key=lambda c: (mono_degree(c[0]), c[1]))
        kept: List[Monomial] = []
        for m, j in cands:
            if any(mono_divides(k, m) for k in kept):
                continue
            kept.append(m)
            out.append((i, j))
    return out


def _lex_sort(gens: List[GradedModuleElement], order: TermOrder) -> List[GradedModuleElement]:
    """同位置内首项按 lex (x > y > z) 降序; 保证 Schreyer 分解长度不超过变量个数"""
    def sort_key(g):
        p, m = g.lead(order)[0]
        return (p, tuple(-e for e in m))
    return sorted(gens, key=sort_key)


def syzygies(G: GroebnerBasis) -> GroebnerBasis:
    """
    Schreyer: 每个 (剪枝后的) S-对约化到零, 由除法记录得到
        τ_ij = (m_ij/lc_i) e_i - (m_ji/lc_j) e_j - Σ q_l e_l
    结果位于 ⊕ S(-deg g_i), 是 Schreyer 诱导序下的 Gröbner 基 (已按 lex 排好, 可直接进入下一层)
    """
    gens = G.generators
    order = G.order
    leads = G.leads()
    new_twists = tuple(g.degree() for g in gens)
    sorder = SchreyerOrder(leads, order)
    field = G.field
    out: List[GradedModuleElement] = []

    for i, j in _schreyer_pairs(leads):
        (_, mi), (_, mj) = leads[i], leads[j]
        L = mono_lcm(mi, mj)
        ai, aj = mono_div(L, mi), mono_div(L, mj)
        ci = 1 / gens[i].terms[leads[i]]
        cj = 1 / gens[j].terms[leads[j]]
        s = gens[i].mul_term(ci, ai) - gens[j].mul_term(cj, aj)
        rem, quot = _reduce(s, gens, order, False, None, True)
        if rem:
            raise ZieglerError("S-pair did not reduce to zero: input is not a Gröbner basis")
        terms: Dict[Term, FieldElement] = {(i, ai): field.coerce(ci)}
        terms[(j, aj)] = terms.get((j, aj), field.zero) - cj
        for (l, mult), q in quot.items():
            t = (l, mult)
            v = terms.get(t, field.zero) - q
            if v:
                terms[t] = v
            else:
                terms.pop(t, None)
        out.append(GradedModuleElement(field, new_twists, terms).monic(sorder))

    out = _lex_sort(out, sorder)
    return GroebnerBasis(out, sorder, False, field, new_twists)


def syzygy_module(gens: Sequence[ModuleLike], degrees: Optional[Sequence[int]] = None,
                  field: Optional[Field] = None) -> List[GradedModuleElement]:
    """
    任意齐次生成元 g_1..g_k 的合冲模生成元 (⊕ S(-deg g_i) 中的元素)
    叠加 (g_i | e_i), 在 position-over-term 序下只对顶部做 Buchberger,
    再把剪枝后的 Schreyer S-对顶部约化到零, 剩下的底部就是合冲
    """
    elems = [_as_element(g) for g in gens]
    if not elems:
        return []
    field = field or elems[0].field
    r = elems[0].rank
    top_twists = elems[0].twists
    if degrees is None:
        degrees = [e.degree() if e else 0 for e in elems]
    bottom_twists = tuple(degrees)
    all_twists = top_twists + bottom_twists
    order = PositionOverTerm(r, all_twists)

    result: List[GradedModuleElement] = []
    stacked: List[GradedModuleElement] = []
    for i, e in enumerate(elems):
        if not e:
            result.append(GradedModuleElement.basis_vector(field, bottom_twists, i))
            continue
        terms = dict(e.terms)
        terms[(r + i, ONE)] = field.one
        stacked.append(GradedModuleElement(field, all_twists, terms))
    if not stacked:
        return result

    H = buchberger(stacked, order, reduce=False, top_rank=r, keep_input=True,
                   field=field, twists=all_twists).generators
    leads = [h.lead(order)[0] for h in H]

    for i, j in _schreyer_pairs(leads):
        (_, mi), (_, mj) = leads[i], leads[j]
        L = mono_lcm(mi, mj)
        s = H[i].mul_term(1, mono_div(L, mi)) - H[j].mul_term(1, mono_div(L, mj))
        red, _ = _reduce(s, H, order, False, r, False)
        if any(p < r for p, _ in red.terms):
            raise ZieglerError("top part did not reduce to zero during syzygy computation")
        bottom = {(p - r, m): c for (p, m), c in red.terms.items()}
        if bottom:
            result.append(GradedModuleElement(field, bottom_twists, bottom))
    return result


# ========== 理想运算 ==========
def _coeff_token(c: FieldElement):
    if isinstance(c, QuadExt):
        return [str(c.a), str(c.b)]
    return str(c)


def _coeff_from_token(tok, field: Field) -> FieldElement:
    if isinstance(tok, list):
        return field.coerce(QuadExt(Fraction(tok[0]), Fraction(tok[1]), field.d))
    return field.coerce(Fraction(tok))


def primitive_integer_form(p: Poly) -> Poly:
    """Q 上: 清分母、除去内容、首系数为正; 二次域上: 首一"""
    if not p or not p.field.is_rational:
        return p.monic()
    den = 1
    for c in p.coeffs.values():
        den = den * c.denominator // gcd(den, c.denominator)
    nums = [int(c * den) for c in p.coeffs.values()]
    content = 0
    for n in nums:
        content = gcd(content, n)
    scale = Fraction(den, content)
    if p.leading_coefficient() < 0:
        scale = -scale
    return p.scale(scale)


def encode_poly(p: Poly) -> list:
    return [[list(m), _coeff_token(c)] for c, m in p.terms()]


def decode_poly(data: list, field: Field) -> Poly:
    return Poly(field, {tuple(m): _coeff_from_token(tok, field) for m, tok in data})


def _cache_key(polys: Sequence[Poly], field: Field) -> str:
    rendered = sorted(json.dumps(encode_poly(primitive_integer_form(p))) for p in polys)
    digest = hashlib.sha256()
    digest.update(field.name.encode("utf-8"))
    for s in rendered:
        digest.update(b"|")
        digest.update(s.encode("utf-8"))
    return digest.hexdigest()


def ideal_basis(polys: Iterable[Poly], field: Optional[Field] = None) -> GroebnerBasis:
    """理想的约化 GB (engine.cache 打开时先查缓存)"""
    polys = list(polys)
    if field is None:
        field = polys[0].field if polys else QQ
    polys = [p for p in polys if p]
    if not polys:
        return GroebnerBasis([], GrevlexTOP((0,)), True, field, (0,))

    cache = get_cache()
    key = None
    if cache is not None:
        key = _cache_key(polys, field)
        payload = cache.get(key)
        if payload is not None:
            gens = [GradedModuleElement.from_poly(decode_poly(d, field).monic())
                    for d in json.loads(payload)]
            order = GrevlexTOP((0,))
            gens.sort(key=lambda h: order.key(h.lead(order)[0]), reverse=True)
            return GroebnerBasis(gens, order, True, field, (0,))

    gb = buchberger(polys, field=field)
    if cache is not None:
        payload = json.dumps([encode_poly(primitive_integer_form(p)) for p in gb.polys()])
        cache.put(key, field.name, len(gb), payload)
    return gb


def ideal_membership(f: Poly, G: GroebnerBasis) -> bool:
    return normal_form(f, G).is_zero()


def ideal_sum(I: GroebnerBasis, K: GroebnerBasis) -> GroebnerBasis:
    check_same_field(I.field, K.field)
    return ideal_basis(I.polys() + K.polys(), I.field)


def ideal_quotient(J: GroebnerBasis, f: Poly) -> GroebnerBasis:
    """J : f = 合冲 (f, g_1..g_k) 的第一坐标"""
    if f.is_zero():
        raise ValueError("quotient by the zero polynomial")
    check_same_field(J.field, f.field)
    syz = syzygy_module([f] + J.polys())
    return ideal_basis([s.component(0) for s in syz], J.field)


def ideal_intersection(I: GroebnerBasis, K: GroebnerBasis) -> GroebnerBasis:
    """I ∩ K: 两行列向量 (1,1), (i_l,0), (0,k_m) 的合冲第一坐标"""
    check_same_field(I.field, K.field)
    field = I.field
    if I.is_zero() or K.is_zero():
        return GroebnerBasis([], GrevlexTOP((0,)), True, field, (0,))
    one = Poly.constant(field, 1)
    zero = Poly.zero(field)
    cols = [GradedModuleElement.from_polys([one, one], (0, 0))]
    cols += [GradedModuleElement.from_polys([p, zero], (0, 0)) for p in I.polys()]
    cols += [GradedModuleElement.from_polys([zero, p], (0, 0)) for p in K.polys()]
    syz = syzygy_module(cols)
    return ideal_basis([s.component(0) for s in syz], field)


def saturate_irrelevant(J: GroebnerBasis, max_iterations: Optional[int] = None) -> GroebnerBasis:
    """J : (x,y,z)^∞; 迭代 J ← (J:x)∩(J:y)∩(J:z) 直到约化 GB 相同"""
    if max_iterations is None:
        max_iterations = get_saturation_config()["max_iterations"]
    field = J.field
    current = J if J.reduced else ideal_basis(J.polys(), field)
    variables = [Poly.variable(field, v) for v in ("x", "y", "z")]
    for it in range(1, max_iterations + 1):
        if current.is_zero() or current.is_unit():
            return current
        qx, qy, qz = (ideal_quotient(current, v) for v in variables)
        nxt = ideal_intersection(ideal_intersection(qx, qy), qz)
        if nxt.canonical() == current.canonical():
            log("SAT", f"✅ 饱和在第 {it} 轮稳定, 基大小 {len(current)}")
            return current
        current = nxt
    raise SaturationError(f"saturation did not stabilise within {max_iterations} iterations")


# 变量饱和: 把 v 换到最后一位, grevlex GB 各元素除掉 z 的最高公因幂即 J : v^∞ 的 GB
_SWAP_TO_LAST = {0: (2, 1, 0), 1: (0, 2, 1), 2: (0, 1, 2)}


def _permute(p: Poly, perm: Tuple[int, int, int]) -> Poly:
    return Poly(p.field, {(m[perm[0]], m[perm[1]], m[perm[2]]): c for m, c in p.coeffs.items()},
                trusted=True)


def _strip_last_variable(p: Poly) -> Poly:
    k = min(m[2] for m in p.coeffs)
    if k == 0:
        return p
    return Poly(p.field, {(m[0], m[1], m[2] - k): c for m, c in p.coeffs.items()}, trusted=True)


def saturate_variable(J: GroebnerBasis, v: Union[str, int]) -> GroebnerBasis:
    """J : v^∞ (齐次理想), 一次 GB 计算, 不需要迭代"""
    idx = {"x": 0, "y": 1, "z": 2}.get(v, v)
    perm = _SWAP_TO_LAST[idx]
    field = J.field
    if J.is_zero():
        return J
    swapped = ideal_basis([_permute(p, perm) for p in J.polys()], field)
    stripped = [_strip_last_variable(p) for p in swapped.polys()]
    return ideal_basis([_permute(p, perm) for p in stripped], field)


def saturate_by_variables(J: GroebnerBasis) -> GroebnerBasis:
    """J : m^∞ = (J:x^∞) ∩ (J:y^∞) ∩ (J:z^∞), 适合嵌入分量次数很高的理想"""
    if J.is_zero() or J.is_unit():
        return J
    qx, qy, qz = (saturate_variable(J, v) for v in ("x", "y", "z"))
    sat = ideal_intersection(ideal_intersection(qx, qy), qz)
    log("SAT", f"✅ 按变量饱和完成, 基大小 {len(sat)}")
    return sat


# ========== Hilbert 函数 ==========
def hilbert_function(G: GroebnerBasis, t: int) -> int:
    """dim (S/J)_t = t 次单项式中不被任何首项整除的个数"""
    if G.rank != 1:
        raise ValueError("hilbert_function expects an ideal")
    if t < 0:
        return 0
    mons = monomials_of_degree(t)
    lead_mons = G.lead_monomials()
    if not lead_mons:
        return len(mons)
    L = np.array(lead_mons, dtype=np.int64).reshape(-1, 3)
    M = np.array(mons, dtype=np.int64).reshape(-1, 3)
    divisible = (M[:, None, :] >= L[None, :, :]).all(axis=2).any(axis=1)
    return int(len(mons) - int(divisible.sum()))


def hilbert_profile(G: GroebnerBasis, upto: int) -> List[Tuple[int, int]]:
    return [(t, hilbert_function(G, t)) for t in range(upto + 1)]


def ideal_piece_dim(G: GroebnerBasis, t: int) -> int:
    """dim J_t = C(t+2, 2) - HF(S/J, t)"""
    if t < 0:
        return 0
    return (t + 2) * (t + 1) // 2 - hilbert_function(G, t)


def standard_monomials(G: GroebnerBasis, t: int) -> List[Monomial]:
    lead_mons = G.lead_monomials()
    return [m for m in monomials_of_degree(t)
            if not any(mono_divides(l, m) for l in lead_mons)]
