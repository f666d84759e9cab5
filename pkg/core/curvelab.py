# core/curvelab.py - 曲线层: Jacobian 理想 / Milnor 代数分解 / 奇异概形 / 强 Ziegler 判定
# -*- coding: utf-8 -*-
"""
曲线 B = 若干分支的并, f_B = 各分支多项式之积
- J_B = (∂x f, ∂y f, ∂z f), M(B) = S/J_B
- AR(B) 的生成元次数从 Betti 表第 2 列读出: j - (d - 1)
- 既约性: S/J_B 的 Hilbert 函数在 regularity 之后恒定 (奇异概形 0 维)
- 尖点轨迹: (J_B + Hessian 的 2×2 子式) 的饱和, 二次部分即过全部尖点的二次曲线

组合等价是断言 (来自目录或用户), 这里只检查它的必要数值推论:
分支次数多重集、Tjurina 数、饱和理想的 Hilbert 轮廓。
"""

from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

from .config_utils import get_engine_config, get_resolution_config
from .groebner import (
    GroebnerBasis,
    hilbert_function,
    hilbert_profile,
    ideal_basis,
    ideal_membership,
    ideal_piece_dim,
    saturate_by_variables,
    saturate_irrelevant,
)
from .polyring import Poly, gradient, hessian_matrix, homogeneous_degree, product
from .resolution import (
    BettiTable,
    FreeResolution,
    betti_numerator,
    betti_table,
    check_complex,
    free_resolution,
    hilbert_from_betti,
    koszul_betti,
    minimize,
    regularity,
)
from .scalars import Field, check_same_field
from .utils import (
    CurveSchemaError,
    DegreeMismatchError,
    NonReducedCurveError,
    SaturationError,
    UnknownSingularityError,
    ZieglerError,
    log,
    timed,
)

# 分支类型 -> 次数 (curve 表示任意次数)
KIND_DEGREES: Dict[str, Optional[int]] = {
    "line": 1,
    "conic": 2,
    "cubic": 3,
    "sextic-irreducible": 6,
    "curve": None,
}

# 局部 Tjurina 数: A1 = 1, A2 = 2, A3 = 3, D4 = 4
TJURINA_WEIGHTS: Dict[str, int] = {
    "node": 1, "A1": 1,
    "cusp": 2, "A2": 2,
    "tacnode": 3, "A3": 3,
    "triple": 4, "ordinary-triple": 4, "D4": 4,
}


# ==================== 数据结构 ====================

@dataclass(frozen=True)
class Component:
    label: str
    kind: str
    poly: Poly


@dataclass
class Curve:
    name: str
    field: Field
    components: List[Component]

    def __post_init__(self):
        if not self.components:
            raise CurveSchemaError("components", "at least one component required")
        for k, comp in enumerate(self.components):
            if comp.kind not in KIND_DEGREES:
                raise CurveSchemaError(f"components[{k}].kind", f"unknown kind '{comp.kind}'")
            check_same_field(self.field, comp.poly.field)
            deg = homogeneous_degree(comp.poly)
            want = KIND_DEGREES[comp.kind]
            if want is not None and deg != want:
                raise DegreeMismatchError(
                    f"component '{comp.label}': kind {comp.kind} needs degree {want}, got {deg}")

    @property
    def degree(self) -> int:
        return sum(homogeneous_degree(c.poly) for c in self.components)

    def labels(self) -> List[str]:
        return [c.label for c in self.components]


@dataclass
class SingularReport:
    tjurina: Optional[int]
    hilbert_profile: List[Tuple[int, int]]
    saturated_piece_dims: Dict[int, int]
    reduced_ok: bool
    regularity: int = 0
    cusp_locus_dims: Dict[int, int] = field(default_factory=dict)
    cusp_locus_available: bool = True
    conic_through_cusps: bool = False


class Verdict(Enum):
    """强 Ziegler 判定结果"""
    STRONG_ZIEGLER = "StrongZiegler"
    INCONCLUSIVE = "Inconclusive"
    NOT_COMPARABLE = "NotComparable"


@dataclass
class BettiComparison:
    equal: bool
    witness: Optional[Tuple[int, int]] = None   # 第一个不同的 (i, j)


@dataclass
class ZieglerVerdict:
    combinatorics_asserted: bool
    betti_equal: bool
    verdict: Verdict
    witness: Optional[Tuple[int, int]] = None
    betti_a: Optional[BettiTable] = None
    betti_b: Optional[BettiTable] = None
    assertion_violations: List[str] = field(default_factory=list)


@dataclass
class MilnorAnalysis:
    """一次分解得到的全部数据, singular_report / verify 共用"""
    curve: Curve
    jacobian: GroebnerBasis
    resolution: FreeResolution
    betti: BettiTable
    regularity: int
    hilbert_profile: List[Tuple[int, int]]
    reduced_ok: bool
    tjurina: Optional[int]


# ==================== 基本构造 ====================

def curve_polynomial(c: Curve) -> Poly:
    return product((comp.poly for comp in c.components), c.field)


def jacobian_ideal(f: Poly) -> GroebnerBasis:
    d = homogeneous_degree(f)
    if d < 2:
        raise DegreeMismatchError(f"Jacobian ideal needs a curve of degree >= 2, got {d}")
    partials = gradient(f)
    assert any(partials), "all partial derivatives vanished"
    with timed("GB", f"Jacobian 理想 (次数 {d})"):
        return ideal_basis(partials, f.field)


def hessian_minors(f: Poly) -> List[Poly]:
    """Hessian 矩阵的 9 个 2×2 子式"""
    H = hessian_matrix(f)
    minors = []
    for r1, r2 in combinations(range(3), 2):
        for c1, c2 in combinations(range(3), 2):
            m = H[r1][c1] * H[r2][c2] - H[r1][c2] * H[r2][c1]
            if m:
                minors.append(m)
    return minors


# ==================== Milnor 代数 ====================

def milnor_analysis(c: Curve, max_degree: Optional[int] = None) -> MilnorAnalysis:
    f = curve_polynomial(c)
    log("CURVE", f"🔍 {c.name}: 次数 {c.degree}, {len(c.components)} 个分支, 域 {c.field.name}")
    J = jacobian_ideal(f)
    if get_engine_config()["check"] and not ideal_membership(f, J):
        raise ZieglerError(f"Euler identity failed: f not in J for '{c.name}'")

    with timed("RES", f"{c.name} 极小分解"):
        R = minimize(free_resolution(J))
    B = betti_table(R)
    reg = regularity(B)

    guard = get_resolution_config()["guard_band"]
    upto = max_degree if max_degree is not None else reg + guard
    upto = max(upto, reg + 2)
    profile = [(t, hilbert_function(J, t)) for t in range(upto + 1)]
    tail = [v for t, v in profile if t >= reg + 1]
    reduced_ok = len(set(tail)) == 1
    tjurina = tail[0] if reduced_ok else None

    if get_engine_config()["check"]:
        _cross_check(c, J, R, B, profile)
    return MilnorAnalysis(c, J, R, B, reg, profile, reduced_ok, tjurina)


def _cross_check(c: Curve, J: GroebnerBasis, R: FreeResolution, B: BettiTable,
                 profile: List[Tuple[int, int]]) -> None:
    """--check: d∘d = 0, Hilbert 级数恒等式, Koszul 同调 Betti 数"""
    if not check_complex(R):
        raise ZieglerError(f"minimal resolution of '{c.name}' is not a complex")
    for t, v in profile:
        if hilbert_from_betti(B, t) != v:
            raise ZieglerError(f"Hilbert series identity fails at t={t} for '{c.name}'")
    kb = koszul_betti(J, max(j for _, j in B.entries))
    if kb != B:
        raise ZieglerError(f"Koszul homology disagrees with the minimal resolution of '{c.name}'")
    log("CHECK", f"✅ {c.name}: d∘d = 0, Hilbert 恒等式, Koszul Betti 数一致")


def milnor_resolution(c: Curve, max_degree: Optional[int] = None) -> Tuple[FreeResolution, BettiTable]:
    a = milnor_analysis(c, max_degree)
    if not a.reduced_ok:
        raise NonReducedCurveError(c.name, a.hilbert_profile)
    return a.resolution, a.betti


def ar_generator_degrees(B: BettiTable, d: int) -> List[int]:
    """AR(B) ⊂ S³ 的极小生成元次数: β_2j 贡献 j - (d - 1)"""
    out = []
    for (i, j), b in B.items():
        if i == 2:
            out.extend([j - (d - 1)] * b)
    return sorted(out)


# ==================== 奇异概形 ====================

def saturate_jacobian(J: GroebnerBasis) -> GroebnerBasis:
    """J^sat: 先用迭代上限内的 (J:m) 循环, 不稳定时改为逐变量饱和"""
    try:
        return saturate_irrelevant(J)
    except SaturationError as e:
        log("SAT", f"⚠️ {e}, 改用逐变量饱和")
        return saturate_by_variables(J)


def cusp_locus(c: Curve) -> GroebnerBasis:
    """(J_B + Hessian 2×2 子式) 的饱和: 尖点 (及更坏的非结点奇点) 的既约点集"""
    f = curve_polynomial(c)
    gens = gradient(f) + hessian_minors(f)
    with timed("SAT", f"{c.name} 尖点轨迹"):
        # 嵌入分量次数很高, 逐变量饱和
        return saturate_by_variables(ideal_basis(gens, c.field))


def _piece_dims(G: GroebnerBasis, degrees: Sequence[int] = (1, 2, 3)) -> Dict[int, int]:
    return {k: ideal_piece_dim(G, k) for k in degrees}


def singular_report(c: Curve, max_degree: Optional[int] = None, with_cusps: bool = True,
                    analysis: Optional[MilnorAnalysis] = None) -> SingularReport:
    """
    Tjurina 数 / Hilbert 轮廓 / (J^sat)_k 与尖点轨迹的 k = 1..3 次部分维数
    非既约曲线只标记 reduced_ok = False, 不抛异常, 也不做饱和
    尖点轨迹算不出来时 cusp_locus_available = False, 其余字段照常返回
    """
    a = analysis or milnor_analysis(c, max_degree)
    report = SingularReport(
        tjurina=a.tjurina,
        hilbert_profile=a.hilbert_profile,
        saturated_piece_dims={},
        reduced_ok=a.reduced_ok,
        regularity=a.regularity,
    )
    if not a.reduced_ok:
        log("CURVE", f"⚠️ {c.name}: Hilbert 轮廓不稳定, 曲线非既约")
        return report

    with timed("SAT", f"{c.name} 饱和 J^sat"):
        sat = saturate_jacobian(a.jacobian)
    report.saturated_piece_dims = _piece_dims(sat)
    if with_cusps:
        try:
            locus = cusp_locus(c)
        except SaturationError as e:
            log("CURVE", f"⚠️ {c.name}: 尖点轨迹不可用 ({e})")
            report.cusp_locus_available = False
            return report
        report.cusp_locus_dims = _piece_dims(locus)
        # 没有尖点时 (单位理想) 不算"过尖点的二次曲线"
        report.conic_through_cusps = not locus.is_unit() and report.cusp_locus_dims.get(2, 0) >= 1
    return report


# ==================== 比较与判定 ====================

def compare_betti(a: BettiTable, b: BettiTable) -> BettiComparison:
    if a.entries == b.entries:
        return BettiComparison(True)
    for key in sorted(set(a.entries) | set(b.entries)):
        if a.entries.get(key, 0) != b.entries.get(key, 0):
            return BettiComparison(False, key)
    return BettiComparison(True)


def component_degree_multiset(c: Curve) -> List[int]:
    return sorted(homogeneous_degree(comp.poly) for comp in c.components)


def saturated_profile_mismatch(ra: MilnorAnalysis, rb: MilnorAnalysis) -> Optional[str]:
    """S/J^sat 的 Hilbert 轮廓比较, 第一个不同的次数写进违例说明"""
    upto = max(ra.regularity, rb.regularity) + get_resolution_config()["guard_band"]
    pa = hilbert_profile(saturate_jacobian(ra.jacobian), upto)
    pb = hilbert_profile(saturate_jacobian(rb.jacobian), upto)
    for (t, va), (_, vb) in zip(pa, pb):
        if va != vb:
            return f"Hilbert profiles of S/J^sat differ (first at t={t}: {va} vs {vb})"
    return None


def ziegler_verdict(a: Curve, b: Curve, combinatorics_asserted: bool,
                    max_degree: Optional[int] = None) -> ZieglerVerdict:
    """
    断言组合等价 + Betti 表不同 => StrongZiegler
    断言组合等价 + Betti 表相同 => Inconclusive (AR 模是否同构不判定)
    未断言 => NotComparable
    违例 (分支次数 / τ / S/J^sat 轮廓) 只记录, 不改变判定
    """
    ra = milnor_analysis(a, max_degree)
    if not ra.reduced_ok:
        raise NonReducedCurveError(a.name, ra.hilbert_profile)
    rb = milnor_analysis(b, max_degree)
    if not rb.reduced_ok:
        raise NonReducedCurveError(b.name, rb.hilbert_profile)

    cmp = compare_betti(ra.betti, rb.betti)
    violations: List[str] = []
    if combinatorics_asserted:
        if component_degree_multiset(a) != component_degree_multiset(b):
            violations.append("component degree multisets differ")
        if ra.tjurina != rb.tjurina:
            violations.append(f"Tjurina numbers differ ({ra.tjurina} vs {rb.tjurina})")
        mismatch = saturated_profile_mismatch(ra, rb)
        if mismatch:
            violations.append(mismatch)
        verdict = Verdict.INCONCLUSIVE if cmp.equal else Verdict.STRONG_ZIEGLER
    else:
        verdict = Verdict.NOT_COMPARABLE
    for v in violations:
        log("CURVE", f"⚠️ 组合等价断言不成立: {v}")
    return ZieglerVerdict(combinatorics_asserted, cmp.equal, verdict, cmp.witness,
                          ra.betti, rb.betti, violations)


def expected_tjurina(counts: Dict[str, int]) -> int:
    total = 0
    for kind, n in counts.items():
        if kind not in TJURINA_WEIGHTS:
            raise UnknownSingularityError(kind)
        if n < 0:
            raise ValueError(f"negative count for '{kind}'")
        total += TJURINA_WEIGHTS[kind] * n
    return total


def tjurina_from_betti(B: BettiTable) -> Optional[int]:
    """N(1) = N'(1) = 0 时返回 N''(1)/2, 否则 None (奇异概形不是 0 维)"""
    n = betti_numerator(B)
    if n.at_one != 0 or n.derivative_at_one != 0:
        return None
    return n.second_derivative_half


def census_check(c: Curve, counts: Dict[str, int],
                 analysis: Optional[MilnorAnalysis] = None) -> Tuple[bool, Optional[int], int]:
    """(是否一致, 实算 τ, 由奇点计数得到的 τ)"""
    a = analysis or milnor_analysis(c)
    want = expected_tjurina(counts)
    return a.tjurina == want, a.tjurina, want
