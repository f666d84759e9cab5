# core/polyring.py - 稀疏三元多项式 S = k[x, y, z]
# -*- coding: utf-8 -*-
"""
多项式 = {单项式指数三元组: 非零系数} + 域描述符
- 单项式用 (e_x, e_y, e_z) 元组, 次数 = 三者之和
- 唯一的项序: 分次反字典序 (grevlex), x > y > z
- terms() 按 grevlex 严格降序给出 (系数, 单项式) 列表
"""

from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from .scalars import Field, FieldElement, QQ, check_same_field
from .utils import NotHomogeneousError, ZieglerError

Monomial = Tuple[int, int, int]
VARIABLES = ("x", "y", "z")
ONE: Monomial = (0, 0, 0)
UNIT_VECTORS: Tuple[Monomial, Monomial, Monomial] = ((1, 0, 0), (0, 1, 0), (0, 0, 1))

_MASK = (1 << 20) - 1


# ========== 单项式工具 ==========
def mono_degree(m: Monomial) -> int:
    return m[0] + m[1] + m[2]


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return (a[0] + b[0], a[1] + b[1], a[2] + b[2])


def mono_divides(a: Monomial, b: Monomial) -> bool:
    """a | b"""
    return a[0] <= b[0] and a[1] <= b[1] and a[2] <= b[2]


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    """b / a, 调用方保证 a | b"""
    return (b[0] - a[0], b[1] - a[1], b[2] - a[2])


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return (max(a[0], b[0]), max(a[1], b[1]), max(a[2], b[2]))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return not ((a[0] and b[0]) or (a[1] and b[1]) or (a[2] and b[2]))


def grevlex_key(m: Monomial) -> int:
    """整数排序键: 次数优先, 同次数时 z 指数小者大, 再比 y"""
    return ((m[0] + m[1] + m[2]) << 40) | ((_MASK - m[2]) << 20) | (_MASK - m[1])


def grevlex_cmp(m1: Monomial, m2: Monomial) -> int:
    k1, k2 = grevlex_key(m1), grevlex_key(m2)
    return (k1 > k2) - (k1 < k2)


def monomials_of_degree(t: int) -> List[Monomial]:
    """次数 t 的全部单项式, grevlex 降序"""
    if t < 0:
        return []
    mons = [(a, b, t - a - b) for a in range(t + 1) for b in range(t + 1 - a)]
    mons.sort(key=grevlex_key, reverse=True)
    return mons


def variable_index(v: Union[str, int]) -> int:
    if isinstance(v, int):
        if v not in (0, 1, 2):
            raise ValueError(f"variable index out of range: {v}")
        return v
    try:
        return VARIABLES.index(v)
    except ValueError:
        raise ValueError(f"unknown variable {v!r}") from None


# ========== 多项式 ==========
class Poly:
    __slots__ = ("field", "coeffs")

    def __init__(self, field: Field, coeffs: Optional[Dict[Monomial, FieldElement]] = None,
                 trusted: bool = False):
        self.field = field
        if trusted:
            self.coeffs = coeffs if coeffs is not None else {}
            return
        clean: Dict[Monomial, FieldElement] = {}
        for m, c in (coeffs or {}).items():
            c = field.coerce(c)
            if c:
                clean[tuple(m)] = c
        self.coeffs = clean

    # ---- 构造 ----
    @classmethod
    def zero(cls, field: Field = QQ) -> "Poly":
        return cls(field, {}, trusted=True)

    @classmethod
    def constant(cls, field: Field, c) -> "Poly":
        c = field.coerce(c)
        return cls(field, {ONE: c} if c else {}, trusted=True)

    @classmethod
    def variable(cls, field: Field, name: Union[str, int]) -> "Poly":
        return cls(field, {UNIT_VECTORS[variable_index(name)]: field.one}, trusted=True)

    @classmethod
    def monomial(cls, field: Field, mon: Monomial, c=1) -> "Poly":
        c = field.coerce(c)
        return cls(field, {tuple(mon): c} if c else {}, trusted=True)

    @classmethod
    def from_terms(cls, field: Field, terms: Iterable[Tuple[FieldElement, Monomial]]) -> "Poly":
        acc: Dict[Monomial, FieldElement] = {}
        for c, m in terms:
            m = tuple(m)
            acc[m] = acc.get(m, field.zero) + field.coerce(c)
        return cls(field, acc)

    # ---- 查询 ----
    def terms(self) -> List[Tuple[FieldElement, Monomial]]:
        return [(self.coeffs[m], m) for m in sorted(self.coeffs, key=grevlex_key, reverse=True)]

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    def leading_monomial(self) -> Monomial:
        if not self.coeffs:
            raise ZieglerError("zero polynomial has no leading term")
        return max(self.coeffs, key=grevlex_key)

    def leading_coefficient(self) -> FieldElement:
        return self.coeffs[self.leading_monomial()]

    def leading_term(self) -> Tuple[FieldElement, Monomial]:
        m = self.leading_monomial()
        return self.coeffs[m], m

    def degree(self) -> int:
        if not self.coeffs:
            return -1
        return max(mono_degree(m) for m in self.coeffs)

    def is_homogeneous(self) -> bool:
        return len({mono_degree(m) for m in self.coeffs}) <= 1

    def is_constant(self) -> bool:
        return not self.coeffs or (len(self.coeffs) == 1 and ONE in self.coeffs)

    def constant_value(self) -> FieldElement:
        return self.coeffs.get(ONE, self.field.zero)

    def coefficient(self, mon: Monomial) -> FieldElement:
        return self.coeffs.get(tuple(mon), self.field.zero)

    # ---- 算术 ----
    def _check(self, other: "Poly") -> None:
        check_same_field(self.field, other.field)

    def __add__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.field, other)
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            v = out.get(m)
            if v is None:
                out[m] = c
            else:
                v = v + c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly(self.field, out, trusted=True)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.field, {m: -c for m, c in self.coeffs.items()}, trusted=True)

    def __sub__(self, other):
        if not isinstance(other, Poly):
            other = Poly.constant(self.field, other)
        self._check(other)
        out = dict(self.coeffs)
        for m, c in other.coeffs.items():
            v = out.get(m)
            if v is None:
                out[m] = -c
            else:
                v = v - c
                if v:
                    out[m] = v
                else:
                    del out[m]
        return Poly(self.field, out, trusted=True)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Poly":
        c = self.field.coerce(c)
        if not c:
            return Poly.zero(self.field)
        return Poly(self.field, {m: v * c for m, v in self.coeffs.items()}, trusted=True)

    def mul_term(self, c, mon: Monomial) -> "Poly":
        """乘以单项 c·x^mon"""
        if not c:
            return Poly.zero(self.field)
        return Poly(self.field, {mono_mul(m, mon): v * c for m, v in self.coeffs.items()},
                    trusted=True)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        self._check(other)
        if not self.coeffs or not other.coeffs:
            return Poly.zero(self.field)
        out: Dict[Monomial, FieldElement] = {}
        for m1, c1 in self.coeffs.items():
            for m2, c2 in other.coeffs.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                v = out.get(m)
                out[m] = c1 * c2 if v is None else v + c1 * c2
        return Poly(self.field, {m: c for m, c in out.items() if c}, trusted=True)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative exponent")
        result = Poly.constant(self.field, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def monic(self) -> "Poly":
        if not self.coeffs:
            return self
        lc = self.leading_coefficient()
        if lc == 1:
            return self
        inv = 1 / lc
        return Poly(self.field, {m: c * inv for m, c in self.coeffs.items()}, trusted=True)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int,)) or hasattr(other, "denominator"):
            return self.coeffs == ({ONE: other} if other else {})
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.field.name, frozenset(self.coeffs.items())))

    def partial(self, v: Union[str, int]) -> "Poly":
        return partial(self, v)

    def evaluate(self, point: Sequence) -> FieldElement:
        total = self.field.zero
        px, py, pz = (self.field.coerce(p) for p in point)
        for (a, b, c), coef in self.coeffs.items():
            total = total + coef * (px ** a if a else 1) * (py ** b if b else 1) * (pz ** c if c else 1)
        return total

    def __repr__(self) -> str:
        return f"Poly({self})"

    def __str__(self) -> str:
        from .textio import render_poly
        return render_poly(self)


# ========== 运算接口 ==========
def poly_arith(f: Poly, g, op: str) -> Poly:
    """op ∈ add | sub | mul | scale; scale 时 g 为标量"""
    if op == "add":
        return f + g
    if op == "sub":
        return f - g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    raise ValueError(f"unknown op {op!r}")


def partial(f: Poly, v: Union[str, int]) -> Poly:
    """形式偏导"""
    i = variable_index(v)
    out: Dict[Monomial, FieldElement] = {}
    for m, c in f.coeffs.items():
        e = m[i]
        if e:
            nm = list(m)
            nm[i] = e - 1
            out[tuple(nm)] = c * e
    return Poly(f.field, out, trusted=True)


def gradient(f: Poly) -> List[Poly]:
    return [partial(f, i) for i in range(3)]


def homogeneous_degree(f: Poly) -> int:
    if f.is_zero():
        raise NotHomogeneousError("zero polynomial has no degree")
    degs = {mono_degree(m) for m in f.coeffs}
    if len(degs) != 1:
        raise NotHomogeneousError()
    return degs.pop()


def hessian_matrix(f: Poly) -> List[List[Poly]]:
    g = gradient(f)
    return [[partial(g[i], j) for j in range(3)] for i in range(3)]


def euler_combination(f: Poly) -> Poly:
    """x·∂x f + y·∂y f + z·∂z f (齐次 f 时等于 deg(f)·f)"""
    total = Poly.zero(f.field)
    for i, gi in enumerate(gradient(f)):
        total = total + gi.mul_term(f.field.one, UNIT_VECTORS[i])
    return total


def substitute_linear(f: Poly, images: Sequence[Poly]) -> Poly:
    """x -> images[0], y -> images[1], z -> images[2]"""
    if len(images) != 3:
        raise ValueError("need three images")
    for p in images:
        check_same_field(f.field, p.field)
    cache: Dict[Tuple[int, int], Poly] = {}

    def power(i: int, e: int) -> Poly:
        key = (i, e)
        if key not in cache:
            cache[key] = images[i] ** e
        return cache[key]

    total = Poly.zero(f.field)
    for (a, b, c), coef in f.coeffs.items():
        total = total + (power(0, a) * power(1, b) * power(2, c)).scale(coef)
    return total


def product(polys: Iterable[Poly], field: Field = QQ) -> Poly:
    result = Poly.constant(field, 1)
    for p in polys:
        result = result * p
    return result
