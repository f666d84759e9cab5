# core/scalars.py - 精确标量 (有理数 + 二次域 Q(√d))
# -*- coding: utf-8 -*-
"""
系数域只需要 Q 和 Q(√d) 两种:
- Rational 直接用 fractions.Fraction (任意精度, 自动约分, 分母恒正)
- QuadExt  表示 a + b·√d, a/b 为 Fraction, d 为 >1 的无平方因子整数

域描述符 (RationalField / QuadraticField) 挂在多项式/理想/矩阵上,
不同域混用直接报 "field mismatch", 不做隐式提升。
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Union

from .utils import FieldMismatchError

Rational = Fraction


def normalize(n: int, m: int) -> Fraction:
    """n/m 约分到最简, 分母为正"""
    if m == 0:
        raise ZeroDivisionError("division by zero")
    return Fraction(n, m)


def _is_square_free(d: int) -> bool:
    k = 2
    while k * k <= d:
        if d % (k * k) == 0:
            return False
        k += 1
    return True


class QuadExt:
    """a + b·√d"""

    __slots__ = ("a", "b", "d")

    def __init__(self, a: Any = 0, b: Any = 0, d: int = 2):
        self.a = a if isinstance(a, Fraction) else Fraction(a)
        self.b = b if isinstance(b, Fraction) else Fraction(b)
        self.d = d

    # ---- 内部: 统一成同一个域的 QuadExt ----
    def _lift(self, other: Any) -> "QuadExt":
        if isinstance(other, QuadExt):
            if other.d != self.d:
                raise FieldMismatchError()
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadExt(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return QuadExt(o.a - self.a, o.b - self.b, self.d)

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.d)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QuadExt(self.a * other, self.b * other, self.d)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return quad_mul(self, o)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return QuadExt(self.a / other, self.b / other, self.d)
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return quad_mul(self, quad_inv(o))

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is NotImplemented:
            return o
        return quad_mul(o, quad_inv(self))

    def __pow__(self, n: int) -> "QuadExt":
        if not isinstance(n, int) or n < 0:
            raise ValueError("exponent must be a natural number")
        result = QuadExt(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                result = quad_mul(result, base)
            base = quad_mul(base, base)
            n >>= 1
        return result

    def __bool__(self) -> bool:
        return bool(self.a) or bool(self.b)

    def __eq__(self, other) -> bool:
        if isinstance(other, QuadExt):
            return self.d == other.d and self.a == other.a and self.b == other.b
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def conjugate(self) -> "QuadExt":
        return QuadExt(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.d * self.b * self.b

    def is_rational(self) -> bool:
        return self.b == 0

    def __repr__(self) -> str:
        return f"QuadExt({self.a}, {self.b}, d={self.d})"

    def __str__(self) -> str:
        if not self.b:
            return str(self.a)
        if not self.a:
            return f"{self.b}*r"
        sign = "-" if self.b < 0 else "+"
        return f"{self.a} {sign} {abs(self.b)}*r"


def quad_mul(u: QuadExt, v: QuadExt) -> QuadExt:
    """(a1+b1√d)(a2+b2√d) = (a1a2 + d·b1b2) + (a1b2 + a2b1)√d"""
    if u.d != v.d:
        raise FieldMismatchError()
    return QuadExt(u.a * v.a + u.d * u.b * v.b, u.a * v.b + v.a * u.b, u.d)


def quad_inv(u: QuadExt) -> QuadExt:
    """共轭 / 范数"""
    if not u:
        raise ZeroDivisionError("division by zero")
    n = u.norm()
    # d 无平方因子时 a² = d·b² 只有零解
    assert n != 0, "norm vanished for a nonzero element"
    return QuadExt(u.a / n, -u.b / n, u.d)


def quad_add(u: QuadExt, v: QuadExt) -> QuadExt:
    if u.d != v.d:
        raise FieldMismatchError()
    return QuadExt(u.a + v.a, u.b + v.b, u.d)


def quad_sub(u: QuadExt, v: QuadExt) -> QuadExt:
    if u.d != v.d:
        raise FieldMismatchError()
    return QuadExt(u.a - v.a, u.b - v.b, u.d)


def quad_neg(u: QuadExt) -> QuadExt:
    return QuadExt(-u.a, -u.b, u.d)


def quad_conj(u: QuadExt) -> QuadExt:
    return u.conjugate()


def quad_norm(u: QuadExt) -> Fraction:
    """a² - d·b², 非零元的范数非零"""
    return u.norm()


# ========== 域描述符 ==========
@dataclass(frozen=True)
class RationalField:
    """Q"""

    @property
    def name(self) -> str:
        return "QQ"

    @property
    def d(self):
        return None

    @property
    def is_rational(self) -> bool:
        return True

    @property
    def zero(self) -> Fraction:
        return Fraction(0)

    @property
    def one(self) -> Fraction:
        return Fraction(1)

    def coerce(self, x: Any) -> Fraction:
        if isinstance(x, QuadExt):
            if x.b:
                raise FieldMismatchError()
            return x.a
        if isinstance(x, Fraction):
            return x
        if isinstance(x, int):
            return Fraction(x)
        raise FieldMismatchError()

    def contains(self, x: Any) -> bool:
        return isinstance(x, (int, Fraction))

    def generator(self):
        raise FieldMismatchError("field mismatch: sqrt generator requested over QQ")

    def descriptor(self) -> Dict[str, Any]:
        return {"kind": "rational"}


@dataclass(frozen=True)
class QuadraticField:
    """Q(√d)"""

    d: int

    def __post_init__(self):
        if not isinstance(self.d, int) or self.d <= 1 or not _is_square_free(self.d):
            raise ValueError(f"d must be a square-free integer > 1, got {self.d!r}")

    @property
    def name(self) -> str:
        return f"QQ(sqrt({self.d}))"

    @property
    def is_rational(self) -> bool:
        return False

    @property
    def zero(self) -> QuadExt:
        return QuadExt(0, 0, self.d)

    @property
    def one(self) -> QuadExt:
        return QuadExt(1, 0, self.d)

    def coerce(self, x: Any) -> QuadExt:
        if isinstance(x, QuadExt):
            if x.d != self.d:
                raise FieldMismatchError()
            return x
        if isinstance(x, (int, Fraction)):
            return QuadExt(x, 0, self.d)
        raise FieldMismatchError()

    def contains(self, x: Any) -> bool:
        return isinstance(x, QuadExt) and x.d == self.d

    def generator(self) -> QuadExt:
        return QuadExt(0, 1, self.d)

    def descriptor(self) -> Dict[str, Any]:
        return {"kind": "quadratic", "d": self.d}


Field = Union[RationalField, QuadraticField]
FieldElement = Union[Fraction, QuadExt]

QQ = RationalField()


def field_of(descriptor: Dict[str, Any]) -> Field:
    """{"kind": "rational"} | {"kind": "quadratic", "d": 2} -> 域对象"""
    kind = descriptor.get("kind")
    if kind == "rational":
        return QQ
    if kind == "quadratic":
        return QuadraticField(int(descriptor.get("d")))
    raise ValueError(f"unknown field kind {kind!r}")


def check_same_field(f1: Field, f2: Field) -> None:
    if f1 != f2:
        raise FieldMismatchError()
