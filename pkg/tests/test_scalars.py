import random
from fractions import Fraction

import pytest

from core.scalars import (
    QQ,
    QuadExt,
    QuadraticField,
    check_same_field,
    field_of,
    normalize,
    quad_add,
    quad_conj,
    quad_inv,
    quad_mul,
    quad_neg,
    quad_norm,
    quad_sub,
)
from core.utils import FieldMismatchError


def test_normalize_reduces_and_keeps_denominator_positive():
    assert normalize(6, 4) == Fraction(3, 2)
    q = normalize(1, -3)
    assert q == Fraction(-1, 3)
    assert q.denominator == 3


def test_normalize_zero_denominator():
    with pytest.raises(ZeroDivisionError, match="division by zero"):
        normalize(1, 0)


def test_quad_mul_conjugate_pair():
    u = QuadExt(1, 1, 2)
    v = QuadExt(1, -1, 2)
    assert quad_mul(u, v) == -1
    assert u * v == QuadExt(-1, 0, 2)


def test_quad_inverse():
    u = QuadExt(3, 2, 2)
    assert quad_mul(u, quad_inv(u)) == 1
    w = QuadExt(Fraction(1, 2), -5, 2)
    assert w * quad_inv(w) == 1
    assert 1 / w == quad_inv(w)


def test_quad_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        quad_inv(QuadExt(0, 0, 2))


def test_quad_helpers():
    u, v = QuadExt(3, 2, 2), QuadExt(-1, 5, 2)
    assert quad_add(u, v) == QuadExt(2, 7, 2)
    assert quad_sub(u, v) == QuadExt(4, -3, 2)
    assert quad_neg(u) == QuadExt(-3, -2, 2)
    assert quad_conj(u) == QuadExt(3, -2, 2)
    assert quad_norm(u) == 1
    assert quad_mul(u, quad_conj(u)) == quad_norm(u)


def test_mixed_radicands_rejected():
    with pytest.raises(FieldMismatchError, match="field mismatch"):
        QuadExt(1, 1, 2) + QuadExt(1, 1, 3)
    with pytest.raises(FieldMismatchError):
        quad_add(QuadExt(1, 1, 2), QuadExt(1, 1, 5))


def test_rational_embeds_in_quadratic():
    u = QuadExt(0, 1, 2)
    assert u * u == 2
    assert u + Fraction(1, 2) == QuadExt(Fraction(1, 2), 1, 2)
    assert hash(QuadExt(5, 0, 2)) == hash(Fraction(5))


def test_field_descriptors():
    K = QuadraticField(2)
    assert K.name == "QQ(sqrt(2))"
    assert K.generator() * K.generator() == 2
    assert field_of({"kind": "quadratic", "d": 2}) == K
    assert field_of({"kind": "rational"}) is QQ
    assert K.coerce(3) == QuadExt(3, 0, 2)
    assert QQ.coerce(QuadExt(Fraction(1, 3), 0, 2)) == Fraction(1, 3)


@pytest.mark.parametrize("d", [0, 1, 4, 12, -3])
def test_bad_radicand(d):
    with pytest.raises(ValueError):
        QuadraticField(d)


def test_rational_field_has_no_generator():
    with pytest.raises(FieldMismatchError):
        QQ.generator()
    with pytest.raises(FieldMismatchError):
        QQ.coerce(QuadExt(0, 1, 2))


def test_check_same_field():
    check_same_field(QQ, QQ)
    check_same_field(QuadraticField(2), QuadraticField(2))
    with pytest.raises(FieldMismatchError):
        check_same_field(QQ, QuadraticField(2))


def random_fraction(rng):
    return Fraction(rng.randint(-20, 20), rng.randint(1, 12))


def random_quad(rng, d):
    return QuadExt(random_fraction(rng), random_fraction(rng), d)


@pytest.mark.parametrize("d", [2, 3, -1])
def test_quadratic_field_axioms(d):
    rng = random.Random(d)
    zero, one = QuadExt(0, 0, d), QuadExt(1, 0, d)
    for _ in range(50):
        u, v, w = (random_quad(rng, d) for _ in range(3))
        assert u + v == v + u
        assert u * v == v * u
        assert (u + v) + w == u + (v + w)
        assert (u * v) * w == u * (v * w)
        assert u * (v + w) == u * v + u * w
        assert u + zero == u and u * one == u
        assert u + (-u) == zero
        assert u - v == u + (-v)
        if u:
            assert u * quad_inv(u) == one
            assert (v / u) * u == v
            assert quad_norm(u) != 0
        assert quad_conj(u * v) == quad_conj(u) * quad_conj(v)
        assert quad_norm(u * v) == quad_norm(u) * quad_norm(v)


def test_rational_field_axioms():
    rng = random.Random(7)
    for _ in range(50):
        p, q, r = (random_fraction(rng) for _ in range(3))
        assert QQ.coerce(p) * (q + r) == p * q + p * r
        if p:
            assert p * (1 / p) == 1
        assert normalize(p.numerator * 6, p.denominator * 6) == p
        # Q 嵌入 Q(√2) 保持加法和乘法
        assert QuadExt(p, 0, 2) * QuadExt(q, 0, 2) == p * q
        assert QuadExt(p, 0, 2) + q == p + q
