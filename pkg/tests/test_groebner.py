import os
import random
from fractions import Fraction

import pytest
import sympy

from core.config_utils import ConfigManager
from core.groebner import (
    GradedModuleElement,
    buchberger,
    check_groebner,
    decode_poly,
    encode_poly,
    hilbert_function,
    hilbert_profile,
    ideal_basis,
    ideal_intersection,
    ideal_membership,
    ideal_piece_dim,
    ideal_quotient,
    ideal_sum,
    normal_form,
    primitive_integer_form,
    s_pair,
    saturate_by_variables,
    saturate_irrelevant,
    saturate_variable,
    standard_monomials,
    syzygies,
    syzygy_module,
)
from core.polyring import Poly, gradient, homogeneous_degree, monomials_of_degree
from core.scalars import QQ
from core.state import DB_FILENAME, get_cache
from core.utils import FieldMismatchError, SaturationError

SX, SY, SZ = sympy.symbols("x y z")


def to_sympy(p: Poly):
    return sum((sympy.Rational(c.numerator, c.denominator) * SX ** m[0] * SY ** m[1] * SZ ** m[2]
                for c, m in p.terms()), sympy.Integer(0))


def monic_dict_sympy(expr):
    # Poly.monic() 按 lex 首项归一, 这里要 grevlex 首项
    lc = sympy.LC(expr, SX, SY, SZ, order="grevlex")
    sp = sympy.Poly(sympy.expand(expr / lc), SX, SY, SZ)
    return frozenset((m, Fraction(int(c.p), int(c.q))) for m, c in sp.as_dict().items())


def monic_dict(p: Poly):
    return frozenset(p.monic().coeffs.items())


def sympy_oracle(polys):
    G = sympy.groebner([to_sympy(p) for p in polys], SX, SY, SZ, order="grevlex")
    return {monic_dict_sympy(g) for g in G.exprs}


def ideals(x, y, z):
    return [
        [x ** 2 + y * z, x * y - z ** 2, y ** 3 - x * z ** 2],
        [x * y + z ** 2, x ** 2 - y * z + z ** 2, y ** 3],
        [3 * x ** 2 + 2 * y * z, 2 * x * y - Fraction(1, 3) * z ** 2, x * z + y ** 2 - z ** 2],
        gradient(y ** 2 * z - x ** 3 - x ** 2 * z),
        gradient(x ** 4 + y ** 4 + z ** 4 + x ** 2 * y * z),
    ]


def test_reduced_basis_matches_sympy(xyz):
    for gens in ideals(*xyz):
        G = ideal_basis(gens)
        assert {monic_dict(p) for p in G.polys()} == sympy_oracle(gens)
        assert all(p.leading_coefficient() == 1 for p in G.polys())
        assert check_groebner(G)


def test_normal_form_transcript(xyz):
    x, y, z = xyz
    gens = [x ** 2 + y * z, x * y - z ** 2, y ** 3 - x * z ** 2]
    G = ideal_basis(gens)
    f = x ** 3 * y + 2 * x * y * z ** 2 - y ** 4 + 5 * z ** 4
    rem, quot = normal_form(f, G, transcript=True)
    polys = G.polys()
    recombined = rem
    for (idx, mult), q in quot.items():
        recombined = recombined + Poly.monomial(QQ, mult, q) * polys[idx]
    assert recombined == f
    # 余式里没有可约化的项
    leads = G.lead_monomials()
    for _, m in rem.terms():
        assert not any(all(a <= b for a, b in zip(l, m)) for l in leads)


def test_membership_and_s_pair(xyz):
    x, y, z = xyz
    assert s_pair(x ** 2, x * y).is_zero()
    assert s_pair(x ** 2 + y ** 2, x * y) == y ** 3
    G = ideal_basis([x ** 2 + y * z, x * y - z ** 2])
    assert ideal_membership(z * (x ** 2 + y * z) - y * (x * y - z ** 2), G)
    assert not ideal_membership(x, G)


def test_unit_and_zero_ideals():
    one = ideal_basis([Poly.constant(QQ, 1)])
    assert one.is_unit()
    assert hilbert_function(one, 3) == 0
    zero = ideal_basis([Poly.zero(QQ)])
    assert zero.is_zero()
    assert hilbert_function(zero, 2) == 6


def test_hilbert_function_complete_intersection(xyz):
    x, y, z = xyz
    G = ideal_basis([x ** 2, y ** 2, z ** 2])
    assert [v for _, v in hilbert_profile(G, 4)] == [1, 3, 3, 1, 0]
    assert ideal_piece_dim(G, 2) == 3
    assert standard_monomials(G, 3) == [(1, 1, 1)]


def test_hilbert_function_of_nodal_cubic(xyz):
    x, y, z = xyz
    J = ideal_basis(gradient(y ** 2 * z - x ** 3 - x ** 2 * z))
    assert hilbert_function(J, 6) == 1
    assert hilbert_function(J, 12) == 1


def test_quotient_and_intersection(xyz):
    x, y, z = xyz
    q = ideal_quotient(ideal_basis([x * y, x * z]), x)
    assert q.canonical() == ideal_basis([y, z]).canonical()
    inter = ideal_intersection(ideal_basis([x]), ideal_basis([y]))
    assert inter.polys() == [x * y]
    inter = ideal_intersection(ideal_basis([x, y]), ideal_basis([y, z]))
    assert inter.canonical() == ideal_basis([y, x * z]).canonical()
    s = ideal_sum(ideal_basis([x]), ideal_basis([y]))
    assert s.canonical() == ideal_basis([x, y]).canonical()
    with pytest.raises(ValueError):
        ideal_quotient(ideal_basis([x]), Poly.zero(QQ))


def test_saturation(xyz):
    x, y, z = xyz
    # (x) ∩ (x^2, y, z): 嵌入分量是无关理想的幂
    sat = saturate_irrelevant(ideal_basis([x ** 2, x * y, x * z]))
    assert sat.canonical() == ideal_basis([x]).canonical()
    # (x^2, xy) 的嵌入点 [0:0:1] 是真正的点, 已经饱和
    J = ideal_basis([x ** 2, x * y])
    assert saturate_irrelevant(J).canonical() == J.canonical()
    # m-准素 => 单位理想
    m2 = ideal_basis([x ** 2, x * y, y ** 2, x * z, y * z, z ** 2])
    assert saturate_irrelevant(m2).is_unit()


def test_saturation_iteration_bound(xyz):
    x, y, z = xyz
    J = ideal_basis([x ** 4, y ** 4, z ** 4])
    with pytest.raises(SaturationError):
        saturate_irrelevant(J, max_iterations=1)


def test_saturate_by_variable(xyz):
    x, y, z = xyz
    # (x^2, xy) = (x) ∩ (x^2, y)
    J = ideal_basis([x ** 2, x * y])
    assert saturate_variable(J, "x").is_unit()
    assert saturate_variable(J, "y").canonical() == ideal_basis([x]).canonical()
    assert saturate_variable(J, "z").canonical() == J.canonical()


def test_saturate_by_variables_matches_iteration(xyz):
    x, y, z = xyz
    m4 = ideal_basis([Poly.monomial(QQ, m) for m in monomials_of_degree(4)])
    point = ideal_basis([x, y])
    J = ideal_intersection(point, m4)
    assert saturate_by_variables(J).canonical() == point.canonical()
    assert saturate_by_variables(J).canonical() == saturate_irrelevant(J).canonical()
    assert saturate_by_variables(ideal_basis([x ** 2, x * y, x * z])).canonical() == ideal_basis([x]).canonical()
    # 迭代上限不够时逐变量饱和照样得到结果
    J = ideal_basis([x ** 4, y ** 4, z ** 4])
    with pytest.raises(SaturationError):
        saturate_irrelevant(J, max_iterations=1)
    assert saturate_by_variables(J).is_unit()


# ---------- 线性代数对照: 逐次数展开成系数矩阵 ----------

def degree_rows(polys, t):
    """J_t 的张成组: m·g (deg m = t - deg g), 每行是 t 次单项式上的系数"""
    index = {m: k for k, m in enumerate(monomials_of_degree(t))}
    rows = []
    for g in polys:
        e = t - homogeneous_degree(g)
        if e < 0:
            continue
        for m in monomials_of_degree(e):
            row = [sympy.Integer(0)] * len(index)
            for c, n in g.mul_term(QQ.one, m).terms():
                row[index[n]] = sympy.Rational(c.numerator, c.denominator)
            rows.append(row)
    return rows


def span_rank(rows):
    return sympy.Matrix(rows).rank() if rows else 0


def in_span(f, polys):
    t = homogeneous_degree(f)
    rows = degree_rows(polys, t)
    return span_rank(rows + degree_rows([f], t)) == span_rank(rows)


def random_form(rng, deg, n_terms=3):
    mons = rng.sample(monomials_of_degree(deg), min(n_terms, len(monomials_of_degree(deg))))
    return Poly(QQ, {m: Fraction(rng.choice([-3, -2, -1, 1, 2, 3])) for m in mons})


def random_ideal(seed):
    rng = random.Random(seed)
    return rng, [random_form(rng, rng.choice([2, 3, 4])) for _ in range(3)]


@pytest.mark.parametrize("seed", range(10))
def test_random_ideals_against_linear_algebra(seed):
    rng, gens = random_ideal(seed)
    G = ideal_basis(gens)
    assert check_groebner(G)
    for g in gens:
        assert ideal_membership(g, G)
    top = max(homogeneous_degree(g) for g in gens) + 1
    member = Poly.zero(QQ)
    for g in gens:
        member = member + random_form(rng, top - homogeneous_degree(g), 2) * g
    if member:
        assert ideal_membership(member, G)
    for _ in range(3):
        f = random_form(rng, top, 4)
        assert ideal_membership(f, G) == in_span(f, gens)
    for t in range(top + 2):
        want = len(monomials_of_degree(t)) - span_rank(degree_rows(gens, t))
        assert hilbert_function(G, t) == want


def quotient_piece_dim(gens, f, t):
    """dim (J : f)_t = #{h ∈ S_t : h·f ∈ J}, 线性代数直接算"""
    e = homogeneous_degree(f)
    base = degree_rows(gens, t + e)
    images = degree_rows([f], t + e)
    return len(monomials_of_degree(t)) - (span_rank(base + images) - span_rank(base))


def test_quotient_known_example(xyz):
    x, y, z = xyz
    J = ideal_basis([x ** 2, x * y + z ** 2, x * z ** 2, z ** 4])
    want = ideal_basis([x ** 2, x * y + z ** 2, x * z, z ** 3])
    assert ideal_quotient(J, z).canonical() == want.canonical()


@pytest.mark.parametrize("seed", range(4))
def test_random_quotients_against_linear_algebra(seed):
    rng, gens = random_ideal(100 + seed)
    J = ideal_basis(gens)
    f = random_form(rng, 1, 2)
    Q = ideal_quotient(J, f)
    for g in gens:
        assert ideal_membership(g, Q)
    for t in range(6):
        assert ideal_piece_dim(Q, t) == quotient_piece_dim(gens, f, t)


def test_syzygy_module_relations(xyz):
    x, y, z = xyz
    gens = [x ** 2 + y * z, x * y - z ** 2, y ** 3 - x * z ** 2, x * z]
    syz = syzygy_module(gens)
    assert syz
    for s in syz:
        assert s.is_homogeneous()
        total = Poly.zero(QQ)
        for g, c in zip(gens, s.components()):
            total = total + g * c
        assert total.is_zero()
    assert len(syzygy_module([x, y])) == 1


def test_schreyer_syzygies_annihilate_basis(xyz):
    x, y, z = xyz
    G = ideal_basis(gradient(x ** 4 + y ** 4 + z ** 4 + x ** 2 * y * z))
    S = syzygies(G)
    polys = G.polys()
    assert S.twists == tuple(G.degrees())
    for s in S:
        total = Poly.zero(QQ)
        for g, c in zip(polys, s.components()):
            total = total + g * c
        assert total.is_zero()


def test_module_basis_over_vectors(xyz):
    x, y, z = xyz
    v1 = GradedModuleElement.from_polys([x, y])
    v2 = GradedModuleElement.from_polys([y, z])
    G = buchberger([v1, v2])
    assert check_groebner(G)
    assert normal_form(v1.mul_term(1, (0, 1, 0)) - v2.mul_term(1, (1, 0, 0)), G).is_zero()


def test_quadratic_field_ideal(xyz2, sqrt2):
    x, y, z = xyz2
    r = Poly.constant(sqrt2, sqrt2.generator())
    G = ideal_basis([x - r * y, z ** 2])
    assert ideal_membership(x ** 2 - 2 * y ** 2, G)
    assert not ideal_membership(x ** 2 - y ** 2, G)
    assert check_groebner(G)


def test_field_mismatch_in_reduction(xyz, xyz2):
    G = ideal_basis([xyz2[0]])
    with pytest.raises(FieldMismatchError):
        normal_form(xyz[0], G)


def test_primitive_integer_form(xyz):
    x, y, z = xyz
    p = Fraction(1, 2) * x - Fraction(3, 4) * y
    assert primitive_integer_form(p) == 2 * x - 3 * y
    assert primitive_integer_form(-4 * x - 6 * z) == 2 * x + 3 * z
    assert decode_poly(encode_poly(p), QQ) == p


def test_cache_roundtrip(xyz, tmp_path):
    x, y, z = xyz
    cm = ConfigManager()
    cm.override("engine", "cache", True)
    cm.override("engine", "cache_dir", str(tmp_path))
    gens = gradient(x ** 3 + y ** 3 + z ** 3 - 3 * x * y * z)
    first = ideal_basis(gens)
    second = ideal_basis(gens)
    cache = get_cache()
    assert cache is not None
    assert cache.hits >= 1
    assert len(cache) == 1
    assert os.path.exists(os.path.join(str(tmp_path), DB_FILENAME))
    assert first.canonical() == second.canonical()
