from fractions import Fraction

import pytest

from core.catalog import catalog_entry
from core.curvelab import (
    Component,
    Curve,
    Verdict,
    ar_generator_degrees,
    census_check,
    compare_betti,
    component_degree_multiset,
    curve_polynomial,
    expected_tjurina,
    jacobian_ideal,
    milnor_analysis,
    milnor_resolution,
    saturated_profile_mismatch,
    singular_report,
    tjurina_from_betti,
    ziegler_verdict,
)
from core.groebner import ideal_membership
from core.polyring import euler_combination, substitute_linear
from core.resolution import BettiTable
from core.scalars import QQ, QuadraticField
from core.textio import parse_poly, singular_report_doc, validate_report, write_report
from core.utils import (
    CurveSchemaError,
    DegreeMismatchError,
    FieldMismatchError,
    NonReducedCurveError,
    NotHomogeneousError,
    SaturationError,
    UnknownSingularityError,
)


def make_curve(name, *parts, field=QQ):
    return Curve(name, field, [Component(label, kind, parse_poly(src, field)) for label, kind, src in parts])


@pytest.fixture
def three_lines():
    return make_curve("xyz", ("X", "line", "x"), ("Y", "line", "y"), ("Z", "line", "z"))


@pytest.fixture
def conic_tangent():
    return make_curve("tangent", ("C", "conic", "-x^2 + y*z"), ("L", "line", "z"))


@pytest.fixture
def conic_secant():
    return make_curve("secant", ("C", "conic", "-x^2 + y*z"), ("L", "line", "y - z"))


def test_curve_validation():
    with pytest.raises(DegreeMismatchError):
        make_curve("bad", ("L", "line", "x^2 + y*z"))
    with pytest.raises(NotHomogeneousError):
        make_curve("bad", ("C", "curve", "x^2 + y"))
    with pytest.raises(CurveSchemaError):
        Curve("empty", QQ, [])
    with pytest.raises(CurveSchemaError):
        make_curve("bad", ("Q", "quartic", "x^4"))
    line = parse_poly("x + r*y", QuadraticField(2))
    with pytest.raises(FieldMismatchError):
        Curve("mixed", QQ, [Component("M", "line", line)])


def test_curve_polynomial_and_euler(three_lines):
    f = curve_polynomial(three_lines)
    assert f == parse_poly("x*y*z")
    assert three_lines.degree == 3
    assert euler_combination(f) == 3 * f
    assert ideal_membership(f, jacobian_ideal(f))


def test_jacobian_of_a_line_rejected():
    with pytest.raises(DegreeMismatchError):
        jacobian_ideal(parse_poly("x + y"))


def test_three_lines_resolution(three_lines):
    R, B = milnor_resolution(three_lines)
    assert B == BettiTable({(0, 0): 1, (1, 2): 3, (2, 3): 2})
    assert ar_generator_degrees(B, 3) == [1, 1]
    assert tjurina_from_betti(B) == 3


def test_non_reduced_curve():
    doubled = make_curve("doubled", ("A", "line", "x"), ("B", "line", "x"), ("C", "line", "y"))
    with pytest.raises(NonReducedCurveError) as info:
        milnor_resolution(doubled)
    assert info.value.name == "doubled"
    report = singular_report(doubled)
    assert not report.reduced_ok
    assert report.tjurina is None
    assert report.saturated_piece_dims == {}
    values = [v for _, v in report.hilbert_profile]
    assert values[-1] > values[-2]


def test_singular_report_three_lines(three_lines):
    report = singular_report(three_lines)
    assert report.reduced_ok
    assert report.tjurina == 3
    assert report.saturated_piece_dims == {1: 0, 2: 3, 3: 7}
    # 结点不是尖点: 尖点轨迹为空
    assert report.cusp_locus_dims == {1: 3, 2: 6, 3: 10}
    assert not report.conic_through_cusps


def test_cuspidal_cubic():
    cusp = make_curve("cusp", ("B", "cubic", "y^2*z - x^3"))
    report = singular_report(cusp)
    assert report.tjurina == 2
    assert report.cusp_locus_dims[1] == 2
    assert report.cusp_locus_dims[2] == 5
    assert report.conic_through_cusps
    assert census_check(cusp, {"cusp": 1}) == (True, 2, 2)
    assert census_check(cusp, {"node": 1}) == (False, 2, 1)


def test_nodal_cubic_has_no_cusps():
    nodal = make_curve("nodal", ("B", "cubic", "y^2*z - x^3 - x^2*z"))
    report = singular_report(nodal)
    assert report.tjurina == 1
    assert report.cusp_locus_dims[2] == 6
    assert not report.conic_through_cusps


def test_expected_tjurina():
    assert expected_tjurina({"node": 7, "tacnode": 6, "triple": 2}) == 33
    assert expected_tjurina({"cusp": 6}) == 12
    assert expected_tjurina({"A1": 2, "D4": 1}) == 6
    with pytest.raises(UnknownSingularityError, match="unknown kind"):
        expected_tjurina({"E6": 1})
    with pytest.raises(ValueError):
        expected_tjurina({"node": -1})


def test_compare_betti_witness():
    a = BettiTable({(0, 0): 1, (1, 5): 3, (2, 8): 1, (2, 10): 3, (3, 11): 1, (3, 12): 1})
    b = BettiTable({(0, 0): 1, (1, 5): 3, (2, 9): 2, (2, 10): 3, (3, 11): 3})
    cmp = compare_betti(a, b)
    assert not cmp.equal
    assert cmp.witness == (2, 8)
    assert compare_betti(a, a).equal
    assert compare_betti(b, a).witness == cmp.witness


def test_verdict_on_identical_curves(three_lines):
    v = ziegler_verdict(three_lines, three_lines, combinatorics_asserted=True)
    assert v.betti_equal
    assert v.verdict == Verdict.INCONCLUSIVE
    assert v.assertion_violations == []
    v = ziegler_verdict(three_lines, three_lines, combinatorics_asserted=False)
    assert v.verdict == Verdict.NOT_COMPARABLE


def test_verdict_reports_assertion_violations(conic_tangent, conic_secant):
    assert component_degree_multiset(conic_tangent) == [1, 2]
    v = ziegler_verdict(conic_tangent, conic_secant, combinatorics_asserted=True)
    assert not v.betti_equal
    assert v.verdict == Verdict.STRONG_ZIEGLER
    assert any("Tjurina" in s for s in v.assertion_violations)
    assert any("S/J^sat" in s for s in v.assertion_violations)
    assert milnor_analysis(conic_tangent).tjurina == 3
    assert milnor_analysis(conic_secant).tjurina == 2


def test_saturated_profiles_of_identical_curves_agree(conic_tangent, conic_secant):
    a = milnor_analysis(conic_tangent)
    assert saturated_profile_mismatch(a, a) is None
    b = milnor_analysis(conic_secant)
    # 切点是长度 3 的曲线型概形, 两个结点只是两个点
    assert "t=1: 3 vs 2" in saturated_profile_mismatch(a, b)


def test_fermat_quintic_ar_degrees():
    fermat = make_curve("fermat5", ("F", "curve", "x^5 + y^5 + z^5"))
    R, B = milnor_resolution(fermat)
    assert B == BettiTable({(0, 0): 1, (1, 4): 3, (2, 8): 3, (3, 12): 1})
    assert ar_generator_degrees(B, 5) == [4, 4, 4]
    assert tjurina_from_betti(B) == 0


def test_singular_report_without_cusp_locus(three_lines, monkeypatch):
    def unstable(c):
        raise SaturationError("saturation did not stabilise within 10 iterations")

    monkeypatch.setattr("core.curvelab.cusp_locus", unstable)
    report = singular_report(three_lines)
    assert report.tjurina == 3
    assert report.saturated_piece_dims == {1: 0, 2: 3, 3: 7}
    assert not report.cusp_locus_available
    assert report.cusp_locus_dims == {}
    assert not report.conic_through_cusps
    doc = singular_report_doc(three_lines, report)
    assert validate_report(doc) == []
    assert doc["cusp_locus_available"] is False
    assert "unavailable" in write_report(doc, "text").decode("utf-8")


def transformed(c, images=None, scales=None, reverse=False):
    comps = []
    for k, comp in enumerate(c.components):
        poly = comp.poly if images is None else substitute_linear(comp.poly, images)
        if scales:
            poly = poly.scale(scales[k % len(scales)])
        comps.append(Component(comp.label, comp.kind, poly))
    if reverse:
        comps.reverse()
    return Curve(f"{c.name}'", c.field, comps)


def test_betti_table_invariant_under_coordinates_and_scaling(xyz):
    x, y, z = xyz
    c = make_curve("conic+2", ("C", "conic", "-x^2 + y*z"), ("L", "line", "z"), ("M", "line", "x - y"))
    R, want = milnor_resolution(c)
    tau = milnor_analysis(c).tjurina
    variants = [
        transformed(c, scales=[3, Fraction(-1, 2)]),
        transformed(c, reverse=True),
        transformed(c, images=[y, z, x]),
        transformed(c, images=[x + y, y, z - 2 * x], scales=[5], reverse=True),
    ]
    for v in variants:
        a = milnor_analysis(v)
        assert a.betti == want, v.name
        assert a.tjurina == tau


@pytest.mark.slow
def test_six_cuspidal_sextics():
    b1 = make_curve("B1", ("B", "sextic-irreducible", "(x^2 + y^2 + z^2)^3 + (x^3 + y^3 + z^3)^2"))
    b2 = make_curve("B2", ("B", "sextic-irreducible",
                           "x^6 - x^4*y^2 + 1/3*x^2*y^4 - 1/27*y^6 + 2*x^3*y^2*z - 2*x^4*z^2"
                           " - 5/3*x^2*y^2*z^2 - 2/9*y^4*z^2 + 4/3*x^2*z^4 + 5/9*y^2*z^4 - 8/27*z^6"))
    v = ziegler_verdict(b1, b2, combinatorics_asserted=True)
    assert v.verdict == Verdict.STRONG_ZIEGLER
    assert v.betti_a == BettiTable({(0, 0): 1, (1, 5): 3, (2, 8): 1, (2, 10): 3, (3, 11): 1, (3, 12): 1})
    assert v.betti_b == BettiTable({(0, 0): 1, (1, 5): 3, (2, 9): 2, (2, 10): 3, (3, 11): 3})
    # 尖点位置不同, S/J^sat 轮廓可以不同; 次数和 τ 必须一致
    assert all("S/J^sat" in s for s in v.assertion_violations)

    r1, r2 = singular_report(b1), singular_report(b2)
    assert r1.tjurina == r2.tjurina == 12
    # 六个尖点在一条二次曲线上 <=> 尖点轨迹的二次部分非零
    assert r1.cusp_locus_dims[2] == 1
    assert r1.conic_through_cusps
    assert r2.cusp_locus_dims[2] == 0
    assert not r2.conic_through_cusps


@pytest.mark.slow
def test_catalog_curve_invariant_under_reordering_and_scaling():
    entry = catalog_entry("deg7-B5,2")
    v = transformed(entry.curve, scales=[-1, Fraction(2, 3)], reverse=True)
    assert milnor_analysis(v).betti == entry.expected_betti


@pytest.mark.slow
def test_singular_report_deg8():
    report = singular_report(catalog_entry("deg8-B1").curve)
    assert report.reduced_ok
    assert report.tjurina == 33
    assert report.cusp_locus_available
