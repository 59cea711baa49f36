import pytest

from src.exceptions import AxiomError, BadRequestError, CapExceededError, ParseError
from src.fgl.service import (
    chi,
    chi_apply,
    cofactor_inverse,
    default_cap,
    difference_cofactor,
    fgl_apply,
    is_polynomial_inverse,
    law_from_file,
    lazard_relations,
    make_additive,
    make_from_coeffs,
    make_multiplicative,
    resolve_law,
    verify_axioms,
)
from src.polyring.model import ZZ_BETA, Poly, RingKind
from src.polyring.service import parse_poly, substitute, x, y


# Tests for the built-in laws
def test_chi_multiplicative():
    """Tests chi(u) = -u - b*u^2 - b^2*u^3 up to degree 3."""
    assert str(chi(make_multiplicative(3)).poly) == "-u - b*u^2 - b^2*u^3"


def test_chi_additive(additive_law):
    """Tests chi(u) = -u for the additive law."""
    assert chi(additive_law).poly == -Poly.var("u")
    assert is_polynomial_inverse(additive_law)


def test_chi_is_cached(multiplicative_law):
    """Tests that the inverse series is computed once per law."""
    assert chi(multiplicative_law) is chi(multiplicative_law)
    assert not is_polynomial_inverse(multiplicative_law)


def test_fgl_apply_multiplicative(multiplicative_law):
    """Tests F(x1, y1) = x1 + y1 - b*x1*y1."""
    assert fgl_apply(multiplicative_law, x(1), y(1)) == parse_poly("x1 + y1 - b*x1*y1")


def test_fgl_apply_constant_term(additive_law):
    """Tests that exact evaluation refuses arguments with a constant term."""
    with pytest.raises(BadRequestError):
        fgl_apply(additive_law, 1 + x(1), y(1))


def test_chi_apply_inverts(multiplicative_law):
    """Tests F(y1, chi(y1)) = 0 up to the cap."""
    chi_y = chi_apply(multiplicative_law, y(1, ZZ_BETA))
    value = fgl_apply(multiplicative_law, y(1, ZZ_BETA), chi_y, cap=multiplicative_law.cap)
    assert value.is_zero()


def test_chi_apply_graded_by_b():
    """Tests truncation by the power of b."""
    law = make_multiplicative(3)
    chi_y = chi_apply(law, y(1, ZZ_BETA), cap=1, graded={"b"})
    assert chi_y == parse_poly("-y1 - b*y1^2")


# Tests for the difference cofactor
def test_cofactor_inverse_additive(additive_law):
    """Tests that F(u, chi(v)) = u - v has cofactor 1."""
    assert cofactor_inverse(additive_law).poly == 1


def test_cofactor_inverse_multiplicative():
    """Tests F(u, chi(v)) = (u - v) / (1 - b*v)."""
    assert cofactor_inverse(make_multiplicative(4)).poly == parse_poly("1 - b*v")


USER_LAWS = {
    "doubled": {(1, 0): 1, (0, 1): 1, (1, 1): 2},
    "named": {(1, 0): 1, (0, 1): 1, (1, 1): "c"},
}


@pytest.fixture(params=["additive", "multiplicative", "doubled", "named"])
def any_law(request):
    """Provides built-in and user laws at cap 6."""
    if request.param == "additive":
        return make_additive(6)
    if request.param == "multiplicative":
        return make_multiplicative(6)
    return make_from_coeffs(USER_LAWS[request.param], 6, name=request.param)


def test_chi_is_an_involution(any_law):
    """Tests chi(chi(u)) = u up to the cap."""
    u = Poly.var("u", any_law.ring)
    assert chi_apply(any_law, chi(any_law).poly, graded={"u"}) == u


def test_chi_is_a_left_inverse(any_law):
    """Tests F(chi(u), u) = 0 on the truncated series."""
    value = fgl_apply(any_law, chi(any_law), Poly.var("u", any_law.ring))
    assert value.cap == any_law.cap
    assert value.poly.is_zero()


@pytest.mark.parametrize("name", sorted(USER_LAWS))
def test_difference_cofactor_factorizes_user_law(name):
    """Tests F(u, chi(v)) = (u - v) * U(u, v) with U(0, 0) = 1 for a validated user law."""
    law = make_from_coeffs(USER_LAWS[name], 6, name=name)
    assert verify_axioms(law).passed
    u = Poly.var("u", law.ring)
    v = Poly.var("v", law.ring)
    chi_v = chi(law).poly.rename({"u": "v"})
    value = fgl_apply(law, u, chi_v, cap=law.cap, graded={"u", "v"})
    cofactor = difference_cofactor(law)
    assert cofactor.poly.constant_term({"u", "v"}) == 1
    assert (u - v) * cofactor.poly == value
    assert (cofactor_inverse(law) * cofactor) == 1


# Tests for axioms
def test_verify_axioms_builtin(additive_law, multiplicative_law):
    """Tests that the built-in laws pass every axiom."""
    assert verify_axioms(additive_law).passed
    assert verify_axioms(multiplicative_law).passed


def test_verify_axioms_law_file(law_file):
    """Tests a user law read from a JSON file."""
    law = law_from_file(law_file)
    assert law.name == "doubled"
    assert law.cap == 5
    assert verify_axioms(law).passed
    assert str(chi(law).poly) == "-u + 2*u^2 - 4*u^3 + 8*u^4 - 16*u^5"


def test_verify_axioms_broken_law(broken_law_file):
    """Tests that u + v + u^2*v^2 fails associativity in degree 4."""
    report = verify_axioms(law_from_file(broken_law_file))
    assert not report.passed
    checks = {check.axiom: check for check in report.checks}
    assert checks["unit"].passed
    assert checks["commutativity"].passed
    assert not checks["associativity"].passed
    assert checks["associativity"].offending == "2*u^2*v*w"


def test_make_from_coeffs_symmetry():
    """Tests that a_12 without a_21 is refused."""
    with pytest.raises(AxiomError, match="Symmetry"):
        make_from_coeffs({(1, 0): 1, (0, 1): 1, (1, 2): 1}, 4)


def test_make_from_coeffs_unit():
    """Tests that a pure power of u is refused."""
    with pytest.raises(AxiomError, match="Unit"):
        make_from_coeffs({(1, 0): 1, (0, 1): 1, (2, 0): 1}, 4)


def test_make_from_coeffs_named_generator():
    """Tests a law over Z[c] with c of grade -1."""
    law = make_from_coeffs({(1, 0): 1, (0, 1): 1, (1, 1): "c"}, 3)
    assert law.ring.kind == RingKind.NAMED_POLYNOMIAL
    assert law.ring.grade("c") == -1
    assert str(chi(law).poly) == "-u + c*u^2 - c^2*u^3"


def test_resolve_law():
    """Tests built-in names and a missing file."""
    assert resolve_law("add").name == "additive"
    assert resolve_law("MULT", 5).cap == 5
    with pytest.raises(ParseError):
        resolve_law("/nonexistent/law.json")


def test_default_cap():
    """Tests the cap that keeps products of n(n-1) roots exact."""
    assert default_cap(1) == 2
    assert default_cap(4) == 12


# Tests for the associativity ideal
def test_lazard_relations_low_degree():
    """Tests that associativity imposes nothing below degree 4."""
    assert lazard_relations(3) == []


def test_lazard_relations_vanish_on_known_laws():
    """Tests that a_11 := -b and a_ij := 0 otherwise kills every relation."""
    relations = lazard_relations(4)
    assert relations
    for relation in relations:
        bindings = {
            name: (-Poly.beta() if name == "a1_1" else Poly.zero(ZZ_BETA))
            for name in relation.ring.symbols
        }
        assert substitute(relation, bindings, ring=ZZ_BETA).is_zero()


def test_law_and_relation_caps():
    """Tests that law caps and relation degrees outside the supported range are refused."""
    with pytest.raises(BadRequestError):
        make_additive(0)
    with pytest.raises(CapExceededError):
        make_multiplicative(31)
    with pytest.raises(CapExceededError):
        lazard_relations(7)
    assert make_additive(default_cap(6)).cap == 30
