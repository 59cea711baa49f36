import pytest

from src.entities.polynomial import CachedPolynomial
from src.exceptions import BadRequestError, CapExceededError, SizeMismatchError
from src.permgroup.service import all_permutations, identity, parse_permutation
from src.polyring.model import ZZ_BETA, Poly, RingKind
from src.polyring.service import exact_div, parse_poly, random_poly, swap_vars, x
from src.schubert_calc import service as schubert_service
from src.schubert_calc.model import PolynomialFamilyKind
from src.schubert_calc.service import (
    apply_partial,
    apply_phi,
    apply_pi,
    apply_word,
    degeneracy_class,
    double_poly,
    double_poly_along,
    family_table,
    negate_y,
    specialize_beta,
    telescoping_product,
    top_poly,
)

SCHUBERT = PolynomialFamilyKind.SCHUBERT
GROTHENDIECK = PolynomialFamilyKind.GROTHENDIECK
BETA = PolynomialFamilyKind.BETA
ROOTS = ["x1", "x2", "x3", "y1", "y2"]


# Tests for the divided difference operators
def test_operators_on_small_inputs():
    """Tests d, pi and phi on 1, x1 and x1^2."""
    one = Poly.constant(1, ZZ_BETA)
    assert apply_partial(1, x(1)) == 1
    assert apply_partial(1, x(1) ** 2) == x(1) + x(2)
    assert apply_partial(1, one).is_zero()
    assert apply_pi(1, x(1)) == 1
    assert apply_pi(1, one) == 1
    assert apply_phi(1, x(1)) == 1
    assert apply_phi(1, one) == -Poly.beta()


def test_operator_index_must_be_positive():
    """Tests that index 0 is refused."""
    with pytest.raises(SizeMismatchError):
        apply_partial(0, x(1))


def test_quadratic_relations(rng):
    """Tests d^2 = 0, pi^2 = pi and phi^2 = -b phi."""
    for _ in range(100):
        p = random_poly(rng, ROOTS)
        assert apply_partial(1, apply_partial(1, p)).is_zero()
        assert apply_pi(2, apply_pi(2, p)) == apply_pi(2, p)
        assert apply_phi(1, apply_phi(1, p)) == -Poly.beta() * apply_phi(1, p)


def test_braid_relation(rng):
    """Tests phi_1 phi_2 phi_1 = phi_2 phi_1 phi_2."""
    for _ in range(100):
        p = random_poly(rng, ROOTS)
        assert apply_word(BETA, (1, 2, 1), p) == apply_word(BETA, (2, 1, 2), p)


@pytest.mark.parametrize("i", [1, 2])
def test_phi_is_linear_over_symmetric_polynomials(rng, i):
    """Tests phi_i(S * P) = S * phi_i(P) when S is symmetric in x_i, x_{i+1}."""
    for _ in range(50):
        q = random_poly(rng, ROOTS, terms=3)
        s = q + swap_vars(q, i)
        p = random_poly(rng, ROOTS)
        assert apply_phi(i, s * p) == s * apply_phi(i, p)


@pytest.mark.parametrize("i", [1, 2])
def test_difference_is_divisible(rng, i):
    """Tests that P - sigma_i P is divisible by x_i - x_{i+1}."""
    for _ in range(100):
        p = random_poly(rng, ROOTS, terms=5, max_exp=3)
        difference = p - swap_vars(p, i)
        quotient = exact_div(difference, x(i) - x(i + 1))
        assert quotient * (x(i) - x(i + 1)) == difference


# Tests for the polynomial families
def test_beta_polynomial_of_transposition():
    """Tests the beta-polynomial of [2,1]."""
    value = double_poly(BETA, parse_permutation("[2,1]")).value
    assert str(value) == "x1 + y1 + b*x1*y1"


@pytest.mark.parametrize(
    "perm, expected",
    [
        ("[1,2,3]", "1"),
        ("[2,1,3]", "x1 - y1"),
        ("[1,3,2]", "x1 + x2 - y1 - y2"),
        ("[3,1,2]", "(x1 - y1)*(x1 - y2)"),
        ("[2,3,1]", "(x1 - y1)*(x2 - y1)"),
        ("[3,2,1]", "(x1 - y1)*(x1 - y2)*(x2 - y1)"),
    ],
)
def test_double_schubert_s3(perm, expected):
    """Tests the double Schubert polynomials of S_3."""
    assert double_poly(SCHUBERT, parse_permutation(perm)).value == parse_poly(expected)


def test_grothendieck_of_transposition():
    """Tests the Grothendieck polynomial of [2,1]."""
    assert str(double_poly(GROTHENDIECK, parse_permutation("[2,1]"))) == "x1 + y1 - x1*y1"


def test_top_poly():
    """Tests the longest-element base case and its size check."""
    assert top_poly(SCHUBERT, 3).value == parse_poly("(x1 - y1)*(x1 - y2)*(x2 - y1)")
    assert top_poly(BETA, 1).value == 1
    with pytest.raises(SizeMismatchError):
        top_poly(SCHUBERT, 0)
    with pytest.raises(CapExceededError, match="n <= 5"):
        top_poly(BETA, 6)
    with pytest.raises(CapExceededError):
        double_poly(SCHUBERT, parse_permutation("[7,6,5,4,3,2,1]"))


def test_special_values():
    """Tests b := 0 with y := -y and b := -1 on every permutation of S_3."""
    for w in all_permutations(3):
        beta_poly = double_poly(BETA, w)
        assert negate_y(specialize_beta(beta_poly, 0)) == double_poly(SCHUBERT, w).value
        assert specialize_beta(beta_poly, -1) == double_poly(GROTHENDIECK, w).value


def test_stability_under_embedding():
    """Tests that polynomials do not change when w moves to S_{n+1}."""
    for w in all_permutations(3):
        bigger = parse_permutation(str(list(w.images) + [4]))
        assert double_poly(BETA, w).value == double_poly(BETA, bigger).value


def test_double_poly_along_every_word():
    """Tests that both reduced words of w0 give the same polynomial of the identity."""
    w = identity(3)
    assert double_poly_along(BETA, w, (1, 2, 1)).value == 1
    assert double_poly_along(BETA, w, (2, 1, 2)).value == 1


def test_double_poly_along_invalid_word():
    """Tests that a word that is not reduced for w0*w is refused."""
    with pytest.raises(BadRequestError):
        double_poly_along(BETA, identity(3), (1, 1))


# Tests for specializations
def test_specialize_beta_values():
    """Tests b := 0, b := -b and a refused value."""
    p = double_poly(BETA, parse_permutation("[2,1]"))
    zero = specialize_beta(p, 0)
    assert zero == parse_poly("x1 + y1")
    assert zero.ring.kind == RingKind.INTEGERS
    assert specialize_beta(p, "-b") == parse_poly("x1 + y1 - b*x1*y1")
    with pytest.raises(BadRequestError):
        specialize_beta(p, "2")


def test_negate_y():
    """Tests y_j := -y_j."""
    assert negate_y(parse_poly("x1 + y1 + y1*y2")) == parse_poly("x1 - y1 + y1*y2")


def test_telescoping_products():
    """Tests phi_m H_m = H_{m+1} and the two ends of the telescope."""
    for n in (1, 2, 3):
        assert telescoping_product(n, 1) == top_poly(BETA, n + 1).value
        assert telescoping_product(n, n + 1) == top_poly(BETA, n).value
        for m in range(1, n + 1):
            assert apply_phi(m, telescoping_product(n, m)) == telescoping_product(n, m + 1)
    with pytest.raises(SizeMismatchError):
        telescoping_product(2, 4)


# Tests for degeneracy classes
def test_degeneracy_class_substitutes_roots():
    """Tests evaluation at two families of Chern roots."""
    value = degeneracy_class(SCHUBERT, parse_permutation("[2,1]"), ["z1"], ["z2"])
    assert value == parse_poly("z1 - z2")


def test_degeneracy_class_too_few_roots():
    """Tests that w in S_3 needs two roots per family and says so."""
    w = parse_permutation("[3,2,1]")
    message = r"at least 2 x-roots and 2 y-roots \(n - 1 for n = 3\)"
    with pytest.raises(SizeMismatchError, match=message):
        degeneracy_class(SCHUBERT, w, ["z1"], ["z2", "z3"])
    exact = degeneracy_class(SCHUBERT, w, ["z1", "z2"], ["z3", "z4"])
    assert degeneracy_class(SCHUBERT, w, ["z1", "z2", "z5"], ["z3", "z4", "z6"]) == exact


# Tests for tables and the cache store
def test_family_table_order():
    """Tests that rows follow (length, one-line) order."""
    rows = family_table(SCHUBERT, 3)
    assert [str(p.perm) for p in rows][:3] == ["[1,2,3]", "[1,3,2]", "[2,1,3]"]
    assert rows[0].value == 1


def test_family_table_cap():
    """Tests the table size cap."""
    with pytest.raises(CapExceededError):
        family_table(GROTHENDIECK, 6)


def test_double_poly_store(db_session):
    """Tests that a computed polynomial is written once and read back."""
    w = parse_permutation("[3,1,2]")
    first = double_poly(BETA, w, db_session)
    rows = db_session.query(CachedPolynomial).filter(CachedPolynomial.kind == "beta").all()
    assert len(rows) == 1
    assert rows[0].images == "3,1,2"
    second = double_poly(BETA, w, db_session)
    assert second.value == first.value
    assert db_session.query(CachedPolynomial).count() == 1


def test_store_failure_is_not_fatal(db_session, monkeypatch):
    """Tests that a failing commit only logs a warning."""
    from sqlalchemy.exc import SQLAlchemyError

    def broken_commit():
        raise SQLAlchemyError("disk full")

    monkeypatch.setattr(db_session, "commit", broken_commit)
    value = schubert_service.double_poly(SCHUBERT, parse_permutation("[2,1]"), db_session)
    assert value.value == parse_poly("x1 - y1")
