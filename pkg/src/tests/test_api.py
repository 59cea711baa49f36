import pytest

from src.entities.polynomial import CachedPolynomial


# Tests for /permutations
def test_permutation_info(client):
    """Tests the summary endpoint."""
    response = client.get("/permutations/1,3,2")
    assert response.status_code == 200
    data = response.json()
    assert data["length"] == 1
    assert data["essential_set"] == [[2, 2]]


def test_permutation_info_invalid(client):
    """Tests that a non-bijection is a 400."""
    response = client.get("/permutations/1,1")
    assert response.status_code == 400


# Tests for /polynomials
def test_get_polynomial_is_stored(client, db_session):
    """Tests a polynomial request and the cache store behind it."""
    response = client.get("/polynomials/beta", params={"perm": "[2,1]"})
    assert response.status_code == 200
    assert response.json()["text"] == "x1 + y1 + b*x1*y1"
    assert db_session.query(CachedPolynomial).count() == 1

    again = client.get("/polynomials/beta", params={"perm": "[2,1]"})
    assert again.json()["text"] == "x1 + y1 + b*x1*y1"
    assert db_session.query(CachedPolynomial).count() == 1


def test_get_table(client):
    """Tests the table of Grothendieck polynomials of S_2."""
    response = client.get("/polynomials/grothendieck/table", params={"n": 2})
    assert response.status_code == 200
    assert [row["text"] for row in response.json()] == ["1", "x1 + y1 - x1*y1"]


def test_get_table_cap(client):
    """Tests that a table above the cap is a 400."""
    response = client.get("/polynomials/schubert/table", params={"n": 7})
    assert response.status_code == 400


def test_specialize(client):
    """Tests b := 0 with y := -y."""
    response = client.post(
        "/polynomials/specialize",
        json={"polynomial": "x1 + y1 + b*x1*y1", "value": "0", "negate_y": True},
    )
    assert response.status_code == 200
    assert response.json()["text"] == "x1 - y1"


def test_specialize_refuses_code(client, tmp_path):
    """Tests that polynomial text is never evaluated as Python."""
    marker = tmp_path / "specialized"
    response = client.post(
        "/polynomials/specialize",
        json={"polynomial": f"x1 + __import__('os').system('touch {marker}')", "value": "0"},
    )
    assert response.status_code == 400
    assert not marker.exists()


@pytest.mark.parametrize("kind, perm", [("schubert", "[7,6,5,4,3,2,1]"), ("beta", "[6,5,4,3,2,1]")])
def test_get_polynomial_cap(client, kind, perm):
    """Tests that single polynomials above the family cap are a 400."""
    response = client.get(f"/polynomials/{kind}", params={"perm": perm})
    assert response.status_code == 400


# Tests for /fgl
def test_fgl_chi(client):
    """Tests the inverse series of the multiplicative law."""
    response = client.get("/fgl/mult/chi", params={"cap": 3})
    assert response.json()["series"] == "-u - b*u^2 - b^2*u^3"


def test_fgl_rejects_law_files(client):
    """Tests that only built-in laws are served."""
    response = client.get("/fgl/etc-passwd/axioms")
    assert response.status_code == 400


def test_fgl_lazard(client):
    """Tests the relation endpoint and its cap."""
    assert client.get("/fgl/lazard/relations", params={"cap": 3}).json()["relations"] == []
    assert client.get("/fgl/lazard/relations", params={"cap": 9}).status_code == 400


# Tests for /chern and /flag
def test_chern_base_class(client):
    """Tests the additive base class for n = 2."""
    response = client.get("/chern/base-class", params={"n": 2, "expand": True})
    assert response.status_code == 200
    assert response.json()["factors"] == ["x1 - y1"]
    assert response.json()["expanded"] == "x1 - y1"


@pytest.mark.parametrize(
    "params",
    [{"n": 9}, {"n": 6}, {"n": 1}, {"n": 3, "law": "mult", "cap": 99}],
)
def test_chern_base_class_caps(client, params):
    """Tests that ranks and caps outside the supported range are a 400."""
    response = client.get("/chern/base-class", params=params)
    assert response.status_code == 400


@pytest.mark.parametrize(
    "params",
    [{"n": 7}, {"n": 6}, {"n": 2, "mode": "ck", "cap": 99}, {"n": 2, "word": ",".join(["1"] * 65)}],
)
def test_flag_class_caps(client, params):
    """Tests that oversized flag class requests are a 400."""
    response = client.get("/flag/class", params=params)
    assert response.status_code == 400


def test_flag_class(client):
    """Tests a Chow class with its evaluation vector."""
    response = client.get("/flag/class", params={"n": 2, "word": "", "vector": True})
    data = response.json()
    assert data["representative"] == "x1 - y1"
    assert data["evaluation_vector"] == ["0", "-y1 + y2"]


def test_flag_refuses_fgl_mode(client):
    """Tests that FGL mode is not offered over HTTP."""
    response = client.get("/flag/class", params={"n": 2, "mode": "fgl"})
    assert response.status_code == 400


def test_flag_eq(client):
    """Tests equality modulo J."""
    response = client.post("/flag/eq", json={"n": 2, "left": "x1*x2", "right": "y1*y2"})
    assert response.json()["equal"] is True


def test_flag_eq_refuses_code(client, tmp_path):
    """Tests that class text is never evaluated as Python."""
    marker = tmp_path / "flag-eq"
    response = client.post(
        "/flag/eq",
        json={"n": 2, "left": f"x1 + __import__('os').system('touch {marker}')", "right": "x1"},
    )
    assert response.status_code == 400
    assert not marker.exists()


def test_fgl_chi_cap(client):
    """Tests that law caps above the supported range are a 400."""
    assert client.get("/fgl/mult/chi", params={"cap": 99}).status_code == 400


# Tests for /degeneracy and /verify
def test_degeneracy_rank(client):
    """Tests a rank check on the identity matrix."""
    response = client.post(
        "/degeneracy/rank",
        json={"permutation": "[1,3,2]", "matrix": [[1, 0, 0], [0, 1, 0], [0, 0, 1]]},
    )
    assert response.status_code == 200
    assert response.json()["satisfied"] is False


def test_degeneracy_rank_ragged_matrix(client):
    """Tests that a ragged matrix is a 400."""
    response = client.post(
        "/degeneracy/rank", json={"permutation": "[2,1]", "matrix": [[1, 0], [0]]}
    )
    assert response.status_code == 400


def test_verify(client):
    """Tests a verification report."""
    response = client.get("/verify/special", params={"n": 2})
    assert response.status_code == 200
    assert response.json()["passed"] is True
