import json
import logging
import threading
from typing import Iterable, Sequence

from cachetools import LRUCache, cached
from cachetools.keys import hashkey
from pydantic import ValidationError
from sqlalchemy.exc import SQLAlchemyError
from sqlalchemy.orm import Session

from ..entities.polynomial import CachedPolynomial
from ..exceptions import BadRequestError, CapExceededError, SizeMismatchError
from ..permgroup.model import Permutation, ReducedWord
from ..permgroup.service import (
    all_permutations,
    compose,
    length,
    longest_element,
    reduced_word,
)
from ..polyring.model import BETA, ZZ, ZZ_BETA, CoeffRing, Poly
from ..polyring.service import exact_div, parse_poly, substitute, swap_vars, x, y
from .model import DoublePolynomial, PolynomialFamilyKind, PolynomialResponse, TableRow

MAX_POLY_N = {
    PolynomialFamilyKind.SCHUBERT: 6,
    PolynomialFamilyKind.GROTHENDIECK: 5,
    PolynomialFamilyKind.BETA: 5,
}


def _weight(kind: PolynomialFamilyKind, name: str) -> Poly | None:
    """Weight attached to P in the numerator; None for the plain difference quotient."""
    if kind == PolynomialFamilyKind.SCHUBERT:
        return None
    if kind == PolynomialFamilyKind.GROTHENDIECK:
        return 1 - Poly.var(name)
    return 1 + Poly.beta() * Poly.var(name, ZZ_BETA)


def divided_difference(i: int, p: Poly, kind: PolynomialFamilyKind) -> Poly:
    """
    (w(x_{i+1}) P - w(x_i) sigma_i P) / (x_i - x_{i+1}) with weight w = 1 (d_i),
    1 - x (pi_i) or 1 + b*x (phi_i). The numerator is always divisible; a
    NonDivisibleError here means a bug upstream.
    """
    if i < 1:
        raise SizeMismatchError(f"Operator index must be positive, got {i}")
    lower, upper = f"x{i}", f"x{i + 1}"
    swapped = swap_vars(p, i)
    weight = _weight(kind, upper)
    if weight is None:
        numerator = p - swapped
    else:
        numerator = weight * p - weight.rename({upper: lower}) * swapped
    return exact_div(numerator, x(i) - x(i + 1))


def apply_partial(i: int, p: Poly) -> Poly:
    return divided_difference(i, p, PolynomialFamilyKind.SCHUBERT)


def apply_pi(i: int, p: Poly) -> Poly:
    return divided_difference(i, p, PolynomialFamilyKind.GROTHENDIECK)


def apply_phi(i: int, p: Poly) -> Poly:
    return divided_difference(i, p, PolynomialFamilyKind.BETA)


def apply_word(kind: PolynomialFamilyKind, word: Iterable[int], p: Poly) -> Poly:
    """Applies the family's operator for each index of `word`, first index first."""
    for i in word:
        p = divided_difference(i, p, kind)
    return p


def root_factor(kind: PolynomialFamilyKind, i: int, j: int) -> Poly:
    """x_i - y_j, x_i + y_j - x_i*y_j or x_i + y_j + b*x_i*y_j."""
    if kind == PolynomialFamilyKind.SCHUBERT:
        return x(i) - y(j)
    if kind == PolynomialFamilyKind.GROTHENDIECK:
        return x(i) + y(j) - x(i) * y(j)
    return x(i, ZZ_BETA) + y(j, ZZ_BETA) + Poly.beta() * x(i, ZZ_BETA) * y(j, ZZ_BETA)


def _check_size(kind: PolynomialFamilyKind, n: int) -> None:
    if n < 1:
        raise SizeMismatchError(f"n must be positive, got {n}")
    if n > MAX_POLY_N[kind]:
        raise CapExceededError(f"{kind} polynomials are limited to n <= {MAX_POLY_N[kind]}")


def top_poly(kind: PolynomialFamilyKind, n: int) -> DoublePolynomial:
    """The longest-element base case: product of the root factors over i + j <= n."""
    _check_size(kind, n)
    value = Poly.constant(1, kind.ring)
    for i in range(1, n):
        for j in range(1, n - i + 1):
            value = value * root_factor(kind, i, j)
    return DoublePolynomial(kind=kind, perm=longest_element(n), value=value)


_polynomial_cache: LRUCache = LRUCache(maxsize=4096)


@cached(
    cache=_polynomial_cache,
    key=lambda kind, w: hashkey(str(kind), w.n, w.images),
    lock=threading.Lock(),
)
def _descend(kind: PolynomialFamilyKind, w: Permutation) -> Poly:
    word = reduced_word(compose(longest_element(w.n), w)).word
    logging.debug(f"Computing {kind} polynomial of {w} along word {word}")
    return apply_word(kind, word, top_poly(kind, w.n).value)


def _images_key(w: Permutation) -> str:
    return ",".join(str(i) for i in w.images)


def _load(db: Session, kind: PolynomialFamilyKind, w: Permutation) -> Poly | None:
    row = (
        db.query(CachedPolynomial)
        .filter(
            CachedPolynomial.kind == str(kind),
            CachedPolynomial.n == w.n,
            CachedPolynomial.images == _images_key(w),
        )
        .first()
    )
    if row is None:
        return None
    logging.debug(f"Cache store hit for {kind} {w}")
    return Poly.from_json(json.loads(row.payload), ring=kind.ring)


def _store(db: Session, kind: PolynomialFamilyKind, w: Permutation, value: Poly) -> None:
    try:
        db.add(
            CachedPolynomial(
                kind=str(kind),
                n=w.n,
                images=_images_key(w),
                payload=json.dumps(value.to_json()),
            )
        )
        db.commit()
    except SQLAlchemyError as e:
        # another writer stored the same value first
        db.rollback()
        logging.warning(f"Could not store {kind} polynomial of {w}: {e}")


def double_poly(
    kind: PolynomialFamilyKind, w: Permutation, db: Session | None = None
) -> DoublePolynomial:
    """
    Descends from the longest element along the lexicographically smallest
    reduced word of w0*w. Memoized in process; `db` adds the on-disk store.
    """
    _check_size(kind, w.n)
    if db is not None:
        stored = _load(db, kind, w)
        if stored is not None:
            return DoublePolynomial(kind=kind, perm=w, value=stored)
    value = _descend(kind, w)
    if db is not None:
        _store(db, kind, w, value)
    return DoublePolynomial(kind=kind, perm=w, value=value)


def double_poly_along(
    kind: PolynomialFamilyKind, w: Permutation, word: Sequence[int]
) -> DoublePolynomial:
    """The same polynomial computed along a caller-chosen reduced word of w0*w."""
    _check_size(kind, w.n)
    target = compose(longest_element(w.n), w)
    try:
        ReducedWord(word=tuple(word), target=target)
    except ValidationError as e:
        raise BadRequestError(f"{list(word)} is not a reduced word of {target}: {e}")
    value = apply_word(kind, word, top_poly(kind, w.n).value)
    return DoublePolynomial(kind=kind, perm=w, value=value)


def telescoping_product(n: int, m: int) -> Poly:
    """
    H_m = prod_{i+j<=n} f(x_i, y_j) * prod_{k=m}^{n} f(x_k, y_{n+1-k}) with
    f(x, y) = x + y + b*x*y. H_1 is the base case in S_{n+1}, H_{n+1} the one in
    S_n, and phi_m H_m = H_{m+1}.
    """
    if not 1 <= m <= n + 1:
        raise SizeMismatchError(f"m must lie in 1..{n + 1}, got {m}")
    value = top_poly(PolynomialFamilyKind.BETA, n).value
    for k in range(m, n + 1):
        value = value * root_factor(PolynomialFamilyKind.BETA, k, n + 1 - k)
    return value


def _beta_image(value: int | str | Poly, ring: CoeffRing) -> Poly:
    if isinstance(value, int):
        image = Poly.constant(value, ring if ring.is_laurent else ZZ)
    elif isinstance(value, str):
        image = parse_poly(value)
    else:
        image = value
    if len(image.terms) > 1 or image.variables:
        raise BadRequestError(f"b can only be specialized to 0, +-1 or +-b^k, not {image}")
    if image.terms:
        ((mono, c),) = image.terms.items()
        if c not in (1, -1) or any(name != BETA for name, _ in mono):
            raise BadRequestError(f"b can only be specialized to 0, +-1 or +-b^k, not {image}")
    if ring.is_laurent and not image.ring.is_laurent:
        image = Poly(image.terms, ring.join(image.ring), image.shift)
    return image


def specialize_beta(p: DoublePolynomial | Poly, value: int | str | Poly) -> Poly:
    """Substitutes b := value for value in {0, +-1, +-b, +-b^k}."""
    poly = p.value if isinstance(p, DoublePolynomial) else p
    image = _beta_image(value, poly.ring)
    numeric = BETA not in image.registry() and not image.shift
    if poly.shift < 0 and image.is_zero():
        raise BadRequestError("Cannot send b to 0 in a polynomial with negative powers of b")
    return substitute(poly, {BETA: image}, ring=ZZ if numeric else None)


def negate_y(p: Poly) -> Poly:
    """y_j := -y_j for every j."""
    terms = {}
    for mono, c in p.terms.items():
        degree = sum(e for name, e in mono if name.startswith("y"))
        terms[mono] = -c if degree % 2 else c
    return Poly(terms, p.ring, p.shift)


def degeneracy_class(
    kind: PolynomialFamilyKind,
    w: Permutation,
    x_roots: Sequence[Poly | str],
    y_roots: Sequence[Poly | str],
) -> Poly:
    """
    The family polynomial of w evaluated at two families of Chern roots.
    Only x_1..x_{n-1} and y_1..y_{n-1} occur, so each family needs at least
    n - 1 roots for w in S_n (two for [2,3,1]); extra roots are ignored.
    Raises SizeMismatchError when either family is shorter.
    """
    needed = w.n - 1
    if len(x_roots) < needed or len(y_roots) < needed:
        raise SizeMismatchError(
            f"{w} needs at least {needed} x-roots and {needed} y-roots "
            f"(n - 1 for n = {w.n}), got {len(x_roots)} and {len(y_roots)}"
        )
    bindings: dict[str, Poly | str] = {}
    for k in range(1, needed + 1):
        bindings[f"x{k}"] = x_roots[k - 1]
        bindings[f"y{k}"] = y_roots[k - 1]
    return substitute(double_poly(kind, w).value, bindings)


def family_table(
    kind: PolynomialFamilyKind, n: int, db: Session | None = None
) -> list[DoublePolynomial]:
    """Every polynomial of the family on S_n, sorted by (length, one-line)."""
    _check_size(kind, n)
    rows = [double_poly(kind, w, db) for w in all_permutations(n)]
    logging.info(f"Built the {kind} table for S_{n} ({len(rows)} rows)")
    return rows


def to_response(p: DoublePolynomial) -> PolynomialResponse:
    return PolynomialResponse(
        kind=p.kind, permutation=str(p.perm), text=str(p.value), terms=p.value.to_json()
    )


def to_row(p: DoublePolynomial) -> TableRow:
    return TableRow(
        permutation=str(p.perm),
        length=length(p.perm),
        text=str(p.value),
        terms=p.value.to_json(),
    )
