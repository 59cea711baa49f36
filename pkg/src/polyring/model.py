import re
from src._compat import StrEnum
from functools import lru_cache
from typing import Iterable, Mapping

from pydantic import BaseModel, ConfigDict

from ..exceptions import RingMismatchError

BETA = "b"
BETA_JSON_NAME = "beta"

Monomial = tuple[tuple[str, int], ...]

_INDEXED = re.compile(r"^([a-z]+)(\d+)$")
_ROOT_FAMILIES = {"x": 0, "y": 1, "z": 2}
_SERIES_VARIABLES = {"u": 0, "v": 1, "w": 2, "t": 3}


@lru_cache(maxsize=None)
def var_key(name: str) -> tuple[int, int, str]:
    """Storage order of variables: x1 < x2 < ... < y1 < ... < z1 < ... < u,v,w,t < others < b."""
    if name == BETA:
        return (5, 0, name)
    match = _INDEXED.match(name)
    if match and match.group(1) in _ROOT_FAMILIES:
        return (_ROOT_FAMILIES[match.group(1)], int(match.group(2)), name)
    if name in _SERIES_VARIABLES:
        return (3, _SERIES_VARIABLES[name], name)
    return (4, 0, name)


def _item_key(item: tuple[str, int]) -> tuple[int, int, str]:
    return var_key(item[0])


@lru_cache(maxsize=1 << 18)
def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for name, exp in b:
        merged[name] = merged.get(name, 0) + exp
    return tuple(sorted(merged.items(), key=_item_key))


def mono_div(a: Monomial, b: Monomial) -> Monomial | None:
    """a / b when b divides a, otherwise None."""
    remaining = dict(a)
    for name, exp in b:
        have = remaining.get(name, 0)
        if have < exp:
            return None
        if have == exp:
            del remaining[name]
        else:
            remaining[name] = have - exp
    return tuple(sorted(remaining.items(), key=_item_key))


def make_monomial(exponents: Mapping[str, int]) -> Monomial:
    return tuple(sorted(((n, e) for n, e in exponents.items() if e), key=_item_key))


class RingKind(StrEnum):
    INTEGERS = "Integers"
    INTEGERS_BETA = "IntegersBeta"
    INTEGERS_BETA_LAURENT = "IntegersBetaLaurent"
    NAMED_POLYNOMIAL = "NamedPolynomial"


class CoeffRing(BaseModel):
    """Coefficient ring: Z, Z[b], Z[b, 1/b] or Z adjoined named graded generators."""

    model_config = ConfigDict(frozen=True)

    kind: RingKind = RingKind.INTEGERS
    generators: tuple[tuple[str, int], ...] = ()

    @property
    def symbols(self) -> frozenset[str]:
        if self.kind in (RingKind.INTEGERS_BETA, RingKind.INTEGERS_BETA_LAURENT):
            return frozenset({BETA})
        if self.kind == RingKind.NAMED_POLYNOMIAL:
            return frozenset(name for name, _ in self.generators)
        return frozenset()

    @property
    def is_laurent(self) -> bool:
        return self.kind == RingKind.INTEGERS_BETA_LAURENT

    def grade(self, name: str) -> int:
        """Grade of a coefficient generator; b has grade -1, a_ij has 1-i-j."""
        if name == BETA and BETA in self.symbols:
            return -1
        for generator, grade in self.generators:
            if generator == name:
                return grade
        raise KeyError(name)

    def join(self, other: "CoeffRing") -> "CoeffRing":
        """Smallest supported ring both rings embed into."""
        if self == other or other.kind == RingKind.INTEGERS:
            return self
        if self.kind == RingKind.INTEGERS:
            return other
        beta_kinds = {RingKind.INTEGERS_BETA, RingKind.INTEGERS_BETA_LAURENT}
        if self.kind in beta_kinds and other.kind in beta_kinds:
            return ZZ_BETA_LAURENT
        if self.kind == other.kind == RingKind.NAMED_POLYNOMIAL:
            merged = dict(self.generators)
            for name, grade in other.generators:
                if merged.setdefault(name, grade) != grade:
                    raise RingMismatchError(f"Generator {name} declared with two grades")
            return named_ring(merged)
        raise RingMismatchError(f"Cannot combine {self.kind} with {other.kind}")

    def __str__(self) -> str:
        if self.kind == RingKind.NAMED_POLYNOMIAL:
            return f"Z[{', '.join(name for name, _ in self.generators)}]"
        return {
            RingKind.INTEGERS: "Z",
            RingKind.INTEGERS_BETA: "Z[b]",
            RingKind.INTEGERS_BETA_LAURENT: "Z[b, 1/b]",
        }[self.kind]


ZZ = CoeffRing()
ZZ_BETA = CoeffRing(kind=RingKind.INTEGERS_BETA)
ZZ_BETA_LAURENT = CoeffRing(kind=RingKind.INTEGERS_BETA_LAURENT)


def named_ring(generators: Mapping[str, int]) -> CoeffRing:
    return CoeffRing(
        kind=RingKind.NAMED_POLYNOMIAL, generators=tuple(sorted(generators.items()))
    )


class Poly:
    """
    Sparse exact polynomial. Terms map monomials (sorted (name, exponent) pairs,
    coefficient generators included) to nonzero Python integers. In the Laurent
    ring the value is b**shift times the stored terms, normalized so that some
    stored term has no b.
    """

    __slots__ = ("ring", "terms", "shift", "_hash")

    def __init__(
        self,
        terms: Mapping[Monomial, int] | None = None,
        ring: CoeffRing = ZZ,
        shift: int = 0,
    ):
        clean = {mono: c for mono, c in (terms or {}).items() if c}
        if ring.is_laurent and clean:
            lowest = min(dict(mono).get(BETA, 0) for mono in clean)
            if lowest:
                clean = {
                    mono_div(mono, ((BETA, lowest),)): c for mono, c in clean.items()
                }
                shift += lowest
        elif not clean:
            shift = 0
        if shift and not ring.is_laurent:
            raise RingMismatchError("Negative powers of b need the Laurent ring")
        self.ring = ring
        self.terms: dict[Monomial, int] = clean
        self.shift = shift
        self._hash: int | None = None

    # constructors

    @classmethod
    def zero(cls, ring: CoeffRing = ZZ) -> "Poly":
        return cls({}, ring)

    @classmethod
    def constant(cls, value: int, ring: CoeffRing = ZZ) -> "Poly":
        return cls({(): value}, ring)

    @classmethod
    def var(cls, name: str, ring: CoeffRing | None = None) -> "Poly":
        if ring is None:
            ring = ZZ_BETA if name == BETA else ZZ
        return cls({((name, 1),): 1}, ring)

    @classmethod
    def beta(cls) -> "Poly":
        return cls.var(BETA, ZZ_BETA)

    # inspection

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def variables(self) -> frozenset[str]:
        """Non-coefficient variables that occur."""
        symbols = self.ring.symbols
        return frozenset(
            name for mono in self.terms for name, _ in mono if name not in symbols
        )

    def registry(self) -> list[str]:
        """Every name that occurs, coefficient symbols included, in storage order."""
        names = {name for mono in self.terms for name, _ in mono}
        return sorted(names, key=var_key)

    def _graded(self, graded: Iterable[str] | None) -> frozenset[str] | None:
        return None if graded is None else frozenset(graded)

    def _degree_of(self, mono: Monomial, graded: frozenset[str] | None) -> int:
        if graded is None:
            symbols = self.ring.symbols
            return sum(e for name, e in mono if name not in symbols)
        return sum(e for name, e in mono if name in graded)

    def degree(self, graded: Iterable[str] | None = None) -> int:
        """Total degree counting only `graded` names (default: non-coefficient variables)."""
        selected = self._graded(graded)
        return max((self._degree_of(m, selected) for m in self.terms), default=-1)

    def min_degree(self, graded: Iterable[str] | None = None) -> int:
        selected = self._graded(graded)
        return min((self._degree_of(m, selected) for m in self.terms), default=-1)

    def truncate(self, cap: int, graded: Iterable[str] | None = None) -> "Poly":
        selected = self._graded(graded)
        kept = {m: c for m, c in self.terms.items() if self._degree_of(m, selected) <= cap}
        if len(kept) == len(self.terms):
            return self
        return Poly(kept, self.ring, self.shift)

    def constant_term(self, graded: Iterable[str] | None = None) -> "Poly":
        return self.truncate(0, graded)

    def coefficient(self, exponents: Mapping[str, int]) -> "Poly":
        """Coefficient of the given power product, as a polynomial in the remaining names."""
        out: dict[Monomial, int] = {}
        for mono, c in self.terms.items():
            powers = dict(mono)
            if all(powers.get(name, 0) == exp for name, exp in exponents.items()):
                rest = make_monomial(
                    {n: e for n, e in powers.items() if n not in exponents}
                )
                out[rest] = out.get(rest, 0) + c
        return Poly(out, self.ring, self.shift)

    # arithmetic

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, int):
            return Poly.constant(other, self.ring)
        return NotImplemented

    def _aligned(self, other: "Poly") -> tuple[dict, dict, CoeffRing, int]:
        ring = self.ring.join(other.ring)
        if self.shift == other.shift:
            return self.terms, other.terms, ring, self.shift
        low = min(self.shift, other.shift)

        def lift(p: "Poly") -> dict:
            if p.shift == low:
                return p.terms
            factor = ((BETA, p.shift - low),)
            return {mono_mul(m, factor): c for m, c in p.terms.items()}

        return lift(self), lift(other), ring, low

    def __add__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        left, right, ring, shift = self._aligned(other)
        out = dict(left)
        for mono, c in right.items():
            out[mono] = out.get(mono, 0) + c
        return Poly(out, ring, shift)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()}, self.ring, self.shift)

    def __sub__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        ring = self.ring.join(other.ring)
        out: dict[Monomial, int] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                mono = mono_mul(m1, m2)
                out[mono] = out.get(mono, 0) + c1 * c2
        return Poly(out, ring, self.shift + other.shift)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly":
        if exponent < 0:
            if len(self.terms) == 1 and self.ring.is_laurent:
                ((mono, c),) = self.terms.items()
                if c in (1, -1) and all(name == BETA for name, _ in mono):
                    beta_exp = dict(mono).get(BETA, 0) + self.shift
                    return Poly({(): c ** (-exponent)}, self.ring, -beta_exp * -exponent)
            raise ValueError("Only units of the form +-b^k have negative powers")
        result = Poly.constant(1, self.ring)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            exponent >>= 1
            if exponent:
                base = base * base
        return result

    # relabelling

    def rename(self, mapping: Mapping[str, str]) -> "Poly":
        """Simultaneous variable relabelling, e.g. {"x1": "x2", "x2": "x1"}."""
        out: dict[Monomial, int] = {}
        for mono, c in self.terms.items():
            relabelled: dict[str, int] = {}
            for name, exp in mono:
                target = mapping.get(name, name)
                relabelled[target] = relabelled.get(target, 0) + exp
            key = make_monomial(relabelled)
            out[key] = out.get(key, 0) + c
        return Poly(out, self.ring, self.shift)

    # comparison

    def __eq__(self, other) -> bool:
        if isinstance(other, int):
            other = Poly.constant(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.shift == other.shift and self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((frozenset(self.terms.items()), self.shift))
        return self._hash

    # printing

    def _print_key(self, name: str) -> tuple[int, int, str]:
        if self.ring.kind == RingKind.NAMED_POLYNOMIAL and name in self.ring.symbols:
            return (6, 0, name)
        return var_key(name)

    def _display_exponents(self, mono: Monomial) -> dict[str, int]:
        powers = dict(mono)
        if self.shift:
            powers[BETA] = powers.get(BETA, 0) + self.shift
            if not powers[BETA]:
                del powers[BETA]
        return powers

    def sorted_terms(self) -> list[tuple[dict[str, int], int]]:
        """Terms in canonical order: ascending total degree, then lex with x1 > ... > y1 > ..."""
        sentinel = ((99, 0, ""), 0)

        def order(item):
            powers = item[0]
            lex = tuple(
                (self._print_key(n), -e)
                for n, e in sorted(powers.items(), key=lambda it: self._print_key(it[0]))
            )
            return (sum(powers.values()), lex + (sentinel,))

        return sorted(
            ((self._display_exponents(m), c) for m, c in self.terms.items()), key=order
        )

    def _format_term(self, powers: dict[str, int], c: int) -> str:
        symbols = self.ring.symbols

        def display(name: str) -> tuple:
            # coefficient symbols are written before the variables
            if name in symbols:
                return (0, 0 if name == BETA else 1, name)
            return (1,) + var_key(name)

        factors = [
            name if exp == 1 else f"{name}^{exp}"
            for name, exp in sorted(powers.items(), key=lambda it: display(it[0]))
        ]
        body = "*".join(factors)
        if not body:
            return str(c)
        if c == 1:
            return body
        if c == -1:
            return f"-{body}"
        return f"{c}*{body}"

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = [self._format_term(p, c) for p, c in self.sorted_terms()]
        text = pieces[0]
        for piece in pieces[1:]:
            text += f" - {piece[1:]}" if piece.startswith("-") else f" + {piece}"
        return text

    def __repr__(self) -> str:
        return f"Poly('{self}')"

    # serialization

    def to_json(self) -> dict:
        names = sorted(
            {n for powers, _ in self.sorted_terms() for n in powers},
            key=self._print_key,
        )
        return {
            "ring": str(self.ring.kind),
            "variables": [BETA_JSON_NAME if n == BETA else n for n in names],
            "terms": [
                {"coeff": c, "exponents": [powers.get(n, 0) for n in names]}
                for powers, c in self.sorted_terms()
            ],
        }

    @classmethod
    def from_json(cls, payload: Mapping, ring: CoeffRing | None = None) -> "Poly":
        names = [BETA if n == BETA_JSON_NAME else n for n in payload["variables"]]
        if ring is None:
            ring = CoeffRing(kind=RingKind(payload.get("ring", RingKind.INTEGERS)))
        out = Poly.zero(ring)
        for term in payload["terms"]:
            powers = dict(zip(names, term["exponents"]))
            negative = {n: e for n, e in powers.items() if e < 0}
            if negative:
                # only b may carry a negative exponent (Laurent ring)
                value = Poly.constant(term["coeff"], ring) * (
                    Poly.var(BETA, ring) ** negative[BETA]
                )
                positive = {n: e for n, e in powers.items() if e > 0}
                out = out + value * Poly({make_monomial(positive): 1}, ring)
            else:
                out = out + Poly({make_monomial(powers): term["coeff"]}, ring)
        return out


class TruncSeries:
    """A polynomial truncated at total degree `cap` in the `graded` names."""

    __slots__ = ("poly", "cap", "graded")

    def __init__(self, poly: Poly, cap: int, graded: Iterable[str] | None = None):
        self.graded = None if graded is None else frozenset(graded)
        self.cap = cap
        self.poly = poly.truncate(cap, self.graded)

    @property
    def ring(self) -> CoeffRing:
        return self.poly.ring

    def _other_poly(self, other) -> tuple[Poly, int]:
        if isinstance(other, TruncSeries):
            return other.poly, min(self.cap, other.cap)
        if isinstance(other, int):
            return Poly.constant(other, self.ring), self.cap
        return other, self.cap

    def __add__(self, other) -> "TruncSeries":
        poly, cap = self._other_poly(other)
        return TruncSeries(self.poly + poly, cap, self.graded)

    __radd__ = __add__

    def __sub__(self, other) -> "TruncSeries":
        poly, cap = self._other_poly(other)
        return TruncSeries(self.poly - poly, cap, self.graded)

    def __neg__(self) -> "TruncSeries":
        return TruncSeries(-self.poly, self.cap, self.graded)

    def __mul__(self, other) -> "TruncSeries":
        poly, cap = self._other_poly(other)
        return TruncSeries(self.poly * poly, cap, self.graded)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, TruncSeries):
            return self.cap == other.cap and self.poly == other.poly
        if isinstance(other, (Poly, int)):
            return self.poly == TruncSeries(self._other_poly(other)[0], self.cap, self.graded).poly
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.poly, self.cap))

    def __str__(self) -> str:
        return f"{self.poly} + O(deg {self.cap + 1})"

    def __repr__(self) -> str:
        return f"TruncSeries('{self.poly}', cap={self.cap})"
