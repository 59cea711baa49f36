import logging
from pathlib import Path
from typing import Iterable, Mapping

from pydantic import BaseModel, ConfigDict, ValidationError

from ..exceptions import (
    AxiomError,
    BadRequestError,
    CapExceededError,
    ParseError,
    RingMismatchError,
)
from ..polyring.model import (
    BETA,
    ZZ,
    ZZ_BETA,
    CoeffRing,
    Poly,
    TruncSeries,
    make_monomial,
    named_ring,
)
from ..polyring.service import exact_div, parse_poly, series_inverse
from .model import AxiomCheck, AxiomReport, FormalGroupLaw

DEFAULT_CAP = 8
MAX_LAW_CAP = 30
MAX_LAZARD_DEGREE = 6
UV = frozenset({"u", "v"})
UVW = frozenset({"u", "v", "w"})


def default_cap(n: int) -> int:
    """2 * dim of the flag variety of S_n: products of that many roots stay exact."""
    return max(2, n * (n - 1))


def _series_from_table(table: Mapping[tuple[int, int], Poly], ring: CoeffRing) -> Poly:
    u = Poly.var("u", ring)
    v = Poly.var("v", ring)
    total = Poly.zero(ring)
    for (i, j), a in sorted(table.items()):
        total = total + a * (u**i) * (v**j)
    return total


def make_from_series(series: Poly, cap: int, name: str = "custom") -> FormalGroupLaw:
    """Wraps an arbitrary series in u, v without checking any axiom."""
    if cap < 1:
        raise BadRequestError(f"Law caps must be positive, got {cap}")
    if cap > MAX_LAW_CAP:
        raise CapExceededError(f"Law caps are limited to {MAX_LAW_CAP}, got {cap}")
    return FormalGroupLaw(name=name, series=TruncSeries(series, cap, UV))


def make_additive(cap: int = DEFAULT_CAP) -> FormalGroupLaw:
    law = make_from_series(Poly.var("u") + Poly.var("v"), cap, name="additive")
    law.validated = True
    return law


def make_multiplicative(cap: int = DEFAULT_CAP) -> FormalGroupLaw:
    """F(u, v) = u + v - b*u*v over Z[b]."""
    u = Poly.var("u", ZZ_BETA)
    v = Poly.var("v", ZZ_BETA)
    law = make_from_series(u + v - Poly.beta() * u * v, cap, name="multiplicative")
    law.validated = True
    return law


def _coerce_coefficient(value: Poly | int | str, ring: CoeffRing | None) -> Poly:
    if isinstance(value, Poly):
        return value if ring is None else Poly(value.terms, ring.join(value.ring), value.shift)
    if isinstance(value, int):
        return Poly.constant(value, ring or ZZ)
    return parse_poly(value, ring)


def _infer_ring(table: Mapping[tuple[int, int], Poly | int | str]) -> CoeffRing | None:
    """
    Free symbols in coefficients become named generators; a symbol standing
    alone as a_ij gets grade 1 - i - j, any other symbol grade 0.
    """
    parsed = {
        key: parse_poly(value) if isinstance(value, str) else value
        for key, value in table.items()
        if not isinstance(value, int)
    }
    names: set[str] = set()
    has_beta = False
    for value in parsed.values():
        names |= value.variables
        has_beta = has_beta or BETA in value.registry()
    if not names:
        return None
    if has_beta:
        raise RingMismatchError("Coefficients may use b or named generators, not both")
    grades = {name: 0 for name in names}
    for (i, j), value in parsed.items():
        if len(value.terms) == 1 and str(value) in names:
            grades[str(value)] = 1 - i - j
    return named_ring(grades)


def make_from_coeffs(
    table: Mapping[tuple[int, int], Poly | int | str],
    cap: int,
    ring: CoeffRing | None = None,
    name: str = "custom",
) -> FormalGroupLaw:
    """Unvalidated law from its coefficients a_ij; checks the unit and symmetry preconditions."""
    if ring is None:
        ring = _infer_ring(table)
    coefficients = {key: _coerce_coefficient(value, ring) for key, value in table.items()}
    coefficients = {key: a for key, a in coefficients.items() if not a.is_zero()}
    if ring is None:
        ring = ZZ
        for a in coefficients.values():
            ring = ring.join(a.ring)

    if coefficients.get((1, 0)) != 1 or coefficients.get((0, 1)) != 1:
        raise AxiomError("Unit axiom requires a_10 = a_01 = 1")
    for (i, j), a in coefficients.items():
        if (i == 0 and j != 1) or (j == 0 and i != 1):
            raise AxiomError(f"Unit axiom requires a_{i}{j} = 0, got {a}")
        if coefficients.get((j, i)) != a:
            raise AxiomError(f"Symmetry requires a_{i}{j} = a_{j}{i}")
    logging.debug(f"Building law '{name}' with {len(coefficients)} coefficients at cap {cap}")
    return make_from_series(_series_from_table(coefficients, ring), cap, name=name)


def _powers(p: Poly, top: int, clip) -> list[Poly]:
    powers = [Poly.constant(1, p.ring)]
    for _ in range(top):
        powers.append(clip(powers[-1] * p))
    return powers


def _evaluate(
    law: FormalGroupLaw,
    p: Poly,
    q: Poly,
    cap: int | None,
    graded: Iterable[str] | None,
) -> Poly:
    clip = (lambda r: r.truncate(cap, graded)) if cap is not None else (lambda r: r)
    coefficients = law.coefficients()
    top_i = max((i for i, _ in coefficients), default=0)
    top_j = max((j for _, j in coefficients), default=0)
    p_powers = _powers(p, top_i, clip)
    q_powers = _powers(q, top_j, clip)
    total = Poly.zero(law.ring.join(p.ring).join(q.ring))
    for (i, j), a in sorted(coefficients.items()):
        total = total + clip(a * clip(p_powers[i] * q_powers[j]))
    return total


def fgl_apply(
    law: FormalGroupLaw,
    p: Poly | TruncSeries,
    q: Poly | TruncSeries,
    cap: int | None = None,
    graded: Iterable[str] | None = None,
) -> Poly | TruncSeries:
    """F(p, q). Truncated at `cap` when given (or at the caps of series arguments)."""
    series_args = [s for s in (p, q) if isinstance(s, TruncSeries)]
    if series_args:
        caps = [s.cap for s in series_args] + ([cap] if cap is not None else [])
        graded = series_args[0].graded if graded is None else graded
        p_poly = p.poly if isinstance(p, TruncSeries) else p
        q_poly = q.poly if isinstance(q, TruncSeries) else q
        return TruncSeries(_evaluate(law, p_poly, q_poly, min(caps), graded), min(caps), graded)
    if cap is None:
        for argument in (p, q):
            if not argument.constant_term(graded).is_zero():
                raise BadRequestError(
                    f"F({p}, {q}) needs arguments without constant term in exact mode"
                )
    return _evaluate(law, p, q, cap, graded)


def _require_unit_axiom(law: FormalGroupLaw) -> None:
    coefficients = law.coefficients()
    if coefficients.get((1, 0)) != 1 or coefficients.get((0, 1)) != 1:
        raise AxiomError(f"Law '{law.name}' violates the unit axiom")
    for (i, j) in coefficients:
        if (i == 0 and j != 1) or (j == 0 and i != 1):
            raise AxiomError(f"Law '{law.name}' violates the unit axiom at u^{i} v^{j}")


def chi(law: FormalGroupLaw) -> TruncSeries:
    """The inverse series: chi(0) = 0, F(u, chi(u)) = 0 up to the cap."""
    if law._chi is not None:
        return law._chi
    _require_unit_axiom(law)
    cap = law.cap
    graded = frozenset({"u"})
    u = Poly.var("u", law.ring)
    series = -u
    for degree in range(2, cap + 1):
        residual = _evaluate(law, u, series, degree, graded)
        series = series - residual.coefficient({"u": degree}) * u**degree
    residual = _evaluate(law, u, series, cap, graded)
    if not residual.is_zero():
        raise AxiomError(f"F(u, chi(u)) = {residual} for law '{law.name}'")
    result = TruncSeries(series, cap, graded)
    # published only once complete
    law._chi = result
    return result


def chi_apply(
    law: FormalGroupLaw,
    p: Poly,
    cap: int | None = None,
    graded: Iterable[str] | None = None,
) -> Poly:
    """chi evaluated at p, truncated at `cap` (default: the law's cap) in the `graded` names."""
    cap = law.cap if cap is None else cap
    series = chi(law).poly
    clip = lambda r: r.truncate(cap, graded)
    total = Poly.zero(series.ring.join(p.ring))
    power = Poly.constant(1, p.ring)
    for k in range(1, law.cap + 1):
        power = clip(power * p)
        if power.is_zero():
            break
        coefficient = series.coefficient({"u": k})
        if not coefficient.is_zero():
            total = total + clip(coefficient * power)
    return total


def is_polynomial_inverse(law: FormalGroupLaw) -> bool:
    """True when chi terminates below the cap (e.g. the additive law)."""
    return chi(law).poly.degree({"u"}) < law.cap


def difference_cofactor(law: FormalGroupLaw) -> TruncSeries:
    """U(u, v) with F(u, chi(v)) = (u - v) * U(u, v) and U(0, 0) = 1."""
    cap = law.cap
    u = Poly.var("u", law.ring)
    v = Poly.var("v", law.ring)
    chi_v = chi(law).poly.rename({"u": "v"})
    value = _evaluate(law, u, chi_v, cap, UV)
    cofactor = exact_div(value, u - v)
    if cofactor.constant_term(UV) != 1:
        raise AxiomError(f"Cofactor of F(u, chi(v)) is not a unit for law '{law.name}'")
    return TruncSeries(cofactor, cap - 1, UV)


def cofactor_inverse(law: FormalGroupLaw) -> TruncSeries:
    """U(u, v)^-1, cached on the law."""
    if law._cofactor_inverse is None:
        law._cofactor_inverse = series_inverse(difference_cofactor(law))
    return law._cofactor_inverse


def _first_offending(defect: Poly) -> str | None:
    if defect.is_zero():
        return None
    powers, c = defect.sorted_terms()[0]
    return str(Poly({make_monomial(powers): c}, defect.ring))


def verify_axioms(law: FormalGroupLaw) -> AxiomReport:
    """Unit, commutativity and associativity up to the cap."""
    cap = law.cap
    ring = law.ring
    u, v, w = (Poly.var(name, ring) for name in ("u", "v", "w"))
    zero = Poly.zero(ring)

    unit_defect = (_evaluate(law, u, zero, cap, UVW) - u) + (
        _evaluate(law, zero, v, cap, UVW) - v
    )
    commutativity_defect = _evaluate(law, u, v, cap, UVW) - _evaluate(law, v, u, cap, UVW)
    left = _evaluate(law, u, _evaluate(law, v, w, cap, UVW), cap, UVW)
    right = _evaluate(law, _evaluate(law, u, v, cap, UVW), w, cap, UVW)
    associativity_defect = left - right

    checks = [
        AxiomCheck(axiom=name, passed=defect.is_zero(), offending=_first_offending(defect))
        for name, defect in (
            ("unit", unit_defect),
            ("commutativity", commutativity_defect),
            ("associativity", associativity_defect),
        )
    ]
    report = AxiomReport(law=law.name, cap=cap, checks=checks)
    law.validated = report.passed
    if not report.passed:
        failed = [check.axiom for check in checks if not check.passed]
        logging.warning(f"Law '{law.name}' fails {failed} at cap {cap}")
    return report


def _normalized_sign(p: Poly) -> Poly:
    _, leading = p.sorted_terms()[0]
    return -p if leading < 0 else p


def lazard_relations(cap: int) -> list[Poly]:
    """
    Generators of the associativity ideal: the coefficients of
    F(u, F(v, w)) - F(F(u, v), w) up to total degree `cap`, for the law with
    free symmetric coefficients a<i>_<j> (i <= j) and the unit constraints built in.
    """
    if not 1 <= cap <= MAX_LAZARD_DEGREE:
        raise CapExceededError(f"Lazard relations are limited to degrees 1..{MAX_LAZARD_DEGREE}")
    generators = {
        f"a{i}_{j}": 1 - i - j
        for i in range(1, cap + 1)
        for j in range(i, cap + 1)
        if i + j <= cap
    }
    ring = named_ring(generators)
    table: dict[tuple[int, int], Poly] = {
        (1, 0): Poly.constant(1, ring),
        (0, 1): Poly.constant(1, ring),
    }
    for name in generators:
        i, j = (int(part) for part in name[1:].split("_"))
        table[(i, j)] = table[(j, i)] = Poly.var(name, ring)
    law = make_from_coeffs(table, cap, ring=ring, name="universal")

    u, v, w = (Poly.var(name, ring) for name in ("u", "v", "w"))
    left = _evaluate(law, u, _evaluate(law, v, w, cap, UVW), cap, UVW)
    right = _evaluate(law, _evaluate(law, u, v, cap, UVW), w, cap, UVW)
    defect = left - right

    exponents = {
        tuple(dict(mono).get(name, 0) for name in ("u", "v", "w")) for mono in defect.terms
    }
    relations: set[Poly] = set()
    for a, b, c in exponents:
        coefficient = defect.coefficient({"u": a, "v": b, "w": c})
        if not coefficient.is_zero():
            relations.add(_normalized_sign(coefficient))
    logging.info(f"{len(relations)} associativity relations up to degree {cap}")
    return sorted(relations, key=str)


class LawFile(BaseModel):
    """JSON law file: {"1,0": "1", "0,1": "1", "1,1": "-b", "cap": 6}."""

    model_config = ConfigDict(extra="allow")

    cap: int | None = None

    def table(self) -> dict[tuple[int, int], str | int]:
        entries: dict[tuple[int, int], str | int] = {}
        for key, value in (self.model_extra or {}).items():
            try:
                i, j = (int(part) for part in key.split(","))
            except ValueError:
                raise ParseError(f"Law file key '{key}' is not of the form 'i,j'")
            entries[(i, j)] = value
        return entries


def law_from_file(path: str | Path, cap: int | None = None) -> FormalGroupLaw:
    try:
        document = LawFile.model_validate_json(Path(path).read_text())
    except (OSError, ValidationError) as e:
        raise ParseError(f"Could not read law file {path}: {e}")
    cap = cap or document.cap or DEFAULT_CAP
    return make_from_coeffs(document.table(), cap, name=Path(path).stem)


def resolve_law(name: str, cap: int | None = None) -> FormalGroupLaw:
    """'add', 'mult' or the path of a JSON law file."""
    key = name.strip().lower()
    if key in ("add", "additive"):
        return make_additive(cap or DEFAULT_CAP)
    if key in ("mult", "multiplicative"):
        return make_multiplicative(cap or DEFAULT_CAP)
    return law_from_file(name, cap)
