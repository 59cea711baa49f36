import logging
import random
import re
from typing import Callable, Iterable, Literal, Mapping

import sympy
from sympy.parsing.sympy_parser import (
    convert_xor,
    implicit_multiplication,
    parse_expr,
    standard_transformations,
)

from ..exceptions import (
    NonDivisibleError,
    NonUnitError,
    ParseError,
    UnboundVariableError,
)
from .model import (
    BETA,
    BETA_JSON_NAME,
    ZZ,
    ZZ_BETA,
    ZZ_BETA_LAURENT,
    CoeffRing,
    Monomial,
    Poly,
    TruncSeries,
    make_monomial,
    mono_div,
    mono_mul,
    var_key,
)

_TRANSFORMATIONS = standard_transformations + (
    implicit_multiplication,
    convert_xor,
)

MAX_TEXT_LENGTH = 2000
MAX_EXPONENT = 16

_ALLOWED_TEXT = re.compile(r"[\sa-z0-9_+\-*^()]*")
_IDENTIFIER = re.compile(r"[a-z_][a-z0-9_]*")
_VARIABLE_NAME = re.compile(r"beta|[a-z](\d+(_\d+)?)?")
_POWER = re.compile(r"\^|\*\*")
_EXPONENT = re.compile(r"\s*-?\s*(\d+)")

# the only names parse_expr may resolve; everything else is refused before evaluation
_PARSE_GLOBALS = {
    "__builtins__": {},
    "Integer": sympy.Integer,
    "Symbol": sympy.Symbol,
    "Rational": sympy.Rational,
    "Float": sympy.Float,
}


def x(i: int, ring: CoeffRing = ZZ) -> Poly:
    return Poly.var(f"x{i}", ring)


def y(i: int, ring: CoeffRing = ZZ) -> Poly:
    return Poly.var(f"y{i}", ring)


def arith(a: Poly, b: Poly, op: Literal["add", "sub", "mul"]) -> Poly:
    """Exact ring arithmetic; raises RingMismatchError for incompatible rings."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"Unknown operation {op}")


def _as_poly(value: Poly | int | str, ring: CoeffRing) -> Poly:
    if isinstance(value, Poly):
        return value
    if isinstance(value, int):
        return Poly.constant(value, ring)
    return parse_poly(value)


def _bare_variable(p: Poly) -> str | None:
    if len(p.terms) != 1 or p.shift:
        return None
    ((mono, c),) = p.terms.items()
    if c == 1 and len(mono) == 1 and mono[0][1] == 1:
        return mono[0][0]
    return None


def substitute(
    p: Poly,
    bindings: Mapping[str, Poly | int | str],
    *,
    strict: bool = False,
    ring: CoeffRing | None = None,
    truncate: Callable[[Poly], Poly] | None = None,
) -> Poly:
    """
    Simultaneous substitution. With `strict`, every non-coefficient variable of
    `p` must be bound. `truncate`, when given, is applied to every partial
    product so truncated computations stay small.
    """
    if strict:
        unbound = sorted(p.variables - set(bindings), key=var_key)
        if unbound:
            raise UnboundVariableError(unbound[0])
    values = {name: _as_poly(v, p.ring) for name, v in bindings.items()}

    renames = {name: _bare_variable(v) for name, v in values.items()}
    if truncate is None and ring is None and BETA not in values and all(renames.values()):
        return p.rename(renames)

    target = ring
    if target is None:
        target = p.ring
        for value in values.values():
            target = target.join(value.ring)
    clip = truncate or (lambda q: q)

    powers: dict[tuple[str, int], Poly] = {}

    def power(name: str, exp: int) -> Poly:
        key = (name, exp)
        if key not in powers:
            powers[key] = clip(values[name] ** exp)
        return powers[key]

    out: dict[Monomial, int] = {}
    accumulated = Poly.zero(target)
    for mono, c in p.terms.items():
        kept = tuple((n, e) for n, e in mono if n not in values)
        bound = [(n, e) for n, e in mono if n in values]
        if not bound:
            out[kept] = out.get(kept, 0) + c
            continue
        term = Poly({kept: c}, target)
        for name, exp in bound:
            term = clip(term * power(name, exp))
        accumulated = accumulated + term
    result = accumulated + Poly(out, target)
    if p.shift:
        if BETA in values:
            result = result * (values[BETA] ** p.shift)
        else:
            result = result * Poly({(): 1}, ZZ_BETA_LAURENT, p.shift)
    result = Poly(result.terms, target, result.shift)
    return clip(result)


def swap_vars(p: Poly, i: int) -> Poly:
    """sigma_i: exchange x_i and x_{i+1}."""
    return p.rename({f"x{i}": f"x{i + 1}", f"x{i + 1}": f"x{i}"})


def is_symmetric(p: Poly, i: int) -> bool:
    return swap_vars(p, i) == p


def _difference_of_variables(den: Poly) -> tuple[str, str] | None:
    """(a, b) when den is exactly a - b for two variables."""
    if len(den.terms) != 2 or den.shift:
        return None
    plus = minus = None
    for mono, c in den.terms.items():
        if len(mono) != 1 or mono[0][1] != 1:
            return None
        if c == 1:
            plus = mono[0][0]
        elif c == -1:
            minus = mono[0][0]
    if plus is None or minus is None:
        return None
    return plus, minus


def _divide_by_difference(num: Poly, a: str, b: str) -> Poly:
    # num = (a - b) * Q + num|_{a := b}; the remainder must vanish
    remainder = num.rename({a: b})
    if not remainder.is_zero():
        raise NonDivisibleError(f"NON-DIVISIBLE: {num} by {a} - {b}")
    out: dict[Monomial, int] = {}
    for mono, c in num.terms.items():
        powers = dict(mono)
        k = powers.pop(a, 0)
        if not k:
            continue
        rest = make_monomial(powers)
        for j in range(k):
            mono_q = mono_mul(rest, make_monomial({a: k - 1 - j, b: j}))
            out[mono_q] = out.get(mono_q, 0) + c
    return Poly(out, num.ring, num.shift)


def _lex_key(mono: Monomial) -> tuple:
    return tuple((var_key(n), -e) for n, e in mono) + (((99, 0, ""), 0),)


def exact_div(num: Poly, den: Poly) -> Poly:
    """Quotient q with q * den = num; raises NonDivisibleError otherwise."""
    if den.is_zero():
        raise NonDivisibleError("NON-DIVISIBLE: division by zero")
    ring = num.ring.join(den.ring)
    pair = _difference_of_variables(den)
    if pair is not None:
        return _divide_by_difference(num, *pair)

    lead_mono = min(den.terms, key=_lex_key)
    lead_coeff = den.terms[lead_mono]
    remainder = dict(num.terms)
    quotient: dict[Monomial, int] = {}
    while remainder:
        mono = min(remainder, key=_lex_key)
        c = remainder[mono]
        factor = mono_div(mono, lead_mono)
        if factor is None or c % lead_coeff:
            logging.error(f"Exact division tripwire: {num} / {den}")
            raise NonDivisibleError(f"NON-DIVISIBLE: {num} by {den}")
        q = c // lead_coeff
        quotient[factor] = quotient.get(factor, 0) + q
        for dm, dc in den.terms.items():
            target = mono_mul(factor, dm)
            value = remainder.get(target, 0) - q * dc
            if value:
                remainder[target] = value
            else:
                remainder.pop(target, None)
    return Poly(quotient, ring, num.shift - den.shift)


def _unit_inverse(constant: Poly) -> Poly:
    if len(constant.terms) == 1:
        ((mono, c),) = constant.terms.items()
        if c in (1, -1):
            if not mono and not constant.shift:
                return Poly.constant(c, constant.ring)
            if constant.ring.is_laurent and all(n == BETA for n, _ in mono):
                beta_exp = dict(mono).get(BETA, 0) + constant.shift
                return Poly({(): c}, constant.ring, -beta_exp)
    raise NonUnitError(f"Constant term {constant} is not a unit")


def series_inverse(s: TruncSeries) -> TruncSeries:
    """t with s * t = 1 up to the cap."""
    constant = s.poly.constant_term(s.graded)
    unit = _unit_inverse(constant)
    h = s.poly * unit - 1
    result = Poly.constant(1, s.ring)
    power = Poly.constant(1, s.ring)
    for _ in range(s.cap):
        power = (power * -h).truncate(s.cap, s.graded)
        if power.is_zero():
            break
        result = result + power
    return TruncSeries(result * unit, s.cap, s.graded)


def _screen(text: str) -> dict[str, sympy.Symbol]:
    """Symbols for the names in `text`; ParseError outside the polynomial grammar."""
    if len(text) > MAX_TEXT_LENGTH:
        raise ParseError(f"Polynomial text longer than {MAX_TEXT_LENGTH} characters")
    if not _ALLOWED_TEXT.fullmatch(text):
        raise ParseError(f"Unexpected character in '{text}'")
    symbols: dict[str, sympy.Symbol] = {}
    for name in _IDENTIFIER.findall(text):
        if not _VARIABLE_NAME.fullmatch(name):
            raise ParseError(f"Unknown name '{name}' in '{text}'")
        name = BETA if name == BETA_JSON_NAME else name
        symbols[name] = sympy.Symbol(name)
    for power in _POWER.finditer(text):
        exponent = _EXPONENT.match(text, power.end())
        if exponent is None:
            raise ParseError(f"Exponents must be integer literals in '{text}'")
        if int(exponent.group(1)) > MAX_EXPONENT:
            raise ParseError(f"Exponent {exponent.group(1)} is above {MAX_EXPONENT}")
    return symbols


def parse_poly(text: str, ring: CoeffRing | None = None) -> Poly:
    """
    Parse the polynomial text format ("x1^2 - 2*x1*y1 + y1^2", "*" optional).
    "b" and "beta" denote the coefficient b. Only integers, variable names,
    + - * ^ ** and parentheses are accepted.
    """
    symbols = _screen(text)
    try:
        expr = sympy.expand(
            parse_expr(
                text.replace(BETA_JSON_NAME, BETA),
                local_dict=symbols,
                global_dict=dict(_PARSE_GLOBALS),
                transformations=_TRANSFORMATIONS,
            )
        )
    except (SyntaxError, TypeError, ValueError, NameError, sympy.SympifyError) as e:
        raise ParseError(f"Could not parse polynomial '{text}': {e}")
    names = {str(s) for s in expr.free_symbols}
    if ring is None:
        ring = ZZ_BETA if BETA in names else ZZ
    out = Poly.zero(ring)
    for term in sympy.Add.make_args(expr):
        coeff, rest = term.as_coeff_Mul()
        if not coeff.is_Integer:
            raise ParseError(f"Non-integer coefficient {coeff} in '{text}'")
        powers: dict[str, int] = {}
        for base, exp in rest.as_powers_dict().items():
            if base == 1:
                continue
            if not base.is_Symbol or not exp.is_Integer:
                raise ParseError(f"Unsupported factor {base}**{exp} in '{text}'")
            powers[str(base)] = int(exp)
        negative = {n: e for n, e in powers.items() if e < 0}
        value = Poly({make_monomial({n: e for n, e in powers.items() if e > 0}): int(coeff)}, ring)
        if negative:
            if set(negative) != {BETA}:
                raise ParseError(f"Negative exponent on a variable in '{text}'")
            value = value * (Poly.var(BETA, ZZ_BETA_LAURENT) ** negative[BETA])
        out = out + value
    return out


def random_poly(
    rng: random.Random,
    variables: Iterable[str],
    *,
    terms: int = 4,
    max_exp: int = 2,
    ring: CoeffRing = ZZ_BETA,
    coeff_range: int = 5,
) -> Poly:
    """Random sparse polynomial; coefficients may carry powers of b when the ring has it."""
    names = list(variables)
    out: dict[Monomial, int] = {}
    for _ in range(terms):
        powers = {name: rng.randint(0, max_exp) for name in names if rng.random() < 0.5}
        if BETA in ring.symbols and rng.random() < 0.4:
            powers[BETA] = rng.randint(1, 2)
        mono = make_monomial(powers)
        out[mono] = out.get(mono, 0) + rng.randint(-coeff_range, coeff_range)
    return Poly(out, ring)
