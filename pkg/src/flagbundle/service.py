import logging
import random
from typing import Sequence

from ..chern_calc.model import BaseClassMode
from ..chern_calc.service import bott_base_class
from ..exceptions import BadRequestError, CapExceededError, SizeMismatchError
from ..fgl.model import FormalGroupLaw
from ..fgl.service import (
    chi_apply,
    cofactor_inverse,
    default_cap,
    make_additive,
    make_multiplicative,
)
from ..permgroup.model import Permutation
from ..permgroup.service import all_permutations, embed
from ..polyring.model import BETA, ZZ_BETA, Poly, TruncSeries
from ..polyring.service import (
    exact_div,
    parse_poly,
    random_poly,
    substitute,
    swap_vars,
    x,
    y,
)
from ..schubert_calc.model import PolynomialFamilyKind
from ..schubert_calc.service import double_poly, specialize_beta
from .model import FlagClass, FlagClassResponse, FlagContext, FlagMode

MAX_CLASS_EQ_N = 6
MAX_FLAG_N = MAX_CLASS_EQ_N
MAX_WORD_LENGTH = 64
CK_GRADING = frozenset({BETA})


def default_ck_cap(n: int) -> int:
    """n(n-1)/2: the largest b-exponent a Schubert class on S_n can carry."""
    return max(1, n * (n - 1) // 2)


MAX_CK_CAP = default_ck_cap(MAX_FLAG_N)


def make_context(
    n: int,
    mode: FlagMode,
    cap: int | None = None,
    law: FormalGroupLaw | None = None,
) -> FlagContext:
    if n < 1:
        raise SizeMismatchError(f"n must be positive, got {n}")
    if n > MAX_FLAG_N:
        raise CapExceededError(f"Flag bundles are limited to rank n <= {MAX_FLAG_N}")
    if mode == FlagMode.CH:
        return FlagContext(n=n, mode=mode, law=make_additive(default_cap(n)))
    if mode == FlagMode.CK:
        cap = default_ck_cap(n) if cap is None else cap
        if not 0 <= cap <= MAX_CK_CAP:
            raise CapExceededError(f"CK caps must lie in 0..{MAX_CK_CAP}, got {cap}")
        return FlagContext(
            n=n, mode=mode, law=make_multiplicative(cap + 1), cap=cap, graded=CK_GRADING
        )
    if law is None:
        raise BadRequestError("FGL mode needs a formal group law")
    return FlagContext(n=n, mode=mode, law=law, cap=law.cap)


def _initial_valid(ctx: FlagContext) -> int | None:
    return ctx.cap if ctx.mode == FlagMode.FGL else None


def class_from_text(text: str, ctx: FlagContext) -> FlagClass:
    return FlagClass(ctx=ctx, rep=ctx.truncate(parse_poly(text)), valid=_initial_valid(ctx))


def class_from_poly(p: Poly, ctx: FlagContext) -> FlagClass:
    return FlagClass(ctx=ctx, rep=ctx.truncate(p), valid=_initial_valid(ctx))


def _check_class_eq_size(n: int) -> None:
    if n > MAX_CLASS_EQ_N:
        raise CapExceededError(f"Equality in the flag ring is limited to n <= {MAX_CLASS_EQ_N}")


def _at_permutation(p: Poly, sigma: Permutation) -> Poly:
    return p.rename({f"x{k}": f"y{sigma(k)}" for k in range(1, sigma.n + 1)})


def evaluation_vector(c: FlagClass) -> list[Poly]:
    """The n! images of the representative under x := (y_sigma(1), ..., y_sigma(n))."""
    _check_class_eq_size(c.ctx.n)
    rep = c.rep if c.valid is None else c.rep.truncate(c.valid)
    return [c.ctx.truncate(_at_permutation(rep, sigma)) for sigma in all_permutations(c.ctx.n)]


def class_eq(a: FlagClass, b: FlagClass) -> bool:
    """
    rep_a - rep_b lies in J iff every substitution x := sigma(y) kills it. In
    FGL mode the comparison only looks at degrees where both sides are exact.
    """
    if a.ctx.n != b.ctx.n or a.ctx.mode != b.ctx.mode:
        raise SizeMismatchError("Classes live in different flag contexts")
    _check_class_eq_size(a.ctx.n)
    difference = a.ctx.truncate(a.rep - b.rep)
    valids = [v for v in (a.valid, b.valid) if v is not None]
    if valids:
        difference = difference.truncate(min(valids))
    for sigma in all_permutations(a.ctx.n):
        image = _at_permutation(difference, sigma)
        if not image.is_zero():
            logging.debug(f"Classes differ at {sigma}: {image}")
            return False
    return True


def _next_valid(c: FlagClass) -> int | None:
    if c.valid is None:
        return None
    return min(c.valid, c.ctx.cap - 1) - 1


def _check_index(i: int, n: int) -> None:
    if not 1 <= i < n:
        raise BadRequestError(f"Operator index {i} is outside 1..{n - 1}")


def operator_A(i: int, f: FlagClass, law: FormalGroupLaw | None = None) -> FlagClass:
    """
    Push-pull along the i-th P^1-bundle: g = f * U(x_i, x_{i+1})^-1 with
    F(u, chi(v)) = (u - v) U(u, v), then (g - sigma_i g) / (x_i - x_{i+1}).
    """
    ctx = f.ctx
    _check_index(i, ctx.n)
    law = law or ctx.law
    if ctx.mode == FlagMode.CH:
        g = f.rep
    else:
        unit_inverse = cofactor_inverse(law).poly.rename({"u": f"x{i}", "v": f"x{i + 1}"})
        g = ctx.truncate(f.rep * unit_inverse)
    result = exact_div(g - swap_vars(g, i), x(i) - x(i + 1))
    return FlagClass(ctx=ctx, rep=ctx.truncate(result), valid=_next_valid(f))


def operator_A_ck(i: int, f: FlagClass) -> FlagClass:
    """((1 - b x_{i+1}) f - (1 - b x_i) sigma_i f) / (x_i - x_{i+1})."""
    if f.ctx.mode != FlagMode.CK:
        raise BadRequestError("The CK operator needs a CK context")
    _check_index(i, f.ctx.n)
    b = Poly.beta()
    numerator = (1 - b * x(i + 1, ZZ_BETA)) * f.rep - (1 - b * x(i, ZZ_BETA)) * swap_vars(
        f.rep, i
    )
    result = exact_div(numerator, x(i) - x(i + 1))
    return FlagClass(ctx=f.ctx, rep=f.ctx.truncate(result))


def base_class(ctx: FlagContext) -> FlagClass:
    if ctx.mode == FlagMode.CH:
        rep = bott_base_class(ctx.n, ctx.law, BaseClassMode.EXACT)
    else:
        rep = bott_base_class(ctx.n, ctx.law, BaseClassMode.TRUNCATED, ctx.cap, ctx.graded)
    if isinstance(rep, TruncSeries):
        rep = rep.poly
    return FlagClass(ctx=ctx, rep=rep, valid=_initial_valid(ctx))


def bott_samelson_class(word: Sequence[int], ctx: FlagContext) -> FlagClass:
    """A_{i_l} ... A_{i_1} applied to the base class; any word up to MAX_WORD_LENGTH is accepted."""
    if len(word) > MAX_WORD_LENGTH:
        raise CapExceededError(f"Words are limited to {MAX_WORD_LENGTH} letters")
    for i in word:
        _check_index(i, ctx.n)
    c = base_class(ctx)
    for i in word:
        c = operator_A(i, c)
    if c.truncated:
        logging.warning(
            f"Class for word {list(word)} is truncated: exact through degree {c.valid}"
        )
    return c


def ck_schubert_class(w: Permutation, ctx: FlagContext) -> FlagClass:
    """The beta-polynomial of w with b := -b and y_j := chi(y_j) under the multiplicative law."""
    if ctx.mode != FlagMode.CK:
        raise BadRequestError("CK Schubert classes need a CK context")
    if w.n > ctx.n:
        raise SizeMismatchError(f"{w} does not live in S_{ctx.n}")
    w = embed(w, ctx.n)
    h = specialize_beta(double_poly(PolynomialFamilyKind.BETA, w), "-b")
    bindings = {
        f"y{j}": chi_apply(ctx.law, y(j, ZZ_BETA), ctx.cap, ctx.graded)
        for j in range(1, ctx.n + 1)
    }
    rep = substitute(h, bindings, truncate=ctx.truncate)
    return FlagClass(ctx=ctx, rep=rep)


def pullback_to_base(c: FlagClass, w_roots: Sequence[Poly | str]) -> Poly:
    """x_k := w_roots[k]; the roots must cover every x that occurs."""
    if len(w_roots) > c.ctx.n:
        raise SizeMismatchError(f"Got {len(w_roots)} roots for a rank {c.ctx.n} flag")
    covered = {f"x{k}" for k in range(1, len(w_roots) + 1)}
    missing = sorted(
        name for name in c.rep.variables if name.startswith("x") and name not in covered
    )
    if missing:
        raise SizeMismatchError(f"No root given for {missing[0]}")
    bindings = {f"x{k}": root for k, root in enumerate(w_roots, start=1)}
    return c.ctx.truncate(substitute(c.rep, bindings))


def random_ideal_element(ctx: FlagContext, rng: random.Random, terms: int = 3) -> Poly:
    """A random combination sum_i p_i (e_i(x) - e_i(y)) with small polynomial multipliers."""
    names = [f"x{k}" for k in range(1, ctx.n + 1)] + [f"y{k}" for k in range(1, ctx.n + 1)]
    ring = ZZ_BETA if ctx.mode == FlagMode.CK else ctx.law.ring
    total = Poly.zero(ring)
    for generator in ctx.ideal_generators():
        multiplier = random_poly(rng, names, terms=terms, max_exp=1, ring=ring)
        total = total + multiplier * generator
    return ctx.truncate(total)


def to_response(
    c: FlagClass,
    word: Sequence[int] = (),
    with_vector: bool = False,
    pullback: Poly | None = None,
) -> FlagClassResponse:
    return FlagClassResponse(
        n=c.ctx.n,
        mode=c.ctx.mode,
        cap=c.ctx.cap,
        word=list(word),
        representative=str(c.rep),
        status="truncated" if c.truncated else "exact",
        valid_degree=c.valid,
        evaluation_vector=[str(p) for p in evaluation_vector(c)] if with_vector else None,
        pullback=None if pullback is None else str(pullback),
    )
