import logging
from typing import Iterable

from ..exceptions import (
    BadRequestError,
    CapExceededError,
    PostconditionError,
    WhitneyDivisionError,
)
from ..fgl.model import FormalGroupLaw
from ..fgl.service import chi_apply, fgl_apply, is_polynomial_inverse
from ..polyring.model import Poly, TruncSeries
from ..polyring.service import x, y
from .model import BaseClassMode, BundleFlavor, FactorProduct, RootedBundle

MAX_BASE_CLASS_N = 5


def _check_base_size(n: int) -> None:
    if n > MAX_BASE_CLASS_N:
        raise CapExceededError(f"Base classes are limited to n <= {MAX_BASE_CLASS_N}, got {n}")


def sub_flag(roots: Iterable[Poly], count: int | None = None) -> RootedBundle:
    roots = tuple(roots)[:count]
    return RootedBundle(rank=len(roots), roots=roots, flavor=BundleFlavor.SUB)


def quotient_flag(roots: Iterable[Poly], count: int | None = None) -> RootedBundle:
    roots = tuple(roots)[:count]
    return RootedBundle(rank=len(roots), roots=roots, flavor=BundleFlavor.QUOTIENT)


def chern_dual(
    bundle: RootedBundle,
    law: FormalGroupLaw,
    cap: int | None = None,
    graded: Iterable[str] | None = None,
) -> RootedBundle:
    """c_t(E^) = prod(1 + chi(y_i) t): roots go through chi."""
    if bundle.flavor != BundleFlavor.SUB:
        raise BadRequestError("Dualizing expects a sub-flag flavored bundle")
    roots = tuple(chi_apply(law, root, cap, graded) for root in bundle.roots)
    return RootedBundle(rank=bundle.rank, roots=roots, flavor=BundleFlavor.QUOTIENT)


def _clip(cap: int | None, graded: Iterable[str] | None):
    if cap is None:
        return lambda p: p
    return lambda p: p.truncate(cap, graded)


def _combine(law: FormalGroupLaw, p: Poly, q: Poly, cap: int | None, graded) -> Poly:
    return fgl_apply(law, p, q, cap, graded)


def chern_tensor(
    first: RootedBundle,
    second: RootedBundle,
    law: FormalGroupLaw,
    cap: int | None = None,
    graded: Iterable[str] | None = None,
) -> FactorProduct:
    """Top Chern class of E (x) F: the factors F(x_i, y_j) over all pairs."""
    return FactorProduct(
        factors=tuple(
            _combine(law, a, b, cap, graded) for a in first.roots for b in second.roots
        )
    )


def chern_hom(
    sub: RootedBundle,
    quotient: RootedBundle,
    law: FormalGroupLaw,
    cap: int | None = None,
    graded: Iterable[str] | None = None,
) -> FactorProduct:
    """Top Chern class of Hom(sub, quotient) = sub^ (x) quotient: F(x_i, chi(y_j))."""
    if sub.flavor != BundleFlavor.SUB or quotient.flavor != BundleFlavor.QUOTIENT:
        raise BadRequestError("Hom expects a sub-flag source and a quotient-flag target")
    dual = chern_dual(sub, law, cap, graded)
    return FactorProduct(
        factors=tuple(
            _combine(law, a, b, cap, graded) for a in quotient.roots for b in dual.roots
        )
    )


def closed_form_factors(
    n: int,
    law: FormalGroupLaw,
    cap: int | None = None,
    graded: Iterable[str] | None = None,
) -> FactorProduct:
    """{F(x_k, chi(y_j)) : k + j <= n}."""
    factors = []
    for k in range(1, n):
        for j in range(1, n - k + 1):
            chi_y = chi_apply(law, y(j, law.ring), cap, graded)
            factors.append(_combine(law, x(k, law.ring), chi_y, cap, graded))
    return FactorProduct(factors=tuple(factors))


def kernel_top_chern(
    n: int,
    law: FormalGroupLaw,
    cap: int | None = None,
    graded: Iterable[str] | None = None,
) -> FactorProduct:
    """
    Top Chern class of the kernel K of M -> M', where
    M = sum_l Hom(V_l, Q_{n-l}) and M' = sum_l Hom(V_l, Q_{n-l-1}),
    obtained from the Whitney relation c(M) = c(K) c(M') by dividing factor
    multisets. V_l has roots y_1..y_l, Q_m has roots x_1..x_m.
    """
    if n < 2:
        raise BadRequestError(f"The kernel bundle needs n >= 2, got {n}")
    _check_base_size(n)
    xs = [x(k, law.ring) for k in range(1, n + 1)]
    ys = [y(j, law.ring) for j in range(1, n + 1)]
    total = FactorProduct()
    smaller = FactorProduct()
    for l in range(1, n):
        total = total * chern_hom(sub_flag(ys, l), quotient_flag(xs, n - l), law, cap, graded)
        smaller = smaller * chern_hom(
            sub_flag(ys, l), quotient_flag(xs, n - l - 1), law, cap, graded
        )
    try:
        kernel = total.divide(smaller)
    except WhitneyDivisionError as e:
        logging.error(f"Whitney division failed for n={n}, law '{law.name}': {e}")
        raise
    if len(kernel) != n * (n - 1) // 2:
        raise PostconditionError(f"Kernel for n={n} has {len(kernel)} factors")
    if kernel != closed_form_factors(n, law, cap, graded):
        raise PostconditionError(f"Kernel for n={n} differs from the closed form")
    return kernel


def bott_base_class(
    n: int,
    law: FormalGroupLaw,
    mode: BaseClassMode = BaseClassMode.EXACT,
    cap: int | None = None,
    graded: Iterable[str] | None = None,
) -> Poly | TruncSeries:
    """The class of the smallest Schubert variety: prod_{k+j<=n} F(x_k, chi(y_j)), expanded."""
    if n < 1:
        raise BadRequestError(f"Base classes need n >= 1, got {n}")
    _check_base_size(n)
    if mode == BaseClassMode.EXACT:
        if not is_polynomial_inverse(law):
            raise BadRequestError(
                f"Law '{law.name}' has no polynomial inverse; use truncated mode"
            )
        if n < 2:
            return Poly.constant(1, law.ring)
        return kernel_top_chern(n, law).expand()
    if cap is None:
        raise BadRequestError("Truncated mode requires a cap")
    if n < 2:
        return TruncSeries(Poly.constant(1, law.ring), cap, graded)
    factors = kernel_top_chern(n, law, cap, graded)
    return TruncSeries(factors.expand(_clip(cap, graded)), cap, graded)
