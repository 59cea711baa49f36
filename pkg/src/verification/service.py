import logging
import random
from typing import Callable, Iterator

from ..degeneracy.service import essential_sufficiency_check
from ..exceptions import CapExceededError, SizeMismatchError
from ..flagbundle.model import FlagMode
from ..flagbundle.service import (
    MAX_CLASS_EQ_N,
    bott_samelson_class,
    ck_schubert_class,
    class_eq,
    class_from_poly,
    make_context,
    operator_A,
    operator_A_ck,
    random_ideal_element,
)
from ..permgroup.model import Permutation
from ..permgroup.service import (
    all_permutations,
    all_reduced_words,
    compose,
    embed,
    essential_set,
    longest_element,
)
from ..polyring.model import ZZ, ZZ_BETA, Poly
from ..polyring.service import random_poly
from ..schubert_calc.model import PolynomialFamilyKind
from ..schubert_calc.service import (
    apply_partial,
    apply_phi,
    divided_difference,
    double_poly,
    double_poly_along,
    negate_y,
    specialize_beta,
    telescoping_product,
)
from .model import VerificationCase, VerificationFailure, VerificationReport, VerificationSuite

DEFAULT_SAMPLES = {
    VerificationSuite.BRAID: 100,
    VerificationSuite.BOTT_CH: 20,
    VerificationSuite.BOTT_CK: 20,
    VerificationSuite.ESSENTIAL: 200,
}
CK_SPOT_CHECKS = 5
MAX_VERIFY_N = {
    VerificationSuite.BRAID: 6,
    VerificationSuite.STABILITY: 4,
    VerificationSuite.SPECIAL: 5,
    VerificationSuite.BOTT_CH: 5,
    VerificationSuite.BOTT_CK: 4,
    VerificationSuite.ESSENTIAL: 6,
    VerificationSuite.WORDS: 5,
}


def _case(label: str, expected, actual) -> VerificationCase:
    return VerificationCase(
        label=label, passed=expected == actual, expected=str(expected), actual=str(actual)
    )


def _class_case(label: str, left, right) -> VerificationCase:
    equal = class_eq(left, right)
    return VerificationCase(
        label=label,
        passed=equal,
        expected=str(right.rep),
        actual=str(left.rep),
    )


def _reduced_words_of_complement(w: Permutation) -> list[tuple[int, ...]]:
    return [word.word for word in all_reduced_words(compose(longest_element(w.n), w))]


def _roots(n: int) -> list[str]:
    return [f"x{k}" for k in range(1, n + 1)] + [f"y{k}" for k in range(1, n + 1)]


def braid_cases(n: int, samples: int, seed: int) -> Iterator[VerificationCase]:
    """Commutation, braid and quadratic relations of d, pi and phi on random polynomials."""
    quadratic = {
        PolynomialFamilyKind.SCHUBERT: Poly.zero(),
        PolynomialFamilyKind.GROTHENDIECK: Poly.constant(1),
        PolynomialFamilyKind.BETA: -Poly.beta(),
    }
    for kind in PolynomialFamilyKind:
        op = lambda i, p, kind=kind: divided_difference(i, p, kind)
        for sample in range(samples):
            rng = random.Random(f"{seed}:{kind}:{sample}")
            p = random_poly(rng, _roots(n), ring=kind.ring)
            for i in range(1, n):
                once = op(i, p)
                label = f"{kind} quadratic i={i} sample={sample}"
                yield _case(label, quadratic[kind] * once, op(i, once))
                for j in range(i + 1, n):
                    if j - i >= 2:
                        yield _case(
                            f"{kind} commute ({i},{j}) sample={sample}",
                            op(i, op(j, p)),
                            op(j, op(i, p)),
                        )
                    else:
                        yield _case(
                            f"{kind} braid ({i},{j}) sample={sample}",
                            op(i, op(j, op(i, p))),
                            op(j, op(i, op(j, p))),
                        )


def stability_cases(n: int, samples: int, seed: int) -> Iterator[VerificationCase]:
    """Polynomials on S_n agree with those of their images in S_{n+1}; telescoping products."""
    for w in all_permutations(n):
        for kind in PolynomialFamilyKind:
            yield _case(
                f"{kind} {w} in S_{n} vs S_{n + 1}",
                double_poly(kind, w).value,
                double_poly(kind, embed(w, n + 1)).value,
            )
    for size in range(1, n + 2):
        for m in range(1, size + 1):
            yield _case(
                f"phi_{m} H_{m} = H_{m + 1} for n={size}",
                telescoping_product(size, m + 1),
                apply_phi(m, telescoping_product(size, m)),
            )


def special_cases(n: int, samples: int, seed: int) -> Iterator[VerificationCase]:
    """b = 0 with y := -y gives the Schubert polynomial; b = -1 the Grothendieck polynomial."""
    for w in all_permutations(n):
        beta_poly = double_poly(PolynomialFamilyKind.BETA, w)
        yield _case(
            f"{w} at b=0, y:=-y",
            double_poly(PolynomialFamilyKind.SCHUBERT, w).value,
            negate_y(specialize_beta(beta_poly, 0)),
        )
        yield _case(
            f"{w} at b=-1",
            double_poly(PolynomialFamilyKind.GROTHENDIECK, w).value,
            specialize_beta(beta_poly, -1),
        )


def bott_ch_cases(n: int, samples: int, seed: int) -> Iterator[VerificationCase]:
    """Additive push-forward chains give the double Schubert classes; A agrees with d and kills J."""
    ctx = make_context(n, FlagMode.CH)
    for w in all_permutations(n):
        expected = class_from_poly(double_poly(PolynomialFamilyKind.SCHUBERT, w).value, ctx)
        for word in _reduced_words_of_complement(w):
            chain = bott_samelson_class(word, ctx)
            yield _class_case(f"CH chain {list(word)} for {w}", chain, expected)
    rng = random.Random(f"{seed}:bott-ch")
    for sample in range(samples):
        p = random_poly(rng, _roots(n), ring=ZZ)
        element = random_ideal_element(ctx, rng)
        for i in range(1, n):
            yield _case(
                f"A_{i} = d_{i} sample={sample}",
                apply_partial(i, p),
                operator_A(i, class_from_poly(p, ctx)).rep,
            )
            image = operator_A(i, class_from_poly(element, ctx))
            zero = class_from_poly(Poly.zero(), ctx)
            yield _class_case(f"A_{i} preserves J sample={sample}", image, zero)


def _ck_permutations(n: int, seed: int) -> list[Permutation]:
    perms = all_permutations(n)
    if n <= 3:
        return perms
    return random.Random(f"{seed}:bott-ck").sample(perms, CK_SPOT_CHECKS)


def bott_ck_cases(n: int, samples: int, seed: int) -> Iterator[VerificationCase]:
    """
    Connected K-theory chains agree with the beta-polynomials at b := -b,
    y := chi(y) for every reduced word; A^CK bridges to phi and to the generic
    operator; the chain at b = 0 is the Chow chain.
    """
    ck = make_context(n, FlagMode.CK)
    ch = make_context(n, FlagMode.CH)
    for w in _ck_permutations(n, seed):
        expected = ck_schubert_class(w, ck)
        words = _reduced_words_of_complement(w)
        for word in words:
            chain = bott_samelson_class(word, ck)
            yield _class_case(f"CK chain {list(word)} for {w}", chain, expected)
        yield _case(
            f"CK chain at b=0 for {w}",
            bott_samelson_class(words[0], ch).rep,
            specialize_beta(bott_samelson_class(words[0], ck).rep, 0),
        )
    rng = random.Random(f"{seed}:bott-ck")
    for sample in range(samples):
        p = ck.truncate(random_poly(rng, _roots(n), ring=ZZ_BETA))
        f = class_from_poly(p, ck)
        for i in range(1, n):
            bridged = operator_A_ck(i, f)
            yield _case(
                f"A^CK_{i} = phi_{i} at b:=-b sample={sample}",
                ck.truncate(specialize_beta(apply_phi(i, specialize_beta(p, "-b")), "-b")),
                bridged.rep,
            )
            yield _case(f"A^CK_{i} = A_{i} sample={sample}", operator_A(i, f).rep, bridged.rep)
            yield _case(
                f"A^CK_{i} A^CK_{i} = b A^CK_{i} sample={sample}",
                ck.truncate(Poly.beta() * bridged.rep),
                operator_A_ck(i, bridged).rep,
            )


def essential_cases(n: int, samples: int, seed: int) -> Iterator[VerificationCase]:
    """Essential set of w0, stability under embedding and the random-matrix sufficiency shadow."""
    for size in range(1, n + 1):
        yield _case(
            f"Ess(w0) in S_{size}",
            sorted((i, size - i) for i in range(1, size)),
            sorted(essential_set(longest_element(size))),
        )
    for w in all_permutations(n):
        for m in range(n, n + 4):
            embedded = sorted(essential_set(embed(w, m)))
            yield _case(f"Ess({w}) in S_{m}", sorted(essential_set(w)), embedded)
        report = essential_sufficiency_check(w, samples, seed)
        yield VerificationCase(
            label=f"essential conditions of {w} imply all ({samples} matrices)",
            passed=report.passed,
            expected="no counterexample",
            actual=f"{len(report.counterexamples)} counterexamples",
        )


def words_cases(n: int, samples: int, seed: int) -> Iterator[VerificationCase]:
    """Every reduced word of w0*w yields the same beta-polynomial."""
    for w in all_permutations(n):
        expected = double_poly(PolynomialFamilyKind.BETA, w).value
        for word in _reduced_words_of_complement(w):
            yield _case(
                f"beta {w} along {list(word)}",
                expected,
                double_poly_along(PolynomialFamilyKind.BETA, w, word).value,
            )


SUITES: dict[VerificationSuite, Callable[[int, int, int], Iterator[VerificationCase]]] = {
    VerificationSuite.BRAID: braid_cases,
    VerificationSuite.STABILITY: stability_cases,
    VerificationSuite.SPECIAL: special_cases,
    VerificationSuite.BOTT_CH: bott_ch_cases,
    VerificationSuite.BOTT_CK: bott_ck_cases,
    VerificationSuite.ESSENTIAL: essential_cases,
    VerificationSuite.WORDS: words_cases,
}


def run_suite(
    suite: VerificationSuite,
    n: int,
    samples: int | None = None,
    seed: int = 0,
    stop_at_first: bool = True,
) -> VerificationReport:
    """Runs a suite lazily; stops at the first failure unless `stop_at_first` is False."""
    if n < 1:
        raise SizeMismatchError(f"n must be positive, got {n}")
    limit = min(MAX_VERIFY_N[suite], MAX_CLASS_EQ_N)
    if n > limit:
        raise CapExceededError(f"The {suite} suite is limited to n <= {limit}")
    samples = DEFAULT_SAMPLES.get(suite, 0) if samples is None else samples

    failures: list[VerificationFailure] = []
    checked = 0
    stopped = False
    for case in SUITES[suite](n, samples, seed):
        checked += 1
        if case.passed:
            continue
        logging.warning(f"{suite} failure: {case.label}")
        failures.append(
            VerificationFailure(case=case.label, expected=case.expected, actual=case.actual)
        )
        if stop_at_first:
            stopped = True
            break
    logging.info(f"Suite {suite} at n={n}: {checked} cases, {len(failures)} failures")
    return VerificationReport(
        suite=suite,
        n=n,
        seed=seed,
        cases_checked=checked,
        failures=failures,
        stopped_early=stopped,
        passed=not failures,
    )
