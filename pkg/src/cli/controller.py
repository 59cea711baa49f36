import logging
import sys
from contextlib import contextmanager
from typing import Annotated, Iterator, Sequence

import click
import typer

from ..chern_calc.model import BaseClassMode
from ..chern_calc.service import bott_base_class, kernel_top_chern
from ..degeneracy.model import ConditionSet
from ..degeneracy.service import (
    corner_ranks,
    describe_essential,
    essential_sufficiency_check,
    parse_matrix,
    satisfies_rank_conditions,
)
from ..exceptions import BadRequestError
from ..fgl.service import DEFAULT_CAP, chi, lazard_relations, resolve_law, verify_axioms
from ..flagbundle.model import FlagMode
from ..flagbundle.service import (
    bott_samelson_class,
    class_eq,
    class_from_text,
    pullback_to_base,
    to_response,
)
from ..logging import configure_logging, default_log_level
from ..permgroup.service import describe, parse_permutation
from ..schubert_calc.model import PolynomialFamilyKind
from ..schubert_calc.service import double_poly
from ..schubert_calc.service import to_response as polynomial_response
from ..verification.model import VerificationSuite
from ..verification.service import run_suite
from .model import CliState, OutputEnvelope
from .service import context_for, emit, emit_table, mode_for_law, parse_roots, parse_word

app = typer.Typer(
    name="schubert",
    help="Exact Schubert calculus over formal group laws.",
    no_args_is_help=True,
    add_completion=False,
)
perm_app = typer.Typer(help="Permutations, reduced words and rank tables.", no_args_is_help=True)
fgl_app = typer.Typer(help="Formal group laws.", no_args_is_help=True)
chern_app = typer.Typer(help="Chern-root calculus.", no_args_is_help=True)
flag_app = typer.Typer(help="Classes in the flag bundle.", no_args_is_help=True)
degeneracy_app = typer.Typer(help="Rank conditions and degeneracy loci.", no_args_is_help=True)
app.add_typer(perm_app, name="perm")
app.add_typer(fgl_app, name="fgl")
app.add_typer(chern_app, name="chern")
app.add_typer(flag_app, name="flag")
app.add_typer(degeneracy_app, name="degeneracy")

LawOption = Annotated[str, typer.Option("--law", help="add, mult or a JSON law file")]
CapOption = Annotated[int | None, typer.Option("--cap", help="Truncation cap")]
SeedOption = Annotated[int | None, typer.Option("--seed", help="Random seed")]


@contextmanager
def handle_errors() -> Iterator[None]:
    """Caller errors go to stderr with exit status 2."""
    try:
        yield
    except BadRequestError as e:
        logging.warning(f"Refused input: {e.message}")
        typer.echo(f"Error: {e.message}", err=True)
        raise typer.Exit(2)


def _state(ctx: typer.Context) -> CliState:
    return ctx.find_root().obj


def _finish(envelope: OutputEnvelope) -> None:
    if envelope.status:
        raise typer.Exit(envelope.status)


@app.callback()
def main_options(
    ctx: typer.Context,
    json_output: Annotated[bool, typer.Option("--json", help="Emit a JSON envelope")] = False,
    seed: Annotated[int, typer.Option("--seed", help="Default random seed")] = 0,
    cap: CapOption = None,
    log_level: Annotated[str | None, typer.Option("--log-level", help="Logging level")] = None,
):
    configure_logging(log_level or default_log_level())
    if ctx.obj is None:
        ctx.obj = CliState()
    ctx.obj.json_output = json_output
    ctx.obj.seed = seed
    ctx.obj.cap = cap


@app.command("poly")
def poly_command(
    ctx: typer.Context,
    kind: Annotated[PolynomialFamilyKind, typer.Argument(help="schubert, grothendieck or beta")],
    perm: Annotated[str, typer.Option("--perm", help='One-line permutation, e.g. "[3,1,2]"')],
):
    """Double Schubert, Grothendieck or beta-polynomial of a permutation."""
    with handle_errors():
        w = parse_permutation(perm)
        response = polynomial_response(double_poly(kind, w))
        emit(
            _state(ctx),
            f"poly {kind} --perm {w}",
            response.text,
            result=response.model_dump(mode="json"),
            metadata={"kind": str(kind), "n": w.n},
        )


@app.command("table")
def table_command(
    ctx: typer.Context,
    kind: Annotated[PolynomialFamilyKind, typer.Argument(help="schubert, grothendieck or beta")],
    n: Annotated[int, typer.Option("--n", help="Size of the symmetric group")],
):
    """Every polynomial of a family on S_n."""
    with handle_errors():
        emit_table(_state(ctx), kind, n)


@app.command("verify")
def verify_command(
    ctx: typer.Context,
    suite: Annotated[VerificationSuite, typer.Argument(help="Suite to run")],
    n: Annotated[int, typer.Option("--n", help="Size of the symmetric group")] = 3,
    run_all: Annotated[bool, typer.Option("--all", help="Keep going after a failure")] = False,
    samples: Annotated[int | None, typer.Option("--samples", help="Random samples")] = None,
    seed: SeedOption = None,
):
    """Runs a verification suite; exit status 1 on the first failure."""
    state = _state(ctx)
    seed = state.seed if seed is None else seed
    with handle_errors():
        report = run_suite(suite, n, samples=samples, seed=seed, stop_at_first=not run_all)
    verdict = "PASS" if report.passed else "FAIL"
    lines = [f"{verdict} {suite} n={n} ({report.cases_checked} cases)"]
    lines += [
        f"  {failure.case}: expected {failure.expected}, got {failure.actual}"
        for failure in report.failures
    ]
    envelope = emit(
        state,
        f"verify {suite} --n {n}",
        "\n".join(lines),
        result=report.model_dump(mode="json"),
        metadata={"seed": seed, "samples": samples},
        status=0 if report.passed else 1,
    )
    _finish(envelope)


@perm_app.command("info")
def perm_info(
    ctx: typer.Context,
    perm: Annotated[str, typer.Option("--perm", help="One-line permutation")],
):
    """Length, reduced words, rank table and essential set."""
    with handle_errors():
        info = describe(parse_permutation(perm))
    lines = [
        f"permutation: {info.permutation}",
        f"length: {info.length}",
        f"reduced words: {' | '.join(info.reduced_words) or '(empty)'}",
        "rank table:",
        *("  " + " ".join(str(v) for v in row) for row in info.rank_table),
        f"essential set: {info.essential_set}",
    ]
    emit(_state(ctx), f"perm info --perm {info.permutation}", "\n".join(lines), info.model_dump())


@fgl_app.command("chi")
def fgl_chi(
    ctx: typer.Context,
    law: LawOption = "mult",
    degree: Annotated[int | None, typer.Option("--degree", help="Truncation degree")] = None,
):
    """The inverse series chi(u) up to the given degree."""
    state = _state(ctx)
    cap = degree or state.cap or DEFAULT_CAP
    with handle_errors():
        resolved = resolve_law(law, cap)
        series = chi(resolved).poly
    emit(
        state,
        f"fgl chi --law {law} --degree {cap}",
        str(series),
        result={"law": resolved.name, "cap": cap, "series": str(series), "terms": series.to_json()},
        metadata={"cap": cap},
    )


@fgl_app.command("axioms")
def fgl_axioms(ctx: typer.Context, law: LawOption = "mult", cap: CapOption = None):
    """Checks unit, commutativity and associativity up to the cap."""
    state = _state(ctx)
    cap = cap or state.cap or DEFAULT_CAP
    with handle_errors():
        report = verify_axioms(resolve_law(law, cap))
    lines = [
        f"{check.axiom}: {'pass' if check.passed else 'FAIL at ' + str(check.offending)}"
        for check in report.checks
    ]
    envelope = emit(
        state,
        f"fgl axioms --law {law} --cap {cap}",
        "\n".join(lines),
        result=report.model_dump(),
        metadata={"cap": cap},
        status=0 if report.passed else 1,
    )
    _finish(envelope)


@fgl_app.command("lazard")
def fgl_lazard(
    ctx: typer.Context,
    degree: Annotated[int, typer.Option("--degree", help="Total degree bound")] = 4,
):
    """Generators of the associativity relations among free coefficients a<i>_<j>."""
    with handle_errors():
        relations = [str(r) for r in lazard_relations(degree)]
    emit(
        _state(ctx),
        f"fgl lazard --degree {degree}",
        "\n".join(relations),
        result={"cap": degree, "grading": "deg a_ij = 1 - i - j", "relations": relations},
        metadata={"cap": degree, "count": len(relations)},
    )


@chern_app.command("base-class")
def chern_base_class(
    ctx: typer.Context,
    n: Annotated[int, typer.Option("--n", help="Rank of the flag")],
    law: LawOption = "add",
    expand: Annotated[bool, typer.Option("--expand", help="Also print the expanded product")] = False,
    cap: CapOption = None,
):
    """The class of the smallest Schubert variety as a product of Chern-root factors."""
    state = _state(ctx)
    mode = mode_for_law(law)
    with handle_errors():
        flag = context_for(n, mode, law, cap or state.cap)
        factors = kernel_top_chern(n, flag.law, flag.cap, flag.graded) if n >= 2 else None
        expanded = None
        if expand:
            base_mode = BaseClassMode.EXACT if mode == FlagMode.CH else BaseClassMode.TRUNCATED
            value = bott_base_class(n, flag.law, base_mode, flag.cap, flag.graded)
            expanded = str(getattr(value, "poly", value))
    lines = [str(factors) if factors is not None else "{}"]
    if expanded is not None:
        lines.append(expanded)
    emit(
        state,
        f"chern base-class --n {n} --law {law}",
        "\n".join(lines),
        result={
            "factors": [str(p) for p in factors.factors] if factors is not None else [],
            "expanded": expanded,
        },
        metadata={"mode": flag.describe(), "cap": flag.cap},
    )


@flag_app.command("class")
def flag_class(
    ctx: typer.Context,
    n: Annotated[int, typer.Option("--n", help="Rank of the flag")],
    mode: Annotated[FlagMode, typer.Option("--mode", help="ch, ck or fgl")] = FlagMode.CH,
    word: Annotated[str, typer.Option("--word", help='Operator word, e.g. "1,2,1"')] = "",
    law: Annotated[str | None, typer.Option("--law", help="JSON law file for fgl mode")] = None,
    pullback: Annotated[str | None, typer.Option("--pullback", help='Roots "z1,...,zn"')] = None,
    vector: Annotated[bool, typer.Option("--vector", help="Include the evaluation vector")] = False,
    cap: CapOption = None,
):
    """Bott-Samelson class A_{i_l} ... A_{i_1} of the base class."""
    state = _state(ctx)
    with handle_errors():
        flag = context_for(n, mode, law, cap or state.cap)
        indices = parse_word(word)
        c = bott_samelson_class(indices, flag)
        pulled = pullback_to_base(c, parse_roots(pullback)) if pullback else None
        response = to_response(c, indices, with_vector=vector, pullback=pulled)
    lines = [response.representative]
    if c.truncated:
        lines.append(f"(truncated: exact through degree {c.valid})")
    if pulled is not None:
        lines.append(f"pullback: {pulled}")
    if response.evaluation_vector is not None:
        lines += response.evaluation_vector
    emit(
        state,
        f"flag class --n {n} --mode {mode} --word {word}",
        "\n".join(lines),
        result=response.model_dump(mode="json"),
        metadata={"mode": flag.describe(), "cap": flag.cap},
    )


@flag_app.command("eq")
def flag_eq(
    ctx: typer.Context,
    left: Annotated[str, typer.Argument(help="Polynomial")],
    right: Annotated[str, typer.Argument(help="Polynomial")],
    n: Annotated[int, typer.Option("--n", help="Rank of the flag")],
    mode: Annotated[FlagMode, typer.Option("--mode", help="ch, ck or fgl")] = FlagMode.CH,
    law: Annotated[str | None, typer.Option("--law", help="JSON law file for fgl mode")] = None,
    cap: CapOption = None,
):
    """Decides whether two polynomials define the same class in the flag ring."""
    state = _state(ctx)
    with handle_errors():
        flag = context_for(n, mode, law, cap or state.cap)
        equal = class_eq(class_from_text(left, flag), class_from_text(right, flag))
    emit(
        state,
        f"flag eq --n {n} --mode {mode}",
        "equal" if equal else "not equal",
        result={"equal": equal, "status": "truncated" if mode == FlagMode.FGL else "exact"},
        metadata={"mode": flag.describe(), "cap": flag.cap},
    )


@degeneracy_app.command("essential")
def degeneracy_essential(
    ctx: typer.Context,
    perm: Annotated[str, typer.Option("--perm", help="One-line permutation")],
):
    """Essential set and the rank bounds on it."""
    with handle_errors():
        response = describe_essential(parse_permutation(perm))
    lines = [f"Ess({response.permutation}) = {response.essential_set}"]
    lines += [f"  r({cell}) = {value}" for cell, value in response.rank_conditions.items()]
    lines.append(f"codimension: {response.expected_codimension}")
    emit(_state(ctx), f"degeneracy essential --perm {perm}", "\n".join(lines), response.model_dump())


@degeneracy_app.command("check")
def degeneracy_check(
    ctx: typer.Context,
    perm: Annotated[str, typer.Option("--perm", help="One-line permutation")],
    trials: Annotated[int, typer.Option("--trials", help="Random matrices")] = 200,
    seed: SeedOption = None,
):
    """Random matrices meeting the essential conditions must meet all of them."""
    state = _state(ctx)
    seed = state.seed if seed is None else seed
    with handle_errors():
        report = essential_sufficiency_check(parse_permutation(perm), trials, seed)
    verdict = "PASS" if report.passed else "FAIL"
    envelope = emit(
        state,
        f"degeneracy check --perm {perm} --trials {trials} --seed {seed}",
        f"{verdict} {report.permutation}: {len(report.counterexamples)} counterexamples "
        f"in {trials} trials ({report.sampled_nontrivial} non-trivial)",
        result=report.model_dump(),
        metadata={"seed": seed},
        status=0 if report.passed else 1,
    )
    _finish(envelope)


@degeneracy_app.command("rank")
def degeneracy_rank(
    ctx: typer.Context,
    perm: Annotated[str, typer.Option("--perm", help="One-line permutation")],
    matrix: Annotated[str, typer.Option("--matrix", help="JSON array of rows")],
    essential: Annotated[bool, typer.Option("--essential", help="Only the essential cells")] = False,
):
    """Checks the rank conditions of a permutation on an integer matrix."""
    which = ConditionSet.ESSENTIAL if essential else ConditionSet.ALL
    with handle_errors():
        w = parse_permutation(perm)
        parsed = parse_matrix(matrix)
        satisfied = satisfies_rank_conditions(parsed, w, which)
    emit(
        _state(ctx),
        f"degeneracy rank --perm {w}",
        "satisfied" if satisfied else "violated",
        result={"satisfied": satisfied, "which": str(which), "corner_ranks": corner_ranks(parsed)},
    )


def run(argv: Sequence[str] | None = None) -> OutputEnvelope:
    """Dispatches one invocation and returns its envelope; `status` is the exit code."""
    args = list(sys.argv[1:] if argv is None else argv)
    state = CliState()
    command = typer.main.get_command(app)
    try:
        status = command.main(args=args, prog_name="schubert", standalone_mode=False, obj=state)
    except click.ClickException as e:
        e.show()
        status = e.exit_code
    except click.exceptions.Abort:
        status = 1
    status = status if isinstance(status, int) else 0
    if state.envelope is None:
        return OutputEnvelope(command=" ".join(args), status=status)
    return state.envelope.model_copy(update={"status": status})


def main() -> None:
    sys.exit(run().status)
