import typer

from ..exceptions import BadRequestError, ParseError
from ..fgl.service import default_cap, resolve_law
from ..flagbundle.model import FlagContext, FlagMode
from ..flagbundle.service import make_context
from ..polyring.model import Poly
from ..polyring.service import parse_poly
from ..schubert_calc.model import PolynomialFamilyKind
from ..schubert_calc.service import family_table, to_row
from .model import CliState, OutputEnvelope


def parse_word(text: str) -> tuple[int, ...]:
    """Parses "1,2,1" into (1, 2, 1); the empty string is the empty word."""
    stripped = text.strip().removeprefix("(").removesuffix(")")
    try:
        return tuple(int(part) for part in stripped.split(",") if part.strip())
    except ValueError as e:
        raise ParseError(f"Invalid word '{text}': {e}")


def parse_roots(text: str) -> list[Poly]:
    return [parse_poly(part) for part in text.split(",") if part.strip()]


def mode_for_law(law: str) -> FlagMode:
    key = law.strip().lower()
    if key in ("add", "additive"):
        return FlagMode.CH
    if key in ("mult", "multiplicative"):
        return FlagMode.CK
    return FlagMode.FGL


def context_for(n: int, mode: FlagMode, law: str | None, cap: int | None) -> FlagContext:
    if mode == FlagMode.FGL:
        if law is None:
            raise BadRequestError("FGL mode needs --law FILE")
        return make_context(n, mode, law=resolve_law(law, cap or default_cap(n)))
    return make_context(n, mode, cap)


def emit(
    state: CliState,
    command: str,
    text: str,
    result=None,
    metadata: dict | None = None,
    status: int = 0,
) -> OutputEnvelope:
    """Prints the payload (text mode) or the whole envelope (--json) and records it."""
    envelope = OutputEnvelope(
        command=command, metadata=metadata or {}, result=result, status=status
    )
    state.envelope = envelope
    if state.json_output:
        typer.echo(envelope.model_dump_json(indent=2))
    else:
        typer.echo(text)
    return envelope


def emit_table(state: CliState, kind: PolynomialFamilyKind, n: int) -> OutputEnvelope:
    """All n! polynomials of the family, sorted by (length, one-line)."""
    rows = [to_row(p) for p in family_table(kind, n)]
    text = "\n".join(f"{row.permutation}: {row.text}" for row in rows)
    return emit(
        state,
        f"table {kind} --n {n}",
        text,
        result=[row.model_dump() for row in rows],
        metadata={"kind": str(kind), "n": n, "rows": len(rows)},
    )
