from typing import Any

from pydantic import BaseModel, Field


class OutputEnvelope(BaseModel):
    command: str
    metadata: dict[str, Any] = Field(default_factory=dict)
    result: Any = None
    status: int = 0


class CliState(BaseModel):
    """Global options shared by every subcommand of one invocation."""

    json_output: bool = False
    seed: int = 0
    cap: int | None = None
    envelope: OutputEnvelope | None = None
