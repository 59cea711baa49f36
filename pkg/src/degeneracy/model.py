from src._compat import StrEnum

from pydantic import BaseModel, ConfigDict, field_validator


class ConditionSet(StrEnum):
    ALL = "all"
    ESSENTIAL = "essential"


class IntMatrix(BaseModel):
    model_config = ConfigDict(frozen=True)

    rows: tuple[tuple[int, ...], ...]

    @field_validator("rows")
    @classmethod
    def must_be_rectangular(cls, rows: tuple[tuple[int, ...], ...]) -> tuple[tuple[int, ...], ...]:
        if rows and any(len(row) != len(rows[0]) for row in rows):
            raise ValueError("All rows must have the same length")
        return rows

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.rows[0]) if self.rows else 0

    def corner(self, i: int, j: int) -> "IntMatrix":
        """Upper-left i x j block."""
        return IntMatrix(rows=tuple(row[:j] for row in self.rows[:i]))

    def to_lists(self) -> list[list[int]]:
        return [list(row) for row in self.rows]


class RankCheckRequest(BaseModel):
    permutation: str
    matrix: list[list[int]]
    which: ConditionSet = ConditionSet.ALL


class RankCheckResponse(BaseModel):
    permutation: str
    which: ConditionSet
    satisfied: bool
    corner_ranks: list[list[int]]


class EssentialCheckReport(BaseModel):
    permutation: str
    trials: int
    seed: int
    essential_set: list[tuple[int, int]]
    sampled_nontrivial: int
    counterexamples: list[list[list[int]]]

    @property
    def passed(self) -> bool:
        return not self.counterexamples


class SameRankReport(BaseModel):
    e: int
    f: int
    n: int
    permutation: str
    padded_rows: int
    padded_cols: int
    inherited: list[tuple[int, int]]
    automatic: list[tuple[int, int]]
    trials: int
    passed: bool


class EssentialResponse(BaseModel):
    permutation: str
    essential_set: list[tuple[int, int]]
    rank_conditions: dict[str, int]
    expected_codimension: int
