from collections import Counter
from src._compat import StrEnum
from typing import Callable

from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from ..exceptions import WhitneyDivisionError
from ..polyring.model import Poly


class BundleFlavor(StrEnum):
    SUB = "sub"
    QUOTIENT = "quotient"


class BaseClassMode(StrEnum):
    EXACT = "exact"
    TRUNCATED = "truncated"


class RootedBundle(BaseModel):
    """
    A flagged bundle known through the first Chern classes of its linear
    factors; c_t = prod(1 + root * t). Rank 0 is the trivial bundle.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    rank: int
    roots: tuple[Poly, ...]
    flavor: BundleFlavor = BundleFlavor.QUOTIENT

    @model_validator(mode="after")
    def rank_matches_roots(self) -> "RootedBundle":
        if self.rank < 0 or self.rank != len(self.roots):
            raise ValueError(f"Rank {self.rank} does not match {len(self.roots)} roots")
        return self


def _canonical(factors) -> tuple[Poly, ...]:
    return tuple(sorted(factors, key=lambda p: (p.degree(), str(p))))


class FactorProduct(BaseModel):
    """A top Chern class kept as the multiset of its factors."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    factors: tuple[Poly, ...] = ()

    @field_validator("factors")
    @classmethod
    def sort_factors(cls, factors: tuple[Poly, ...]) -> tuple[Poly, ...]:
        return _canonical(factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __mul__(self, other: "FactorProduct") -> "FactorProduct":
        return FactorProduct(factors=self.factors + other.factors)

    def divide(self, other: "FactorProduct") -> "FactorProduct":
        """Multiset difference; defined only when `other` is contained in self."""
        remaining = Counter(self.factors)
        for factor in other.factors:
            if remaining[factor] == 0:
                raise WhitneyDivisionError(f"Factor {factor} is missing from the dividend")
            remaining[factor] -= 1
        return FactorProduct(factors=tuple(remaining.elements()))

    def expand(self, truncate: Callable[[Poly], Poly] | None = None) -> Poly:
        clip = truncate or (lambda p: p)
        result = Poly.constant(1)
        for factor in self.factors:
            result = clip(result * factor)
        return result

    def __str__(self) -> str:
        return "{" + ", ".join(str(p) for p in self.factors) + "}"


class BaseClassResponse(BaseModel):
    n: int
    law: str
    mode: BaseClassMode
    cap: int | None
    factors: list[str]
    expanded: str | None = None
