from pydantic import BaseModel, ConfigDict, PrivateAttr

from ..polyring.model import CoeffRing, Poly, TruncSeries

SERIES_VARIABLES = ("u", "v")


class FormalGroupLaw(BaseModel):
    """F(u, v) truncated at total degree `series.cap` in u, v, with a lazily cached inverse series."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    name: str
    series: TruncSeries
    validated: bool = False

    _chi: TruncSeries | None = PrivateAttr(default=None)
    _coefficients: dict[tuple[int, int], Poly] | None = PrivateAttr(default=None)
    _cofactor_inverse: TruncSeries | None = PrivateAttr(default=None)

    @property
    def cap(self) -> int:
        return self.series.cap

    @property
    def ring(self) -> CoeffRing:
        return self.series.ring

    def coefficients(self) -> dict[tuple[int, int], Poly]:
        """a_ij as polynomials in the coefficient ring."""
        if self._coefficients is None:
            table: dict[tuple[int, int], Poly] = {}
            for (i, j) in {
                (dict(mono).get("u", 0), dict(mono).get("v", 0))
                for mono in self.series.poly.terms
            }:
                table[(i, j)] = self.series.poly.coefficient({"u": i, "v": j})
            self._coefficients = table
        return self._coefficients


class AxiomCheck(BaseModel):
    axiom: str
    passed: bool
    offending: str | None = None


class AxiomReport(BaseModel):
    law: str
    cap: int
    checks: list[AxiomCheck]

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


class SeriesResponse(BaseModel):
    law: str
    cap: int
    series: str


class LazardResponse(BaseModel):
    cap: int
    grading: str = "deg a_ij = 1 - i - j"
    relations: list[str]
