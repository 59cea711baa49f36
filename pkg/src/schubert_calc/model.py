from src._compat import StrEnum

from pydantic import BaseModel, ConfigDict

from ..permgroup.model import Permutation
from ..polyring.model import ZZ, ZZ_BETA, CoeffRing, Poly


class PolynomialFamilyKind(StrEnum):
    SCHUBERT = "schubert"
    GROTHENDIECK = "grothendieck"
    BETA = "beta"

    @property
    def ring(self) -> CoeffRing:
        return ZZ_BETA if self == PolynomialFamilyKind.BETA else ZZ


class DoublePolynomial(BaseModel):
    """A double Schubert, Grothendieck or beta-polynomial of `perm`."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    kind: PolynomialFamilyKind
    perm: Permutation
    value: Poly

    def __str__(self) -> str:
        return str(self.value)


class PolynomialResponse(BaseModel):
    kind: PolynomialFamilyKind
    permutation: str
    text: str
    terms: dict


class TableRow(BaseModel):
    permutation: str
    length: int
    text: str
    terms: dict


class SpecializeRequest(BaseModel):
    polynomial: str
    value: str = "0"
    negate_y: bool = False


class SpecializeResponse(BaseModel):
    value: str
    text: str
