from src._compat import StrEnum

from pydantic import BaseModel, ConfigDict

from ..fgl.model import FormalGroupLaw
from ..polyring.model import Poly
from ..polyring.service import x, y


class FlagMode(StrEnum):
    CH = "ch"
    CK = "ck"
    FGL = "fgl"


class FlagContext(BaseModel):
    """
    The ring Omega[x_1..x_n, y_1..y_n] / J of the flag bundle, J generated by
    e_i(x) - e_i(y). CH is exact, CK is exact modulo b^(cap+1), FGL truncates
    at total degree `cap` in the roots.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n: int
    mode: FlagMode
    law: FormalGroupLaw
    cap: int | None = None
    graded: frozenset[str] | None = None

    def truncate(self, p: Poly) -> Poly:
        if self.cap is None:
            return p
        return p.truncate(self.cap, self.graded)

    def ideal_generators(self) -> list[Poly]:
        """e_i(x) - e_i(y) for i = 1..n."""
        ex = [Poly.constant(1)] + [Poly.zero()] * self.n
        ey = [Poly.constant(1)] + [Poly.zero()] * self.n
        for k in range(1, self.n + 1):
            for i in range(k, 0, -1):
                ex[i] = ex[i] + ex[i - 1] * x(k)
                ey[i] = ey[i] + ey[i - 1] * y(k)
        return [ex[i] - ey[i] for i in range(1, self.n + 1)]

    def describe(self) -> str:
        if self.mode == FlagMode.CK:
            return f"ck (mod b^{self.cap + 1})"
        if self.mode == FlagMode.FGL:
            return f"fgl '{self.law.name}' (degree <= {self.cap})"
        return "ch"


class FlagClass(BaseModel):
    """A class in the flag ring, given by a representative. `valid` is the
    root degree through which a truncated representative is exact."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    ctx: FlagContext
    rep: Poly
    valid: int | None = None

    @property
    def truncated(self) -> bool:
        return self.ctx.mode == FlagMode.FGL


class FlagClassResponse(BaseModel):
    n: int
    mode: FlagMode
    cap: int | None
    word: list[int]
    representative: str
    status: str
    valid_degree: int | None = None
    evaluation_vector: list[str] | None = None
    pullback: str | None = None


class FlagEqRequest(BaseModel):
    n: int
    mode: FlagMode = FlagMode.CH
    cap: int | None = None
    law: str | None = None
    left: str
    right: str


class FlagEqResponse(BaseModel):
    n: int
    mode: FlagMode
    equal: bool
    status: str
