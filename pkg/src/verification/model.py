from src._compat import StrEnum

from pydantic import BaseModel


class VerificationSuite(StrEnum):
    BRAID = "braid"
    STABILITY = "stability"
    SPECIAL = "special"
    BOTT_CH = "bott-ch"
    BOTT_CK = "bott-ck"
    ESSENTIAL = "essential"
    WORDS = "words"


class VerificationCase(BaseModel):
    label: str
    passed: bool
    expected: str = ""
    actual: str = ""


class VerificationFailure(BaseModel):
    case: str
    expected: str
    actual: str


class VerificationReport(BaseModel):
    suite: VerificationSuite
    n: int
    seed: int
    cases_checked: int
    failures: list[VerificationFailure]
    stopped_early: bool = False
    passed: bool
