"""Pydantic request/response models for the service endpoints."""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, Field, field_validator


class TorsionRequest(BaseModel):
    s: int = Field(description="curve parameter S (nonzero integer)")
    p: int = Field(ge=5, description="field characteristic (prime >= 5)")
    f: int = Field(default=1, ge=1, le=4, description="extension degree")

    @field_validator("s")
    @classmethod
    def _nonzero(cls, v):
        if v == 0:
            raise ValueError("s must be nonzero")
        return v


class TorsionResponse(BaseModel):
    p: int
    f: int
    q: int
    s: int
    e: int
    points: list  # ["O", [x, y], ...]; coordinates ints (f=1) or coeff lists


class AutOrderRequest(BaseModel):
    i: Literal[1, 2, 3]
    s: int
    p: int = Field(ge=5)
    f: int = Field(default=1, ge=1, le=4)
    oracle: bool = False
    group: bool = Field(default=True, description="include the Galois factor f")


class OracleInfo(BaseModel):
    autVeq: int
    agrees: bool


class AutOrderResponse(BaseModel):
    p: int
    f: int
    i: int
    s: int
    factors: dict[str, str]
    exact: str
    oracle: Optional[OracleInfo] = None


class IsoRequest(BaseModel):
    i: Literal[1, 2, 3]
    j: Literal[1, 2, 3]
    s: int
    sp: int
    sign_i: Literal["+", "-"] = "+"
    sign_j: Literal["+", "-"] = "+"
    p: int = Field(ge=5)
    oracle: bool = False


class IsoOracleInfo(BaseModel):
    found: bool
    count: int
    agrees_with_classifier: bool


class IsoResponse(BaseModel):
    isomorphic: bool
    rule: Optional[str] = None
    witness: Optional[list] = None  # 9x9 integer matrix diag(A, A, A_T)
    observed_isomorphic: Optional[bool] = None
    observed_rule: Optional[str] = None
    oracle: Optional[IsoOracleInfo] = None


class HessianSolveRequest(BaseModel):
    s: int
    p: Optional[int] = Field(default=None, ge=5)
    f: int = Field(default=1, ge=1, le=4)

    @field_validator("s")
    @classmethod
    def _nonzero(cls, v):
        if v == 0:
            raise ValueError("s must be nonzero")
        return v


class SolutionPair(BaseModel):
    alpha: str
    beta: str


class HessianSolveResponse(BaseModel):
    ring: str
    solutions: list[SolutionPair]
    complete: bool
    message: str = ""


class ScanRequest(BaseModel):
    s: int
    pmax: int = Field(ge=5, le=100_000)
    format: Literal["csv", "json"] = "csv"
    porc_mods: Optional[list[int]] = None
    pofs: bool = False


class ScanResponse(BaseModel):
    s: int
    pmax: int
    format: str
    records: int
    skipped: list
    content: str
    porc: Optional[dict] = None
    pofs: Optional[dict] = None


class VerifyRequest(BaseModel):
    suite: str = "all"
    extended: bool = False


class CheckModel(BaseModel):
    name: str
    passed: bool
    detail: str
    seconds: float


class SuiteModel(BaseModel):
    suite: str
    passed: bool
    checks: list[CheckModel]


class VerifyResponse(BaseModel):
    passed: bool
    suites: list[SuiteModel]
