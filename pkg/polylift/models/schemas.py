"""
Pydantic models for interchange documents, bound parameters and reports
"""
import math
from typing import Annotated, Any, Dict, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, PlainSerializer, model_validator

from polylift.models.ode import Monomial, PolyODE, compile_system


def _inf_as_string(value: float) -> Any:
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return value


# Floats that may be +inf; serialized as the string "inf" in JSON
ExtendedFloat = Annotated[float, PlainSerializer(_inf_as_string, when_used="json")]


# System interchange

class MonomialSpec(BaseModel):
    """One term coeff * prod x_i^exponents[i]"""
    coeff: float
    exponents: List[int]


class SystemDocument(BaseModel):
    """Canonical JSON form of a polynomial system"""
    n: int = Field(..., ge=1, description="State dimension")
    rhs: List[List[MonomialSpec]] = Field(..., description="One monomial list per equation")

    @model_validator(mode="after")
    def check_shape(self) -> "SystemDocument":
        if len(self.rhs) != self.n:
            raise ValueError(f"rhs must hold {self.n} equations, got {len(self.rhs)}")
        return self

    def to_monomials(self) -> List[List[Monomial]]:
        return [[Monomial(term.coeff, tuple(term.exponents)) for term in terms] for terms in self.rhs]

    def to_ode(self) -> PolyODE:
        return compile_system(self.to_monomials(), self.n)

    @classmethod
    def from_ode(cls, ode: PolyODE) -> "SystemDocument":
        return cls(
            n=ode.n,
            rhs=[
                [MonomialSpec(coeff=m.coeff, exponents=list(m.exponents)) for m in terms]
                for terms in ode.monomials()
            ],
        )

    class Config:
        json_schema_extra = {
            "example": {
                "n": 2,
                "rhs": [
                    [{"coeff": 1.0, "exponents": [0, 1]}],
                    [
                        {"coeff": -1.0, "exponents": [1, 0]},
                        {"coeff": 0.6, "exponents": [0, 1]},
                        {"coeff": -0.6, "exponents": [2, 1]},
                    ],
                ],
            }
        }


# Bounds

class BoundParams(BaseModel):
    """Scalar inputs of the truncation-error envelopes for a quadratic system"""
    model_config = ConfigDict(frozen=True)

    norm_F1: float = Field(..., ge=0)
    norm_F2: float = Field(..., ge=0)
    mu_F1: float
    norm_x0: float = Field(..., ge=0)
    beta0: ExtendedFloat = Field(..., ge=0, description="||x0|| ||F2|| / ||F1||")
    alpha: Optional[float] = Field(default=None, gt=0, description="A-priori bound on sup ||x(tau)||")

    @model_validator(mode="after")
    def check_consistency(self) -> "BoundParams":
        if self.norm_F1 > 0:
            expected = self.norm_x0 * self.norm_F2 / self.norm_F1
            if not math.isclose(self.beta0, expected, rel_tol=1e-9, abs_tol=1e-300):
                raise ValueError(f"beta0={self.beta0!r} inconsistent with norms (expected {expected!r})")
        if self.alpha is not None and self.alpha < self.norm_x0 * (1 - 1e-12):
            raise ValueError(f"alpha={self.alpha!r} must be >= ||x0||={self.norm_x0!r}")
        return self

    @classmethod
    def from_norms(
        cls,
        norm_F1: float,
        norm_F2: float,
        mu_F1: float,
        norm_x0: float,
        alpha: Optional[float] = None,
    ) -> "BoundParams":
        """Derive beta0 from the norms (+inf when ||F1|| = 0 and ||x0|| ||F2|| > 0)"""
        numerator = norm_x0 * norm_F2
        if norm_F1 > 0:
            beta0 = numerator / norm_F1
        else:
            beta0 = math.inf if numerator > 0 else 0.0
        return cls(norm_F1=norm_F1, norm_F2=norm_F2, mu_F1=mu_F1, norm_x0=norm_x0, beta0=beta0, alpha=alpha)


class BoundEnvelope(BaseModel):
    """Sampled error envelope"""
    kind: Literal["E1", "E2"]
    N: int = Field(..., ge=1)
    T_star: ExtendedFloat
    samples: List[Tuple[float, ExtendedFloat]] = Field(default_factory=list)

    def values(self) -> List[float]:
        return [value for _, value in self.samples]


class BoundComparison(BaseModel):
    """E1 evaluated with the worst-case alpha next to E2"""
    t: float
    N: int
    E1_worst: ExtendedFloat
    E2: ExtendedFloat
    factor: ExtendedFloat


# Reports

class LiftMetadata(BaseModel):
    n: int
    k: int
    N: int
    dimension: int
    nnz: int
    block_offsets: List[int]


class ReductionReport(BaseModel):
    n: int
    k: int
    D: int
    block_dims: List[int]
    norm_F1_tilde: float
    norm_F2_tilde: float
    bound_F1_tilde: float
    bound_F2_tilde: float


class BoundReport(BaseModel):
    norm_F1_tilde: float
    norm_F2_tilde: float
    beta0: ExtendedFloat
    T_star: ExtendedFloat
    mu: float
    norm_x0: float
    alpha: Optional[float] = None
    bound1_horizon: Optional[ExtendedFloat] = None
    orders: List[int] = Field(default_factory=list)


class OrderSummary(BaseModel):
    """Soundness audit of one truncation order"""
    N: int
    samples_checked: int
    violations: int
    max_error: float
    max_ratio: ExtendedFloat = Field(0.0, description="max err / E2 over audited samples")
    first_violation_t: Optional[float] = None
    blow_up_t: Optional[float] = None


class CompareReport(BaseModel):
    T_star: ExtendedFloat
    audit_until: ExtendedFloat
    verdict: Literal["sound", "violated"]
    orders: List[OrderSummary] = Field(default_factory=list)
    errors: List[str] = Field(default_factory=list)


class CheckResult(BaseModel):
    name: str
    cases: int
    failures: int
    detail: str = ""


class VerificationReport(BaseModel):
    seed: int
    checks: List[CheckResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.failures == 0 for check in self.checks)


class RunConfig(BaseModel):
    """Validated CLI/service run parameters"""
    command: Literal["lift", "reduce", "bounds", "simulate", "compare", "verify"]
    input_path: Optional[str] = None
    orders: List[int] = Field(default_factory=lambda: [2])
    t_end: float = Field(default=1.0, gt=0)
    step: float = Field(default=1e-3, gt=0)
    x0: Optional[List[float]] = None
    alpha: Optional[float] = Field(default=None, gt=0)
    output_format: Literal["csv", "json", "mm"] = "csv"
    out_dir: str = "."
    params: Dict[str, float] = Field(default_factory=dict)
    samples: Optional[int] = Field(default=None, ge=2)
    seed: int = 0
    cases: int = Field(default=100, ge=1)

    @model_validator(mode="after")
    def check_orders(self) -> "RunConfig":
        if any(order < 1 for order in self.orders):
            raise ValueError(f"truncation orders must be >= 1, got {self.orders}")
        return self


# Service bodies

class SystemInput(BaseModel):
    """A system given either as a JSON document or as DSL text"""
    document: Optional[SystemDocument] = None
    dsl: Optional[str] = None
    params: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def exactly_one_source(self) -> "SystemInput":
        if (self.document is None) == (self.dsl is None):
            raise ValueError("provide exactly one of 'document' or 'dsl'")
        if self.document is not None and self.params:
            raise ValueError("'params' override DSL parameters and cannot be combined with 'document'")
        return self


class LiftRequest(SystemInput):
    x0: List[float]
    order: int = Field(..., ge=1)


class BoundsRequest(SystemInput):
    x0: List[float]
    alpha: Optional[float] = Field(default=None, gt=0)
    orders: List[int] = Field(default_factory=lambda: [2])


class CompareRequest(BoundsRequest):
    t_end: Optional[float] = Field(default=None, gt=0)
    step: float = Field(default=1e-3, gt=0)


class ParsedSystemResponse(BaseModel):
    document: SystemDocument
    k: int
    degree_norms: List[float]
    params: Dict[str, float] = Field(default_factory=dict)
    dsl: str = ""


class OrderSeries(BaseModel):
    """Measured error and envelopes of one order on the shared grid"""
    N: int
    t: List[float]
    err: List[float]
    bound_E2: List[ExtendedFloat]
    bound_E1: List[ExtendedFloat]


class CompareResponse(BaseModel):
    report: CompareReport
    series: List[OrderSeries] = Field(default_factory=list)
