"""
Two-variable maps over strictly positive matrix pairs.

Each map names its scalar function f and, for generalized perspectives, its
weight function h; services/perspective.py evaluates any of them as
Pi_f(A, B) or Pi_{f Delta h}(A, B).
"""
from typing import Annotated, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.errors import ParameterOutOfRange
from models.functions import DeformedLog, FunctionBase, Log, Power, PowerLog, ScalarFn, _fmt

TSALLIS_LAMBDA_RANGE = (-1.0, 2.0)


class JointMapBase(BaseModel):
    model_config = ConfigDict(frozen=True)

    @property
    def sign(self) -> float:
        return 1.0

    def scalar_fn(self) -> FunctionBase:
        raise NotImplementedError

    def weight_fn(self) -> Optional[FunctionBase]:
        """None means the plain perspective (h(A) = A)"""
        return None

    def label(self) -> str:
        raise NotImplementedError


# --- ENTROPY FAMILIES ---

class RelativeOperator(JointMapBase):
    """S(A|B) = A^1/2 log(A^-1/2 B A^-1/2) A^1/2"""
    family: Literal["S"] = "S"

    def scalar_fn(self) -> FunctionBase:
        return Log()

    def label(self) -> str:
        return "S"


class GeneralizedRelative(JointMapBase):
    """S_q(A|B), the perspective of t^q log t"""
    family: Literal["Sq"] = "Sq"
    q: float

    def scalar_fn(self) -> FunctionBase:
        return PowerLog(q=self.q)

    def label(self) -> str:
        return f"Sq:{_fmt(self.q)}"


class RelativeAlphaBeta(JointMapBase):
    """S_{alpha,beta}(A|B), the generalized perspective of t^alpha log t and t^beta"""
    family: Literal["Sab"] = "Sab"
    alpha: float
    beta: float

    def scalar_fn(self) -> FunctionBase:
        return PowerLog(q=self.alpha)

    def weight_fn(self) -> Optional[FunctionBase]:
        return Power(p=self.beta)

    def label(self) -> str:
        return f"Sab:{_fmt(self.alpha)},{_fmt(self.beta)}"


class Tsallis(JointMapBase):
    """T_lam(A|B), the perspective of ln_lam"""
    family: Literal["T"] = "T"
    lam: float

    @model_validator(mode="after")
    def _check_lambda(self) -> "Tsallis":
        lo, hi = TSALLIS_LAMBDA_RANGE
        if self.lam == 0 or not lo <= self.lam <= hi:
            raise ParameterOutOfRange(f"Tsallis entropy requires lam in [{lo}, 0) U (0, {hi}], got {self.lam}")
        return self

    def scalar_fn(self) -> FunctionBase:
        return DeformedLog(lam=self.lam)

    def label(self) -> str:
        return f"T:{_fmt(self.lam)}"


class TsallisAlphaBeta(JointMapBase):
    """T_{alpha,beta}(A|B), the generalized perspective of ln_alpha and t^beta"""
    family: Literal["Tab"] = "Tab"
    alpha: float
    beta: float

    @model_validator(mode="after")
    def _check_alpha(self) -> "TsallisAlphaBeta":
        if self.alpha == 0:
            raise ParameterOutOfRange("Tsallis (alpha, beta)-entropy requires alpha != 0")
        return self

    def scalar_fn(self) -> FunctionBase:
        return DeformedLog(lam=self.alpha)

    def weight_fn(self) -> Optional[FunctionBase]:
        return Power(p=self.beta)

    def label(self) -> str:
        return f"Tab:{_fmt(self.alpha)},{_fmt(self.beta)}"


EntropySpec = Annotated[
    Union[RelativeOperator, GeneralizedRelative, RelativeAlphaBeta, Tsallis, TsallisAlphaBeta],
    Field(discriminator="family"),
]


# --- PERSPECTIVE MAPS ---

class PerspectiveMap(JointMapBase):
    kind: Literal["persp"] = "persp"
    f: ScalarFn

    def scalar_fn(self) -> FunctionBase:
        return self.f

    def label(self) -> str:
        return f"persp({self.f.label()})"


class GeneralizedPerspectiveMap(JointMapBase):
    kind: Literal["gpersp"] = "gpersp"
    f: ScalarFn
    h: ScalarFn

    def scalar_fn(self) -> FunctionBase:
        return self.f

    def weight_fn(self) -> Optional[FunctionBase]:
        return self.h

    def label(self) -> str:
        return f"gpersp({self.f.label()},{self.h.label()})"


class NegatedMap(JointMapBase):
    """-g(A, B); probing it for concavity mirrors probing g for convexity"""
    kind: Literal["neg"] = "neg"
    inner: "JointMapModel"

    @property
    def sign(self) -> float:
        return -self.inner.sign

    def scalar_fn(self) -> FunctionBase:
        return self.inner.scalar_fn()

    def weight_fn(self) -> Optional[FunctionBase]:
        return self.inner.weight_fn()

    def label(self) -> str:
        return f"neg({self.inner.label()})"


JointMapModel = Union[EntropySpec, PerspectiveMap, GeneralizedPerspectiveMap, NegatedMap]

NegatedMap.model_rebuild()
