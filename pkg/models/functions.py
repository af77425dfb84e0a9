"""
Scalar function catalog.

Every catalog member is a frozen pydantic model tagged by `kind`; the
`ScalarFn` union dispatches on that tag, the same way project items are
modelled. Members evaluate vectorized over numpy arrays and check their
own domain, so composites (Transpose, GeneralizedTranspose, Shift) inherit
the checks of the functions they wrap.
"""
from enum import Enum
from typing import Annotated, Literal, Optional, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.entities import FunctionDomain, SpectrumInterval
from models.errors import DomainViolation, NonpositiveH, ParameterOutOfRange


def _is_integer(value: float) -> bool:
    return float(value).is_integer()


def _fmt(value: float) -> str:
    """Shortest round-trip text for a parameter, without a trailing .0"""
    text = repr(float(value))
    return text[:-2] if text.endswith(".0") else text


class FunctionBase(BaseModel):
    """Shared domain handling; subclasses supply the formula and natural domain"""
    model_config = ConfigDict(frozen=True)

    restriction: Optional[FunctionDomain] = None

    def natural_domain(self) -> FunctionDomain:
        return FunctionDomain.reals()

    @property
    def domain(self) -> FunctionDomain:
        natural = self.natural_domain()
        return natural if self.restriction is None else natural.intersect(self.restriction)

    def evaluate(self, values) -> np.ndarray:
        t = np.asarray(values, dtype=float)
        domain = self.domain
        outside = domain.first_outside(t)
        if outside is not None:
            raise DomainViolation(outside, domain)
        return self._formula(domain.clip(t))

    def _formula(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def label(self) -> str:
        raise NotImplementedError


class Log(FunctionBase):
    kind: Literal["log"] = "log"

    def natural_domain(self) -> FunctionDomain:
        return FunctionDomain.positive()

    def _formula(self, t: np.ndarray) -> np.ndarray:
        return np.log(t)

    def label(self) -> str:
        return "log"


class Power(FunctionBase):
    kind: Literal["pow"] = "pow"
    p: float

    def natural_domain(self) -> FunctionDomain:
        if _is_integer(self.p) and self.p >= 0:
            return FunctionDomain.reals()
        if self.p > 0:
            return FunctionDomain.nonnegative()
        return FunctionDomain.positive()

    def _formula(self, t: np.ndarray) -> np.ndarray:
        return np.power(t, self.p)

    def label(self) -> str:
        return f"pow:{_fmt(self.p)}"


class DeformedLog(FunctionBase):
    """ln_lam(t) = (t^lam - 1)/lam; the lam -> 0 limit is Log, never a runtime branch"""
    kind: Literal["dlog"] = "dlog"
    lam: float

    @model_validator(mode="after")
    def _reject_zero(self) -> "DeformedLog":
        if self.lam == 0:
            raise ParameterOutOfRange("DeformedLog requires lam != 0; use Log for the lam -> 0 limit")
        return self

    def natural_domain(self) -> FunctionDomain:
        return FunctionDomain.nonnegative() if self.lam > 0 else FunctionDomain.positive()

    def _formula(self, t: np.ndarray) -> np.ndarray:
        positive = t > 0
        safe = np.where(positive, t, 1.0)
        return np.where(positive, np.expm1(self.lam * np.log(safe)) / self.lam, -1.0 / self.lam)

    def label(self) -> str:
        return f"dlog:{_fmt(self.lam)}"


class PowerLog(FunctionBase):
    """t^q log t"""
    kind: Literal["powlog"] = "powlog"
    q: float

    def natural_domain(self) -> FunctionDomain:
        return FunctionDomain.positive()

    def _formula(self, t: np.ndarray) -> np.ndarray:
        return np.power(t, self.q) * np.log(t)

    def label(self) -> str:
        return f"powlog:{_fmt(self.q)}"


class Affine(FunctionBase):
    kind: Literal["affine"] = "affine"
    a: float
    b: float

    def _formula(self, t: np.ndarray) -> np.ndarray:
        return self.a * t + self.b

    def label(self) -> str:
        return f"affine:{_fmt(self.a)},{_fmt(self.b)}"


class Transpose(FunctionBase):
    """f*(t) = t f(1/t)"""
    kind: Literal["transpose"] = "transpose"
    inner: "ScalarFn"

    def natural_domain(self) -> FunctionDomain:
        return self.inner.domain.reciprocal()

    def _formula(self, t: np.ndarray) -> np.ndarray:
        return t * self.inner.evaluate(1.0 / t)

    def label(self) -> str:
        return f"transpose({self.inner.label()})"


class GeneralizedTranspose(FunctionBase):
    """f*_h(t) = h(t) f(1/h(t))"""
    kind: Literal["gtranspose"] = "gtranspose"
    f: "ScalarFn"
    h: "ScalarFn"

    def natural_domain(self) -> FunctionDomain:
        return self.h.domain

    def _formula(self, t: np.ndarray) -> np.ndarray:
        weights = self.h.evaluate(t)
        flat = np.atleast_1d(weights)
        nonpositive = flat[flat <= 0]
        if nonpositive.size:
            raise NonpositiveH(float(nonpositive[0]))
        return weights * self.f.evaluate(1.0 / weights)

    def label(self) -> str:
        return f"gtranspose({self.f.label()},{self.h.label()})"


class Shift(FunctionBase):
    """f_eps(t) = f(t + eps)"""
    kind: Literal["shift"] = "shift"
    inner: "ScalarFn"
    eps: float

    @model_validator(mode="after")
    def _require_positive_eps(self) -> "Shift":
        if not self.eps > 0:
            raise ParameterOutOfRange(f"Shift requires eps > 0, got {self.eps}")
        return self

    def natural_domain(self) -> FunctionDomain:
        return self.inner.domain.shifted(-self.eps)

    def _formula(self, t: np.ndarray) -> np.ndarray:
        return self.inner.evaluate(t + self.eps)

    def label(self) -> str:
        return f"shift:{_fmt(self.eps)}({self.inner.label()})"


# --- DEFINING THE POLYMORPHIC TYPE ---
ScalarFn = Annotated[
    Union[Log, Power, DeformedLog, PowerLog, Affine, Transpose, GeneralizedTranspose, Shift],
    Field(discriminator="kind"),
]


# --- CLAIMS ---

class Expectation(str, Enum):
    OPERATOR_CONVEX = "operator_convex"
    OPERATOR_CONCAVE = "operator_concave"


class ConvexityClaim(BaseModel):
    """A stated operator convexity/concavity of a catalog function on a domain"""
    model_config = ConfigDict(frozen=True)

    fn: ScalarFn
    parameter_region: str
    expectation: Expectation
    domain: SpectrumInterval

    @model_validator(mode="after")
    def _region_nonempty(self) -> "ConvexityClaim":
        if not self.parameter_region.strip():
            raise ParameterOutOfRange("A convexity claim needs a parameter region")
        return self


# --- REBUILD MODELS ---
Transpose.model_rebuild()
GeneralizedTranspose.model_rebuild()
Shift.model_rebuild()
ConvexityClaim.model_rebuild()
