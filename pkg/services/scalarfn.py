"""
Operations on the scalar function catalog: evaluation, the transpose/shift
combinators, numerical derivatives, the J_q / I_q interval tools, Kraus
divided-difference margins and the text encoding used on the command line.
"""
import math
import re
from typing import Callable, List, Optional, Sequence

import numpy as np

from models.entities import HermitianMatrix, SpectrumInterval, SystemConfig
from models.errors import MultipleSignChanges, NoSignChange, ParameterOutOfRange, SpecParseError
from models.functions import (
    Affine,
    DeformedLog,
    FunctionBase,
    GeneralizedTranspose,
    Log,
    Power,
    PowerLog,
    Shift,
    Transpose,
    _fmt,
)
from services.matfun import decompose
from views.common import get_logger

logger = get_logger("ScalarFn")

DEFAULT_IQ_SEARCH = SpectrumInterval(lo=0.01, hi=100.0)


# --- EVALUATION AND COMBINATORS ---

def evaluate(f: FunctionBase, t):
    """Scalar in, float out; arrays evaluate elementwise"""
    values = f.evaluate(t)
    return float(values) if np.ndim(values) == 0 else values


def transpose(f: FunctionBase) -> Transpose:
    return Transpose(inner=f)


def generalized_transpose(f: FunctionBase, h: FunctionBase) -> GeneralizedTranspose:
    return GeneralizedTranspose(f=f, h=h)


def shift(f: FunctionBase, eps: float) -> Shift:
    return Shift(inner=f, eps=eps)


def restrict(f: FunctionBase, interval: SpectrumInterval) -> FunctionBase:
    """Narrows f's domain to the closed interval; keeps any earlier restriction"""
    window = interval.to_domain()
    if f.restriction is not None:
        window = f.restriction.intersect(window)
    return f.model_copy(update={"restriction": window})


# --- DERIVATIVES ---

def default_step(t: float) -> float:
    """Relative step; for positive t the stencil stays on the positive half-line"""
    step = SystemConfig.DERIVATIVE_STEP * max(1.0, abs(t))
    return min(step, t / 10.0) if t > 0 else step


def _central_second(fn: Callable[[np.ndarray], np.ndarray], t: float, step: float) -> float:
    left, mid, right = fn(np.array([t - step, t, t + step]))
    return float((right - 2.0 * mid + left) / (step * step))


def _central_first(fn: Callable[[np.ndarray], np.ndarray], t: float, step: float) -> float:
    left, right = fn(np.array([t - step, t + step]))
    return float((right - left) / (2.0 * step))


def second_derivative(f: FunctionBase, t: float, step: Optional[float] = None) -> float:
    step = default_step(t) if step is None else step
    if step <= 0:
        raise ParameterOutOfRange(f"step must be > 0, got {step}")
    return _central_second(f.evaluate, t, step)


def first_derivative(f: FunctionBase, t: float, step: Optional[float] = None) -> float:
    step = default_step(t) if step is None else step
    if step <= 0:
        raise ParameterOutOfRange(f"step must be > 0, got {step}")
    return _central_first(f.evaluate, t, step)


# --- J_q AND I_q ---

def _check_q(q: float) -> None:
    if not 0 < q < 1:
        raise ParameterOutOfRange(f"q must lie in (0, 1), got {q}")


def jq_upper(q: float) -> float:
    _check_q(q)
    return math.exp((2 * q - 1) / (q * (1 - q)))


def jq_interval(q: float) -> SpectrumInterval:
    return SpectrumInterval(lo=0.0, hi=jq_upper(q))


def iq_boundary(f: FunctionBase, q: float, search: SpectrumInterval = DEFAULT_IQ_SEARCH) -> float:
    """Sign change of k''(t) for k(t) = t^q f(t), located by grid sampling then bisection"""
    _check_q(q)
    if search.lo <= 0 or not math.isfinite(search.hi) or search.hi <= search.lo:
        raise ParameterOutOfRange(f"Search interval must be positive and bounded, got {search}")

    def kernel(t: np.ndarray) -> np.ndarray:
        return np.power(t, q) * f.evaluate(t)

    def k2(t: float) -> float:
        return _central_second(kernel, t, default_step(t))

    grid = np.geomspace(search.lo, search.hi, SystemConfig.SIGN_GRID_POINTS)
    signs = np.array([1 if k2(t) >= 0 else -1 for t in grid])
    changes = np.nonzero(signs[:-1] != signs[1:])[0]
    if changes.size == 0:
        raise NoSignChange(f"k'' keeps one sign on {search} for {f.label()}, q={_fmt(q)}")
    if changes.size > 1:
        raise MultipleSignChanges(f"k'' changes sign {changes.size} times on {search} for {f.label()}")

    lo, hi = float(grid[changes[0]]), float(grid[changes[0] + 1])
    lo_sign = signs[changes[0]]
    while hi - lo > SystemConfig.BISECTION_TOL:
        mid = 0.5 * (lo + hi)
        if (1 if k2(mid) >= 0 else -1) == lo_sign:
            lo = mid
        else:
            hi = mid
    root = 0.5 * (lo + hi)
    logger.debug(f"I_q boundary for {f.label()}, q={_fmt(q)}: {root!r}")
    return root


# --- KRAUS DIVIDED DIFFERENCES ---

def _first_divided(f: FunctionBase, x: float, y: float) -> float:
    if x == y:
        return first_derivative(f, x)
    fx, fy = f.evaluate(np.array([x, y]))
    return float((fy - fx) / (y - x))


def second_divided_difference(f: FunctionBase, x: float, y: float, z: float) -> float:
    """f[x, y, z], with derivatives standing in for coincident nodes"""
    a, b, c = sorted((x, y, z))
    if a == c:
        return 0.5 * second_derivative(f, a)
    return (_first_divided(f, b, c) - _first_divided(f, a, b)) / (c - a)


def kraus_margin(f: FunctionBase, x0: float, points: Sequence[float]) -> float:
    """
    Smallest eigenvalue of [f[x0, x_i, x_j]]_{ij}.

    f is operator convex on an interval iff this matrix is positive
    semidefinite for every x0 and every finite set of points there, so a
    clearly negative value is a deterministic counterexample.
    """
    nodes = [float(p) for p in points]
    if not nodes:
        raise ParameterOutOfRange("kraus_margin needs at least one point")
    grid = np.array([[second_divided_difference(f, x0, xi, xj) for xj in nodes] for xi in nodes])
    return decompose(HermitianMatrix(entries=grid)).min_eigenvalue


# --- TEXT ENCODING ---

_NUMBER = re.compile(r"[+-]?(?:inf|(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)")


class SpecCursor:
    """Recursive-descent reader over a spec string"""

    def __init__(self, text: str):
        self.text = text.strip()
        self.pos = 0

    def at_end(self) -> bool:
        return self.pos >= len(self.text)

    def accept(self, literal: str) -> bool:
        if self.text.startswith(literal, self.pos):
            self.pos += len(literal)
            return True
        return False

    def expect(self, literal: str) -> None:
        if not self.accept(literal):
            raise self.error(f"expected '{literal}'")

    def number(self) -> float:
        match = _NUMBER.match(self.text, self.pos)
        if not match:
            raise self.error("expected a number")
        self.pos = match.end()
        return float(match.group())

    def numbers(self, count: int) -> List[float]:
        values = [self.number()]
        for _ in range(count - 1):
            self.expect(",")
            values.append(self.number())
        return values

    def finish(self) -> None:
        if not self.at_end():
            raise self.error("unexpected trailing text")

    def error(self, reason: str) -> SpecParseError:
        return SpecParseError(f"Cannot parse '{self.text}' at position {self.pos}: {reason}")

    def function(self) -> FunctionBase:
        # Longer keywords first: "powlog:" before "pow:"
        if self.accept("log"):
            return Log()
        if self.accept("powlog:"):
            return PowerLog(q=self.number())
        if self.accept("pow:"):
            return Power(p=self.number())
        if self.accept("dlog:"):
            return DeformedLog(lam=self.number())
        if self.accept("affine:"):
            a, b = self.numbers(2)
            return Affine(a=a, b=b)
        if self.accept("const:"):
            return Affine(a=0.0, b=self.number())
        if self.accept("transpose("):
            inner = self.function()
            self.expect(")")
            return Transpose(inner=inner)
        if self.accept("gtranspose("):
            f = self.function()
            self.expect(",")
            h = self.function()
            self.expect(")")
            return GeneralizedTranspose(f=f, h=h)
        if self.accept("shift:"):
            eps = self.number()
            self.expect("(")
            inner = self.function()
            self.expect(")")
            return Shift(inner=inner, eps=eps)
        raise self.error("unknown function")


def parse_function_spec(text: str) -> FunctionBase:
    cursor = SpecCursor(text)
    fn = cursor.function()
    cursor.finish()
    return fn


def format_function_spec(f: FunctionBase) -> str:
    """Inverse of parse_function_spec; const:c comes back as affine:0,c"""
    return f.label()