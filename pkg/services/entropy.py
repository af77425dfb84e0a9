"""
Entropy family over strictly positive pairs, trace-form entropies and the
superoperator form of the quantum relative entropy.
"""
import math
from typing import Tuple

import numpy as np

from interfaces import JointMap
from models.entities import HermitianMatrix, SystemConfig
from models.entropies import (
    EntropySpec,
    GeneralizedPerspectiveMap,
    GeneralizedRelative,
    NegatedMap,
    PerspectiveMap,
    RelativeAlphaBeta,
    RelativeOperator,
    Tsallis,
    TsallisAlphaBeta,
)
from models.errors import DimensionMismatch, ParameterOutOfRange
from models.functions import Log, PowerLog
from services.matfun import apply_spectral, require_strictly_positive
from services.perspective import evaluate_map
from services.scalarfn import SpecCursor
from views.common import debug_log


def _require_pair(a: HermitianMatrix, b: HermitianMatrix, names=("A", "B")) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"{names[0]} is {a.dim}x{a.dim} but {names[1]} is {b.dim}x{b.dim}")
    require_strictly_positive(a, names[0])
    require_strictly_positive(b, names[1])


@debug_log
def evaluate_entropy(spec: JointMap, a: HermitianMatrix, b: HermitianMatrix) -> HermitianMatrix:
    _require_pair(a, b)
    return evaluate_map(spec, a, b)


def relative_operator_entropy(a: HermitianMatrix, b: HermitianMatrix) -> HermitianMatrix:
    return evaluate_entropy(RelativeOperator(), a, b)


def generalized_relative_entropy(q: float, a: HermitianMatrix, b: HermitianMatrix) -> HermitianMatrix:
    return evaluate_entropy(GeneralizedRelative(q=q), a, b)


def relative_alpha_beta_entropy(alpha: float, beta: float, a: HermitianMatrix, b: HermitianMatrix) -> HermitianMatrix:
    return evaluate_entropy(RelativeAlphaBeta(alpha=alpha, beta=beta), a, b)


def tsallis_entropy(lam: float, a: HermitianMatrix, b: HermitianMatrix) -> HermitianMatrix:
    return evaluate_entropy(Tsallis(lam=lam), a, b)


def tsallis_alpha_beta_entropy(alpha: float, beta: float, a: HermitianMatrix, b: HermitianMatrix) -> HermitianMatrix:
    return evaluate_entropy(TsallisAlphaBeta(alpha=alpha, beta=beta), a, b)


# --- TRACE FORMS ---

def normalize_density(rho: HermitianMatrix) -> HermitianMatrix:
    trace = rho.trace()
    if trace <= 0:
        raise ParameterOutOfRange(f"Cannot normalize a matrix with trace {trace!r}")
    return (1.0 / trace) * rho


def von_neumann_entropy(rho: HermitianMatrix) -> float:
    """-Tr rho log rho"""
    require_strictly_positive(rho, "rho")
    return -apply_spectral(PowerLog(q=1.0), rho).trace()


def quantum_relative_entropy(rho: HermitianMatrix, sigma: HermitianMatrix) -> float:
    """H(rho || sigma) = Tr rho log rho - Tr rho log sigma"""
    _require_pair(rho, sigma, ("rho", "sigma"))
    log_rho = apply_spectral(Log(), rho).entries
    log_sigma = apply_spectral(Log(), sigma).entries
    return float(np.sum(rho.entries * log_rho) - np.sum(rho.entries * log_sigma))


# --- SUPEROPERATOR FORM ---

def left_multiplication(rho: HermitianMatrix) -> HermitianMatrix:
    """L_rho = I (x) rho under column-stacking vectorization"""
    return HermitianMatrix(entries=np.kron(np.eye(rho.dim), rho.entries))


def right_multiplication(sigma: HermitianMatrix) -> HermitianMatrix:
    """R_sigma = sigma^T (x) I under column-stacking vectorization"""
    return HermitianMatrix(entries=np.kron(sigma.entries.T, np.eye(sigma.dim)))


def vectorize(matrix: np.ndarray) -> np.ndarray:
    return np.asarray(matrix, dtype=float).flatten(order="F")


def superoperator_identity_sides(rho: HermitianMatrix, sigma: HermitianMatrix) -> Tuple[float, float]:
    """(<-S(L_rho|R_sigma) vec I, vec I>, H(rho || sigma))"""
    _require_pair(rho, sigma, ("rho", "sigma"))
    if rho.dim ** 2 > SystemConfig.SUPEROPERATOR_MAX_DIM:
        raise ParameterOutOfRange(
            f"Superoperators of a {rho.dim}x{rho.dim} pair exceed dim {SystemConfig.SUPEROPERATOR_MAX_DIM}"
        )
    relative = evaluate_map(RelativeOperator(), left_multiplication(rho), right_multiplication(sigma))
    unit = vectorize(np.eye(rho.dim))
    lhs = -float(unit @ relative.entries @ unit)
    return lhs, quantum_relative_entropy(rho, sigma)


def superoperator_identity_residual(rho: HermitianMatrix, sigma: HermitianMatrix) -> float:
    lhs, rhs = superoperator_identity_sides(rho, sigma)
    return abs(lhs - rhs)


def identity_holds(lhs: float, rhs: float) -> bool:
    return abs(lhs - rhs) <= SystemConfig.IDENTITY_TOL_REL * max(1.0, abs(rhs))


# --- TEXT ENCODING ---

def _read_entropy(cursor: SpecCursor):
    # Longer family names first: "Sab:" and "Sq:" before "S"
    if cursor.accept("Sab:"):
        alpha, beta = cursor.numbers(2)
        return RelativeAlphaBeta(alpha=alpha, beta=beta)
    if cursor.accept("Sq:"):
        return GeneralizedRelative(q=cursor.number())
    if cursor.accept("S"):
        return RelativeOperator()
    if cursor.accept("Tab:"):
        alpha, beta = cursor.numbers(2)
        return TsallisAlphaBeta(alpha=alpha, beta=beta)
    if cursor.accept("T:"):
        return Tsallis(lam=cursor.number())
    raise cursor.error("unknown entropy family")


def _read_joint_map(cursor: SpecCursor):
    if cursor.accept("persp("):
        f = cursor.function()
        cursor.expect(")")
        return PerspectiveMap(f=f)
    if cursor.accept("gpersp("):
        f = cursor.function()
        cursor.expect(",")
        h = cursor.function()
        cursor.expect(")")
        return GeneralizedPerspectiveMap(f=f, h=h)
    if cursor.accept("neg("):
        inner = _read_joint_map(cursor)
        cursor.expect(")")
        return NegatedMap(inner=inner)
    return _read_entropy(cursor)


def parse_entropy_spec(text: str) -> EntropySpec:
    cursor = SpecCursor(text)
    spec = _read_entropy(cursor)
    cursor.finish()
    return spec


def parse_joint_map(text: str):
    cursor = SpecCursor(text)
    joint_map = _read_joint_map(cursor)
    cursor.finish()
    return joint_map


def check_cli_beta(spec: EntropySpec) -> None:
    """CLI-exposed beta stays in [-2, 2]; the library itself accepts any real beta"""
    beta = getattr(spec, "beta", None)
    if beta is None:
        return
    if not math.isfinite(beta) or abs(beta) > SystemConfig.CLI_BETA_BOUND:
        raise ParameterOutOfRange(f"beta must lie in [-{SystemConfig.CLI_BETA_BOUND:g}, {SystemConfig.CLI_BETA_BOUND:g}], got {beta}")
