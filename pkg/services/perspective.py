"""
Noncommutative perspectives.

    Pi_f(A, B)       = A^1/2 f(A^-1/2 B A^-1/2) A^1/2
    Pi_{f Delta h}(A, B) = Pi_f(h(A), B)

A^-1/2 comes from the same decomposition as A^1/2; the triple products are
symmetrized when wrapped back into a HermitianMatrix.
"""
from typing import Tuple

import numpy as np

from interfaces import JointMap
from models.entities import HermitianMatrix, SystemConfig
from models.errors import ContractionViolation, DimensionMismatch, NotStrictlyPositive
from models.functions import FunctionBase
from services.matfun import apply_spectral, congruence, loewner_leq, require_strictly_positive, sqrt_pair


def _check_dims(a: HermitianMatrix, b: HermitianMatrix) -> None:
    if a.dim != b.dim:
        raise DimensionMismatch(f"A is {a.dim}x{a.dim} but B is {b.dim}x{b.dim}")


def _transform(f: FunctionBase, root: np.ndarray, inv_root: np.ndarray, b: HermitianMatrix) -> HermitianMatrix:
    """root f(inv_root B inv_root) root"""
    return congruence(root, apply_spectral(f, congruence(inv_root, b)))


def perspective(f: FunctionBase, a: HermitianMatrix, b: HermitianMatrix) -> HermitianMatrix:
    _check_dims(a, b)
    root, inv_root = sqrt_pair(a, "A")
    return _transform(f, root.entries, inv_root.entries, b)


def generalized_perspective(f: FunctionBase, h: FunctionBase, a: HermitianMatrix, b: HermitianMatrix) -> HermitianMatrix:
    """h(A)^1/2 and h(A)^-1/2 come from the eigenbasis of A: Q h(Lambda)^(+-1/2) Q^T"""
    _check_dims(a, b)
    decomposition = require_strictly_positive(a, "A")
    weights = h.evaluate(decomposition.eigenvalues)
    smallest = float(np.min(weights))
    if smallest <= 0:
        raise NotStrictlyPositive("h(A)", smallest)
    roots = np.sqrt(weights)
    return _transform(f, decomposition.reconstruct(roots), decomposition.reconstruct(1.0 / roots), b)


def evaluate_map(joint_map: JointMap, a: HermitianMatrix, b: HermitianMatrix) -> HermitianMatrix:
    f = joint_map.scalar_fn()
    h = joint_map.weight_fn()
    value = perspective(f, a, b) if h is None else generalized_perspective(f, h, a, b)
    return value if joint_map.sign == 1.0 else joint_map.sign * value


# --- HANSEN-PEDERSEN-JENSEN STEP ---

def hpj_sides(f: FunctionBase, x1: HermitianMatrix, x2: HermitianMatrix,
              t1: np.ndarray, t2: np.ndarray,
              tol_rel: float = SystemConfig.DEFAULT_TOL_REL) -> Tuple[HermitianMatrix, HermitianMatrix]:
    """(f(T1'X1T1 + T2'X2T2), T1'f(X1)T1 + T2'f(X2)T2) after checking T1'T1 + T2'T2 <= I"""
    _check_dims(x1, x2)
    t1 = np.asarray(t1, dtype=float)
    t2 = np.asarray(t2, dtype=float)
    if t1.shape != (x1.dim, x1.dim) or t2.shape != (x1.dim, x1.dim):
        raise DimensionMismatch(f"Contractions must be {x1.dim}x{x1.dim}")

    gram = HermitianMatrix(entries=t1.T @ t1 + t2.T @ t2)
    is_contraction, margin = loewner_leq(gram, HermitianMatrix.identity(x1.dim), tol_rel)
    if not is_contraction:
        raise ContractionViolation(f"T1'T1 + T2'T2 exceeds the identity (margin {margin!r})")

    lhs = apply_spectral(f, congruence(t1, x1) + congruence(t2, x2))
    rhs = congruence(t1, apply_spectral(f, x1)) + congruence(t2, apply_spectral(f, x2))
    return lhs, rhs


def hpj_check(f: FunctionBase, x1: HermitianMatrix, x2: HermitianMatrix,
              t1: np.ndarray, t2: np.ndarray,
              tol_rel: float = SystemConfig.DEFAULT_TOL_REL) -> Tuple[bool, float]:
    lhs, rhs = hpj_sides(f, x1, x2, t1, t2, tol_rel)
    return loewner_leq(lhs, rhs, tol_rel)


def random_contraction_pair(dim: int, rng: np.random.Generator) -> Tuple[np.ndarray, np.ndarray]:
    """T_i = sqrt(u) G_i S^-1/2 with S = G_1'G_1 + G_2'G_2, so T_1'T_1 + T_2'T_2 = u I, u in (0, 1]"""
    g1 = rng.standard_normal((dim, dim))
    g2 = rng.standard_normal((dim, dim))
    _, inv_root = sqrt_pair(HermitianMatrix(entries=g1.T @ g1 + g2.T @ g2), "S")
    u = 1.0 - rng.uniform()
    scale = np.sqrt(u)
    return scale * g1 @ inv_root.entries, scale * g2 @ inv_root.entries
