"""
Hermitian linear-algebra core.

Spectral decomposition by cyclic Jacobi rotations, functional calculus on
top of it, the Loewner-order comparison used by every probe, and the seeded
samplers for strictly positive matrices.
"""
import math
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from models.entities import HermitianMatrix, SpectralDecomposition, SpectrumInterval, SystemConfig
from models.errors import DimensionMismatch, InvalidSpectrum, NotStrictlyPositive, ParameterOutOfRange
from models.functions import FunctionBase
from views.common import get_logger

logger = get_logger("MatFun")


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based 64-bit generator; the seed is the Philox key"""
    return np.random.Generator(np.random.Philox(key=seed))


# --- SPECTRAL DECOMPOSITION ---

Grid = List[List[float]]


def _off_diagonal_norm(grid: Grid) -> float:
    return math.sqrt(sum(x * x for i, row in enumerate(grid) for j, x in enumerate(row) if i != j))


def _rotate(grid: Grid, vectors: Grid, p: int, q: int) -> None:
    """One Jacobi rotation annihilating grid[p][q]; updates both grids in place"""
    apq = grid[p][q]
    theta = (grid[q][q] - grid[p][p]) / (2.0 * apq)
    t = math.copysign(1.0, theta) / (abs(theta) + math.hypot(theta, 1.0))
    c = 1.0 / math.sqrt(t * t + 1.0)
    s = t * c

    for row in grid:
        xp, xq = row[p], row[q]
        row[p] = c * xp - s * xq
        row[q] = s * xp + c * xq

    row_p, row_q = grid[p], grid[q]
    for k in range(len(row_p)):
        xp, xq = row_p[k], row_q[k]
        row_p[k] = c * xp - s * xq
        row_q[k] = s * xp + c * xq

    for row in vectors:
        xp, xq = row[p], row[q]
        row[p] = c * xp - s * xq
        row[q] = s * xp + c * xq


def decompose(matrix: HermitianMatrix) -> SpectralDecomposition:
    """Cyclic Jacobi on nested float lists; rotations touch two rows and two columns each"""
    grid: Grid = matrix.entries.tolist()
    n = len(grid)
    vectors: Grid = np.eye(n).tolist()
    threshold = SystemConfig.JACOBI_TOL * float(np.linalg.norm(matrix.entries))
    # Entries below threshold/n cannot keep the off-diagonal norm above threshold
    negligible = threshold / n

    converged = False
    for _ in range(SystemConfig.JACOBI_MAX_SWEEPS):
        if _off_diagonal_norm(grid) <= threshold:
            converged = True
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                if abs(grid[p][q]) > negligible:
                    _rotate(grid, vectors, p, q)
    if not converged and _off_diagonal_norm(grid) > threshold:
        logger.warning(f"Jacobi stopped after {SystemConfig.JACOBI_MAX_SWEEPS} sweeps (dim {n})")

    eigenvalues = np.array([grid[i][i] for i in range(n)])
    basis = np.array(vectors)
    order = np.argsort(eigenvalues, kind="stable")
    eigenvalues = eigenvalues[order]
    basis = basis[:, order]

    # Sign convention: largest-magnitude entry of each column is positive
    pivots = np.argmax(np.abs(basis), axis=0)
    signs = np.where(basis[pivots, np.arange(n)] < 0, -1.0, 1.0)
    basis = basis * signs

    eigenvalues.flags.writeable = False
    basis.flags.writeable = False
    return SpectralDecomposition(eigenvalues=eigenvalues, eigenvectors=basis)


def eigenvalues(matrix: HermitianMatrix) -> np.ndarray:
    return decompose(matrix).eigenvalues


def spectral_norm(matrix: HermitianMatrix) -> float:
    return float(np.linalg.norm(matrix.entries, 2))


# --- FUNCTIONAL CALCULUS ---

def apply_spectral(f: FunctionBase, matrix: HermitianMatrix) -> HermitianMatrix:
    """f(A) = Q f(Lambda) Q^T; raises DomainViolation for the first eigenvalue outside f's domain"""
    decomposition = decompose(matrix)
    return HermitianMatrix(entries=decomposition.reconstruct(f.evaluate(decomposition.eigenvalues)))


def require_strictly_positive(matrix: HermitianMatrix, name: str) -> SpectralDecomposition:
    decomposition = decompose(matrix)
    if decomposition.min_eigenvalue <= 0:
        raise NotStrictlyPositive(name, decomposition.min_eigenvalue)
    return decomposition


def sqrt_pair(matrix: HermitianMatrix, name: str = "A") -> Tuple[HermitianMatrix, HermitianMatrix]:
    """(A^1/2, A^-1/2) from a single decomposition of a strictly positive A"""
    decomposition = require_strictly_positive(matrix, name)
    roots = np.sqrt(decomposition.eigenvalues)
    return (
        HermitianMatrix(entries=decomposition.reconstruct(roots)),
        HermitianMatrix(entries=decomposition.reconstruct(1.0 / roots)),
    )


def congruence(outer: np.ndarray, inner: HermitianMatrix) -> HermitianMatrix:
    """outer^T inner outer, symmetrized by construction"""
    outer = np.asarray(outer, dtype=float)
    return HermitianMatrix(entries=outer.T @ inner.entries @ outer)


# --- LOEWNER ORDER ---

def loewner_margin(a: HermitianMatrix, b: HermitianMatrix) -> Tuple[float, float]:
    """(lambda_min(B - A), max(1, |A|_2, |B|_2))"""
    if a.dim != b.dim:
        raise DimensionMismatch(f"Cannot compare dims {a.dim} and {b.dim}")
    return decompose(b - a).min_eigenvalue, max(1.0, spectral_norm(a), spectral_norm(b))


def loewner_leq(a: HermitianMatrix, b: HermitianMatrix, tol_rel: float = SystemConfig.DEFAULT_TOL_REL) -> Tuple[bool, float]:
    """A <= B in the Loewner order; margin = lambda_min(B - A)"""
    if a.dim != b.dim:
        raise DimensionMismatch(f"Cannot compare dims {a.dim} and {b.dim}")
    if tol_rel < 0:
        raise ParameterOutOfRange(f"tol_rel must be >= 0, got {tol_rel}")
    margin, scale = loewner_margin(a, b)
    return margin >= -tol_rel * scale, margin


# --- SAMPLERS ---

def _check_sampling_interval(spectrum: SpectrumInterval) -> None:
    if spectrum.lo <= 0:
        raise InvalidSpectrum(f"Sampling needs lo > 0, got {spectrum.lo}")
    if not math.isfinite(spectrum.hi):
        raise InvalidSpectrum("Sampling needs a finite upper bound")
    if spectrum.condition > SystemConfig.MAX_CONDITION:
        raise InvalidSpectrum(
            f"Condition hi/lo = {spectrum.condition:g} exceeds the guard {SystemConfig.MAX_CONDITION:g}"
        )


def haar_orthogonal(dim: int, rng: np.random.Generator) -> np.ndarray:
    """QR of a standard Gaussian grid, with the sign of diag(R) folded into Q"""
    gaussian = rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(gaussian)
    signs = np.sign(np.diag(r))
    signs[signs == 0] = 1.0
    return q * signs


@dataclass(frozen=True)
class SampledSpd:
    """A sampled Q diag(values) Q^T that keeps its factors, so functions of it need no decomposition"""
    matrix: HermitianMatrix
    basis: np.ndarray
    values: np.ndarray

    def root_of(self, h: Optional[FunctionBase] = None, name: str = "A") -> np.ndarray:
        """h(A)^1/2 (A^1/2 when h is None) built from the sampled eigenbasis"""
        weights = self.values if h is None else h.evaluate(self.values)
        smallest = float(np.min(weights))
        if smallest <= 0:
            raise NotStrictlyPositive(name if h is None else f"h({name})", smallest)
        return (self.basis * np.sqrt(weights)) @ self.basis.T

    def apply(self, f: FunctionBase) -> HermitianMatrix:
        """f(A) = Q f(values) Q^T from the sampled factors"""
        return HermitianMatrix(entries=(self.basis * f.evaluate(self.values)) @ self.basis.T)


def sample_spd(dim: int, spectrum: SpectrumInterval, rng: np.random.Generator) -> SampledSpd:
    if not 1 <= dim <= SystemConfig.MAX_DIM:
        raise ParameterOutOfRange(f"dim must be in [1, {SystemConfig.MAX_DIM}], got {dim}")
    _check_sampling_interval(spectrum)

    q = haar_orthogonal(dim, rng)
    if spectrum.lo == spectrum.hi:
        return SampledSpd(HermitianMatrix(entries=spectrum.lo * np.eye(dim)), np.eye(dim), np.full(dim, spectrum.lo))
    values = np.exp(rng.uniform(math.log(spectrum.lo), math.log(spectrum.hi), size=dim))
    values = np.clip(values, spectrum.lo, spectrum.hi)
    return SampledSpd(HermitianMatrix(entries=(q * values) @ q.T), q, values)


def random_spd(dim: int, spectrum: SpectrumInterval, rng: np.random.Generator) -> HermitianMatrix:
    return sample_spd(dim, spectrum, rng).matrix


def random_spd_dominated(a: HermitianMatrix, ratio: SpectrumInterval, rng: np.random.Generator,
                         root: Optional[np.ndarray] = None) -> HermitianMatrix:
    """
    B = A^1/2 C A^1/2 with spec(C) in ratio, so spec(A^-1/2 B A^-1/2) lies in ratio.
    A known A^1/2 may be passed as root; otherwise it is computed from A.
    """
    if root is None:
        root, _ = sqrt_pair(a)
        root = root.entries
    c = random_spd(a.dim, ratio, rng)
    return congruence(root, c)
