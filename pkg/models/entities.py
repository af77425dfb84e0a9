import math
from typing import List, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from models.errors import InvalidSpectrum, MatrixFormatError


# --- SYSTEM CONFIGURATION ---
class SystemConfig:
    """Central configuration for the numerical policy"""

    # Order / equality checks
    DEFAULT_TOL_REL: float = 1e-8
    DOMAIN_SLACK: float = 1e-12

    # Eigensolver
    JACOBI_TOL: float = 1e-12
    JACOBI_MAX_SWEEPS: int = 100
    MAX_DIM: int = 64

    # Samplers
    MAX_CONDITION: float = 1e4
    RATIO_PADDING: float = 0.10

    # Probe engine
    PROBE_MIN_DIM: int = 2
    PROBE_MAX_DIM: int = 8
    FORCED_WEIGHT_PERIOD: int = 10
    FORCED_WEIGHTS: Sequence[float] = (0.0, 0.5, 1.0)
    MAX_COUNTEREXAMPLES: int = 10
    WITNESS_DIM: int = 2
    SCAN_TRIAL_DIVISOR: int = 10

    # Scalar function numerics
    DERIVATIVE_STEP: float = 1e-4
    SIGN_GRID_POINTS: int = 256
    BISECTION_TOL: float = 1e-8

    # Superoperator identity
    SUPEROPERATOR_MAX_DIM: int = 64
    IDENTITY_TOL_REL: float = 1e-9

    # CLI defaults
    DEFAULT_DIM: int = 3
    DEFAULT_TRIALS: int = 1000
    DEFAULT_SEED: int = 42
    DEFAULT_SPECTRUM: Sequence[float] = (0.1, 10.0)
    DEFAULT_RATIO: Sequence[float] = (0.1, 10.0)
    SELFTEST_TRIALS: int = 100
    CLI_BETA_BOUND: float = 2.0
    OUTPUT_DIGITS: int = 17


# --- INTERVALS ---

class FunctionDomain(BaseModel):
    """Real interval on which a scalar function is defined; ends may be open or infinite"""
    model_config = ConfigDict(frozen=True)

    lo: float = -math.inf
    hi: float = math.inf
    lo_closed: bool = False
    hi_closed: bool = False

    @model_validator(mode="after")
    def _check_order(self) -> "FunctionDomain":
        if self.lo > self.hi:
            raise InvalidSpectrum(f"Empty domain: lo={self.lo} > hi={self.hi}")
        return self

    @classmethod
    def reals(cls) -> "FunctionDomain":
        return cls()

    @classmethod
    def positive(cls) -> "FunctionDomain":
        return cls(lo=0.0, lo_closed=False)

    @classmethod
    def nonnegative(cls) -> "FunctionDomain":
        return cls(lo=0.0, lo_closed=True)

    def _lo_slack(self) -> float:
        return SystemConfig.DOMAIN_SLACK * max(1.0, abs(self.lo))

    def _hi_slack(self) -> float:
        return SystemConfig.DOMAIN_SLACK * max(1.0, abs(self.hi))

    def contains(self, values) -> np.ndarray:
        t = np.asarray(values, dtype=float)
        if self.lo_closed:
            above = t >= self.lo - self._lo_slack()
        else:
            above = t > self.lo
        if self.hi_closed:
            below = t <= self.hi + self._hi_slack()
        else:
            below = t < self.hi
        return above & below

    def first_outside(self, values) -> Optional[float]:
        t = np.atleast_1d(np.asarray(values, dtype=float))
        outside = t[~self.contains(t)]
        return float(outside[0]) if outside.size else None

    def clip(self, values) -> np.ndarray:
        """Pulls values accepted through the closed-end slack back onto the interval"""
        t = np.asarray(values, dtype=float)
        lo = self.lo if self.lo_closed else -math.inf
        hi = self.hi if self.hi_closed else math.inf
        return np.clip(t, lo, hi)

    def covers(self, interval: "SpectrumInterval") -> bool:
        return bool(np.all(self.contains([interval.lo, interval.hi])))

    def intersect(self, other: "FunctionDomain") -> "FunctionDomain":
        if other.lo > self.lo or (other.lo == self.lo and not other.lo_closed):
            lo, lo_closed = other.lo, other.lo_closed
        else:
            lo, lo_closed = self.lo, self.lo_closed
        if other.hi < self.hi or (other.hi == self.hi and not other.hi_closed):
            hi, hi_closed = other.hi, other.hi_closed
        else:
            hi, hi_closed = self.hi, self.hi_closed
        return FunctionDomain(lo=lo, hi=hi, lo_closed=lo_closed, hi_closed=hi_closed)

    def reciprocal(self) -> "FunctionDomain":
        """Image of the positive part under t -> 1/t"""
        positive = self.intersect(FunctionDomain.positive())
        new_lo = 0.0 if math.isinf(positive.hi) else 1.0 / positive.hi
        new_hi = math.inf if positive.lo == 0.0 else 1.0 / positive.lo
        return FunctionDomain(
            lo=new_lo,
            hi=new_hi,
            lo_closed=positive.hi_closed and not math.isinf(positive.hi),
            hi_closed=positive.lo_closed and positive.lo > 0.0,
        )

    def shifted(self, offset: float) -> "FunctionDomain":
        return FunctionDomain(
            lo=self.lo + offset,
            hi=self.hi + offset,
            lo_closed=self.lo_closed,
            hi_closed=self.hi_closed,
        )

    def __str__(self) -> str:
        left = "[" if self.lo_closed else "("
        right = "]" if self.hi_closed else ")"
        return f"{left}{self.lo:g}, {self.hi:g}{right}"


class SpectrumInterval(BaseModel):
    """Closed eigenvalue interval used for sampling and J_q confinement"""
    model_config = ConfigDict(frozen=True)

    lo: float
    hi: float

    @model_validator(mode="after")
    def _check_bounds(self) -> "SpectrumInterval":
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise InvalidSpectrum("Spectrum bounds must be numbers")
        if self.lo < 0:
            raise InvalidSpectrum(f"Spectrum lower bound must be >= 0, got {self.lo}")
        if self.hi < self.lo:
            raise InvalidSpectrum(f"Spectrum upper bound {self.hi} is below lower bound {self.lo}")
        return self

    @property
    def condition(self) -> float:
        return math.inf if self.lo == 0 else self.hi / self.lo

    def to_domain(self) -> FunctionDomain:
        return FunctionDomain(lo=self.lo, hi=self.hi, lo_closed=True, hi_closed=not math.isinf(self.hi))

    def is_within(self, other: "SpectrumInterval") -> bool:
        return other.lo <= self.lo and self.hi <= other.hi

    def __str__(self) -> str:
        return f"[{self.lo:g}, {self.hi:g}]"


# --- MATRICES ---

class HermitianMatrix(BaseModel):
    """
    Dense real symmetric matrix. Entries are symmetrized on construction and
    stored read-only, so instances are safe to share between threads.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    entries: np.ndarray

    @field_validator("entries", mode="before")
    @classmethod
    def _symmetrize(cls, value) -> np.ndarray:
        grid = np.array(value, dtype=float)
        if grid.ndim != 2 or grid.shape[0] != grid.shape[1] or grid.shape[0] < 1:
            raise MatrixFormatError(f"Expected a non-empty square grid, got shape {grid.shape}")
        if not np.all(np.isfinite(grid)):
            raise MatrixFormatError("Matrix entries must be finite")
        grid = (grid + grid.T) / 2
        grid.flags.writeable = False
        return grid

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[float]]) -> "HermitianMatrix":
        return cls(entries=rows)

    @classmethod
    def identity(cls, dim: int) -> "HermitianMatrix":
        return cls(entries=np.eye(dim))

    @classmethod
    def zeros(cls, dim: int) -> "HermitianMatrix":
        return cls(entries=np.zeros((dim, dim)))

    @classmethod
    def diagonal(cls, values: Sequence[float]) -> "HermitianMatrix":
        return cls(entries=np.diag(np.asarray(values, dtype=float)))

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def rows(self) -> List[List[float]]:
        return [[float(x) for x in row] for row in self.entries]

    def trace(self) -> float:
        return float(np.trace(self.entries))

    def combine(self, c: float, other: "HermitianMatrix") -> "HermitianMatrix":
        """Convex combination c*self + (1-c)*other"""
        return HermitianMatrix(entries=c * self.entries + (1.0 - c) * other.entries)

    def __add__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        return HermitianMatrix(entries=self.entries + other.entries)

    def __sub__(self, other: "HermitianMatrix") -> "HermitianMatrix":
        return HermitianMatrix(entries=self.entries - other.entries)

    def __neg__(self) -> "HermitianMatrix":
        return HermitianMatrix(entries=-self.entries)

    def __mul__(self, scalar: float) -> "HermitianMatrix":
        return HermitianMatrix(entries=float(scalar) * self.entries)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if not isinstance(other, HermitianMatrix):
            return NotImplemented
        return np.array_equal(self.entries, other.entries)

    def __hash__(self) -> int:
        return hash((self.entries.shape, self.entries.tobytes()))

    def __repr__(self) -> str:
        return f"HermitianMatrix(dim={self.dim}, rows={self.rows()})"


class SpectralDecomposition(BaseModel):
    """Eigenvalues ascending; eigenvector columns sign-fixed so the largest-magnitude entry is positive"""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigenvalues.shape[0]

    @property
    def min_eigenvalue(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def max_eigenvalue(self) -> float:
        return float(self.eigenvalues[-1])

    def reconstruct(self, values: Optional[np.ndarray] = None) -> np.ndarray:
        """Q diag(values) Q^T, defaulting to the eigenvalues themselves"""
        spectrum = self.eigenvalues if values is None else values
        return (self.eigenvectors * spectrum) @ self.eigenvectors.T

    def __eq__(self, other) -> bool:
        if not isinstance(other, SpectralDecomposition):
            return NotImplemented
        return (np.array_equal(self.eigenvalues, other.eigenvalues)
                and np.array_equal(self.eigenvectors, other.eigenvectors))

    def __hash__(self) -> int:
        return hash((self.eigenvalues.tobytes(), self.eigenvectors.tobytes()))
