from enum import Enum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from models.entities import SpectrumInterval, SystemConfig
from models.errors import InvalidSpectrum, ParameterOutOfRange

MAX_SEED = 2 ** 64


# --- ENUMS ---
class Direction(str, Enum):
    CONVEX = "convex"
    CONCAVE = "concave"


class Verdict(str, Enum):
    CONSISTENT = "Consistent"
    VIOLATED = "Violated"


class RegionClass(str, Enum):
    CONVEX_CONSISTENT = "ConvexConsistent"
    CONCAVE_CONSISTENT = "ConcaveConsistent"
    BOTH = "Both"
    NEITHER = "Neither"


class ClaimExpectation(str, Enum):
    CONSISTENT = "consistent"
    VIOLATED = "violated"
    EXPLORATORY = "exploratory"


def _default_interval(bounds) -> SpectrumInterval:
    return SpectrumInterval(lo=bounds[0], hi=bounds[1])


# --- CAMPAIGN CONFIGURATION ---

class WeightPolicy(BaseModel):
    """c ~ U[0, 1) per trial, with a forced weight every `forced_period`-th trial"""
    model_config = ConfigDict(frozen=True)

    forced_period: int = SystemConfig.FORCED_WEIGHT_PERIOD
    forced_weights: Tuple[float, ...] = tuple(SystemConfig.FORCED_WEIGHTS)

    def forced_weight(self, trial: int) -> Optional[float]:
        if self.forced_period <= 0 or trial % self.forced_period != self.forced_period - 1:
            return None
        return self.forced_weights[(trial // self.forced_period) % len(self.forced_weights)]


class ProbeConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    dim: int = SystemConfig.DEFAULT_DIM
    trials: int = SystemConfig.DEFAULT_TRIALS
    seed: int = SystemConfig.DEFAULT_SEED
    tol_rel: float = SystemConfig.DEFAULT_TOL_REL
    spectrum: SpectrumInterval = Field(default_factory=lambda: _default_interval(SystemConfig.DEFAULT_SPECTRUM))
    ratio: SpectrumInterval = Field(default_factory=lambda: _default_interval(SystemConfig.DEFAULT_RATIO))
    weight_policy: WeightPolicy = Field(default_factory=WeightPolicy)
    max_counterexamples: int = SystemConfig.MAX_COUNTEREXAMPLES

    @model_validator(mode="after")
    def _check_ranges(self) -> "ProbeConfig":
        if not SystemConfig.PROBE_MIN_DIM <= self.dim <= SystemConfig.PROBE_MAX_DIM:
            raise ParameterOutOfRange(
                f"Probe dimension must be in [{SystemConfig.PROBE_MIN_DIM}, {SystemConfig.PROBE_MAX_DIM}], got {self.dim}"
            )
        if self.trials < 1:
            raise ParameterOutOfRange(f"A campaign needs at least one trial, got {self.trials}")
        if not 0 <= self.seed < MAX_SEED:
            raise ParameterOutOfRange(f"Seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.tol_rel < 0:
            raise ParameterOutOfRange(f"Tolerance must be >= 0, got {self.tol_rel}")
        if self.spectrum.lo <= 0 or self.ratio.lo <= 0:
            raise InvalidSpectrum("Probe spectra must be strictly positive")
        return self

    def with_overrides(self, **changes) -> "ProbeConfig":
        """Validated copy; model_copy alone would skip the range checks"""
        return ProbeConfig(**{**self.model_dump(), **changes})


# --- CAMPAIGN OUTCOME ---

class Counterexample(BaseModel):
    model_config = ConfigDict(frozen=True)

    trial: int
    dim: int
    c: float
    matrices: Dict[str, List[List[float]]]
    margin: float


class ProbeReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    claim: str
    direction: str
    seed: int
    dim: int
    tol_rel: float
    trials: int
    violations: int
    grazing: int
    endpoint_violations: int
    worst_margin: float
    counterexamples: List[Counterexample] = Field(default_factory=list)
    verdict: Verdict

    @model_validator(mode="after")
    def _verdict_matches_violations(self) -> "ProbeReport":
        expected = Verdict.VIOLATED if self.violations > 0 else Verdict.CONSISTENT
        if self.verdict != expected:
            raise ParameterOutOfRange(f"Verdict {self.verdict} contradicts {self.violations} violations")
        return self

    @property
    def consistent(self) -> bool:
        return self.verdict == Verdict.CONSISTENT


class RegionCell(BaseModel):
    model_config = ConfigDict(frozen=True)

    alpha: float
    beta: float
    verdict: RegionClass
    worst_convex_margin: float
    worst_concave_margin: float


# --- CLAIM REGISTRY ENTRIES ---

class ClaimDefinition(BaseModel):
    """
    One registered claim. The id encodes label, target and direction,
    e.g. "thm2.2:Tab:1.5,0.5:convex"; the optional fields override the
    campaign defaults for this claim.
    """
    model_config = ConfigDict(frozen=True)

    id: str
    statement: str
    expected: ClaimExpectation = ClaimExpectation.CONSISTENT
    confine_to_jq: bool = False
    dim: Optional[int] = None
    trials: Optional[int] = None
    spectrum: Optional[Tuple[float, float]] = None
    ratio: Optional[Tuple[float, float]] = None
