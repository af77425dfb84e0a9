from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

EXIT_PASS = 0
EXIT_VIOLATION = 1
EXIT_ERROR = 2


@dataclass
class CampaignOverrides:
    """CLI flags; None leaves the registry/default value in place"""
    dim: Optional[int] = None
    trials: Optional[int] = None
    seed: Optional[int] = None
    tol: Optional[float] = None
    spec_lo: Optional[float] = None
    spec_hi: Optional[float] = None
    ratio_lo: Optional[float] = None
    ratio_hi: Optional[float] = None

    def validate(self) -> Optional[str]:
        if (self.spec_lo is None) != (self.spec_hi is None):
            return "--spec-lo and --spec-hi must be given together"
        if (self.ratio_lo is None) != (self.ratio_hi is None):
            return "--ratio-lo and --ratio-hi must be given together"
        if self.trials is not None and self.trials < 1:
            return "--trials must be at least 1"
        return None


@dataclass
class ComputeRequest:
    spec: str
    a_path: Path
    b_path: Path
    normalize: bool = False

    def validate(self) -> Optional[str]:
        if not self.spec.strip():
            return "Entropy spec cannot be empty"
        return None


@dataclass
class ProbeRequest:
    claim: str
    overrides: CampaignOverrides = field(default_factory=CampaignOverrides)

    def validate(self) -> Optional[str]:
        if not self.claim.strip():
            return "Claim id cannot be empty"
        return self.overrides.validate()


@dataclass
class ScanRequest:
    family: str
    alphas: List[float]
    betas: List[float]
    overrides: CampaignOverrides = field(default_factory=CampaignOverrides)

    def validate(self) -> Optional[str]:
        if self.family not in ("Tab", "Sab"):
            return f"Scan family must be 'Tab' or 'Sab', got '{self.family}'"
        if not self.alphas:
            return "Alpha grid cannot be empty"
        if not self.betas:
            return "Beta grid cannot be empty"
        if self.family == "Tab" and any(a == 0 for a in self.alphas):
            return "Tab scans require alpha != 0"
        return self.overrides.validate()


@dataclass
class CheckIdentityRequest:
    rho_path: Path
    sigma_path: Path
    normalize: bool = False


@dataclass
class SelftestRequest:
    trials: int = 100
    seed: int = 42

    def validate(self) -> Optional[str]:
        if self.trials < 1:
            return "Selftest needs at least one trial per claim"
        return None


@dataclass
class CommandResponse:
    success: bool
    message: str
    exit_code: int = EXIT_PASS
    payload: Optional[str] = None
    error_type: Optional[str] = None
