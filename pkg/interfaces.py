# interfaces.py
from typing import Protocol, List, Optional

from models.functions import FunctionBase
from models.probes import ClaimDefinition, ProbeConfig, ProbeReport


# --- Interface for two-variable maps (perspectives and entropies) ---
class JointMap(Protocol):
    @property
    def sign(self) -> float: ...

    def scalar_fn(self) -> FunctionBase: ...
    def weight_fn(self) -> Optional[FunctionBase]: ...
    def label(self) -> str: ...


# --- Interface for the claim registry used by the probe/selftest commands ---
class ClaimRunner(Protocol):
    def claims(self) -> List[ClaimDefinition]: ...

    def get(self, claim_id: str) -> ClaimDefinition: ...

    def config_for(self, claim: ClaimDefinition, **overrides) -> ProbeConfig: ...

    def run(self, claim_id: str, config: Optional[ProbeConfig] = None) -> ProbeReport: ...

    def meets_expectation(self, claim: ClaimDefinition, report: ProbeReport) -> bool: ...
