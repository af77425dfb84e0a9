"""
Claim registry: stable string ids mapped to a probe target, a direction and
a default campaign configuration.

An id reads "label:target:direction". The target is a function spec for the
scalar directions (opconvex, opconcave, hpj) and a joint-map spec for the
joint ones (convex, concave); it may itself contain ':'.
"""
from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional

from models.entities import SpectrumInterval, SystemConfig
from models.entropies import GeneralizedRelative, RelativeAlphaBeta
from models.errors import ParameterOutOfRange, SpecParseError, UnknownClaim
from models.functions import ConvexityClaim, Expectation
from models.probes import ClaimDefinition, ClaimExpectation, Direction, ProbeConfig, ProbeReport
from services.entropy import parse_joint_map
from services.probe import ProbeEngine
from services.scalarfn import jq_upper, parse_function_spec
from views.common import debug_log, get_logger

logger = get_logger("Registry")

SCALAR_DIRECTIONS = {"opconvex": Direction.CONVEX, "opconcave": Direction.CONCAVE}
JOINT_DIRECTIONS = {"convex": Direction.CONVEX, "concave": Direction.CONCAVE}
HPJ_DIRECTION = "hpj"
ADHOC_LABEL = "adhoc"


@dataclass(frozen=True)
class ClaimId:
    label: str
    target: str
    direction: str


def parse_claim_id(claim_id: str) -> ClaimId:
    parts = claim_id.strip().split(":")
    if len(parts) < 3 or not parts[0] or not parts[-1]:
        raise SpecParseError(f"Claim id '{claim_id}' must read 'label:target:direction'")
    direction = parts[-1]
    if direction not in SCALAR_DIRECTIONS and direction not in JOINT_DIRECTIONS and direction != HPJ_DIRECTION:
        raise SpecParseError(f"Unknown direction '{direction}' in claim id '{claim_id}'")
    return ClaimId(label=parts[0], target=":".join(parts[1:-1]), direction=direction)


def default_confined_interval(q: float) -> SpectrumInterval:
    """A conditioned interval strictly inside J_q, clear of the sampler's padding"""
    hi = jq_upper(q) / (1.0 + SystemConfig.RATIO_PADDING)
    return SpectrumInterval(lo=hi / 16.0, hi=hi)


class ClaimRegistry:
    def __init__(self, definitions: List[ClaimDefinition], engine: Optional[ProbeEngine] = None):
        self._claims: Dict[str, ClaimDefinition] = {c.id: c for c in definitions}
        self.engine = engine or ProbeEngine()
        for claim in definitions:
            parse_claim_id(claim.id)

    @classmethod
    def from_file(cls, path: Path, engine: Optional[ProbeEngine] = None) -> "ClaimRegistry":
        from matrix_io import YamlClaimLoader
        return cls(YamlClaimLoader().load(path), engine)

    def claims(self) -> List[ClaimDefinition]:
        return list(self._claims.values())

    def get(self, claim_id: str) -> ClaimDefinition:
        if claim_id in self._claims:
            return self._claims[claim_id]
        if parse_claim_id(claim_id).label == ADHOC_LABEL:
            return ClaimDefinition(id=claim_id, statement="ad hoc claim", expected=ClaimExpectation.CONSISTENT)
        raise UnknownClaim(f"Claim '{claim_id}' is not registered")

    # --- CONFIGURATION ---

    def config_for(self, claim: ClaimDefinition, **overrides) -> ProbeConfig:
        """SystemConfig defaults < claim defaults < explicit overrides (None entries ignored)"""
        fields = {}
        if claim.dim is not None:
            fields["dim"] = claim.dim
        if claim.trials is not None:
            fields["trials"] = claim.trials
        if claim.spectrum is not None:
            fields["spectrum"] = SpectrumInterval(lo=claim.spectrum[0], hi=claim.spectrum[1])
        if claim.ratio is not None:
            fields["ratio"] = SpectrumInterval(lo=claim.ratio[0], hi=claim.ratio[1])
        if claim.confine_to_jq:
            q = self._confinement_parameter(claim)
            fields.setdefault("spectrum", default_confined_interval(q))
            fields.setdefault("ratio", default_confined_interval(q))
        fields.update({k: v for k, v in overrides.items() if v is not None})
        return ProbeConfig(**fields)

    def _confinement_parameter(self, claim: ClaimDefinition) -> float:
        target = parse_joint_map(parse_claim_id(claim.id).target)
        if isinstance(target, GeneralizedRelative):
            return target.q
        if isinstance(target, RelativeAlphaBeta):
            return target.alpha
        raise ParameterOutOfRange(f"J_q confinement applies to Sq and Sab claims, not '{claim.id}'")

    # --- EXECUTION ---

    @debug_log
    def run(self, claim_id: str, config: Optional[ProbeConfig] = None) -> ProbeReport:
        claim = self.get(claim_id)
        cfg = config or self.config_for(claim)
        parsed = parse_claim_id(claim.id)

        if parsed.direction in SCALAR_DIRECTIONS:
            stated = self.convexity_claim(claim, cfg)
            direction = Direction.CONVEX if stated.expectation == Expectation.OPERATOR_CONVEX else Direction.CONCAVE
            return self.engine.probe_operator_convexity(stated.fn, direction, cfg, claim=claim.id)
        if parsed.direction == HPJ_DIRECTION:
            return self.engine.probe_hpj(parse_function_spec(parsed.target), cfg, claim=claim.id)

        joint_map = parse_joint_map(parsed.target)
        direction = JOINT_DIRECTIONS[parsed.direction]
        if claim.confine_to_jq:
            if direction != Direction.CONVEX:
                raise ParameterOutOfRange(f"J_q confinement is a convexity statement; '{claim.id}' asks for concavity")
            if isinstance(joint_map, GeneralizedRelative):
                return self.engine.probe_sq_with_domain(joint_map.q, cfg, claim=claim.id)
            if isinstance(joint_map, RelativeAlphaBeta):
                return self.engine.probe_sq_with_domain(joint_map.alpha, cfg, beta=joint_map.beta, claim=claim.id)
            raise ParameterOutOfRange(f"J_q confinement applies to Sq and Sab claims, not '{claim.id}'")
        return self.engine.probe_joint(joint_map, direction, cfg, claim=claim.id)

    def convexity_claim(self, claim: ClaimDefinition, cfg: Optional[ProbeConfig] = None) -> ConvexityClaim:
        """Typed form of an opconvex/opconcave entry, stated on the sampled spectrum"""
        parsed = parse_claim_id(claim.id)
        if parsed.direction not in SCALAR_DIRECTIONS:
            raise ParameterOutOfRange(f"'{claim.id}' is not an operator convexity claim")
        convex = SCALAR_DIRECTIONS[parsed.direction] == Direction.CONVEX
        return ConvexityClaim(
            fn=parse_function_spec(parsed.target),
            parameter_region=claim.statement,
            expectation=Expectation.OPERATOR_CONVEX if convex else Expectation.OPERATOR_CONCAVE,
            domain=(cfg or self.config_for(claim)).spectrum,
        )

    @staticmethod
    def meets_expectation(claim: ClaimDefinition, report: ProbeReport) -> bool:
        if claim.expected == ClaimExpectation.EXPLORATORY:
            return True
        if claim.expected == ClaimExpectation.VIOLATED:
            return not report.consistent
        return report.consistent
