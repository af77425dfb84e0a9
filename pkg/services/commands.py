from typing import Any, Callable, Dict, List

from interfaces import ClaimRunner
from models.dtos import (
    EXIT_ERROR,
    EXIT_PASS,
    EXIT_VIOLATION,
    CampaignOverrides,
    CheckIdentityRequest,
    CommandResponse,
    ComputeRequest,
    ProbeRequest,
    ScanRequest,
    SelftestRequest,
)
from models.entities import SpectrumInterval
from models.errors import OperatorEntropyError, ProbeAborted
from models.probes import ClaimExpectation, ProbeConfig
from services.entropy import (
    check_cli_beta,
    evaluate_entropy,
    identity_holds,
    normalize_density,
    parse_entropy_spec,
    superoperator_identity_sides,
)
from services.matfun import decompose
from services.probe import ProbeEngine
from services.projectors import ReportProjector, ScanProjector
from views.common import get_logger

logger = get_logger("Commands")


def overrides_to_fields(overrides: CampaignOverrides) -> Dict[str, Any]:
    """Maps CLI flags onto ProbeConfig fields; absent flags map to None"""
    fields: Dict[str, Any] = {
        "dim": overrides.dim,
        "trials": overrides.trials,
        "seed": overrides.seed,
        "tol_rel": overrides.tol,
        "spectrum": None,
        "ratio": None,
    }
    if overrides.spec_lo is not None:
        fields["spectrum"] = SpectrumInterval(lo=overrides.spec_lo, hi=overrides.spec_hi)
    if overrides.ratio_lo is not None:
        fields["ratio"] = SpectrumInterval(lo=overrides.ratio_lo, hi=overrides.ratio_hi)
    return fields


def _guard(action: Callable[[], CommandResponse]) -> CommandResponse:
    """Commands never raise: library and file errors become exit-2 responses"""
    try:
        return action()
    except OperatorEntropyError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return CommandResponse(success=False, message=str(e), exit_code=EXIT_ERROR, error_type=e.error_type)
    except OSError as e:
        logger.error(f"I/O error: {e}")
        return CommandResponse(success=False, message=str(e), exit_code=EXIT_ERROR, error_type="usage")


def _invalid(message: str) -> CommandResponse:
    return CommandResponse(success=False, message=message, exit_code=EXIT_ERROR, error_type="validation")


class ComputeCommand:
    def __init__(self, loader, projector=ReportProjector):
        self.loader = loader
        self.projector = projector

    def execute(self, request: ComputeRequest) -> CommandResponse:
        # 1. Validate
        validation_error = request.validate()
        if validation_error:
            return _invalid(validation_error)
        return _guard(lambda: self._compute(request))

    def _compute(self, request: ComputeRequest) -> CommandResponse:
        spec = parse_entropy_spec(request.spec)
        check_cli_beta(spec)
        a = self.loader.load(request.a_path)
        b = self.loader.load(request.b_path)
        if request.normalize:
            a, b = normalize_density(a), normalize_density(b)

        result = evaluate_entropy(spec, a, b)
        payload = self.projector.matrix_result_to_json(result, decompose(result).min_eigenvalue)
        return CommandResponse(success=True, message=f"Computed {spec.label()}", payload=payload)


class ProbeCommand:
    def __init__(self, registry: ClaimRunner, projector=ReportProjector):
        self.registry = registry
        self.projector = projector

    def execute(self, request: ProbeRequest) -> CommandResponse:
        validation_error = request.validate()
        if validation_error:
            return _invalid(validation_error)
        return _guard(lambda: self._probe(request))

    def _probe(self, request: ProbeRequest) -> CommandResponse:
        claim = self.registry.get(request.claim)
        cfg = self.registry.config_for(claim, **overrides_to_fields(request.overrides))
        report = self.registry.run(claim.id, cfg)
        payload = self.projector.report_to_json(report)
        if report.consistent:
            return CommandResponse(success=True, message=f"{claim.id}: Consistent", payload=payload)
        return CommandResponse(
            success=False,
            message=f"{claim.id}: Violated in {report.violations} of {report.trials} trials",
            exit_code=EXIT_VIOLATION,
            payload=payload,
            error_type="violation",
        )


class ScanCommand:
    def __init__(self, engine: ProbeEngine, projector=ScanProjector):
        self.engine = engine
        self.projector = projector

    def execute(self, request: ScanRequest) -> CommandResponse:
        validation_error = request.validate()
        if validation_error:
            return _invalid(validation_error)
        return _guard(lambda: self._scan(request))

    def _scan(self, request: ScanRequest) -> CommandResponse:
        fields = {k: v for k, v in overrides_to_fields(request.overrides).items() if v is not None}
        cfg = ProbeConfig(**fields)
        cells = self.engine.scan_regions(request.family, request.alphas, request.betas, cfg)
        return CommandResponse(
            success=True,
            message=f"Scanned {len(cells)} cells of {request.family}",
            payload=self.projector.to_csv(cells),
        )


class CheckIdentityCommand:
    def __init__(self, loader, projector=ReportProjector):
        self.loader = loader
        self.projector = projector

    def execute(self, request: CheckIdentityRequest) -> CommandResponse:
        return _guard(lambda: self._check(request))

    def _check(self, request: CheckIdentityRequest) -> CommandResponse:
        rho = self.loader.load(request.rho_path)
        sigma = self.loader.load(request.sigma_path)
        if request.normalize:
            rho, sigma = normalize_density(rho), normalize_density(sigma)

        lhs, rhs = superoperator_identity_sides(rho, sigma)
        residual = abs(lhs - rhs)
        payload = self.projector.identity_to_json(lhs, rhs, residual)
        if identity_holds(lhs, rhs):
            return CommandResponse(success=True, message=f"Identity holds (residual {residual!r})", payload=payload)
        return CommandResponse(
            success=False,
            message=f"Identity residual {residual!r} exceeds tolerance",
            exit_code=EXIT_VIOLATION,
            payload=payload,
            error_type="violation",
        )


class SelftestCommand:
    def __init__(self, registry: ClaimRunner, projector=ReportProjector):
        self.registry = registry
        self.projector = projector

    def execute(self, request: SelftestRequest) -> CommandResponse:
        validation_error = request.validate()
        if validation_error:
            return _invalid(validation_error)
        return _guard(lambda: self._selftest(request))

    def _selftest(self, request: SelftestRequest) -> CommandResponse:
        rows: List[Dict[str, Any]] = []
        failures = []
        for claim in self.registry.claims():
            cfg = self.registry.config_for(claim, trials=request.trials, seed=request.seed)
            try:
                report = self.registry.run(claim.id, cfg)
                ok = self.registry.meets_expectation(claim, report)
                row = {"verdict": report.verdict.value, "violations": report.violations,
                       "worst_margin": report.worst_margin}
            except ProbeAborted as e:
                logger.warning(f"{claim.id}: {e}")
                ok = claim.expected == ClaimExpectation.EXPLORATORY
                row = {"verdict": "Aborted", "violations": 0, "worst_margin": None}
            rows.append({"id": claim.id, "expected": claim.expected.value, **row, "ok": ok})
            if not ok:
                failures.append(claim.id)

        payload = self.projector.selftest_to_json(not failures, rows)
        if failures:
            return CommandResponse(
                success=False,
                message=f"{len(failures)} claims missed their expectation: {', '.join(failures)}",
                exit_code=EXIT_VIOLATION,
                payload=payload,
                error_type="violation",
            )
        return CommandResponse(success=True, message=f"All {len(rows)} claims met their expectation", payload=payload)
