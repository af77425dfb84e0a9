import json
from pathlib import Path
from unittest.mock import MagicMock

import pytest

from mocks import make_report
from models.dtos import EXIT_PASS, SelftestRequest
from models.entities import SpectrumInterval, SystemConfig
from models.entropies import RelativeOperator, Tsallis
from models.errors import ParameterOutOfRange, SpecParseError, UnknownClaim
from models.functions import DeformedLog, Expectation, Power
from models.probes import ClaimDefinition, ClaimExpectation, Direction, ProbeConfig
from services.commands import SelftestCommand
from services.registry import ClaimRegistry, default_confined_interval, parse_claim_id
from services.scalarfn import jq_upper

REGISTRY_FILE = Path(__file__).parent.parent / "data" / "claims" / "registry.yaml"


def _claim(claim_id: str, **kwargs) -> ClaimDefinition:
    return ClaimDefinition(id=claim_id, statement="test claim", **kwargs)


@pytest.fixture
def engine():
    return MagicMock()


# --- CLAIM IDS ---

class TestClaimIds:
    def test_scalar_id(self):
        parsed = parse_claim_id("lem2.1:dlog:1.5:opconvex")
        assert (parsed.label, parsed.target, parsed.direction) == ("lem2.1", "dlog:1.5", "opconvex")

    def test_joint_target_with_colons(self):
        parsed = parse_claim_id("thm2.2:Tab:1.5,0.5:convex")
        assert parsed.target == "Tab:1.5,0.5"
        assert parsed.direction == "convex"

    def test_nested_target(self):
        assert parse_claim_id("thm1.3:gpersp(dlog:1.5,pow:0.5):convex").target == "gpersp(dlog:1.5,pow:0.5)"

    @pytest.mark.parametrize("claim_id", ["", "log", "x:log", ":log:opconvex", "x:log:sideways", "x:log:"])
    def test_malformed_ids(self, claim_id):
        with pytest.raises(SpecParseError):
            parse_claim_id(claim_id)

    def test_registry_rejects_malformed_definitions(self, engine):
        with pytest.raises(SpecParseError):
            ClaimRegistry([_claim("broken")], engine)


# --- LOOKUP ---

class TestLookup:
    def test_get_registered_claim(self, engine):
        claim = _claim("thm2.3:T:0.5:concave")
        assert ClaimRegistry([claim], engine).get("thm2.3:T:0.5:concave") is claim

    def test_unknown_claim(self, engine):
        with pytest.raises(UnknownClaim):
            ClaimRegistry([], engine).get("thm9.9:T:0.5:concave")

    def test_adhoc_claims_need_no_registration(self, engine):
        claim = ClaimRegistry([], engine).get("adhoc:pow:3:opconvex")
        assert claim.expected == ClaimExpectation.CONSISTENT
        assert claim.id == "adhoc:pow:3:opconvex"

    def test_claims_keep_file_order(self, engine):
        ids = ["b:log:opconcave", "a:log:opconcave"]
        assert [c.id for c in ClaimRegistry([_claim(i) for i in ids], engine).claims()] == ids


# --- CONFIGURATION PRECEDENCE ---

class TestConfigFor:
    def test_defaults(self, engine):
        cfg = ClaimRegistry([], engine).config_for(_claim("x:log:opconcave"))
        assert cfg == ProbeConfig()

    def test_claim_values_override_defaults(self, engine):
        claim = _claim("x:log:opconcave", dim=2, trials=50, spectrum=(1.0, 4.0))
        cfg = ClaimRegistry([claim], engine).config_for(claim)
        assert (cfg.dim, cfg.trials, cfg.seed) == (2, 50, 42)
        assert cfg.spectrum == SpectrumInterval(lo=1, hi=4)

    def test_overrides_win_and_none_is_ignored(self, engine):
        claim = _claim("x:log:opconcave", dim=2, trials=50)
        cfg = ClaimRegistry([claim], engine).config_for(claim, dim=4, trials=None, seed=7)
        assert (cfg.dim, cfg.trials, cfg.seed) == (4, 50, 7)

    def test_confined_claims_default_inside_jq(self, engine):
        claim = _claim("x:Sq:0.75:convex", confine_to_jq=True)
        cfg = ClaimRegistry([claim], engine).config_for(claim)
        assert cfg.spectrum == default_confined_interval(0.75)
        assert cfg.ratio.hi < jq_upper(0.75)

    def test_explicit_spectrum_beats_confined_default(self, engine):
        claim = _claim("x:Sq:0.5:convex", confine_to_jq=True, spectrum=(0.05, 0.95))
        cfg = ClaimRegistry([claim], engine).config_for(claim)
        assert cfg.spectrum == SpectrumInterval(lo=0.05, hi=0.95)
        assert cfg.ratio == default_confined_interval(0.5)

    def test_confinement_needs_sq_or_sab(self, engine):
        claim = _claim("x:S:convex", confine_to_jq=True)
        with pytest.raises(ParameterOutOfRange):
            ClaimRegistry([claim], engine).config_for(claim)


def test_default_confined_interval_is_well_conditioned():
    interval = default_confined_interval(0.5)
    assert interval.hi == pytest.approx(1 / 1.1)
    assert interval.condition == pytest.approx(16)


# --- DISPATCH ---

class TestRun:
    def test_scalar_direction(self, engine):
        registry = ClaimRegistry([_claim("lem2.1:dlog:1.5:opconvex")], engine)
        registry.run("lem2.1:dlog:1.5:opconvex")

        f, direction, cfg = engine.probe_operator_convexity.call_args.args
        assert f == DeformedLog(lam=1.5)
        assert direction == Direction.CONVEX
        assert cfg == ProbeConfig()
        assert engine.probe_operator_convexity.call_args.kwargs["claim"] == "lem2.1:dlog:1.5:opconvex"

    def test_scalar_entry_as_convexity_claim(self, engine):
        registry = ClaimRegistry([_claim("lem2.1:dlog:0.5:opconcave", dim=2, spectrum=(0.5, 2.0))], engine)
        claim = registry.get("lem2.1:dlog:0.5:opconcave")

        stated = registry.convexity_claim(claim)

        assert stated.fn == DeformedLog(lam=0.5)
        assert stated.expectation == Expectation.OPERATOR_CONCAVE
        assert (stated.domain.lo, stated.domain.hi) == (0.5, 2.0)
        assert stated.parameter_region == "test claim"

    def test_joint_entry_is_not_a_convexity_claim(self, engine):
        registry = ClaimRegistry([_claim("thm2.6:S:concave")], engine)
        with pytest.raises(ParameterOutOfRange):
            registry.convexity_claim(registry.get("thm2.6:S:concave"))

    def test_hpj_direction(self, engine):
        ClaimRegistry([_claim("hpj:pow:2:hpj")], engine).run("hpj:pow:2:hpj")
        assert engine.probe_hpj.call_args.args[0] == Power(p=2)

    def test_joint_direction(self, engine):
        ClaimRegistry([_claim("thm2.3:T:0.5:concave")], engine).run("thm2.3:T:0.5:concave")
        joint_map, direction, _ = engine.probe_joint.call_args.args
        assert joint_map == Tsallis(lam=0.5)
        assert direction == Direction.CONCAVE

    def test_explicit_config_is_passed_through(self, engine):
        cfg = ProbeConfig(dim=2, trials=5)
        ClaimRegistry([], engine).run("adhoc:S:concave", cfg)
        assert engine.probe_joint.call_args.args == (RelativeOperator(), Direction.CONCAVE, cfg)

    def test_confined_sq(self, engine):
        claim = _claim("cor3.8:Sq:0.5:convex", confine_to_jq=True)
        ClaimRegistry([claim], engine).run(claim.id)
        assert engine.probe_sq_with_domain.call_args.args[0] == 0.5
        assert engine.probe_sq_with_domain.call_args.kwargs["claim"] == claim.id

    def test_confined_sab_passes_beta(self, engine):
        claim = _claim("thm3.9:Sab:0.5,1:convex", confine_to_jq=True)
        ClaimRegistry([claim], engine).run(claim.id)
        assert engine.probe_sq_with_domain.call_args.args[0] == 0.5
        assert engine.probe_sq_with_domain.call_args.kwargs["beta"] == 1

    def test_confined_concavity_is_rejected(self, engine):
        claim = _claim("x:Sq:0.5:concave", confine_to_jq=True)
        with pytest.raises(ParameterOutOfRange):
            ClaimRegistry([claim], engine).run(claim.id)
        engine.probe_sq_with_domain.assert_not_called()

    def test_bad_target(self, engine):
        with pytest.raises(SpecParseError):
            ClaimRegistry([], engine).run("adhoc:nonsense:opconvex")


class TestExpectations:
    def test_consistent_claim(self):
        claim = _claim("x:log:opconcave")
        assert ClaimRegistry.meets_expectation(claim, make_report())
        assert not ClaimRegistry.meets_expectation(claim, make_report(violations=2, worst_margin=-0.1))

    def test_violated_claim(self):
        claim = _claim("control:pow:3:opconvex", expected=ClaimExpectation.VIOLATED)
        assert ClaimRegistry.meets_expectation(claim, make_report(violations=2, worst_margin=-0.1))
        assert not ClaimRegistry.meets_expectation(claim, make_report())

    def test_exploratory_claim_always_passes(self):
        claim = _claim("x:Tab:0.5,0.5:concave", expected=ClaimExpectation.EXPLORATORY)
        assert ClaimRegistry.meets_expectation(claim, make_report())
        assert ClaimRegistry.meets_expectation(claim, make_report(violations=1, worst_margin=-0.1))


# --- SHIPPED REGISTRY ---

class TestShippedRegistry:
    @pytest.fixture(scope="class")
    def registry(self):
        return ClaimRegistry.from_file(REGISTRY_FILE)

    def test_loads_and_has_control(self, registry):
        control = registry.get("control:pow:3:opconvex")
        assert control.expected == ClaimExpectation.VIOLATED
        assert len(registry.claims()) > 40

    def test_confined_claims_stay_inside_jq(self, registry):
        for claim in registry.claims():
            if claim.confine_to_jq:
                cfg = registry.config_for(claim)
                q = float(claim.id.split(":")[2].split(",")[0])
                assert cfg.spectrum.hi <= jq_upper(q)
                assert cfg.ratio.hi <= jq_upper(q)

    def test_selftest_passes_on_shipped_registry(self, registry):
        """
        Scenario: Selftest over every registered claim at the default selftest trial count.
        Expected: Exit 0; consistent claims hold, the t^3 control is violated.
        """
        # Act
        response = SelftestCommand(registry).execute(SelftestRequest(trials=SystemConfig.SELFTEST_TRIALS))

        # Assert
        payload = json.loads(response.payload)
        rows = {row["id"]: row for row in payload["claims"]}
        assert response.exit_code == EXIT_PASS
        assert payload["passed"] is True
        assert len(rows) == len(registry.claims())
        assert rows["control:pow:3:opconvex"]["verdict"] == "Violated"
        assert all(row["ok"] for row in rows.values())
