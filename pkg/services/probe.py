"""
Seeded falsification campaigns for convexity claims.

Every trial i draws from its own Philox substream keyed by seed ^ i, so
trials are independent of execution order. Trials may run on a thread
pool; results are aggregated in trial-index order, which keeps reports
byte-identical across worker counts.
"""
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from interfaces import JointMap
from models.entities import FunctionDomain, HermitianMatrix, SpectrumInterval, SystemConfig
from models.entropies import GeneralizedPerspectiveMap, PerspectiveMap, RelativeAlphaBeta, TsallisAlphaBeta
from models.errors import DomainMismatch, DomainViolation, NonpositiveH, NotStrictlyPositive, ProbeAborted
from models.functions import FunctionBase, Power, PowerLog, _fmt
from models.probes import Counterexample, Direction, ProbeConfig, ProbeReport, RegionCell, RegionClass, Verdict
from services.matfun import apply_spectral, loewner_margin, make_rng, random_spd, random_spd_dominated, sample_spd
from services.perspective import evaluate_map, hpj_sides, random_contraction_pair
from services.scalarfn import jq_interval, jq_upper, restrict
from views.common import get_logger

logger = get_logger("Probe")


def substream(seed: int, trial: int) -> np.random.Generator:
    return make_rng(seed ^ trial)


def normalized_margin(lhs: HermitianMatrix, rhs: HermitianMatrix, direction: Direction) -> float:
    """lambda_min of the claimed-nonnegative side over max(1, |lhs|_2, |rhs|_2)"""
    if direction == Direction.CONVEX:
        margin, scale = loewner_margin(lhs, rhs)
    else:
        margin, scale = loewner_margin(rhs, lhs)
    return margin / scale


def padded_ratio(ratio: SpectrumInterval, domain: FunctionDomain) -> SpectrumInterval:
    """Keeps the sampled ratio 10% inside finite, positive ends of f's domain"""
    factor = 1.0 + SystemConfig.RATIO_PADDING
    lo, hi = ratio.lo, ratio.hi
    if np.isfinite(domain.lo) and domain.lo > 0:
        lo = max(lo, domain.lo * factor)
    if np.isfinite(domain.hi) and domain.hi > 0:
        hi = min(hi, domain.hi / factor)
    if hi < lo:
        raise DomainMismatch(f"Ratio interval {ratio} leaves nothing inside the padded domain {domain}")
    padded = SpectrumInterval(lo=lo, hi=hi)
    if not domain.covers(padded):
        raise DomainMismatch(f"Ratio interval {padded} is not inside the domain {domain}")
    return padded


@dataclass(frozen=True)
class TrialOutcome:
    trial: int
    dim: int
    c: float
    margin: float
    matrices: Dict[str, HermitianMatrix]
    endpoint: bool


TrialFn = Callable[[int, int], TrialOutcome]


class ProbeEngine:
    def __init__(self, max_workers: int = 1):
        self.max_workers = max(1, int(max_workers))

    # --- WEIGHTS ---

    @staticmethod
    def _weight(cfg: ProbeConfig, trial: int, rng: np.random.Generator) -> float:
        forced = cfg.weight_policy.forced_weight(trial)
        return forced if forced is not None else float(rng.uniform())

    # --- CAMPAIGN DRIVER ---

    def _guarded(self, run_trial: TrialFn, dim: int) -> Callable[[int], TrialOutcome]:
        def guarded(trial: int) -> TrialOutcome:
            try:
                return run_trial(trial, dim)
            except (DomainViolation, NonpositiveH, NotStrictlyPositive) as e:
                raise ProbeAborted(trial, e) from e
        return guarded

    def _run(self, claim: str, direction: str, cfg: ProbeConfig, run_trial: TrialFn) -> ProbeReport:
        logger.info(f"Probing {claim} ({direction}): {cfg.trials} trials, dim {cfg.dim}, seed {cfg.seed}")
        guarded = self._guarded(run_trial, cfg.dim)
        indices = range(cfg.trials)
        if self.max_workers > 1:
            with ThreadPoolExecutor(max_workers=self.max_workers) as pool:
                outcomes = list(pool.map(guarded, indices))
        else:
            outcomes = [guarded(i) for i in indices]

        violations = grazing = endpoint_violations = 0
        counterexamples: List[Counterexample] = []
        for outcome in outcomes:
            if outcome.margin >= 0:
                continue
            if outcome.margin >= -cfg.tol_rel:
                grazing += 1
                continue
            violations += 1
            if outcome.endpoint:
                endpoint_violations += 1
                logger.error(f"{claim}: endpoint trial {outcome.trial} (c={outcome.c!r}) violates the inequality")
            if len(counterexamples) < cfg.max_counterexamples:
                witness = self._smallest_witness(run_trial, outcome, cfg)
                logger.warning(f"{claim}: counterexample at trial {witness.trial}, dim {witness.dim}, margin {witness.margin!r}")
                counterexamples.append(witness)

        verdict = Verdict.VIOLATED if violations else Verdict.CONSISTENT
        report = ProbeReport(
            claim=claim,
            direction=direction,
            seed=cfg.seed,
            dim=cfg.dim,
            tol_rel=cfg.tol_rel,
            trials=cfg.trials,
            violations=violations,
            grazing=grazing,
            endpoint_violations=endpoint_violations,
            worst_margin=min(o.margin for o in outcomes),
            counterexamples=counterexamples,
            verdict=verdict,
        )
        logger.info(f"{claim} ({direction}): {verdict.value}, {violations} violations, worst margin {report.worst_margin!r}")
        return report

    def _smallest_witness(self, run_trial: TrialFn, outcome: TrialOutcome, cfg: ProbeConfig) -> Counterexample:
        """Reruns a violating trial at dim 2 and keeps that witness when it also violates"""
        chosen = outcome
        if outcome.dim > SystemConfig.WITNESS_DIM:
            try:
                retry = run_trial(outcome.trial, SystemConfig.WITNESS_DIM)
                if retry.margin < -cfg.tol_rel:
                    chosen = retry
            except (DomainViolation, NonpositiveH, NotStrictlyPositive):
                logger.debug(f"Witness retry at dim {SystemConfig.WITNESS_DIM} left the domain; keeping dim {outcome.dim}")
        return Counterexample(
            trial=chosen.trial,
            dim=chosen.dim,
            c=chosen.c,
            matrices={name: m.rows() for name, m in chosen.matrices.items()},
            margin=chosen.margin,
        )

    # --- OPERATOR CONVEXITY OF A SCALAR FUNCTION ---

    def probe_operator_convexity(self, f: FunctionBase, direction: Direction, cfg: ProbeConfig,
                                 claim: Optional[str] = None) -> ProbeReport:
        if not f.domain.covers(cfg.spectrum):
            raise DomainMismatch(f"Spectrum {cfg.spectrum} is not inside the domain {f.domain} of {f.label()}")

        def run_trial(trial: int, dim: int) -> TrialOutcome:
            rng = substream(cfg.seed, trial)
            c = self._weight(cfg, trial, rng)
            s1 = sample_spd(dim, cfg.spectrum, rng)
            s2 = sample_spd(dim, cfg.spectrum, rng)
            a1, a2 = s1.matrix, s2.matrix
            lhs = apply_spectral(f, a1.combine(c, a2))
            rhs = c * s1.apply(f) + (1.0 - c) * s2.apply(f)
            return TrialOutcome(trial, dim, c, normalized_margin(lhs, rhs, direction),
                                {"A1": a1, "A2": a2}, c in (0.0, 1.0))

        return self._run(claim or f.label(), f"op{direction.value}", cfg, run_trial)

    # --- JOINT CONVEXITY OF A TWO-VARIABLE MAP ---

    def probe_joint(self, joint_map: JointMap, direction: Direction, cfg: ProbeConfig,
                    claim: Optional[str] = None) -> ProbeReport:
        f = joint_map.scalar_fn()
        h = joint_map.weight_fn()
        ratio = padded_ratio(cfg.ratio, f.domain)
        if h is not None and not h.domain.covers(cfg.spectrum):
            raise DomainMismatch(f"Spectrum {cfg.spectrum} is not inside the domain {h.domain} of {h.label()}")

        def run_trial(trial: int, dim: int) -> TrialOutcome:
            rng = substream(cfg.seed, trial)
            c = self._weight(cfg, trial, rng)
            s1 = sample_spd(dim, cfg.spectrum, rng)
            s2 = sample_spd(dim, cfg.spectrum, rng)
            a1, a2 = s1.matrix, s2.matrix
            # Dominate against h(A): the inner argument is h(A)^-1/2 B h(A)^-1/2
            b1 = random_spd_dominated(a1, ratio, rng, root=s1.root_of(h, "A1"))
            b2 = random_spd_dominated(a2, ratio, rng, root=s2.root_of(h, "A2"))
            lhs = evaluate_map(joint_map, a1.combine(c, a2), b1.combine(c, b2))
            rhs = c * evaluate_map(joint_map, a1, b1) + (1.0 - c) * evaluate_map(joint_map, a2, b2)
            return TrialOutcome(trial, dim, c, normalized_margin(lhs, rhs, direction),
                                {"A1": a1, "B1": b1, "A2": a2, "B2": b2}, c in (0.0, 1.0))

        return self._run(claim or joint_map.label(), direction.value, cfg, run_trial)

    def probe_sq_with_domain(self, q: float, cfg: ProbeConfig, beta: Optional[float] = None,
                             claim: Optional[str] = None) -> ProbeReport:
        """
        Joint convexity of S_q (or S_{q,beta} when beta is given) with A-spectra
        and dominated ratios confined to J_q = [0, e^{(2q-1)/(q(1-q))}].
        """
        upper = jq_upper(q)
        for name, interval in (("spectrum", cfg.spectrum), ("ratio", cfg.ratio)):
            if interval.hi > upper:
                raise DomainMismatch(f"{name} {interval} exceeds J_q = [0, {upper!r}] for q={_fmt(q)}")

        confined = restrict(PowerLog(q=q), jq_interval(q))
        if beta is None:
            joint_map = PerspectiveMap(f=confined)
            label = f"Sq:{_fmt(q)}@J"
        else:
            joint_map = GeneralizedPerspectiveMap(f=confined, h=Power(p=beta))
            label = f"Sab:{_fmt(q)},{_fmt(beta)}@J"
        return self.probe_joint(joint_map, Direction.CONVEX, cfg, claim or label)

    # --- HANSEN-PEDERSEN-JENSEN CAMPAIGN ---

    def probe_hpj(self, f: FunctionBase, cfg: ProbeConfig, claim: Optional[str] = None) -> ProbeReport:
        if not f.domain.covers(SpectrumInterval(lo=0.0, hi=cfg.spectrum.hi)):
            raise DomainMismatch(f"HPJ needs {f.label()} defined on [0, {cfg.spectrum.hi:g}]")

        def run_trial(trial: int, dim: int) -> TrialOutcome:
            rng = substream(cfg.seed, trial)
            x1 = random_spd(dim, cfg.spectrum, rng)
            x2 = random_spd(dim, cfg.spectrum, rng)
            t1, t2 = random_contraction_pair(dim, rng)
            lhs, rhs = hpj_sides(f, x1, x2, t1, t2, cfg.tol_rel)
            u = float(np.trace(t1.T @ t1 + t2.T @ t2)) / dim
            return TrialOutcome(trial, dim, u, normalized_margin(lhs, rhs, Direction.CONVEX),
                                {"X1": x1, "X2": x2}, False)

        return self._run(claim or f.label(), "hpj", cfg, run_trial)

    # --- PARAMETER REGION SCANS ---

    def scan_regions(self, family: str, alpha_grid: Sequence[float], beta_grid: Sequence[float],
                     cfg: ProbeConfig) -> List[RegionCell]:
        if not alpha_grid or not beta_grid:
            raise DomainMismatch("Scan grids must be nonempty")
        builders = {"Tab": TsallisAlphaBeta, "Sab": RelativeAlphaBeta}
        if family not in builders:
            raise DomainMismatch(f"Unknown scan family '{family}'")
        scan_cfg = cfg.with_overrides(trials=max(1, cfg.trials // SystemConfig.SCAN_TRIAL_DIVISOR))

        cells = []
        for alpha in alpha_grid:
            for beta in beta_grid:
                joint_map = builders[family](alpha=alpha, beta=beta)
                convex = self.probe_joint(joint_map, Direction.CONVEX, scan_cfg)
                concave = self.probe_joint(joint_map, Direction.CONCAVE, scan_cfg)
                cells.append(RegionCell(
                    alpha=alpha,
                    beta=beta,
                    verdict=classify(convex, concave),
                    worst_convex_margin=convex.worst_margin,
                    worst_concave_margin=concave.worst_margin,
                ))
        return cells


def classify(convex: ProbeReport, concave: ProbeReport) -> RegionClass:
    if convex.consistent and concave.consistent:
        return RegionClass.BOTH
    if convex.consistent:
        return RegionClass.CONVEX_CONSISTENT
    if concave.consistent:
        return RegionClass.CONCAVE_CONSISTENT
    return RegionClass.NEITHER


# --- MODULE-LEVEL ENTRY POINTS (single worker) ---

_default_engine = ProbeEngine()


def probe_operator_convexity(f: FunctionBase, direction: Direction, cfg: ProbeConfig) -> ProbeReport:
    return _default_engine.probe_operator_convexity(f, direction, cfg)


def probe_joint(joint_map: JointMap, direction: Direction, cfg: ProbeConfig) -> ProbeReport:
    return _default_engine.probe_joint(joint_map, direction, cfg)


def probe_sq_with_domain(q: float, cfg: ProbeConfig, beta: Optional[float] = None) -> ProbeReport:
    return _default_engine.probe_sq_with_domain(q, cfg, beta)


def probe_hpj(f: FunctionBase, cfg: ProbeConfig) -> ProbeReport:
    return _default_engine.probe_hpj(f, cfg)


def scan_regions(family: str, alpha_grid: Sequence[float], beta_grid: Sequence[float],
                 cfg: ProbeConfig) -> List[RegionCell]:
    return _default_engine.scan_regions(family, alpha_grid, beta_grid, cfg)
