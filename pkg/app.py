import argparse
import os
import sys
from pathlib import Path
from typing import List, Optional

from dotenv import load_dotenv

# --- Import Infrastructure & Domain ---
from matrix_io import JsonMatrixLoader
from models.dtos import (
    EXIT_ERROR,
    CampaignOverrides,
    CheckIdentityRequest,
    ComputeRequest,
    ProbeRequest,
    ScanRequest,
    SelftestRequest,
)
from models.entities import SystemConfig
from models.errors import OperatorEntropyError
from services import (
    CheckIdentityCommand,
    ClaimRegistry,
    ComputeCommand,
    ProbeCommand,
    ProbeEngine,
    ScanCommand,
    SelftestCommand,
)

# --- Import Views ---
from views.common import get_logger, log_action, set_log_level
from views.console import render_response

DEFAULT_REGISTRY = Path(__file__).parent / "data" / "claims" / "registry.yaml"

logger = get_logger("CLI")


def _float_list(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got '{text}'")


def _add_campaign_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--dim", type=int, help=f"matrix dimension (default {SystemConfig.DEFAULT_DIM})")
    parser.add_argument("--trials", type=int, help=f"number of trials (default {SystemConfig.DEFAULT_TRIALS})")
    parser.add_argument("--seed", type=int, help=f"64-bit seed (default {SystemConfig.DEFAULT_SEED})")
    parser.add_argument("--tol", type=float, help=f"relative tolerance (default {SystemConfig.DEFAULT_TOL_REL:g})")
    parser.add_argument("--spec-lo", type=float, help="lower bound of the A-side spectrum")
    parser.add_argument("--spec-hi", type=float, help="upper bound of the A-side spectrum")
    parser.add_argument("--ratio-lo", type=float, help="lower bound of the dominated B/A ratio")
    parser.add_argument("--ratio-hi", type=float, help="upper bound of the dominated B/A ratio")


def _overrides(args: argparse.Namespace) -> CampaignOverrides:
    return CampaignOverrides(
        dim=args.dim,
        trials=args.trials,
        seed=args.seed,
        tol=args.tol,
        spec_lo=args.spec_lo,
        spec_hi=args.spec_hi,
        ratio_lo=args.ratio_lo,
        ratio_hi=args.ratio_hi,
    )


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="opentropy",
        description="Operator entropies and seeded convexity probes",
    )
    parser.add_argument("--verbose", action="store_true", help="log at DEBUG level")
    sub = parser.add_subparsers(dest="command", required=True)

    compute = sub.add_parser("compute", help="evaluate an entropy on two matrix files")
    compute.add_argument("spec", help='entropy spec: "S", "Sq:q", "Sab:a,b", "T:lam", "Tab:a,b"')
    compute.add_argument("a_path", type=Path)
    compute.add_argument("b_path", type=Path)
    compute.add_argument("--normalize", action="store_true", help="scale both matrices to trace 1")
    compute.add_argument("--out", type=Path)

    probe = sub.add_parser("probe", help="run a probe campaign for a claim id")
    probe.add_argument("claim", help='e.g. "thm2.3:T:0.5:concave" or "adhoc:pow:3:opconvex"')
    _add_campaign_flags(probe)
    probe.add_argument("--out", type=Path)

    scan = sub.add_parser("scan", help="classify an (alpha, beta) grid")
    scan.add_argument("family", choices=["Tab", "Sab"])
    scan.add_argument("--alphas", type=_float_list, required=True)
    scan.add_argument("--betas", type=_float_list, required=True)
    _add_campaign_flags(scan)
    scan.add_argument("--out", type=Path)

    identity = sub.add_parser("check-identity", help="check the superoperator relative-entropy identity")
    identity.add_argument("rho_path", type=Path)
    identity.add_argument("sigma_path", type=Path)
    identity.add_argument("--normalize", action="store_true", help="scale both matrices to trace 1")
    identity.add_argument("--out", type=Path)

    selftest = sub.add_parser("selftest", help="run every registered claim at reduced trials")
    selftest.add_argument("--trials", type=int, default=SystemConfig.SELFTEST_TRIALS)
    selftest.add_argument("--seed", type=int, default=SystemConfig.DEFAULT_SEED)
    selftest.add_argument("--out", type=Path)

    return parser


def _engine() -> ProbeEngine:
    return ProbeEngine(max_workers=int(os.getenv("OPENTROPY_WORKERS", "1")))


def _registry() -> ClaimRegistry:
    return ClaimRegistry.from_file(Path(os.getenv("OPENTROPY_REGISTRY", str(DEFAULT_REGISTRY))), _engine())


def run(args: argparse.Namespace) -> int:
    log_action(args.command.upper(), " ".join(f"{k}={v}" for k, v in vars(args).items() if v is not None))

    if args.command == "compute":
        response = ComputeCommand(JsonMatrixLoader()).execute(
            ComputeRequest(spec=args.spec, a_path=args.a_path, b_path=args.b_path, normalize=args.normalize)
        )
    elif args.command == "probe":
        response = ProbeCommand(_registry()).execute(ProbeRequest(claim=args.claim, overrides=_overrides(args)))
    elif args.command == "scan":
        response = ScanCommand(_engine()).execute(
            ScanRequest(family=args.family, alphas=args.alphas, betas=args.betas, overrides=_overrides(args))
        )
    elif args.command == "check-identity":
        response = CheckIdentityCommand(JsonMatrixLoader()).execute(
            CheckIdentityRequest(rho_path=args.rho_path, sigma_path=args.sigma_path, normalize=args.normalize)
        )
    else:
        response = SelftestCommand(_registry()).execute(SelftestRequest(trials=args.trials, seed=args.seed))

    return render_response(response, args.out)


def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    args = build_parser().parse_args(argv)
    if args.verbose:
        set_log_level("DEBUG")
    try:
        return run(args)
    except (OperatorEntropyError, OSError, ValueError) as e:
        # Registry loading happens outside the commands
        logger.error(f"{type(e).__name__}: {e}")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
