"""
IceLine - Budyko ice-line / greenhouse model as a Filippov system
Command-line entry point

Run with: python main.py simulate --eta-c 0.85 --a0 210 --eta0 0.95 --out runs/small_cap
"""
import sys
import json
import logging
import argparse
from pathlib import Path
from typing import Any, Dict, List, Optional

# Add project root to path
PROJECT_ROOT = Path(__file__).parent
sys.path.insert(0, str(PROJECT_ROOT))

from core.config import RunConfig, load_run_config, dump_config, update_config
from core.controller import IceLineController
from core.errors import (
    ConfigError,
    IceLineError,
    IntegrationError,
    InvalidDomainError,
    PreconditionError,
)

logger = logging.getLogger("iceline")

EXIT_OK = 0
EXIT_RUNTIME = 1
EXIT_PRECONDITION = 2

# flag dest -> dotted RunConfig key
PARAM_FLAGS = {
    "q": ("params.Q", "Solar constant Q"),
    "s2": ("params.s2", "Insolation shape s2"),
    "b": ("params.B", "Outgoing radiation slope B"),
    "c": ("params.C", "Heat transport C"),
    "tc": ("params.Tc", "Ice formation temperature Tc"),
    "rho": ("params.rho", "Ice-line relaxation rate rho"),
    "delta": ("params.delta", "Greenhouse rate delta"),
    "eta_c": ("params.eta_c", "Volcanism/weathering ratio eta_c"),
    "alpha1": ("params.alpha1", "Ice-free albedo (budyko)"),
    "alpha2": ("params.alpha2", "Ice albedo (budyko)"),
    "m": ("params.M", "Snow-line steepness M (jormungand)"),
    "alpha_w": ("params.alpha_w", "Open-water albedo (jormungand)"),
    "alpha_i": ("params.alpha_i", "Bare-ice albedo (jormungand)"),
    "alpha_s": ("params.alpha_s", "Snow albedo (jormungand)"),
    "y_snow": ("params.y_snow", "Snow-line latitude (jormungand)"),
}
INTEGRATOR_FLAGS = ("rel_tol", "abs_tol", "boundary_tol", "tangency_tol", "max_step", "max_slide_time")
# flags that only reach h_constructed; the Budyko field uses the tabulated cubic
CONSTRUCTED_ONLY_FLAGS = ("q", "s2", "b", "c", "tc", "alpha1", "alpha2")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run configuration")
    common.add_argument("--out", help="Output path prefix")
    common.add_argument("--jobs", type=int, help="Worker processes for sweeps (default: 1)")
    common.add_argument("--dump-config", action="store_true", help="Print the effective configuration and exit")
    common.add_argument("--verbose", "-v", action="store_true", help="Debug logging")
    common.add_argument("--quiet", "-q", action="store_true", help="Only errors on stderr")
    common.add_argument("--seed", type=int, help="Seed for diagnostic sampling")
    common.add_argument("--model", choices=["budyko", "jormungand"], help="Albedo model (default: budyko)")
    for dest, (_, text) in PARAM_FLAGS.items():
        common.add_argument("--" + dest.replace("_", "-"), dest=dest, type=float, help=text)
    for dest in INTEGRATOR_FLAGS:
        common.add_argument("--" + dest.replace("_", "-"), dest=dest, type=float, help=f"Integrator {dest}")

    parser = argparse.ArgumentParser(
        description="IceLine - ice-line / greenhouse climate model with Filippov sliding"
    )
    commands = parser.add_subparsers(dest="command", required=True)

    simulate = commands.add_parser("simulate", parents=[common], help="Integrate one trajectory")
    simulate.add_argument("--a0", type=float, help="Initial A")
    simulate.add_argument("--eta0", type=float, help="Initial ice line")
    simulate.add_argument("--t-max", dest="t_max", type=float, help="End time")
    simulate.add_argument("--dt-out", dest="dt_out", type=float, help="Output sampling interval")
    simulate.add_argument("--section-eta", dest="section_eta", type=float,
                          help="Log upward crossings of this ice line")

    sweep = commands.add_parser("sweep", parents=[common], help="Classify attractors over eta_c")
    sweep.add_argument("--eta-c-min", dest="eta_c_min", type=float)
    sweep.add_argument("--eta-c-max", dest="eta_c_max", type=float)
    sweep.add_argument("--steps", type=int)

    nullcline = commands.add_parser("nullcline", parents=[common], help="Tabulate the eta-nullcline")
    nullcline.add_argument("--samples", type=int, help="Number of eta samples (default: 101)")

    commands.add_parser("equilibrium", parents=[common], help="Fixed point and its eigenvalues as JSON")

    diagnose = commands.add_parser("diagnose", parents=[common], help="One-sided Lipschitz estimate")
    diagnose.add_argument("--pairs", type=int, default=10000, help="Sampled point pairs (default: 10000)")
    return parser


def resolve_config(args: argparse.Namespace) -> RunConfig:
    """Config file first, then any flags that were given"""
    config = load_run_config(args.config) if args.config else RunConfig()
    updates: Dict[str, Any] = {
        "model": args.model,
        "seed": args.seed,
        "sweep.jobs": args.jobs,
        "ic.A": getattr(args, "a0", None),
        "ic.eta": getattr(args, "eta0", None),
        "t_max": getattr(args, "t_max", None),
        "dt_out": getattr(args, "dt_out", None),
        "section_eta": getattr(args, "section_eta", None),
        "samples": getattr(args, "samples", None),
        "sweep.eta_c_min": getattr(args, "eta_c_min", None),
        "sweep.eta_c_max": getattr(args, "eta_c_max", None),
        "sweep.steps": getattr(args, "steps", None),
    }
    for dest, (key, _) in PARAM_FLAGS.items():
        updates[key] = getattr(args, dest)
    for dest in INTEGRATOR_FLAGS:
        updates["integrator." + dest] = getattr(args, dest)
    config = update_config(config, updates)
    ignored = [dest for dest in CONSTRUCTED_ONLY_FLAGS if getattr(args, dest) is not None]
    if config.model == "budyko" and ignored and args.command != "diagnose":
        logger.warning(
            "--%s only change h_constructed; budyko runs use the tabulated cubic (see diagnose)",
            ", --".join(ignored)
        )
    return config


def setup_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.ERROR if quiet else logging.WARNING
    logging.basicConfig(
        level=level,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def status(args: argparse.Namespace, message: str) -> None:
    if not args.quiet:
        print(message, file=sys.stderr)


def report_error(error: Exception) -> None:
    payload = {"error": type(error).__name__, "message": str(error)}
    if isinstance(error, IntegrationError) and error.t is not None:
        payload["t"] = error.t
    print(json.dumps(payload), file=sys.stderr)


def cmd_simulate(controller: IceLineController, args: argparse.Namespace) -> int:
    exporter = controller.exporter(args.out or "trajectory")
    try:
        trajectory = controller.simulate()
    except IntegrationError as e:
        if e.partial is not None:
            result = exporter.export_trajectory(e.partial, partial=True)
            if result.success:
                status(args, f"Partial output kept in {', '.join(result.paths)}")
        report_error(e)
        return EXIT_RUNTIME

    result = exporter.export_trajectory(trajectory)
    if not result.success:
        report_error(IOError(result.error))
        return EXIT_RUNTIME
    status(args, f"Wrote {', '.join(result.paths)}")
    return EXIT_OK


def cmd_sweep(controller: IceLineController, args: argparse.Namespace) -> int:
    from services.sweep import Attractor

    rows = controller.sweep(progress=not args.quiet)
    result = controller.exporter(args.out or "sweep").export_sweep(rows)
    if not result.success:
        report_error(IOError(result.error))
        return EXIT_RUNTIME
    status(args, f"Wrote {len(rows)} rows to {result.path}")
    if rows and all(r.attractor is Attractor.UNDETERMINED for r in rows):
        print(json.dumps({"error": "SweepFailed", "message": "every row is undetermined"}), file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def cmd_nullcline(controller: IceLineController, args: argparse.Namespace) -> int:
    points = controller.nullcline()
    result = controller.exporter(args.out or "nullcline").export_nullcline(points)
    if not result.success:
        report_error(IOError(result.error))
        return EXIT_RUNTIME
    status(args, f"Wrote {len(points)} points to {result.path}")
    return EXIT_OK


def cmd_equilibrium(controller: IceLineController, args: argparse.Namespace) -> int:
    from services.model import Stability

    eta_c = controller.params.eta_c
    if not 0 < eta_c < 1:
        print(json.dumps({
            "error": "DegenerateEquilibrium",
            "message": f"eta_c={eta_c!r}: a whole boundary is made of fixed points",
        }), file=sys.stderr)
        return EXIT_PRECONDITION

    report = controller.equilibrium()
    payload = {"model": controller.model.name, **report.to_dict()}
    print(json.dumps(payload, indent=2))
    if args.out:
        controller.exporter(args.out).export_report(payload)
    if report.stability is Stability.DEGENERATE:
        return EXIT_PRECONDITION
    return EXIT_OK


def cmd_diagnose(controller: IceLineController, args: argparse.Namespace) -> int:
    from core.filippov import one_sided_lipschitz_diagnostic
    from services.analysis import nullcline_span

    model = controller.model
    low = model.nullcline_A(0.0)
    span = nullcline_span(model)
    box = (low - span, low + 2 * span, -0.5, 1.5)
    seed = controller.config.seed if controller.config.seed is not None else 0
    field = model.field()
    value = one_sided_lipschitz_diagnostic(field, box, args.pairs, seed, controller.integrator_config)
    report = {"model": model.name, "box": list(box), "pairs": args.pairs, "seed": seed,
              "one_sided_lipschitz": value, "lipschitz_hint": field.lipschitz_hint}
    if model.name == "budyko":
        from services.budyko import h_constructed_fit

        fit = h_constructed_fit(model.params)
        report["constructed_fit"] = {"coefficients": list(fit.coefficients), "residual": list(fit.residual)}
    print(json.dumps(report, indent=2))
    return EXIT_OK


COMMANDS = {
    "simulate": cmd_simulate,
    "sweep": cmd_sweep,
    "nullcline": cmd_nullcline,
    "equilibrium": cmd_equilibrium,
    "diagnose": cmd_diagnose,
}


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point; returns the process exit code"""
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose, args.quiet)

    try:
        config = resolve_config(args)
        if args.dump_config:
            sys.stdout.write(dump_config(config))
            return EXIT_OK
        controller = IceLineController(config)
        return COMMANDS[args.command](controller, args)
    except (ConfigError, PreconditionError, InvalidDomainError) as e:
        report_error(e)
        return EXIT_PRECONDITION
    except IceLineError as e:
        logger.debug("Run failed", exc_info=True)
        report_error(e)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
