import argparse
import dataclasses
import json
import logging
import sys

import pandas as pd

import presets
import storage
from gates import FloquetParams
from gauge import Boundary, gauge_audit
from hamiltonian import trotter_scan
from scenarios import OutputFormat, parse_angle, run_scenario
from statevector import NumericalToleranceError

logger = logging.getLogger("floquet")


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for the run, gauge-audit, trotter-scan and list-presets commands."""
    parser = argparse.ArgumentParser(description="Floquet Ising chain and Z2 gauge dual simulator")
    parser.add_argument("--verbose", action="store_true", help="Log debug output")
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="Run a preset or a YAML scenario file")
    source = run.add_mutually_exclusive_group(required=True)
    source.add_argument("--preset", help="Name of a built-in scenario (see list-presets)")
    source.add_argument("--config", help="Path to a YAML scenario file")
    run.add_argument("--out", help="Output file, or '-' for stdout")
    run.add_argument("--format", choices=[f.value for f in OutputFormat], help="Output format")
    run.add_argument("--seed", type=int, help="Sampling seed")
    run.add_argument("--shots", type=int, help="Estimate observables from this many joint readouts per cycle")

    audit = sub.add_parser("gauge-audit", help="Certify gauge invariance of the lattice-gauge dual")
    audit.add_argument("--sites", type=int, required=True, help="Number of matter sites")
    audit.add_argument("--boundary", choices=[b.value for b in Boundary], default=Boundary.OPEN.value)
    audit.add_argument("--draws", type=int, default=20, help="Parameter draws, including (pi/4, pi/10, pi/8)")
    audit.add_argument("--seed", type=int, default=0)

    scan = sub.add_parser("trotter-scan", help="Distance between one cycle and its continuous-time limit")
    scan.add_argument("--dt-list", type=float, nargs="+", default=[0.1, 0.05, 0.025])
    scan.add_argument("--sites", type=int, default=4)
    scan.add_argument("--J", default="pi/4")
    scan.add_argument("--mu", default="pi/10")
    scan.add_argument("--h", default="pi/8")

    sub.add_parser("list-presets", help="Print the built-in scenario names")
    return parser


def cmd_run(args) -> int:
    """Run one scenario from a preset or config file and write its records."""
    cfg = presets.get_preset(args.preset) if args.preset else storage.load_config(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.shots is not None:
        overrides["shots"] = args.shots
    fmt = OutputFormat(args.format) if args.format else cfg.output.format
    overrides["output"] = dataclasses.replace(cfg.output, format=fmt)
    cfg = dataclasses.replace(cfg, **overrides)
    manifest = run_scenario(cfg)
    if args.out == "-":
        storage.write_stdout(manifest, fmt)
        return 0
    destination = args.out or storage.default_destination(cfg, fmt)
    storage.emit(manifest, fmt, destination)
    print(f"Wrote {len(manifest.records)} records to {destination}")
    return 0


def cmd_gauge_audit(args) -> int:
    """Print the gauge certification report as JSON."""
    report = gauge_audit(args.sites, args.boundary, draws=args.draws, seed=args.seed)
    print(json.dumps(report, indent=2))
    if not report["passed"]:
        failed = [name for name, entry in report["checks"].items() if not entry["ok"]]
        raise NumericalToleranceError(f"gauge audit failed: {', '.join(failed)}")
    return 0


def cmd_trotter_scan(args) -> int:
    """Print Trotter error against step size for one set of angles."""
    p = FloquetParams(
        J=parse_angle(args.J, "--J"),
        mu=parse_angle(args.mu, "--mu"),
        h=parse_angle(args.h, "--h"),
        n=args.sites,
    )
    rows = trotter_scan(p, args.dt_list)
    frame = pd.DataFrame(
        [(storage.format_value(dt), storage.format_value(err), "" if ratio is None else storage.format_value(ratio)) for dt, err, ratio in rows],
        columns=["dt", "error", "ratio"],
    )
    sys.stdout.write(frame.to_csv(index=False, lineterminator="\n"))
    return 0


def cmd_list_presets(args) -> int:
    """Print the preset names with their initial kets and fields."""
    for name in presets.preset_names():
        cfg = presets.get_preset(name)
        print(f"{name}\t{cfg.engine.value}\t{cfg.initial}\th={cfg.params.h!r}")
    return 0


COMMANDS = {
    "run": cmd_run,
    "gauge-audit": cmd_gauge_audit,
    "trotter-scan": cmd_trotter_scan,
    "list-presets": cmd_list_presets,
}


def main(argv=None) -> int:
    """CLI entry point; returns the process exit code."""
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return COMMANDS[args.command](args)
    except (ValueError, OSError, NumericalToleranceError) as exc:
        logger.debug("command failed", exc_info=True)
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
