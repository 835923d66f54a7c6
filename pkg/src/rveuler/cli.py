"""``rveuler`` command line: orbit, convergence, entry and compare runs.

Values come from the built-in defaults of each verb, overridden by the
``--config`` file, overridden in turn by command-line flags.

Exit codes: 0 success, 2 configuration error, 3 numerical domain error.
"""

from __future__ import annotations

import argparse
import logging
import math
import sys

from .config import FORMULATIONS, config_from_dict, default_config, dump_config, load_config
from .errors import ConfigError, PropagationError, RvEulerError
from .scenarios import convergence_table, run_scenario, write_report

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DOMAIN = 3

log = logging.getLogger("rveuler")


def _steps(text: str) -> list[int]:
    try:
        steps = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer or comma-separated integers, got {text!r}")
    if not steps or any(n < 1 for n in steps):
        raise argparse.ArgumentTypeError("step counts must be positive")
    return steps


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rveuler", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)
    for verb, help_text in (
        ("orbit", "propagate the two-body orbit for one period"),
        ("convergence", "maximum position error against the analytic orbit for a sweep of step counts"),
        ("entry", "forward-simulate the atmospheric entry over a rotating Earth"),
        ("compare", "propagate two formulations and difference their positions"),
    ):
        p = sub.add_parser(verb, help=help_text)
        p.add_argument("--config", help="YAML scenario file")
        p.add_argument("--out", default=f"out/{verb}", help="output directory (default: out/<verb>)")
        p.add_argument("--formulation", choices=FORMULATIONS)
        p.add_argument("--steps", type=_steps, help="step count N (comma-separated list for convergence)")
        p.add_argument("--dump-config", action="store_true", help="print the effective config and exit")
        p.add_argument("-v", "--verbose", action="store_true")
    return parser


def effective_config(args):
    if args.config:
        cfg = load_config(args.config)
        if cfg.scenario != args.verb:
            # a file written for another verb still supplies its sections
            doc = cfg.to_dict()
            doc["scenario"] = args.verb
            for section in ("entry", "compare"):
                if args.verb != section:
                    doc.pop(section, None)
            cfg = config_from_dict(doc)
    else:
        cfg = default_config(args.verb)
    if args.formulation:
        cfg.formulation = args.formulation
    if args.steps:
        if args.verb == "convergence":
            cfg.integrator.step_list = args.steps
        elif len(args.steps) == 1:
            cfg.integrator.steps = args.steps[0]
        else:
            raise ConfigError("--steps", "only the convergence verb accepts a list")
    return cfg


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        cfg = effective_config(args)
        if args.dump_config:
            sys.stdout.write(dump_config(cfg))
            return EXIT_OK
        report = run_scenario(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except PropagationError as exc:
        print(f"domain error at t = {exc.time:.9g} s: {exc.cause}", file=sys.stderr)
        return EXIT_DOMAIN
    except RvEulerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN

    for path in write_report(report, args.out):
        log.info("wrote %s", path)
    _print_summary(report)
    if report.aborts and report.scenario != "convergence":
        for a in report.aborts:
            print(f"domain error ({a.formulation}) at t = {a.time:.9g} s: {a.message}", file=sys.stderr)
        return EXIT_DOMAIN
    return EXIT_OK


def _print_summary(report) -> None:
    if report.study is not None:
        print(f"{'N':>8}  {'rv-euler':>12}  {'spherical':>12}  {'ratio':>10}")
        for n, a, b, ratio in convergence_table(report.study):
            print(f"{n:>8d}  {a:>12.4e}  {b:>12.4e}  {ratio:>10.1f}")
        return
    for name, leg in report.legs.items():
        line = f"{name}: {len(leg.times)} samples"
        if leg.e_r_max is not None:
            line += f", e_r_max = {leg.e_r_max:.4e} km"
        print(line)
    if "max_difference" in report.diagnostics:
        print(f"max position difference = {report.diagnostics['max_difference']:.4e} km")
    term = report.diagnostics.get("terminal")
    if term:
        print(
            f"terminal: t = {term['t']:.3f} s, h = {term['altitude']:.3f} km, v = {term['v']:.4f} km/s, "
            f"eB1 = {term['eB1']:.4f}, etaB = {term['etaB']:.4f}"
        )
        gamma = report.diagnostics["min_flight_path_angle_deg"]
        if math.isfinite(gamma):
            print(f"steepest flight-path angle = {gamma:.3f} deg, min |etaB| = {report.diagnostics['min_abs_etaB']:.3e}")


if __name__ == "__main__":
    sys.exit(main())
