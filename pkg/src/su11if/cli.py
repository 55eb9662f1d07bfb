"""Command-line front end.

    su11if reflectivity|ifshift|sensitivity|limits [common flags]
    su11if figure <id> [common flags] [--amp-max A --amp-steps N]
    su11if oracle-check [--scenario oracle-small] [--output report.json]
    su11if show-scenario [--scenario NAME|PATH]

Exit codes: 0 success, 1 oracle mismatch, 2 bad input (scenario, figure id,
flags), 3 physics domain error, 4 oracle refused (cutoff), 5 I/O failure.
"""

import argparse
import json
import sys
from contextlib import contextmanager

from su11if import tables
from su11if.errors import Su11Error
from su11if.oracle_check import all_passed, report_records, run_oracle_check
from su11if.scenario import dumps, load_scenario

IO_EXIT = 5


def _common(parser, default_scenario="paper-default"):
    parser.add_argument("--scenario", default=default_scenario,
                        help="built-in scenario name or path to a scenario JSON file")
    parser.add_argument("--theta-min", type=float, help="scan start, degrees")
    parser.add_argument("--theta-max", type=float, help="scan end, degrees")
    parser.add_argument("--steps", type=int, help="number of scan points")
    parser.add_argument("--output", "-o", help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), default="csv")


def build_parser():
    parser = argparse.ArgumentParser(prog="su11if", description=__doc__.split("\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_ in (
        ("reflectivity", "|r_pgv|, eta and d eta/d theta over the scan"),
        ("ifshift", "IF shift Y over the scan"),
        ("sensitivity", "homodyne delta_Y and delta_theta over the scan"),
        ("limits", "sensitivities with QCRB, SNL and QFI over the scan"),
    ):
        _common(sub.add_parser(name, help=help_))
    fig = sub.add_parser("figure", help="curve data of one figure")
    fig.add_argument("figure_id")
    _common(fig)
    fig.add_argument("--amp-max", type=float, help="amplitude-axis maximum (fig5/8/10)")
    fig.add_argument("--amp-steps", type=int, help="points per amplitude axis (fig5/8/10)")
    oc = sub.add_parser("oracle-check", help="closed forms vs truncated-Fock oracle")
    oc.add_argument("--scenario", default="oracle-small")
    oc.add_argument("--output", "-o")
    show = sub.add_parser("show-scenario", help="print a scenario as JSON")
    show.add_argument("--scenario", default="paper-default")
    return parser


@contextmanager
def _sink(path):
    if path is None:
        yield sys.stdout
        return
    with open(path, "w", newline="", encoding="utf-8") as fh:
        yield fh


def _scan_override(args):
    return {"theta_min": args.theta_min, "theta_max": args.theta_max, "steps": args.steps}


def _emit(table, args):
    writer = tables.write_json if args.format == "json" else tables.write_csv
    with _sink(args.output) as fh:
        writer(table, fh)


SCAN_COMMANDS = {
    "reflectivity": tables.reflectivity_table,
    "ifshift": tables.ifshift_table,
    "sensitivity": tables.sensitivity_table,
    "limits": tables.limits_table,
}


def run(args):
    scenario = load_scenario(args.scenario)
    if args.command == "show-scenario":
        sys.stdout.write(dumps(scenario))
        return 0
    if args.command == "oracle-check":
        comparisons = run_oracle_check(scenario)
        with _sink(args.output) as fh:
            json.dump(report_records(comparisons), fh, indent=1, allow_nan=False)
            fh.write("\n")
        return 0 if all_passed(comparisons) else 1
    if args.command in SCAN_COMMANDS:
        scenario = scenario.with_scan(args.theta_min, args.theta_max, args.steps)
        _emit(SCAN_COMMANDS[args.command](scenario), args)
        return 0
    table = tables.figure_table(
        args.figure_id, scenario, _scan_override(args), args.amp_max, args.amp_steps
    )
    _emit(table, args)
    return 0


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return run(args)
    except Su11Error as exc:
        print(f"error [{type(exc).__name__}]: {exc}", file=sys.stderr)
        return exc.exit_code
    except OSError as exc:
        print(f"error [io]: {exc}", file=sys.stderr)
        return IO_EXIT


if __name__ == "__main__":
    sys.exit(main())
