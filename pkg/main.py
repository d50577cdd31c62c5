import argparse
import logging
import sys

from backend.certify.report import certify, raise_on_failure, write_report
from backend.scenario import Scenario
from backend.sim.diagnostics import diagnostics
from backend.sim.engine import Simulator
from backend.sim.trace import SimulationTrace
from backend.verify.properties import PROPERTIES, run_properties
from frontend.scenariogen.loader import parse_scenario, parse_tree, read_scenario
from utils.error import FormationError
from utils.plots import emit_plots
from utils.printtree import ScenarioPrinter
from utils.tracewriter import read_trace, write_trace

logger = logging.getLogger("formation")


def parseArgs(argv=None):
    parser = argparse.ArgumentParser(description="Distributed formation control of manipulator end-effectors")
    verbosity = parser.add_mutually_exclusive_group()
    verbosity.add_argument("-v", "--verbose", action="store_true", help="debug output")
    verbosity.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("parse", help="check a scenario and print its normalized form")
    p.add_argument("scenario", type=str, help="the scenario file")

    p = commands.add_parser("simulate", help="run a scenario and write its trace")
    p.add_argument("scenario", type=str, help="the scenario file")
    p.add_argument("--out", type=str, required=True, help="trace directory")
    p.add_argument("--dt", type=float, help="override the integration step [s]")
    p.add_argument("--T", type=float, help="override the horizon [s]")
    p.add_argument("--seed", type=int, help="override the initial-jitter seed")
    p.add_argument("--plot", action="store_true", help="also write the figures into the trace directory")

    p = commands.add_parser("certify", help="estimate the certificate constants and check the gains")
    p.add_argument("scenario", type=str, help="the scenario file")
    p.add_argument("--out", type=str, required=True, help="report file (a .json copy is written next to it)")
    p.add_argument("--samples", type=int, help="override the grid size")

    p = commands.add_parser("verify", help="run the property suites")
    p.add_argument("scenario", type=str, help="the scenario file")
    p.add_argument("--only", type=str, nargs="+", choices=list(PROPERTIES), help="run only these properties")

    p = commands.add_parser("plot", help="draw the figures of a written trace")
    p.add_argument("trace", type=str, help="trace directory")
    p.add_argument("--out", type=str, required=True, help="figure directory")
    return parser.parse_args(argv)


def configureLogging(args: argparse.Namespace) -> None:
    level = logging.DEBUG if args.verbose else logging.WARNING if args.quiet else logging.INFO
    logging.basicConfig(level=level, format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr, force=True)


# The parser stage: scenario text -> checked scenario tree -> Scenario
def step_parse(path: str) -> Scenario:
    return parse_scenario(path)


# The simulation stage: Scenario -> trace directory
def step_simulate(args: argparse.Namespace) -> SimulationTrace:
    scenario = step_parse(args.scenario)
    overrides = {name: getattr(args, name) for name in ("dt", "T", "seed") if getattr(args, name) is not None}
    if overrides:
        scenario = scenario.with_simulation(**overrides)
    trace = Simulator(scenario).run()
    report = diagnostics(trace, scenario) if len(trace) else None
    write_trace(trace, args.out, None if report is None else report.asDict())
    if report is not None:
        print(report)
    if args.plot and len(trace):
        emit_plots(trace, args.out)
    return trace


# The certificate stage: Scenario -> report; fails after writing when an inequality fails
def step_certify(args: argparse.Namespace) -> None:
    scenario = step_parse(args.scenario)
    if args.samples is not None:
        scenario.certificate = scenario.certificate.replace(samples=args.samples)
    report = certify(scenario)
    write_report(report, args.out)
    print(report)
    raise_on_failure(report)


# The property stage: Scenario -> residuals; exit 1 when any check fails
def step_verify(args: argparse.Namespace) -> int:
    scenario = step_parse(args.scenario)
    results = run_properties(scenario, args.only)
    for result in results:
        print(result)
    failed = [result.name for result in results if not result.passed]
    if failed:
        logger.error("failed properties: %s", ", ".join(failed))
        return 1
    return 0


def step_plot(args: argparse.Namespace) -> None:
    emit_plots(read_trace(args.trace), args.out)


def main(argv=None) -> int:
    args = parseArgs(argv)
    configureLogging(args)

    try:
        if args.command == "parse":
            step_parse(args.scenario)
            sys.stdout.write(ScenarioPrinter().work(parse_tree(read_scenario(args.scenario))))
        elif args.command == "simulate":
            step_simulate(args)
        elif args.command == "certify":
            step_certify(args)
        elif args.command == "verify":
            return step_verify(args)
        elif args.command == "plot":
            step_plot(args)
    except FormationError as e:
        print(e, file=sys.stderr)
        return e.exitCode

    return 0


if __name__ == "__main__":
    sys.exit(main())
