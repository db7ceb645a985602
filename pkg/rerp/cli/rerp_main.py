'''Command-line driver.

    rerp solve INSTANCE        robust plan -> plan.json, trace.csv
    rerp dispatch INSTANCE --plan plan.json
                               worst-case dispatch of a plan -> dispatch.csv
    rerp evaluate INSTANCE [--case LP|MP|HP|all]
                               chi=0 vs chi>0 Gini comparison, optionally on
                               the PV patterns -> samples.csv, summary.csv, tests.csv
    rerp sweep-chi INSTANCE --chi-list 0,1,10,100
                               -> sweep.csv
    rerp check INSTANCE        validate the instance file

Defaults come from global_config.yaml; flags override them. Exit status is
0 on success, 1 on a domain failure and 2 on a usage error.
'''
import argparse
import logging
import os
import sys
from dataclasses import replace

from rerp.rerp_util import global_config, work_base
from rerp.robust.benders import benders_config, solve_robust, final_dispatch
from rerp.robust.recourse import solve_recourse, PENALTY_SENSES
from rerp.model.patterns import PATTERNS
from rerp.evaluation.compare import compare_pair, chi_sweep, pattern_battery, combined_frames
from rerp.cli.parseInstance import parse_instance
from rerp.cli.reports import write_plan, read_plan, dispatch_frame, write_frame, write_pair_reports

logger = logging.getLogger(__name__)

def _chi_list(text):
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError("expected a comma-separated list of numbers, got '{}'".format(text))

def build_parser(gconf):
    bconf = gconf.get("benders", {}) or {}
    sconf = gconf.get("solver", {}) or {}
    econf = gconf.get("evaluation", {}) or {}

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("instance", type=str, help="Path to instance JSON file")
    common.add_argument("--epsilon", type=float, default=bconf.get("epsilon", 1e-3),
            help="Relative Benders gap")
    common.add_argument("--max-iters", type=int, default=bconf.get("max_iterations", 30),
            help="Benders iteration limit")
    common.add_argument("--chi", type=float, default=bconf.get("chi", 100.0),
            help="Fairness penalty weight")
    common.add_argument("--penalty-sense", choices=PENALTY_SENSES, default=bconf.get("penalty_sense", "operator"),
            help="Sign of the fairness term in the worst-case recourse")
    common.add_argument("--samples", type=int, default=econf.get("samples", 1000),
            help="Monte-Carlo sample count M")
    common.add_argument("--seed", type=int, default=econf.get("seed", 0), help="Monte-Carlo seed")
    common.add_argument("--workers", type=int, default=econf.get("workers", 1),
            help="Monte-Carlo worker processes")
    common.add_argument("--mip-gap", type=float, default=sconf.get("mip_gap", 1e-4), help="Relative MIP gap")
    common.add_argument("--backend", choices=("bundled", "external", "scipy"), default=sconf.get("backend", "bundled"),
            help="MILP solver backend")
    common.add_argument("--out-dir", type=str, default=None,
            help="Output directory (default: work_base/<instance name>)")
    common.add_argument("--verbose", action="store_true", help="Log at DEBUG level")

    parser = argparse.ArgumentParser("rerp", description="Robust unit commitment with fair PV curtailment",
            formatter_class=argparse.ArgumentDefaultsHelpFormatter)
    sub = parser.add_subparsers(dest="command")
    sub.required = True
    fmt = argparse.ArgumentDefaultsHelpFormatter
    sub.add_parser("solve", parents=[common], formatter_class=fmt, help="Robust solve")
    p = sub.add_parser("dispatch", parents=[common], formatter_class=fmt, help="Worst-case dispatch of a plan")
    p.add_argument("--plan", type=str, required=True, help="Plan JSON written by 'solve'")
    p = sub.add_parser("evaluate", parents=[common], formatter_class=fmt, help="Fair vs unfair Gini comparison")
    p.add_argument("--case", choices=("RP",) + PATTERNS + ("all",), default="RP",
            help="RP evaluates the instance as given; LP, MP or HP re-profile it with that PV pattern, all runs the three")
    p = sub.add_parser("sweep-chi", parents=[common], formatter_class=fmt, help="Cost and Gini over chi values")
    p.add_argument("--chi-list", type=_chi_list, default=[0.0, 1.0, 10.0, 100.0], help="Comma-separated chi values")
    sub.add_parser("check", parents=[common], formatter_class=fmt, help="Validate an instance file")
    return parser

def _config(gconf, args):
    config = benders_config(gconf, epsilon=args.epsilon, max_iterations=args.max_iters, chi=args.chi,
            penalty_sense=args.penalty_sense)
    return replace(config, solver=replace(config.solver, mip_gap=args.mip_gap, backend=args.backend))

def _out_dir(args, instance):
    if args.out_dir is not None:
        return args.out_dir
    return work_base(instance.name)

def _solve(instance, config, args):
    result = solve_robust(instance, config)
    out = _out_dir(args, instance)
    write_plan(out, result.commitment, result.value, result.status)
    result.trace.to_csv(os.path.join(out, "trace.csv"))
    print("{}: robust value {:.6f} ({}, {} iterations) -> {}".format(instance.name, result.value, result.status,
            len(result.trace.iterations), out))
    if result.uses_slack:
        sys.stderr.write("warning: worst case of the plan needs balance slack from slot {}\n".format(
                result.recourse.slack_slot))

def _dispatch(instance, config, args):
    plan = read_plan(args.plan, instance)
    rec = solve_recourse(instance, plan, config.chi, config.bigm_for(instance), config.solver, config.penalty_sense)
    dispatch = final_dispatch(instance, plan, rec.worst_case, config.solver)
    path = write_frame(_out_dir(args, instance), dispatch_frame(instance, dispatch), "dispatch.csv")
    print("{}: worst-case dispatch cost {:.6f} -> {}".format(instance.name, dispatch.cost, path))

def _evaluate(instance, config, args):
    if args.case == "RP":
        reports = [compare_pair(instance, config.chi, args.samples, args.seed, config, args.workers)]
    else:
        patterns = PATTERNS if args.case == "all" else (args.case,)
        # loads and PVs are allocated with the Monte-Carlo seed
        reports = pattern_battery(instance, config.chi, args.samples, args.seed, config, args.workers, patterns,
                allocation_seed=args.seed)
    write_pair_reports(_out_dir(args, instance), reports)
    _, summary, tests = combined_frames(reports)
    print(summary.to_string(index=False))
    print(tests.to_string(index=False))

def _sweep(instance, config, args):
    frame = chi_sweep(instance, args.chi_list, args.samples, args.seed, config, args.workers)
    write_frame(_out_dir(args, instance), frame, "sweep.csv")
    print(frame.to_string(index=False))

_COMMANDS = {"solve": _solve, "dispatch": _dispatch, "evaluate": _evaluate, "sweep-chi": _sweep}

def run_command(argv, gconf=None):
    if gconf is None:
        gconf = global_config()
    try:
        args = build_parser(gconf).parse_args(argv)
    except SystemExit as err:
        return err.code
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.INFO,
            format="%(asctime)s %(name)s %(levelname)s: %(message)s")

    try:
        instance = parse_instance(args.instance, gconf.get("defaults"))
        if args.command == "check":
            print("{}: ok ({} generators, {} PVs, {} loads, T={})".format(args.instance, instance.n_g,
                    instance.n_p, instance.n_d, instance.horizon))
            return 0
        _COMMANDS[args.command](instance, _config(gconf, args), args)
    except (ValueError, RuntimeError, OSError) as err:
        logger.debug("command failed", exc_info=True)
        sys.stderr.write("error: {}\n".format(err))
        return 1
    return 0

def _main():
    sys.exit(run_command(sys.argv[1:]))

if __name__ == "__main__":
    _main()
