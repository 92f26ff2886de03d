"""Command-line interface.

One binary, subcommand style.  Exit codes: 0 success, 1 validation or
parse errors, 2 not diagnosable, 3 not progressive, 4 an observed event
stream is inconsistent with the model, 5 a resource cap was exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from . import __version__
from .diagnosability import check_diagnosable, check_progressive, detection_delay_bound
from .diagnoser import ObsEvent, dumps_diagnoser, load_diagnoser, step, synthesize
from .errors import (
    CapExceeded,
    ModelFormatError,
    NoConsistentExecution,
    TAValidationError,
)
from .estimator import build_estimator, dumps_estimator
from .oracle import brute_force_diagnosable, enumerate_utraces, run_fuzz
from .quotient import dumps_model, load_model, validate_model
from .regions import DEFAULT_MAX_CLASSES, load_ta, region_quotient

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NOT_DIAGNOSABLE = 2
EXIT_NOT_PROGRESSIVE = 3
EXIT_INCONSISTENT = 4
EXIT_CAP = 5


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors, which would collide with the
    # "not diagnosable" exit code; remap to the validation/parse code.
    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_INVALID)


def _max_classes(args):
    if args.max_classes is not None:
        return args.max_classes
    env = os.environ.get("HYDIAG_MAX_CLASSES")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ModelFormatError(f"HYDIAG_MAX_CLASSES must be an integer, got {env!r}")
    return DEFAULT_MAX_CLASSES


def _load_quotient(args):
    """Load the model argument: a quotient file, or a TA file with --ta."""
    if args.ta:
        return region_quotient(load_ta(args.model), max_classes=_max_classes(args))
    return load_model(args.model)


def _validated_model(args):
    model = _load_quotient(args)
    report = validate_model(model)
    if not report.ok:
        _print_validation(report, getattr(args, "format", "text"))
        raise SystemExit(EXIT_INVALID)
    return model


def _print_validation(report, fmt):
    if fmt == "json":
        print(json.dumps(report.to_json(), indent=2))
        return
    if report.ok:
        print("ok")
    for v in report.violations:
        subject = "" if v.subject is None else f" [{v.subject}]"
        print(f"violation {v.rule}{subject}: {v.message}")


def _write_or_print(text, output):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def cmd_validate(args):
    model = _load_quotient(args)
    report = validate_model(model)
    _print_validation(report, args.format)
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_regions(args):
    ta = load_ta(args.model)
    model = region_quotient(ta, max_classes=_max_classes(args))
    _write_or_print(dumps_model(model), args.output)
    return EXIT_OK


def cmd_estimator(args):
    model = _validated_model(args)
    est = build_estimator(model)
    _write_or_print(dumps_estimator(est), args.output)
    return EXIT_OK


def cmd_check(args):
    model = _validated_model(args)
    progress = check_progressive(model)
    if not progress.progressive:
        if args.format == "json":
            print(
                json.dumps(
                    {
                        "progressive": False,
                        "witness": progress.witness.to_json(),
                        "diagnosable": None,
                    },
                    indent=2,
                )
            )
        else:
            print("not progressive")
            print(progress.witness.pretty())
        return EXIT_NOT_PROGRESSIVE
    est = build_estimator(model)
    verdict = check_diagnosable(est)
    if args.format == "json":
        payload = {"progressive": True, **verdict.to_json()}
        if verdict.diagnosable:
            payload["delay_bound"] = detection_delay_bound(est)
        print(json.dumps(payload, indent=2))
    elif verdict.diagnosable:
        print("diagnosable")
        print(f"detection delay bound: {detection_delay_bound(est)}")
    else:
        print("not diagnosable")
        print(f"prefix: {verdict.witness.prefix.pretty()}")
        print(f"cycle: {verdict.witness.cycle.pretty()}")
    return EXIT_OK if verdict.diagnosable else EXIT_NOT_DIAGNOSABLE


def cmd_synthesize(args):
    model = _validated_model(args)
    diag = synthesize(build_estimator(model))
    _write_or_print(dumps_diagnoser(diag), args.output)
    return EXIT_OK


def _parse_obs(token):
    raw = token[1:] if token.startswith("o") else token
    try:
        return int(raw)
    except ValueError:
        raise ModelFormatError(f"cannot parse observable {token!r}")


def cmd_run(args):
    diag = load_diagnoser(args.diagnoser)
    current = None
    index = 0
    for line in sys.stdin:
        line = line.strip()
        if not line:
            continue
        parts = line.split()
        if index == 0:
            if len(parts) != 2 or parts[0] != "init":
                print(f"expected 'init <obs>', got {line!r}", file=sys.stderr)
                return EXIT_INVALID
            event = ObsEvent.init(_parse_obs(parts[1]))
        else:
            if len(parts) != 2:
                print(f"expected '<action> <obs>', got {line!r}", file=sys.stderr)
                return EXIT_INVALID
            event = ObsEvent.step(parts[0], _parse_obs(parts[1]))
        try:
            current, verdict = step(diag, current, event)
        except NoConsistentExecution as e:
            print(f"inconsistent at event {index}: {e}", file=sys.stderr)
            return EXIT_INCONSISTENT
        print(verdict.pretty(), flush=True)
        index += 1
    return EXIT_OK


def cmd_oracle(args):
    model = _validated_model(args)
    progress = check_progressive(model)
    if not progress.progressive:
        print("not progressive")
        print(progress.witness.pretty())
        return EXIT_NOT_PROGRESSIVE
    verdict = brute_force_diagnosable(model)
    if args.format == "json":
        payload = {"diagnosable": verdict.diagnosable}
        if verdict.counterexample is not None:
            cx = verdict.counterexample
            payload["counterexample"] = {
                "shared": cx.shared.to_json(),
                "left": {"prefix": list(cx.left_prefix), "cycle": list(cx.left_cycle)},
                "right": {"prefix": list(cx.right_prefix), "cycle": list(cx.right_cycle)},
            }
        print(json.dumps(payload, indent=2))
    elif verdict.diagnosable:
        print("diagnosable")
    else:
        cx = verdict.counterexample
        print("not diagnosable")
        print(f"shared prefix: {cx.shared.prefix.pretty()}")
        print(f"shared cycle: {cx.shared.cycle.pretty()}")
        print(f"faulty run: {list(cx.left_prefix)} cycle {list(cx.left_cycle)}")
        print(f"clean run: {list(cx.right_prefix)} cycle {list(cx.right_cycle)}")

    if args.depth:
        est = build_estimator(model)
        mismatches = _utrace_mismatches(model, est, args.depth)
        if args.format != "json":
            if mismatches:
                print(f"estimator disagrees with enumeration: {mismatches[0]}")
            else:
                traces = len(enumerate_utraces(model, args.depth))
                print(f"utrace agreement up to depth {args.depth}: ok ({traces} traces)")
        if mismatches:
            return EXIT_INVALID
    return EXIT_OK if verdict.diagnosable else EXIT_NOT_DIAGNOSABLE


def _utrace_mismatches(model, est, depth):
    expected = enumerate_utraces(model, depth)
    mismatches = []
    for trace, classes in sorted(expected.items(), key=lambda kv: kv[0].pretty()):
        sid = est.initials.get(trace.head)
        for action, obs in trace.steps:
            if sid is None:
                break
            sid = est.transitions.get((sid, action, obs))
        if sid is None or set(est.states[sid].members) != set(classes):
            mismatches.append(trace.pretty())
    return mismatches


def cmd_fuzz(args):
    report = run_fuzz(args.models, args.seed)
    print(
        f"models tested: {report.models}, agreements: {report.agreements}, "
        f"disagreements: {report.models - report.agreements}"
    )
    if report.first_disagreement is not None:
        first = report.first_disagreement
        print(
            f"first disagreement at model {first['index']}: "
            f"estimator={first['estimator']} twin={first['twin']}"
        )
        print(first["model"])
        return EXIT_INVALID
    return EXIT_OK


def _add_model_arg(sub, ta_flag=True):
    sub.add_argument("model", help="quotient model file (JSON)")
    if ta_flag:
        sub.add_argument(
            "--ta",
            action="store_true",
            help="treat the input as a timed-automaton file and build its region quotient",
        )
    sub.add_argument(
        "--max-classes",
        type=int,
        default=None,
        help=f"region explosion guard (default {DEFAULT_MAX_CLASSES}, env HYDIAG_MAX_CLASSES)",
    )


def build_parser():
    parser = _Parser(prog="hydiag", description=__doc__)
    parser.add_argument("--version", action="version", version=f"hydiag {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    p = commands.add_parser("validate", help="check the fault axioms of a model")
    _add_model_arg(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_validate)

    p = commands.add_parser("regions", help="build the region quotient of a timed automaton")
    p.add_argument("model", help="timed-automaton file (JSON)")
    p.add_argument("-o", "--output", default=None, help="output file (default stdout)")
    p.add_argument("--max-classes", type=int, default=None)
    p.set_defaults(func=cmd_regions)

    p = commands.add_parser("estimator", help="build and export the state estimator")
    _add_model_arg(p)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_estimator)

    p = commands.add_parser("check", help="decide time-abstract diagnosability")
    _add_model_arg(p)
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_check)

    p = commands.add_parser("synthesize", help="synthesize the diagnoser Moore machine")
    _add_model_arg(p)
    p.add_argument("-o", "--output", default=None)
    p.set_defaults(func=cmd_synthesize)

    p = commands.add_parser("run", help="run a diagnoser over events from stdin")
    p.add_argument("diagnoser", help="diagnoser file produced by synthesize")
    p.set_defaults(func=cmd_run)

    p = commands.add_parser("oracle", help="brute-force twin-plant verdict")
    _add_model_arg(p)
    p.add_argument(
        "--depth",
        type=int,
        default=4,
        help="also cross-check bounded trace enumeration against the estimator",
    )
    p.add_argument("--format", choices=["text", "json"], default="text")
    p.set_defaults(func=cmd_oracle)

    p = commands.add_parser("fuzz", help="randomized oracle/estimator agreement suite")
    p.add_argument("--models", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_fuzz)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_INVALID
    except (ModelFormatError, TAValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except CapExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CAP
    except NoConsistentExecution as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INCONSISTENT


if __name__ == "__main__":
    sys.exit(main())
