"""Command-line front end.

Exit codes: 0 success, 1 validation error, 2 runtime/domain error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import qmsets
from .errors import SuperprobError, ValidationError
from .gf2 import from_bits, to_bits
from .scenario import (
    DEFAULT_TOLERANCE,
    RunReport,
    ScenarioFile,
    Step,
    StepFailed,
    StepResult,
    bundled_scenarios,
    check_names,
    load_bundled,
    load_scenario,
    parse_number,
    run_qmsets_demo,
    run_scenario,
)

EXIT_OK, EXIT_VALIDATION, EXIT_DOMAIN = 0, 1, 2


def _load(ref: str) -> ScenarioFile:
    path = Path(ref)
    if path.exists():
        return load_scenario(path)
    if ref in bundled_scenarios():
        return load_bundled(ref)
    raise ValidationError(f"no scenario file or bundled scenario named {ref!r}")


def _single_step(args, op: str, **step_args) -> RunReport:
    sc = _load(args.file)
    sc.steps = [Step(op, op, {k: v for k, v in step_args.items() if v is not None})]
    return run_scenario(sc, args.tolerance)


def _parse_basis(text: str, labels: str | None, name: str) -> qmsets.GF2Basis:
    vectors = [from_bits(s) for s in text.split(",")]
    n = len(text.split(",")[0].strip())
    if any(len(s.strip()) != n for s in text.split(",")):
        raise ValidationError(f"basis vectors {text!r} have different lengths")
    if len(vectors) != n:
        raise ValidationError(f"a basis of Z2^{n} needs {n} vectors, got {len(vectors)}")
    return qmsets.GF2Basis(tuple(vectors), tuple(labels.split(",")) if labels else (), name)


def _parse_state(text: str, basis: qmsets.GF2Basis) -> qmsets.QState:
    """``bits`` for a pure ket or ``w:bits,w:bits,...`` for a mixture (coordinates in ``basis``)."""
    parts = []
    for item in text.split(","):
        w, sep, bits = item.rpartition(":")
        if len(bits.strip()) != basis.n:
            raise ValidationError(f"ket {bits!r} does not have {basis.n} coordinates")
        parts.append((parse_number(w) if sep else 1.0, qmsets.Ket.from_coords(basis, from_bits(bits))))
    return qmsets.QState.mixture(parts)


def cmd_space_validate(args) -> RunReport:
    sc = _load(args.file)
    space = sc.build_space()
    check_names(sc)
    # build every declared object so label/partition errors surface here
    for v in sc.events.values():
        space.event(v)
    for blocks in sc.partitions.values():
        space.partition(blocks)
    report = RunReport(sc.name)
    report.results.append(StepResult("space", "validate", "text", f"{space.n} outcomes: " + ", ".join(space.labels)))
    report.results.append(StepResult("probs", "validate", "text", list(space.probs)))
    return report


def cmd_density(args) -> RunReport:
    if args.kind == "partition":
        if not args.partition:
            raise ValidationError("density partition needs --partition")
        return _single_step(args, "rho_partition", partition=args.partition)
    if not args.event:
        raise ValidationError(f"density {args.kind} needs --event")
    return _single_step(args, f"rho_{args.kind}", event=args.event)


def cmd_measure(args) -> RunReport:
    if args.kind == "prob":
        return _single_step(args, "prob_given", event=_need(args, "event"), state=args.state)
    if args.kind == "luders":
        return _single_step(args, "luders", state=args.state, partition=_need(args, "partition"))
    if args.kind == "outcomes":
        return _single_step(args, "measure", state=args.state, variable=_need(args, "variable"))
    return _single_step(args, "expectation", state=args.state, variable=_need(args, "variable"))


def cmd_entropy(args) -> RunReport:
    if args.kind == "report":
        return _single_step(args, "entropy_report", state=args.state, partition=_need(args, "partition"))
    if args.kind == "partition":
        return _single_step(args, "entropy_partition", partition=_need(args, "partition"))
    return _single_step(args, "entropy_density", state=args.state)


def _need(args, name: str) -> str:
    value = getattr(args, name)
    if not value:
        raise ValidationError(f"--{name} is required here")
    return value


def cmd_qmsets(args) -> RunReport:
    report = RunReport("")
    add = lambda i, kind, v: report.results.append(StepResult(i, args.kind, kind, v))  # noqa: E731
    if args.kind == "count":
        add("count", "int", qmsets.count_bases(args.n, ordered=args.ordered))
    elif args.kind == "enumerate":
        add("bases", "bases", qmsets.enumerate_bases(args.n))
    elif args.kind == "kettable":
        if args.bases:
            bases = [_parse_basis(b, None, f"B{i}") for i, b in enumerate(args.bases)]
        elif args.n == 2:
            bases = list(qmsets.coin_bases())
        elif args.n == 1:
            bases = [qmsets.GF2Basis.standard(1, name="U")]
        else:
            bases = qmsets.enumerate_bases(args.n)
        add("ket_table", "kettable", qmsets.ket_table(bases))
    elif args.kind == "demo":
        return run_qmsets_demo(args.n)
    else:
        src = _parse_basis(args.src, args.src_labels, "from")
        dst = _parse_basis(args.dst, args.dst_labels, "to")
        if args.kind == "convert":
            C = qmsets.conversion_matrix(src, dst)
            add("conversion_matrix", "text", C.to_lists())
            if args.coords:
                add("coords", "text", to_bits(qmsets.convert_ket(from_bits(args.coords), C), dst.n))
        else:
            state = _parse_state(args.state, src)
            target = _need(args, "target")
            add("density", "matrix", qmsets.state_density_in_basis(state, src, dst))
            add("probability", "scalar", qmsets.measure_in_basis(state, src, dst, target.split(",")))
    return report


def cmd_scenario(args) -> RunReport:
    if args.kind == "list":
        report = RunReport("bundled scenarios")
        for name in bundled_scenarios():
            report.results.append(StepResult(name, "scenario", "text", load_bundled(name).name))
        return report
    if not args.file:
        raise ValidationError("scenario run needs a file or bundled scenario name")
    return run_scenario(_load(args.file), args.tolerance)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "structured"), default="text")
    common.add_argument(
        "--tolerance", type=float, default=DEFAULT_TOLERANCE,
        help="tolerance for validation assertions (never changes computed values)",
    )
    state_help = "density matrix: delta:EVENT, sigma:EVENT or partition:PARTITION"

    parser = argparse.ArgumentParser(prog="superprob", description="Finite probability with superposition events.")
    groups = parser.add_subparsers(dest="group", required=True)

    p = groups.add_parser("space", help="outcome spaces").add_subparsers(dest="kind", required=True)
    sp = p.add_parser("validate", parents=[common], help="validate a scenario file's space and declarations")
    sp.add_argument("file")
    sp.set_defaults(func=cmd_space_validate)

    p = groups.add_parser("density", parents=[common], help="build density matrices")
    p.add_argument("kind", choices=("delta", "sigma", "partition"))
    p.add_argument("file")
    p.add_argument("--event")
    p.add_argument("--partition")
    p.set_defaults(func=cmd_density)

    p = groups.add_parser("measure", parents=[common], help="trace-rule probabilities and Lüders mixtures")
    p.add_argument("kind", choices=("prob", "luders", "expect", "outcomes"))
    p.add_argument("file")
    p.add_argument("--state", required=True, help=state_help)
    p.add_argument("--event")
    p.add_argument("--partition")
    p.add_argument("--variable")
    p.set_defaults(func=cmd_measure)

    p = groups.add_parser("entropy", parents=[common], help="logical entropy")
    p.add_argument("kind", choices=("report", "partition", "density"))
    p.add_argument("file")
    p.add_argument("--state", default="sigma:U", help=state_help)
    p.add_argument("--partition")
    p.set_defaults(func=cmd_entropy)

    p = groups.add_parser("qmsets", parents=[common], help="Z2^n bases, kets and cross-basis measurement")
    p.add_argument("kind", choices=("count", "enumerate", "kettable", "convert", "measure", "demo"))
    p.add_argument("n", type=int, nargs="?", default=2)
    p.add_argument("--ordered", action="store_true")
    p.add_argument("--bases", nargs="+", help="bases for kettable, each as comma-separated bit strings")
    p.add_argument("--from", dest="src", default=None, help="source basis, e.g. 10,01")
    p.add_argument("--to", dest="dst", default=None, help="target basis, e.g. 11,01")
    p.add_argument("--from-labels", dest="src_labels")
    p.add_argument("--to-labels", dest="dst_labels")
    p.add_argument("--coords", help="ket coordinates in the source basis, e.g. 11")
    p.add_argument("--state", help="pure ket BITS or mixture W:BITS,W:BITS in source coordinates")
    p.add_argument("--target", help="comma-separated labels of the target basis")
    p.set_defaults(func=cmd_qmsets)

    p = groups.add_parser("scenario", parents=[common], help="run scenario files")
    p.add_argument("kind", choices=("run", "list"))
    p.add_argument("file", nargs="?")
    p.set_defaults(func=cmd_scenario)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.group == "qmsets" and args.kind in ("convert", "measure"):
        if not (args.src and args.dst):
            parser.error("qmsets convert/measure need --from and --to")
        if args.kind == "measure" and not args.state:
            parser.error("qmsets measure needs --state")
    fmt = getattr(args, "format", "text")
    try:
        report = args.func(args)
    except StepFailed as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION if exc.is_validation else EXIT_DOMAIN
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except SuperprobError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if fmt == "structured":
        sys.stdout.write(report.dumps())
    else:
        sys.stdout.write(report.render())
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
