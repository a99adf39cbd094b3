"""Scenario files: declarative runs of the library operations.

A scenario is a JSON document::

    {
      "space": {"labels": ["H", "T"], "probs": ["1/2", "1/2"]},
      "events": {"heads": ["H"]},
      "partitions": {"faces": [["H"], ["T"]]},
      "variables": {"score": {"H": 1, "T": 0}},
      "steps": [
        {"id": "p", "op": "prob_given", "args": {"event": "heads", "state": "sigma:U"}}
      ]
    }

Numbers may be written as JSON numbers or as fraction strings such as
``"1/3"``. A *state* argument is either the id of an earlier step that
produced a density matrix, or one of ``delta:EVENT``, ``sigma:EVENT`` and
``partition:PARTITION``. The event ``U`` and the partitions ``discrete`` and
``indiscrete`` are predefined unless the file defines them itself. Steps that
produce partitions (``partition_of``, ``restrict_partition``) make their id
usable wherever a partition name is expected.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any, Callable

import numpy as np

from . import density, entropy, measurement, outcomes, qmsets
from .density import DensityMatrix
from .errors import CapExceededError, DomainError, SuperprobError, ValidationError
from .gf2 import to_bits
from .outcomes import OutcomeSpace

DEFAULT_TOLERANCE = 1e-9
SIG_DIGITS = 12


class ScenarioParseError(ValidationError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


class UnresolvedNameError(ValidationError):
    pass


class ScenarioAssertionError(ValidationError):
    pass


class StepFailed(SuperprobError):
    """A library error raised while executing a step."""

    def __init__(self, step_id: str, cause: SuperprobError):
        super().__init__(f"step {step_id!r}: {cause}")
        self.step_id = step_id
        self.cause = cause

    @property
    def is_validation(self) -> bool:
        return isinstance(self.cause, ValidationError)


def parse_number(x) -> float:
    if isinstance(x, bool):
        raise ValidationError(f"expected a number, got {x!r}")
    if isinstance(x, (int, float)):
        return float(x)
    if isinstance(x, str):
        try:
            return float(Fraction(x.strip()))
        except (ValueError, ZeroDivisionError):
            pass
    raise ValidationError(f"expected a number or fraction string, got {x!r}")


# ---------------------------------------------------------------------------
# data model


@dataclass
class Step:
    id: str
    op: str
    args: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {"id": self.id, "op": self.op, "args": self.args}


@dataclass
class ScenarioFile:
    labels: list[str]
    probs: list[Any]
    events: dict[str, list[str]] = field(default_factory=dict)
    partitions: dict[str, list[list[str]]] = field(default_factory=dict)
    variables: dict[str, dict[str, Any]] = field(default_factory=dict)
    steps: list[Step] = field(default_factory=list)
    name: str = ""

    def to_dict(self) -> dict:
        d: dict[str, Any] = {"space": {"labels": self.labels, "probs": self.probs}}
        if self.name:
            d["name"] = self.name
        d["events"] = self.events
        d["partitions"] = self.partitions
        d["variables"] = self.variables
        d["steps"] = [s.to_dict() for s in self.steps]
        return d

    def dumps(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"

    def build_space(self) -> OutcomeSpace:
        return outcomes.make_outcome_space(self.labels, [parse_number(p) for p in self.probs])


def _expect(cond: bool, message: str) -> None:
    if not cond:
        raise ScenarioParseError(message)


def _str_list(x, what: str) -> list[str]:
    _expect(isinstance(x, list) and all(isinstance(s, str) for s in x), f"{what} must be a list of strings")
    return list(x)


def scenario_from_dict(doc: Any) -> ScenarioFile:
    _expect(isinstance(doc, dict), "scenario must be a JSON object")
    unknown = set(doc) - {"name", "space", "events", "partitions", "variables", "steps"}
    _expect(not unknown, f"unknown top-level keys {sorted(unknown)}")
    space = doc.get("space")
    _expect(isinstance(space, dict) and "labels" in space and "probs" in space, "missing space.labels / space.probs")
    labels = _str_list(space["labels"], "space.labels")
    probs = space["probs"]
    _expect(isinstance(probs, list), "space.probs must be a list")

    events = doc.get("events", {})
    _expect(isinstance(events, dict), "events must be an object")
    events = {k: _str_list(v, f"event {k!r}") for k, v in events.items()}

    partitions = doc.get("partitions", {})
    _expect(isinstance(partitions, dict), "partitions must be an object")
    parts = {}
    for k, v in partitions.items():
        _expect(isinstance(v, list), f"partition {k!r} must be a list of blocks")
        parts[k] = [_str_list(b, f"block of partition {k!r}") for b in v]

    variables = doc.get("variables", {})
    _expect(isinstance(variables, dict), "variables must be an object")
    for k, v in variables.items():
        _expect(isinstance(v, dict), f"variable {k!r} must map labels to values")

    raw_steps = doc.get("steps", [])
    _expect(isinstance(raw_steps, list), "steps must be a list")
    steps = []
    for i, s in enumerate(raw_steps):
        _expect(isinstance(s, dict) and "op" in s, f"step #{i + 1} needs an 'op'")
        args = s.get("args", {})
        _expect(isinstance(args, dict), f"step #{i + 1}: args must be an object")
        steps.append(Step(str(s.get("id", f"step{i + 1}")), str(s["op"]), dict(args)))

    name = doc.get("name", "")
    _expect(isinstance(name, str), "name must be a string")
    return ScenarioFile(labels, list(probs), events, parts, dict(variables), steps, name)


def parse_scenario(text: str) -> ScenarioFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(exc.msg, exc.lineno, exc.colno) from None
    sc = scenario_from_dict(doc)
    check_names(sc)
    return sc


def load_scenario(path: str | Path) -> ScenarioFile:
    return parse_scenario(Path(path).read_text(encoding="utf-8"))


def bundled_scenarios() -> list[str]:
    root = resources.files("superprob") / "scenarios"
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def load_bundled(name: str) -> ScenarioFile:
    root = resources.files("superprob") / "scenarios"
    res = root / f"{name}.json"
    if not res.is_file():
        raise UnresolvedNameError(f"no bundled scenario named {name!r}")
    return parse_scenario(res.read_text(encoding="utf-8"))


# ---------------------------------------------------------------------------
# operations

# argument kinds: event, partition, variable, state, states, number, numbers,
# int, bool, step, any
OPS: dict[str, tuple[dict[str, str], str]] = {
    "event_probability": ({"event": "event"}, "scalar"),
    "conditional_probability": ({"event": "event", "given": "event"}, "scalar"),
    "partition_of": ({"variable": "variable"}, "partition"),
    "restrict_partition": ({"partition": "partition", "event": "event"}, "partition"),
    "ket_of_event": ({"event": "event"}, "vector"),
    "rho_delta": ({"event": "event"}, "matrix"),
    "rho_sigma": ({"event": "event"}, "matrix"),
    "rho_partition": ({"partition": "partition"}, "matrix"),
    "mix": ({"weights": "numbers", "states": "states"}, "matrix"),
    "is_pure": ({"state": "state"}, "bool"),
    "validate": ({"state": "state"}, "bool"),
    "projection": ({"event": "event"}, "projector"),
    "prob_given": ({"event": "event", "state": "state"}, "scalar"),
    "project_superposition": ({"event": "event", "target": "event"}, "projected"),
    "luders": ({"state": "state", "partition": "partition"}, "matrix"),
    "measure": ({"state": "state", "variable": "variable"}, "outcomes"),
    "expectation": ({"state": "state", "variable": "variable"}, "scalar"),
    "entropy_distribution": ({"q": "numbers"}, "scalar"),
    "entropy_partition": ({"partition": "partition"}, "scalar"),
    "entropy_density": ({"state": "state"}, "scalar"),
    "entropy_report": ({"state": "state", "partition": "partition"}, "report"),
    "count_bases": ({"n": "int", "ordered?": "bool"}, "int"),
    "enumerate_bases": ({"n": "int"}, "bases"),
    "assert_close": ({"step": "step", "value": "any", "field?": "any"}, "bool"),
}

BUILTIN_EVENTS = ("U",)
BUILTIN_PARTITIONS = ("discrete", "indiscrete")
STATE_PREFIXES = {"delta": "event", "sigma": "event", "partition": "partition"}


def _split_args(spec: dict[str, str]) -> tuple[dict[str, str], dict[str, str]]:
    required = {k: v for k, v in spec.items() if not k.endswith("?")}
    optional = {k[:-1]: v for k, v in spec.items() if k.endswith("?")}
    return required, optional


def check_names(sc: ScenarioFile) -> None:
    """Static check that every op exists and every referenced name resolves."""
    label_set = set(sc.labels)

    def check_labels(labels, what):
        bad = [lab for lab in labels if lab not in label_set]
        if bad:
            raise UnresolvedNameError(f"{what} uses unknown labels {bad}")

    for k, v in sc.events.items():
        check_labels(v, f"event {k!r}")
    for k, blocks in sc.partitions.items():
        for b in blocks:
            check_labels(b, f"partition {k!r}")
    for k, v in sc.variables.items():
        check_labels(v.keys(), f"variable {k!r}")

    events = set(sc.events) | set(BUILTIN_EVENTS)
    partitions = set(sc.partitions) | set(BUILTIN_PARTITIONS)
    states: set[str] = set()
    seen_ids: set[str] = set()

    def resolve(kind: str, value, step: Step, arg: str) -> None:
        def fail(msg):
            raise UnresolvedNameError(f"step {step.id!r}, argument {arg!r}: {msg}")

        if kind in ("event", "partition", "variable", "state", "step"):
            if not isinstance(value, str):
                fail(f"expected a name, got {value!r}")
        if kind == "event" and value not in events:
            fail(f"unknown event {value!r}")
        elif kind == "partition" and value not in partitions:
            fail(f"unknown partition {value!r}")
        elif kind == "variable" and value not in sc.variables:
            fail(f"unknown variable {value!r}")
        elif kind == "step" and value not in seen_ids:
            fail(f"no earlier step {value!r}")
        elif kind == "state":
            prefix, sep, rest = value.partition(":")
            if sep and prefix in STATE_PREFIXES:
                resolve(STATE_PREFIXES[prefix], rest, step, arg)
            elif value not in states:
                fail(f"{value!r} is neither an earlier matrix step nor a delta:/sigma:/partition: spec")
        elif kind == "states":
            if not isinstance(value, list) or not value:
                fail("expected a non-empty list of states")
            for v in value:
                resolve("state", v, step, arg)
        elif kind == "numbers":
            if not isinstance(value, list) or not value:
                fail("expected a non-empty list of numbers")
            for v in value:
                parse_number(v)
        elif kind == "number":
            parse_number(value)
        elif kind == "int":
            if isinstance(value, bool) or not isinstance(value, int):
                fail(f"expected an integer, got {value!r}")
        elif kind == "bool":
            if not isinstance(value, bool):
                fail(f"expected true/false, got {value!r}")

    for step in sc.steps:
        if step.op not in OPS:
            raise UnresolvedNameError(f"step {step.id!r}: unknown operation {step.op!r}")
        if step.id in seen_ids:
            raise UnresolvedNameError(f"duplicate step id {step.id!r}")
        spec, kind = OPS[step.op]
        required, optional = _split_args(spec)
        missing = set(required) - set(step.args)
        extra = set(step.args) - set(required) - set(optional)
        if missing or extra:
            raise UnresolvedNameError(
                f"step {step.id!r} ({step.op}): missing {sorted(missing)}, unexpected {sorted(extra)}"
            )
        for arg, value in step.args.items():
            resolve(required.get(arg) or optional[arg], value, step, arg)
        seen_ids.add(step.id)
        if kind == "matrix":
            states.add(step.id)
        elif kind == "partition":
            partitions.add(step.id)


# ---------------------------------------------------------------------------
# execution


@dataclass
class StepResult:
    id: str
    op: str
    kind: str
    value: Any


@dataclass
class RunReport:
    title: str
    results: list[StepResult] = field(default_factory=list)

    def __getitem__(self, step_id: str) -> StepResult:
        for r in self.results:
            if r.id == step_id:
                return r
        raise KeyError(step_id)

    def to_structured(self) -> dict:
        return {
            "title": self.title,
            "steps": [{"id": r.id, "op": r.op, "kind": r.kind, "result": _structure(r.kind, r.value)} for r in self.results],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_structured(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def render(self) -> str:
        lines = [f"# {self.title}"] if self.title else []
        for r in self.results:
            body = _render(r.kind, r.value)
            if "\n" in body:
                lines.append(f"[{r.id}] {r.op}:")
                lines.extend("    " + ln for ln in body.splitlines())
            else:
                lines.append(f"[{r.id}] {r.op}: {body}")
        return "\n".join(lines) + "\n"


def fmt(x: float) -> str:
    s = f"{x:.{SIG_DIGITS}g}"
    return "0" if s == "-0" else s


def _structure(kind: str, value):
    if kind == "matrix":
        return {"labels": list(value.space.labels), "entries": value.tolist()}
    if kind == "projector":
        return {"labels": list(value.space.labels), "entries": value.entries.tolist()}
    if kind == "vector":
        return {"labels": list(value.space.labels), "amplitudes": value.amplitudes.tolist()}
    if kind == "partition":
        return value.as_label_sets()
    if kind == "outcomes":
        return [
            {"value": o.value, "probability": o.probability, "post_state": _structure("matrix", o.post_state)}
            for o in value
        ]
    if kind == "projected":
        p, rho = value
        return {"probability": p, "post_state": _structure("matrix", rho)}
    if kind == "report":
        return value.as_dict()
    if kind == "bases":
        return [{"name": b.name, "labels": list(b.labels), "vectors": [to_bits(v, b.n) for v in b.vectors]} for b in value]
    if kind == "kettable":
        return value.as_data()
    if kind == "data":
        return {k: _structure(*v) for k, v in value.items()}
    return value


def render_matrix(labels, entries) -> str:
    cells = [[fmt(x) for x in row] for row in entries]
    width = max([len(c) for row in cells for c in row] + [len(lab) for lab in labels])
    lw = max(len(lab) for lab in labels)
    head = " " * lw + "  " + " ".join(lab.rjust(width) for lab in labels)
    body = [lab.ljust(lw) + "  " + " ".join(c.rjust(width) for c in row) for lab, row in zip(labels, cells)]
    return "\n".join([head] + body)


def _render(kind: str, value) -> str:
    if kind == "scalar":
        return fmt(value)
    if kind in ("bool", "int", "text"):
        return str(value).lower() if kind == "bool" else str(value)
    if kind == "matrix":
        return render_matrix(value.space.labels, value.entries)
    if kind == "projector":
        return render_matrix(value.space.labels, value.entries)
    if kind == "vector":
        return "(" + ", ".join(fmt(x) for x in value.amplitudes) + ")"
    if kind == "partition":
        return "{" + ", ".join("{" + ", ".join(b) + "}" for b in value.as_label_sets()) + "}"
    if kind == "outcomes":
        parts = []
        for o in value:
            parts.append(f"value {fmt(o.value)}: probability {fmt(o.probability)}")
            parts.append(render_matrix(o.post_state.space.labels, o.post_state.entries))
        return "\n".join(parts)
    if kind == "projected":
        p, rho = value
        return f"probability {fmt(p)}\n" + render_matrix(rho.space.labels, rho.entries)
    if kind == "report":
        return ", ".join(f"{k} {fmt(v)}" for k, v in value.as_dict().items())
    if kind == "bases":
        return "\n".join(
            f"{b.name}: " + ", ".join(f"{lab}={to_bits(v, b.n)}" for lab, v in zip(b.labels, b.vectors)) for b in value
        )
    if kind == "kettable":
        return value.render()
    if kind == "data":
        out = []
        for k, (sub_kind, sub) in value.items():
            body = _render(sub_kind, sub)
            if "\n" in body:
                out.append(f"{k}:")
                out.extend("  " + ln for ln in body.splitlines())
            else:
                out.append(f"{k}: {body}")
        return "\n".join(out)
    return json.dumps(value)


class _Context:
    def __init__(self, sc: ScenarioFile, tolerance: float):
        self.space = sc.build_space()
        self.tolerance = tolerance
        self.events = {"U": self.space.universe()}
        self.events.update({k: self.space.event(v) for k, v in sc.events.items()})
        self.partitions = {
            "discrete": self.space.discrete_partition(),
            "indiscrete": self.space.indiscrete_partition(),
        }
        self.partitions.update({k: self.space.partition(v) for k, v in sc.partitions.items()})
        self.variables = {k: self.space.variable({lab: parse_number(x) for lab, x in v.items()}) for k, v in sc.variables.items()}
        self.states: dict[str, DensityMatrix] = {}
        self.results: dict[str, StepResult] = {}

    def state(self, ref: str) -> DensityMatrix:
        prefix, sep, rest = ref.partition(":")
        if sep and prefix == "delta":
            return density.rho_delta(self.events[rest])
        if sep and prefix == "sigma":
            return density.rho_sigma(self.events[rest])
        if sep and prefix == "partition":
            return density.rho_partition(self.partitions[rest])
        return self.states[ref]


def _assert_close(ctx: _Context, step_id: str, expected, field_name=None) -> bool:
    res = ctx.results[step_id]
    actual = _structure(res.kind, res.value)
    if field_name is not None:
        for key in str(field_name).split("."):
            actual = actual[int(key)] if isinstance(actual, list) else actual[key]
    if isinstance(actual, dict) and "entries" in actual:
        actual = actual["entries"]
    exp = np.array(_numeric(expected), dtype=float)
    act = np.array(actual, dtype=float)
    if exp.shape != act.shape:
        raise ScenarioAssertionError(f"{step_id}: expected shape {exp.shape}, got {act.shape}")
    err = float(np.max(np.abs(exp - act), initial=0.0))
    if not err <= ctx.tolerance:
        raise ScenarioAssertionError(f"{step_id}: off by {err:.3g} (tolerance {ctx.tolerance:g})")
    return True


def _numeric(x):
    if isinstance(x, list):
        return [_numeric(v) for v in x]
    if isinstance(x, bool):
        return float(x)
    return parse_number(x)


def _execute(ctx: _Context, step: Step):
    a = step.args
    ev = lambda k: ctx.events[a[k]]  # noqa: E731
    part = lambda k: ctx.partitions[a[k]]  # noqa: E731
    var = lambda k: ctx.variables[a[k]]  # noqa: E731
    st = lambda k: ctx.state(a[k])  # noqa: E731
    op = step.op
    table: dict[str, Callable[[], Any]] = {
        "event_probability": lambda: outcomes.event_probability(ev("event")),
        "conditional_probability": lambda: outcomes.conditional_probability(ev("event"), ev("given")),
        "partition_of": lambda: outcomes.partition_of(var("variable")),
        "restrict_partition": lambda: outcomes.restrict_partition(part("partition"), ev("event")),
        "ket_of_event": lambda: density.ket_of_event(ev("event")),
        "rho_delta": lambda: density.rho_delta(ev("event")),
        "rho_sigma": lambda: density.rho_sigma(ev("event")),
        "rho_partition": lambda: density.rho_partition(part("partition")),
        "mix": lambda: density.mix([parse_number(w) for w in a["weights"]], [ctx.state(s) for s in a["states"]]),
        "is_pure": lambda: density.is_pure(st("state")),
        "validate": lambda: (st("state").validate(ctx.tolerance), True)[1],
        "projection": lambda: measurement.projection(ev("event")),
        "prob_given": lambda: measurement.prob_given(ev("event"), st("state")),
        "project_superposition": lambda: measurement.project_superposition(ev("event"), ev("target")),
        "luders": lambda: measurement.luders(st("state"), part("partition")),
        "measure": lambda: measurement.measure(st("state"), var("variable")),
        "expectation": lambda: measurement.expectation(st("state"), var("variable")),
        "entropy_distribution": lambda: entropy.logical_entropy_distribution([parse_number(x) for x in a["q"]]),
        "entropy_partition": lambda: entropy.logical_entropy_partition(part("partition")),
        "entropy_density": lambda: entropy.logical_entropy_density(st("state")),
        "entropy_report": lambda: entropy.measurement_entropy_report(st("state"), part("partition")),
        "count_bases": lambda: qmsets.count_bases(a["n"], a.get("ordered", False)),
        "enumerate_bases": lambda: qmsets.enumerate_bases(a["n"]),
        "assert_close": lambda: _assert_close(ctx, a["step"], a["value"], a.get("field")),
    }
    return table[op]()


def run_scenario(sc: ScenarioFile, tolerance: float = DEFAULT_TOLERANCE) -> RunReport:
    """Execute the steps of ``sc`` in order.

    Library errors raised by a step are wrapped in :class:`StepFailed`.
    """
    check_names(sc)
    ctx = _Context(sc, tolerance)
    report = RunReport(sc.name)
    for step in sc.steps:
        try:
            value = _execute(ctx, step)
        except SuperprobError as exc:
            raise StepFailed(step.id, exc) from exc
        kind = OPS[step.op][1]
        result = StepResult(step.id, step.op, kind, value)
        ctx.results[step.id] = result
        if kind == "matrix":
            ctx.states[step.id] = value
        elif kind == "partition":
            ctx.partitions[step.id] = value
        report.results.append(result)
    return report


# ---------------------------------------------------------------------------
# QM/Sets demonstration


def run_qmsets_demo(n: int) -> RunReport:
    """Basis count, basis list, ket table and (for n = 2) the mixture/superposition contrast."""
    if n < 1:
        raise ValidationError("dimension must be at least 1")
    if n > qmsets.MAX_ENUM_DIM:
        raise CapExceededError(f"the demo is capped at n <= {qmsets.MAX_ENUM_DIM}")
    report = RunReport(f"QM/Sets over Z2^{n}")
    add = lambda i, op, kind, v: report.results.append(StepResult(i, op, kind, v))  # noqa: E731

    add("ordered_bases", "count_bases", "int", qmsets.count_bases(n, ordered=True))
    add("unordered_bases", "count_bases", "int", qmsets.count_bases(n))
    enumerated = qmsets.enumerate_bases(n)
    if len(enumerated) != qmsets.count_bases(n):
        raise DomainError("enumeration disagrees with the counting formula")
    add("bases", "enumerate_bases", "bases", enumerated)

    if n == 2:
        table_bases = list(qmsets.coin_bases())
    elif n == 1:
        table_bases = [qmsets.GF2Basis.standard(1, name="U")]
    else:
        std = qmsets.GF2Basis.standard(n, name="U")
        alt = qmsets.prefix_basis(n, [lab + "'" for lab in std.labels], "U'")
        table_bases = [std, alt]
    add("ket_table", "ket_table", "kettable", qmsets.ket_table(table_bases))

    if n == 2:
        U, U1, _ = table_bases
        sup = qmsets.QState.pure(qmsets.Ket.from_labels(U, ["H", "T"]))
        mixed = qmsets.QState.mixture(
            [(0.5, qmsets.Ket.from_labels(U, ["H"])), (0.5, qmsets.Ket.from_labels(U, ["T"]))]
        )
        coin = outcomes.equiprobable(["H", "T"])
        heads = coin.singleton("H")
        add("conversion_U_to_U'", "conversion_matrix", "data", {
            "matrix": ("text", qmsets.conversion_matrix(U, U1).to_lists()),
        })
        add("same_basis", "prob_given", "data", {
            "Pr(H | delta U)": ("scalar", measurement.prob_given(heads, density.rho_delta(coin.universe()))),
            "Pr(H | sigma U)": ("scalar", measurement.prob_given(heads, density.rho_sigma(coin.universe()))),
        })
        add("cross_basis", "measure_in_basis", "data", {
            "superposition density in U'": ("matrix", qmsets.state_density_in_basis(sup, U, U1)),
            "mixture density in U'": ("matrix", qmsets.state_density_in_basis(mixed, U, U1)),
            "Pr(H' | superposition)": ("scalar", qmsets.measure_in_basis(sup, U, U1, ["H'"])),
            "Pr(H' | mixture)": ("scalar", qmsets.measure_in_basis(mixed, U, U1, ["H'"])),
        })
    return report
