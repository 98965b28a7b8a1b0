"""Command-line front end: ``fnspace sv|norm|hardy|embed|demo``.

Every command reads one JSON document (``--in``, a path or ``-``) and writes a
JSON report or a CSV projection of its row tables (``--out``).  Exit status is
0 on success, 2 on invalid input; ``demo`` exits 1 when the expected verdict
is not reproduced.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass
from typing import Any

from . import embed, hardy
from .hardy import KernelSpec, Weight
from .rearrange import RearrangementProfile, SampledFunction
from .spaces import NormSpec, besov_hypotheses
from .svfunc import (SVExpr, head_integral_Bq, make_bbar, make_btilde, tail_integral_br)

COMMANDS = ("sv", "norm", "hardy", "embed", "demo")
DEMOS = ("strictness", "sharpness", "optimality", "theorem48")
FORMATS = ("json", "csv")
DEFAULT_SEED = 42


class InputError(ValueError):
    """Invalid command input; maps to exit status 2."""


@dataclass
class RunConfig:
    command: str
    input: str = "-"
    output: str = "-"
    format: str = "json"
    seed: int = DEFAULT_SEED
    grid_min: float = hardy.GRID_MIN
    grid_max: float = hardy.GRID_MAX
    grid_points: int = hardy.GRID_POINTS
    demo: str | None = None

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        if self.format not in FORMATS:
            raise InputError(f"unknown format {self.format!r}")
        if self.command == "demo" and self.demo not in DEMOS:
            raise InputError(f"demo must be one of {DEMOS}")
        if not 0 < self.grid_min < self.grid_max or self.grid_points < 0:
            raise InputError("need 0 < grid-min < grid-max and grid-points >= 0")

    def grid(self) -> list[float]:
        if self.grid_points == 0:
            return []
        if self.grid_points == 1:
            return [self.grid_min]
        return [float(x) for x in hardy.log_grid(self.grid_min, self.grid_max, self.grid_points)]


@dataclass
class Result:
    payload: dict
    rows: list  # rows for the CSV projection; first entry is the header
    exit_code: int = 0


# --- parsing helpers -----------------------------------------------------------------


def _check_fields(d: Any, allowed: set, what: str, required: set = frozenset()) -> dict:
    if not isinstance(d, dict):
        raise InputError(f"{what} must be a JSON object")
    extra = set(d) - allowed
    if extra:
        raise InputError(f"unknown {what} fields: {sorted(extra)}")
    missing = set(required) - set(d)
    if missing:
        raise InputError(f"missing {what} fields: {sorted(missing)}")
    return d


def parse_function(d: Any) -> SampledFunction | RearrangementProfile:
    """``{"indicator": [a, b, h]}``, ``{"hat": [c, w, h]}``, ``{"steps": {...}}``,
    ``{"linear": {...}}``, ``{"profile": [...]}`` or ``{"zero": true}``."""
    _check_fields(d, {"indicator", "hat", "steps", "linear", "profile", "zero"}, "function")
    if len(d) != 1:
        raise InputError("a function description has exactly one key")
    (kind, spec), = d.items()
    if kind == "indicator":
        a, b, *h = spec
        return SampledFunction.indicator(float(a), float(b), float(h[0]) if h else 1.0)
    if kind == "hat":
        c, w, *h = spec
        return SampledFunction.hat(float(c), float(w), float(h[0]) if h else 1.0)
    if kind == "steps":
        _check_fields(spec, {"breaks", "values"}, "steps", {"breaks", "values"})
        return SampledFunction.from_steps([float(x) for x in spec["breaks"]],
                                          [float(x) for x in spec["values"]])
    if kind == "linear":
        _check_fields(spec, {"xs", "ys"}, "linear", {"xs", "ys"})
        return SampledFunction.from_linear([float(x) for x in spec["xs"]],
                                           [float(x) for x in spec["ys"]])
    if kind == "profile":
        return RearrangementProfile.from_json(spec)
    return SampledFunction.zero()


def parse_weight(d: Any) -> Weight:
    """``{"gamma": g, "sv": SVExpr?, "sv_power": e, "n": n}`` meaning ``x^g sv(x^{1/n})^e``."""
    _check_fields(d, {"gamma", "sv", "sv_power", "n"}, "weight")
    sv = SVExpr.from_json(d["sv"]) if d.get("sv") is not None else None
    return Weight.power(float(d.get("gamma", 0.0)), sv, float(d.get("sv_power", 1.0)),
                        float(d.get("n", 1.0)))


def _sv_or_none(d: Any) -> SVExpr | None:
    return None if d is None else SVExpr.from_json(d)


# --- output helpers -----------------------------------------------------------------------


def jsonable(x: Any) -> Any:
    """Recursively convert to JSON types; non-finite floats become strings."""
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return x
    if isinstance(x, dict):
        return {str(k): jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [jsonable(v) for v in x]
    if hasattr(x, "to_json"):
        return jsonable(x.to_json())
    if hasattr(x, "item"):  # numpy scalars
        return jsonable(x.item())
    return x


def _fmt(x: Any) -> str:
    if isinstance(x, float):
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        if math.isnan(x):
            return "nan"
        return format(x, ".12g")
    return str(x)


def render(result: Result, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(jsonable(result.payload), sort_keys=True, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    for row in result.rows:
        writer.writerow([_fmt(x) for x in row])
    return buf.getvalue()


def _trace_rows(trace, header=("z", "value")) -> list:
    return [list(header)] + [[float(z), float(v)] for z, v in trace]


def write_output(text: str, path: str) -> None:
    if path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".fnspace-")
    with os.fdopen(fd, "w") as fh:
        fh.write(text)
    os.replace(tmp, path)


def read_input(path: str) -> Any:
    try:
        text = sys.stdin.read() if path == "-" else open(path).read()
    except OSError as exc:
        raise InputError(f"cannot read input: {exc}") from exc
    if not text.strip():
        return {}
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"bad JSON: {exc}") from exc


# --- commands -------------------------------------------------------------------------------


SV_COLUMNS = ("t", "b", "b_r", "B_q", "bbar", "btilde")
SV_PROVENANCE = {"t": "closed-form", "b": "closed-form", "b_r": "quadrature",
                 "B_q": "quadrature", "bbar": "quadrature", "btilde": "quadrature"}


def run_sv(cfg: RunConfig, data: Any) -> Result:
    if isinstance(data, dict) and "b" in data:
        _check_fields(data, {"b", "r", "q", "p", "n"}, "sv input")
        b = SVExpr.from_json(data["b"])
        r, q = float(data.get("r", 1)), float(data.get("q", 2))
        p, n = float(data.get("p", 3)), float(data.get("n", 1))
    else:
        b = SVExpr.from_json(data)
        r, q, p, n = 1.0, 2.0, 3.0, 1.0
    br = tail_integral_br(b, r)
    notes = []
    try:
        bbar = make_bbar(b, r, q)
        bt = make_btilde(b, r, q, p, n)
    except ValueError as exc:
        bbar = bt = None
        notes.append(str(exc))
    rows = []
    for t in cfg.grid():
        rows.append([t, b(t), br(t), head_integral_Bq(b, q, t),
                     bbar(t) if bbar is not None else math.inf,
                     bt(t) if bt is not None else math.inf])
    payload = {"command": "sv", "columns": list(SV_COLUMNS), "rows": rows,
               "params": {"r": r, "q": q, "p": p, "n": n, "b": b.to_json()},
               "notes": notes, "provenance": SV_PROVENANCE}
    return Result(payload, [list(SV_COLUMNS)] + rows)


def run_norm(cfg: RunConfig, data: Any) -> Result:
    _check_fields(data, {"function", "norms"}, "norm input", {"function", "norms"})
    f = parse_function(data["function"])
    results, rows = [], [["kind", "p", "q", "n", "value"]]
    for spec_json in data["norms"]:
        spec = NormSpec.from_json(spec_json)
        notes = []
        if spec.base == "Besov":
            notes = besov_hypotheses(spec.b, spec.q)
        value = spec.evaluate(f)
        results.append({"kind": spec.kind, "p": spec.p, "q": spec.q, "n": spec.n,
                        "value": value, "notes": notes, "provenance": "quadrature"})
        rows.append([spec.kind, spec.p, spec.q, spec.n, value])
    return Result({"command": "norm", "results": results}, rows)


HARDY_CRITERIA = ("heinig_stepanov", "lai_forward", "lai_reverse", "ok_hardy", "sawyer")


def run_hardy(cfg: RunConfig, data: Any) -> Result:
    _check_fields(data, {"criterion", "v", "w", "P", "Q", "q", "r", "kernel"}, "hardy input",
                  {"criterion", "v", "w"})
    crit = data["criterion"]
    if crit not in HARDY_CRITERIA:
        raise InputError(f"criterion must be one of {HARDY_CRITERIA}")
    v, w = parse_weight(data["v"]), parse_weight(data["w"])
    grid = cfg.grid() or None
    if crit == "heinig_stepanov":
        rep = hardy.heinig_stepanov(w, v, float(data.get("q", 1)), float(data.get("r", 1)), grid)
    else:
        P, Q = float(data.get("P", 1)), float(data.get("Q", data.get("P", 1)))
        if crit in ("lai_forward", "lai_reverse"):
            kernel = KernelSpec(parse_weight(data["kernel"])) if "kernel" in data \
                else KernelSpec.identity()
            fn = hardy.lai_forward_condition if crit == "lai_forward" else hardy.lai_reverse_condition
            rep = fn(kernel, v, w, P, Q, grid)
        elif crit == "ok_hardy":
            rep = hardy.ok_hardy_condition(v, w, P, Q, grid)
        else:
            rep = hardy.sawyer_conditions(v, w, P, Q, grid)
    return Result({"command": "hardy", "report": rep}, _trace_rows(rep.trace))


def run_embed(cfg: RunConfig, data: Any) -> Result:
    case = embed.EmbeddingCase.from_json(data)
    rep = embed.analyze(case, cfg.grid() or None)
    payload: dict = {"command": "embed", "report": rep}
    rows = [["quantity", "value"], ["verdict", rep.verdict]]
    if rep.hypothesis_holds and case.q >= case.r:
        opt = embed.optimality_chain(case)
        payload["optimality"] = opt
        rows.append(["optimality_sup", opt.sup])
        if case.n == 1:
            const = embed.empirical_embedding_constant(case, embed.builtin_family(cfg.seed))
            payload["empirical_constant"] = const
            payload["indicator_slope"] = embed.indicator_slope(const)
            rows += [["empirical_max", const.max_ratio], ["empirical_min", const.min_ratio]]
    return Result(payload, rows)


def _default_case(data: Any) -> embed.EmbeddingCase:
    return embed.EmbeddingCase.from_json(data) if data else embed.standard_case()


def run_demo(cfg: RunConfig, data: Any) -> Result:
    name = cfg.demo
    if name == "theorem48":
        data = data or {}
        _check_fields(data, {"theta", "r", "q", "a", "b"}, "theorem48 input")
        b = SVExpr.from_json(data["b"]) if "b" in data else SVExpr.standard()
        reps = embed.theorem48_410_check(float(data.get("theta", 0.0)), float(data.get("r", 1)),
                                         float(data.get("q", 1)), _sv_or_none(data.get("a")), b)
        ok = all(rep.verdict == hardy.FINITE for rep in reps.values())
        rows = [["branch", "z", "value"]]
        for key, rep in reps.items():
            rows += [[key, z, val] for z, val in rep.trace]
        return Result({"command": "demo", "demo": name, "reports": reps,
                       "expected": hardy.FINITE, "reproduced": ok}, rows, 0 if ok else 1)
    case = _default_case(data)
    if name == "strictness":
        rep = embed.strictness_demo(case)
        expected = "equal" if case.q == case.p else embed.UNBOUNDED
        ok = rep.verdict == expected
        return Result({"command": "demo", "demo": name, "case": case, "report": rep,
                       "expected": expected, "reproduced": ok},
                      _trace_rows(rep.trace), 0 if ok else 1)
    if name == "sharpness":
        if case.kappa is None:
            raise InputError("the sharpness demo needs kappa")
        rep = embed.sharpness_probe(case)
        expected = embed.UNBOUNDED if math.isinf(rep.kappa_limit) else embed.BOUNDED
        ok = rep.verdict == expected
        return Result({"command": "demo", "demo": name, "case": case, "report": rep,
                       "expected": expected, "reproduced": ok},
                      _trace_rows(rep.trace, ("t", "value")), 0 if ok else 1)
    rep = embed.optimality_chain(case)
    expected_sup = rep.params["expected"]
    ok = rep.verdict == hardy.FINITE and abs(rep.sup - expected_sup) <= 1e-4 * expected_sup
    return Result({"command": "demo", "demo": name, "case": case, "report": rep,
                   "expected": expected_sup, "reproduced": ok},
                  _trace_rows(rep.trace), 0 if ok else 1)


RUNNERS = {"sv": run_sv, "norm": run_norm, "hardy": run_hardy, "embed": run_embed,
           "demo": run_demo}


def execute(cfg: RunConfig) -> tuple[str, int]:
    """Run a configuration; returns the rendered output and the exit status."""
    data = read_input(cfg.input)
    try:
        result = RUNNERS[cfg.command](cfg, data)
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    return render(result, cfg.format), result.exit_code


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fnspace", description=__doc__.splitlines()[0])
    ap.add_argument("command", choices=COMMANDS)
    ap.add_argument("--in", dest="input", default="-", help="input JSON file or '-' for stdin")
    ap.add_argument("--out", dest="output", default="-", help="output file or '-' for stdout")
    ap.add_argument("--format", choices=FORMATS, default="json")
    ap.add_argument("--seed", type=int, default=DEFAULT_SEED)
    ap.add_argument("--grid-min", type=float, default=hardy.GRID_MIN)
    ap.add_argument("--grid-max", type=float, default=hardy.GRID_MAX)
    ap.add_argument("--grid-points", type=int, default=hardy.GRID_POINTS)
    ap.add_argument("--demo", choices=DEMOS, help="demo name for the demo command")
    return ap


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = RunConfig(args.command, args.input, args.output, args.format, args.seed,
                        args.grid_min, args.grid_max, args.grid_points, args.demo)
        text, code = execute(cfg)
    except InputError as exc:
        print(f"fnspace: error: {exc}", file=sys.stderr)
        return 2
    write_output(text, cfg.output)
    return code


if __name__ == "__main__":
    sys.exit(main())
