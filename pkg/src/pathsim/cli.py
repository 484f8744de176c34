"""Command-line front end.

Exit codes: 0 success, 2 bad input (parse/compile/flag errors), 3 environment
errors (unreadable input, unwritable output).  Flags override statements in
the experiment file.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

from . import __version__
from .angles import format_angle, parse_angle
from .dsl import CompileError, DslError, Experiment, compile_ast, load
from .engine import chsh, joint_probabilities, run_scenario, sample_events, sweep, tally
from .hidden import ambiguity_check, available_remote_phases, make_model, no_signaling_certificate
from .relativity import EVENT_LABELS, L_BS1, boost, find_frames_I1_I2, interval_class, ordering
from .state import canonical_phase

EXIT_OK, EXIT_INPUT, EXIT_ENV = 0, 2, 3
NO_SIGNALING_GRID = 50


class InputError(Exception):
    pass


def _angle(value) -> dict:
    return {"text": format_angle(value), "radians": float(value)}


def _phases(available: dict) -> dict:
    return {k: _angle(v) for k, v in sorted(available.items())}


def _scenario(s) -> dict:
    return {
        "phi1": _angle(s.phi1),
        "phi3": _angle(s.phi3),
        "detect_l": s.detect_l,
        "detect_r": s.detect_r,
    }


def _experiment(path: str) -> Experiment:
    try:
        ast = load(path)
    except (DslError, UnicodeDecodeError) as exc:
        raise InputError(str(exc)) from None
    try:
        return compile_ast(ast)
    except (CompileError, ValueError) as exc:
        raise InputError(f"{path}: {exc}") from None


# --- subcommands: each returns (kind, data, csv rows) ----------------------

def cmd_run(args):
    exp = _experiment(args.file)
    state = canonical_phase(run_scenario(exp.scenario))
    probs = joint_probabilities(state)
    outcomes = [
        {"L": str(l), "R": str(r), "re": z.real + 0.0, "im": z.imag + 0.0, "probability": probs[(l, r)]}
        for (l, r), z in state.amplitudes.items()
    ]
    data = {"scenario": _scenario(exp.scenario), "outcomes": outcomes}
    rows = [["L", "R", "re", "im", "probability"]]
    rows += [[o["L"], o["R"], o["re"], o["im"], o["probability"]] for o in outcomes]
    return "run", data, rows


def cmd_sweep(args):
    exp = _experiment(args.file)
    if exp.sweep is None:
        raise InputError(f"{args.file}: no sweep statement")
    table = sweep(exp.grid, exp.scenario, exp.sweep.name)
    data = {
        "scenario": _scenario(exp.scenario),
        "variable": exp.sweep.name,
        "rows": [{"phi1": float(r.phi1), "phi3": float(r.phi3), "E": r.e} for r in table.rows],
    }
    rows = [["phi1", "phi3", "E"]] + [[r["phi1"], r["phi3"], r["E"]] for r in data["rows"]]
    return "sweep", data, rows


def cmd_sample(args):
    exp = _experiment(args.file)
    seed = args.seed if args.seed is not None else exp.seed
    n = args.samples if args.samples is not None else exp.samples
    if n < 1:
        raise InputError("sampling needs a positive sample count (samples statement or --samples)")
    events = sample_events(exp.scenario, n, seed)
    counts = [rec.as_dict() for rec in tally(events, exp.scenario)]
    data = {"scenario": _scenario(exp.scenario), "samples": n, "counts": counts}
    rows = [["L", "R", "count"]] + [[c["L"], c["R"], c["count"]] for c in counts]
    args.effective_seed = seed
    return "sample", data, rows


def cmd_chsh(args):
    settings = {"a": args.a, "a2": args.a2, "b": args.b, "b2": args.b2}
    s = chsh(args.a, args.a2, args.b, args.b2)
    data = {
        "settings": {k: _angle(v) for k, v in settings.items()},
        "S": s,
        "local_bound": 2.0,
        "quantum_bound": 2 * math.sqrt(2),
    }
    rows = [["quantity", "value"], ["S", s], ["local_bound", 2.0], ["quantum_bound", 2 * math.sqrt(2)]]
    return "chsh", data, rows


def _frame_analysis(exp: Experiment):
    g = exp.geometry
    try:
        f1, f2 = find_frames_I1_I2(g)
    except ValueError as exc:
        raise InputError(str(exc)) from None
    return g, f1, f2


def cmd_frames(args):
    exp = _experiment(args.file)
    g, f1, f2 = _frame_analysis(exp)
    origin = g[L_BS1]
    intervals = []
    for label in EVENT_LABELS[1:]:
        if label in g:
            cls, value = interval_class(origin, g[label])
            intervals.append({"from": L_BS1, "to": label, "class": cls.value, "value": value})
    frames = []
    rows = [["frame", "v", "event", "t", "x", "order_vs_L@BS1"]]
    for name, f in (("I1", f1), ("I2", f2)):
        events = []
        for label in EVENT_LABELS:
            if label not in g:
                continue
            b = boost(g[label], f)
            order = ordering(g[label], origin, f).value
            events.append({"label": label, "t": b.t, "x": b.x, "order_vs_L@BS1": order})
            rows.append([name, f.v, label, b.t, b.x, order])
        available = available_remote_phases(exp.scenario, f, g)
        frames.append({"name": name, "v": f.v, "events": events, "available": _phases(available)})
    data = {"scenario": _scenario(exp.scenario), "intervals": intervals, "frames": frames}
    return "frames", data, rows


def cmd_ambiguity(args):
    exp = _experiment(args.file)
    model, model_name = exp.model, exp.model_name
    if args.model:
        try:
            model, model_name = make_model(args.model), args.model
        except ValueError as exc:
            raise InputError(str(exc)) from None
    g, f1, f2 = _frame_analysis(exp)
    report = ambiguity_check(model, exp.scenario, f1, f2, g, exp.lam, exp.local_setting)
    grid = [2 * math.pi * k / NO_SIGNALING_GRID for k in range(NO_SIGNALING_GRID)]
    holds, dev = no_signaling_certificate(grid, grid)
    data = {
        "scenario": _scenario(exp.scenario),
        "model": {"name": model_name, "spec": model.spec, "lambda": _angle(exp.lam)},
        "frames": {"I1": f1.v, "I2": f2.v},
        "report": {
            "frame1_phases": _phases(report.frame1_phases),
            "frame2_phases": _phases(report.frame2_phases),
            "outcome1": report.outcome1,
            "outcome2": report.outcome2,
            "ambiguous": report.ambiguous,
        },
        "no_signaling": {"holds": holds, "max_deviation": dev, "grid": NO_SIGNALING_GRID},
    }
    rows = [
        ["quantity", "value"],
        ["v_I1", f1.v],
        ["v_I2", f2.v],
        ["outcome_I1", report.outcome1],
        ["outcome_I2", report.outcome2],
        ["ambiguous", report.ambiguous],
        ["no_signaling", holds],
        ["max_marginal_deviation", dev],
    ]
    return "ambiguity", data, rows


# --- rendering --------------------------------------------------------------

def _cell(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def render_csv(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow([_cell(v) for v in row])
    return buf.getvalue()


def render_table(rows, color: bool) -> str:
    cells = [[_cell(v) if not isinstance(v, float) else f"{v:.6g}" for v in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(cells[0]))]
    lines = []
    for k, row in enumerate(cells):
        line = "  ".join(c.rjust(w) for c, w in zip(row, widths))
        if k == 0 and color:
            line = f"\x1b[1m{line}\x1b[0m"
        lines.append(line.rstrip())
    return "\n".join(lines) + "\n"


def render_json(record: dict) -> str:
    return json.dumps(record, indent=2, sort_keys=True) + "\n"


def render_jsonl(data: dict) -> str:
    return "".join(json.dumps(c, sort_keys=True) + "\n" for c in data["counts"])


def _color_enabled(args) -> bool:
    return not os.environ.get("PATHSIM_NO_COLOR") and args.out is None and sys.stdout.isatty()


def _angle_flag(text: str):
    try:
        return parse_angle(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "csv", "json"), default="table")
    common.add_argument("--out", help="write output to this path instead of stdout")
    common.add_argument("--seed", type=int, help="RNG seed (overrides the file)")
    common.add_argument("--samples", type=int, help="number of events (overrides the file)")

    ap = argparse.ArgumentParser(prog="pathsim", description="Two-photon path interferometer simulator.")
    ap.add_argument("--version", action="version", version=f"pathsim {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    for name, fn, help_ in (
        ("run", cmd_run, "joint amplitudes and probabilities"),
        ("sweep", cmd_sweep, "correlation along the file's sweep grid"),
        ("sample", cmd_sample, "seeded detection events"),
        ("frames", cmd_frames, "boost frames and event orderings"),
        ("ambiguity", cmd_ambiguity, "frame dependence of a nonlocal outcome model"),
    ):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.add_argument("file", help="experiment file (.exp)")
        p.set_defaults(func=fn)
        if name == "sample":
            p.add_argument("--jsonl", dest="format", action="store_const", const="jsonl",
                           help="one JSON object per outcome pair")
        if name == "ambiguity":
            p.add_argument("--model", help="model name (overrides the file)")
    p = sub.add_parser("chsh", parents=[common], help="CHSH value for four settings")
    for flag in ("--a", "--a2", "--b", "--b2"):
        p.add_argument(flag, type=_angle_flag, required=True,
                       help="radians or a pi multiple such as pi/4 (use --b=-pi/4 for negatives)")
    p.set_defaults(func=cmd_chsh)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        kind, data, rows = args.func(args)
    except (InputError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ENV

    record = {
        "kind": kind,
        "version": __version__,
        "input": getattr(args, "file", None),
        "seed": getattr(args, "effective_seed", None),
        "data": data,
    }
    if args.format == "json":
        text = render_json(record)
    elif args.format == "jsonl":
        text = render_jsonl(data)
    elif args.format == "csv":
        text = render_csv(rows)
    else:
        text = render_table(rows, _color_enabled(args))

    if args.out is None:
        sys.stdout.write(text)
        return EXIT_OK
    try:
        Path(args.out).write_text(text, encoding="utf-8", newline="\n")
    except OSError as exc:
        print(f"error: cannot write {args.out}: {exc}", file=sys.stderr)
        return EXIT_ENV
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
