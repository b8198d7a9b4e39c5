"""``colimkit`` command-line driver.

Every command reads one document (except ``normalize-word``, which takes
its atoms on the command line) and produces a RunReport.  Exit codes:

    0  success / Equal
    1  sound negative (NotEqualWithinBound, BoundaryMismatch, NoJoin,
       failing cocone or axiom check)
    2  Inconclusive / NotProven
    3  input error
"""

from __future__ import annotations

import argparse
import hashlib
import json
import random
import shlex
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path as FilePath
from typing import Any, Callable, Optional, Sequence

from .category import check_category_axioms, commutative_normalize
from .colimit import check_cocone, colimit, factorize, verify_universal_property
from .cube import cube_mismatches, is_commutative_cube
from .double import eval_grid_boundary, grid_tree, thin_eval
from .dsl import Document, Workspace, parse, resolve, serialize
from .errors import (
    ColimkitError,
    DslSyntaxError,
    NoJoin,
    NonCommutingCocone,
    UnknownCommand,
)
from .outcome import Verdict
from .poset import join_as_colimit_check, poset_join
from .relay import Message, diamond_network, run_relay
from .rewrite import DEFAULT_DEPTH, grids_equal

EXIT_OK, EXIT_NEGATIVE, EXIT_UNKNOWN, EXIT_INPUT = 0, 1, 2, 3


@dataclass(frozen=True)
class Options:
    depth: int = DEFAULT_DEPTH
    word_depth: int = 8
    seed: int = 0
    parts: int = 4


@dataclass
class RunReport:
    command: str
    inputs_digest: str
    outcome: dict[str, Any]
    witnesses: list[dict[str, Any]] = field(default_factory=list)
    exit_code: int = EXIT_OK
    timing: dict[str, float] = field(default_factory=dict)

    def stable(self) -> dict[str, Any]:
        """The part of the report that is identical across runs."""
        return {
            "command": self.command,
            "inputs_digest": self.inputs_digest,
            "outcome": self.outcome,
            "witnesses": self.witnesses,
            "exit_code": self.exit_code,
        }

    def to_json(self) -> str:
        return json.dumps({"report": self.stable(), "timing": self.timing}, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"{self.command}: {self.outcome.get('verdict', '?')} (exit {self.exit_code})"]
        for key, value in sorted(self.outcome.items()):
            if key != "verdict":
                lines.append(f"  {key}: {json.dumps(value, sort_keys=True)}")
        for w in self.witnesses:
            lines.append("  witness: " + json.dumps(w, sort_keys=True))
        return "\n".join(lines)


class InputError(ColimkitError):
    """Bad operands: missing blocks, unknown elements, unreadable files."""


def _digest(command: str, args: Sequence[str], doc: Optional[Document], opts: Options) -> str:
    h = hashlib.sha256()
    payload = {
        "command": command,
        "args": list(args),
        "document": serialize(doc) if doc is not None else None,
        "options": [opts.depth, opts.word_depth, opts.seed, opts.parts],
    }
    h.update(json.dumps(payload, sort_keys=True).encode())
    return h.hexdigest()


def _name(args: Sequence[str], i: int) -> Optional[str]:
    return args[i] if len(args) > i else None


def _pick(table: dict, kind: str, name: Optional[str]):
    if name is not None:
        if name not in table:
            raise InputError(f"no {kind} named {name!r}")
        return name, table[name]
    if len(table) != 1:
        what = "no" if not table else "several"
        raise InputError(f"document has {what} {kind} blocks; name the one to use")
    return next(iter(table.items()))


def _fn(f) -> dict[str, str]:
    return dict(sorted(f.mapping.items()))


def _path_sides(b) -> dict[str, str]:
    return {"top": str(b.top), "bottom": str(b.bottom), "left": str(b.left), "right": str(b.right)}


# -- commands --------------------------------------------------------------------------------
# each returns (outcome, witnesses, exit code)

Result = tuple[dict, list, int]


def cmd_colim(ws: Workspace, args, opts) -> Result:
    name, d = _pick(ws.diagrams, "diagram", _name(args, 0))
    r = colimit(d)
    classes = {cls: [] for cls in sorted(r.apex.elements)}
    for (node, elem), cls in sorted(r.class_map.items()):
        classes[cls].append([node, elem])
    out = {
        "verdict": "Colimit",
        "diagram": name,
        "apex": sorted(r.apex.elements),
        "apex_size": len(r.apex),
        "classes": classes,
        "injections": {n: _fn(f) for n, f in sorted(r.injections.items())},
    }
    return out, [], EXIT_OK


def cmd_check_cocone(ws, args, opts) -> Result:
    name, c = _pick(ws.cocones, "cocone", _name(args, 0))
    rep = check_cocone(c)
    verdict = "Commuting" if rep.ok else "NotCommuting"
    return {"verdict": verdict, "cocone": name, **rep.details}, rep.violations, EXIT_OK if rep.ok else EXIT_NEGATIVE


def cmd_factor(ws, args, opts) -> Result:
    name, c = _pick(ws.cocones, "cocone", _name(args, 0))
    r = colimit(c.diagram)
    try:
        phi = factorize(r, c)
    except NonCommutingCocone as exc:
        return {"verdict": "NotCommuting", "cocone": name, "message": str(exc)}, exc.witnesses, EXIT_NEGATIVE
    return {"verdict": "Factorized", "cocone": name, "phi": _fn(phi)}, [], EXIT_OK


def cmd_verify_universal(ws, args, opts) -> Result:
    name, c = _pick(ws.cocones, "cocone", _name(args, 0))
    try:
        rep = verify_universal_property(c.diagram, c)
    except NonCommutingCocone as exc:
        return {"verdict": "NotCommuting", "cocone": name, "message": str(exc)}, exc.witnesses, EXIT_NEGATIVE
    verdict = "Unique" if rep.ok else "NotUnique"
    return {"verdict": verdict, "cocone": name, **rep.details}, rep.violations, EXIT_OK if rep.ok else EXIT_NEGATIVE


def _element(p, text: str):
    for x in p.carrier:
        if str(x) == text:
            return x
    raise InputError(f"{text!r} is not in the carrier")


def cmd_join(ws, args, opts) -> Result:
    # join [POSET] A B [W]; the poset name may be omitted when there is only one
    if len(args) in (3, 4) and args[0] in ws.posets:
        name, p = _pick(ws.posets, "poset", args[0])
        rest = args[1:]
    else:
        name, p = _pick(ws.posets, "poset", None)
        rest = args
    if len(rest) not in (2, 3):
        raise InputError("join needs two elements and an optional common lower bound")
    a, b = _element(p, rest[0]), _element(p, rest[1])
    out = {"poset": name, "a": str(a), "b": str(b)}
    if len(rest) == 3:
        w = _element(p, rest[2])
        try:
            rep = join_as_colimit_check(p, a, b, w)
        except NoJoin:
            return {**out, "verdict": "NoJoin", "lower_bound": str(w)}, [], EXIT_NEGATIVE
        except ValueError as exc:
            raise InputError(str(exc)) from exc
        details = {k: str(v) if k in ("join", "lower_bound") else v for k, v in rep.details.items()}
        verdict = "Join" if rep.ok else "NotColimit"
        return {**out, "verdict": verdict, **details}, rep.violations, EXIT_OK if rep.ok else EXIT_NEGATIVE
    j = poset_join(p, a, b)
    if j is None:
        return {**out, "verdict": "NoJoin"}, [], EXIT_NEGATIVE
    return {**out, "verdict": "Join", "join": str(j)}, [], EXIT_OK


def cmd_check_axioms(ws, args, opts) -> Result:
    name, t = _pick(ws.tables, "composition table", _name(args, 0))
    rep = check_category_axioms(t)
    verdict = "Category" if rep.ok else "AxiomViolation"
    return {"verdict": verdict, "category": name, **rep.details}, rep.violations, EXIT_OK if rep.ok else EXIT_NEGATIVE


def cmd_normalize_word(atoms: Sequence[str], opts) -> Result:
    if not atoms:
        raise InputError("normalize-word needs at least one atom")
    word = [int(a) if a.isdigit() else a for a in atoms]
    nf = commutative_normalize(word)
    exps = {str(k): v for k, v in nf.atoms}
    return {"verdict": "Normalized", "normal_form": nf.render(), "exponents": exps}, [], EXIT_OK


def cmd_grid_boundary(ws, args, opts) -> Result:
    name, g = _pick(ws.grids, "grid", _name(args, 0))
    pres = ws.presentations[ws.grid_category[name]]
    b = eval_grid_boundary(g, pres, opts.word_depth)
    out = {"verdict": "Boundary", "grid": name, "rows": g.rows, "cols": g.cols, "boundary": _path_sides(b)}
    if g.is_thin:
        out["thin"] = thin_eval(g, pres, opts.word_depth).construction
    return out, [], EXIT_OK


def cmd_grid_equal(ws, args, opts) -> Result:
    if len(args) != 2:
        raise InputError("grid-equal needs two grid names")
    (n1, g1), (n2, g2) = _pick(ws.grids, "grid", args[0]), _pick(ws.grids, "grid", args[1])
    cat = ws.grid_category[n1]
    if ws.grid_category[n2] != cat:
        raise InputError("the two grids are over different categories")
    res = grids_equal(g1, g2, opts.depth, ws.presentations[cat], opts.word_depth)
    out = {"grids": [n1, n2], **res.as_dict()}
    witnesses = []
    if res.verdict is Verdict.BOUNDARY_MISMATCH:
        pres = ws.presentations[cat]
        b1, b2 = eval_grid_boundary(g1, pres, opts.word_depth), eval_grid_boundary(g2, pres, opts.word_depth)
        witnesses = [{"grid": n1, **_path_sides(b1)}, {"grid": n2, **_path_sides(b2)}]
    return out, witnesses, res.verdict.exit_code


def cmd_cube_check(ws, args, opts) -> Result:
    name, c = _pick(ws.cubes, "cube", _name(args, 0))
    pres = ws.presentations[ws.cube_category[name]]
    bad = cube_mismatches(c, pres, opts.word_depth)
    if bad:
        raise InputError(f"cube {name}: faces disagree on edges " + ", ".join(b["edge"] for b in bad))
    res = is_commutative_cube(c, opts.depth, pres, opts.word_depth)
    return {"cube": name, **res.as_dict()}, [], res.verdict.exit_code


def cmd_relay_demo(ws: Optional[Workspace], args, opts) -> Result:
    if ws is not None and ws.messages:
        mname, m = _pick(ws.messages, "message", _name(args, 0))
    else:
        mname, m = "default", Message(tuple("colimits glue parts into wholes"))
    if ws is not None and ws.networks:
        nname, net = _pick(ws.networks, "network", _name(args, 1))
    else:
        nname, net = "diamond", diamond_network()
    rng = random.Random(opts.seed)
    seed_split, seed_route = rng.randrange(2**32), rng.randrange(2**32)
    run = run_relay(m, opts.parts, net, seed_split, seed_route)
    out = {"message": mname, "network": nname, **run.as_dict()}
    ok = run.output == m
    out["verdict"] = "Reassembled" if ok else "Corrupted"
    return out, [], EXIT_OK if ok else EXIT_NEGATIVE


COMMANDS: dict[str, Callable] = {
    "colim": cmd_colim,
    "factor": cmd_factor,
    "check-cocone": cmd_check_cocone,
    "join": cmd_join,
    "check-axioms": cmd_check_axioms,
    "normalize-word": cmd_normalize_word,
    "grid-boundary": cmd_grid_boundary,
    "grid-equal": cmd_grid_equal,
    "cube-check": cmd_cube_check,
    "relay-demo": cmd_relay_demo,
    "verify-universal": cmd_verify_universal,
}


def _error_outcome(exc: Exception) -> dict:
    err = {"type": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, DslSyntaxError):
        err.update(line=exc.line, column=exc.column)
    return {"verdict": "InputError", "error": err}


def execute(command: str, args: Sequence[str], document: Optional[Document], opts: Options = Options()) -> RunReport:
    """Run one command against a parsed document."""
    if command not in COMMANDS:
        raise UnknownCommand(f"unknown command {command!r}; expected one of {', '.join(sorted(COMMANDS))}")
    start = time.perf_counter()
    digest = _digest(command, args, document, opts)
    try:
        if command == "normalize-word":
            outcome, witnesses, code = cmd_normalize_word(args, opts)
        else:
            ws = resolve(document) if document is not None else None
            if ws is None and command != "relay-demo":
                raise InputError(f"{command} needs a document")
            outcome, witnesses, code = COMMANDS[command](ws, args, opts)
    except ColimkitError as exc:
        outcome, witnesses, code = _error_outcome(exc), [], EXIT_INPUT
    elapsed = time.perf_counter() - start
    return RunReport(command, digest, outcome, witnesses, code, {"elapsed_ms": round(elapsed * 1000, 3)})


def run_command(command: str, operands: Sequence[str], opts: Options) -> RunReport:
    """Read the document named by the first operand (if the command takes one) and execute."""
    if command not in COMMANDS:
        digest = _digest(command, operands, None, opts)
        exc = UnknownCommand(f"unknown command {command!r}")
        return RunReport(command, digest, _error_outcome(exc), [], EXIT_INPUT, {"elapsed_ms": 0.0})
    if command == "normalize-word" or (command == "relay-demo" and not operands):
        return execute(command, list(operands), None, opts)
    if not operands:
        return execute(command, [], None, opts)
    path, rest = operands[0], list(operands[1:])
    try:
        text = FilePath(path).read_text(encoding="utf-8")
        doc = parse(text)
    except (OSError, UnicodeDecodeError) as exc:
        err = InputError(f"cannot read {path}: {exc}")
        return RunReport(command, _digest(command, operands, None, opts), _error_outcome(err), [], EXIT_INPUT,
                         {"elapsed_ms": 0.0})
    except ColimkitError as exc:
        return RunReport(command, _digest(command, operands, None, opts), _error_outcome(exc), [], EXIT_INPUT,
                         {"elapsed_ms": 0.0})
    return execute(command, rest, doc, opts)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="colimkit", description="Finite colimits, double-category grids and relay demos.")
    p.add_argument("command", nargs="?", help="one of: " + ", ".join(sorted(COMMANDS)))
    p.add_argument("operands", nargs="*", help="document file, then block names or atoms")
    p.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="equality search depth (default 12)")
    p.add_argument("--word-depth", type=int, default=8, help="path normalization depth (default 8)")
    p.add_argument("--seed", type=int, default=0, help="seed for relay-demo")
    p.add_argument("--parts", type=int, default=4, help="number of parts for relay-demo")
    p.add_argument("--json", action="store_true", help="print machine-readable reports")
    p.add_argument("--batch", metavar="FILE", help="run one command per line of FILE")
    p.add_argument("--jobs", type=int, default=4, help="concurrent commands in batch mode")
    return p


def _emit(report: RunReport, as_json: bool) -> None:
    print(report.to_json() if as_json else report.to_text())


def _batch(path: str, opts: Options, as_json: bool, jobs: int) -> int:
    lines = []
    for raw in FilePath(path).read_text(encoding="utf-8").splitlines():
        raw = raw.strip()
        if raw and not raw.startswith("#"):
            lines.append(shlex.split(raw))
    with ThreadPoolExecutor(max_workers=max(1, jobs)) as pool:
        reports = list(pool.map(lambda words: run_command(words[0], words[1:], opts), lines))
    for r in reports:
        _emit(r, as_json)
    return max((r.exit_code for r in reports), default=EXIT_OK)


def main(argv: Optional[Sequence[str]] = None) -> int:
    ns = build_parser().parse_args(argv)
    opts = Options(ns.depth, ns.word_depth, ns.seed, ns.parts)
    if ns.batch:
        try:
            return _batch(ns.batch, opts, ns.json, ns.jobs)
        except OSError as exc:
            print(f"colimkit: cannot read batch file: {exc}", file=sys.stderr)
            return EXIT_INPUT
    if not ns.command:
        build_parser().print_usage(sys.stderr)
        return EXIT_INPUT
    report = run_command(ns.command, ns.operands, opts)
    _emit(report, ns.json)
    return report.exit_code


if __name__ == "__main__":
    sys.exit(main())
