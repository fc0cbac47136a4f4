"""Command-line entry point.

Exit codes: 0 all checks pass, 1 a violation was found, 2 input error,
3 nothing failed but something was inconclusive.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile

from . import __version__, axioms
from .axioms import FAIL, INCONCLUSIVE, CheckReport
from .documents import DocumentError, ModelDocument, builtin, builtin_names, load
from .groupmodel import BallTooLarge
from .lexgroup import InputError, parse_vec
from .splitting import build_hierarchy
from .treekit import TreeRefused, build_coset_tree

EXIT_PASS, EXIT_FAIL, EXIT_INPUT, EXIT_INCONCLUSIVE = 0, 1, 2, 3

CHECK_NAMES = ["length-axioms", "hyperbolicity", "regularity", "power-height",
               "positivity", "isolated-level", "properness", "projected"]


def write_output(text: str, path: str | None) -> None:
    """Write atomically to ``path`` (rename over the target), or to stdout."""
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".znlength-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def exit_code(reports: list[CheckReport]) -> int:
    if any(r.verdict == FAIL for r in reports):
        return EXIT_FAIL
    if any(r.verdict == INCONCLUSIVE for r in reports):
        return EXIT_INCONCLUSIVE
    return EXIT_PASS


def _radius(args, doc: ModelDocument, default: int) -> int:
    if args.radius is not None:
        return args.radius
    return doc.radius if doc.radius is not None else default


def _cap(args, doc: ModelDocument) -> int:
    return args.cap if args.cap is not None else doc.element_cap


def run_checks(doc: ModelDocument, r: int, which: list[str], max_exp: int, cap: int,
               level: int | None = None, delta=None) -> list[CheckReport]:
    lf = doc.length
    n = lf.arity
    levels = [level] if level is not None else list(range(1, n))
    out = []
    hyp = None
    for name in which:
        if name == "length-axioms":
            out.append(axioms.check_length_axioms(lf, r, cap=cap))
        elif name == "hyperbolicity":
            hyp = axioms.hyperbolicity_defect(lf, r, cap=cap)
            out.append(hyp)
        elif name == "regularity":
            d = delta
            if d is None:
                hyp = hyp or axioms.hyperbolicity_defect(lf, r, cap=cap)
                d = hyp.constants.get("delta")
            out.append(axioms.check_regularity(lf, r, d, cap=cap))
        elif name == "power-height":
            out.append(axioms.check_power_height(lf, r, max_exp, cap=cap))
        elif name == "positivity":
            out.append(axioms.check_positivity(lf, r, cap=cap))
        elif name == "isolated-level":
            for k in levels:
                out.append(axioms.check_isolated_level(lf, r, k, max_exp, cap=cap))
        elif name == "properness":
            out.append(axioms.check_properness(lf, r, level or 1, cap=cap))
        elif name == "projected":
            for k in levels:
                out.append(axioms.hyperbolicity_defect(lf, r, level=k, cap=cap))
    return out


def _check_levels(doc: ModelDocument, level: int | None) -> None:
    if level is not None and not 1 <= level < doc.arity:
        raise InputError(f"--level must satisfy 1 <= k < n = {doc.arity}, got {level}")


def cmd_check(args) -> int:
    doc = load(args.model)
    r = _radius(args, doc, 3)
    which = args.checks.split(",") if args.checks else [c for c in CHECK_NAMES if c != "projected"]
    unknown = [c for c in which if c not in CHECK_NAMES]
    if unknown:
        raise InputError(f"unknown checks {unknown}; known: {', '.join(CHECK_NAMES)}")
    _check_levels(doc, args.level)
    delta = parse_vec(args.delta) if args.delta else None
    reports = run_checks(doc, r, which, args.max_exp, _cap(args, doc), args.level, delta)
    code = exit_code(reports)
    m = doc.model
    if args.format == "json":
        text = json.dumps({"model": doc.name, "radius": r, "exit_code": code,
                           "reports": [rep.to_dict(m) for rep in reports]},
                          indent=2, ensure_ascii=False) + "\n"
    else:
        body = "\n".join(rep.to_text(m) for rep in reports)
        text = f"checks for {doc.name} (n = {doc.arity}, radius {r})\n{body}\nexit code {code}\n"
    write_output(text, args.out)
    return code


def cmd_tree(args) -> int:
    doc = load(args.model)
    level = args.level if args.level is not None else 1
    if not 1 <= level < doc.arity:
        raise InputError(f"--level must satisfy 1 <= k < n = {doc.arity}, got {level}")
    r = _radius(args, doc, 2)
    try:
        ball = doc.model.enumerate_ball(r, _cap(args, doc))
    except BallTooLarge as exc:
        sys.stderr.write(f"{exc}\n")
        return EXIT_INCONCLUSIVE
    try:
        tree = build_coset_tree(doc.length, ball, level)
    except TreeRefused as exc:
        m = doc.model
        wit = ", ".join(f"{k}={m.format_word(v) if isinstance(v, tuple) else v}"
                        for k, v in exc.witness.items())
        sys.stderr.write(f"tree refused: {exc} ({wit})\n")
        return EXIT_FAIL
    fmt = args.format or "dot"
    text = {"dot": tree.to_dot, "json": tree.to_json, "text": tree.to_text}[fmt]()
    write_output(text, args.out)
    return EXIT_PASS


def cmd_hierarchy(args) -> int:
    doc = load(args.model)
    r = _radius(args, doc, 3)
    report = build_hierarchy(doc.length, r, args.max_exp, _cap(args, doc), name=doc.name)
    fmt = args.format or "text"
    if fmt == "dot":
        raise InputError("hierarchy reports are text or json")
    text = report.to_json() if fmt == "json" else report.to_text()
    write_output(text, args.out)
    if report.failed:
        return EXIT_FAIL
    return EXIT_INCONCLUSIVE if report.inconclusive else EXIT_PASS


def cmd_trend(args) -> int:
    family = [(m, builtin(f"F{m}-{args.family}").length) for m in range(1, args.max_rank + 1)]
    rep = axioms.properness_trend(family, args.radius if args.radius is not None else 2, args.k,
                                  cap=args.cap if args.cap is not None else axioms.DEFAULT_BALL_CAP)
    if args.format == "json":
        text = json.dumps(rep.to_dict(family[0][1].model), indent=2) + "\n"
    else:
        text = rep.to_text(family[0][1].model) + "\n"
    write_output(text, args.out)
    return exit_code([rep])


def cmd_document(args) -> int:
    doc = load(args.model)
    write_output(doc.to_json(), args.out)
    return EXIT_PASS


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="znlength", description="Z^n-valued length functions on word balls")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, formats, default_format):
        sp.add_argument("--model", required=True, help="path to a JSON document or builtin:NAME")
        sp.add_argument("--radius", type=int, help="word-ball radius")
        sp.add_argument("--cap", type=int, help="ball size cap")
        sp.add_argument("--format", choices=formats, default=default_format)
        sp.add_argument("--out", help="output file (written atomically); default stdout")
        sp.add_argument("--seed", type=int, default=0,
                        help="accepted for sampled sub-checks; every current scan is exhaustive")

    c = sub.add_parser("check", help="verify the length-function hypotheses on a ball")
    common(c, ["text", "json"], "text")
    c.add_argument("--max-exp", type=int, default=axioms.DEFAULT_MAX_EXP)
    c.add_argument("--level", type=int, help="height level for level-specific checks")
    c.add_argument("--checks", help=f"comma-separated subset of: {', '.join(CHECK_NAMES)}")
    c.add_argument("--delta", help="delta for the regularity check, e.g. \"(0,0)\"")
    c.set_defaults(func=cmd_check)

    t = sub.add_parser("tree", help="export the coset tree at one level")
    common(t, ["dot", "json", "text"], "dot")
    t.add_argument("--level", type=int)
    t.set_defaults(func=cmd_tree)

    h = sub.add_parser("hierarchy", help="extract the HNN series and write the report")
    common(h, ["text", "json"], "text")
    h.add_argument("--max-exp", type=int, default=axioms.DEFAULT_MAX_EXP)
    h.set_defaults(func=cmd_hierarchy)

    tr = sub.add_parser("trend", help="properness trend across free groups of growing rank")
    tr.add_argument("--family", choices=["uniform", "weighted"], default="uniform")
    tr.add_argument("--max-rank", type=int, default=4)
    tr.add_argument("--radius", type=int)
    tr.add_argument("--k", type=int, default=1)
    tr.add_argument("--cap", type=int)
    tr.add_argument("--format", choices=["text", "json"], default="text")
    tr.add_argument("--out")
    tr.set_defaults(func=cmd_trend)

    d = sub.add_parser("document", help=f"print a model document (builtins: {', '.join(builtin_names())})")
    d.add_argument("--model", required=True)
    d.add_argument("--out")
    d.set_defaults(func=cmd_document)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DocumentError as exc:
        sys.stderr.write(f"input error at {exc}\n")
        return EXIT_INPUT
    except (InputError, ValueError) as exc:
        sys.stderr.write(f"input error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
