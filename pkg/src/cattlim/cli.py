"""Command line interface.

    cattlim check FILE [--json-derivations PATH] [--print-elaborated]
                       [--strict-asserts] [--timings]
    cattlim cone FILE NAME      synthesize the cone over a named diagram
    cattlim gray FILE NAME      synthesize the Gray tensor with the 1-globe
    cattlim limit FILE NAME     build the universal cone over a named diagram
    cattlim apply FILE RUN RULE... [--as NAME]

Exit status is 0 on success, 1 when a declaration fails to check and 2
when the file does not parse.
"""

import argparse
import json
import sys
import time
from dataclasses import dataclass, field

from . import cones, limits, transfors
from .errors import CattError, ParseError
from .printer import show, show_ctx
from .surface import Outcome, Session, parse


@dataclass
class Report:
    outcomes: list = field(default_factory=list)
    session: object = None

    @property
    def ok(self):
        return all(o.ok for o in self.outcomes)

    def render(self, elaborated=False, timings=False):
        lines = []
        for o in self.outcomes:
            d = o.decl
            head = f"{d.kind} {d.args['rule']} {d.args['run']}" if d.kind == "apply" else f"{d.kind} {d.name}"
            when = f" [{o.seconds * 1000:.1f} ms]" if timings else ""
            if o.ok:
                lines.append(f"ok    {head}{when}")
                if elaborated and o.elaborated:
                    lines.append("      " + o.elaborated)
            else:
                lines.append(f"FAIL  {head} (line {d.line}): {o.error_kind}: {o.message}{when}")
        failed = sum(not o.ok for o in self.outcomes)
        lines.append(f"{len(self.outcomes) - failed} ok, {failed} failed")
        return "\n".join(lines) + "\n"

    def derivations_json(self):
        return [
            {"name": o.decl.name, "kind": o.decl.kind,
             "derivation": o.derivation.to_json() if o.derivation is not None else None}
            for o in self.outcomes if o.ok
        ]


def run(source, derive=False, strict_asserts=False, session=None):
    """Check every declaration of a parsed file; returns a Report."""
    session = session or Session(derive=derive)
    report = Report(session=session)
    for d in source.declarations:
        start = time.perf_counter()
        outcome = _run_one(session, d, strict_asserts)
        outcome.seconds = time.perf_counter() - start
        report.outcomes.append(outcome)
    return report


def _run_one(session, d, strict):
    if d.kind == "assert_fail":
        inner = d.args["decl"]
        want = d.args["kind"]
        if strict and want is None:
            return Outcome(d, False, "strict mode needs an expected error kind", "assert")
        try:
            session.run_decl(inner)
        except CattError as e:
            if want is not None and e.kind != want:
                return Outcome(d, False, f"expected {want}, got {e.kind}: {e.message}", "assert")
            return Outcome(d, True, elaborated=f"rejected as expected: {e.kind}: {e.message}")
        # the declaration went through; undo its binding
        session.env.pop(inner.name, None)
        return Outcome(d, False, "declaration was expected to fail but checked", "assert")
    try:
        text, deriv = session.run_decl(d)
    except CattError as e:
        return Outcome(d, False, e.message, e.kind)
    except (RecursionError, ValueError) as e:
        return Outcome(d, False, str(e), "internal")
    return Outcome(d, True, elaborated=text, derivation=deriv)


def _load(path):
    with open(path, "rb") as fh:
        return parse(fh.read())


def _check(args):
    source = _load(args.file)
    report = run(source, derive=bool(args.json_derivations), strict_asserts=args.strict_asserts)
    sys.stdout.write(report.render(elaborated=args.print_elaborated, timings=args.timings))
    if args.json_derivations:
        with open(args.json_derivations, "w", encoding="utf-8") as fh:
            json.dump(report.derivations_json(), fh, indent=1, ensure_ascii=False)
            fh.write("\n")
    return 0 if report.ok else 1


def _prepared(path):
    report = run(_load(path))
    if not report.ok:
        sys.stdout.write(report.render())
        raise SystemExit(1)
    return report.session


def _diagram(session, name):
    e = session.lookup(name)
    if "ctx" not in e.extra:
        raise CattError(f"{name} is not a context")
    return e.extra["ctx"]


def _cone(args):
    session = _prepared(args.file)
    diagram = _diagram(session, args.name)
    shape = cones.synth_cone_globular(diagram, name="K_" + args.name)
    n = len(diagram)
    segs = (n, 1, n) if n else None
    print(f"cone {shape.name} = {show_ctx(shape.ctx, segs)} over {args.name}")
    return 0


def _gray(args):
    session = _prepared(args.file)
    shape = transfors.synth_gray_1globe(_diagram(session, args.name), name="M_" + args.name)
    print(f"gray {shape.name} = {shape.show()}")
    return 0


def _limit(args):
    session = _prepared(args.file)
    e = session.lookup(args.name)
    if e.kind == "cone":
        cone = e.value
    else:
        cone = cones.synth_cone_globular(_diagram(session, args.name), name=args.name)
    print(limits.build_ucone(cone.diagram, cone).show())
    return 0


def _apply(args):
    session = _prepared(args.file)
    run_ = session.lookup(args.run, "uni").value
    for rule in args.rules:
        out = run_.apply(rule.upper(), fresh_name=args.as_name if rule.upper() == "J3" else None)
        if isinstance(out, tuple):
            print(f"{rule.upper()}: {show(out[0])} : {show(out[1])}")
        else:
            print(f"{rule.upper()}: {out.show()}")
    return 0


def main(argv=None):
    parser = argparse.ArgumentParser(prog="cattlim", description="Check developments of higher categories with lax limits.")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("check", help="check every declaration of a file")
    p.add_argument("file")
    p.add_argument("--json-derivations", metavar="PATH", help="write derivation trees as JSON")
    p.add_argument("--print-elaborated", action="store_true", help="print each elaborated declaration")
    p.add_argument("--strict-asserts", action="store_true", help="require an error kind on every assert_fail")
    p.add_argument("--timings", action="store_true", help="report time per declaration")
    p.set_defaults(func=_check)
    for name, func, help_ in (("cone", _cone, "synthesize the cone over a diagram"),
                              ("gray", _gray, "synthesize the Gray tensor with the 1-globe"),
                              ("limit", _limit, "build the universal cone over a diagram")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("file")
        p.add_argument("name")
        p.set_defaults(func=func)
    p = sub.add_parser("apply", help="apply a universal-property rule after checking a file")
    p.add_argument("file")
    p.add_argument("run")
    p.add_argument("rules", nargs="+", choices=["J1", "J2", "J3", "J4"], metavar="RULE",
                   help="J1, J2, J3 or J4; several rules are applied in order")
    p.add_argument("--as", dest="as_name", help="name of the fresh variable for J3")
    p.set_defaults(func=_apply)
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ParseError as e:
        print(f"{args.file}: parse error: {e.message}", file=sys.stderr)
        return 2
    except CattError as e:
        print(f"error: {e.kind}: {e.message}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
