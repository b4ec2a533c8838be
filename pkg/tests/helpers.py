"""Small builders shared by the tests."""

from pathlib import Path

from cattlim.cli import run
from cattlim.surface import parse
from cattlim.syntax import OBJ, Arr, Ctx, Var

CORPUS = Path(__file__).parent.parent / "src" / "cattlim" / "corpus"


def ctx(*entries):
    """ctx(("x", "Ob"), ("f", ("x", "y"))) with arrows between variables only."""
    out = Ctx((), ())
    for name, spec in entries:
        if spec == "Ob":
            out = out.extend(name, OBJ)
        else:
            s, t = out.index(spec[0]), out.index(spec[1])
            out = out.extend(name, Arr(out.types[s], Var(s, spec[0]), Var(t, spec[1])))
    return out


G1 = ctx(("x", "Ob"), ("y", "Ob"), ("f", ("x", "y")))


def session_for(text):
    """Run source text and return the session; every declaration must pass."""
    report = run(parse(text))
    assert report.ok, report.render()
    return report.session


def corpus_session(name):
    return session_for((CORPUS / name).read_bytes())
