import pytest

from cattlim import catalog
from cattlim.cones import synth_cone_globular
from cattlim.errors import (
    AlphaPosition, ExtensionError, NotInvertible, ShapeMismatch, StarViolation, WrongZone,
)
from cattlim.kernel import infer_tm
from cattlim.limits import (
    build_ucone, check_extension, derives_invertible, eps, eta, inv, ucone_term, unit_counit_type,
)
from cattlim.printer import show, show_ctx
from cattlim.surface import parse
from cattlim.cli import run
from cattlim.syntax import Inv, Sub, apply_sub, identity

from helpers import CORPUS, G1, corpus_session

GAMMA1 = (CORPUS / "gamma1.catt").read_text()


def test_extension_judgment():
    k = synth_cone_globular(G1).ctx
    assert check_extension(k, G1, "c")
    assert check_extension(k, G1, 3)
    with pytest.raises(ExtensionError):
        check_extension(k, G1, "p_x")
    with pytest.raises(ExtensionError):
        check_extension(G1, G1, "x")


def test_universal_cone_over_arrow():
    cone = synth_cone_globular(G1)
    m = build_ucone(G1, cone)
    assert len(m.sub.terms) == 7
    assert show(m.sub) == "<x, y, f, lim(K), ucone(K, p_x), ucone(K, p_y), ucone(K, p_f)>"
    t, ty = ucone_term(G1, cone, "p_f", identity(G1))
    assert show(ty) == "ucone(K, p_y) -> (ucone(K, p_x) *{1,0} f)"
    assert infer_tm(G1, t).inferred == ty
    with pytest.raises(ShapeMismatch):
        ucone_term(G1, cone, "x", identity(G1))


def test_ucone_over_2_globe():
    g = catalog.globe(2)
    cone = synth_cone_globular(g)
    m = build_ucone(g, cone)
    last = m.sub.terms[-1]
    assert show(infer_tm(g, last).inferred) == \
        "ucone(K, p_g) -> (ucone(K, p_f) *{2,1} (1(ucone(K, p_x)) *{2,0} alpha))"


def test_terminal_object():
    s = corpus_session("terminal.catt")
    bang = s.lookup("bang")
    assert show(bang.extra["type"]) == "c' -> lim(T)"
    run_ = s.lookup("U").value
    assert run_.done and run_.history == [("J3", "c'"), ("J4", "f")]
    assert show_ctx(run_.tracked().target) == "(c : Ob, c' : Ob, f : c' -> c)"
    u2 = s.lookup("U2").value
    assert show(u2.tracked().sub) == "<lim(T), c', f', g', uni(U2, alpha)>"


def test_gamma1_tracked_morphism():
    s = corpus_session("gamma1.catt")
    r = s.lookup("R").value
    assert [rule for rule, _ in r.history] == ["J3"] * 4 + ["J4"] * 4
    assert show_ctx(r.omega) == \
        "(x : Ob, y : Ob, f : x -> y, c' : Ob, r_x' : c' -> x, r_y' : c' -> y, r_f' : r_y' -> (r_x' *{1,0} f))"
    w = s.lookup("W").value
    assert w.ctx.names[w.alpha] == "h"


def star_mutant():
    return GAMMA1.replace("<x, y, f, c', r_x, r_y, r_f, (h *{1,0} p_x),", "<x, y, f, c', r_x, r_y, r_f, r_x,")


def test_star_condition_rejects_mutant():
    report = run(parse(star_mutant()))
    bad = [o for o in report.outcomes if not o.ok]
    assert bad and bad[0].decl.kind == "whisk" and bad[0].error_kind == StarViolation.kind


def test_alpha_inside_hom_globe():
    text = GAMMA1.replace("along K at h via M", "along K at c' via M")
    report = run(parse(text))
    bad = [o for o in report.outcomes if not o.ok]
    assert bad[0].decl.kind == "whisk" and bad[0].error_kind in (AlphaPosition.kind, "dimension")


def test_zones_and_rules():
    s = corpus_session("gamma1.catt")
    r2 = s.lookup("R2").value
    assert [rule for rule, _ in r2.history] == ["J3"] * 4 + ["J1", "J4", "J2"]
    assert r2.zone() == "delta"
    r = s.lookup("R").value
    with pytest.raises(WrongZone):
        r.apply("J3")
    s2 = corpus_session("terminal_setup.catt")
    u = s2.lookup("U").value
    with pytest.raises(WrongZone):
        u.apply("J4")
    with pytest.raises(WrongZone):
        u.apply("J2")
    u.apply("J3")
    with pytest.raises(WrongZone):
        u.apply("J3")
    t, ty = u.apply("J1")
    assert show(ty) == "c' -> lim(T)"
    with pytest.raises(ValueError):
        u.apply("J9")


def test_invertibility():
    s = corpus_session("gamma1.catt")
    u_sx = s.lookup("u_sx").value
    u_h = s.lookup("u_h").value
    om = s.lookup("Om").value
    assert derives_invertible(u_sx) and not derives_invertible(u_h)
    with pytest.raises(NotInvertible):
        inv(u_h)
    e = eta(u_sx, ctx=om)
    i = inv(e, ctx=om)
    ty = infer_tm(om, i).inferred
    assert show(ty) == "(uni(R, s_x) *{2,1} inv(uni(R, s_x))) -> 1(r_x')"
    assert show(unit_counit_type(om, eps(u_sx))) == \
        "(inv(uni(R, s_x)) *{2,1} uni(R, s_x)) -> 1((uni(R, h) *{1,0} ucone(K, p_x)))"


def test_inverse_commutes_with_substitution():
    s = corpus_session("gamma1.catt")
    om = s.lookup("Om").value
    u = s.lookup("u_sx").value
    target = s.read_ctx("G1 + (e : Ob, a : e -> x)")
    terms = ["x", "y", "f", "e", "a", "(a *{1,0} f)", "1((a *{1,0} f))"]
    delta = Sub(tuple(s.read_term(target, t) for t in terms), om)
    left = apply_sub(inv(u), delta)
    right = inv(u, gamma=delta)
    assert left == right == Inv(apply_sub(u, delta))
    assert infer_tm(target, left).inferred == apply_sub(infer_tm(om, inv(u)).inferred, delta)
