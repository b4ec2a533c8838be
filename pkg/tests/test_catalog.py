import pytest

from cattlim import catalog
from cattlim.cones import synth_cone_globular
from cattlim.errors import DimensionError, NotComposable
from cattlim.kernel import check_ctx, infer_tm
from cattlim.pasting import check_ps
from cattlim.printer import show, show_ctx
from cattlim.syntax import OBJ, Arr, Ctx, Sub, Var, apply_sub, dim_ty

from helpers import G1


def test_globes():
    assert show_ctx(catalog.globe(0)) == "(x : Ob)"
    assert catalog.globe(1) == G1
    g3 = catalog.globe(3)
    assert len(g3) == 7
    assert [s.rule for s in check_ps(g3).trace] == ["PSS"] + ["PSE"] * 3 + ["PSD"] * 3 + ["PS"]
    with pytest.raises(DimensionError):
        catalog.globe(-1)


def test_vertical_scheme_matches_the_display():
    o21 = catalog.comp_scheme(2, 1, names="x y f g alpha h beta".split())
    assert show_ctx(o21) == \
        "(x : Ob, y : Ob, f : x -> y, g : x -> y, alpha : f -> g, h : x -> y, beta : g -> h)"


def test_horizontal_scheme():
    o20 = catalog.comp_scheme(2, 0, names="x y f f' alpha z g g' beta".split())
    assert show_ctx(o20) == ("(x : Ob, y : Ob, f : x -> y, f' : x -> y, alpha : f -> f', "
                             "z : Ob, g : y -> z, g' : y -> z, beta : g -> g')")


def test_scheme_3_1_boundaries_are_vertical_schemes():
    from cattlim.pasting import source, target
    o31 = catalog.comp_scheme(3, 1)
    assert source(o31) == catalog.comp_scheme(2, 1)
    assert target(o31) == catalog.comp_scheme(2, 1)


def test_composites():
    o10 = catalog.comp_scheme(1, 0)
    t = catalog.comp_term(Var(2), Var(4), 1, 0, o10)
    assert show(infer_tm(o10, t).inferred) == "x -> " + o10.names[3]
    with pytest.raises(NotComposable):
        catalog.comp_term(Var(4), Var(2), 1, 0, o10)
    with pytest.raises(DimensionError):
        catalog.comp_term(Var(2), Var(4), 1, 1, o10)


def test_whisker_in_cone():
    cone = synth_cone_globular(catalog.globe(2))
    k = cone.ctx
    w = catalog.comp_term(catalog.iterated_identity(k.var(k.index("p_x")), 1, k), k.var(4), 2, 0, k)
    assert show(w) == "(1(p_x) *{2,0} alpha)"
    assert show(infer_tm(k, w).inferred) == "(p_x *{1,0} f) -> (p_x *{1,0} g)"


def test_iterated_identities():
    assert catalog.iterated_identity(Var(0), 0, G1) == Var(0)
    i1 = catalog.iterated_identity(Var(0, "x"), 1, G1)
    assert show(infer_tm(G1, i1).inferred) == "x -> x"
    i2 = catalog.iterated_identity(Var(0, "x"), 2, G1)
    assert show(i2) == "1^2(x)"
    assert show(infer_tm(G1, i2).inferred) == "1(x) -> 1(x)"


def test_hom_globes():
    amb = catalog.globe(0).extend("c'", OBJ)
    assert show_ctx(catalog.hom_globe(amb, 1, 0, 1).prefix(3)) == "(x : Ob, c' : Ob, f : c' -> x)"
    h2 = catalog.hom_globe(amb, 1, 0, 2)
    assert show_ctx(h2)[len("(x : Ob, c' : Ob, "):] == "f : c' -> x, g : c' -> x, alpha : f -> g)"
    h3 = catalog.hom_globe(amb, 1, 0, 3)
    assert len(h3) == len(amb) + 5 and dim_ty(h3.types[-1]) == 3
    check_ctx(h3)


def test_composite_commutes_with_substitution():
    o21 = catalog.comp_scheme(2, 1)
    t = catalog.comp_term(Var(4), Var(6), 2, 1, o21)
    # send everything into the globe on f, collapsing both cells to identities
    g1 = G1
    i = catalog.iterated_identity(Var(2, "f"), 1, g1)
    delta = Sub((Var(0), Var(1), Var(2), Var(2), i, Var(2), i), o21)
    left = apply_sub(t, delta)
    right = catalog.comp_term(i, i, 2, 1, g1)
    assert left == right


@pytest.mark.parametrize("d", range(5))
def test_catalog_contexts_check(d):
    check_ps(catalog.globe(d))
    for n in range(d):
        check_ps(catalog.comp_scheme(d, n))


def test_classify():
    o21 = catalog.comp_scheme(2, 1)
    assert catalog.classify(catalog.comp_term(Var(4), Var(6), 2, 1, o21)) == ("comp", 2, 1)
    assert catalog.classify(catalog.iterated_identity(Var(2), 2, G1)) == ("id", 1, 2)


def from_rule_word(word):
    """Build a ps-context by running PSE/PSD moves, independently of the catalog."""
    types, focus = [OBJ], 0
    for move in word:
        if move == "PSE":
            a = types[focus]
            y = len(types)
            types += [a, Arr(a, Var(focus), Var(y))]
            focus = y + 1
        else:
            focus = types[focus].tgt.index
    return Ctx(tuple(types), tuple(f"v{i}" for i in range(len(types))))


def scheme_word(d, n):
    return ["PSE"] * d + ["PSD"] * (d - n) + ["PSE"] * (d - n)


@pytest.mark.parametrize("d,n", [(d, n) for d in range(1, 5) for n in range(d)])
def test_schemes_follow_their_rule_word(d, n):
    assert catalog.comp_scheme(d, n) == from_rule_word(scheme_word(d, n))


@pytest.mark.parametrize("d,n", [(d, n) for d in range(1, 5) for n in range(d)])
def test_boundary_equations(d, n):
    from cattlim.pasting import source, target
    # the d-boundaries of O^{d+1}_n are O^d_n
    o = from_rule_word(scheme_word(d + 1, n))
    assert source(o) == target(o) == from_rule_word(scheme_word(d, n))


@pytest.mark.parametrize("n", range(5))
def test_boundaries_of_lowest_scheme_are_globes(n):
    from cattlim.pasting import source, target
    o = from_rule_word(scheme_word(n + 1, n))
    assert source(o) == target(o) == from_rule_word(["PSE"] * n) == catalog.globe(n)
