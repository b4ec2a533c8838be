from cattlim import catalog
from cattlim.cones import synth_cone_globular
from cattlim.printer import show
from cattlim.syntax import (
    OBJ, Arr, Ctx, Inv, Sub, Var, apply_sub, compose, dim_ty, free_vars, identity, is_categorical,
    is_globular, src_of, tgt_of, type_of,
)

from helpers import G1, ctx


def test_dimension_of_types():
    assert dim_ty(OBJ) == 0
    assert dim_ty(G1.types[2]) == 1
    cone = synth_cone_globular(catalog.globe(2))
    p_alpha = cone.ctx.types[cone.ctx.index("p_alpha")]
    assert show(p_alpha) == "p_g -> (p_f *{2,1} (1(p_x) *{2,0} alpha))"
    # p_g is a 2-cell, so an arrow out of it is 3-dimensional
    assert dim_ty(p_alpha.base) == 2
    assert dim_ty(p_alpha) == 3


def test_free_vars_of_composite():
    ps = catalog.comp_scheme(1, 0)
    t = catalog.comp_term(ps.var(2), ps.var(4), 1, 0, ps)
    assert free_vars(t) == frozenset(range(5))
    assert free_vars(OBJ) == frozenset()
    assert free_vars(Var(3)) == {3}


def test_substitution_basics():
    gamma = Sub((Var(0), Var(0), catalog.iterated_identity(Var(0), 1, G1)), G1)
    assert apply_sub(OBJ, gamma) is OBJ
    assert apply_sub(Var(2), gamma) == gamma.terms[2]
    assert apply_sub(G1.types[2], gamma) == Arr(OBJ, Var(0), Var(0))


def test_identity_substitution_is_neutral():
    ps = catalog.comp_scheme(2, 1)
    t = catalog.comp_term(ps.var(4), ps.var(6), 2, 1, ps)
    assert apply_sub(t, identity(ps)) == t
    assert compose(identity(ps), identity(ps)) == identity(ps)


def test_names_do_not_affect_equality():
    a = ctx(("x", "Ob"), ("y", "Ob"), ("f", ("x", "y")))
    b = ctx(("a", "Ob"), ("b", "Ob"), ("g", ("a", "b")))
    assert a == b and hash(a) == hash(b)
    assert a.names != b.names
    assert Var(1, "y") == Var(1, "q")


def test_iterated_boundaries():
    g2 = catalog.globe(2)
    assert src_of(g2, g2.var(2)) == Var(0)
    assert src_of(g2, g2.var(4), 2) == Var(0)
    assert tgt_of(g2, g2.var(4), 2) == Var(1)
    cone = synth_cone_globular(g2)
    k = cone.ctx
    assert show(tgt_of(k, k.var(k.index("p_alpha")))) == "(p_f *{2,1} (1(p_x) *{2,0} alpha))"


def test_categorical_and_globular():
    g2 = catalog.globe(2)
    assert is_globular(g2)
    assert is_categorical(catalog.iterated_identity(Var(4), 1, g2))
    assert not is_categorical(Inv(Var(4)))
    cone = synth_cone_globular(G1)
    assert not is_globular(cone.ctx)


def test_context_operations():
    assert len(G1) == 3
    assert list(G1)[2][0] == "f"
    assert G1.prefix(2) == ctx(("x", "Ob"), ("y", "Ob"))
    assert G1.extend("c", OBJ).names[-1] == "c"
    assert type_of(G1, Var(2)) == G1.types[2]
    assert Ctx.of([("x", OBJ)]) == G1.prefix(1)
