import pytest

from cattlim import catalog
from cattlim.cones import check_delta_cond
from cattlim.errors import (
    ConditionViolated, NotGlobular, PrematureClose, SegmentImbalance, ShapeMismatch, TypeMismatch,
)
from cattlim.printer import show
from cattlim.surface import Session
from cattlim.syntax import Ctx
from cattlim.transfors import check_ctrf, check_gray, synth_gray_1globe

from helpers import corpus_session

NAT = ("(x : Ob, y : Ob, f : x -> y, g : x -> y, alpha : f -> g"
       " | x' : Ob, y' : Ob, f' : x' -> y', g' : x' -> y', alpha' : f' -> g'"
       " | p_x : x -> x', p_y : y -> y',"
       " p_f : (f *{1,0} p_y) -> (p_x *{1,0} f'), p_g : (g *{1,0} p_y) -> (p_x *{1,0} g'),"
       " p_alpha : ((alpha *{2,0} 1(p_y)) *{2,1} p_g) -> (p_f *{2,1} (1(p_x) *{2,0} alpha')))")


def read(text):
    return Session().read_ctx(text)


def test_empty_gray():
    shape = check_gray(Ctx((), ()), (0, 0, 0))
    assert shape.level == 1 and shape.rows == 0


def test_natural_transformation_context():
    nat = read(NAT)
    shape = check_gray(nat, (5, 5, 5))
    assert shape.show() == show(nat).replace(", x' :", " | x' :", 1).replace(", p_x :", " | p_x :", 1)
    assert synth_gray_1globe(catalog.globe(2)).ctx == nat


@pytest.mark.parametrize("d", range(4))
def test_synthesized_gray_rechecks(d):
    shape = synth_gray_1globe(catalog.globe(d))
    n = len(catalog.globe(d))
    assert check_gray(shape.ctx, (n, n, n)) == shape


def test_synth_needs_globular():
    with pytest.raises(NotGlobular):
        synth_gray_1globe(synth_gray_1globe(catalog.globe(1)).ctx)


def test_tau_witness_on_target_side_rejects_the_example():
    """Reading linearity off the target on the tau side rejects p_alpha."""
    nat = read(NAT)
    p = nat.index("p_alpha")
    ty = nat.types[p]
    meds = range(nat.index("p_x"), p)
    check_delta_cond(nat, ty.src, ty.base, nat.index("alpha"), meds, "tau", witness="src")
    with pytest.raises(ConditionViolated):
        check_delta_cond(nat, ty.src, ty.base, nat.index("alpha"), meds, "tau", witness="tgt")


def test_trivial_ctrf():
    shape = check_ctrf(read("( | c : Ob | | | )"), (0, 1, 0, 0, 0))
    assert shape.conical and shape.rows == 0
    shape = check_ctrf(read("( | c : Ob | | | | | )"), (0, 1, 0, 0, 0, 0, 0))
    assert shape.level == 2


def test_gamma1_ctrf_from_corpus():
    s = corpus_session("gamma1.catt")
    shape = s.lookup("M").value
    assert shape.all_segments() == (3, 1, 3, 3, 3)
    m_f = shape.ctx.types[shape.ctx.index("m_f")]
    assert show(m_f) == "(p_f *{2,1} (m_x *{2,0} 1(f))) -> (m_y *{2,1} q_f)"


def test_premature_close():
    with pytest.raises(PrematureClose):
        check_gray(read("(x : Ob, y : Ob | x' : Ob, y' : Ob | p_x : x -> x')"), (2, 2, 1))


def test_segment_imbalance():
    with pytest.raises(SegmentImbalance):
        check_gray(read("(x : Ob, y : Ob | x' : Ob | p_x : x -> x')"), (2, 1, 1))


def test_wrong_duplicate():
    # f' must run between the copies x' and y'
    bad = read("(x : Ob, y : Ob, f : x -> y | x' : Ob, y' : Ob, f' : x -> y"
               " | p_x : x -> x', p_y : y -> y', p_f : f -> f)")
    with pytest.raises(TypeMismatch):
        check_gray(bad, (3, 3, 3))


def test_mediator_in_wrong_direction():
    with pytest.raises(ConditionViolated):
        check_gray(read("(x : Ob | x' : Ob | p_x : x' -> x)"), (1, 1, 1))


def test_ctrf_shape_errors():
    with pytest.raises(ShapeMismatch):
        check_ctrf(read("(x : Ob | c : Ob | | | )"), (1, 1, 0, 0, 0))
    with pytest.raises(ShapeMismatch):
        check_gray(read("(x : Ob | x' : Ob | p_x : x -> x')"), (1, 1))


def test_modification_context_is_level_2():
    s = corpus_session("modification.catt")
    shape = s.lookup("Mod").value
    assert shape.level == 2 and shape.segments == (5, 5, 5, 5, 5)
