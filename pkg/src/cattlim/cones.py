"""Cones: the linearity relation, the sigma/tau side conditions, recognition
of cone contexts and synthesis of cones over globular diagrams.

A cone context is the diagram followed by the apex ``c : Ob`` and one
projection per diagram variable, in the diagram's order.
"""

from dataclasses import field

from .catalog import comp_term, iterated_identity
from .derivation import Derivation
from .errors import ConditionViolated, NotGlobular, ShapeMismatch, var_delta
from .kernel import check_ctx
from .printer import show
from .syntax import (
    COMPOSITE, OBJ, Arr, Node, Obj, Var, dim_ty, free_vars, fv_var, is_categorical, is_globular,
    node, ty_side, type_of,
)


@node
class ConeShape(Node):
    """A recognized cone: ``ctx`` is diagram, apex, projections."""
    ctx: object
    diagram_len: int
    name: str = field(default="K", compare=False)

    @property
    def apex(self):
        return self.diagram_len

    @property
    def diagram(self):
        return self.ctx.prefix(self.diagram_len)

    @property
    def apex_name(self):
        return self.ctx.names[self.apex]

    def projection(self, i):
        """Index of the projection of the i-th diagram variable."""
        return self.diagram_len + 1 + i

    @property
    def projections(self):
        return tuple(range(self.diagram_len + 1, len(self.ctx)))

    def show(self):
        return f"cone {self.name} {show(self.ctx)}"


def is_linear(ctx, x, t):
    """x is linear in t: it reaches t through exactly one slot at every node."""
    return _linear(x, dim_ty(ctx.types[x]), t, dim_ty(type_of(ctx, t)))


def _linear(x, dx, t, dt):
    if dx != dt or x not in free_vars(t):
        return False
    k = type(t)
    if k is Var:
        return t.index == x
    if k not in COMPOSITE:
        return False
    hits = 0
    for slot_ty, s in zip(t.ps.types, t.sub.terms):
        if _linear(x, dx, s, dim_ty(slot_ty)):
            hits += 1
            if hits > 1:
                return False
    return hits == 1


def linear_in_side(ctx, ys, p, side):
    """Some y in ``ys`` is linear in the source or target of p's type."""
    ty = ctx.types[p]
    if type(ty) is not Arr:
        return False
    w = ty.src if side == "src" else ty.tgt
    dw = dim_ty(ty) - 1
    return any(_linear(y, dim_ty(ctx.types[y]), w, dw) for y in ys)


def check_delta_cond(ctx, t, ty, x, projections, which, barred=False, apex=None, witness="tgt"):
    """Check the sigma/tau side condition on a boundary term t : ty.

    ``which`` picks the boundary of x ("sigma" or "tau") whose variables
    select the projections that must be used.  A projection p is selected
    when one of those variables is linear in the ``witness`` side of p's
    type.  The barred form replaces FV(x : X) by the apex and drops the
    linearity requirement.
    """
    if not (is_categorical(t) and is_categorical(ty)):
        raise ConditionViolated(f"{show(t)} must be categorical", clause="categorical")
    got = free_vars(t) | free_vars(ty)
    want = {apex} if barred else set(fv_var(ctx, x))
    xty = ctx.types[x]
    if type(xty) is Arr:
        side = ty_side(xty, 1, "src" if which == "sigma" else "tgt")
        ys = free_vars(side) | free_vars(xty.base)
        for p in projections:
            if linear_in_side(ctx, ys, p, witness):
                want |= fv_var(ctx, p)
    want = frozenset(want)
    label = ("bar-" if barred else "") + which
    if got != want:
        missing, extra = var_delta(ctx, got, want)
        raise ConditionViolated(
            f"{label} condition for {ctx.names[x]} fails on {show(t)}: missing {missing}, extra {extra}",
            clause="fv", missing=missing, extra=extra)
    if not barred and not is_linear(ctx, x, t):
        raise ConditionViolated(f"{ctx.names[x]} is not linear in {show(t)}", clause="linearity")


def check_cone(ctx, diagram, apex_name=None, name="K", derive=False):
    """Recognize ``ctx`` as a cone over ``diagram``; returns its ConeShape."""
    n = len(diagram)
    if len(ctx) != 2 * n + 1:
        raise ShapeMismatch(f"a cone over {n} variables has {2 * n + 1} entries, got {len(ctx)}")
    if ctx.types[:n] != diagram.types:
        raise ShapeMismatch("cone context does not start with the diagram")
    if type(ctx.types[n]) is not Obj:
        raise ShapeMismatch(f"apex {ctx.names[n]} must be an object")
    if apex_name is not None and ctx.names[n] != apex_name:
        raise ShapeMismatch(f"apex is {ctx.names[n]}, expected {apex_name}")
    check_ctx(ctx, derive=False)
    names = ctx.names
    node_ = Derivation(f"{names[n]} : Ob cone ((); {names[n]})", "EK") if derive else None
    for i in range(n):
        p = n + 1 + i
        ty = ctx.types[p]
        if type(ty) is not Arr:
            raise ShapeMismatch(f"projection {names[p]} must have an arrow type")
        allowed = set(range(i + 1)) | set(range(n, p))
        if not free_vars(ty) <= allowed:
            raise ShapeMismatch(f"type of {names[p]} mentions a variable introduced after {names[i]}")
        projs = range(n + 1, p)
        check_delta_cond(ctx, ty.src, ty.base, i, projs, "tau", barred=True, apex=n)
        check_delta_cond(ctx, ty.tgt, ty.base, i, projs, "sigma")
        if derive:
            node_ = Derivation(f"{names[p]} : {show(ty)} cone ({names[i]}; {names[n]})", "KE", (node_,))
    shape = ConeShape(ctx, n, name)
    if derive:
        object.__setattr__(shape, "_derivation", node_)
    return shape


def synth_cone_globular(diagram, apex="c", name="K", prefix="p_"):
    """Synthesize the cone over a globular diagram.

    A 0-cell x gets p_x : c -> x.  A d-cell x gets p_x : p_{tau x} -> t1(x)
    where t(d+1) = x and t(m) = 1^{m-1}(p_{sigma^m x}) *{d,d-m} t(m+1).
    """
    check_ctx(diagram, derive=False)
    if not is_globular(diagram):
        raise NotGlobular("cone synthesis needs a globular diagram")
    n = len(diagram)
    ctx = diagram.extend(apex, OBJ)
    for i, (xname, xty) in enumerate(diagram):
        d = dim_ty(xty)
        x = Var(i, xname)
        if d == 0:
            ty = Arr(OBJ, ctx.var(n), x)
        else:
            t = x
            for m in range(d, 0, -1):
                low = ty_side(xty, m, "src").index
                ident = iterated_identity(ctx.var(n + 1 + low), m - 1, ctx)
                t = comp_term(ident, t, d, d - m, ctx)
            s = ctx.var(n + 1 + ty_side(xty, 1, "tgt").index)
            ty = Arr(type_of(ctx, s), s, t)
        ctx = ctx.extend(prefix + xname, ty)
        _assert_projection_law(ctx, i, n)
    return check_cone(ctx, diagram, name=name)


def _assert_projection_law(ctx, i, n):
    p = n + 1 + i
    ty = ctx.types[p]
    own = fv_var(ctx, p)
    ys = fv_var(ctx, i)
    union = set()
    for q in range(n + 1, p + 1):
        if linear_in_side(ctx, ys, q, "tgt"):
            union |= fv_var(ctx, q)
    assert own == union, f"projection law fails for {ctx.names[p]}"
    assert n in own, f"apex missing from {ctx.names[p]}"
    linear = [j for j in range(n) if dim_ty(ctx.types[j]) == dim_ty(ty) - 1
              and is_linear(ctx, j, ty.tgt)]
    assert linear == [i], f"linear witness of {ctx.names[p]} is not unique"
