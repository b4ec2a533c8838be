"""Gray-tensor and conical-transfor contexts.

A transfor context is split into segments M_1, ..., M_{2n+1}.  Recognition
replays the rules row by row: open row r by adding M_1[r] (for a conical
transfor also the diagram variable it lies over), then for i = 1..n add the
duplicate M_{2i}[r] of M_{2i-1}[r] and the mediator M_{2i+1}[r] between
them.  The derivation closes once every segment has the same length.
"""

from dataclasses import field

from .catalog import comp_term, iterated_identity
from .cones import check_cone, check_delta_cond
from .errors import NotGlobular, PrematureClose, SegmentImbalance, ShapeMismatch, TypeMismatch
from .kernel import check_ctx
from .printer import show, show_ctx
from .syntax import (
    OBJ, Arr, Ctx, Node, Var, _Subst, dim_ty, free_vars, is_globular, node, reindex, ty_side, type_of,
)


@node
class TransforShape(Node):
    """A recognized transfor context.

    ``segments`` are the lengths of M_1..M_{2n+1}; for a conical transfor
    the context starts with the diagram (``diagram_len`` entries) and the
    apex, otherwise ``diagram_len`` is 0 and ``apex`` is None.
    """
    ctx: object
    segments: tuple
    diagram_len: int = 0
    apex: object = None
    name: str = field(default="M", compare=False)

    @property
    def level(self):
        return (len(self.segments) - 1) // 2

    @property
    def conical(self):
        return self.apex is not None

    @property
    def rows(self):
        return self.segments[0]

    def offset(self, j):
        """Start index of segment M_j (1-based)."""
        start = self.diagram_len + (1 if self.conical else 0)
        return start + sum(self.segments[:j - 1])

    def segment_of(self, index):
        """(j, row) locating a context index inside the segments."""
        for j in range(1, len(self.segments) + 1):
            off = self.offset(j)
            if off <= index < off + self.segments[j - 1]:
                return j, index - off
        return None

    def all_segments(self):
        if self.conical:
            return (self.diagram_len, 1) + self.segments
        return self.segments

    def show(self):
        return show_ctx(self.ctx, self.all_segments())


def check_gray(ctx, segments, name="M"):
    """Recognize a Gray-tensor context; ``segments`` are the lengths of M_i."""
    segments = tuple(segments)
    _check_lengths(ctx, segments, 0)
    check_ctx(ctx, derive=False)
    shape = TransforShape(ctx, segments, 0, None, name)
    _replay(shape)
    return shape


def check_ctrf(ctx, segments, name="M"):
    """Recognize a conical transfor.

    ``segments`` lists every block: the diagram, the apex block of length
    1, then M_1..M_{2n+1}.
    """
    segments = tuple(segments)
    if len(segments) < 2 or segments[1] != 1:
        raise ShapeMismatch("a conical transfor needs a diagram block and a one-entry apex block")
    g = segments[0]
    ms = segments[2:]
    _check_lengths(ctx, ms, g + 1)
    if ms[0] != g:
        raise ShapeMismatch(f"the cone column has {ms[0]} entries but the diagram has {g}")
    check_ctx(ctx, derive=False)
    check_cone(ctx.prefix(2 * g + 1), ctx.prefix(g))
    shape = TransforShape(ctx, ms, g, g, name)
    _replay(shape)
    return shape


def _check_lengths(ctx, ms, start):
    if len(ms) < 3 or len(ms) % 2 == 0:
        raise ShapeMismatch(f"a transfor has 2n+1 >= 3 segments, got {len(ms)}")
    if start + sum(ms) != len(ctx):
        raise ShapeMismatch("segment lengths do not add up to the context length")
    n = (len(ms) - 1) // 2
    for i in range(1, n + 1):
        if ms[2 * i - 1] != ms[2 * i - 2]:
            raise SegmentImbalance(
                f"M_{2 * i - 1} has {ms[2 * i - 2]} entries but its duplicate M_{2 * i} has {ms[2 * i - 1]}")
    if len(set(ms)) != 1:
        raise PrematureClose(f"segments close with unequal lengths {list(ms)}")


def _replay(shape):
    ctx, n, rows = shape.ctx, shape.level, shape.rows
    names = ctx.names
    avail = set()
    if shape.conical:
        avail.add(shape.apex)
    for r in range(rows):
        if shape.conical:
            avail.add(r)
        x = shape.offset(1) + r
        if shape.conical:
            allowed = avail | set(range(shape.offset(1), x))
        else:
            allowed = set(range(shape.offset(1), x))
        if not free_vars(ctx.types[x]) <= allowed:
            raise ShapeMismatch(f"type of {names[x]} mentions a variable outside its column")
        avail.add(x)
        for i in range(1, n + 1):
            src_off, dup_off, med_off = shape.offset(2 * i - 1), shape.offset(2 * i), shape.offset(2 * i + 1)
            src, dup, med = src_off + r, dup_off + r, med_off + r
            want = _duplicate_type(ctx, src_off, dup_off, r)
            if ctx.types[dup] != want:
                raise TypeMismatch(
                    f"{names[dup]} must duplicate {names[src]} with type {show(want)}, got {show(ctx.types[dup])}")
            avail.add(dup)
            ty = ctx.types[med]
            if type(ty) is not Arr:
                raise ShapeMismatch(f"mediator {names[med]} must have an arrow type")
            if not free_vars(ty) <= avail:
                raise ShapeMismatch(f"type of {names[med]} mentions a variable of a later row")
            projs = range(med_off, med)
            check_delta_cond(ctx, ty.src, ty.base, src, projs, "tau", witness="src")
            check_delta_cond(ctx, ty.tgt, ty.base, dup, projs, "sigma", witness="tgt")
            avail.add(med)


def _duplicate_type(ctx, src_off, dup_off, r):
    terms = [Var(j, ctx.names[j]) for j in range(len(ctx))]
    for k in range(r):
        terms[src_off + k] = Var(dup_off + k, ctx.names[dup_off + k])
    return _Subst(terms).go(ctx.types[src_off + r])


def synth_gray_1globe(diagram, prime="'", prefix="p_", name="M"):
    """Gray tensor of a globular diagram with the 1-globe.

    Produces the diagram, a primed copy, and a mediator p_x for each x,
    from the left-whiskered source to the right-whiskered target.
    """
    check_ctx(diagram, derive=False)
    if not is_globular(diagram):
        raise NotGlobular("Gray synthesis needs a globular diagram")
    n = len(diagram)
    names = diagram.names + tuple(nm + prime for nm in diagram.names)
    mapping = {i: n + i for i in range(n)}
    ctx = diagram.concat(Ctx(tuple(reindex(t, mapping, names) for t in diagram.types), names[n:]))
    for i, (xname, xty) in enumerate(diagram):
        d = dim_ty(xty)
        x, x2 = Var(i, xname), ctx.var(n + i)
        if d == 0:
            ty = Arr(OBJ, x, x2)
        else:
            s = x
            for k in range(d):
                low = ty_side(xty, d - k, "tgt").index
                s = comp_term(s, iterated_identity(ctx.var(2 * n + low), d - 1 - k, ctx), d, k, ctx)
            t = x2
            for m in range(d, 0, -1):
                low = ty_side(xty, m, "src").index
                t = comp_term(iterated_identity(ctx.var(2 * n + low), m - 1, ctx), t, d, d - m, ctx)
            ty = Arr(type_of(ctx, s), s, t)
        ctx = ctx.extend(prefix + xname, ty)
    return check_gray(ctx, (n, n, n), name=name)
