"""Standard contexts and terms: globes, composition schemes, binary
composites, iterated identities and hom-globes.

Default variable names follow the usual convention: the globe D^2 is
``x, y, f, g, alpha`` and the second branch of a composition scheme uses
primed copies of the first branch's names.
"""

from functools import lru_cache

from .errors import DimensionError, NotComposable
from .printer import show
from .syntax import (
    OBJ, Arr, Coh, Ctx, Op, Sub, Var, dim_ctx, dim_ty, src_of, tgt_of, type_of,
)

_PAIRS = [("x", "y"), ("f", "g"), ("alpha", "beta"), ("phi", "psi")]


def cell_names(k):
    """Default (source, target) names for the k-dimensional cells of a globe."""
    return _PAIRS[k] if k < len(_PAIRS) else (f"u{k}", f"v{k}")


def globe_names(d):
    names = [cell_names(0)[0]]
    for k in range(d):
        names += [cell_names(k)[1], cell_names(k + 1)[0]]
    return tuple(names)


@lru_cache(maxsize=None)
def _globe(d):
    types = [OBJ]
    top, top_ty = 0, OBJ
    for _ in range(d):
        y = len(types)
        types.append(top_ty)
        types.append(Arr(top_ty, Var(top), Var(y)))
        top, top_ty = y + 1, types[-1]
    return tuple(types)


def globe(d, names=None):
    """The d-dimensional globe D^d; its top cell is the last entry."""
    if d < 0:
        raise DimensionError("globe dimension must be non-negative")
    names = tuple(names) if names is not None else globe_names(d)
    return _named(_globe(d), names)


def _named(types, names):
    if len(names) != len(types):
        raise ValueError(f"expected {len(types)} names, got {len(names)}")
    out = []
    for ty in types:
        out.append(_rename_ty(ty, names))
    return Ctx(tuple(out), tuple(names))


def _rename_ty(ty, names):
    # catalog contexts are globular, so only variables need renaming
    if type(ty) is not Arr:
        return ty
    return Arr(_rename_ty(ty.base, names), Var(ty.src.index, names[ty.src.index]),
               Var(ty.tgt.index, names[ty.tgt.index]))


def scheme_names(d, n):
    names = list(globe_names(d))
    for k in range(n, d):
        names += [cell_names(k)[1] + "'", cell_names(k + 1)[0] + "'"]
    return tuple(names)


@lru_cache(maxsize=None)
def _scheme(d, n):
    types = list(_globe(d))
    focus = 2 * d
    for _ in range(d - n):
        focus = types[focus].tgt.index
    for _ in range(d - n):
        a = types[focus]
        y = len(types)
        types.append(a)
        types.append(Arr(a, Var(focus), Var(y)))
        focus = y + 1
    return tuple(types)


def comp_scheme(d, n, names=None):
    """O^d_n: two d-cells glued along an n-dimensional boundary."""
    if not 0 <= n < d:
        raise DimensionError(f"composition scheme needs d > n >= 0, got d={d}, n={n}")
    names = tuple(names) if names is not None else scheme_names(d, n)
    return _named(_scheme(d, n), names)


@lru_cache(maxsize=None)
def comp_type(d, n):
    """Boundary type of the binary composite over the default O^d_n."""
    ctx = comp_scheme(d, n)
    first, second = 2 * d, len(ctx) - 1
    if d == n + 1:
        s = src_of(ctx, Var(first, ctx.names[first]))
        t = tgt_of(ctx, Var(second, ctx.names[second]))
        return Arr(type_of(ctx, s), s, t)
    u, v = ctx.var(first), ctx.var(second)
    s = comp_term(src_of(ctx, u), src_of(ctx, v), d - 1, n, ctx)
    t = comp_term(tgt_of(ctx, u), tgt_of(ctx, v), d - 1, n, ctx)
    return Arr(type_of(ctx, s), s, t)


def globe_sub_terms(ctx, t, d):
    """Entries of the substitution D^d -> ctx picking out the d-cell t."""
    terms = []
    for k in range(d, 0, -1):
        terms += [src_of(ctx, t, k), tgt_of(ctx, t, k)]
    terms.append(t)
    return terms


def comp_term(u, v, d, n, ctx):
    """u *^d_n v, composing along the n-dimensional boundary."""
    if not 0 <= n < d:
        raise DimensionError(f"composition needs d > n >= 0, got d={d}, n={n}")
    du, dv = dim_ty(type_of(ctx, u)), dim_ty(type_of(ctx, v))
    if du != d or dv != d:
        raise DimensionError(f"composite *{{{d},{n}}} of cells of dimensions {du} and {dv}")
    meet_u = tgt_of(ctx, u, d - n)
    meet_v = src_of(ctx, v, d - n)
    if meet_u != meet_v:
        raise NotComposable(f"{show(u)} ends at {show(meet_u)} but {show(v)} starts at {show(meet_v)}")
    terms = globe_sub_terms(ctx, u, d)
    for k in range(n, d):
        terms.append(tgt_of(ctx, v, d - k))
        terms.append(src_of(ctx, v, d - k - 1) if d - k - 1 > 0 else v)
    ps = comp_scheme(d, n)
    return Op(ps, comp_type(d, n), Sub(tuple(terms), ps))


@lru_cache(maxsize=None)
def identity_type(d, m):
    """Type of the coherence giving 1^{m+1} of the top cell of D^d."""
    ctx = globe(d)
    top = ctx.var(2 * d)
    s = iterated_identity(top, m, ctx)
    return Arr(type_of(ctx, s), s, s)


def iterated_identity(t, n, ctx):
    """1^n_t; 1^0_t is t itself."""
    if n == 0:
        return t
    d = dim_ty(type_of(ctx, t))
    ps = globe(d)
    return Coh(ps, identity_type(d, n - 1), Sub(tuple(globe_sub_terms(ctx, t, d)), ps))


def hom_globe(ambient, src, tgt, n, names=None):
    """Extend ``ambient`` by an n-dimensional globe whose 1-cells run src -> tgt.

    ``src`` and ``tgt`` are indices of object variables of ``ambient``.  The
    extension has 2n-1 entries ending in the top n-cell.
    """
    if n < 1:
        raise DimensionError("a hom-globe needs n >= 1")
    base = len(ambient)
    if names is None:
        names = [cell_names(1)[0]]
        for k in range(1, n):
            names += [cell_names(k)[1], cell_names(k + 1)[0]]
    names = list(names)
    ctx = ambient
    s, t = Var(src, ambient.names[src]), Var(tgt, ambient.names[tgt])
    ty = Arr(OBJ, s, t)
    ctx = ctx.extend(names[0], ty)
    top = base
    for k in range(1, n):
        y = len(ctx)
        ctx = ctx.extend(names[2 * k - 1], ty)
        ty = Arr(ty, Var(top, ctx.names[top]), Var(y, ctx.names[y]))
        ctx = ctx.extend(names[2 * k], ty)
        top = y + 1
    return ctx


@lru_cache(maxsize=4096)
def _classify(kind, ps, ty):
    if kind is Op:
        d = dim_ctx(ps)
        extra = len(ps) - (2 * d + 1)
        if d == 0 or extra <= 0 or extra % 2:
            return None
        n = d - extra // 2
        if 0 <= n < d and ps == comp_scheme(d, n) and ty == comp_type(d, n):
            return ("comp", d, n)
        return None
    if len(ps) % 2 == 0:
        return None
    d = (len(ps) - 1) // 2
    m = dim_ty(ty) - d - 1
    if m >= 0 and ps == globe(d) and ty == identity_type(d, m):
        return ("id", d, m + 1)
    return None


def classify(t):
    """('comp', d, n) for a binary composite, ('id', d, k) for 1^k of a d-cell."""
    return _classify(type(t), t.ps, t.ty)
