"""Typing judgments for contexts, types, terms and substitutions.

Checking is re-verification: an Op/Coh node carries its pasting context,
boundary type and substitution, so every judgment has at most one
derivation.  Pass ``derive=False`` to skip building derivation trees.
"""

from dataclasses import dataclass

from .derivation import Derivation
from .errors import (
    DuplicateName, IllScoped, SideConditionViolated, SubstitutionError, TypeMismatch, var_delta,
)
from .pasting import boundary_indices, check_ps
from .printer import show
from .syntax import (
    COMPOSITE, Arr, Obj, Op, Var, _Subst, dim_ctx, dim_ty, free_vars, is_categorical, type_of,
)


@dataclass(frozen=True)
class TypingResult:
    subject: object
    inferred: object
    derivation: object


_valid_ctx = set()
_valid_tm = set()
_headers = {}


def clear_caches():
    _valid_ctx.clear()
    _valid_tm.clear()
    _headers.clear()


def _names(ctx):
    return "(" + ", ".join(ctx.names) + ")"


def check_ctx(ctx, derive=True):
    key = (ctx, ctx.names)
    if not derive and key in _valid_ctx:
        return TypingResult(ctx, None, None)
    seen = set()
    node = Derivation("() |-", "EC") if derive else None
    for i, (name, ty) in enumerate(ctx):
        if name in seen:
            raise DuplicateName(f"variable {name} is declared twice")
        seen.add(name)
        late = [j for j in free_vars(ty) if j >= i]
        if late:
            raise IllScoped(f"type of {name} mentions a variable that is not yet declared")
        pre = ctx.prefix(i)
        r = check_ty(pre, ty, derive)
        if derive:
            node = Derivation(f"{_names(ctx.prefix(i + 1))} |-", "CE", (node, r.derivation))
    _valid_ctx.add(key)
    return TypingResult(ctx, None, node)


def check_ty(ctx, ty, derive=True):
    if type(ty) is Obj:
        return TypingResult(ty, None, Derivation(f"{_names(ctx)} |- Ob", "OB") if derive else None)
    if type(ty) is not Arr:
        raise TypeMismatch(f"not a type: {ty!r}")
    base = check_ty(ctx, ty.base, derive)
    rs = infer_tm(ctx, ty.src, derive)
    rt = infer_tm(ctx, ty.tgt, derive)
    if rs.inferred != ty.base:
        raise TypeMismatch(f"source {show(ty.src)} has type {show(rs.inferred)}, expected {show(ty.base)}")
    if rt.inferred != ty.base:
        raise TypeMismatch(f"target {show(ty.tgt)} has type {show(rt.inferred)}, expected {show(ty.base)}")
    if is_categorical(ty):
        d = dim_ty(ty)
        for i in free_vars(ty):
            assert dim_ty(ctx.types[i]) < d, "free variable of a type exceeds its dimension"
    node = None
    if derive:
        node = Derivation(f"{_names(ctx)} |- {show(ty)}", "ARR",
                          (base.derivation, rs.derivation, rt.derivation))
    return TypingResult(ty, None, node)


def infer_tm(ctx, t, derive=True):
    k = type(t)
    if k is Var:
        if t.index >= len(ctx.types):
            raise IllScoped(f"variable {t.name} is not bound here")
        ty = ctx.types[t.index]
        node = Derivation(f"{_names(ctx)} |- {t.name} : {show(ty)}", "VAR") if derive else None
        return TypingResult(t, ty, node)
    key = (ctx, t)
    if not derive and key in _valid_tm:
        return TypingResult(t, type_of(ctx, t), None)
    if k in COMPOSITE:
        header = check_header(k, t.ps, t.ty)
        sub = check_sub(ctx, t.sub, t.ps, derive)
        ty = type_of(ctx, t)
        node = None
        if derive:
            node = Derivation(f"{_names(ctx)} |- {show(t)} : {show(ty)}",
                              "OP" if k is Op else "COH", (header, sub.derivation))
    else:
        from .limits import infer_limit
        ty, node = infer_limit(ctx, t, derive)
    if is_categorical(t):
        d = dim_ty(ty)
        for i in free_vars(t):
            assert dim_ty(ctx.types[i]) <= d, "free variable of a term exceeds its dimension"
    _valid_tm.add(key)
    return TypingResult(t, ty, node)


def check_tm(ctx, t, ty, derive=True):
    r = infer_tm(ctx, t, derive)
    if r.inferred != ty:
        raise TypeMismatch(f"{show(t)} has type {show(r.inferred)}, expected {show(ty)}")
    return r


def check_header(kind, ps, ty):
    """Validate the (OP)/(COH) premises for a ps-context and boundary type."""
    key = (kind, ps, ty, ps.names)
    hit = _headers.get(key)
    if hit is not None:
        return hit
    label = "op" if kind is Op else "coh"
    psd = check_ps(ps)
    check_ctx(ps, derive=False)
    if type(ty) is not Arr:
        raise TypeMismatch(f"the type of a {label} must be an arrow")
    tyd = check_ty(ps, ty)
    if not is_categorical(ty):
        raise SideConditionViolated(f"the type of a {label} must be categorical", which="type")
    fv_src = free_vars(ty.src) | free_vars(ty.base)
    fv_tgt = free_vars(ty.tgt) | free_vars(ty.base)
    if kind is Op:
        d = dim_ctx(ps)
        if d == 0:
            raise SideConditionViolated("an operation needs a ps-context of positive dimension",
                                        which="dimension")
        want_src = frozenset(boundary_indices(ps, d - 1, "-"))
        want_tgt = frozenset(boundary_indices(ps, d - 1, "+"))
    else:
        want_src = want_tgt = frozenset(range(len(ps)))
    for which, got, want in (("source", fv_src, want_src), ("target", fv_tgt, want_tgt)):
        if got != want:
            missing, extra = var_delta(ps, got, want)
            raise SideConditionViolated(
                f"{label} {which} must use exactly the {which} boundary variables"
                f" (missing {missing}, extra {extra})" if kind is Op else
                f"coh {which} must use every variable (missing {missing}, extra {extra})",
                which=which, missing=missing, extra=extra)
    node = Derivation(f"{show(ps)} |- {show(ty)}", label.upper() + "-HEADER",
                      (psd.to_derivation(), tyd.derivation))
    _headers[key] = node
    return node


def check_sub(source, sub, target, derive=True):
    if len(sub.terms) != len(target.types):
        raise SubstitutionError(
            f"substitution has {len(sub.terms)} entries but the target context has {len(target.types)}")
    if sub.target != target:
        raise SubstitutionError("substitution is declared for a different target context")
    inst = _Subst(sub.terms)
    node = Derivation(f"{_names(source)} |- <> : ()", "ES") if derive else None
    for i, term in enumerate(sub.terms):
        r = infer_tm(source, term, derive)
        want = inst.go(target.types[i])
        if r.inferred != want:
            raise TypeMismatch(
                f"substitution entry {i + 1} ({target.names[i]}): {show(term)} has type"
                f" {show(r.inferred)}, expected {show(want)}", index=i + 1)
        if derive:
            node = Derivation(f"{_names(source)} |- <..{show(term)}> : {_names(target.prefix(i + 1))}",
                              "SE", (node, r.derivation))
    return TypingResult(sub, None, node)
