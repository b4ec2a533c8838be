"""Canonical ASCII printer.

Binary composites print fully parenthesized as ``(u *{d,n} v)``, iterated
identities as ``1(t)`` or ``1^k(t)``, other operations and coherences in
their explicit form ``op{ps : type}<terms>``.  The output parses back to
the same term (see ``surface``).
"""

import re

from .syntax import (
    Arr, Coh, Ctx, Eps, Eta, Inv, Obj, Op, Sub, UCone, Uni, Var, is_identity_like,
)


def show(e):
    k = type(e)
    if k is Var:
        return e.name
    if k is Obj:
        return "Ob"
    if k is Arr:
        return f"{show(e.src)} -> {show(e.tgt)}"
    if k is Op or k is Coh:
        return _show_composite(e)
    if k is Ctx:
        return show_ctx(e)
    if k is Sub:
        return "<" + ", ".join(show(t) for t in e.terms) + ">"
    if k is UCone:
        cone = e.cone
        if e.target == cone.apex:
            head = f"lim({cone.name})"
        else:
            head = f"ucone({cone.name}, {cone.ctx.names[e.target]})"
        if is_identity_like(e.sub, cone.diagram_len):
            return head
        return head + show(e.sub)
    if k is Uni:
        site = e.site
        head = f"uni({site.name}, {site.whisk.ctx.names[e.target]})"
        if is_identity_like(e.sub, len(site.omega)):
            return head
        return head + show(e.sub)
    if k is Inv:
        return f"inv({show(e.arg)})"
    if k is Eta:
        return f"eta({show(e.arg)})"
    if k is Eps:
        return f"eps({show(e.arg)})"
    if hasattr(e, "show"):
        return e.show()
    raise TypeError(f"cannot print {k.__name__}")


def show_ctx(ctx, segments=None):
    """Print a context; ``segments`` (a list of lengths) inserts ``|``."""
    if not segments:
        return "(" + ", ".join(f"{n} : {show(t)}" for n, t in ctx) + ")"
    parts, i = [], 0
    for length in segments:
        parts.append(", ".join(f"{ctx.names[j]} : {show(ctx.types[j])}" for j in range(i, i + length)))
        i += length
    return re.sub(r" +", " ", "(" + " | ".join(parts) + ")")


def _show_composite(t):
    from .catalog import classify
    shape = classify(t)
    terms = t.sub.terms
    if shape is not None and shape[0] == "comp":
        _, d, n = shape
        return f"({show(terms[2 * d])} *{{{d},{n}}} {show(terms[-1])})"
    if shape is not None and shape[0] == "id":
        k = shape[2]
        power = "" if k == 1 else f"^{k}"
        return f"1{power}({show(terms[-1])})"
    word = "op" if type(t) is Op else "coh"
    return f"{word}{{{show_ctx(t.ps)} : {show(t.ty)}}}{show(t.sub)}"


def show_judgment(ctx, t, ty):
    return f"{show_ctx(ctx)} |- {show(t)} : {show(ty)}"
