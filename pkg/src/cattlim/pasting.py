"""Pasting-scheme recognition and boundaries.

A ps-context is replayed left to right: after the first object every
entry pair (y : A, f : x -> y) first drops the focus with PSD until it has
type A, then extends with PSE.  The replay is deterministic, so a context
either has exactly this derivation or none.
"""

from dataclasses import dataclass
from functools import lru_cache

from .derivation import Derivation
from .errors import DimensionError, NotPs
from .syntax import Arr, Ctx, Obj, Var, dim_ctx, dim_ty, reindex


@dataclass(frozen=True)
class PsStep:
    rule: str
    focus: int


@dataclass(frozen=True)
class PsDerivation:
    context: Ctx
    trace: tuple

    def to_derivation(self):
        names = self.context.names
        node = None
        for step in self.trace:
            label = "ps" if step.rule == "PS" else f"|-ps {names[step.focus]}"
            node = Derivation(label, step.rule, () if node is None else (node,))
        return node


def check_ps(ctx):
    return _check_ps(ctx, ctx.names)


@lru_cache(maxsize=4096)
def _check_ps(ctx, names):
    types = ctx.types
    if not types:
        raise NotPs(0, "empty context")
    if type(types[0]) is not Obj:
        raise NotPs(1, "first entry must be an object")
    trace = [PsStep("PSS", 0)]
    focus = 0
    i = 1
    while i < len(types):
        if i + 1 >= len(types):
            raise NotPs(i + 1, "dangling entry without its arrow")
        a = types[i]
        while dim_ty(types[focus]) > dim_ty(a):
            focus = types[focus].tgt.index
            trace.append(PsStep("PSD", focus))
        if types[focus] != a:
            raise NotPs(i + 1, f"{names[i]} does not have the type of the focus {names[focus]}")
        if types[i + 1] != Arr(a, Var(focus), Var(i)):
            raise NotPs(i + 2, f"{names[i + 1]} must run from {names[focus]} to {names[i]}")
        focus = i + 1
        trace.append(PsStep("PSE", focus))
        i += 2
    while dim_ty(types[focus]) > 0:
        focus = types[focus].tgt.index
        trace.append(PsStep("PSD", focus))
    trace.append(PsStep("PS", focus))
    return PsDerivation(ctx, tuple(trace))


def boundary_indices(ctx, k, sign):
    """Indices of ``ctx`` kept by the k-source (sign '-') or k-target ('+')."""
    check_ps(ctx)
    if sign not in "-+" or len(sign) != 1:
        raise ValueError("sign must be '-' or '+'")
    types = ctx.types
    kept = [0]
    for i in range(1, len(types), 2):
        d = dim_ty(types[i])
        if k > d:
            kept += [i, i + 1]
        elif k == d and sign == "+":
            kept[-1] = i
    return tuple(kept)


def boundary(ctx, k, sign):
    """The ps-context of cells kept by the k-source or k-target."""
    kept = boundary_indices(ctx, k, sign)
    mapping = {old: new for new, old in enumerate(kept)}
    names = tuple(ctx.names[i] for i in kept)
    return Ctx(tuple(reindex(ctx.types[i], mapping, names) for i in kept), names)


def source(ctx):
    return boundary(ctx, _top(ctx), "-")


def target(ctx):
    return boundary(ctx, _top(ctx), "+")


def _top(ctx):
    d = dim_ctx(ctx)
    if d == 0:
        raise DimensionError("a 0-dimensional ps-context has no source or target")
    return d - 1


def is_ps(ctx):
    try:
        check_ps(ctx)
    except NotPs:
        return False
    return True
