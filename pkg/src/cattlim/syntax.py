"""Raw syntax: types, terms, contexts and substitutions.

Variables are positional.  ``Var(i)`` points at entry ``i`` of the ambient
context, counted from the left, so a term stays valid in every extension of
its context.  Names ride along for printing only and are ignored by equality
and hashing.
"""

from dataclasses import dataclass, field, fields

from .errors import DimensionError, IllScoped, SubstitutionError


class Node:
    """Immutable syntax node with a cached structural hash."""

    _keys = ()

    def __hash__(self):
        h = self.__dict__.get("_h")
        if h is None:
            h = hash((type(self).__name__,) + tuple(getattr(self, k) for k in self._keys))
            object.__setattr__(self, "_h", h)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other) or hash(self) != hash(other):
            return False
        return all(getattr(self, k) == getattr(other, k) for k in self._keys)

    def __str__(self):
        from .printer import show
        return show(self)

    def __repr__(self):
        return f"{type(self).__name__}<{self}>"


def node(cls):
    cls = dataclass(frozen=True, eq=False, repr=False)(cls)
    cls._keys = tuple(f.name for f in fields(cls) if f.compare)
    return cls


# types

@node
class Obj(Node):
    pass


OBJ = Obj()


@node
class Arr(Node):
    base: object
    src: object
    tgt: object


# terms

@node
class Var(Node):
    index: int
    name: str = field(default="?", compare=False)


@node
class Op(Node):
    ps: object
    ty: object
    sub: object


@node
class Coh(Node):
    ps: object
    ty: object
    sub: object


@node
class UCone(Node):
    """Component of the universal cone: ``target`` indexes the cone context."""
    cone: object
    target: int
    sub: object


@node
class Uni(Node):
    site: object
    target: int
    sub: object


@node
class Inv(Node):
    arg: object


@node
class Eta(Node):
    arg: object


@node
class Eps(Node):
    arg: object


COMPOSITE = (Op, Coh)
LIMIT_NODES = (UCone, Uni, Inv, Eta, Eps)


@node
class Ctx(Node):
    types: tuple
    names: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if len(self.names) != len(self.types):
            raise ValueError("context names and types differ in length")

    @classmethod
    def of(cls, entries):
        entries = list(entries)
        return cls(tuple(t for _, t in entries), tuple(n for n, _ in entries))

    def __len__(self):
        return len(self.types)

    def __iter__(self):
        return iter(zip(self.names, self.types))

    def var(self, i):
        return Var(i, self.names[i])

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise IllScoped(f"unknown variable {name}") from None

    def extend(self, name, ty):
        return Ctx(self.types + (ty,), self.names + (name,))

    def concat(self, other):
        return Ctx(self.types + other.types, self.names + other.names)

    def prefix(self, n):
        return Ctx(self.types[:n], self.names[:n])

    def rename(self, names):
        return Ctx(self.types, tuple(names))


@node
class Sub(Node):
    terms: tuple
    target: object

    def __len__(self):
        return len(self.terms)

    def __getitem__(self, i):
        return self.terms[i]


def identity(ctx):
    return Sub(tuple(Var(i, n) for i, n in enumerate(ctx.names)), ctx)


def is_identity_like(sub, source_len):
    """True when ``sub`` is x0, ..., x(n-1) read in a context of length n."""
    return len(sub.terms) == source_len and all(
        type(t) is Var and t.index == i for i, t in enumerate(sub.terms))


# dimension

def dim_ty(ty):
    d = 0
    while type(ty) is Arr:
        d += 1
        ty = ty.base
    return d


def dim_ctx(ctx):
    return max((dim_ty(t) for t in ctx.types), default=0)


def dim_tm(ctx, t):
    return dim_ty(type_of(ctx, t))


# free variables

def free_vars(e):
    cached = e.__dict__.get("_fv")
    if cached is not None:
        return cached
    k = type(e)
    if k is Var:
        fv = frozenset((e.index,))
    elif k is Obj:
        fv = frozenset()
    elif k is Arr:
        fv = free_vars(e.base) | free_vars(e.src) | free_vars(e.tgt)
    elif k in (Op, Coh, UCone, Uni):
        fv = free_vars(e.sub)
    elif k in (Inv, Eta, Eps):
        fv = free_vars(e.arg)
    elif k is Sub:
        fv = frozenset().union(*(free_vars(t) for t in e.terms))
    elif k is Ctx:
        fv = frozenset(range(len(e)))
    else:
        raise TypeError(f"no free variables for {k.__name__}")
    object.__setattr__(e, "_fv", fv)
    return fv


def fv_typed(ctx, t):
    """FV(t : A) for the inferred A."""
    return free_vars(t) | free_vars(type_of(ctx, t))


def fv_var(ctx, i):
    """FV(x : X) for the i-th entry of ``ctx``."""
    return free_vars(ctx.types[i]) | {i}


# substitution

class _Subst:
    def __init__(self, terms):
        self.terms = terms
        self.memo = {}

    def go(self, e):
        key = id(e)
        hit = self.memo.get(key)
        if hit is not None:
            return hit[1]
        k = type(e)
        if k is Var:
            try:
                out = self.terms[e.index]
            except IndexError:
                out = None
            if out is None:
                raise SubstitutionError(f"substitution has no entry for variable {e.name}")
        elif k is Obj:
            out = e
        elif k is Arr:
            out = Arr(self.go(e.base), self.go(e.src), self.go(e.tgt))
        elif k in (Op, Coh):
            out = k(e.ps, e.ty, self.sub(e.sub))
        elif k is UCone:
            out = UCone(e.cone, e.target, self.sub(e.sub))
        elif k is Uni:
            out = Uni(e.site, e.target, self.sub(e.sub))
        elif k in (Inv, Eta, Eps):
            out = k(self.go(e.arg))
        elif k is Sub:
            out = self.sub(e)
        else:
            raise TypeError(f"cannot substitute into {k.__name__}")
        # keep e alive so its id cannot be recycled while the memo lives
        self.memo[key] = (e, out)
        return out

    def sub(self, theta):
        return Sub(tuple(self.go(t) for t in theta.terms), theta.target)


def apply_sub(e, gamma):
    """e[gamma] for a type, term or substitution."""
    return _Subst(gamma.terms).go(e)


def compose(theta, gamma):
    """theta . gamma, the substitution with entries theta_i[gamma]."""
    return _Subst(gamma.terms).sub(theta)


def reindex(e, mapping, names):
    """Rename variables by ``mapping`` (old index -> new index)."""
    size = max(mapping, default=-1) + 1
    terms = [None] * size
    for old, new in mapping.items():
        terms[old] = Var(new, names[new])
    return _Subst(terms).go(e)


# typing shortcuts shared by every module

def type_of(ctx, t):
    """Type of a term that is already known to be well formed.

    This does no checking; the kernel re-verifies.  Op/Coh/UCone/Uni types do
    not depend on the ambient context and are cached on the node.
    """
    k = type(t)
    if k is Var:
        if t.index >= len(ctx.types):
            raise IllScoped(f"variable {t.name} is not bound here")
        return ctx.types[t.index]
    cached = t.__dict__.get("_ty")
    if cached is not None:
        return cached
    if k in COMPOSITE:
        ty = apply_sub(t.ty, t.sub)
    elif k is Inv:
        a = type_of(ctx, t.arg)
        if type(a) is not Arr:
            raise DimensionError("inv of a 0-dimensional term")
        return Arr(a.base, a.tgt, a.src)
    else:
        from . import limits
        if k in (Eta, Eps):
            return limits.unit_counit_type(ctx, t)
        ty = limits.limit_type(t)
    object.__setattr__(t, "_ty", ty)
    return ty


def src_of(ctx, t, m=1):
    """sigma^m(t)."""
    return _boundary(type_of(ctx, t), m, "src")


def tgt_of(ctx, t, m=1):
    """tau^m(t)."""
    return _boundary(type_of(ctx, t), m, "tgt")


def _boundary(ty, m, side):
    if m < 1:
        raise DimensionError("iterated boundary needs m >= 1")
    for _ in range(m - 1):
        if type(ty) is not Arr:
            break
        ty = ty.base
    if type(ty) is not Arr:
        raise DimensionError("term has no boundary in that dimension")
    return getattr(ty, side)


def ty_side(ty, m, side):
    """Boundary read directly off a type; m=0 is rejected."""
    return _boundary(ty, m, side)


# predicates

def is_categorical(e):
    cached = e.__dict__.get("_cat")
    if cached is not None:
        return cached
    k = type(e)
    if k is Var or k is Obj:
        out = True
    elif k is Arr:
        out = is_categorical(e.base) and is_categorical(e.src) and is_categorical(e.tgt)
    elif k in COMPOSITE:
        out = all(is_categorical(t) for t in e.sub.terms)
    elif k is Sub:
        out = all(is_categorical(t) for t in e.terms)
    else:
        out = False
    object.__setattr__(e, "_cat", out)
    return out


def is_globular_ty(ty):
    while type(ty) is Arr:
        if type(ty.src) is not Var or type(ty.tgt) is not Var:
            return False
        ty = ty.base
    return True


def is_globular(ctx):
    return all(is_globular_ty(t) for t in ctx.types)
