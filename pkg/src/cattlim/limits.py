"""Limits: the universal cone, postcomposition of a transfor with a cone,
the universal-property rules J1-J4 and invertible terms.

The universal cone over a diagram with cone K is the substitution
kappa = <id, lim, ucone(K, p_1), ...> from the diagram into K.  A
universal-property run starts from kappa and walks a whiskered context W
variable by variable:

* J3 copies a variable that precedes the whiskering cell alpha as a fresh
  variable of the source context,
* J4 sends alpha or a later variable to a ``uni`` term,
* J1 produces the ``uni`` term for alpha under any substitution,
* J2 produces an invertible ``uni`` term for a variable after alpha.
"""

from dataclasses import dataclass, field

from .catalog import comp_term, hom_globe, iterated_identity
from .cones import check_cone
from .derivation import Derivation
from .errors import (
    AlphaPosition, DimensionError, ExtensionError, NotInvertible, ShapeMismatch, StarViolation,
    TypeMismatch, WrongZone, var_delta,
)
from .kernel import check_ctx, check_sub, infer_tm
from .printer import show, show_ctx
from .syntax import (
    OBJ, Arr, Ctx, Eps, Eta, Inv, Node, Obj, Sub, UCone, Uni, Var, _Subst, apply_sub,
    dim_ty, free_vars, fv_typed, fv_var, identity, is_identity_like, node, reindex, ty_side, type_of,
)
from .transfors import check_ctrf


# extension judgment

def check_extension(delta, gamma, x):
    """Delta extends Gamma by x (name or index) followed by anything."""
    n = len(gamma)
    if len(delta) <= n or delta.types[:n] != gamma.types:
        raise ExtensionError("context is not a strict extension of the given prefix")
    idx = x if isinstance(x, int) else delta.names.index(x) if x in delta.names else -1
    if idx != n:
        raise ExtensionError(f"{x} does not come immediately after the prefix")
    return True


# universal cone

def kappa_terms(cone, upto):
    """First ``upto`` entries of the universal cone <id, lim, ucone(K, p_i)...>."""
    diagram = cone.diagram
    ident = identity(diagram)
    terms = list(ident.terms[:min(upto, cone.diagram_len)])
    for m in range(cone.diagram_len, upto):
        terms.append(UCone(cone, m, ident))
    return terms


def kappa(cone, upto=None):
    upto = len(cone.ctx) if upto is None else upto
    return Sub(tuple(kappa_terms(cone, upto)), cone.ctx.prefix(upto))


def limit_type(t):
    """Type of a UCone or Uni node; neither depends on the ambient context."""
    if type(t) is UCone:
        x_ty = t.cone.ctx.types[t.target]
        return apply_sub(apply_sub(x_ty, kappa(t.cone, t.target)), t.sub)
    site = t.site
    x_ty = site.whisk.ctx.types[t.target]
    return apply_sub(apply_sub(x_ty, site.theta), t.sub)


@dataclass(frozen=True)
class UniMorphism:
    """A tracked substitution source |-uni sub : target."""
    source: Ctx
    target: Ctx
    sub: Sub
    cone: object = None

    def show(self):
        return f"{show_ctx(self.source)} |-uni {show(self.sub)} : {show_ctx(self.target)}"


def ucone_term(diagram, cone, x, gamma):
    """ucone(K, x)[gamma] and its type; x names or indexes an apex/projection."""
    idx = cone.ctx.index(x) if isinstance(x, str) else x
    if not cone.diagram_len <= idx < len(cone.ctx):
        raise ShapeMismatch("ucone targets the apex or a projection of the cone")
    if diagram.types != cone.diagram.types:
        raise ShapeMismatch("cone is over a different diagram")
    t = UCone(cone, idx, gamma)
    return t, limit_type(t)


def build_ucone(diagram, cone):
    """Gamma |-uni kappa : K, extending the tracked morphism one step at a time."""
    if diagram.types != cone.diagram.types:
        raise ShapeMismatch("cone is over a different diagram")
    ident = identity(diagram)
    terms = list(ident.terms)
    for m in range(cone.diagram_len, len(cone.ctx)):
        t, ty = ucone_term(diagram, cone, m, ident)
        want = apply_sub(cone.ctx.types[m], Sub(tuple(terms), cone.ctx.prefix(m)))
        assert ty == want
        terms.append(t)
    morphism = UniMorphism(diagram, cone.ctx, Sub(tuple(terms), cone.ctx), cone)
    check_sub(diagram, morphism.sub, cone.ctx, derive=False)
    return morphism


# whiskering

@node
class WhiskData(Node):
    """W |-whisk w : M for a cone K and whiskering cell alpha.

    ``ctx`` is W with alpha moved to its normal position, ``sub`` the
    substitution from W into the transfor context.
    """
    ctx: object
    sub: object
    cone: object
    transfor: object
    alpha: int
    name: str = field(default="W", compare=False)

    @property
    def mode(self):
        return "whisk"

    @property
    def target_prefix(self):
        return self.transfor.ctx

    def show(self):
        return f"{show_ctx(self.ctx)} |-whisk {show(self.sub)} : {self.transfor.name}"


def check_whisk(ctx, cone, alpha, sub, transfor, name="W"):
    """Recognize ``ctx`` as the postcomposition of ``transfor`` with ``cone``.

    ``alpha`` is the name or index of the whiskering cell and ``sub`` the
    substitution from ``ctx`` into the transfor context.  Returns WhiskData
    with alpha moved right past every entry that does not mention it.
    """
    g, n = cone.diagram_len, transfor.level
    k = len(cone.ctx)
    a = ctx.index(alpha) if isinstance(alpha, str) else alpha
    if not transfor.conical or transfor.diagram_len != g or \
            transfor.ctx.types[:g + 1] != cone.ctx.types[:g + 1]:
        raise ShapeMismatch("the transfor is not over the cone's diagram")
    if len(ctx) < k + 2 or ctx.types[:k] != cone.ctx.types:
        raise ShapeMismatch("whisk context must start with the cone context")
    if type(ctx.types[k]) is not Obj:
        raise ShapeMismatch(f"{ctx.names[k]} must be the new apex")
    if dim_ty(ctx.types[a]) != n:
        raise DimensionError(f"{ctx.names[a]} has dimension {dim_ty(ctx.types[a])}, the transfor level is {n}")
    start = k + 2 * n - 1
    if a < start:
        raise AlphaPosition(f"{ctx.names[a]} sits inside the hom-globe")
    if not free_vars(ctx.types[a]) <= set(range(start)):
        raise AlphaPosition(f"type of {ctx.names[a]} mentions later variables")
    # construction order: alpha at the end of the hom-globe
    order = list(range(start)) + [a] + [j for j in range(start, len(ctx)) if j != a]
    built = _permute(ctx, order)
    mapping = {old: new for new, old in enumerate(order)}
    globe = hom_globe(cone.ctx.extend(ctx.names[k], OBJ), k, g, n)
    if built.types[:start + 1] != globe.types:
        raise ShapeMismatch("entries after the new apex do not form a hom-globe into the old apex")
    check_ctx(built, derive=False)
    normal = start
    while normal + 1 < len(built) and start not in free_vars(built.types[normal + 1]):
        normal += 1
    if a > normal:
        raise AlphaPosition(f"{ctx.names[a]} is placed after an entry that depends on it")
    if len(sub.terms) != len(transfor.ctx):
        raise ShapeMismatch("whisk substitution does not cover the transfor context")
    w = [reindex(t, mapping, built.names) for t in sub.terms]
    if any(w[i] != Var(i) for i in range(g)) or w[g] != Var(k):
        raise ShapeMismatch("whisk substitution must start with the diagram identity and the new apex")
    wsub = Sub(tuple(w), transfor.ctx)
    inst = _Subst(tuple(w))
    fresh = start + 1
    for j_abs in range(g + 1, len(transfor.ctx)):
        seg, row = transfor.segment_of(j_abs)
        want = inst.go(transfor.ctx.types[j_abs])
        u = w[j_abs]
        if seg in (2 * n - 1, 2 * n + 1):
            if u != Var(fresh) or fresh >= len(built) or built.types[fresh] != want:
                raise ShapeMismatch(
                    f"{transfor.ctx.names[j_abs]} must map to the fresh variable of type {show(want)}"
                    f" at position {fresh + 1}")
            fresh += 1
        else:
            got = infer_tm(built.prefix(fresh), u, derive=False).inferred
            if got != want:
                raise TypeMismatch(f"{show(u)} has type {show(got)}, expected {show(want)}")
            _check_star(built, cone, start, n, seg, row, u, want)
    if fresh != len(built):
        raise ShapeMismatch("whisk context has entries not produced by the transfor")
    check_sub(built, wsub, transfor.ctx, derive=False)
    # normalize: slide alpha to the right
    final = list(range(start)) + list(range(start + 1, normal + 1)) + [start] + \
        list(range(normal + 1, len(built)))
    norm = _permute(built, final)
    remap = {old: new for new, old in enumerate(final)}
    wn = Sub(tuple(reindex(t, remap, norm.names) for t in w), transfor.ctx)
    return WhiskData(norm, wn, cone, transfor, normal, name)


def _permute(ctx, order):
    mapping = {old: new for new, old in enumerate(order)}
    names = tuple(ctx.names[i] for i in order)
    return Ctx(tuple(reindex(ctx.types[i], mapping, names) for i in order), names)


def _check_star(ctx, cone, alpha, n, seg, row, u, ty):
    """FV(u : X[w]) must be FV(delta^e(alpha)) together with FV(p_row : T_row).

    The exponent is e = n - ceil(seg / 2) and delta is the source for odd
    segments, the target for even ones.
    """
    e = n - (seg + 1) // 2
    a = Var(alpha, ctx.names[alpha])
    if e > 0:
        a = ty_side(ctx.types[alpha], e, "src" if seg % 2 else "tgt")
    want = fv_typed(ctx, a) | fv_var(ctx, cone.projection(row))
    got = free_vars(u) | free_vars(ty)
    if got != want:
        missing, extra = var_delta(ctx, got, want)
        raise StarViolation(f"{show(u)} breaks the whisk condition: missing {missing}, extra {extra}",
                            missing=missing, extra=extra)


# universal property

@node
class UniSite(Node):
    """Everything a ``uni`` term needs to re-verify its introduction."""
    whisk: object
    omega: object
    theta: object
    name: str = field(default="R", compare=False)

    @property
    def focus(self):
        return len(self.theta.terms)

    @property
    def cone(self):
        return self.whisk.cone

    @property
    def transfor(self):
        return self.whisk.transfor

    def zone(self, x=None):
        x = self.focus if x is None else x
        a = self.whisk.alpha
        return "lambda" if x < a else "alpha" if x == a else "delta"


class UniversalProperty:
    """A universal-property development over a whisk context.

    ``tracked`` must be the universal cone over the whisk's cone.  Each
    ``apply`` either extends the tracked morphism (J3, J4) or returns a
    term (J1, J2).
    """

    def __init__(self, tracked, whisk, name="R", marks=None):
        cone = whisk.cone
        if tracked.target.types != cone.ctx.types or tracked.sub.terms != tuple(kappa_terms(cone, len(cone.ctx))):
            raise ShapeMismatch("the tracked morphism is not the universal cone of the whisk's cone")
        self.whisk = whisk
        self.name = name
        self.omega = tracked.source
        self.terms = list(tracked.sub.terms)
        self.marks = marks if marks is not None else InvertibleMark()
        self.history = []
        self.sites = {}

    @property
    def focus(self):
        return len(self.terms)

    @property
    def done(self):
        return self.focus >= len(self.whisk.ctx)

    def site(self):
        W = self.whisk.ctx
        theta = Sub(tuple(self.terms), W.prefix(self.focus))
        return UniSite(self.whisk, self.omega, theta, self.name)

    def tracked(self):
        W = self.whisk.ctx
        return UniMorphism(self.omega, W.prefix(self.focus), Sub(tuple(self.terms), W.prefix(self.focus)),
                           self.whisk.cone)

    def zone(self):
        if self.done:
            raise WrongZone("every variable of the whisk context has been handled")
        return self.site().zone()

    def apply(self, rule, sub=None, source=None, fresh_name=None):
        rule = rule.upper()
        zone = self.zone()
        x = self.focus
        W = self.whisk.ctx
        xname = W.names[x]
        allowed = {"J1": ("alpha",), "J2": ("delta",), "J3": ("lambda",), "J4": ("alpha", "delta")}
        if rule not in allowed:
            raise ValueError(f"unknown rule {rule}")
        if zone not in allowed[rule]:
            raise WrongZone(f"{rule} does not apply to {xname}, which lies in zone {zone}")
        site = self.site()
        if rule == "J3":
            name = fresh_name or _fresh_name(xname, self.omega)
            if name in self.omega.names:
                raise ExtensionError(f"{name} is already used in the source context")
            ty = apply_sub(W.types[x], site.theta)
            self.omega = self.omega.extend(name, ty)
            self.terms.append(Var(len(self.omega) - 1, name))
            self.history.append((rule, xname))
            return self.tracked()
        if rule == "J4":
            self.sites[xname] = site
            self.terms.append(Uni(site, x, identity(self.omega)))
            self.history.append((rule, xname))
            return self.tracked()
        if rule == "J1":
            self.sites[xname] = site
            source = self.omega if source is None else source
            sub = identity(self.omega) if sub is None else sub
            t = Uni(site, x, sub)
            ty = infer_tm(source, t, derive=False).inferred
            self.history.append((rule, xname))
            return t, ty
        self.sites[xname] = site
        t = Uni(site, x, identity(self.omega))
        ty = infer_tm(self.omega, t, derive=False).inferred
        self.marks.mark(self.omega, t)
        self.history.append((rule, xname))
        return t, ty


def apply_universal_property(run, rule, sub=None, source=None, fresh_name=None):
    return run.apply(rule, sub=sub, source=source, fresh_name=fresh_name)


def _fresh_name(name, omega):
    out = name if name.endswith("'") else name + "'"
    while out in omega.names:
        out += "'"
    return out


# invertibility

def derives_invertible(t):
    """Structural form of the invertibility judgment."""
    k = type(t)
    if k is Uni:
        return t.site.zone(t.target) == "delta"
    if k in (Inv, Eta, Eps):
        return derives_invertible(t.arg)
    return False


class InvertibleMark:
    """Terms marked invertible within one development."""

    def __init__(self):
        self.marked = set()

    def mark(self, ctx, t):
        infer_tm(ctx, t, derive=False)
        if not derives_invertible(t):
            raise NotInvertible(f"{show(t)} is not invertible")
        self.marked.add(t)
        return t

    def __contains__(self, t):
        return t in self.marked


def _wrap(kind, u, gamma, ctx, marks):
    if gamma is not None:
        u = apply_sub(u, gamma)
    marked = marks is not None and u in marks
    if not marked and not derives_invertible(u):
        raise NotInvertible(f"{show(u)} is not invertible")
    t = kind(u)
    if ctx is not None:
        infer_tm(ctx, t, derive=False)
        if marks is not None:
            marks.mark(ctx, t)
    return t


def inv(u, gamma=None, ctx=None, marks=None):
    return _wrap(Inv, u, gamma, ctx, marks)


def eta(u, gamma=None, ctx=None, marks=None):
    return _wrap(Eta, u, gamma, ctx, marks)


def eps(u, gamma=None, ctx=None, marks=None):
    return _wrap(Eps, u, gamma, ctx, marks)


def unit_counit_type(ctx, t):
    u = t.arg
    a = type_of(ctx, u)
    if type(a) is not Arr:
        raise DimensionError("unit and counit need a term of positive dimension")
    d = dim_ty(a)
    if type(t) is Eta:
        ident = iterated_identity(a.src, 1, ctx)
        return Arr(type_of(ctx, ident), ident, comp_term(u, Inv(u), d, d - 1, ctx))
    ident = iterated_identity(a.tgt, 1, ctx)
    return Arr(type_of(ctx, ident), comp_term(Inv(u), u, d, d - 1, ctx), ident)


# kernel hook

_verified_sites = set()
_verified_cones = set()


def _verify_cone(cone):
    if cone not in _verified_cones:
        again = check_cone(cone.ctx, cone.diagram)
        assert again == cone
        _verified_cones.add(cone)


def _verify_site(site):
    if site in _verified_sites:
        return
    wd = site.whisk
    _verify_cone(wd.cone)
    tf = wd.transfor
    check_ctrf(tf.ctx, tf.all_segments())
    again = check_whisk(wd.ctx, wd.cone, wd.alpha, wd.sub, tf)
    if again != wd:
        raise ShapeMismatch("stored whisk data does not re-verify")
    W, omega, theta = wd.ctx, site.omega, site.theta
    cone = wd.cone
    k = len(cone.ctx)
    g = cone.diagram_len
    if site.focus < k or site.focus >= len(W):
        raise ExtensionError("uni focus must lie after the cone context")
    if omega.types[:g] != cone.diagram.types or tuple(theta.terms[:k]) != tuple(kappa_terms(cone, k)):
        raise ShapeMismatch("tracked morphism does not start with the universal cone")
    check_ctx(omega, derive=False)
    fresh = g
    for j in range(k, site.focus):
        t = theta.terms[j]
        if site.zone(j) == "lambda":
            if t != Var(fresh):
                raise ShapeMismatch(f"{W.names[j]} must be sent to a fresh variable")
            fresh += 1
        elif type(t) is not Uni or t.target != j or t.site.whisk != wd or \
                t.site.omega != omega or not is_identity_like(t.sub, len(omega)):
            raise ShapeMismatch(f"{W.names[j]} must be sent to its uni term")
    if fresh != len(omega):
        raise ShapeMismatch("source context has variables the development did not introduce")
    check_sub(omega, theta, W.prefix(site.focus), derive=False)
    _verified_sites.add(site)


def infer_limit(ctx, t, derive):
    """Type and derivation for the limit constructors."""
    k = type(t)
    if k is UCone:
        cone = t.cone
        _verify_cone(cone)
        if not cone.diagram_len <= t.target < len(cone.ctx):
            raise ShapeMismatch("ucone must target the apex or a projection")
        sd = check_sub(ctx, t.sub, cone.diagram, derive)
        ty = type_of(ctx, t)
        rule, prem = "UCONE", (sd.derivation,)
    elif k is Uni:
        site = t.site
        _verify_site(site)
        if site.zone(t.target) == "lambda" or t.target != site.focus:
            raise WrongZone("uni is only formed for the focused whiskering cell or a later variable")
        sd = check_sub(ctx, t.sub, site.omega, derive)
        ty = type_of(ctx, t)
        rule, prem = "UNI", (sd.derivation,)
    else:
        r = infer_tm(ctx, t.arg, derive)
        if type(r.inferred) is not Arr:
            raise DimensionError("inv/eta/eps need a term of positive dimension")
        if not derives_invertible(t.arg):
            raise NotInvertible(f"{show(t.arg)} is not invertible")
        ty = type_of(ctx, t)
        rule, prem = k.__name__.upper(), (r.derivation,)
    node_ = None
    if derive:
        node_ = Derivation(f"({', '.join(ctx.names)}) |- {show(t)} : {show(ty)}", rule, prem)
    return ty, node_
