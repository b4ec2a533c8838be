"""Random well-typed syntax for property tests.

Everything is driven by a ``random.Random`` so hypothesis can supply the
seed and replay failures.
"""

from cattlim.catalog import comp_term, iterated_identity
from cattlim.syntax import (
    OBJ, Arr, Coh, Ctx, Eps, Eta, Inv, Obj, Op, Sub, UCone, Uni, Var, dim_ty, type_of,
)


def random_ps(rng, max_dim=2, max_pairs=4):
    """A random pasting context built by PSE/PSD moves."""
    names = iter(f"v{i}" for i in range(100))
    types = [OBJ]
    ctx_names = [next(names)]
    focus = 0
    for _ in range(rng.randint(0, max_pairs)):
        # drop the focus a random number of times
        while dim_ty(types[focus]) > 0 and rng.random() < 0.4:
            focus = types[focus].tgt.index
        if dim_ty(types[focus]) >= max_dim:
            focus = types[focus].tgt.index
        a = types[focus]
        y = len(types)
        types.append(a)
        ctx_names.append(next(names))
        types.append(Arr(a, Var(focus, ctx_names[focus]), Var(y, ctx_names[y])))
        ctx_names.append(next(names))
        focus = y + 1
    return Ctx(tuple(types), tuple(ctx_names))


def term_pool(rng, ctx, rounds=6):
    """Variables of ``ctx`` plus random identities and binary composites."""
    pool = [(ctx.var(i), ctx.types[i]) for i in range(len(ctx))]
    for _ in range(rounds):
        choice = rng.random()
        if choice < 0.3:
            t, _ = rng.choice(pool)
            if dim_ty(type_of(ctx, t)) < 3:
                u = iterated_identity(t, 1, ctx)
                pool.append((u, type_of(ctx, u)))
        else:
            found = _composable_pair(rng, ctx, pool)
            if found is not None:
                u, v, d, n = found
                w = comp_term(u, v, d, n, ctx)
                pool.append((w, type_of(ctx, w)))
    return pool


def _composable_pair(rng, ctx, pool):
    candidates = []
    for u, a in pool:
        d = dim_ty(a)
        if d == 0 or d > 3:
            continue
        for v, b in pool:
            if dim_ty(b) != d:
                continue
            for n in range(d):
                if _side(a, d - n, "tgt") == _side(b, d - n, "src"):
                    candidates.append((u, v, d, n))
    if not candidates:
        return None
    return rng.choice(candidates)


def _side(ty, m, side):
    for _ in range(m - 1):
        ty = ty.base
    return getattr(ty, side)


def random_sub(rng, source, target, pool=None):
    """A substitution source -> target for a pasting context ``target``.

    Each new pair (y, f) extending the focus x is sent to a pool term
    starting at x's image, or to the identity on it when none exists.
    """
    pool = pool if pool is not None else term_pool(rng, source)
    objects = [t for t, a in pool if a == OBJ]
    terms = [rng.choice(objects)]
    for i in range(1, len(target), 2):
        f_ty = target.types[i + 1]
        want_base = naive_subst(f_ty.base, terms)
        start = terms[f_ty.src.index]
        options = [t for t, a in pool if type(a) is Arr and a.base == want_base and a.src == start]
        if options and rng.random() < 0.8:
            f = rng.choice(options)
            fa = type_of(source, f)
            terms += [fa.tgt, f]
        else:
            f = iterated_identity(start, 1, source)
            terms += [start, f]
    return Sub(tuple(terms), target)


def naive_subst(e, terms):
    """Structural substitution written independently of the library."""
    k = type(e)
    if k is Var:
        return terms[e.index]
    if k is Obj:
        return e
    if k is Arr:
        return Arr(naive_subst(e.base, terms), naive_subst(e.src, terms), naive_subst(e.tgt, terms))
    if k is Sub:
        return Sub(tuple(naive_subst(t, terms) for t in e.terms), e.target)
    if k in (Op, Coh):
        return k(e.ps, e.ty, naive_subst(e.sub, terms))
    if k is UCone:
        return UCone(e.cone, e.target, naive_subst(e.sub, terms))
    if k is Uni:
        return Uni(e.site, e.target, naive_subst(e.sub, terms))
    if k in (Inv, Eta, Eps):
        return k(naive_subst(e.arg, terms))
    raise TypeError(k)


def naive_compose(theta, gamma):
    return Sub(tuple(naive_subst(t, gamma.terms) for t in theta.terms), theta.target)
