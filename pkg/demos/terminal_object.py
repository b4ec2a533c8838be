"""The terminal object as the lax limit of the empty diagram.

Walks both universal-property developments step by step: a map c' -> lim
out of every object, and a 2-cell between any two such maps.  Every term
the rules emit is re-checked by the kernel before it is printed.

    python demos/terminal_object.py
"""

import time

from cattlim.cones import check_cone
from cattlim.kernel import check_sub, infer_tm
from cattlim.limits import UniversalProperty, build_ucone, check_whisk
from cattlim.printer import show, show_ctx
from cattlim.surface import Session
from cattlim.syntax import Ctx, Sub
from cattlim.transfors import check_ctrf


def recheck(morphism):
    for t in morphism.sub.terms:
        infer_tm(morphism.source, t, derive=False)
    check_sub(morphism.source, morphism.sub, morphism.target, derive=False)


def develop(session, cone, tracked, level, whisk_text, alpha, rules):
    segments = (0, 1) + (0,) * (2 * level + 1)
    transfor = check_ctrf(session.read_ctx("(c : Ob)"), segments, name=f"M{level}")
    w_ctx = session.read_ctx(whisk_text)
    sub = Sub((w_ctx.var(w_ctx.index("c'")),), transfor.ctx)
    whisk = check_whisk(w_ctx, cone, alpha, sub, transfor)
    print(f"whisk context  {show_ctx(whisk.ctx)}")
    run = UniversalProperty(tracked, whisk)
    for rule in rules:
        m = run.apply(rule)
        recheck(m)
        print(f"  {rule}  {show(m.sub)}")
    return run.tracked()


def main():
    start = time.perf_counter()
    s = Session()
    cone = check_cone(s.read_ctx("(c : Ob)"), Ctx((), ()), name="T")
    tracked = build_ucone(Ctx((), ()), cone)
    recheck(tracked)
    print(f"universal cone {tracked.show()}\n")

    first = develop(s, cone, tracked, 1, "(c : Ob, c' : Ob, f : c' -> c)", "f", ["J3", "J4"])
    print(f"result         {first.show()}\n")

    second = develop(s, cone, tracked, 2,
                     "(c : Ob, c' : Ob, f : c' -> c, g : c' -> c, alpha : f -> g)", "alpha",
                     ["J3", "J3", "J3", "J4"])
    print(f"result         {second.show()}\n")
    print(f"done in {1000 * (time.perf_counter() - start):.1f} ms")
    return first, second


if __name__ == "__main__":
    main()
