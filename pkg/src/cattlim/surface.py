"""Surface syntax: lexer, parser and declaration-by-declaration elaborator.

A file is a sequence of declarations::

    ctx G = (x : Ob, y : Ob, f : x -> y)
    coh id1 (x : Ob) : x -> x
    let ff in G = (f *{1,0} 1(y))
    cone K of G
    assert p_f : p_y -> (p_x *{1,0} f) in K
    assert_fail [side-condition] op bad (x : Ob, y : Ob, f : x -> y) : x -> x

See README.md for the full grammar.
"""

import re
from dataclasses import dataclass, field

from . import catalog, cones, kernel, limits, transfors
from .derivation import Derivation
from .errors import AssertionFailed, DuplicateName, IllScoped, ParseError, ShapeMismatch, TypeMismatch
from .printer import show, show_ctx
from .syntax import OBJ, Arr, Coh, Ctx, Eps, Eta, Inv, Op, Sub, UCone, Uni, identity

# lexer

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<arrow>->)
  | (?P<num>\d+)
  | (?P<name>[^\W\d][\w'′]*)
  | (?P<kind>\[[a-z][a-z-]*\])
  | (?P<sym>[()<>,:=|*{}^+])
""", re.VERBOSE)


@dataclass
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text):
    tokens = []
    line, start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            start = m.end()
        elif kind not in ("ws", "comment"):
            tokens.append(Token(kind, m.group(), line, pos - start + 1))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - start + 1))
    return tokens


# abstract syntax

@dataclass
class Decl:
    kind: str
    name: str
    args: dict = field(default_factory=dict)
    line: int = 0
    col: int = 0


@dataclass
class SourceFile:
    declarations: list


KEYWORDS = {"ctx", "coh", "op", "let", "cone", "gray", "ctrf", "limit", "whisk", "uni",
            "apply", "assert", "assert_fail", "print"}


class Parser:
    def __init__(self, text):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def error(self, msg, tok=None):
        tok = tok or self.tok
        found = tok.text or "end of file"
        raise ParseError(f"{msg} (found {found!r})", tok.line, tok.col)

    def next(self):
        t = self.tok
        self.i += 1
        return t

    def at(self, text):
        return self.tok.text == text and self.tok.kind in ("sym", "arrow", "name")

    def accept(self, text):
        if self.at(text):
            return self.next()
        return None

    def expect(self, text):
        if not self.at(text):
            self.error(f"expected {text!r}")
        return self.next()

    def name(self):
        if self.tok.kind != "name":
            self.error("expected a name")
        return self.next().text

    def number(self):
        if self.tok.kind != "num":
            self.error("expected a number")
        return int(self.next().text)

    def parse_file(self):
        decls = []
        while self.tok.kind != "eof":
            decls.append(self.decl())
        return SourceFile(decls)

    def decl(self):
        tok = self.tok
        if tok.kind != "name" or tok.text not in KEYWORDS:
            self.error("expected a declaration keyword")
        kw = self.next().text
        d = getattr(self, "decl_" + kw)()
        d.line, d.col = tok.line, tok.col
        return d

    def decl_ctx(self):
        name = self.name()
        self.expect("=")
        return Decl("ctx", name, {"ctx": self.ctx_expr()})

    def decl_coh(self, kind="coh"):
        name = self.name()
        ps = self.ctx_expr()
        self.expect(":")
        return Decl(kind, name, {"ps": ps, "type": self.type_()})

    def decl_op(self):
        return self.decl_coh("op")

    def decl_let(self):
        name = self.name()
        self.expect("in")
        ctx = self.ctx_expr()
        self.expect("=")
        return Decl("let", name, {"ctx": ctx, "term": self.term()})

    def decl_cone(self):
        name = self.name()
        if self.accept("of"):
            args = {"diagram": self.ctx_expr(), "apex": None}
            if self.accept("apex"):
                args["apex"] = self.name()
            return Decl("cone", name, args)
        self.expect("=")
        ctx = self.ctx_expr()
        self.expect("over")
        return Decl("cone", name, {"ctx": ctx, "diagram": self.ctx_expr()})

    def decl_gray(self):
        name = self.name()
        if self.accept("of"):
            return Decl("gray", name, {"diagram": self.ctx_expr()})
        self.expect("=")
        return Decl("gray", name, {"ctx": self.ctx_expr()})

    def decl_ctrf(self):
        name = self.name()
        self.expect("=")
        return Decl("ctrf", name, {"ctx": self.ctx_expr()})

    def decl_limit(self):
        name = self.name()
        self.expect("of")
        return Decl("limit", name, {"source": self.name()})

    def decl_whisk(self):
        # whisk W = CTX along K at ALPHA via M <terms>
        name = self.name()
        self.expect("=")
        ctx = self.ctx_expr()
        self.expect("along")
        cone = self.name()
        self.expect("at")
        alpha = self.name()
        self.expect("via")
        transfor = self.name()
        return Decl("whisk", name, {"ctx": ctx, "cone": cone, "alpha": alpha,
                                    "transfor": transfor, "terms": self.sub_terms()})

    def decl_uni(self):
        name = self.name()
        self.expect("from")
        tracked = self.name()
        self.expect("over")
        return Decl("uni", name, {"limit": tracked, "whisk": self.name()})

    def decl_apply(self):
        tok = self.tok
        rule = self.name().upper()
        if rule not in ("J1", "J2", "J3", "J4"):
            self.error("expected J1, J2, J3 or J4", tok)
        run = self.name()
        args = {"rule": rule, "run": run, "as": None, "ctx": None, "terms": None}
        if self.accept("as"):
            args["as"] = self.name()
        if rule == "J1" and self.accept("in"):
            args["ctx"] = self.ctx_expr()
            args["terms"] = self.sub_terms()
        return Decl("apply", args["as"] or run, args)

    def decl_assert(self):
        name = self.name()
        self.expect(":")
        ty = self.type_()
        ctx = self.ctx_expr() if self.accept("in") else None
        return Decl("assert", name, {"type": ty, "ctx": ctx})

    def decl_assert_fail(self):
        kind = None
        if self.tok.kind == "kind":
            kind = self.next().text[1:-1]
        inner = self.decl()
        return Decl("assert_fail", inner.name, {"kind": kind, "decl": inner})

    def decl_print(self):
        return Decl("print", self.name())

    # contexts

    def ctx_expr(self):
        if self.at("("):
            base = ("lit", self.ctx_literal())
        else:
            tok = self.tok
            name = self.name()
            if name in ("globe", "scheme") and self.at("("):
                self.expect("(")
                nums = [self.number()]
                while self.accept(","):
                    nums.append(self.number())
                self.expect(")")
                if (name == "globe") != (len(nums) == 1) or len(nums) > 2:
                    self.error(f"wrong number of arguments to {name}", tok)
                base = ("builtin", name, nums)
            else:
                base = ("name", name)
        while self.accept("+"):
            if not self.at("("):
                self.error("expected a context literal after '+'")
            base = ("ext", base, self.ctx_literal())
        return base

    def ctx_literal(self):
        self.expect("(")
        segments = [[]]
        if self.accept(")"):
            return segments
        while True:
            if self.accept("|"):
                segments.append([])
                continue
            if self.at(")"):
                break
            if segments[-1] and not self.accept(","):
                self.error("expected ',' or '|' between entries")
            if self.at("|") or self.at(")"):
                continue
            tok = self.tok
            name = self.name()
            self.expect(":")
            segments[-1].append((name, self.type_(), tok))
        self.expect(")")
        return segments

    # types and terms

    def type_(self):
        if self.accept("Ob"):
            return ("ob",)
        s = self.term()
        self.expect("->")
        return ("arr", s, self.term())

    def sub_terms(self):
        self.expect("<")
        terms = []
        if self.accept(">"):
            return terms
        terms.append(self.term())
        while self.accept(","):
            terms.append(self.term())
        self.expect(">")
        return terms

    def term(self):
        tok = self.tok
        if self.accept("("):
            left = self.term()
            if self.accept("*"):
                self.expect("{")
                d = self.number()
                self.expect(",")
                n = self.number()
                self.expect("}")
                right = self.term()
                self.expect(")")
                return ("comp", left, d, n, right, tok)
            self.expect(")")
            return left
        if tok.kind == "num":
            if tok.text != "1":
                self.error("only 1 may start an identity")
            self.next()
            k = 1
            if self.accept("^"):
                k = self.number()
            self.expect("(")
            t = self.term()
            self.expect(")")
            return ("ident", k, t, tok)
        name = self.name()
        if name in ("op", "coh") and self.at("{"):
            self.expect("{")
            ps = self.ctx_expr()
            self.expect(":")
            ty = self.type_()
            self.expect("}")
            return ("explicit", name, ps, ty, self.sub_terms(), tok)
        if name in ("inv", "eta", "eps") and self.at("("):
            self.expect("(")
            t = self.term()
            self.expect(")")
            return (name, t, tok)
        if name in ("lim", "ucone", "uni") and self.at("("):
            self.expect("(")
            first = self.name()
            second = None
            if name != "lim":
                self.expect(",")
                second = self.name()
            self.expect(")")
            terms = self.sub_terms() if self.at("<") else None
            return (name, first, second, terms, tok)
        if self.at("<"):
            return ("app", name, self.sub_terms(), tok)
        return ("id", name, tok)


def parse(text):
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    return Parser(text).parse_file()


# elaboration

@dataclass
class Entry:
    kind: str
    value: object
    extra: dict = field(default_factory=dict)


@dataclass
class Outcome:
    decl: Decl
    ok: bool
    message: str = ""
    error_kind: str = ""
    elaborated: str = ""
    derivation: object = None
    seconds: float = 0.0


class Session:
    """Elaborates declarations in order against a growing environment."""

    def __init__(self, derive=False):
        self.env = {}
        self.derive = derive
        self.marks = limits.InvertibleMark()

    # lookup helpers

    def lookup(self, name, kind=None, tok=None):
        e = self.env.get(name)
        if e is None or (kind is not None and e.kind not in (kind if isinstance(kind, tuple) else (kind,))):
            want = kind if isinstance(kind, str) else "/".join(kind) if kind else "declaration"
            raise IllScoped(f"no {want} named {name}")
        return e

    def bind(self, name, entry):
        if name in self.env:
            raise DuplicateName(f"{name} is already declared")
        self.env[name] = entry

    # contexts

    def ctx(self, expr):
        """Elaborate a context expression to (Ctx, segment lengths or None)."""
        kind = expr[0]
        if kind == "name":
            e = self.lookup(expr[1])
            if e.kind in ("ctx", "cone", "gray", "ctrf", "limit"):
                return e.extra["ctx"], e.extra.get("segments")
            if e.kind == "whisk":
                return e.value.ctx, None
            raise IllScoped(f"{expr[1]} is not a context")
        if kind == "builtin":
            if expr[1] == "globe":
                return catalog.globe(expr[2][0]), None
            return catalog.comp_scheme(*expr[2]), None
        if kind == "lit":
            return self.ctx_lit(Ctx((), ()), None, expr[1])
        base, segs = self.ctx(expr[1])
        return self.ctx_lit(base, segs, expr[2])

    def ctx_lit(self, base, base_segs, segments):
        ctx = base
        lengths = list(base_segs) if base_segs else ([len(base)] if len(base) else [])
        for k, seg in enumerate(segments):
            if k > 0 or not lengths:
                lengths.append(0)
            for name, ty_ast, tok in seg:
                if name in ctx.names:
                    raise DuplicateName(f"variable {name} is declared twice (line {tok.line})")
                ty = self.ty(ctx, ty_ast)
                ctx = ctx.extend(name, ty)
                lengths[-1] += 1
        kernel.check_ctx(ctx, derive=False)
        has_segments = len(segments) > 1 or (base_segs and len(base_segs) > 1)
        return ctx, (tuple(lengths) if has_segments else None)

    def ty(self, ctx, ast):
        if ast[0] == "ob":
            return OBJ
        s, t = self.tm(ctx, ast[1]), self.tm(ctx, ast[2])
        a = kernel.infer_tm(ctx, s, derive=False).inferred
        b = kernel.infer_tm(ctx, t, derive=False).inferred
        if a != b:
            raise TypeMismatch(f"{show(s)} : {show(a)} and {show(t)} : {show(b)} are not parallel")
        return Arr(a, s, t)

    def tm(self, ctx, ast):
        kind = ast[0]
        if kind == "id":
            name = ast[1]
            if name in ctx.names:
                return ctx.var(ctx.index(name))
            e = self.env.get(name)
            if e is not None and e.kind == "let":
                lctx = e.extra["ctx"]
                if len(lctx) <= len(ctx) and ctx.types[:len(lctx)] == lctx.types:
                    return e.value
                raise IllScoped(f"{name} is defined in a context this one does not extend")
            raise IllScoped(f"unknown variable {name} (line {ast[2].line}, column {ast[2].col})")
        if kind == "comp":
            u, v = self.tm(ctx, ast[1]), self.tm(ctx, ast[4])
            return catalog.comp_term(u, v, ast[2], ast[3], ctx)
        if kind == "ident":
            t = self.tm(ctx, ast[2])
            kernel.infer_tm(ctx, t, derive=False)
            return catalog.iterated_identity(t, ast[1], ctx)
        if kind == "app":
            e = self.lookup(ast[1], ("coh", "op"))
            ps, ty = e.value
            node = Coh if e.kind == "coh" else Op
            return self.checked(ctx, node(ps, ty, self.sub(ctx, ast[2], ps)))
        if kind == "explicit":
            ps, _ = self.ctx(ast[2])
            ty = self.ty(ps, ast[3])
            node = Coh if ast[1] == "coh" else Op
            kernel.check_header(node, ps, ty)
            return self.checked(ctx, node(ps, ty, self.sub(ctx, ast[4], ps)))
        if kind in ("inv", "eta", "eps"):
            t = self.tm(ctx, ast[1])
            node = {"inv": Inv, "eta": Eta, "eps": Eps}[kind]
            return self.checked(ctx, node(t))
        if kind in ("lim", "ucone"):
            cone = self._cone(ast[1])
            idx = cone.apex if kind == "lim" else cone.ctx.index(ast[2])
            if idx < cone.apex:
                raise ShapeMismatch(f"{ast[2]} is not a projection of {cone.name}")
            if ast[3] is None:
                sub = self.default_sub(ctx, cone.diagram)
            else:
                sub = self.sub(ctx, ast[3], cone.diagram)
            return self.checked(ctx, UCone(cone, idx, sub))
        if kind == "uni":
            run = self.lookup(ast[1], "uni").value
            sites = run.sites
            if ast[2] not in sites:
                raise IllScoped(f"the development {ast[1]} has no uni term for {ast[2]}")
            site = sites[ast[2]]
            if ast[3] is None:
                sub = self.default_sub(ctx, site.omega)
            else:
                sub = self.sub(ctx, ast[3], site.omega)
            return self.checked(ctx, Uni(site, site.focus, sub))
        raise ParseError(f"unknown term form {kind}")

    def default_sub(self, ctx, target):
        if ctx.types[:len(target)] != target.types:
            raise IllScoped("a substitution is required outside the source context")
        return identity(target)

    def sub(self, ctx, asts, target):
        terms = tuple(self.tm(ctx, a) for a in asts)
        sub = Sub(terms, target)
        kernel.check_sub(ctx, sub, target, derive=False)
        return sub

    def checked(self, ctx, t):
        kernel.infer_tm(ctx, t, derive=False)
        return t

    def read_ctx(self, text):
        """Elaborate context text against the current environment."""
        parser = Parser(text)
        expr = parser.ctx_expr()
        if parser.tok.kind != "eof":
            parser.error("trailing input after context")
        return self.ctx(expr)[0]

    def read_term(self, ctx, text):
        parser = Parser(text)
        ast = parser.term()
        if parser.tok.kind != "eof":
            parser.error("trailing input after term")
        return self.tm(ctx, ast)

    def read_type(self, ctx, text):
        parser = Parser(text)
        ast = parser.type_()
        if parser.tok.kind != "eof":
            parser.error("trailing input after type")
        return self.ty(ctx, ast)

    # declarations

    def run_decl(self, d):
        """Elaborate one declaration; returns (printed form, derivation)."""
        return getattr(self, "do_" + d.kind)(d)

    def do_ctx(self, d):
        ctx, segs = self.ctx(d.args["ctx"])
        deriv = kernel.check_ctx(ctx, derive=self.derive).derivation
        self.bind(d.name, Entry("ctx", ctx, {"ctx": ctx, "segments": segs}))
        return f"ctx {d.name} = {show_ctx(ctx, segs)}", deriv

    def do_coh(self, d):
        ps, _ = self.ctx(d.args["ps"])
        ty = self.ty(ps, d.args["type"])
        node = Coh if d.kind == "coh" else Op
        deriv = kernel.check_header(node, ps, ty)
        self.bind(d.name, Entry(d.kind, (ps, ty)))
        return f"{d.kind} {d.name} {show_ctx(ps)} : {show(ty)}", deriv

    do_op = do_coh

    def do_let(self, d):
        ctx, _ = self.ctx(d.args["ctx"])
        t = self.tm(ctx, d.args["term"])
        r = kernel.infer_tm(ctx, t, derive=self.derive)
        self.bind(d.name, Entry("let", t, {"ctx": ctx, "type": r.inferred}))
        return f"let {d.name} : {show(r.inferred)} = {show(t)}", r.derivation

    def do_cone(self, d):
        diagram, _ = self.ctx(d.args["diagram"])
        if "ctx" in d.args:
            ctx, _ = self.ctx(d.args["ctx"])
            shape = cones.check_cone(ctx, diagram, name=d.name, derive=self.derive)
        else:
            apex = d.args.get("apex") or "c"
            shape = cones.synth_cone_globular(diagram, apex=apex, name=d.name)
            if self.derive:
                shape = cones.check_cone(shape.ctx, diagram, name=d.name, derive=True)
        segs = (len(diagram), 1, len(diagram)) if len(diagram) else None
        self.bind(d.name, Entry("cone", shape, {"ctx": shape.ctx, "segments": segs}))
        return f"cone {d.name} = {show_ctx(shape.ctx, segs)}", shape.__dict__.get("_derivation")

    def do_gray(self, d):
        if "diagram" in d.args:
            diagram, _ = self.ctx(d.args["diagram"])
            shape = transfors.synth_gray_1globe(diagram, name=d.name)
        else:
            ctx, segs = self.ctx(d.args["ctx"])
            if not segs:
                raise ShapeMismatch("a Gray context needs segment separators")
            shape = transfors.check_gray(ctx, segs, name=d.name)
        self.bind(d.name, Entry("gray", shape, {"ctx": shape.ctx, "segments": shape.all_segments()}))
        return f"gray {d.name} = {shape.show()}", _summary("GRAY", d.name, shape.level)

    def do_ctrf(self, d):
        ctx, segs = self.ctx(d.args["ctx"])
        if not segs:
            raise ShapeMismatch("a conical transfor needs segment separators")
        shape = transfors.check_ctrf(ctx, segs, name=d.name)
        self.bind(d.name, Entry("ctrf", shape, {"ctx": shape.ctx, "segments": shape.all_segments()}))
        return f"ctrf {d.name} = {shape.show()}", _summary("CTRF", d.name, shape.level)

    def do_limit(self, d):
        e = self.lookup(d.args["source"], ("cone", "ctx"))
        if e.kind == "cone":
            cone = e.value
        else:
            cone = cones.synth_cone_globular(e.value, name=d.name)
        morphism = limits.build_ucone(cone.diagram, cone)
        self.bind(d.name, Entry("limit", morphism, {"cone": cone, "ctx": cone.ctx}))
        return f"limit {d.name} : {morphism.show()}", _summary("UNI-CONE", d.name, len(cone.ctx))

    def do_whisk(self, d):
        ctx, _ = self.ctx(d.args["ctx"])
        cone = self._cone(d.args["cone"])
        transfor = self.lookup(d.args["transfor"], "ctrf").value
        sub = self.sub_unchecked(ctx, d.args["terms"], transfor.ctx)
        wd = limits.check_whisk(ctx, cone, d.args["alpha"], sub, transfor, name=d.name)
        self.bind(d.name, Entry("whisk", wd))
        return f"whisk {d.name} = {show_ctx(wd.ctx)} <{', '.join(show(t) for t in wd.sub.terms)}>", \
            _summary("WHISK", d.name, transfor.level)

    def _cone(self, name):
        e = self.lookup(name, ("cone", "limit"))
        return e.value if e.kind == "cone" else e.extra["cone"]

    def sub_unchecked(self, ctx, asts, target):
        return Sub(tuple(self.tm(ctx, a) for a in asts), target)

    def do_uni(self, d):
        tracked = self.lookup(d.args["limit"], "limit").value
        wd = self.lookup(d.args["whisk"], "whisk").value
        run = limits.UniversalProperty(tracked, wd, name=d.name, marks=self.marks)
        self.bind(d.name, Entry("uni", run))
        return f"uni {d.name} : {run.tracked().show()}", _summary("UNI-START", d.name, run.focus)

    def do_apply(self, d):
        a = d.args
        run = self.lookup(a["run"], "uni").value
        x = run.whisk.ctx.names[run.focus] if not run.done else None
        rule = a["rule"]
        if rule in ("J3", "J4"):
            m = run.apply(rule, fresh_name=a["as"])
            for t in m.sub.terms:
                kernel.infer_tm(m.source, t, derive=False)
            return f"apply {rule} {a['run']} : {m.show()}", _summary(rule, x, run.focus)
        if rule == "J1" and a["ctx"] is not None:
            src, _ = self.ctx(a["ctx"])
            sub = self.sub(src, a["terms"], run.omega)
            t, ty = run.apply("J1", sub=sub, source=src)
        else:
            src = run.omega
            t, ty = run.apply(rule)
        if a["as"]:
            self.bind(a["as"], Entry("let", t, {"ctx": src, "type": ty}))
        return f"apply {rule} {a['run']} : {show(t)} : {show(ty)}", _summary(rule, x, run.focus)

    def do_assert(self, d):
        want_ast = d.args["type"]
        if d.args["ctx"] is not None:
            ctx, _ = self.ctx(d.args["ctx"])
            got = ctx.types[ctx.index(d.name)]
        else:
            e = self.env.get(d.name)
            if e is None or e.kind != "let":
                raise IllScoped(f"no let named {d.name}; use 'in CTX' for variables")
            ctx, got = e.extra["ctx"], e.extra["type"]
        want = self.ty(ctx, want_ast)
        if got != want:
            raise AssertionFailed(f"{d.name} has type {show(got)}, expected {show(want)}")
        return f"assert {d.name} : {show(got)}", None

    def do_print(self, d):
        e = self.lookup(d.name)
        v = e.value
        if e.kind == "let":
            return f"{d.name} = {show(v)} : {show(e.extra['type'])}", None
        if e.kind == "uni":
            return f"{d.name} : {v.tracked().show()}", None
        if e.kind == "limit":
            return f"{d.name} : {v.show()}", None
        if "ctx" in e.extra:
            return f"{d.name} = {show_ctx(e.extra['ctx'], e.extra.get('segments'))}", None
        return f"{d.name} = {v.show() if hasattr(v, 'show') else show(v)}", None


def _summary(rule, name, detail):
    return Derivation(f"{name} ({detail})", rule)
