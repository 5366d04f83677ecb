"""Script language for the workbench (``.lk`` files).

Statements::

    ring R = poly(vars x,y; degrees 1,1; p=32003) / ideal(x*y);
    ring S = R / ideal(x^2);          # or R / I for a declared ideal I
    ideal I = (x, z) + colon((0), J);
    module M = coker [[x, y], [0, z]];
    module Q = quotient(I);
    set bound = 4;
    horizontally_linked(Q);
    ann(lambda(syz(1, Q))) == (y);
    par { zero(tor(1, Q, quotient(J))); geolink(I, J); }

Names must be declared before use; argument kinds and rings are checked at
parse time.  :func:`print_script` produces text that parses back to an equal
:class:`Script`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any

from .poly import DEFAULT_PRIME, ParseError as PolyParseError, PolyRing, parse_poly


class ScriptError(ValueError):
    """Lexical, syntax or name-resolution error with a source position."""

    def __init__(self, msg: str, line: int, col: int):
        super().__init__(f"line {line}, col {col}: {msg}")
        self.msg = msg
        self.line = line
        self.col = col


# --- lexer ----------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*) | (?P<int>\d+)
  | (?P<op>==|[()\[\]{},;=/+\-*^])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int
    start: int
    end: int


def tokenize(text: str) -> list[Token]:
    toks = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ScriptError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind not in ("ws", "comment"):
            toks.append(Token(kind, m.group(), line, pos - line_start + 1, pos, m.end()))
        pos = m.end()
    toks.append(Token("eof", "", line, pos - line_start + 1, pos, pos))
    return toks


# --- AST ------------------------------------------------------------------

def _pos():
    return field(default=(0, 0), compare=False, repr=False)


@dataclass
class Name:
    id: str
    pos: tuple = _pos()


@dataclass
class Int:
    value: int
    pos: tuple = _pos()


@dataclass
class IdealLit:
    polys: tuple
    pos: tuple = _pos()


@dataclass
class ListLit:
    items: tuple
    pos: tuple = _pos()


@dataclass
class MatrixLit:
    rows: tuple
    pos: tuple = _pos()


@dataclass
class Call:
    fn: str
    args: tuple
    pos: tuple = _pos()


@dataclass
class Sum:
    terms: tuple
    pos: tuple = _pos()


@dataclass
class RingDecl:
    name: str
    vars: tuple = ()
    degrees: tuple | None = None
    p: int | None = None
    order: str | None = None
    relations: tuple = ()
    base: str | None = None
    quotient_ideal: str | None = None
    pos: tuple = _pos()


@dataclass
class IdealDecl:
    name: str
    expr: Any
    pos: tuple = _pos()


@dataclass
class ModuleDecl:
    name: str
    expr: Any
    pos: tuple = _pos()


@dataclass
class SetOption:
    name: str
    value: Any
    pos: tuple = _pos()


@dataclass
class Check:
    call: Call
    expected: Any = None
    pos: tuple = _pos()


@dataclass
class ParBlock:
    checks: tuple
    pos: tuple = _pos()


@dataclass
class Script:
    statements: tuple

    @property
    def rings(self):
        return [s for s in self.statements if isinstance(s, RingDecl)]

    @property
    def ideals(self):
        return [s for s in self.statements if isinstance(s, IdealDecl)]

    @property
    def modules(self):
        return [s for s in self.statements if isinstance(s, ModuleDecl)]

    @property
    def checks(self) -> list[Check]:
        out = []
        for s in self.statements:
            if isinstance(s, Check):
                out.append(s)
            elif isinstance(s, ParBlock):
                out.extend(s.checks)
        return out


# --- signatures -----------------------------------------------------------
# argument kinds: I ideal, M module, R ring, n int, w word; "?" marks optional

FUNCTIONS = {
    # modules
    "quotient": ("M", "I"), "ideal_as_module": ("M", "I"), "residue_field": ("M", "R?"),
    "free": ("M", "n", "R?"), "lambda": ("M", "M"), "syz": ("M", "n", "M"), "tr": ("M", "M"),
    "dual": ("M", "M"), "cosyzygy": ("M", "M"), "ext": ("M", "n", "M", "M"),
    "tor": ("M", "n", "M", "M"), "hom": ("M", "M", "M"), "tensor": ("M", "M", "M"),
    "direct_sum": ("M", "M", "M"), "over": ("M", "M", "R"), "canonical": ("M", "R?"),
    "stable_part": ("M", "M"),
    # ideals
    "colon": ("I", "I", "I"), "intersect": ("I", "I", "I"), "ann": ("I", "M"),
    "trace": ("I", "M"), "product": ("I", "I", "I"), "sum": ("I", "I", "I"),
    "maximal": ("I", "R?"),
}

# check name -> (value kind, argument kinds)
CHECKS = {
    "linked": ("bool", "I", "I", "I"),
    "horizontally_linked": ("bool", "M"),
    "geolink": ("bool", "I", "I"),
    "gorenstein": ("bool", "I"),
    "gorenstein_ring": ("bool", "R?"),
    "sum_theorem": ("bool", "M", "M", "I"),
    "ext_tor_duality": ("bool", "M", "n"),
    "tor_shift": ("bool", "M", "n"),
    "depth_scan": ("int", "M", "w", "n"),
    "tor_nonvanishing": ("bool", "M", "n"),
    "zero": ("bool", "M"),
    "is_free": ("bool", "M"),
    "stable": ("bool", "M"),
    "cyclic": ("bool", "M"),
    "totally_reflexive": ("bool", "M"),
    "equal": ("bool", "I", "I"),
    "ann": ("ideal", "M"),
    "trace": ("ideal", "M"),
    "colon": ("ideal", "I", "I"),
    "intersect": ("ideal", "I", "I"),
    "length": ("int", "M"),
    "depth": ("int", "M"),
    "pd": ("int", "M"),
    "gdim": ("int", "M"),
    "grade": ("int", "I"),
    "dim": ("int", "R?"),
    "betti": ("list", "M", "n?"),
    "hilbert": ("list", "M", "n", "n"),
    "gb": ("list", "I"),
    "battery": ("bool", "n?"),
    "tor_suite": ("bool", "n?"),
}

OPTIONS = {"bound", "seed", "prime", "order", "fail_fast"}
WORDS = {"pd", "gdim", "true", "false", "inf", "grevlex", "lex", "hypothesis_failed", "not_found"}


# --- parser ---------------------------------------------------------------

class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.symbols: dict[str, tuple[str, str | None]] = {}
        self.ring_defs: dict[str, PolyRing] = {}
        self.current_ring: str | None = None

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def error(self, msg: str, tok: Token | None = None):
        t = tok or self.tok
        raise ScriptError(msg, t.line, t.col)

    def take(self) -> Token:
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> Token | None:
        if self.tok.text == text and self.tok.kind in ("op", "name"):
            return self.take()
        return None

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            shown = self.tok.text or "end of input"
            self.error(f"expected {text!r}, found {shown!r}")
        return self.take()

    def expect_name(self) -> Token:
        if self.tok.kind != "name":
            self.error(f"expected a name, found {self.tok.text or 'end of input'!r}")
        return self.take()

    def expect_int(self) -> int:
        if self.tok.kind != "int":
            self.error(f"expected an integer, found {self.tok.text or 'end of input'!r}")
        return int(self.take().text)

    # statements
    def parse(self) -> Script:
        stmts = []
        while self.tok.kind != "eof":
            stmts.append(self.statement())
        return Script(tuple(stmts))

    def statement(self):
        t = self.tok
        pos = (t.line, t.col)
        if t.kind == "name" and t.text == "ring" and self.toks[self.i + 1].kind == "name":
            self.take()
            return self.ring_decl(pos)
        if t.kind == "name" and t.text in ("ideal", "module") and self.toks[self.i + 1].kind == "name":
            self.take()
            name = self.expect_name()
            self.expect("=")
            expr = self.expr()
            self.expect(";")
            kind = "I" if t.text == "ideal" else "M"
            ring = self.check_expr(expr, kind, self.current_ring)
            self.declare(name, kind, ring)
            cls = IdealDecl if kind == "I" else ModuleDecl
            return cls(name.text, expr, pos)
        if t.kind == "name" and t.text == "set":
            self.take()
            name = self.expect_name()
            if name.text not in OPTIONS:
                self.error(f"unknown option {name.text!r}", name)
            self.expect("=")
            if self.tok.kind == "int":
                value: Any = self.expect_int()
            else:
                value = self.expect_name().text
            self.expect(";")
            return SetOption(name.text, value, pos)
        if t.kind == "name" and t.text == "par" and self.toks[self.i + 1].text == "{":
            self.take()
            self.expect("{")
            checks = []
            while not self.accept("}"):
                if self.tok.kind == "eof":
                    self.error("unterminated par block")
                checks.append(self.check_stmt())
            return ParBlock(tuple(checks), pos)
        return self.check_stmt()

    def declare(self, tok: Token, kind: str, ring: str | None):
        if tok.text in self.symbols:
            self.error(f"{tok.text!r} is already declared", tok)
        if tok.text in FUNCTIONS or tok.text in CHECKS or tok.text in WORDS:
            self.error(f"{tok.text!r} is a reserved name", tok)
        self.symbols[tok.text] = (kind, ring)

    def ring_decl(self, pos) -> RingDecl:
        name = self.expect_name()
        self.expect("=")
        if self.tok.text == "poly":
            self.take()
            self.expect("(")
            self.expect("vars")
            names = [self.expect_name().text]
            while self.accept(","):
                names.append(self.expect_name().text)
            if len(set(names)) != len(names):
                self.error("duplicate variable name")
            degrees = p = order = None
            while self.accept(";"):
                key = self.expect_name()
                if key.text == "degrees":
                    degrees = [self.expect_int()]
                    while self.accept(","):
                        degrees.append(self.expect_int())
                    if len(degrees) != len(names):
                        self.error("one degree per variable required", key)
                elif key.text == "p":
                    self.expect("=")
                    p = self.expect_int()
                elif key.text == "order":
                    self.expect("=")
                    order = self.expect_name().text
                    if order not in ("grevlex", "lex"):
                        self.error(f"unknown order {order!r}")
                else:
                    self.error(f"unknown ring option {key.text!r}", key)
            self.expect(")")
            try:
                base = PolyRing(names, degrees, p or DEFAULT_PRIME)
            except ValueError as e:
                self.error(str(e))
            rels: tuple = ()
            if self.accept("/"):
                self.expect("ideal")
                self.expect("(")
                rels = self.polylist(base, ")")
                self.expect(")")
            self.expect(";")
            decl = RingDecl(name.text, tuple(names), tuple(degrees) if degrees else None, p,
                            order, rels, None, None, pos)
        else:
            btok = self.expect_name()
            self.resolve(btok, "R")
            base = self.ring_defs[btok.text]
            self.expect("/")
            rels = ()
            qname = None
            if self.tok.text == "ideal" and self.toks[self.i + 1].text == "(":
                self.take()
                self.expect("(")
                rels = self.polylist(base, ")")
                self.expect(")")
            else:
                qt = self.expect_name()
                kind, ring = self.resolve(qt)
                if kind != "I":
                    self.error(f"{qt.text!r} is not an ideal", qt)
                if ring != btok.text:
                    self.error(f"ideal {qt.text!r} belongs to ring {ring!r}, not {btok.text!r}", qt)
                qname = qt.text
            self.expect(";")
            decl = RingDecl(name.text, relations=rels, base=btok.text, quotient_ideal=qname, pos=pos)
        self.declare(name, "R", name.text)
        self.ring_defs[name.text] = base
        self.current_ring = name.text
        return decl

    def polylist(self, ring: PolyRing | None, close: str) -> tuple:
        """Comma-separated polynomial texts up to ``close`` (not consumed)."""
        polys = []
        depth = 0
        start = self.tok
        chunk: list[Token] = []
        while True:
            t = self.tok
            if t.kind == "eof":
                self.error(f"expected {close!r}")
            if t.kind == "op" and t.text in "([":
                depth += 1
            if depth == 0 and t.kind == "op" and t.text in (",", close):
                if not chunk:
                    self.error("empty polynomial")
                polys.append(self.poly_text(chunk, ring))
                chunk = []
                if t.text == close:
                    break
                self.take()
                continue
            if t.kind == "op" and t.text in ")]":
                depth -= 1
                if depth < 0:
                    self.error(f"unbalanced {t.text!r}")
            if t.kind == "op" and t.text in (";", "{", "}", "=="):
                self.error(f"unexpected {t.text!r} in polynomial")
            chunk.append(self.take())
        del start
        return tuple(polys)

    def poly_text(self, chunk: list[Token], ring: PolyRing | None) -> str:
        text = "".join(self.text[t.start:t.end] for t in chunk)
        if ring is not None:
            try:
                parse_poly(text, ring)
            except (PolyParseError, ValueError) as e:
                self.error(f"bad polynomial {text!r}: {e}", chunk[0])
        return text

    def check_stmt(self) -> Check:
        t = self.expect_name()
        pos = (t.line, t.col)
        if t.text not in CHECKS:
            self.error(f"unknown check {t.text!r}", t)
        self.expect("(")
        args = self.args()
        self.expect(")")
        call = Call(t.text, tuple(args), pos)
        ring = self.check_call(call, CHECKS[t.text][1:], self.current_ring, t)
        expected = None
        if self.accept("=="):
            expected = self.expr()
            self.check_expected(CHECKS[t.text][0], expected, ring)
        self.expect(";")
        return Check(call, expected, pos)

    def args(self) -> list:
        out = []
        if self.tok.text == ")":
            return out
        out.append(self.expr())
        while self.accept(","):
            out.append(self.expr())
        return out

    # expressions (ideal literals are validated once their ring is known)
    def expr(self):
        first = self.term()
        if self.tok.text != "+":
            return first
        terms = [first]
        while self.accept("+"):
            terms.append(self.term())
        return Sum(tuple(terms), first.pos)

    def term(self):
        t = self.tok
        pos = (t.line, t.col)
        if t.text == "(":
            self.take()
            polys = self.polylist(None, ")")
            self.expect(")")
            return IdealLit(polys, pos)
        if t.text == "[":
            self.take()
            if self.tok.text == "[":
                rows = []
                while True:
                    self.expect("[")
                    rows.append(self.polylist(None, "]") if self.tok.text != "]" else ())
                    self.expect("]")
                    if not self.accept(","):
                        break
                self.expect("]")
                widths = {len(r) for r in rows}
                if len(widths) > 1:
                    self.error("ragged matrix", t)
                return MatrixLit(tuple(rows), pos)
            items = [] if self.tok.text == "]" else list(self.polylist(None, "]"))
            self.expect("]")
            return ListLit(tuple(items), pos)
        if t.kind == "int":
            return Int(self.expect_int(), pos)
        if t.kind == "name":
            self.take()
            if t.text == "coker":
                m = self.term()
                if not isinstance(m, MatrixLit):
                    self.error("coker expects a matrix [[...]]", t)
                return Call("coker", (m,), pos)
            if t.text in ("quotient", "ideal_as_module") and self.tok.text != "(":
                arg = self.term()
                return Call(t.text, (arg,), pos)
            if self.tok.text == "(":
                self.take()
                args = self.args()
                self.expect(")")
                return Call(t.text, tuple(args), pos)
            return Name(t.text, pos)
        self.error(f"unexpected {t.text or 'end of input'!r}")

    # semantic checks
    def resolve(self, tok_or_name, kind: str | None = None):
        if isinstance(tok_or_name, Token):
            name, line, col = tok_or_name.text, tok_or_name.line, tok_or_name.col
        else:
            name, (line, col) = tok_or_name.id, tok_or_name.pos
        if name not in self.symbols:
            raise ScriptError(f"{name!r} used before declaration", line, col)
        k, ring = self.symbols[name]
        if kind is not None and k != kind:
            raise ScriptError(f"{name!r} is not a {_KIND_NAMES[kind]}", line, col)
        return k, ring

    def _err_at(self, node, msg):
        line, col = node.pos if node.pos != (0, 0) else (self.tok.line, self.tok.col)
        raise ScriptError(msg, line, col)

    def check_expr(self, e, kind: str, ctx_ring: str | None) -> str | None:
        """Check ``e`` has ``kind``; return its ring name."""
        if kind == "n":
            if not isinstance(e, Int):
                self._err_at(e, "expected an integer")
            return None
        if kind == "w":
            if not (isinstance(e, Name) and e.id in ("pd", "gdim")):
                self._err_at(e, "expected pd or gdim")
            return None
        if isinstance(e, Name):
            _, ring = self.resolve(e, kind)
            return ring
        if isinstance(e, IdealLit):
            if kind != "I":
                self._err_at(e, f"expected a {_KIND_NAMES[kind]}, found an ideal literal")
            if ctx_ring is None:
                self._err_at(e, "ideal literal without a ring in scope")
            base = self.ring_defs[ctx_ring]
            for txt in e.polys:
                try:
                    parse_poly(txt, base)
                except (PolyParseError, ValueError) as err:
                    self._err_at(e, f"bad polynomial {txt!r}: {err}")
            return ctx_ring
        if isinstance(e, Sum):
            if kind != "I":
                self._err_at(e, "'+' combines ideals only")
            rings = {self.check_expr(t, "I", ctx_ring) for t in e.terms}
            if len(rings) > 1:
                self._err_at(e, "ring mismatch in ideal sum")
            return rings.pop()
        if isinstance(e, Call):
            if e.fn == "coker":
                if kind != "M":
                    self._err_at(e, f"expected a {_KIND_NAMES[kind]}, found a module")
                if ctx_ring is None:
                    self._err_at(e, "matrix without a ring in scope")
                base = self.ring_defs[ctx_ring]
                for row in e.args[0].rows:
                    for txt in row:
                        try:
                            parse_poly(txt, base)
                        except (PolyParseError, ValueError) as err:
                            self._err_at(e, f"bad polynomial {txt!r}: {err}")
                return ctx_ring
            sig = FUNCTIONS.get(e.fn)
            if sig is None:
                self._err_at(e, f"unknown function {e.fn!r}")
            if sig[0] != kind:
                self._err_at(e, f"{e.fn}() gives a {_KIND_NAMES[sig[0]]}, expected a "
                                f"{_KIND_NAMES[kind]}")
            ring = self.check_call(e, sig[1:], ctx_ring, None)
            if e.fn == "over":
                return e.args[1].id
            return ring
        self._err_at(e, f"expected a {_KIND_NAMES[kind]}")

    def check_call(self, call: Call, sig, ctx_ring, tok) -> str | None:
        required = [k for k in sig if not k.endswith("?")]
        if not (len(required) <= len(call.args) <= len(sig)):
            self._err_at(call, f"{call.fn}() takes {len(sig)} argument(s), got {len(call.args)}")
        # a ring fixed by any non-literal argument is the context for literals
        ring = None
        for a, k in zip(call.args, sig):
            k = k.rstrip("?")
            if k in ("I", "M", "R") and not isinstance(a, (IdealLit, Sum)) and not (
                    isinstance(a, Call) and a.fn == "coker"):
                r = self.check_expr(a, k, ctx_ring) if k != "R" else self.resolve(a, "R")[1] \
                    if isinstance(a, Name) else self._err_at(a, "expected a ring name")
                if call.fn == "over" and k == "R":
                    continue
                if ring is None:
                    ring = r
                elif r != ring:
                    self._err_at(a, f"ring mismatch: {r!r} vs {ring!r}")
        ctx = ring or ctx_ring
        for a, k in zip(call.args, sig):
            k = k.rstrip("?")
            if k in ("n", "w") or isinstance(a, (IdealLit, Sum)) or (
                    isinstance(a, Call) and a.fn == "coker"):
                r = self.check_expr(a, k, ctx)
                if k in ("I", "M") and ring is not None and r != ring:
                    self._err_at(a, f"ring mismatch: {r!r} vs {ring!r}")
        return ctx

    def check_expected(self, vkind: str, e, ring):
        if vkind == "bool":
            if not (isinstance(e, Name) and e.id in ("true", "false")):
                self._err_at(e, "expected true or false")
        elif vkind == "int":
            if not (isinstance(e, Int) or (isinstance(e, Name) and e.id in (
                    "inf", "hypothesis_failed", "not_found"))):
                self._err_at(e, "expected an integer, inf, hypothesis_failed or not_found")
        elif vkind == "ideal":
            self.check_expr(e, "I", ring)
        elif vkind == "list":
            if not isinstance(e, ListLit):
                self._err_at(e, "expected a list [...]")


_KIND_NAMES = {"I": "ideal", "M": "module", "R": "ring", "n": "integer", "w": "word"}


def parse_script(text: str) -> Script:
    return _Parser(text).parse()


# --- printer --------------------------------------------------------------

def print_expr(e) -> str:
    if isinstance(e, Name):
        return e.id
    if isinstance(e, Int):
        return str(e.value)
    if isinstance(e, IdealLit):
        return "(" + ", ".join(e.polys) + ")"
    if isinstance(e, ListLit):
        return "[" + ", ".join(e.items) + "]"
    if isinstance(e, MatrixLit):
        return "[" + ", ".join("[" + ", ".join(r) + "]" for r in e.rows) + "]"
    if isinstance(e, Sum):
        return " + ".join(print_expr(t) for t in e.terms)
    if isinstance(e, Call):
        if e.fn == "coker":
            return "coker " + print_expr(e.args[0])
        return f"{e.fn}(" + ", ".join(print_expr(a) for a in e.args) + ")"
    raise TypeError(f"cannot print {e!r}")


def print_statement(s, indent: str = "") -> str:
    if isinstance(s, RingDecl):
        if s.base is None:
            opts = ["vars " + ",".join(s.vars)]
            if s.degrees:
                opts.append("degrees " + ",".join(map(str, s.degrees)))
            if s.p is not None:
                opts.append(f"p={s.p}")
            if s.order:
                opts.append(f"order={s.order}")
            out = f"ring {s.name} = poly({'; '.join(opts)})"
            if s.relations:
                out += " / ideal(" + ", ".join(s.relations) + ")"
        else:
            q = s.quotient_ideal or "ideal(" + ", ".join(s.relations) + ")"
            out = f"ring {s.name} = {s.base} / {q}"
        return indent + out + ";"
    if isinstance(s, IdealDecl):
        return f"{indent}ideal {s.name} = {print_expr(s.expr)};"
    if isinstance(s, ModuleDecl):
        return f"{indent}module {s.name} = {print_expr(s.expr)};"
    if isinstance(s, SetOption):
        return f"{indent}set {s.name} = {s.value};"
    if isinstance(s, Check):
        out = print_expr(s.call)
        if s.expected is not None:
            out += " == " + print_expr(s.expected)
        return indent + out + ";"
    if isinstance(s, ParBlock):
        inner = "\n".join(print_statement(c, indent + "  ") for c in s.checks)
        return f"{indent}par {{\n{inner}\n{indent}}}"
    raise TypeError(f"cannot print {s!r}")


def print_script(script: Script) -> str:
    return "\n".join(print_statement(s) for s in script.statements) + ("\n" if script.statements else "")
