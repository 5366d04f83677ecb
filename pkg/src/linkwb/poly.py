"""Prime-field coefficients, monomials, monomial orders and graded polynomials.

Polynomials live in a :class:`PolyRing` ``k[x_1..x_n]`` with positive integer
variable weights.  Terms are stored as a tuple of ``(exponents, coeff)`` pairs
sorted strictly descending under the ring's monomial order; the zero
polynomial has no terms.
"""

from __future__ import annotations

import enum
import re
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

DEFAULT_PRIME = 32003


class StructuralError(ValueError):
    """Objects from different rings (or of the wrong shape) were combined."""


class ParseError(ValueError):
    def __init__(self, msg: str, pos: int = 0):
        super().__init__(msg)
        self.pos = pos


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


@dataclass(frozen=True)
class FieldElem:
    value: int
    p: int = DEFAULT_PRIME

    def __post_init__(self):
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElem):
            if other.p != self.p:
                raise StructuralError("field characteristic mismatch")
            return other.value
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElem(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElem(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElem(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FieldElem(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElem(-self.value, self.p)

    def inverse(self) -> FieldElem:
        if self.value == 0:
            raise ZeroDivisionError("zero is not invertible")
        return FieldElem(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * FieldElem(o, self.p).inverse()

    def __bool__(self):
        return self.value != 0

    def symmetric(self) -> int:
        """Representative in (-p/2, p/2]."""
        v = self.value
        return v - self.p if v > self.p // 2 else v


class Ordering(enum.Enum):
    LT = -1
    EQ = 0
    GT = 1


@dataclass(frozen=True)
class MonomialOrder:
    """A monomial order on ``k[x_1..x_n]``.

    ``kind`` is ``"grevlex"``, ``"lex"`` or ``"elim"``.  For ``"elim"`` the
    variables with indices in ``block`` are eliminated: monomials compare first
    by grevlex (unit weights) restricted to ``block``, then by weighted grevlex
    on the remaining variables.
    """

    kind: str = "grevlex"
    block: tuple[int, ...] = ()

    def __post_init__(self):
        if self.kind not in ("grevlex", "lex", "elim"):
            raise ValueError(f"unknown monomial order {self.kind!r}")

    def sort_key(self, exps: Sequence[int], weights: Sequence[int]) -> tuple:
        n = len(exps)
        if self.kind == "lex":
            return tuple(exps)
        if self.kind == "grevlex":
            deg = sum(w * e for w, e in zip(weights, exps))
            return (deg,) + tuple(-exps[i] for i in range(n - 1, -1, -1))
        inner = [i for i in range(n) if i not in self.block]
        bdeg = sum(exps[i] for i in self.block)
        head = (bdeg,) + tuple(-exps[i] for i in reversed(self.block))
        rdeg = sum(weights[i] * exps[i] for i in inner)
        return head + (rdeg,) + tuple(-exps[i] for i in reversed(inner))


def mono_compare(a: Sequence[int], b: Sequence[int], order: MonomialOrder,
                 weights: Sequence[int] | None = None) -> Ordering:
    if len(a) != len(b):
        raise StructuralError("monomials over different variable counts")
    w = weights if weights is not None else (1,) * len(a)
    ka, kb = order.sort_key(a, w), order.sort_key(b, w)
    if ka == kb:
        return Ordering.EQ
    return Ordering.GT if ka > kb else Ordering.LT


@dataclass(frozen=True)
class Monomial:
    exponents: tuple[int, ...]
    degree: int

    @classmethod
    def of(cls, exps: Sequence[int], weights: Sequence[int]) -> Monomial:
        exps = tuple(exps)
        if any(e < 0 for e in exps):
            raise StructuralError("negative exponent")
        return cls(exps, sum(w * e for w, e in zip(weights, exps)))


class PolyRing:
    """``k[x_1..x_n]`` with variable weights, prime ``p`` and a monomial order."""

    def __init__(self, names: Sequence[str], degrees: Sequence[int] | None = None,
                 p: int = DEFAULT_PRIME, order: str | MonomialOrder = "grevlex"):
        names = tuple(names)
        if len(set(names)) != len(names):
            raise StructuralError("repeated variable name")
        if degrees is None:
            degrees = (1,) * len(names)
        degrees = tuple(int(d) for d in degrees)
        if len(degrees) != len(names):
            raise StructuralError("one degree per variable required")
        if any(d < 0 for d in degrees):
            raise StructuralError("variable degrees must be non-negative")
        if p == 2 or not _is_prime(p):
            raise ValueError(f"coefficient field needs an odd prime, got {p}")
        if isinstance(order, str):
            order = MonomialOrder(order)
        self.names = names
        self.degrees = degrees
        self.p = p
        self.order = order
        self.nvars = len(names)

    @cached_property
    def _signature(self):
        return (self.names, self.degrees, self.p, self.order)

    def __eq__(self, other):
        return isinstance(other, PolyRing) and self._signature == other._signature

    def __hash__(self):
        return hash(self._signature)

    def __repr__(self):
        return f"PolyRing({','.join(self.names)}; p={self.p}; {self.order.kind})"

    def key(self, exps: Sequence[int]) -> tuple:
        return self.order.sort_key(exps, self.degrees)

    def mono_degree(self, exps: Sequence[int]) -> int:
        return sum(w * e for w, e in zip(self.degrees, exps))

    def zero(self) -> Polynomial:
        return Polynomial(self, ())

    def one(self) -> Polynomial:
        return self.const(1)

    def const(self, c: int) -> Polynomial:
        return Polynomial.from_dict(self, {(0,) * self.nvars: c})

    def var(self, name_or_index: str | int) -> Polynomial:
        i = self.names.index(name_or_index) if isinstance(name_or_index, str) else name_or_index
        e = [0] * self.nvars
        e[i] = 1
        return Polynomial.from_dict(self, {tuple(e): 1})

    def gens(self) -> list[Polynomial]:
        return [self.var(i) for i in range(self.nvars)]

    def monomial(self, exps: Sequence[int], c: int = 1) -> Polynomial:
        return Polynomial.from_dict(self, {tuple(exps): c})

    def parse(self, text: str) -> Polynomial:
        return parse_poly(text, self)

    def with_order(self, order: str | MonomialOrder) -> PolyRing:
        return PolyRing(self.names, self.degrees, self.p, order)

    def extend(self, new_names: Sequence[str], new_degrees: Sequence[int],
               order: MonomialOrder) -> PolyRing:
        """Ring with extra variables appended (used for elimination)."""
        return PolyRing(self.names + tuple(new_names), self.degrees + tuple(new_degrees),
                        self.p, order)


class Polynomial:
    __slots__ = ("ring", "terms", "__weakref__")

    def __init__(self, ring: PolyRing, terms: tuple):
        self.ring = ring
        self.terms = terms

    @classmethod
    def from_dict(cls, ring: PolyRing, d: Mapping[tuple, int]) -> Polynomial:
        p = ring.p
        items = []
        for e, c in d.items():
            c %= p
            if c:
                if len(e) != ring.nvars:
                    raise StructuralError("exponent vector length mismatch")
                items.append((e, c))
        items.sort(key=lambda t: ring.key(t[0]), reverse=True)
        return cls(ring, tuple(items))

    def to_dict(self) -> dict:
        return dict(self.terms)

    # --- basic protocol -------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        return hash(self.terms)

    def __repr__(self):
        return f"Polynomial({self})"

    def __str__(self):
        return format_poly(self)

    def _check(self, other) -> Polynomial:
        if isinstance(other, FieldElem):
            other = other.value
        if isinstance(other, int):
            return self.ring.const(other)
        if not isinstance(other, Polynomial):
            raise StructuralError(f"cannot combine polynomial with {type(other).__name__}")
        if other.ring != self.ring:
            raise StructuralError("polynomials over different rings")
        return other

    # --- arithmetic -----------------------------------------------------
    def __add__(self, other):
        other = self._check(other)
        d = dict(self.terms)
        p = self.ring.p
        for e, c in other.terms:
            d[e] = (d.get(e, 0) + c) % p
        return Polynomial.from_dict(self.ring, d)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return Polynomial(self.ring, tuple((e, p - c) for e, c in self.terms))

    def __sub__(self, other):
        return self + (-self._check(other))

    def __rsub__(self, other):
        return self._check(other) - self

    def scale(self, c: int | FieldElem) -> Polynomial:
        if isinstance(c, FieldElem):
            c = c.value
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero()
        return Polynomial(self.ring, tuple((e, a * c % p) for e, a in self.terms))

    def __mul__(self, other):
        if isinstance(other, (int, FieldElem)):
            return self.scale(other)
        other = self._check(other)
        p = self.ring.p
        d: dict = {}
        for e1, c1 in self.terms:
            for e2, c2 in other.terms:
                e = tuple(a + b for a, b in zip(e1, e2))
                d[e] = (d.get(e, 0) + c1 * c2) % p
        return Polynomial.from_dict(self.ring, d)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = self.ring.one()
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def mul_monomial(self, exps: Sequence[int], c: int = 1) -> Polynomial:
        p = self.ring.p
        c %= p
        if not c:
            return self.ring.zero()
        # multiplying by a monomial preserves the order of terms
        return Polynomial(self.ring, tuple((tuple(a + b for a, b in zip(e, exps)), x * c % p)
                                           for e, x in self.terms))

    def exact_div_monomial(self, exps: Sequence[int]) -> Polynomial:
        out = []
        for e, c in self.terms:
            q = tuple(a - b for a, b in zip(e, exps))
            if min(q, default=0) < 0:
                raise ArithmeticError("monomial does not divide polynomial")
            out.append((q, c))
        return Polynomial(self.ring, tuple(out))

    # --- inspection -----------------------------------------------------
    def leading_term(self):
        return self.terms[0] if self.terms else None

    def monic(self) -> Polynomial:
        if not self.terms:
            return self
        return self.scale(pow(self.terms[0][1], -1, self.ring.p))

    def degree(self) -> int | None:
        """Largest weighted degree of a term; None for zero."""
        if not self.terms:
            return None
        return max(self.ring.mono_degree(e) for e, _ in self.terms)

    def is_homogeneous(self) -> bool:
        return isinstance(degree_check(self), Homogeneous)

    def is_constant(self) -> bool:
        return all(not any(e) for e, _ in self.terms)

    def constant_coeff(self) -> int:
        for e, c in self.terms:
            if not any(e):
                return c
        return 0

    def variables_used(self) -> set[int]:
        return {i for e, _ in self.terms for i, a in enumerate(e) if a}

    def change_ring(self, ring: PolyRing, index_map: Sequence[int] | None = None) -> Polynomial:
        """Re-home terms into ``ring``; ``index_map[i]`` gives the target slot of variable i."""
        if index_map is None:
            index_map = [ring.names.index(nm) for nm in self.ring.names]
        d = {}
        for e, c in self.terms:
            t = [0] * ring.nvars
            for i, a in enumerate(e):
                if a:
                    if index_map[i] is None:
                        raise StructuralError("variable dropped while changing rings")
                    t[index_map[i]] = a
            d[tuple(t)] = c
        return Polynomial.from_dict(ring, d)


@dataclass(frozen=True)
class Homogeneous:
    degree: int | None  # None for the zero polynomial (any degree)


@dataclass(frozen=True)
class Inhomogeneous:
    pass


def degree_check(f: Polynomial) -> Union[Homogeneous, Inhomogeneous]:
    if not f.terms:
        return Homogeneous(None)
    degs = {f.ring.mono_degree(e) for e, _ in f.terms}
    if len(degs) == 1:
        return Homogeneous(degs.pop())
    return Inhomogeneous()


def poly_arith(op: str, f: Polynomial, g) -> Polynomial:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scale":
        return f.scale(g)
    raise ValueError(f"unknown operation {op!r}")


# --- canonical text form ------------------------------------------------

def _format_monomial(ring: PolyRing, e: Sequence[int]) -> str:
    parts = []
    for name, a in zip(ring.names, e):
        if a == 1:
            parts.append(name)
        elif a > 1:
            parts.append(f"{name}^{a}")
    return "*".join(parts)


def format_poly(f: Polynomial) -> str:
    if not f.terms:
        return "0"
    p = f.ring.p
    out = []
    for e, c in f.terms:
        s = c - p if c > p // 2 else c
        neg = s < 0
        a = -s if neg else s
        mono = _format_monomial(f.ring, e)
        if not mono:
            body = str(a)
        elif a == 1:
            body = mono
        else:
            body = f"{a}*{mono}"
        if not out:
            out.append(("-" if neg else "") + body)
        else:
            out.append((" - " if neg else " + ") + body)
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(\*\*|[-+*^()]))")


def _tokenize(text: str):
    pos = 0
    toks = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos:pos + 1]!r}", pos)
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("int", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("name", m.group(2), start))
        else:
            op = m.group(3)
            toks.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _PolyParser:
    def __init__(self, text: str, ring: PolyRing):
        self.toks = _tokenize(text)
        self.i = 0
        self.ring = ring

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect_op(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            raise ParseError(f"expected {op!r}", t[2])

    def parse(self) -> Polynomial:
        f = self.expr()
        t = self.peek()
        if t[0] != "end":
            raise ParseError(f"unexpected token {t[1]!r}", t[2])
        return f

    def expr(self) -> Polynomial:
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        f = self.term()
        if sign < 0:
            f = -f
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                g = self.term()
                f = f + g if t[1] == "+" else f - g
            else:
                return f

    def term(self) -> Polynomial:
        f = self.power()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
                f = f * self.power()
            elif t[0] in ("name", "int") or (t[0] == "op" and t[1] == "("):
                # juxtaposition such as 2x or 3(x+y)
                f = f * self.power()
            else:
                return f

    def power(self) -> Polynomial:
        f = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            e = self.take()
            if e[0] != "int":
                raise ParseError("exponent must be a non-negative integer", e[2])
            f = f ** e[1]
        return f

    def atom(self) -> Polynomial:
        t = self.take()
        if t[0] == "int":
            return self.ring.const(t[1])
        if t[0] == "name":
            if t[1] not in self.ring.names:
                raise ParseError(f"unknown variable {t[1]!r}", t[2])
            return self.ring.var(t[1])
        if t[0] == "op" and t[1] == "(":
            f = self.expr()
            self.expect_op(")")
            return f
        raise ParseError("expected a number, variable or '('", t[2])


def parse_poly(text: str, ring: PolyRing) -> Polynomial:
    return _PolyParser(text, ring).parse()


def parse_polys(text: str, ring: PolyRing) -> list[Polynomial]:
    """Parse a comma separated list of polynomials (empty text gives [])."""
    text = text.strip()
    if not text:
        return []
    parts, depth, cur = [], 0, []
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    parts.append("".join(cur))
    return [parse_poly(s, ring) for s in parts]


def as_poly(ring: PolyRing, x) -> Polynomial:
    if isinstance(x, Polynomial):
        if x.ring != ring:
            raise StructuralError("polynomial from another ring")
        return x
    if isinstance(x, FieldElem):
        return ring.const(x.value)
    if isinstance(x, int):
        return ring.const(x)
    if isinstance(x, str):
        return parse_poly(x, ring)
    raise StructuralError(f"cannot interpret {x!r} as a polynomial")


def monomials_of_degree(degrees: Sequence[int], d: int) -> list[tuple[int, ...]]:
    """All exponent vectors of weighted degree ``d`` (positive weights only)."""
    n = len(degrees)
    out: list[tuple[int, ...]] = []

    def rec(i, left, acc):
        if i == n:
            if left == 0:
                out.append(tuple(acc))
            return
        w = degrees[i]
        if w == 0:
            raise ValueError("degree-zero variable has infinitely many monomials per degree")
        for a in range(left // w, -1, -1):
            acc.append(a)
            rec(i + 1, left - a * w, acc)
            acc.pop()

    if d >= 0:
        rec(0, d, [])
    return out


def lcm_exps(a: Iterable[int], b: Iterable[int]) -> tuple[int, ...]:
    return tuple(max(x, y) for x, y in zip(a, b))
