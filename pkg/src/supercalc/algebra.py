"""Canonical form and exact product for the mixed polynomial Clifford-Weyl algebra.

The algebra has four kinds of symbols over a space with ``m`` commuting
variables and ``2n`` anticommuting ones:

* commuting variables ``x1..xm`` (exponent vector),
* anticommuting variables ``q1..q<2n>`` (strictly ascending index word;
  squares vanish), optionally doubled by a second set ``y1..y<2n>``,
* orthogonal generators ``e1..em`` with ``e_j e_k + e_k e_j = -2 delta_jk``
  (ascending word, squares contracted away),
* symplectic generators ``w1..w<2n>`` with
  ``w_{2j-1} w_{2k} - w_{2k} w_{2j-1} = delta_jk`` and all other pairs
  commuting (normal-ordered exponent vector, ascending index).

Generators commute with all variables; ``e`` and ``w`` generators
anticommute with each other.  A monomial is stored as the canonical word
[variables][e-word][w-word], which makes equality a dictionary comparison.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial
from typing import Iterator, NamedTuple

from .scalars import Rational, Scalar


class SpaceMismatch(ValueError):
    """Operands built over different variable spaces."""


@dataclass(frozen=True)
class SpaceSignature:
    """Counts of commuting variables (m) and anticommuting pairs (n).

    ``second_ferm_set`` enables a second family of anticommuting variables
    (used by hyperplane expansions and the Fourier kernel); it doubles the
    fermionic variable count but not the generator count.
    """

    m: int
    n: int
    second_ferm_set: bool = False

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("need at least one commuting variable (m >= 1)")
        if self.n < 0:
            raise ValueError("n must be nonnegative")

    @property
    def ferm_vars(self) -> int:
        return 4 * self.n if self.second_ferm_set else 2 * self.n

    @property
    def superdim(self) -> int:
        return self.m - 2 * self.n

    def doubled(self) -> "SpaceSignature":
        return SpaceSignature(self.m, self.n, True)

    def base(self) -> "SpaceSignature":
        return SpaceSignature(self.m, self.n, False)


class SuperMonomial(NamedTuple):
    bos: tuple        # exponents, length m
    ferm: tuple       # strictly ascending variable indices (1-based)
    cliff: tuple      # strictly ascending e-generator indices (1-based)
    weyl: tuple       # exponents, length 2n, normal-ordered word

    @property
    def degree(self) -> int:
        """Total variable degree (generators do not count)."""
        return sum(self.bos) + len(self.ferm)

    @property
    def weyl_degree(self) -> int:
        return sum(self.weyl)

    @property
    def generator_parity(self) -> int:
        return (len(self.cliff) + sum(self.weyl)) % 2

    def is_variable_free(self) -> bool:
        return not self.ferm and not any(self.bos)


def _unit_monomial(space: SpaceSignature) -> SuperMonomial:
    return SuperMonomial((0,) * space.m, (), (), (0,) * (2 * space.n))


def _merge_grassmann(u: tuple, v: tuple):
    """Merge two ascending anticommuting words; returns (sign, word) or None."""
    if not u or not v:
        return 1, u + v
    inv = 0
    merged = []
    i = j = 0
    while i < len(u) and j < len(v):
        if u[i] == v[j]:
            return None
        if u[i] < v[j]:
            merged.append(u[i])
            i += 1
        else:
            # v[j] jumps over the remaining entries of u
            inv += len(u) - i
            merged.append(v[j])
            j += 1
    merged.extend(u[i:])
    merged.extend(v[j:])
    return (-1 if inv % 2 else 1), tuple(merged)


def _clifford_word_mul(u: tuple, v: tuple):
    """Product of two ascending e-generator words; squares give -1."""
    res = list(u)
    sign = 1
    for g in v:
        i = len(res) - 1
        while i >= 0 and res[i] > g:
            sign = -sign
            i -= 1
        if i >= 0 and res[i] == g:
            sign = -sign
            res.pop(i)
        else:
            res.insert(i + 1, g)
    return sign, tuple(res)


@lru_cache(maxsize=None)
def _weyl_pair_mul(a1: int, b1: int, a2: int, b2: int):
    """Normal-order (p^a1 q^b1)(p^a2 q^b2) for one symplectic pair.

    Uses q^b p^a = sum_k (-1)^k C(a,k) C(b,k) k! p^(a-k) q^(b-k); the
    correction terms strictly drop total degree, so the rewrite terminates.
    """
    out = []
    for k in range(min(a2, b1) + 1):
        c = comb(a2, k) * comb(b1, k) * factorial(k)
        if k % 2:
            c = -c
        out.append((a1 + a2 - k, b1 + b2 - k, c))
    return tuple(out)


def _weyl_word_mul(wa: tuple, wb: tuple):
    """Product of two normal-ordered w-words; yields (word, int_coeff) pairs."""
    n = len(wa) // 2
    results = [(tuple(), 1)]
    for j in range(n):
        a1, b1 = wa[2 * j], wa[2 * j + 1]
        a2, b2 = wb[2 * j], wb[2 * j + 1]
        pair_terms = _weyl_pair_mul(a1, b1, a2, b2)
        results = [
            (word + (pa, qb), coeff * c)
            for word, coeff in results
            for pa, qb, c in pair_terms
        ]
    return results


def _mul_monomials(a: SuperMonomial, b: SuperMonomial):
    """All canonical terms of a*b as (monomial, integer coefficient) pairs."""
    bos = tuple(x + y for x, y in zip(a.bos, b.bos))
    merged = _merge_grassmann(a.ferm, b.ferm)
    if merged is None:
        return []
    sign, ferm = merged
    # b's e-word crosses a's w-word: one -1 per (e, w) transposition
    if (sum(a.weyl) * len(b.cliff)) % 2:
        sign = -sign
    csign, cliff = _clifford_word_mul(a.cliff, b.cliff)
    sign *= csign
    out = []
    for weyl, coeff in _weyl_word_mul(a.weyl, b.weyl):
        out.append((SuperMonomial(bos, ferm, cliff, weyl), sign * coeff))
    return out


def _coerce_scalar(c) -> Scalar:
    if isinstance(c, Scalar):
        return c
    if isinstance(c, (int, Fraction)):
        return Scalar.from_rational(c)
    raise TypeError(f"bad coefficient type {type(c).__name__}")


class Element:
    """A finite Scalar-linear combination of canonical monomials.

    Immutable by convention; all arithmetic returns fresh instances.  Zero
    coefficients are dropped on construction so equality is map equality.
    """

    __slots__ = ("space", "terms")

    def __init__(self, space: SpaceSignature, terms=None):
        clean = {}
        if terms:
            for mono, coeff in terms.items():
                coeff = _coerce_scalar(coeff)
                if not coeff.is_zero():
                    clean[mono] = coeff
        self.space = space
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, space) -> "Element":
        return cls(space)

    @classmethod
    def from_scalar(cls, space, coeff) -> "Element":
        return cls(space, {_unit_monomial(space): coeff})

    @classmethod
    def one(cls, space) -> "Element":
        return cls.from_scalar(space, 1)

    @classmethod
    def monomial(cls, space, mono: SuperMonomial, coeff=1) -> "Element":
        _validate_monomial(space, mono)
        return cls(space, {mono: coeff})

    # -- inspection --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Max total variable degree; -1 for the zero element."""
        return max((m.degree for m in self.terms), default=-1)

    def weyl_degree(self) -> int:
        return max((m.weyl_degree for m in self.terms), default=0)

    def ferm_degrees(self) -> set:
        return {m.degree - sum(m.bos) for m in self.terms}

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda kv: (kv[0].degree, kv[0]))

    def coefficient(self, mono: SuperMonomial) -> Scalar:
        return self.terms.get(mono, Scalar.zero())

    def is_variable_free(self) -> bool:
        return all(m.is_variable_free() for m in self.terms)

    def is_scalar_valued(self) -> bool:
        return all(not m.cliff and not any(m.weyl) for m in self.terms)

    def value_at_origin(self) -> "Element":
        """Drop every term containing a variable; generator words survive."""
        return Element(
            self.space,
            {m: c for m, c in self.terms.items() if m.is_variable_free()},
        )

    def homogeneous_part(self, k: int) -> "Element":
        return Element(
            self.space, {m: c for m, c in self.terms.items() if m.degree == k}
        )

    def ferm_part(self, d: int) -> "Element":
        """Terms whose anticommuting-variable degree is exactly d."""
        return Element(
            self.space,
            {m: c for m, c in self.terms.items() if len(m.ferm) == d},
        )

    # -- linear structure ----------------------------------------------------

    def __add__(self, other) -> "Element":
        other = self._coerce(other)
        res = dict(self.terms)
        for mono, c in other.terms.items():
            acc = res.get(mono)
            acc = c if acc is None else acc + c
            if acc.is_zero():
                res.pop(mono, None)
            else:
                res[mono] = acc
        out = Element.__new__(Element)
        out.space = self.space
        out.terms = res
        return out

    def __neg__(self) -> "Element":
        out = Element.__new__(Element)
        out.space = self.space
        out.terms = {m: -c for m, c in self.terms.items()}
        return out

    def __sub__(self, other) -> "Element":
        return self + (-self._coerce(other))

    def scale(self, coeff) -> "Element":
        coeff = _coerce_scalar(coeff)
        if coeff.is_zero():
            return Element.zero(self.space)
        return Element(self.space, {m: c * coeff for m, c in self.terms.items()})

    def __rmul__(self, coeff) -> "Element":
        if isinstance(coeff, (int, Fraction, Scalar)):
            return self.scale(coeff)
        return NotImplemented

    # -- the noncommutative product ----------------------------------------

    def __mul__(self, other) -> "Element":
        if isinstance(other, (int, Fraction, Scalar)):
            return self.scale(other)
        other = self._coerce(other)
        res = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                coeff = ca * cb
                for mono, k in _mul_monomials(ma, mb):
                    add = coeff * k
                    acc = res.get(mono)
                    acc = add if acc is None else acc + add
                    if acc.is_zero():
                        res.pop(mono, None)
                    else:
                        res[mono] = acc
        out = Element.__new__(Element)
        out.space = self.space
        out.terms = res
        return out

    def __pow__(self, k: int) -> "Element":
        if k < 0:
            raise ValueError("negative powers are not defined")
        out = Element.one(self.space)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def _coerce(self, other) -> "Element":
        if isinstance(other, Element):
            if other.space != self.space:
                raise SpaceMismatch(f"{self.space} vs {other.space}")
            return other
        if isinstance(other, (int, Fraction, Scalar)):
            return Element.from_scalar(self.space, other)
        raise TypeError(f"cannot combine Element with {type(other).__name__}")

    # -- substitution --------------------------------------------------------

    def scale_variables(self, r) -> "Element":
        """Substitute x_i -> r x_i and q_j -> r q_j for rational r."""
        r = Fraction(r)
        return Element(
            self.space,
            {m: c * (r ** m.degree) for m, c in self.terms.items()},
        )

    # -- comparisons ---------------------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction, Scalar)):
            other = Element.from_scalar(self.space, other)
        if not isinstance(other, Element):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __hash__(self):
        return hash((self.space, frozenset(self.terms)))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        try:
            return f"<Element {format_element(self)!r}>"
        except ValueError:
            return f"<Element {len(self.terms)} terms over {self.space}>"

    # -- JSON interchange ----------------------------------------------------

    def to_json(self) -> list:
        out = []
        for mono, coeff in self.sorted_terms():
            out.append(
                {
                    "bos": list(mono.bos),
                    "ferm": list(mono.ferm),
                    "cliff": list(mono.cliff),
                    "weyl": list(mono.weyl),
                    "coef": coeff.to_json(),
                }
            )
        return out

    @classmethod
    def from_json(cls, space: SpaceSignature, data: list) -> "Element":
        terms = {}
        for item in data:
            mono = SuperMonomial(
                tuple(item["bos"]),
                tuple(item["ferm"]),
                tuple(item["cliff"]),
                tuple(item["weyl"]),
            )
            _validate_monomial(space, mono)
            coeff = Scalar.from_json(item["coef"])
            if mono in terms:
                coeff = terms[mono] + coeff
            terms[mono] = coeff
        return cls(space, terms)


def _validate_monomial(space: SpaceSignature, mono: SuperMonomial):
    if len(mono.bos) != space.m or len(mono.weyl) != 2 * space.n:
        raise SpaceMismatch(f"monomial shape does not match {space}")
    if any(e < 0 for e in mono.bos) or any(e < 0 for e in mono.weyl):
        raise ValueError("negative exponent")
    if list(mono.ferm) != sorted(set(mono.ferm)):
        raise ValueError("anticommuting word must be strictly ascending")
    if mono.ferm and mono.ferm[-1] > space.ferm_vars:
        raise IndexError(f"anticommuting index out of range for {space}")
    if list(mono.cliff) != sorted(set(mono.cliff)):
        raise ValueError("e-generator word must be strictly ascending")
    if mono.cliff and (mono.cliff[0] < 1 or mono.cliff[-1] > space.m):
        raise IndexError(f"e-generator index out of range for {space}")


def mul(a: Element, b: Element, space: SpaceSignature) -> Element:
    """Exact canonical product of two elements over ``space``."""
    if a.space != space or b.space != space:
        raise SpaceMismatch("operands not over the requested space")
    return a * b


# -- symbol constructors -----------------------------------------------------


def bos_var(space: SpaceSignature, i: int) -> Element:
    if not 1 <= i <= space.m:
        raise IndexError(f"x{i} out of range for {space}")
    bos = tuple(1 if k == i - 1 else 0 for k in range(space.m))
    return Element.monomial(space, SuperMonomial(bos, (), (), (0,) * (2 * space.n)))


def ferm_var(space: SpaceSignature, j: int) -> Element:
    if not 1 <= j <= space.ferm_vars:
        raise IndexError(f"anticommuting variable {j} out of range for {space}")
    return Element.monomial(
        space, SuperMonomial((0,) * space.m, (j,), (), (0,) * (2 * space.n))
    )


def cliff_gen(space: SpaceSignature, i: int) -> Element:
    if not 1 <= i <= space.m:
        raise IndexError(f"e{i} out of range for {space}")
    return Element.monomial(
        space, SuperMonomial((0,) * space.m, (), (i,), (0,) * (2 * space.n))
    )


def weyl_gen(space: SpaceSignature, j: int) -> Element:
    if not 1 <= j <= 2 * space.n:
        raise IndexError(f"w{j} out of range for {space}")
    weyl = tuple(1 if k == j - 1 else 0 for k in range(2 * space.n))
    return Element.monomial(space, SuperMonomial((0,) * space.m, (), (), weyl))


@lru_cache(maxsize=None)
def vector_x_bos(space: SpaceSignature) -> Element:
    """sum_i x_i e_i"""
    out = Element.zero(space)
    for i in range(1, space.m + 1):
        out = out + bos_var(space, i) * cliff_gen(space, i)
    return out


@lru_cache(maxsize=None)
def vector_x_ferm(space: SpaceSignature) -> Element:
    """sum_j q_j w_j (first anticommuting set only)"""
    out = Element.zero(space)
    for j in range(1, 2 * space.n + 1):
        out = out + ferm_var(space, j) * weyl_gen(space, j)
    return out


@lru_cache(maxsize=None)
def vector_x(space: SpaceSignature) -> Element:
    """The vector variable: all coordinates paired with their generators."""
    return vector_x_bos(space) + vector_x_ferm(space)


@lru_cache(maxsize=None)
def bos_x_squared(space: SpaceSignature) -> Element:
    """- sum_i x_i^2  (the scalar square of the commuting vector part)"""
    out = Element.zero(space)
    for i in range(1, space.m + 1):
        out = out - bos_var(space, i) * bos_var(space, i)
    return out


@lru_cache(maxsize=None)
def ferm_x_squared(space: SpaceSignature) -> Element:
    """sum_j q_{2j-1} q_{2j}  (the scalar square of the anticommuting part)"""
    out = Element.zero(space)
    for j in range(1, space.n + 1):
        out = out + ferm_var(space, 2 * j - 1) * ferm_var(space, 2 * j)
    return out


@lru_cache(maxsize=None)
def x_squared(space: SpaceSignature) -> Element:
    return bos_x_squared(space) + ferm_x_squared(space)


@lru_cache(maxsize=None)
def ferm_sq_power(space: SpaceSignature, j: int) -> Element:
    """(q-part square)^j, cached; vanishes for j > n."""
    return ferm_x_squared(space) ** j


# -- expression grammar ------------------------------------------------------
#
#   expr   = ["+"|"-"] term {("+"|"-") term}
#   term   = factor {"*" factor}
#   factor = atom ["^" nat]
#   atom   = rational | "pi" | var | "(" expr ")"
#   var    = "x"nat | "q"nat | "y"nat | "e"nat | "w"nat
#
# "q" names the first anticommuting set, "y" the second (doubled spaces only).

_TOKEN = re.compile(r"\s*(?:(\d+)|([xqyew])(\d+)|(pi\b)|([-+*^()/]))")


class _Parser:
    def __init__(self, text: str, space: SpaceSignature):
        self.text = text
        self.space = space
        self.tokens = []
        pos = 0
        while pos < len(text):
            match = _TOKEN.match(text, pos)
            if match is None:
                if text[pos:].strip() == "":
                    break
                bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
                err = SyntaxError(f"unexpected character {text[bad]!r} at offset {bad}")
                err.offset = bad
                raise err
            self.tokens.append((match, match.start(1) if match.group(1) else match.start()))
            pos = match.end()
        self.pos = 0

    def _peek(self):
        if self.pos >= len(self.tokens):
            return None
        return self.tokens[self.pos][0]

    def _offset(self):
        if self.pos >= len(self.tokens):
            return len(self.text)
        match = self.tokens[self.pos][0]
        return match.end() - len(match.group().lstrip())

    def _fail(self, msg):
        off = self._offset()
        err = SyntaxError(f"{msg} at offset {off}")
        err.offset = off
        raise err

    def _take_op(self, *ops):
        match = self._peek()
        if match is not None and match.group(5) in ops:
            self.pos += 1
            return match.group(5)
        return None

    def parse(self) -> Element:
        out = self.expr()
        if self.pos != len(self.tokens):
            self._fail("trailing input")
        return out

    def expr(self) -> Element:
        sign = self._take_op("+", "-")
        out = self.term()
        if sign == "-":
            out = -out
        while True:
            op = self._take_op("+", "-")
            if op is None:
                return out
            rhs = self.term()
            out = out + rhs if op == "+" else out - rhs

    def term(self) -> Element:
        out = self.factor()
        while self._take_op("*"):
            out = out * self.factor()
        return out

    def factor(self) -> Element:
        out = self.atom()
        if self._take_op("^"):
            match = self._peek()
            if match is None or not match.group(1):
                self._fail("expected exponent")
            self.pos += 1
            out = out ** int(match.group(1))
        return out

    def atom(self) -> Element:
        match = self._peek()
        if match is None:
            self._fail("unexpected end of input")
        if match.group(1):  # rational
            self.pos += 1
            num = int(match.group(1))
            if self._take_op("/"):
                den = self._peek()
                if den is None or not den.group(1):
                    self._fail("expected denominator")
                self.pos += 1
                return Element.from_scalar(self.space, Fraction(num, int(den.group(1))))
            return Element.from_scalar(self.space, num)
        if match.group(4):  # pi
            self.pos += 1
            return Element.from_scalar(self.space, Scalar.pi_half_power(2))
        if match.group(2):  # variable / generator
            self.pos += 1
            kind = match.group(2)
            idx = int(match.group(3))
            try:
                if kind == "x":
                    return bos_var(self.space, idx)
                if kind == "q":
                    if idx > 2 * self.space.n:
                        raise IndexError(f"q{idx} out of range for {self.space}")
                    return ferm_var(self.space, idx)
                if kind == "y":
                    if not self.space.second_ferm_set:
                        raise IndexError("y-variables need the doubled space")
                    if idx > 2 * self.space.n:
                        raise IndexError(f"y{idx} out of range for {self.space}")
                    return ferm_var(self.space, 2 * self.space.n + idx)
                if kind == "e":
                    return cliff_gen(self.space, idx)
                return weyl_gen(self.space, idx)
            except IndexError:
                raise
        if self._take_op("("):
            out = self.expr()
            if not self._take_op(")"):
                self._fail("expected ')'")
            return out
        self._fail("expected atom")


def parse(text: str, space: SpaceSignature) -> Element:
    """Parse an expression into a canonical Element (factor order respected)."""
    return _Parser(text, space).parse()


def _scalar_to_text(c: Scalar):
    """Grammar form of a scalar, or None when it needs half/negative pi powers."""
    bits = []
    for s in sorted(c.terms):
        re_, im = c.terms[s]
        if im != 0 or s < 0 or s % 2:
            return None
        q = re_
        txt = f"{abs(q.numerator)}/{q.denominator}" if q.denominator != 1 else f"{abs(q.numerator)}"
        if s == 2:
            txt += "*pi"
        elif s:
            txt += f"*pi^{s // 2}"
        bits.append((q < 0, txt))
    return bits


def _monomial_to_text(mono: SuperMonomial, space: SpaceSignature) -> str:
    bits = []
    for i, a in enumerate(mono.bos):
        if a == 1:
            bits.append(f"x{i + 1}")
        elif a:
            bits.append(f"x{i + 1}^{a}")
    for j in mono.ferm:
        if j <= 2 * space.n:
            bits.append(f"q{j}")
        else:
            bits.append(f"y{j - 2 * space.n}")
    for i in mono.cliff:
        bits.append(f"e{i}")
    for j, b in enumerate(mono.weyl):
        if b == 1:
            bits.append(f"w{j + 1}")
        elif b:
            bits.append(f"w{j + 1}^{b}")
    return "*".join(bits)


def format_element(element: Element) -> str:
    """Canonical text form; parse(format_element(f)) == f.

    Only defined for coefficients the grammar can spell (real parts and
    nonnegative integer powers of pi); raises ValueError otherwise -- the
    JSON form is the lossless interchange.
    """
    if element.is_zero():
        return "0"
    chunks = []
    for mono, coeff in element.sorted_terms():
        scal = _scalar_to_text(coeff)
        if scal is None:
            raise ValueError(f"coefficient {coeff!r} has no grammar form")
        mono_txt = _monomial_to_text(mono, element.space)
        if len(scal) == 1:
            negative, txt = scal[0]
            if mono_txt:
                body = mono_txt if txt == "1" else f"{txt}*{mono_txt}"
            else:
                body = txt
            chunks.append(("-" if negative else "+", body))
        else:
            inner = ""
            for k, (negative, txt) in enumerate(scal):
                if k == 0:
                    inner = ("-" if negative else "") + txt
                else:
                    inner += (" - " if negative else " + ") + txt
            body = f"({inner})"
            if mono_txt:
                body += f"*{mono_txt}"
            chunks.append(("+", body))
    sign0, body0 = chunks[0]
    out = ("-" if sign0 == "-" else "") + body0
    for sign, body in chunks[1:]:
        out += f" {sign} {body}"
    return out
