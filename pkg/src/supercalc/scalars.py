"""Exact coefficient arithmetic: Gaussian rationals times half-integer powers of pi.

Every coefficient and every integral value in this package lives in the ring of
finite Laurent combinations ``sum_s (a_s + b_s i) * pi^(s/2)`` with rational
``a_s``, ``b_s``.  Keeping half powers of pi exact is what lets odd-dimensional
sphere areas and half-integer gamma values combine without approximation.  No
floating point enters this module; floats exist only in the numeric oracle.
"""

from __future__ import annotations

from fractions import Fraction

Rational = Fraction


class PoleError(ArithmeticError):
    """Gamma requested at a non-positive integer argument."""


def _rat(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    raise TypeError(f"expected int or Fraction, got {type(x).__name__}")


class Scalar:
    """A finite map ``{s: a + b*i}`` denoting ``sum (a + b i) pi^(s/2)``.

    Instances are immutable by convention: every operation returns a new
    Scalar and no method mutates ``terms`` after construction.  Zero
    coefficients are never stored, so equality is plain dict equality.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        if terms:
            for s, (re, im) in terms.items():
                re = _rat(re)
                im = _rat(im)
                if re or im:
                    clean[int(s)] = (re, im)
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls) -> "Scalar":
        return cls()

    @classmethod
    def one(cls) -> "Scalar":
        return cls({0: (Fraction(1), Fraction(0))})

    @classmethod
    def from_rational(cls, q) -> "Scalar":
        return cls({0: (_rat(q), Fraction(0))})

    @classmethod
    def i_unit(cls) -> "Scalar":
        return cls({0: (Fraction(0), Fraction(1))})

    @classmethod
    def pi_half_power(cls, s: int, coeff=1, imag=0) -> "Scalar":
        """``coeff * pi^(s/2)`` (plus ``imag * i * pi^(s/2)``)."""
        return cls({s: (_rat(coeff), _rat(imag))})

    # -- predicates --------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_real(self) -> bool:
        return all(im == 0 for _, im in self.terms.values())

    def is_rational(self) -> bool:
        return set(self.terms) <= {0} and self.is_real()

    def rational_value(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        if not self.is_rational():
            raise ValueError(f"not a plain rational: {self}")
        return self.terms[0][0]

    # -- ring operations ---------------------------------------------------

    def __add__(self, other) -> "Scalar":
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        other = _coerce(other)
        res = dict(self.terms)
        for s, (re, im) in other.terms.items():
            r0, i0 = res.get(s, (Fraction(0), Fraction(0)))
            r, i = r0 + re, i0 + im
            if r or i:
                res[s] = (r, i)
            elif s in res:
                del res[s]
        out = Scalar.__new__(Scalar)
        out.terms = res
        return out

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        out = Scalar.__new__(Scalar)
        out.terms = {s: (-re, -im) for s, (re, im) in self.terms.items()}
        return out

    def __sub__(self, other) -> "Scalar":
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        return self + (-_coerce(other))

    def __rsub__(self, other) -> "Scalar":
        return _coerce(other) + (-self)

    def __mul__(self, other) -> "Scalar":
        if not isinstance(other, (Scalar, int, Fraction)):
            return NotImplemented
        other = _coerce(other)
        res = {}
        for s1, (a, b) in self.terms.items():
            for s2, (c, d) in other.terms.items():
                s = s1 + s2
                re = a * c - b * d
                im = a * d + b * c
                r0, i0 = res.get(s, (Fraction(0), Fraction(0)))
                r, i = r0 + re, i0 + im
                if r or i:
                    res[s] = (r, i)
                elif s in res:
                    del res[s]
        out = Scalar.__new__(Scalar)
        out.terms = res
        return out

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Scalar":
        if k < 0:
            return self.inverse() ** (-k)
        out = Scalar.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def inverse(self) -> "Scalar":
        """Exact inverse; defined only for single-term scalars."""
        if len(self.terms) != 1:
            raise ValueError(f"inverse needs a single pi-power term: {self}")
        ((s, (a, b)),) = self.terms.items()
        norm = a * a + b * b
        return Scalar({-s: (a / norm, -b / norm)})

    def __truediv__(self, other) -> "Scalar":
        return self * _coerce(other).inverse()

    def conjugate(self) -> "Scalar":
        return Scalar({s: (re, -im) for s, (re, im) in self.terms.items()})

    # -- comparisons / hashing --------------------------------------------

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Scalar.from_rational(other)
        if not isinstance(other, Scalar):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    # -- conversions -------------------------------------------------------

    def to_complex(self) -> complex:
        """Float approximation (numeric oracle only; never feeds back in)."""
        import math

        out = 0j
        for s, (re, im) in self.terms.items():
            out += complex(re, im) * math.pi ** (s / 2)
        return out

    def to_json(self) -> dict:
        """``{"s": "a/b"}`` or ``{"s": "a/b + c/d i"}``; exact strings only."""
        out = {}
        for s in sorted(self.terms):
            re, im = self.terms[s]
            if im == 0:
                text = _frac_str(re)
            else:
                sign = "+" if im >= 0 else "-"
                text = f"{_frac_str(re)} {sign} {_frac_str(abs(im))} i"
            out[str(s)] = text
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "Scalar":
        terms = {}
        for key, text in obj.items():
            parts = text.replace(" ", "")
            if parts.endswith("i"):
                body = parts[:-1]
                cut = max(body.rfind("+", 1), body.rfind("-", 1))
                re = Fraction(body[:cut])
                im = Fraction(body[cut:])
            else:
                re = Fraction(parts)
                im = Fraction(0)
            terms[int(key)] = (re, im)
        return cls(terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for s in sorted(self.terms):
            re, im = self.terms[s]
            if im == 0:
                coeff = str(re)
            elif re == 0:
                coeff = f"{im}i"
            else:
                coeff = f"({re}{'+' if im > 0 else '-'}{abs(im)}i)"
            if s == 0:
                bits.append(coeff)
            elif s == 2:
                bits.append(f"{coeff}*pi")
            else:
                bits.append(f"{coeff}*pi^({Fraction(s, 2)})")
        return " + ".join(bits)


def _coerce(x) -> Scalar:
    if isinstance(x, Scalar):
        return x
    if isinstance(x, (int, Fraction)):
        return Scalar.from_rational(x)
    raise TypeError(f"cannot coerce {type(x).__name__} to Scalar")


def _frac_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _check_half_integer(s) -> Fraction:
    s = Fraction(s)
    if s.denominator not in (1, 2):
        raise ValueError(f"argument must be a half-integer, got {s}")
    return s


def gamma_half(s) -> Scalar:
    """Exact gamma at a half-integer point.

    Integer arguments give rationals, half-odd arguments give a rational
    multiple of pi^(1/2); negative half-odd values come from downward
    recursion gamma(s) = gamma(s+1)/s, which stays in exact arithmetic.
    """
    s = _check_half_integer(s)
    if s.denominator == 1:
        if s <= 0:
            raise PoleError(f"gamma pole at {s}")
        val = Fraction(1)
        k = 1
        while k < s:
            val *= k
            k += 1
        return Scalar.from_rational(val)
    # half-odd: walk between s and 1/2
    coeff = Fraction(1)
    t = s
    while t > Fraction(1, 2):
        t -= 1
        coeff *= t
    while t < Fraction(1, 2):
        coeff /= t
        t += 1
    return Scalar.pi_half_power(1, coeff)


def recip_gamma_half(s) -> Scalar:
    """Exact 1/gamma; returns the zero scalar at the poles instead of raising.

    The zeros are load-bearing: series coefficients divided by gamma must
    vanish term-by-term at non-positive even superdimensions.
    """
    s = _check_half_integer(s)
    if s.denominator == 1 and s <= 0:
        return Scalar.zero()
    return gamma_half(s).inverse()


def _isqrt_exact(k: int):
    r = int(k ** 0.5)
    for cand in (r - 1, r, r + 1):
        if cand >= 0 and cand * cand == k:
            return cand
    return None


def exact_sqrt(q) -> Fraction:
    """Square root of a positive rational that is a perfect square, else
    ValueError.  Radii and rate constants must stay rational for the ring to
    hold every intermediate value exactly."""
    q = Fraction(q)
    if q <= 0:
        raise ValueError("need a positive rational")
    num = _isqrt_exact(q.numerator)
    den = _isqrt_exact(q.denominator)
    if num is None or den is None:
        raise ValueError(f"{q} is not the square of a rational")
    return Fraction(num, den)
