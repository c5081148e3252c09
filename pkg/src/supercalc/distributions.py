"""Formal distribution calculus at radial and hyperplane arguments.

Radial objects are finite sums of step/delta derivatives of the shifted
radial square, each multiplied by an element coefficient; the nilpotent
Taylor expansion in the anticommuting square truncates after n terms, which
is what makes the whole calculus finite and exact.  Order -1 encodes the
step function so that the formal derivative rule is a uniform order bump.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial

from .algebra import (
    Element,
    SpaceMismatch,
    SpaceSignature,
    ferm_sq_power,
    ferm_var,
    vector_x_bos,
)
from .integrals import (
    IntegralValue,
    UnsupportedDimension,
    _falling,
    _generator_word_element,
    ball_moment,
    berezin,
    sphere_moment,
)
from .operators import dirac_left
from .scalars import Scalar, exact_sqrt as _sqrt_fraction


class RadialDistribution:
    """Finite sum of ``coeff * D^(order)(radial_square + shift)`` terms.

    ``order = -1`` is the step function, ``order = k >= 0`` the k-th delta
    derivative.  Terms are merged per (order, shift) and stored canonically,
    so equality is map equality.
    """

    __slots__ = ("space", "terms")

    def __init__(self, space: SpaceSignature, terms=None):
        clean = {}
        if terms:
            for (order, shift), coeff in terms.items():
                order = int(order)
                if order < -1:
                    raise ValueError("order must be >= -1")
                shift = Fraction(shift)
                if not isinstance(coeff, Element):
                    raise TypeError("coefficients must be elements")
                if coeff.space != space:
                    raise SpaceMismatch("coefficient over the wrong space")
                if coeff.is_zero():
                    continue
                key = (order, shift)
                if key in clean:
                    acc = clean[key] + coeff
                    if acc.is_zero():
                        del clean[key]
                    else:
                        clean[key] = acc
                else:
                    clean[key] = coeff
        self.space = space
        self.terms = clean

    def __add__(self, other: "RadialDistribution") -> "RadialDistribution":
        if self.space != other.space:
            raise SpaceMismatch("mixed spaces")
        merged = dict(self.terms)
        for key, coeff in other.terms.items():
            merged[key] = merged[key] + coeff if key in merged else coeff
        return RadialDistribution(self.space, merged)

    def left_mul(self, element: Element) -> "RadialDistribution":
        """Multiply every coefficient by an element from the left."""
        return RadialDistribution(
            self.space,
            {key: element * coeff for key, coeff in self.terms.items()},
        )

    def scale(self, c) -> "RadialDistribution":
        return RadialDistribution(
            self.space, {key: coeff.scale(c) for key, coeff in self.terms.items()}
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, RadialDistribution):
            return NotImplemented
        return self.space == other.space and self.terms == other.terms

    def __repr__(self):
        names = {
            (order, shift): "H" if order == -1 else f"delta^({order})"
            for order, shift in self.terms
        }
        bits = [
            f"[{names[key]}(r2+{key[1]})]*{len(coeff.terms)} terms"
            for key, coeff in sorted(self.terms.items())
        ]
        return f"<RadialDistribution {' + '.join(bits) or '0'}>"

    def max_ferm_degree(self) -> int:
        out = 0
        for coeff in self.terms.values():
            for mono in coeff.terms:
                out = max(out, len(mono.ferm))
        return out


def expand_radial(kind: str, shift, space: SpaceSignature) -> RadialDistribution:
    """Nilpotent Taylor expansion of a step or delta at the shifted radial
    square: each anticommuting-square power j/j! raises the derivative order
    by one, stopping at j = n."""
    shift = Fraction(shift)
    terms = {}
    if kind == "heaviside":
        terms[(-1, shift)] = Element.one(space)
        for j in range(1, space.n + 1):
            terms[(j - 1, shift)] = ferm_sq_power(space, j).scale(
                Fraction(1, factorial(j))
            )
    elif kind == "delta":
        for j in range(0, space.n + 1):
            terms[(j, shift)] = ferm_sq_power(space, j).scale(
                Fraction(1, factorial(j))
            )
    else:
        raise ValueError("kind must be 'heaviside' or 'delta'")
    return RadialDistribution(space, terms)


def dirac_on_radial(d: RadialDistribution, space: SpaceSignature) -> RadialDistribution:
    """Apply the Dirac operator formally: derive each coefficient, and chain
    through the radial argument (one order bump against twice the commuting
    vector; the shifted square has derivative -2x_i per coordinate and the
    operator's commuting half carries another minus)."""
    if d.space != space:
        raise SpaceMismatch("distribution over the wrong space")
    out = {}
    two_xb = vector_x_bos(space).scale(2)

    def _acc(key, coeff):
        if coeff.is_zero():
            return
        out[key] = out[key] + coeff if key in out else coeff

    for (order, shift), coeff in d.terms.items():
        _acc((order, shift), dirac_left(coeff, space))
        _acc((order + 1, shift), two_xb * coeff)
    return RadialDistribution(space, out)


def pair_radial(
    d: RadialDistribution, f: Element, space: SpaceSignature
) -> IntegralValue:
    """Integrate ``d * f`` over the whole superspace, exactly.

    Step terms reduce to ball moments of radius sqrt(shift); delta-derivative
    terms reduce to radial derivatives of sphere averages at that radius with
    the 1/(2R) Jacobian of the argument change.
    """
    if space.m < 2:
        raise UnsupportedDimension("radial pairings need m >= 2")
    if d.space != space or f.space != space:
        raise SpaceMismatch("operands over the wrong space")
    total = Element.zero(space)
    for (order, shift), coeff in d.terms.items():
        radius = _sqrt_fraction(shift)
        g = berezin(coeff * f, space)
        for mono, c in g.terms.items():
            alpha = mono.bos
            if order == -1:
                val = ball_moment(alpha, space.m, radius)
            else:
                sm = sphere_moment(alpha, space.m)
                if sm.is_zero():
                    continue
                t = space.m - 1 + sum(alpha)
                rad = Fraction(1)
                for i in range(1, order + 1):
                    rad *= Fraction(t - (2 * i - 1), 2)
                rad *= radius ** (t - 2 * order)
                val = sm * (rad / 2 / radius)
            if val.is_zero():
                continue
            word, _ = _generator_word_element(space, mono, None)
            add = c * val
            acc = total.terms.get(word)
            acc = add if acc is None else acc + add
            if acc.is_zero():
                total.terms.pop(word, None)
            else:
                total.terms[word] = acc
    return IntegralValue(Element(space, total.terms))


@dataclass(frozen=True)
class HyperplaneDistribution:
    """Expansion of a delta at an affine pairing argument: derivative orders
    0..2n against powers of the anticommuting pairing, plus the commuting
    direction and offset that fix the bosonic argument."""

    space: SpaceSignature
    direction: tuple
    offset: Fraction
    terms: tuple  # ((order, Element), ...) ascending order

    def max_order(self) -> int:
        return max((order for order, _ in self.terms), default=0)


def ferm_pairing(space: SpaceSignature) -> Element:
    """(1/2) sum_j (q_{2j-1} y_{2j} - q_{2j} y_{2j-1}) over the doubled space."""
    if not space.second_ferm_set:
        raise SpaceMismatch("the anticommuting pairing needs the doubled space")
    n = space.n
    out = Element.zero(space)
    for j in range(1, n + 1):
        out = out + ferm_var(space, 2 * j - 1) * ferm_var(space, 2 * n + 2 * j)
        out = out - ferm_var(space, 2 * j) * ferm_var(space, 2 * n + 2 * j - 1)
    return out.scale(Fraction(1, 2))


def expand_hyperplane(y_b, p, space: SpaceSignature) -> HyperplaneDistribution:
    """Finite expansion of the hyperplane delta: order-j derivative against
    the j-th power of the anticommuting pairing over j factorial."""
    if not space.second_ferm_set:
        raise SpaceMismatch("hyperplane expansion needs the doubled space")
    y_b = tuple(Fraction(c) for c in y_b)
    if len(y_b) != space.m:
        raise ValueError("direction length != m")
    p = Fraction(p)
    pairing = ferm_pairing(space)
    terms = []
    power = Element.one(space)
    for j in range(0, 2 * space.n + 1):
        if j:
            power = power * pairing
        coeff = power.scale(Fraction(1, factorial(j)))
        if coeff.is_zero():
            continue
        terms.append((j, coeff))
    return HyperplaneDistribution(space, y_b, p, tuple(terms))
