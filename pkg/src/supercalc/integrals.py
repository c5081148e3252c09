"""Exact integrals: Berezin, sphere/ball moments, the supersphere via its
Laplacian series and via its closed geometric form, the superball, full-space
Gaussian integrals, and the Cauchy-identity checkers built from them.

All routines act coefficient-wise on generator words: integrating a
generator-valued integrand integrates each Scalar coefficient and leaves the
e/w word intact.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .algebra import (
    Element,
    SpaceMismatch,
    SpaceSignature,
    SuperMonomial,
    ferm_sq_power,
    vector_x,
    vector_x_bos,
    weyl_gen,
)
from .operators import (
    bos_partial,
    dirac_left,
    dirac_right,
    ferm_dirac_left,
    ferm_dirac_right,
    ferm_partial_right,
    laplace,
)
from .scalars import Scalar, gamma_half, recip_gamma_half


class UnsupportedDimension(ValueError):
    """Sphere and ball reductions need at least two commuting variables."""


class InternalInconsistency(AssertionError):
    """Two formulas for the same integral disagreed; implementation bug."""


class BadAlpha(ValueError):
    """Weight element must contain anticommuting variables only."""


@dataclass(frozen=True)
class IntegralValue:
    """A variable-free element: a Scalar for scalar integrands, a combination
    of generator words otherwise."""

    value: Element

    def __post_init__(self):
        if not self.value.is_variable_free():
            raise ValueError("integral value contains leftover variables")

    def as_scalar(self) -> Scalar:
        if self.value.is_zero():
            return Scalar.zero()
        if not self.value.is_scalar_valued():
            raise ValueError("generator-valued integral has no single Scalar")
        ((mono, coeff),) = self.value.terms.items()
        return coeff

    def to_json(self):
        return {"value": self.value.to_json()}

    def __eq__(self, other):
        if isinstance(other, IntegralValue):
            return self.value == other.value
        return self.value == other


def _require_sphere(space: SpaceSignature):
    if space.m < 2:
        raise UnsupportedDimension(
            "m = 1 has no normalized sphere reduction here; use m >= 2"
        )


def berezin(f: Element, space: SpaceSignature) -> Element:
    """Extract pi^(-n) times the top coefficient of the first anticommuting set.

    Equivalent to applying the 2n left partials in descending generator order;
    on the canonical ascending word the accumulated sign is +1, so this is a
    plain coefficient extraction.  Variables of a second set pass through.
    """
    if f.space != space:
        raise SpaceMismatch(f"element over {f.space}, expected {space}")
    full = tuple(range(1, 2 * space.n + 1))
    pref = Scalar.pi_half_power(-2 * space.n)
    terms = {}
    for mono, c in f.terms.items():
        first = tuple(j for j in mono.ferm if j <= 2 * space.n)
        if first != full:
            continue
        rest = tuple(j for j in mono.ferm if j > 2 * space.n)
        new = mono._replace(ferm=rest)
        add = c * pref
        acc = terms.get(new)
        terms[new] = add if acc is None else acc + add
    return Element(space, terms)


def sphere_moment(alpha, m: int) -> Scalar:
    """Exact monomial moment over the unit sphere in m commuting variables.

    Zero for any odd exponent; otherwise ``2 prod_i Gamma((a_i+1)/2) /
    Gamma((|a|+m)/2)``.  The Laplacian-series route reproduces these values;
    keeping this one in closed form preserves two independent paths.
    """
    if m < 2:
        raise UnsupportedDimension("sphere moments need m >= 2")
    if len(alpha) != m:
        raise ValueError("exponent vector length != m")
    if any(a < 0 for a in alpha):
        raise ValueError("negative exponent")
    if any(a % 2 for a in alpha):
        return Scalar.zero()
    out = Scalar.from_rational(2)
    for a in alpha:
        out = out * gamma_half(Fraction(a + 1, 2))
    return out * recip_gamma_half(Fraction(sum(alpha) + m, 2))


def ball_moment(alpha, m: int, radius=1) -> Scalar:
    """Monomial moment over the ball of the given radius: the sphere moment
    times ``R^(|a|+m) / (|a|+m)``."""
    radius = Fraction(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    total = sum(alpha) + m
    return sphere_moment(alpha, m) * Fraction(radius ** total, total)


def _generator_word_element(space, mono, coeff) -> dict:
    stripped = mono._replace(bos=(0,) * space.m, ferm=())
    return stripped, coeff


def _moment_reduce(f: Element, space: SpaceSignature, moment) -> Element:
    """Berezin the first anticommuting set, then apply a commuting-monomial
    moment functional; generator words survive untouched."""
    b = berezin(f, space)
    terms = {}
    for mono, c in b.terms.items():
        if mono.ferm:
            raise ValueError("unreduced anticommuting variables in integrand")
        sm = moment(mono.bos)
        if sm.is_zero():
            continue
        new, add = _generator_word_element(space, mono, c * sm)
        acc = terms.get(new)
        terms[new] = add if acc is None else acc + add
    return Element(space, terms)


def pizzetti_supersphere(f: Element, space: SpaceSignature) -> IntegralValue:
    """Supersphere integral of a polynomial by the iterated-Laplacian series.

    Reciprocal-gamma zeros silently kill the leading terms at non-positive
    even superdimension, which is exactly the behaviour the closed form
    reproduces geometrically.
    """
    if f.space != space:
        raise SpaceMismatch(f"element over {f.space}, expected {space}")
    M = space.superdim
    total = Element.zero(space)
    g = f
    k = 0
    while not g.is_zero():
        c = (
            Scalar.pi_half_power(M, 2)
            * recip_gamma_half(Fraction(2 * k + M, 2))
            * Fraction((-1) ** k, 4 ** k * factorial(k))
        )
        if not c.is_zero():
            total = total + g.value_at_origin().scale(c)
        g = laplace(g, space)
        k += 1
    return IntegralValue(total)


def _falling(t_half: Fraction, j: int) -> Fraction:
    out = Fraction(1)
    for i in range(j):
        out *= t_half - i
    return out


def supersphere_closed(f: Element, space: SpaceSignature, radius=1) -> IntegralValue:
    """Supersphere integral at a given radius from the distributional closed
    form: a Berezin ladder against radial derivatives of sphere averages.

    Each commuting monomial x^a contributes through
    ``[(d/d(r^2))^j r^(m-2+|a|)]_{r=R} * sphere_moment(a)``.
    """
    _require_sphere(space)
    if f.space != space:
        raise SpaceMismatch(f"element over {f.space}, expected {space}")
    radius = Fraction(radius)
    if radius <= 0:
        raise ValueError("radius must be positive")
    total = Element.zero(space)
    for j in range(space.n + 1):
        lead = ferm_sq_power(space, j).scale(Fraction(1, factorial(j)))
        g = lead * f
        if g.is_zero():
            continue
        b = berezin(g, space)
        for mono, c in b.terms.items():
            sm = sphere_moment(mono.bos, space.m)
            if sm.is_zero():
                continue
            t = space.m - 2 + sum(mono.bos)
            rad = _falling(Fraction(t, 2), j) * radius ** (t - 2 * j)
            if rad == 0:
                continue
            new, add = _generator_word_element(space, mono, c * sm * rad)
            acc = total.terms.get(new)
            acc = add if acc is None else acc + add
            if acc.is_zero():
                total.terms.pop(new, None)
            else:
                total.terms[new] = acc
    return IntegralValue(total.scale(radius))


def supersphere_radius(f: Element, space: SpaceSignature, radius) -> IntegralValue:
    """Supersphere integral at radius R (closed form).  Equal to
    ``R^(M-1)`` times the unit integral of the argument-scaled element; the
    verification suite checks that scaling law against this value."""
    return supersphere_closed(f, space, radius)


def superball(f: Element, space: SpaceSignature) -> IntegralValue:
    """Superball integral, computed by two routes that must agree exactly:
    the Laplacian series and the geometric ball+sphere ladder.  Disagreement
    raises InternalInconsistency (a bug, not a user error)."""
    _require_sphere(space)
    if f.space != space:
        raise SpaceMismatch(f"element over {f.space}, expected {space}")
    M = space.superdim

    series = Element.zero(space)
    g = f
    k = 0
    while not g.is_zero():
        c = (
            Scalar.pi_half_power(M)
            * recip_gamma_half(Fraction(2 * k + M, 2) + 1)
            * Fraction((-1) ** k, 4 ** k * factorial(k))
        )
        if not c.is_zero():
            series = series + g.value_at_origin().scale(c)
        g = laplace(g, space)
        k += 1

    # geometric route: plain ball term plus the sphere ladder produced by the
    # delta reduction; delta(1 - r^2) contributes the Jacobian factor 1/2
    geo = _moment_reduce(f, space, lambda a: ball_moment(a, space.m, 1))
    for j in range(space.n):
        lead = ferm_sq_power(space, j + 1).scale(Fraction(1, factorial(j + 1)))
        g = lead * f
        if g.is_zero():
            continue
        b = berezin(g, space)
        for mono, c in b.terms.items():
            sm = sphere_moment(mono.bos, space.m)
            if sm.is_zero():
                continue
            t = space.m - 1 + sum(mono.bos)
            rad = Fraction(1, 2)
            for i in range(1, j + 1):
                rad *= Fraction(t - (2 * i - 1), 2)
            if rad == 0:
                continue
            new, add = _generator_word_element(space, mono, c * sm * rad)
            acc = geo.terms.get(new)
            acc = add if acc is None else acc + add
            if acc.is_zero():
                geo.terms.pop(new, None)
            else:
                geo.terms[new] = acc

    if series != geo:
        raise InternalInconsistency(
            f"superball series and geometric forms disagree on {f!r}"
        )
    return IntegralValue(series)


def gaussian_integral(f: Element, space: SpaceSignature) -> IntegralValue:
    """Integral of ``f * exp(x^2)`` over the whole superspace, directly:
    expand the nilpotent part of the envelope, Berezin-integrate, then take
    per-coordinate Gaussian moments ``int x^(2a) e^(-x^2) dx = Gamma(a+1/2)``.
    """
    if f.space != space:
        raise SpaceMismatch(f"element over {f.space}, expected {space}")
    env = Element.zero(space)
    for j in range(space.n + 1):
        env = env + ferm_sq_power(space, j).scale(Fraction(1, factorial(j)))
    b = berezin(env * f, space)
    total = Element.zero(space)
    for mono, c in b.terms.items():
        if any(a % 2 for a in mono.bos):
            continue
        val = Scalar.one()
        for a in mono.bos:
            val = val * gamma_half(Fraction(a + 1, 2))
        new, add = _generator_word_element(space, mono, c * val)
        acc = total.terms.get(new)
        acc = add if acc is None else acc + add
        if acc.is_zero():
            total.terms.pop(new, None)
        else:
            total.terms[new] = acc
    return IntegralValue(total)


def phi_k(f: Element, k: int, space: SpaceSignature) -> IntegralValue:
    """The k-th supersphere functional: integrate ``(q-square)^k * f``.
    These n+1 functionals form a basis of all supersphere integrations."""
    if not 0 <= k <= space.n:
        raise IndexError(f"k must lie in 0..{space.n}")
    return pizzetti_supersphere(ferm_sq_power(space, k) * f, space)


# -- Cauchy identities --------------------------------------------------------


def _require_ferm_only(alpha: Element, name: str):
    for mono in alpha.terms:
        if any(mono.bos) or mono.cliff or any(mono.weyl):
            raise BadAlpha(
                f"{name} must be built from anticommuting variables only"
            )


def _protected_right_ferm_partial(
    f: Element, alpha: Element, j: int, space: SpaceSignature
) -> Element:
    """Right partial of the product f*alpha in which alpha is never derived.

    The matched variable still has to jump over alpha's word, so each f-term
    picks up ``(-1)^(deg of the alpha term)`` on top of the usual right-partial
    sign.  Bilinear in (f, alpha); it is NOT a function of the product.
    """
    out = Element.zero(space)
    for mf, cf in f.terms.items():
        if j not in mf.ferm:
            continue
        t = mf.ferm.index(j)
        sign = 1 if (len(mf.ferm) - 1 - t) % 2 == 0 else -1
        dropped = Element.monomial(space, mf._replace(ferm=mf.ferm[:t] + mf.ferm[t + 1 :]))
        for ma, ca in alpha.terms.items():
            s = sign * (1 if len(ma.ferm) % 2 == 0 else -1)
            out = out + (cf * ca * s) * (dropped * Element.monomial(space, ma))
    return out


def ferm_dirac_right_protected(
    f: Element, alpha: Element, space: SpaceSignature
) -> Element:
    """Right anticommuting Dirac acting through ``f * alpha`` with alpha held
    constant; generators multiply from the right as usual."""
    out = Element.zero(space)
    for j in range(1, space.n + 1):
        out = out + 2 * (
            _protected_right_ferm_partial(f, alpha, 2 * j - 1, space)
            * weyl_gen(space, 2 * j)
            - _protected_right_ferm_partial(f, alpha, 2 * j, space)
            * weyl_gen(space, 2 * j - 1)
        )
    return out


def fermionic_cauchy_check(
    f: Element, g: Element, alpha: Element, space: SpaceSignature
) -> bool:
    """Three-term Berezin integration-by-parts identity with weight alpha."""
    _require_ferm_only(alpha, "alpha")
    lhs = -berezin(ferm_dirac_right_protected(f, alpha, space) * g, space) + berezin(
        f * alpha * ferm_dirac_left(g, space), space
    )
    rhs = berezin(f * ferm_dirac_right(alpha, space) * g, space)
    return lhs == rhs


def superball_cauchy_check(f: Element, g: Element, space: SpaceSignature) -> bool:
    """Two-sided derivative over the ball against the vector-weighted sphere
    term: ``int_SB [(f D)g + f(D g)] = - int_SS f x g`` checked exactly."""
    _require_sphere(space)
    lhs = superball(dirac_right(f, space) * g + f * dirac_left(g, space), space)
    rhs = pizzetti_supersphere(f * vector_x(space) * g, space)
    return lhs.value == -rhs.value


def dirac_right_protected(f: Element, beta: Element, space: SpaceSignature) -> Element:
    """Right super Dirac through ``f * beta`` with beta protected: minus the
    protected anticommuting half, minus the commuting half."""
    out = -ferm_dirac_right_protected(f, beta, space)
    from .algebra import cliff_gen

    for i in range(1, space.m + 1):
        out = out - (bos_partial(f, i, space) * beta) * cliff_gen(space, i)
    return out


def box_cauchy_check(
    f: Element, g: Element, beta: Element, space: SpaceSignature
) -> bool:
    """Unit-ball two-boundary identity: the ball integral of both-sided Dirac
    terms equals the outward-normal sphere term plus the ball term produced by
    deriving the weight."""
    _require_sphere(space)
    _require_ferm_only(beta, "beta")
    integrand = dirac_right_protected(f, beta, space) * g + f * beta * dirac_left(
        g, space
    )
    lhs = _moment_reduce(integrand, space, lambda a: ball_moment(a, space.m, 1))
    sphere_term = _moment_reduce(
        f * beta * vector_x_bos(space) * g, space, lambda a: sphere_moment(a, space.m)
    )
    ball_term = _moment_reduce(
        f * ferm_dirac_right(beta, space) * g,
        space,
        lambda a: ball_moment(a, space.m, 1),
    )
    return lhs == -sphere_term + ball_term


# -- Gaussian-class radial machinery ------------------------------------------


def scaled_gaussian_sphere_profile(p: Element, space: SpaceSignature) -> dict:
    """Unit supersphere integral of ``x -> p(Rx) exp((Rx)^2)`` as an exact
    polynomial in the scale R times ``exp(-R^2)``.

    Returns ``{power: variable-free Element}`` so that the integral equals
    ``exp(-R^2) * sum_u profile[u] R^u``.
    """
    _require_sphere(space)
    if p.space != space:
        raise SpaceMismatch(f"element over {p.space}, expected {space}")
    profile: dict = {}
    for mono, coeff in p.terms.items():
        d = mono.degree
        base = Element.monomial(space, mono, coeff)
        for j in range(space.n + 1):  # nilpotent envelope, carries R^(2j)
            fj = ferm_sq_power(space, j).scale(Fraction(1, factorial(j))) * base
            if fj.is_zero():
                continue
            for l in range(space.n + 1):  # integration ladder
                g = ferm_sq_power(space, l).scale(Fraction(1, factorial(l))) * fj
                if g.is_zero():
                    continue
                b = berezin(g, space)
                for mo, cc in b.terms.items():
                    sm = sphere_moment(mo.bos, space.m)
                    if sm.is_zero():
                        continue
                    t_half = Fraction(space.m - 2 + sum(mo.bos), 2)
                    word, _ = _generator_word_element(space, mo, cc)
                    for i in range(l + 1):
                        c = comb(l, i) * _falling(t_half, i) * (-1) ** (l - i)
                        if c == 0:
                            continue
                        u = d + 2 * j + 2 * (l - i)
                        slot = profile.setdefault(u, Element.zero(space))
                        profile[u] = slot + Element(space, {word: cc * sm * c})
    return {u: e for u, e in profile.items() if not e.is_zero()}


def radial_profile_integral(profile: dict, space: SpaceSignature) -> Element:
    """``int_0^inf R^(M-1) (sum_u c_u R^u) e^(-R^2) dR`` via exact gamma
    moments; needs positive superdimension for convergence at zero."""
    M = space.superdim
    if M <= 0:
        raise ValueError("radial reassembly needs positive superdimension")
    total = Element.zero(space)
    for u, elem in profile.items():
        total = total + elem.scale(
            gamma_half(Fraction(M + u, 2)) * Fraction(1, 2)
        )
    return total


def radial_decomposition_check(p: Element, space: SpaceSignature) -> bool:
    """Shell-by-shell reassembly of the Gaussian integral of p, checked
    against the direct evaluation."""
    profile = scaled_gaussian_sphere_profile(p, space)
    lhs = radial_profile_integral(profile, space)
    return lhs == gaussian_integral(p, space).value
