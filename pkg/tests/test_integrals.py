import itertools
import random
from fractions import Fraction
from math import factorial

import pytest

from supercalc.algebra import (
    Element,
    SpaceSignature,
    SuperMonomial,
    bos_var,
    ferm_sq_power,
    ferm_var,
    parse,
    vector_x,
    x_squared,
)
from supercalc.integrals import (
    BadAlpha,
    IntegralValue,
    UnsupportedDimension,
    ball_moment,
    berezin,
    box_cauchy_check,
    fermionic_cauchy_check,
    gaussian_integral,
    phi_k,
    pizzetti_supersphere,
    radial_decomposition_check,
    sphere_moment,
    superball,
    superball_cauchy_check,
    supersphere_closed,
    supersphere_radius,
)
from supercalc.linalg import rank
from supercalc.operators import euler, ferm_laplace, gamma_op, laplace, laplace_beltrami
from supercalc.scalars import Scalar, gamma_half
from tests.test_algebra import rand_element
from tests.test_operators import rand_homogeneous


def all_monomials(space, max_degree):
    """Every variable monomial of total degree <= max_degree."""
    bos_choices = []

    def bos_rec(prefix, remaining, slots):
        if slots == 0:
            bos_choices.append(tuple(prefix))
            return
        for a in range(remaining + 1):
            bos_rec(prefix + [a], remaining - a, slots - 1)

    for fw in itertools.chain.from_iterable(
        itertools.combinations(range(1, space.ferm_vars + 1), k)
        for k in range(min(space.ferm_vars, max_degree) + 1)
    ):
        bos_choices.clear()
        bos_rec([], max_degree - len(fw), space.m)
        for bos in bos_choices:
            yield SuperMonomial(bos, fw, (), (0,) * (2 * space.n))


def test_berezin_top_forms():
    s1 = SpaceSignature(2, 1)
    assert berezin(parse("q1*q2", s1), s1) == Element.from_scalar(
        s1, Scalar.pi_half_power(-2)
    )
    s2 = SpaceSignature(2, 2)
    assert berezin(parse("q1*q2*q3*q4", s2), s2) == Element.from_scalar(
        s2, Scalar.pi_half_power(-4)
    )
    assert berezin(parse("q1*q3", s2), s2).is_zero()
    # n = 0 has no anticommuting directions: the integral is the identity
    s0 = SpaceSignature(2, 0)
    assert berezin(parse("x1^2", s0), s0) == parse("x1^2", s0)


def test_berezin_as_laplacian_power():
    # pi^-n (-1)^n / (4^n n!) * (ferm Laplacian)^n reproduces the extraction
    for space in [SpaceSignature(2, 1), SpaceSignature(2, 2)]:
        rng = random.Random(f"ber:{space.n}")
        n = space.n
        pref = Scalar.pi_half_power(-2 * n) * Fraction(
            (-1) ** n, 4 ** n * factorial(n)
        )
        for _ in range(15):
            f = rand_element(space, rng, max_degree=2 * n)
            g = f
            for _ in range(n):
                g = ferm_laplace(g, space)
            assert berezin(f, space) == g.scale(pref)


def test_berezin_ladder_formula():
    # weighted square powers against a fixed top complement
    space = SpaceSignature(2, 2)
    r2 = parse("q1*q2", space)
    lhs = berezin(ferm_sq_power(space, 1) * r2, space)
    expected = ferm_laplace(r2, space).scale(
        Scalar.pi_half_power(-4) * Fraction(factorial(1) * (-1), 4 * factorial(1))
    )
    assert lhs == expected


def test_berezin_nondegenerate_pairing():
    # the Gram matrix of the Berezin pairing on the 2^(2n) word basis has full rank
    for space in [SpaceSignature(2, 1), SpaceSignature(2, 2)]:
        words = list(
            itertools.chain.from_iterable(
                itertools.combinations(range(1, 2 * space.n + 1), k)
                for k in range(2 * space.n + 1)
            )
        )
        basis = [
            Element.monomial(
                space, SuperMonomial((0,) * space.m, w, (), (0,) * (2 * space.n))
            )
            for w in words
        ]
        gram = []
        for u in basis:
            row = []
            for v in basis:
                val = berezin(u * v, space)
                row.append(val.coefficient(next(iter(val.terms))).terms[-2 * space.n][0] if not val.is_zero() else Fraction(0))
            gram.append(row)
        assert rank(gram) == len(words)


def test_sphere_moments():
    assert sphere_moment((0, 0, 0), 3) == Scalar.pi_half_power(2, 4)
    assert sphere_moment((2, 0, 0), 3) == Scalar.pi_half_power(2, Fraction(4, 3))
    assert sphere_moment((1, 0), 2) == Scalar.zero()
    with pytest.raises(UnsupportedDimension):
        sphere_moment((2,), 1)


def test_ball_moments():
    assert ball_moment((0, 0), 2, 1) == Scalar.pi_half_power(2)
    assert ball_moment((2, 0, 0), 3, 1) == Scalar.pi_half_power(2, Fraction(4, 15))
    assert ball_moment((1, 1), 2, 1) == Scalar.zero()
    assert ball_moment((0, 0, 0), 3, 2) == Scalar.pi_half_power(2, Fraction(32, 3))


def test_supersphere_volume_values():
    # total supersphere measure: 2 pi^(M/2) / Gamma(M/2)
    s31 = SpaceSignature(3, 1)
    assert pizzetti_supersphere(Element.one(s31), s31).as_scalar() == Scalar.from_rational(2)
    s30 = SpaceSignature(3, 0)
    assert pizzetti_supersphere(Element.one(s30), s30).as_scalar() == Scalar.pi_half_power(2, 4)
    s22 = SpaceSignature(2, 2)
    assert pizzetti_supersphere(Element.one(s22), s22).as_scalar() == Scalar.zero()


def test_supersphere_of_ferm_square_word():
    s31 = SpaceSignature(3, 1)
    assert pizzetti_supersphere(parse("q1*q2", s31), s31).as_scalar() == Scalar.from_rational(4)
    assert supersphere_closed(parse("q1*q2", s31), s31, 1).as_scalar() == Scalar.from_rational(4)


def test_closed_form_matches_series_small_sweep():
    for space in [SpaceSignature(2, 1), SpaceSignature(2, 2), SpaceSignature(3, 1)]:
        for mono in all_monomials(space, 4):
            f = Element.monomial(space, mono)
            a = pizzetti_supersphere(f, space)
            b = supersphere_closed(f, space, 1)
            assert a == b, (space, mono)


def test_classical_sphere_value_through_closed_form():
    s30 = SpaceSignature(3, 0)
    f = parse("x1^2", s30)
    assert supersphere_closed(f, s30, 1).as_scalar() == Scalar.pi_half_power(2, Fraction(4, 3))


def test_supersphere_swallows_radial_square():
    for space in [SpaceSignature(3, 1), SpaceSignature(2, 2)]:
        rng = random.Random(f"swallow:{space.m}{space.n}")
        for _ in range(20):
            f = rand_element(space, rng, max_degree=3)
            lhs = pizzetti_supersphere(x_squared(space) * f, space)
            rhs = pizzetti_supersphere(f, space)
            assert lhs.value == -rhs.value


def test_superball_values():
    s20 = SpaceSignature(2, 0)
    assert superball(Element.one(s20), s20).as_scalar() == Scalar.pi_half_power(2)
    s31 = SpaceSignature(3, 1)
    assert superball(Element.one(s31), s31).as_scalar() == Scalar.from_rational(2)


def test_superball_dual_forms_on_monomials():
    for space in [SpaceSignature(2, 1), SpaceSignature(2, 2), SpaceSignature(3, 1)]:
        for mono in all_monomials(space, 4):
            superball(Element.monomial(space, mono), space)  # raises on mismatch


def test_supersphere_radius_scaling_law():
    for space in [SpaceSignature(2, 1), SpaceSignature(3, 1), SpaceSignature(3, 2)]:
        rng = random.Random(f"rad:{space.m}{space.n}")
        M = space.superdim
        for radius in (Fraction(2), Fraction(1, 2), Fraction(3)):
            for _ in range(10):
                f = rand_element(space, rng, max_degree=3)
                lhs = supersphere_radius(f, space, radius)
                scaled = f.scale_variables(radius)
                rhs = pizzetti_supersphere(scaled, space).value.scale(
                    Fraction(radius ** (M - 1))
                )
                assert lhs.value == rhs


def test_supersphere_radius_classical():
    s30 = SpaceSignature(3, 0)
    assert supersphere_radius(Element.one(s30), s30, 2).as_scalar() == Scalar.pi_half_power(2, 16)
    s31 = SpaceSignature(3, 1)
    assert supersphere_radius(Element.one(s31), s31, 2).as_scalar() == Scalar.from_rational(2)


def test_gaussian_integral_of_unit():
    s31 = SpaceSignature(3, 1)
    assert gaussian_integral(Element.one(s31), s31).as_scalar() == Scalar.pi_half_power(1)
    # matches the sphere route: (1/2) Gamma(M/2) * supersphere(1)
    rhs = Scalar.from_rational(Fraction(1, 2)) * gamma_half(Fraction(1, 2)) * Scalar.from_rational(2)
    assert gaussian_integral(Element.one(s31), s31).as_scalar() == rhs


def test_gaussian_integral_odd_degree_vanishes():
    s21 = SpaceSignature(2, 1)
    assert gaussian_integral(parse("x1", s21), s21).value.is_zero()
    assert gaussian_integral(parse("x2*q1*q2", s21), s21).value.is_zero()


def test_gaussian_matches_sphere_route_and_merged_form():
    for space in [SpaceSignature(2, 1), SpaceSignature(3, 1), SpaceSignature(2, 2)]:
        rng = random.Random(f"rmnss:{space.m}{space.n}")
        M = space.superdim
        for k in range(0, 7, 2):
            f = rand_homogeneous(space, rng, k)
            got = gaussian_integral(f, space)
            # merged pole-free form
            g = f
            for _ in range(k // 2):
                g = laplace(g, space)
            merged = g.value_at_origin().scale(
                Scalar.pi_half_power(M) * Fraction((-1) ** (k // 2), 2 ** k * factorial(k // 2))
            )
            assert got.value == merged
            if not (Fraction(k + M, 2).denominator == 1 and (k + M) <= 0):
                rhs = pizzetti_supersphere(f, space).value.scale(
                    gamma_half(Fraction(k + M, 2)) * Fraction(1, 2)
                )
                assert got.value == rhs


def test_phi_functionals():
    s31 = SpaceSignature(3, 1)
    rng = random.Random("phi")
    f = rand_element(s31, rng, max_degree=3)
    assert phi_k(f, 0, s31) == pizzetti_supersphere(f, s31)
    assert phi_k(Element.one(s31), 1, s31).as_scalar() == Scalar.from_rational(4)
    assert phi_k(parse("q1*q2", s31), 1, s31).value.is_zero()
    with pytest.raises(IndexError):
        phi_k(f, 2, s31)


def test_green_identity_on_ball():
    # degree flux over the sphere against the Laplacian commutator over the
    # ball; note the ball side is (Lap f) g - f (Lap g) in this sign
    # convention (the n = 0 case degenerates to classical Green's identity
    # with Lap = -sum of second partials)
    for space in [SpaceSignature(2, 1), SpaceSignature(3, 1)]:
        rng = random.Random(f"green:{space.m}{space.n}")
        for _ in range(15):
            f = rand_element(space, rng, max_degree=3, weyl_bound=0)
            g = rand_element(space, rng, max_degree=3, weyl_bound=0)
            f = Element(space, {m: c for m, c in f.terms.items() if not m.cliff})
            g = Element(space, {m: c for m, c in g.terms.items() if not m.cliff})
            lhs = pizzetti_supersphere(
                f * euler(g, space) - euler(f, space) * g, space
            )
            rhs = superball(laplace(f, space) * g - f * laplace(g, space), space)
            assert lhs.value == rhs.value


def test_green_identity_classical_case():
    space = SpaceSignature(3, 0)
    f = Element.one(space)
    g = x_squared(space)
    lhs = pizzetti_supersphere(f * euler(g, space) - euler(f, space) * g, space)
    rhs = superball(laplace(f, space) * g - f * laplace(g, space), space)
    assert lhs.value == rhs.value
    assert lhs.as_scalar() == Scalar.pi_half_power(2, -8)


def test_angular_operators_integrate_to_zero():
    for space in [SpaceSignature(2, 1), SpaceSignature(3, 1), SpaceSignature(2, 2)]:
        rng = random.Random(f"ann:{space.m}{space.n}")
        for _ in range(15):
            f = rand_element(space, rng, max_degree=3, weyl_bound=0)
            f = Element(space, {m: c for m, c in f.terms.items() if not m.cliff})
            assert pizzetti_supersphere(gamma_op(f, space), space).value.is_zero()
            assert pizzetti_supersphere(laplace_beltrami(f, space), space).value.is_zero()


def rand_ferm_weyl(space, rng, max_ferm=None, weyl_bound=2):
    """Random element of the anticommuting-variable x symplectic-word sector."""
    out = Element.zero(space)
    fv = space.ferm_vars if max_ferm is None else max_ferm
    for _ in range(rng.randint(1, 5)):
        word = tuple(
            sorted(rng.sample(range(1, fv + 1), rng.randint(0, fv)))
        )
        weyl = [0] * (2 * space.n)
        for _ in range(rng.randint(0, weyl_bound)):
            if space.n:
                weyl[rng.randrange(2 * space.n)] += 1
        coeff = Fraction(rng.choice([c for c in range(-9, 10) if c]), rng.randint(1, 4))
        mono = SuperMonomial((0,) * space.m, word, (), tuple(weyl))
        out = out + Element.monomial(space, mono, coeff)
    return out


def rand_ferm_only(space, rng):
    out = Element.zero(space)
    for _ in range(rng.randint(1, 4)):
        word = tuple(
            sorted(
                rng.sample(
                    range(1, 2 * space.n + 1), rng.randint(0, 2 * space.n)
                )
            )
        )
        coeff = Fraction(rng.choice([c for c in range(-9, 10) if c]), rng.randint(1, 4))
        mono = SuperMonomial((0,) * space.m, word, (), (0,) * (2 * space.n))
        out = out + Element.monomial(space, mono, coeff)
    return out


def test_fermionic_cauchy_identity():
    for space in [SpaceSignature(2, 1), SpaceSignature(2, 2)]:
        rng = random.Random(f"fcauchy:{space.n}")
        for _ in range(100):
            f = rand_ferm_weyl(space, rng)
            g = rand_ferm_weyl(space, rng)
            alpha = rand_ferm_only(space, rng)
            assert fermionic_cauchy_check(f, g, alpha, space)


def test_fermionic_cauchy_specific():
    space = SpaceSignature(2, 2)
    f = parse("q1", space)
    g = parse("q2*q3", space)
    alpha = parse("q4", space)
    assert fermionic_cauchy_check(f, g, alpha, space)
    with pytest.raises(BadAlpha):
        fermionic_cauchy_check(f, g, parse("x1", space), space)


def test_superball_cauchy_identity():
    for space in [SpaceSignature(2, 1), SpaceSignature(3, 1)]:
        rng = random.Random(f"bcauchy:{space.m}")
        assert superball_cauchy_check(Element.one(space), Element.one(space), space)
        assert superball_cauchy_check(
            Element.one(space), vector_x(space), space
        )
        for _ in range(30):
            f = rand_element(space, rng, max_degree=3, weyl_bound=2)
            g = rand_element(space, rng, max_degree=3, weyl_bound=2)
            assert superball_cauchy_check(f, g, space)


def test_box_cauchy_identity():
    for space in [SpaceSignature(2, 1), SpaceSignature(2, 2), SpaceSignature(3, 1)]:
        rng = random.Random(f"box:{space.m}{space.n}")
        for _ in range(30):
            f = rand_element(space, rng, max_degree=3)
            g = rand_element(space, rng, max_degree=3)
            beta = rand_ferm_only(space, rng)
            assert box_cauchy_check(f, g, beta, space)
    space = SpaceSignature(2, 1)
    assert box_cauchy_check(
        Element.one(space), Element.one(space), parse("q1*q2", space), space
    )
    assert box_cauchy_check(
        Element.one(space), Element.one(space), Element.zero(space), space
    )


def test_box_cauchy_reduces_to_classical():
    space = SpaceSignature(2, 0)
    rng = random.Random("boxclassical")
    for _ in range(20):
        f = rand_element(space, rng, max_degree=3)
        g = rand_element(space, rng, max_degree=3)
        assert box_cauchy_check(f, g, Element.one(space), space)


def test_radial_decomposition_of_gaussian():
    for space in [SpaceSignature(3, 1), SpaceSignature(4, 1)]:
        rng = random.Random(f"raddec:{space.m}")
        assert radial_decomposition_check(Element.one(space), space)
        for _ in range(10):
            p = rand_element(space, rng, max_degree=4, weyl_bound=0)
            assert radial_decomposition_check(p, space)


def test_m_equals_one_refusals():
    space = SpaceSignature(1, 0)
    with pytest.raises(UnsupportedDimension):
        supersphere_closed(Element.one(space), space, 1)
    with pytest.raises(UnsupportedDimension):
        superball(Element.one(space), space)
