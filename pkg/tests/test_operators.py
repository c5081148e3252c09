import random
from fractions import Fraction

import pytest

from supercalc.algebra import (
    Element,
    SpaceSignature,
    bos_var,
    ferm_var,
    parse,
    vector_x,
    x_squared,
)
from supercalc.operators import (
    NoSolution,
    apply,
    bos_dirac_left,
    bos_partial,
    dirac_left,
    dirac_preimage,
    dirac_right,
    euler,
    ferm_partial,
    gamma_op,
    laplace,
    laplace_beltrami,
)
from tests.test_algebra import rand_element

GRID = [SpaceSignature(m, n) for m in range(1, 5) for n in range(0, 4)]


def rand_homogeneous(space, rng, k, with_generators=False):
    terms = None
    out = Element.zero(space)
    for _ in range(rng.randint(1, 6)):
        nf = rng.randint(0, min(k, space.ferm_vars))
        word = sorted(rng.sample(range(1, space.ferm_vars + 1), nf))
        mono = Element.one(space)
        for j in word:
            mono = mono * ferm_var(space, j)
        for _ in range(k - nf):
            mono = mono * bos_var(space, rng.randint(1, space.m))
        if with_generators:
            from supercalc.algebra import cliff_gen, weyl_gen

            for i in sorted(rng.sample(range(1, space.m + 1), rng.randint(0, 1))):
                mono = mono * cliff_gen(space, i)
            if space.n and rng.random() < 0.5:
                mono = mono * weyl_gen(space, rng.randint(1, 2 * space.n))
        coeff = Fraction(rng.choice([c for c in range(-9, 10) if c]), rng.randint(1, 4))
        out = out + coeff * mono
    return out


def test_ferm_partial_sign_convention():
    space = SpaceSignature(2, 2)
    f = parse("q1*q2*q3", space)
    assert ferm_partial(f, 1, space) == parse("q2*q3", space)
    assert ferm_partial(f, 2, space) == -parse("q1*q3", space)
    assert ferm_partial(f, 3, space) == parse("q1*q2", space)
    assert ferm_partial(f, 4, space).is_zero()


def test_dirac_on_vector_variable_gives_superdimension():
    for space in GRID:
        got = dirac_left(vector_x(space), space)
        assert got == Element.from_scalar(space, space.superdim)


def test_right_dirac_on_vector_variable():
    for space in GRID:
        got = dirac_right(vector_x(space), space)
        assert got == Element.from_scalar(space, space.superdim)


def test_laplace_of_x_squared():
    # degree-2 radial square maps to twice the superdimension
    for space in GRID:
        got = laplace(x_squared(space), space)
        assert got == Element.from_scalar(space, 2 * space.superdim)
    assert laplace(x_squared(SpaceSignature(2, 1)), SpaceSignature(2, 1)).is_zero()


def test_euler_counts_degree():
    space = SpaceSignature(2, 1)
    f = parse("x1*q1", space)
    assert euler(f, space) == 2 * f
    mixed = parse("x1*q1 + x2", space)
    assert euler(mixed, space) == 2 * parse("x1*q1", space) + parse("x2", space)


def test_dirac_square_is_laplace():
    for space in GRID:
        rng = random.Random(f"dirsq:{space.m}:{space.n}")
        for _ in range(25):
            f = rand_element(space, rng, max_degree=4)
            assert dirac_left(dirac_left(f, space), space) == laplace(f, space)


def test_euler_eigenvalue_on_homogeneous():
    for space in [SpaceSignature(2, 1), SpaceSignature(3, 2)]:
        rng = random.Random(f"euler:{space.m}:{space.n}")
        for k in range(0, 5):
            f = rand_homogeneous(space, rng, k)
            assert euler(f, space) == k * f


def test_radial_square_shuffle_identity():
    # x^2 Laplace = LB + E(M - 2 + E), term by term on random elements
    for space in [SpaceSignature(2, 1), SpaceSignature(3, 1), SpaceSignature(2, 2)]:
        rng = random.Random(f"lb:{space.m}:{space.n}")
        M = space.superdim
        for _ in range(15):
            f = rand_element(space, rng, max_degree=3)
            lhs = x_squared(space) * laplace(f, space)
            ef = euler(f, space)
            rhs = laplace_beltrami(f, space) + (M - 2) * ef + euler(ef, space)
            assert lhs == rhs


def test_laplace_product_rule_for_radial_powers():
    # Laplace(x^{2t} R_k) = 2t(2k + M + 2t - 2) x^{2t-2} R_k + x^{2t} Laplace R_k
    for space in [SpaceSignature(2, 1), SpaceSignature(3, 2), SpaceSignature(4, 1)]:
        rng = random.Random(f"rlap:{space.m}:{space.n}")
        M = space.superdim
        sq = x_squared(space)
        for k in range(0, 5):
            for t in range(1, 4):
                rk = rand_homogeneous(space, rng, k)
                lhs = laplace((sq ** t) * rk, space)
                rhs = (
                    2 * t * (2 * k + M + 2 * t - 2) * ((sq ** (t - 1)) * rk)
                    + (sq ** t) * laplace(rk, space)
                )
                assert lhs == rhs


def test_gamma_is_not_plain_degree():
    space = SpaceSignature(2, 1)
    f = parse("x1", space)
    g = gamma_op(f, space)
    # angular part of a coordinate function is generator-valued, not scalar
    assert not g.is_zero()
    assert not g.is_scalar_valued()


def test_apply_dispatch_names():
    space = SpaceSignature(2, 1)
    f = parse("x1^2 + q1*q2", space)
    assert apply("laplace", f, space) == laplace(f, space)
    assert apply("dirac", f, space) == dirac_left(f, space)
    assert apply("dirac-right", f, space) == dirac_right(f, space)
    assert apply("euler", f, space) == euler(f, space)
    assert apply("gamma", f, space) == gamma_op(f, space)
    assert apply("lb", f, space) == laplace_beltrami(f, space)
    with pytest.raises(ValueError):
        apply("curl", f, space)


def test_bos_preimage_identity_block():
    space = SpaceSignature(3, 1)
    rng = random.Random("bospre")
    for _ in range(20):
        v = rand_element(space, rng, max_degree=3)
        from supercalc.operators import _bos_preimage

        u = _bos_preimage(v, space)
        assert bos_dirac_left(u, space) == v


def test_dirac_preimage_round_trip_scalars():
    space = SpaceSignature(3, 1)
    h = Element.from_scalar(space, space.superdim)
    g = dirac_preimage(h, space, max_degree=0)
    assert dirac_left(g, space) == h

    h2 = x_squared(space)
    g2 = dirac_preimage(h2, space, max_degree=2)
    assert dirac_left(g2, space) == h2

    assert dirac_preimage(Element.zero(space), space, 3).is_zero()


def test_dirac_preimage_round_trip_random():
    for space in GRID:
        rng = random.Random(f"pre:{space.m}:{space.n}")
        for _ in range(10):
            h = rand_homogeneous(space, rng, rng.randint(0, 3), with_generators=True)
            g = dirac_preimage(h, space, max_degree=3)
            assert dirac_left(g, space) == h
            assert g.degree() <= h.degree() + 1


def test_dirac_preimage_degree_guard():
    space = SpaceSignature(2, 1)
    with pytest.raises(ValueError):
        dirac_preimage(x_squared(space), space, max_degree=1)
