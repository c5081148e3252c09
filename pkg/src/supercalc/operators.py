"""Differential operators on elements: Dirac (left/right), Laplace, Euler,
angular momentum, Laplace-Beltrami, and a deterministic Dirac preimage solver.

Sign conventions.  The left anticommuting partial drops the matched variable
with ``(-1)^(t-1)`` where ``t`` is its 1-based position in the word; the right
partial uses ``(-1)^(len-t)``.  Generators are transparent to the partials
(they commute with all variables).  The right Dirac action carries an extra
overall minus sign on top of acting from the other side.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .algebra import (
    Element,
    SpaceMismatch,
    SpaceSignature,
    SuperMonomial,
    cliff_gen,
    vector_x,
    vector_x_bos,
    weyl_gen,
)
from .scalars import Scalar


class NoSolution(ValueError):
    """A requested polynomial preimage does not exist at the degree bound."""


def _check(f: Element, space: SpaceSignature):
    if f.space != space:
        raise SpaceMismatch(f"element over {f.space}, expected {space}")


def ferm_partial(f: Element, j: int, space: SpaceSignature) -> Element:
    """Left partial with respect to anticommuting variable j."""
    _check(f, space)
    if not 1 <= j <= space.ferm_vars:
        raise IndexError(f"anticommuting index {j} out of range")
    terms = {}
    for mono, c in f.terms.items():
        if j not in mono.ferm:
            continue
        t = mono.ferm.index(j)
        new = mono._replace(ferm=mono.ferm[:t] + mono.ferm[t + 1 :])
        add = c if t % 2 == 0 else -c
        acc = terms.get(new)
        acc = add if acc is None else acc + add
        if acc.is_zero():
            terms.pop(new, None)
        else:
            terms[new] = acc
    return Element(space, terms)


def ferm_partial_right(f: Element, j: int, space: SpaceSignature) -> Element:
    """Right partial: the matched variable is dropped from the right."""
    _check(f, space)
    if not 1 <= j <= space.ferm_vars:
        raise IndexError(f"anticommuting index {j} out of range")
    terms = {}
    for mono, c in f.terms.items():
        if j not in mono.ferm:
            continue
        t = mono.ferm.index(j)
        new = mono._replace(ferm=mono.ferm[:t] + mono.ferm[t + 1 :])
        add = c if (len(mono.ferm) - 1 - t) % 2 == 0 else -c
        acc = terms.get(new)
        acc = add if acc is None else acc + add
        if acc.is_zero():
            terms.pop(new, None)
        else:
            terms[new] = acc
    return Element(space, terms)


def bos_partial(f: Element, i: int, space: SpaceSignature) -> Element:
    """Partial with respect to commuting variable i."""
    _check(f, space)
    if not 1 <= i <= space.m:
        raise IndexError(f"commuting index {i} out of range")
    terms = {}
    for mono, c in f.terms.items():
        a = mono.bos[i - 1]
        if a == 0:
            continue
        new = mono._replace(
            bos=mono.bos[: i - 1] + (a - 1,) + mono.bos[i:]
        )
        add = c * a
        acc = terms.get(new)
        acc = add if acc is None else acc + add
        if acc.is_zero():
            terms.pop(new, None)
        else:
            terms[new] = acc
    return Element(space, terms)


def ferm_dirac_left(f: Element, space: SpaceSignature) -> Element:
    """The anticommuting half of the Dirac operator, acting from the left."""
    out = Element.zero(space)
    for j in range(1, space.n + 1):
        out = out + 2 * (
            weyl_gen(space, 2 * j) * ferm_partial(f, 2 * j - 1, space)
            - weyl_gen(space, 2 * j - 1) * ferm_partial(f, 2 * j, space)
        )
    return out


def ferm_dirac_right(f: Element, space: SpaceSignature) -> Element:
    """Right action of the anticommuting Dirac half (no extra sign here)."""
    out = Element.zero(space)
    for j in range(1, space.n + 1):
        out = out + 2 * (
            ferm_partial_right(f, 2 * j - 1, space) * weyl_gen(space, 2 * j)
            - ferm_partial_right(f, 2 * j, space) * weyl_gen(space, 2 * j - 1)
        )
    return out


def bos_dirac_left(f: Element, space: SpaceSignature) -> Element:
    """``- sum_i e_i d/dx_i`` -- the commuting half of the Dirac operator."""
    out = Element.zero(space)
    for i in range(1, space.m + 1):
        out = out - cliff_gen(space, i) * bos_partial(f, i, space)
    return out


def dirac_left(f: Element, space: SpaceSignature) -> Element:
    """The super Dirac operator acting from the left."""
    return ferm_dirac_left(f, space) + bos_dirac_left(f, space)


def dirac_right(f: Element, space: SpaceSignature) -> Element:
    """The right Dirac action: minus the right anticommuting half, minus the
    commuting half with generators multiplied from the right."""
    out = -ferm_dirac_right(f, space)
    for i in range(1, space.m + 1):
        out = out - bos_partial(f, i, space) * cliff_gen(space, i)
    return out


def laplace(f: Element, space: SpaceSignature) -> Element:
    """``4 sum_j d_{q(2j-1)} d_{q(2j)} - sum_i d_{x_i}^2``; the Dirac square."""
    _check(f, space)
    out = Element.zero(space)
    for j in range(1, space.n + 1):
        out = out + 4 * ferm_partial(
            ferm_partial(f, 2 * j, space), 2 * j - 1, space
        )
    for i in range(1, space.m + 1):
        out = out - bos_partial(bos_partial(f, i, space), i, space)
    return out


def ferm_laplace(f: Element, space: SpaceSignature) -> Element:
    """The anticommuting part of the Laplacian alone."""
    out = Element.zero(space)
    for j in range(1, space.n + 1):
        out = out + 4 * ferm_partial(
            ferm_partial(f, 2 * j, space), 2 * j - 1, space
        )
    return out


def bos_laplace(f: Element, space: SpaceSignature) -> Element:
    out = Element.zero(space)
    for i in range(1, space.m + 1):
        out = out - bos_partial(bos_partial(f, i, space), i, space)
    return out


def euler(f: Element, space: SpaceSignature) -> Element:
    """Degree operator: each monomial times its total variable degree."""
    _check(f, space)
    return Element(
        space, {m: c * m.degree for m, c in f.terms.items()}
    )


def bos_euler(f: Element, space: SpaceSignature) -> Element:
    _check(f, space)
    return Element(
        space, {m: c * sum(m.bos) for m, c in f.terms.items()}
    )


def gamma_op(f: Element, space: SpaceSignature) -> Element:
    """Angular operator: x (Dirac f) minus the degree operator.

    Computed literally from its defining combination; it is not the sum of
    the commuting-only and anticommuting-only angular operators.
    """
    return vector_x(space) * dirac_left(f, space) - euler(f, space)


def laplace_beltrami(f: Element, space: SpaceSignature) -> Element:
    """Gamma(M - 2 - Gamma) applied to f."""
    g = gamma_op(f, space)
    return (space.superdim - 2) * g - gamma_op(g, space)


_OPERATORS = {
    "dirac": dirac_left,
    "dirac-right": dirac_right,
    "laplace": laplace,
    "euler": euler,
    "gamma": gamma_op,
    "lb": laplace_beltrami,
}


def apply(op: str, f: Element, space: SpaceSignature) -> Element:
    """Apply a named operator; names match the CLI surface."""
    try:
        fn = _OPERATORS[op]
    except KeyError:
        raise ValueError(f"unknown operator {op!r}; choose from {sorted(_OPERATORS)}")
    return fn(f, space)


# -- Dirac preimage ----------------------------------------------------------


@lru_cache(maxsize=None)
def _bos_vector_power(space: SpaceSignature, k: int) -> Element:
    return vector_x_bos(space) ** k


def _bos_preimage(v: Element, space: SpaceSignature) -> Element:
    """Solve ``-sum_i e_i d/dx_i (u) = v`` for polynomial v, exactly.

    Works per commuting-degree slice k with the two-term recursion built on
    D(x u) = (2 E_b + m) u - x D(u): the returned slice is
    ``sum_j c_j x^(j+1) D^j v`` and every division is by a positive integer,
    so the construction never degenerates.
    """
    out = Element.zero(space)
    m = space.m
    degrees = {sum(mono.bos) for mono in v.terms}
    for k in sorted(degrees):
        vk = Element(
            space, {mo: c for mo, c in v.terms.items() if sum(mo.bos) == k}
        )
        u_j = vk
        c_prev = None
        for j in range(0, k + 1):
            if u_j.is_zero():
                break
            if j == 0:
                c_j = Fraction(1, 2 * k + m)
            else:
                alpha = j + 1 if j % 2 else 2 * k - j + m
                beta_prev = 1 if (j - 1) % 2 else -1
                c_j = Fraction(-beta_prev, 1) * c_prev / alpha
            out = out + c_j * (_bos_vector_power(space, j + 1) * u_j)
            u_j = bos_dirac_left(u_j, space)
            c_prev = c_j
    return out


def dirac_preimage(h: Element, space: SpaceSignature, max_degree: int) -> Element:
    """Return g with ``dirac_left(g) == h`` exactly, deterministically.

    Strategy: split h by anticommuting-variable degree and walk downward.
    The top slice only needs a commuting-side preimage; each lower slice
    absorbs the anticommuting Dirac image of the slice above.  The result
    satisfies deg(g) <= deg(h) + 1 and is unique given this construction
    (the operator has a large kernel, so some selection rule is required).
    """
    _check(h, space)
    if h.degree() > max_degree:
        raise ValueError(f"h has degree {h.degree()} > max_degree {max_degree}")
    if h.is_zero():
        return Element.zero(space)
    top = max(len(mono.ferm) for mono in h.terms)
    g = Element.zero(space)
    g_above = Element.zero(space)
    for d in range(top, -1, -1):
        r_d = h.ferm_part(d) - ferm_dirac_left(g_above, space).ferm_part(d)
        g_d = _bos_preimage(r_d, space)
        g = g + g_d
        g_above = g_d
    return g
