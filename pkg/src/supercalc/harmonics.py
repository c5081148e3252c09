"""Spherical harmonic and monogenic bases by exact kernel computation, the
radial-pair polynomials that glue harmonic factors together, Fischer-type
projections, and the finite-dimensional space of supersphere integrations.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from math import comb, factorial

from . import linalg
from .algebra import (
    Element,
    SpaceMismatch,
    SpaceSignature,
    SuperMonomial,
    bos_x_squared,
    ferm_sq_power,
    x_squared,
)
from .integrals import pizzetti_supersphere, sphere_moment
from .operators import dirac_left, laplace
from .scalars import Scalar, recip_gamma_half


class UnsupportedSuperdimension(ValueError):
    """The requested decomposition fails at non-positive even superdimension."""


class DegreeTooLow(ValueError):
    """Functional-table degree bound too small to express the constraints."""


def _is_exceptional(M: int) -> bool:
    return M <= 0 and M % 2 == 0


@dataclass(frozen=True)
class GradedBasis:
    """Linearly independent, degree-homogeneous elements spanning a kernel."""

    degree: int
    space: SpaceSignature
    vectors: tuple
    expected_dimension: int | None = None

    def __len__(self):
        return len(self.vectors)


@lru_cache(maxsize=None)
def variable_monomials(space: SpaceSignature, k: int, sector: str = "full"):
    """Canonically ordered monomial basis of the degree-k variable slice.

    ``sector`` restricts to commuting-only or anticommuting-only monomials.
    """
    if k < 0:
        return ()
    out = []
    ferm_range = 0 if sector == "bosonic" else min(space.ferm_vars, k)
    for nf in range(ferm_range + 1):
        if sector == "fermionic" and nf != k:
            continue
        for word in itertools.combinations(range(1, space.ferm_vars + 1), nf):
            for bos in _exponent_vectors(k - nf, space.m):
                if sector == "fermionic" and any(bos):
                    continue
                out.append(
                    SuperMonomial(bos, word, (), (0,) * (2 * space.n))
                )
    return tuple(sorted(out))


def _exponent_vectors(total: int, slots: int):
    if slots == 1:
        yield (total,)
        return
    for head in range(total + 1):
        for tail in _exponent_vectors(total - head, slots - 1):
            yield (head,) + tail


def _rational_coeff(c: Scalar) -> Fraction:
    return c.rational_value()


def _kernel_basis(space, domain, operator):
    """Exact right-kernel of a rational-matrix operator on a monomial basis."""
    index = {}
    rows = []
    columns = []
    for mono in domain:
        image = operator(Element.monomial(space, mono))
        col = {}
        for im_mono, coeff in image.terms.items():
            slot = index.setdefault(im_mono, len(index))
            col[slot] = _rational_coeff(coeff)
        columns.append(col)
    nrows = len(index)
    matrix = [[Fraction(0)] * len(domain) for _ in range(nrows)]
    for c, col in enumerate(columns):
        for r, val in col.items():
            matrix[r][c] = val
    if nrows == 0:
        null = [
            [Fraction(1) if i == j else Fraction(0) for i in range(len(domain))]
            for j in range(len(domain))
        ]
    else:
        null = linalg.nullspace(matrix)
    vectors = []
    for vec in null:
        terms = {m: c for m, c in zip(domain, vec) if c}
        vectors.append(Element(space, terms))
    return tuple(vectors)


def dim_bos_harmonics(k: int, m: int) -> int:
    """Classical harmonic dimension in m commuting variables."""
    if k < 0:
        return 0
    count_k = comb(k + m - 1, m - 1)
    count_k2 = comb(k + m - 3, m - 1) if k >= 2 else 0
    return count_k - count_k2


def dim_ferm_harmonics(k: int, n: int) -> int:
    """Harmonic dimension in 2n anticommuting variables; empty past degree n."""
    if k < 0 or k > n:
        return 0
    return comb(2 * n, k) - (comb(2 * n, k - 2) if k >= 2 else 0)


def expected_harmonic_dimension(k: int, space: SpaceSignature) -> int:
    """Dimension of the degree-k harmonic space from the product
    decomposition: pure tensor factors plus the glued radial-pair factors."""
    m, n = space.m, space.n
    total = 0
    for i in range(min(n, k) + 1):
        total += dim_bos_harmonics(k - i, m) * dim_ferm_harmonics(i, n)
    for j in range(min(n, k - 1)):
        for l in range(1, min(n - j, (k - j) // 2) + 1):
            total += dim_bos_harmonics(k - 2 * l - j, m) * dim_ferm_harmonics(j, n)
    return total


@lru_cache(maxsize=None)
def harmonic_basis(k: int, space: SpaceSignature) -> GradedBasis:
    """Exact kernel of the Laplacian on the degree-k slice.

    The rank is checked against the closed-form dimension count; a mismatch
    would mean the kernel computation and the decomposition disagree.
    """
    domain = variable_monomials(space, k)
    vectors = _kernel_basis(space, domain, lambda e: laplace(e, space))
    expected = expected_harmonic_dimension(k, space)
    if len(vectors) != expected:
        raise AssertionError(
            f"harmonic dimension mismatch at degree {k} over {space}: "
            f"kernel {len(vectors)}, expected {expected}"
        )
    return GradedBasis(k, space, vectors, expected)


@lru_cache(maxsize=None)
def bosonic_harmonic_basis(k: int, space: SpaceSignature) -> GradedBasis:
    domain = variable_monomials(space, k, "bosonic")
    vectors = _kernel_basis(space, domain, lambda e: laplace(e, space))
    return GradedBasis(k, space, vectors, dim_bos_harmonics(k, space.m))


@lru_cache(maxsize=None)
def fermionic_harmonic_basis(k: int, space: SpaceSignature) -> GradedBasis:
    domain = variable_monomials(space, k, "fermionic")
    vectors = _kernel_basis(space, domain, lambda e: laplace(e, space))
    return GradedBasis(k, space, vectors, dim_ferm_harmonics(k, space.n))


@lru_cache(maxsize=None)
def _generator_words(space: SpaceSignature, weyl_bound: int):
    out = []
    for cliff in itertools.chain.from_iterable(
        itertools.combinations(range(1, space.m + 1), c) for c in range(space.m + 1)
    ):
        for weyl in _bounded_exponents(2 * space.n, weyl_bound):
            out.append((cliff, weyl))
    return tuple(sorted(out))


def _bounded_exponents(slots: int, bound: int):
    if slots == 0:
        yield ()
        return
    for head in range(bound + 1):
        for tail in _bounded_exponents(slots - 1, bound - head):
            yield (head,) + tail


@lru_cache(maxsize=None)
def monogenic_basis(k: int, space: SpaceSignature, weyl_bound: int = 1) -> GradedBasis:
    """Exact kernel of the Dirac operator on degree-k elements whose
    symplectic words have degree at most ``weyl_bound``.

    This is a filtered approximation: the full symplectic side is infinite
    dimensional, so a bound is part of the interface rather than hidden.
    """
    if weyl_bound < 1:
        raise ValueError("weyl_bound must be at least 1")
    domain = []
    for mono in variable_monomials(space, k):
        for cliff, weyl in _generator_words(space, weyl_bound):
            domain.append(mono._replace(cliff=cliff, weyl=weyl))
    vectors = _kernel_basis(space, tuple(sorted(domain)), lambda e: dirac_left(e, space))
    return GradedBasis(k, space, vectors)


def f_kpq(k: int, p: int, q: int, space: SpaceSignature) -> Element:
    """The degree-2k radial-pair polynomial whose product with a commuting
    harmonic of degree p and an anticommuting one of degree q is harmonic.

    Coefficients are exact gamma reciprocals; half powers of pi appear for
    odd m and cancel in the harmonicity check.
    """
    n = space.n
    if not (0 <= q < n):
        raise IndexError(f"q must satisfy 0 <= q < n, got q={q}, n={n}")
    if not (0 <= k < n - q + 1):
        raise IndexError(f"k must satisfy k < n - q + 1, got k={k}")
    out = Element.zero(space)
    for s in range(k + 1):
        coeff = Scalar.from_rational(
            Fraction(comb(k, s) * factorial(n - q - s))
        ) * recip_gamma_half(Fraction(space.m, 2) + p + k - s)
        out = out + (
            bos_x_squared(space) ** (k - s) * ferm_sq_power(space, s)
        ).scale(coeff)
    return out


def fischer_project(f: Element, space: SpaceSignature):
    """Split a degree-homogeneous element into radial-square powers times
    harmonics: ``f = sum_j (x^2)^j h_j`` with each ``h_j`` in the degree
    ``k - 2j`` harmonic space.  Exact; refuses non-positive even
    superdimension, where the decomposition genuinely fails."""
    if f.space != space:
        raise SpaceMismatch("element over the wrong space")
    if _is_exceptional(space.superdim):
        raise UnsupportedSuperdimension(
            f"no radial-harmonic decomposition at superdimension {space.superdim}"
        )
    if f.is_zero():
        return []
    degrees = {m.degree for m in f.terms}
    if len(degrees) != 1:
        raise ValueError("element must be degree-homogeneous")
    if any(m.cliff or any(m.weyl) for m in f.terms):
        raise ValueError("generator-valued elements are not supported here")
    k = degrees.pop()
    domain = variable_monomials(space, k)
    slot = {m: i for i, m in enumerate(domain)}
    columns = []
    tags = []
    for j in range(k // 2 + 1):
        radial = x_squared(space) ** j
        basis = harmonic_basis(k - 2 * j, space)
        for v, vec in enumerate(basis.vectors):
            expanded = radial * vec
            col = [Fraction(0)] * len(domain)
            for mono, c in expanded.terms.items():
                col[slot[mono]] = _rational_coeff(c)
            columns.append(col)
            tags.append((j, v))
    matrix = [[columns[c][r] for c in range(len(columns))] for r in range(len(domain))]
    rhs = [Fraction(0)] * len(domain)
    coeff_scalars = {}
    for mono, c in f.terms.items():
        coeff_scalars[slot[mono]] = c
    rhs = [coeff_scalars.get(r, Scalar.zero()) for r in range(len(domain))]
    sol = linalg.solve(matrix, rhs)
    if sol is None:
        raise AssertionError("radial-harmonic system unexpectedly inconsistent")
    parts = {}
    for (j, v), c in zip(tags, sol):
        if isinstance(c, Fraction):
            if c == 0:
                continue
            c = Scalar.from_rational(c)
        elif c.is_zero():
            continue
        basis = harmonic_basis(k - 2 * j, space)
        comp = basis.vectors[v].scale(c)
        parts[j] = parts[j] + comp if j in parts else comp
    return sorted(parts.items())


def is_multiple_of_radial_square(f: Element, space: SpaceSignature) -> bool:
    """Exact ideal-membership test: does ``x^2`` divide f?

    Homogeneous linear solve per degree slice; equivalent to reducing by the
    principal ideal, but safe in the presence of nilpotent variables.
    """
    if f.is_zero():
        return True
    for k in sorted({m.degree for m in f.terms}):
        fk = f.homogeneous_part(k)
        if k < 2:
            return False
        domain = variable_monomials(space, k)
        slot = {m: i for i, m in enumerate(domain)}
        lower = variable_monomials(space, k - 2)
        columns = []
        for mono in lower:
            expanded = x_squared(space) * Element.monomial(space, mono)
            col = [Fraction(0)] * len(domain)
            for mo, c in expanded.terms.items():
                col[slot[mo]] = _rational_coeff(c)
            columns.append(col)
        matrix = [
            [columns[c][r] for c in range(len(columns))] for r in range(len(domain))
        ]
        rhs = [Scalar.zero()] * len(domain)
        for mono, c in fk.terms.items():
            rhs[slot[mono]] = c
        if linalg.solve(matrix, rhs) is None:
            return False
    return True


@dataclass(frozen=True)
class FunctionalTable:
    """A linear functional on the radial subalgebra, stored by its values on
    the monomial basis ``(bos square)^a (ferm square)^b``."""

    space: SpaceSignature
    max_degree: int
    label: str
    values: dict = field(hash=False)

    def evaluate(self, f: Element) -> Scalar:
        decomp = _radial_subalgebra_coordinates(f, self.space, self.max_degree)
        out = Scalar.zero()
        for key, c in decomp.items():
            out = out + self.values[key] * c
        return out

    def to_json(self):
        return {
            "label": self.label,
            "max_degree": self.max_degree,
            "values": {f"{a},{b}": v.to_json() for (a, b), v in sorted(self.values.items())},
        }


def _radial_pairs(space: SpaceSignature, d: int):
    return [
        (a, b)
        for b in range(space.n + 1)
        for a in range(0, (d - 2 * b) // 2 + 1)
        if 2 * a + 2 * b <= d
    ]


@lru_cache(maxsize=None)
def _radial_basis_element(space: SpaceSignature, a: int, b: int) -> Element:
    return bos_x_squared(space) ** a * ferm_sq_power(space, b)


def _radial_subalgebra_coordinates(f: Element, space, d: int) -> dict:
    pairs = _radial_pairs(space, d)
    monos = sorted({m for p in pairs for m in _radial_basis_element(space, *p).terms})
    slot = {m: i for i, m in enumerate(monos)}
    matrix = [[Fraction(0)] * len(pairs) for _ in range(len(monos))]
    for c, p in enumerate(pairs):
        for mono, coeff in _radial_basis_element(space, *p).terms.items():
            matrix[slot[mono]][c] = _rational_coeff(coeff)
    rhs = [Scalar.zero()] * len(monos)
    for mono, coeff in f.terms.items():
        if mono not in slot:
            raise ValueError("element outside the radial subalgebra (or degree bound)")
        rhs[slot[mono]] = coeff
    sol = linalg.solve(matrix, rhs)
    if sol is None:
        raise ValueError("element outside the radial subalgebra")
    out = {}
    for p, c in zip(pairs, sol):
        if isinstance(c, Fraction):
            if c == 0:
                continue
            c = Scalar.from_rational(c)
        elif c.is_zero():
            continue
        out[p] = c
    return out


@dataclass(frozen=True)
class IntegrationSpaceBasis:
    tables: tuple
    certificate: dict


def integration_space(space: SpaceSignature, d: int) -> IntegrationSpaceBasis:
    """The n+1 supersphere functionals restricted to degree <= d, plus a rank
    certificate that the radial-square constraint pins any such functional by
    its values on the pure anticommuting squares.
    """
    if d < 2 * space.n + 2:
        raise DegreeTooLow(f"need d >= {2 * space.n + 2}")
    pairs = _radial_pairs(space, d)
    index = {p: i for i, p in enumerate(pairs)}
    rows = []
    for (a, b) in pairs:
        if 2 * (a + b) + 2 > d:
            continue
        row = [Fraction(0)] * len(pairs)
        row[index[(a, b)]] = Fraction(1)
        row[index[(a + 1, b)]] += Fraction(1)
        if b + 1 <= space.n:
            row[index[(a, b + 1)]] += Fraction(1)
        rows.append(row)
    null = linalg.nullspace(rows)
    solution_dim = len(null)
    top_cols = [index[(0, b)] for b in range(space.n + 1)]
    restricted = [[vec[c] for c in top_cols] for vec in null]
    determined = linalg.rank(restricted) == solution_dim

    tables = []
    value_vectors = []
    for k in range(space.n + 1):
        values = {}
        for (a, b) in pairs:
            integrand = _radial_basis_element(space, a, b)
            values[(a, b)] = pizzetti_supersphere(
                ferm_sq_power(space, k) * integrand, space
            ).as_scalar()
        tables.append(
            FunctionalTable(space, d, f"phi_{k}", values)
        )
        value_vectors.append([values[p] for p in pairs])

    # each functional satisfies the radial-square constraint system exactly
    for vec in value_vectors:
        for row in rows:
            acc = Scalar.zero()
            for coeff, val in zip(row, vec):
                if coeff:
                    acc = acc + val * coeff
            if not acc.is_zero():
                raise AssertionError("functional violates the defining constraints")
    functional_rank = _scalar_rank(value_vectors)
    certificate = {
        "solution_dimension": solution_dim,
        "expected_dimension": space.n + 1,
        "determined_by_top_values": bool(determined),
        "functional_rank": functional_rank,
    }
    return IntegrationSpaceBasis(tuple(tables), certificate)


def _scalar_rank(vectors) -> int:
    """Rank of single-pi-power Scalar vectors by stripping the common power."""
    rational_rows = []
    for vec in vectors:
        row = []
        for v in vec:
            if v.is_zero():
                row.append(Fraction(0))
            else:
                ((s, (re, im)),) = v.terms.items()
                if im != 0:
                    raise ValueError("unexpected imaginary part")
                row.append(re)
        rational_rows.append(row)
    return linalg.rank(rational_rows)


def bos_sphere_integral(f: Element, space: SpaceSignature) -> Scalar:
    """Unit-sphere integral of a commuting-variables-only element."""
    out = Scalar.zero()
    for mono, c in f.terms.items():
        if mono.ferm or mono.cliff or any(mono.weyl):
            raise ValueError("commuting-variable elements only")
        out = out + c * sphere_moment(mono.bos, space.m)
    return out


def uniqueness_check(space: SpaceSignature) -> dict:
    """Certify that orthogonality of harmonics of different degree pins the
    supersphere integral inside the functional space, including at
    non-positive even superdimension.

    For each k the report carries the normalized squared pairing value C_k of
    the glued harmonic ``f_{k} H`` (nonzero forces the k-th basis coefficient
    to vanish) and the no-radial-factor witness for ``f_k``.
    """
    M = space.superdim
    if _is_exceptional(M):
        t = -M // 2
        mode = "exceptional"
    else:
        t = max(0, (-M + 1) // 2)
        mode = "general"
    report = {
        "space": {"m": space.m, "n": space.n},
        "superdimension": M,
        "mode": mode,
        "t": t,
        "checks": [],
    }
    if space.n == 0:
        report["solution_space_dimension"] = 1
        return report
    basis = bosonic_harmonic_basis(t + 1, space)
    harmonic = basis.vectors[0]
    norm = bos_sphere_integral(harmonic * harmonic, space)
    if norm.is_zero():
        raise AssertionError("degenerate sphere norm for a bosonic harmonic")
    failures = 0
    for k in range(1, space.n + 1):
        fk = f_kpq(k, t + 1, 0, space)
        glued = fk * harmonic
        ck = pizzetti_supersphere(glued * glued, space).as_scalar() / norm
        nonzero = not ck.is_zero()
        no_radial_factor = not is_multiple_of_radial_square(fk, space)
        if not nonzero:
            failures += 1
        report["checks"].append(
            {
                "k": k,
                "pairing_value": ck.to_json(),
                "nonzero": nonzero,
                "no_radial_square_factor": no_radial_factor,
            }
        )
    report["solution_space_dimension"] = 1 + failures
    return report
