"""Sparse multivariate complex polynomials and their homogeneous sections.

Everything here is immutable and pure: polynomials are term maps keyed by
exponent tuples, homogenization lifts to one extra variable, and affine
charts restrict back down.  The section norm is the Fubini-Study norm of a
degree-d section evaluated at an affine point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import product as _iproduct
from typing import Iterable, Mapping, Sequence

Multidegree = tuple[int, ...]

__all__ = [
    "Multidegree",
    "ComplexPolynomial",
    "HomogeneousSection",
    "AffineChart",
    "eval_poly",
    "eval_section",
    "section_norm",
    "section_norm_homogeneous",
    "homogenize",
    "chart_restrict",
    "affine_precompose",
    "linear_precompose",
    "poly_to_json",
    "poly_from_json",
]


def _clean_terms(n_vars: int, terms: Mapping[Multidegree, complex]) -> dict[Multidegree, complex]:
    out: dict[Multidegree, complex] = {}
    for exp, coeff in terms.items():
        exp = tuple(int(e) for e in exp)
        if len(exp) != n_vars:
            raise ValueError(f"exponent {exp} has {len(exp)} entries, expected {n_vars}")
        if any(e < 0 for e in exp):
            raise ValueError(f"negative exponent in {exp}")
        c = complex(coeff)
        if c != 0:
            out[exp] = out.get(exp, 0) + c
            if out[exp] == 0:
                del out[exp]
    return out


@dataclass(frozen=True)
class ComplexPolynomial:
    """Polynomial in C[z_1..z_n], sparse term map, exact-zero pruning only."""

    n_vars: int
    terms: dict[Multidegree, complex]

    def __post_init__(self):
        if self.n_vars < 1:
            raise ValueError("n_vars must be positive")
        object.__setattr__(self, "terms", _clean_terms(self.n_vars, self.terms))

    @property
    def degree(self) -> int:
        # the zero polynomial has degree 0 by convention
        return max((sum(e) for e in self.terms), default=0)

    def sorted_terms(self) -> list[tuple[Multidegree, complex]]:
        return sorted(self.terms.items())

    @staticmethod
    def constant(n_vars: int, c: complex) -> "ComplexPolynomial":
        return ComplexPolynomial(n_vars, {(0,) * n_vars: complex(c)})

    @staticmethod
    def coordinate(n_vars: int, i: int) -> "ComplexPolynomial":
        exp = [0] * n_vars
        exp[i] = 1
        return ComplexPolynomial(n_vars, {tuple(exp): 1.0})

    def __add__(self, other: "ComplexPolynomial") -> "ComplexPolynomial":
        if self.n_vars != other.n_vars:
            raise ValueError("variable-count mismatch")
        terms = dict(self.terms)
        for e, c in other.terms.items():
            terms[e] = terms.get(e, 0) + c
        return ComplexPolynomial(self.n_vars, terms)

    def __mul__(self, other):
        if isinstance(other, (int, float, complex)):
            return ComplexPolynomial(self.n_vars, {e: c * other for e, c in self.terms.items()})
        if self.n_vars != other.n_vars:
            raise ValueError("variable-count mismatch")
        terms: dict[Multidegree, complex] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                terms[e] = terms.get(e, 0) + c1 * c2
        return ComplexPolynomial(self.n_vars, terms)

    __rmul__ = __mul__

    def __sub__(self, other: "ComplexPolynomial") -> "ComplexPolynomial":
        return self + (other * (-1))


@dataclass(frozen=True)
class HomogeneousSection:
    """Homogeneous polynomial of fixed degree in n+1 variables."""

    n_plus_1_vars: int
    terms: dict[Multidegree, complex]
    degree: int

    def __post_init__(self):
        object.__setattr__(self, "terms", _clean_terms(self.n_plus_1_vars, self.terms))
        for e in self.terms:
            if sum(e) != self.degree:
                raise ValueError(f"term {e} is not homogeneous of degree {self.degree}")

    def sorted_terms(self) -> list[tuple[Multidegree, complex]]:
        return sorted(self.terms.items())


@dataclass(frozen=True)
class AffineChart:
    """Which homogeneous coordinate is set to 1, and how the rest are ordered.

    variable_order[i] gives, for the i-th affine variable, the index into the
    list of remaining homogeneous coordinates (original order, dehomogenized
    one removed).
    """

    dehomogenize_index: int
    variable_order: tuple[int, ...]

    def __post_init__(self):
        n = len(self.variable_order)
        if not (0 <= self.dehomogenize_index <= n):
            raise ValueError("dehomogenize_index out of range")
        if sorted(self.variable_order) != list(range(n)):
            raise ValueError("variable_order is not a permutation")


def eval_poly(P: ComplexPolynomial, z: Sequence[complex]) -> complex:
    """Evaluate P at z in C^n; term order fixed (sorted) for determinism."""
    if len(z) != P.n_vars:
        raise ValueError(f"point has dimension {len(z)}, polynomial has {P.n_vars} variables")
    total = 0j
    for exp, coeff in P.sorted_terms():
        m = coeff
        for zi, e in zip(z, exp):
            if e:
                m *= complex(zi) ** e
        total += m
    return total


def eval_section(Q: HomogeneousSection, x: Sequence[complex]) -> complex:
    if len(x) != Q.n_plus_1_vars:
        raise ValueError("dimension mismatch")
    total = 0j
    for exp, coeff in Q.sorted_terms():
        m = coeff
        for xi, e in zip(x, exp):
            if e:
                m *= complex(xi) ** e
        total += m
    return total


def section_norm(P: ComplexPolynomial, z: Sequence[complex], d: int) -> float:
    """Fubini-Study norm (1+|z|^2)^(-d/2) |P(z)| of the degree-d section of P."""
    if P.degree > d:
        raise ValueError(f"polynomial degree {P.degree} exceeds section degree {d}")
    nz2 = sum(abs(complex(zi)) ** 2 for zi in z)
    return (1.0 + nz2) ** (-d / 2.0) * abs(eval_poly(P, z))


def section_norm_homogeneous(Q: HomogeneousSection, x: Sequence[complex]) -> float:
    """Chart-free section norm |Q(x)| / ||x||^d at homogeneous coordinates x."""
    nx = math.sqrt(sum(abs(complex(xi)) ** 2 for xi in x))
    if nx == 0:
        raise ValueError("zero homogeneous coordinates")
    return abs(eval_section(Q, x)) / nx**Q.degree


def homogenize(P: ComplexPolynomial, d: int) -> HomogeneousSection:
    """Lift P to a degree-d homogeneous section, new 0th variable absorbing the slack."""
    if P.degree > d:
        raise ValueError(f"polynomial degree {P.degree} exceeds target degree {d}")
    terms = {(d - sum(exp),) + exp: coeff for exp, coeff in P.terms.items()}
    return HomogeneousSection(P.n_vars + 1, terms, d)


def chart_restrict(Q: HomogeneousSection, chart: AffineChart) -> ComplexPolynomial:
    """Set one homogeneous coordinate to 1 and reorder the rest."""
    n = Q.n_plus_1_vars - 1
    if len(chart.variable_order) != n:
        raise ValueError("chart variable count does not match section")
    k = chart.dehomogenize_index
    remaining = [i for i in range(Q.n_plus_1_vars) if i != k]
    terms: dict[Multidegree, complex] = {}
    for exp, coeff in Q.terms.items():
        new = tuple(exp[remaining[chart.variable_order[i]]] for i in range(n))
        terms[new] = terms.get(new, 0) + coeff
    return ComplexPolynomial(n, terms)


def affine_precompose(
    P: ComplexPolynomial, shifts: Sequence[tuple[complex, complex]]
) -> ComplexPolynomial:
    """Substitute z_i -> scale_i * x_i + offset_i, exact coefficient expansion."""
    if len(shifts) != P.n_vars:
        raise ValueError("one (scale, offset) pair per variable required")
    n = P.n_vars
    result = ComplexPolynomial.constant(n, 0)
    for exp, coeff in P.sorted_terms():
        term = ComplexPolynomial.constant(n, coeff)
        for i, e in enumerate(exp):
            scale, offset = shifts[i]
            lin = ComplexPolynomial(n, {tuple(1 if j == i else 0 for j in range(n)): scale,
                                        (0,) * n: offset})
            for _ in range(e):
                term = term * lin
        result = result + term
    return result


def linear_precompose(Q: HomogeneousSection, A: Sequence[Sequence[complex]]) -> HomogeneousSection:
    """Compose with a linear change of homogeneous coordinates: (Q o A)(y) = Q(A y)."""
    m = Q.n_plus_1_vars
    if len(A) != m or any(len(row) != m for row in A):
        raise ValueError("matrix shape mismatch")
    n = m
    # images of the coordinates as linear polynomials in the new variables
    images = []
    for i in range(m):
        images.append(
            ComplexPolynomial(n, {tuple(1 if j == k else 0 for j in range(n)): A[i][k]
                                  for k in range(n) if A[i][k] != 0})
        )
    result = ComplexPolynomial.constant(n, 0)
    for exp, coeff in Q.sorted_terms():
        term = ComplexPolynomial.constant(n, coeff)
        for i, e in enumerate(exp):
            for _ in range(e):
                term = term * images[i]
        result = result + term
    return HomogeneousSection(m, result.terms, Q.degree)


def poly_to_json(P: ComplexPolynomial) -> dict:
    return {
        "n_vars": P.n_vars,
        "terms": [
            {"exp": list(exp), "re": coeff.real, "im": coeff.imag}
            for exp, coeff in P.sorted_terms()
        ],
    }


def poly_from_json(obj: Mapping) -> ComplexPolynomial:
    terms = {tuple(t["exp"]): complex(t["re"], t["im"]) for t in obj["terms"]}
    return ComplexPolynomial(int(obj["n_vars"]), terms)
