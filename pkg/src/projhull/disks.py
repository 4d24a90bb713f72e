"""Blaschke products, rational analytic disks, and the four disk conditions.

A disk map is given componentwise by explicit partial fractions plus a
polynomial part in zeta; its poles are data, never recovered by root finding.
The subharmonic test function chi = log|P(f)| + d log|B| extends across the
poles, and the maximum principle pins its interior values to the boundary.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .curves import PoleSeriesParams, SampledCurve, dist_to_curve
from .polyring import ComplexPolynomial, eval_poly

__all__ = [
    "BlaschkeProduct",
    "PoleTerm",
    "DiskComponent",
    "RationalDiskMap",
    "ProjectivePoint",
    "DiskConditionsReport",
    "UnsupportedPoleError",
    "blaschke_eval",
    "blaschke_log_center",
    "eval_disk",
    "check_conditions",
    "chi_eval",
    "max_principle_check",
    "membership_bound_check",
    "g_product_bound",
    "disk_functional",
    "example_family",
    "blaschke_for",
    "diskmap_to_json",
    "diskmap_from_json",
]

_BOUNDARY_SLACK = 1e-9


class UnsupportedPoleError(ValueError):
    pass


@dataclass(frozen=True)
class BlaschkeProduct:
    """Finite product of disk automorphism factors, one per stored zero."""

    zeros: tuple[complex, ...]

    def __post_init__(self):
        zeros = tuple(complex(z) for z in self.zeros)
        object.__setattr__(self, "zeros", zeros)
        for z in zeros:
            if abs(z) >= 1.0:
                raise ValueError(f"Blaschke zero {z} not in the open unit disk")


def blaschke_eval(B: BlaschkeProduct, zeta: complex) -> complex:
    zeta = complex(zeta)
    if abs(zeta) > 1.0 + _BOUNDARY_SLACK:
        raise ValueError("evaluation outside the closed unit disk")
    out = 1.0 + 0j
    for z in B.zeros:
        out *= (zeta - z) / (1.0 - z.conjugate() * zeta)
    return out


def blaschke_log_center(B: BlaschkeProduct) -> float:
    """log|B(0)| = sum log|zero_j|; -inf when a zero sits at the origin."""
    total = 0.0
    for z in B.zeros:
        if z == 0:
            return -math.inf
        total += math.log(abs(z))
    return total


@dataclass(frozen=True)
class PoleTerm:
    pole: complex
    residue: complex
    order: int = 1

    def __post_init__(self):
        object.__setattr__(self, "pole", complex(self.pole))
        object.__setattr__(self, "residue", complex(self.residue))
        if abs(self.pole) >= 1.0:
            raise ValueError(f"pole {self.pole} not in the open unit disk")
        if self.order < 1:
            raise ValueError("pole order must be >= 1")


@dataclass(frozen=True)
class DiskComponent:
    """One affine coordinate of the map: polynomial part plus pole terms."""

    poly: tuple[complex, ...]  # coefficients in zeta, ascending
    poles: tuple[PoleTerm, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "poly", tuple(complex(c) for c in self.poly))
        object.__setattr__(self, "poles", tuple(self.poles))

    def eval_regular(self, zeta: complex) -> complex:
        v = 0j
        for k, c in enumerate(self.poly):
            v += c * zeta**k
        for pt in self.poles:
            v += pt.residue / (zeta - pt.pole) ** pt.order
        return v

    def eval_holomorphic_part(self, zeta: complex, exclude: complex) -> complex:
        """Value with every term at pole `exclude` removed."""
        v = 0j
        for k, c in enumerate(self.poly):
            v += c * zeta**k
        for pt in self.poles:
            if pt.pole != exclude:
                v += pt.residue / (zeta - pt.pole) ** pt.order
        return v


@dataclass(frozen=True)
class RationalDiskMap:
    """Map of the closed unit disk into P^n in explicit partial-fraction form."""

    n: int
    components: tuple[DiskComponent, ...]

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))
        if len(self.components) != self.n:
            raise ValueError("one component per affine coordinate required")

    @property
    def pole_list(self) -> list[tuple[complex, bool]]:
        """Deduplicated poles with a simplicity flag (all first-order terms)."""
        seen: dict[complex, bool] = {}
        for comp in self.components:
            for pt in comp.poles:
                simple = pt.order == 1
                seen[pt.pole] = seen.get(pt.pole, True) and simple
        return list(seen.items())

    def residue_vector(self, pole: complex) -> np.ndarray:
        out = np.zeros(self.n, dtype=complex)
        for i, comp in enumerate(self.components):
            for pt in comp.poles:
                if pt.pole == pole and pt.order == 1:
                    out[i] += pt.residue
        return out


@dataclass(frozen=True)
class ProjectivePoint:
    """Affine value, or (for hyperplane hits) the direction [0 : direction]."""

    affine: np.ndarray | None
    direction: np.ndarray | None = None

    @property
    def at_infinity(self) -> bool:
        return self.affine is None


def eval_disk(f: RationalDiskMap, zeta: complex) -> ProjectivePoint:
    zeta = complex(zeta)
    if abs(zeta) > 1.0 + _BOUNDARY_SLACK:
        raise ValueError("evaluation outside the closed unit disk")
    for pole, simple in f.pole_list:
        if zeta == pole:
            if not simple:
                raise UnsupportedPoleError(f"higher-order pole at {pole}")
            return ProjectivePoint(None, f.residue_vector(pole))
    return ProjectivePoint(
        np.array([comp.eval_regular(zeta) for comp in f.components], dtype=complex)
    )


def eval_disk_boundary(f: RationalDiskMap, m_bdy: int) -> np.ndarray:
    """Values at m_bdy equispaced boundary points, shape (m_bdy, n)."""
    zetas = np.exp(2j * np.pi * np.arange(m_bdy) / m_bdy)
    return np.array([[c.eval_regular(z) for c in f.components] for z in zetas])


def blaschke_for(f: RationalDiskMap) -> BlaschkeProduct:
    """Blaschke product with zeros at the disk map's pole list."""
    return BlaschkeProduct(tuple(p for p, _ in f.pole_list))


def disk_functional(f: RationalDiskMap) -> float:
    """Pole log-sum sum log|zeta_j|; the Larusson-Sigurdsson disk functional."""
    total = 0.0
    for p, _ in f.pole_list:
        if p == 0:
            return -math.inf
        total += math.log(abs(p))
    return total


@dataclass(frozen=True)
class DiskConditionsReport:
    cond_i: tuple[bool, float]  # (holds, max boundary distance)
    cond_ii: tuple[bool, float]  # (holds, |f(0) - z0|)
    cond_iii: tuple[bool, float, float]  # (holds, pole_log_sum, M)
    cond_iv: tuple[bool, list]  # (holds, offending poles)

    @property
    def all_hold(self) -> bool:
        return self.cond_i[0] and self.cond_ii[0] and self.cond_iii[0] and self.cond_iv[0]


def check_conditions(
    f: RationalDiskMap,
    curve: SampledCurve,
    r: float,
    z0,
    M: float,
    m_bdy: int = 1024,
) -> DiskConditionsReport:
    """Test conditions (i)-(iv) for one disk of the family."""
    if m_bdy < 256:
        raise ValueError("m_bdy must be at least 256")
    z0 = np.asarray(z0, dtype=complex).reshape(-1)

    vals = eval_disk_boundary(f, m_bdy)
    max_dist = max(dist_to_curve(v, curve) for v in vals)
    ci = (max_dist < r, max_dist)

    # a pole at the origin is a condition (ii) failure, not an error
    if any(p == 0 for p, _ in f.pole_list):
        cii = (False, math.inf)
    else:
        f0 = eval_disk(f, 0.0).affine
        dev = float(np.linalg.norm(f0 - z0))
        cii = (dev <= 1e-12, dev)

    log_sum = disk_functional(f)
    ciii = (log_sum >= -M, log_sum, M)

    offending = [p for p, simple in f.pole_list if not simple]
    civ = (not offending, offending)
    return DiskConditionsReport(ci, cii, ciii, civ)


def _check_pairing(f: RationalDiskMap, B: BlaschkeProduct):
    if sorted(B.zeros, key=lambda z: (z.real, z.imag)) != sorted(
        (p for p, _ in f.pole_list), key=lambda z: (z.real, z.imag)
    ):
        raise ValueError("Blaschke zeros must equal the disk map's pole list")


def chi_eval(
    P: ComplexPolynomial,
    d: int,
    f: RationalDiskMap,
    B: BlaschkeProduct,
    zeta: complex,
) -> float:
    """chi(zeta) = log|P(f(zeta))| + d log|B(zeta)|, extended across the poles.

    Returns -inf where P(f) vanishes (or where the removable extension does).
    """
    _check_pairing(f, B)
    if P.degree > d:
        raise ValueError("polynomial degree exceeds d")
    zeta = complex(zeta)

    for pole, simple in f.pole_list:
        if zeta == pole:
            if not simple:
                raise UnsupportedPoleError(f"higher-order pole at {pole}")
            # h = P(f) B^d is holomorphic at the pole; its value there is the
            # top-degree part of P applied to the residue vector, times the
            # derivative of the local Blaschke factor to the d-th power
            R = f.residue_vector(pole)
            top = 0j
            for exp, coeff in P.sorted_terms():
                if sum(exp) == d:
                    m = coeff
                    for Ri, e in zip(R, exp):
                        if e:
                            m *= Ri**e
                    top += m
            if top == 0:
                return -math.inf
            other = 1.0 + 0j
            for z in B.zeros:
                if z != pole:
                    other *= (pole - z) / (1.0 - z.conjugate() * pole)
            if other == 0:
                return -math.inf
            return (
                math.log(abs(top))
                - d * math.log(abs(1.0 - abs(pole) ** 2))
                + d * math.log(abs(other))
            )

    value = eval_poly(P, eval_disk(f, zeta).affine)
    b = blaschke_eval(B, zeta)
    if value == 0 or b == 0:
        return -math.inf
    return math.log(abs(value)) + d * math.log(abs(b))


def max_principle_check(
    P: ComplexPolynomial,
    d: int,
    f: RationalDiskMap,
    B: BlaschkeProduct,
    grid: tuple[int, int] = (64, 64),
    m_bdy: int = 1024,
) -> tuple[float, float, bool]:
    """Interior grid max of chi against the boundary max; pass within 1e-8."""
    n_r, n_theta = grid
    if n_r < 64 or n_theta < 64:
        raise ValueError("grid resolution must be at least 64x64")
    interior_max = -math.inf
    for i in range(n_r):
        rad = (i + 1.0) / (n_r + 1.0)
        for j in range(n_theta):
            zeta = rad * cmath.exp(2j * math.pi * j / n_theta)
            interior_max = max(interior_max, chi_eval(P, d, f, B, zeta))
    boundary_max = -math.inf
    for k in range(m_bdy):
        zeta = cmath.exp(2j * math.pi * k / m_bdy)
        boundary_max = max(boundary_max, chi_eval(P, d, f, B, zeta))
    return interior_max, boundary_max, interior_max <= boundary_max + 1e-8


def membership_bound_check(
    P: ComplexPolynomial,
    d: int,
    f: RationalDiskMap,
    B: BlaschkeProduct,
    a: complex,
    sup_on_tube: float = 2.0,
) -> tuple[bool, float, float]:
    """|P(f(a))| <= sup_on_tube * |1/B(a)|^d; returns (ok, lhs, rhs)."""
    _check_pairing(f, B)
    b = blaschke_eval(B, a)
    if b == 0:
        raise ValueError("a is a zero of B")
    lhs = abs(eval_poly(P, eval_disk(f, a).affine))
    rhs = sup_on_tube / abs(b) ** d
    return lhs <= rhs * (1.0 + 1e-12), lhs, rhs


@dataclass(frozen=True)
class GProductBound:
    boundary_sup: float
    pole_values: list[np.ndarray]
    interior_max: float
    max_principle_ok: bool


def g_product_bound(
    f: RationalDiskMap,
    B: BlaschkeProduct,
    m_bdy: int = 1024,
    grid: tuple[int, int] = (64, 64),
) -> GProductBound:
    """G = f * B is pole-free; boundary sup bounds the interior by the maximum principle."""
    _check_pairing(f, B)
    for p, simple in f.pole_list:
        if not simple:
            raise UnsupportedPoleError(f"higher-order pole at {p}")

    def g_value(zeta: complex) -> np.ndarray:
        for p, _ in f.pole_list:
            if zeta == p:
                other = 1.0 + 0j
                for z in B.zeros:
                    if z != p:
                        other *= (p - z) / (1.0 - z.conjugate() * p)
                return f.residue_vector(p) * other / (1.0 - abs(p) ** 2)
        b = blaschke_eval(B, zeta)
        return np.array([c.eval_regular(zeta) for c in f.components]) * b

    boundary_sup = 0.0
    for k in range(m_bdy):
        zeta = cmath.exp(2j * math.pi * k / m_bdy)
        boundary_sup = max(boundary_sup, float(np.linalg.norm(g_value(zeta))))

    n_r, n_theta = grid
    interior_max = 0.0
    for i in range(n_r):
        rad = (i + 1.0) / (n_r + 1.0)
        for j in range(n_theta):
            zeta = rad * cmath.exp(2j * math.pi * j / n_theta)
            interior_max = max(interior_max, float(np.linalg.norm(g_value(zeta))))

    pole_values = [g_value(p) for p, _ in f.pole_list]
    return GProductBound(
        boundary_sup, pole_values, interior_max, interior_max <= boundary_sup + 1e-8
    )


def example_family(params: PoleSeriesParams, n: int) -> RationalDiskMap:
    """The reference disk family f_n(zeta) = (zeta, n-term pole series) into P^2."""
    const = sum(params.c(j) / params.a(j) for j in range(1, n + 1))
    poles = tuple(PoleTerm(params.a(j), params.c(j)) for j in range(1, n + 1))
    return RationalDiskMap(
        2,
        (
            DiskComponent((0.0, 1.0)),
            DiskComponent((const,), poles),
        ),
    )


def diskmap_to_json(f: RationalDiskMap) -> dict:
    return {
        "n": f.n,
        "components": [
            {
                "poly": [{"re": c.real, "im": c.imag} for c in comp.poly],
                "poles": [
                    {
                        "re": pt.pole.real,
                        "im": pt.pole.imag,
                        "res_re": pt.residue.real,
                        "res_im": pt.residue.imag,
                        "order": pt.order,
                    }
                    for pt in comp.poles
                ],
            }
            for comp in f.components
        ],
    }


def diskmap_from_json(obj: dict) -> RationalDiskMap:
    comps = []
    for c in obj["components"]:
        poly = tuple(complex(t["re"], t["im"]) for t in c["poly"])
        poles = tuple(
            PoleTerm(complex(p["re"], p["im"]), complex(p["res_re"], p["res_im"]),
                     int(p.get("order", 1)))
            for p in c["poles"]
        )
        comps.append(DiskComponent(poly, poles))
    return RationalDiskMap(int(obj["n"]), tuple(comps))
