"""Numerical laboratory for projective-hull membership of closed curves.

Subpackages: polyring (sparse complex polynomials and sections), curves
(sampled curves and the pole series families), disks (Blaschke products and
analytic-disk conditions), hullscan (Christoffel/LP membership estimators,
the counterexample verifier, and the disk-functional optimizer), cli.
"""

__version__ = "0.1.0"

from .curves import PoleSeriesParams, SampledCurve, build_curve  # noqa: F401
from .disks import BlaschkeProduct, RationalDiskMap  # noqa: F401
from .hullscan import classify_point, verify_theorem3  # noqa: F401
from .polyring import ComplexPolynomial, HomogeneousSection  # noqa: F401
