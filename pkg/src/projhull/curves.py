"""Sampled closed curves and the pole-series constructions behind them.

The two curve families are graphs over the unit circle of slowly built
partial-fraction series: one with poles a_n = 1 - eps_n marching up the real
axis toward 1, and one with rotated copies of those poles clustering on the
whole circle.  All series constants carry certified geometric tail bounds and
the term magnitudes are handled in log-space (the rapid coefficient variant
underflows doubles near n = 13).
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "PoleHitError",
    "PoleSeriesParams",
    "SampledCurve",
    "TubeNeighborhood",
    "omega_partial",
    "omega_full",
    "omega_tilde_partial",
    "omega_tilde_full",
    "build_curve",
    "dist_to_curve",
    "tail_bound",
    "log_tail_bound",
    "log_dist_tail_bound",
    "curve_to_json",
    "curve_from_json",
    "unit_circle_curve",
]

VARIANTS = ("example1-standard", "example1-rapid", "example2")

# successive terms of c_n/eps_n = 2^-n n^-n (or faster) shrink by at least 1/2,
# so a partial sum plus one extra term dominates the whole tail
_TAIL_RATIO = 0.5
_TAIL_TERMS = 60


class PoleHitError(ValueError):
    """Evaluation requested exactly at a series pole."""

    def __init__(self, index, pole):
        self.index = index
        self.pole = pole
        super().__init__(f"evaluation at pole {pole} (index {index})")


def _logsumexp(logs: Sequence[float]) -> float:
    logs = [x for x in logs if x != -math.inf]
    if not logs:
        return -math.inf
    m = max(logs)
    return m + math.log(sum(math.exp(x - m) for x in logs))


@dataclass(frozen=True)
class PoleSeriesParams:
    """Rules eps_n, c_n and the derived constants of one series variant.

    kappa = sum c_n/a_n with a certified remainder; kappa_tail bounds the
    truncation error actually incurred.
    """

    variant: str
    kappa: float = field(init=False)
    kappa_tail: float = field(init=False)

    def __post_init__(self):
        if self.variant not in VARIANTS:
            raise ValueError(f"unknown variant {self.variant!r}; expected one of {VARIANTS}")
        total = 0.0
        for n in range(1, 200):
            t = math.exp(self.log_c(n)) / self.a(n)
            total += t
            if t == 0.0:
                break
        # geometric dominator: term ratio is < 1/2 from n = 1 on
        rem = t if t > 0 else 5e-324
        object.__setattr__(self, "kappa", total)
        object.__setattr__(self, "kappa_tail", rem)

    def eps(self, n: int) -> float:
        return 2.0 ** (-n)

    def a(self, n: int) -> float:
        return 1.0 - self.eps(n)

    def log_c(self, n: int) -> float:
        if self.variant == "example1-rapid":
            return -n * math.log(4.0) - n * n * math.log(n)
        return -n * math.log(4.0) - n * math.log(n)

    def c(self, n: int) -> float:
        return math.exp(self.log_c(n))

    def log_c_over_eps(self, n: int) -> float:
        return self.log_c(n) + n * math.log(2.0)

    def sum_c_over_eps(self) -> float:
        """sum_n c_n/eps_n, the boundary sup of the pole part of omega."""
        return math.exp(_logsumexp([self.log_c_over_eps(n) for n in range(1, 1 + 2 * _TAIL_TERMS)]))

    def sum_k_c_over_eps(self) -> float:
        """sum_k k c_k/eps_k, the convergence budget of the rotated-pole family."""
        return math.exp(
            _logsumexp(
                [math.log(k) + self.log_c_over_eps(k) for k in range(1, 1 + 2 * _TAIL_TERMS)]
            )
        )


def log_tail_bound(params: PoleSeriesParams, N: int) -> float:
    """log of a certified upper bound on sum_{n>N} c_n/eps_n."""
    if N < 0:
        raise ValueError("N must be >= 0")
    logs = [params.log_c_over_eps(n) for n in range(N + 1, N + 1 + _TAIL_TERMS)]
    # remainder past the last summed term is dominated by that term times
    # ratio/(1-ratio) = 1 at ratio 1/2
    logs.append(logs[-1])
    return _logsumexp(logs)


def tail_bound(params: PoleSeriesParams, N: int) -> float:
    return math.exp(log_tail_bound(params, N))


def log_dist_tail_bound(params: PoleSeriesParams, N: int) -> float:
    """log bound on sum_{n>N} (c_n/eps_n + c_n/a_n): boundary distance of f_N to the curve."""
    logs = []
    for n in range(N + 1, N + 1 + _TAIL_TERMS):
        logs.append(math.log(math.exp(params.log_c_over_eps(n)) + params.c(n) / params.a(n))
                    if params.log_c_over_eps(n) > -700 else params.log_c_over_eps(n))
    logs.append(logs[-1])
    return _logsumexp(logs)


def omega_partial(params: PoleSeriesParams, n: int, zeta: complex) -> complex:
    """n-term partial sum  sum_{j<=n} c_j/(zeta-a_j) + c_j/a_j."""
    zeta = complex(zeta)
    total = 0j
    for j in range(1, n + 1):
        aj = params.a(j)
        if zeta == aj:
            raise PoleHitError(j, aj)
        cj = params.c(j)
        total += cj / (zeta - aj) + cj / aj
    return total


def omega_full(
    params: PoleSeriesParams,
    zeta: complex,
    tol: float = 1e-12,
    delta: float | None = None,
) -> tuple[complex, float]:
    """Sum the series to certified accuracy tol; returns (value, tail bound).

    On |zeta| >= 1 the poles are kept at distance >= eps_j automatically.  For
    interior points the caller must supply delta, a lower bound on the distance
    to every pole (and zeta = 1, the singular endpoint, is rejected).
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    zeta = complex(zeta)
    interior = abs(zeta) < 1.0 - 1e-12
    if interior:
        if delta is None:
            raise ValueError("interior evaluation requires a pole-distance bound delta")
        if delta <= 0:
            raise ValueError("delta must be positive")

    N = 0
    while True:
        N += 1
        if interior:
            # tail: sum_{j>N} (c_j/delta + c_j/a_j)
            lt = _logsumexp(
                [
                    math.log(math.exp(params.log_c(j)) * (1.0 / delta + 1.0 / params.a(j)) or 5e-324)
                    if params.log_c(j) > -700
                    else params.log_c(j)
                    for j in range(N + 1, N + 1 + _TAIL_TERMS)
                ]
            )
            lt = _logsumexp([lt, params.log_c(N + _TAIL_TERMS) - math.log(delta)])
            t = math.exp(lt)
        else:
            t = math.exp(log_dist_tail_bound(params, N))
        if t <= tol or N > 400:
            break
    if t > tol:
        raise RuntimeError("could not certify requested tolerance")

    if interior:
        for j in range(1, N + 1):
            if abs(zeta - params.a(j)) < delta:
                raise ValueError(f"zeta within delta of pole a_{j}")
    value = omega_partial(params, N, zeta)
    return value, t


def _rotated_poles(params: PoleSeriesParams, k: int) -> list[complex]:
    ak = params.a(k)
    return [cmath.exp(2j * math.pi * ell / k) * ak for ell in range(1, k + 1)]


def omega_tilde_partial(params: PoleSeriesParams, n: int, zeta: complex) -> complex:
    """Rotated-pole partial sum, normalized to vanish at the origin."""
    zeta = complex(zeta)
    total = 0j
    kappa_n = 0j
    for k in range(1, n + 1):
        ck = params.c(k)
        for ell, p in enumerate(_rotated_poles(params, k), start=1):
            if zeta == p:
                raise PoleHitError((k, ell), p)
            total += ck / (zeta - p)
            kappa_n += ck / (0.0 - p)
    return total - kappa_n


def omega_tilde_full(params: PoleSeriesParams, zeta: complex, tol: float = 1e-12) -> tuple[complex, float]:
    """Boundary/exterior evaluation of the rotated-pole series with certified tail."""
    if abs(zeta) < 1.0 - 1e-12:
        raise ValueError("only |zeta| >= 1 supported for the rotated-pole series")
    N = 0
    while True:
        N += 1
        # each level k contributes k poles, all at distance >= eps_k from |zeta|>=1,
        # and the normalization shifts by at most k c_k/a_k
        logs = [
            math.log(k) + math.log(math.exp(params.log_c(k)) * (2.0 ** k + 1.0 / params.a(k)))
            if params.log_c(k) > -700
            else math.log(k) + params.log_c_over_eps(k)
            for k in range(N + 1, N + 1 + _TAIL_TERMS)
        ]
        logs.append(logs[-1])
        t = math.exp(_logsumexp(logs))
        if t <= tol or N > 400:
            break
    if t > tol:
        raise RuntimeError("could not certify requested tolerance")
    return omega_tilde_partial(params, N, zeta), t


@dataclass(frozen=True)
class SampledCurve:
    """Closed curve in C^n as parameter-ordered samples over t in [0, 1)."""

    n: int
    ts: np.ndarray  # shape (m,)
    points: np.ndarray  # shape (m, n) complex
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        ts = np.asarray(self.ts, dtype=float)
        points = np.asarray(self.points, dtype=complex).reshape(len(ts), self.n)
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "points", points)
        if len(ts) < 16:
            raise ValueError("at least 16 samples required")
        if not np.all(np.diff(ts) > 0):
            raise ValueError("parameters must be strictly increasing")
        gaps = np.diff(np.concatenate([ts, [ts[0] + 1.0]]))
        if gaps.max() > 8.0 * np.median(gaps):
            raise ValueError("sample gaps too uneven (max gap > 8x median)")

    @property
    def m(self) -> int:
        return len(self.ts)

    @property
    def closed(self) -> bool:
        return True


@dataclass(frozen=True)
class TubeNeighborhood:
    """Open tube of radius r around a sampled curve."""

    curve: SampledCurve
    r: float

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError("tube radius must be positive")

    def contains(self, z) -> bool:
        return dist_to_curve(z, self.curve) < self.r


def build_curve(params: PoleSeriesParams, m: int, tol: float = 1e-12) -> SampledCurve:
    """Graph of the series over the unit circle: samples (e^{2 pi i k/m}, omega)."""
    if m < 64:
        raise ValueError("m must be at least 64")
    ts = np.arange(m) / m
    zetas = np.exp(2j * np.pi * ts)
    values = np.empty(m, dtype=complex)
    tails = np.empty(m)
    for k, z in enumerate(zetas):
        if params.variant == "example2":
            values[k], tails[k] = omega_tilde_full(params, z, tol)
        else:
            values[k], tails[k] = omega_full(params, z, tol)
    points = np.column_stack([zetas, values])
    meta = {
        "variant": params.variant,
        "kappa": params.kappa,
        "tail_tol": tol,
        "max_tail": float(tails.max()),
    }
    return SampledCurve(2, ts, points, meta)


def unit_circle_curve(m: int = 512) -> SampledCurve:
    """Degenerate test curve: the unit circle in C^1."""
    ts = np.arange(m) / m
    return SampledCurve(1, ts, np.exp(2j * np.pi * ts).reshape(m, 1), {"variant": "circle"})


def dist_to_curve(z, curve: SampledCurve) -> float:
    """Distance to the sampled trace: sample minimum plus one local quadratic fit."""
    z = np.asarray(z, dtype=complex).reshape(-1)
    if len(z) != curve.n:
        raise ValueError("dimension mismatch")
    d2 = np.abs(curve.points - z[None, :]) ** 2
    d2 = d2.sum(axis=1)
    i = int(np.argmin(d2))
    m = curve.m
    im, ip = (i - 1) % m, (i + 1) % m
    f0, f1, f2 = d2[im], d2[i], d2[ip]
    denom = f0 - 2.0 * f1 + f2
    best = math.sqrt(f1)
    if denom > 0:
        tau = 0.5 * (f0 - f2) / denom
        tau = min(1.0, max(-1.0, tau))
        # quadratic Lagrange interpolation of the curve through the 3 samples
        p = (
            curve.points[im] * 0.5 * tau * (tau - 1.0)
            + curve.points[i] * (1.0 - tau * tau)
            + curve.points[ip] * 0.5 * tau * (tau + 1.0)
        )
        best = min(best, float(np.linalg.norm(p - z)))
    return best


def curve_to_json(curve: SampledCurve) -> dict:
    return {
        "n": curve.n,
        "samples": [
            {
                "t": float(t),
                "re": [float(p.real) for p in pt],
                "im": [float(p.imag) for p in pt],
            }
            for t, pt in zip(curve.ts, curve.points)
        ],
        "meta": dict(curve.meta),
    }


def curve_from_json(obj: dict) -> SampledCurve:
    n = int(obj["n"])
    ts = [s["t"] for s in obj["samples"]]
    pts = [[complex(r, i) for r, i in zip(s["re"], s["im"])] for s in obj["samples"]]
    return SampledCurve(n, np.array(ts), np.array(pts), dict(obj.get("meta", {})))
