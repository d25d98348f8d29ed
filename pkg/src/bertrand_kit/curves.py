"""Space curves and their Frenet apparatus.

Three curve representations share one interface:

* ``AnalyticCurve`` -- three parsed component expressions of ``t``;
  derivatives are exact via jet propagation.
* ``SampledCurve``  -- parameter/point tables; derivatives via Fornberg
  finite-difference stencils (7 points minimum, one-sided at the ends).
* ``JetBackedCurve`` -- a callable jet provider plus a dense sample table;
  used for curves defined through quadrature (offsets, generators) where
  exact derivatives are still available.

All Frenet quantities are computed from general-parameter formulas with
explicit chain-rule conversion to arc-length derivatives.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate, interpolate

from . import expr as ex
from .errors import (
    DomainError,
    NonConvergentError,
    OutOfDomainError,
    SingularPointError,
    TooFewSamplesError,
)
from .jets import Jet, evaluate_jet, jsqrt

EPS_REG = 1e-9
DEFAULT_FRENET_ORDER = 6


# ---------------------------------------------------------------------------
# curve representations


class Curve:
    """Common interface: a labelled map t -> R^3 on a closed interval."""

    label: str

    @property
    def domain(self):
        raise NotImplementedError

    def jet(self, t, order):
        """Component-wise jets (x, y, z) at ``t``."""
        raise NotImplementedError

    def _check_domain(self, t):
        lo, hi = self.domain
        if not (lo - 1e-12 <= t <= hi + 1e-12):
            raise OutOfDomainError(f"t={t} outside [{lo}, {hi}] of curve {self.label!r}")

    def point(self, t):
        xj, yj, zj = self.jet(t, 0)
        return np.array([xj.coeffs[0], yj.coeffs[0], zj.coeffs[0]])

    def velocity(self, t):
        xj, yj, zj = self.jet(t, 1)
        return np.array([xj.coeffs[1], yj.coeffs[1], zj.coeffs[1]])

    def speed(self, t):
        return float(np.linalg.norm(self.velocity(t)))


class AnalyticCurve(Curve):
    def __init__(self, x, y, z, domain, label=""):
        if isinstance(x, str):
            x = ex.parse_expression(x)
        if isinstance(y, str):
            y = ex.parse_expression(y)
        if isinstance(z, str):
            z = ex.parse_expression(z)
        lo, hi = float(domain[0]), float(domain[1])
        if not lo < hi:
            raise ValueError("domain must satisfy t_lo < t_hi")
        self.x, self.y, self.z = x, y, z
        self._domain = (lo, hi)
        self.label = label

    @property
    def domain(self):
        return self._domain

    def jet(self, t, order):
        self._check_domain(t)
        return (
            evaluate_jet(self.x, t, order, max_order=max(order, 8)),
            evaluate_jet(self.y, t, order, max_order=max(order, 8)),
            evaluate_jet(self.z, t, order, max_order=max(order, 8)),
        )


def fornberg_weights(z, x, m):
    """Finite-difference weights for derivatives 0..m at z on nodes x.

    Returns an array of shape (m+1, len(x)); row k gives the weights of
    the k-th derivative.  Fornberg's recursive algorithm.
    """
    x = np.asarray(x, dtype=float)
    n = len(x)
    c = np.zeros((m + 1, n))
    c1 = 1.0
    c4 = x[0] - z
    c[0, 0] = 1.0
    for i in range(1, n):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i] - z
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for k in range(mn, 0, -1):
                    c[k, i] = c1 * (k * c[k - 1, i - 1] - c5 * c[k, i - 1]) / c2
                c[0, i] = -c1 * c5 * c[0, i - 1] / c2
            for k in range(mn, 0, -1):
                c[k, j] = (c4 * c[k, j] - k * c[k - 1, j]) / c3
            c[0, j] = c4 * c[0, j] / c3
        c1 = c2
    return c


class SampledCurve(Curve):
    MIN_SAMPLES = 7

    def __init__(self, params, points, label=""):
        params = np.asarray(params, dtype=float)
        points = np.asarray(points, dtype=float)
        if params.ndim != 1 or points.shape != (len(params), 3):
            raise ValueError("params must be (n,), points (n, 3)")
        if len(params) < self.MIN_SAMPLES:
            raise TooFewSamplesError(
                f"need at least {self.MIN_SAMPLES} samples, got {len(params)}"
            )
        if np.any(np.diff(params) <= 0):
            raise ValueError("params must be strictly increasing")
        self.params = params
        self.points = points
        self.label = label

    @property
    def domain(self):
        return (float(self.params[0]), float(self.params[-1]))

    def jet(self, t, order):
        self._check_domain(t)
        width = max(self.MIN_SAMPLES, order + 3)
        width = min(width, len(self.params))
        i = int(np.searchsorted(self.params, t))
        lo = max(0, min(i - width // 2, len(self.params) - width))
        idx = slice(lo, lo + width)
        w = fornberg_weights(t, self.params[idx], order)
        derivs = w @ self.points[idx]  # (order+1, 3)
        fact = np.array([math.factorial(k) for k in range(order + 1)], dtype=float)
        return tuple(Jet(t, derivs[:, comp] / fact) for comp in range(3))


class JetBackedCurve(Curve):
    """Curve defined by an exact jet provider with a dense sample table."""

    def __init__(self, jet_fn, params, points, label="", metadata=None):
        self._jet_fn = jet_fn
        self.params = np.asarray(params, dtype=float)
        self.points = np.asarray(points, dtype=float)
        self.label = label
        self.metadata = dict(metadata or {})

    @property
    def domain(self):
        return (float(self.params[0]), float(self.params[-1]))

    def jet(self, t, order):
        self._check_domain(t)
        return self._jet_fn(t, order)

    def as_sampled(self):
        return SampledCurve(self.params, self.points, label=self.label)


def curve_jet(curve, t, order):
    """Component-wise jets of the curve at t (dispatches on representation)."""
    return curve.jet(t, order)


# ---------------------------------------------------------------------------
# Frenet apparatus


@dataclass(frozen=True)
class FrenetData:
    t: float
    speed: float
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    kappa: float
    tau: float
    dkappa_ds: float
    dtau_ds: float
    d2kappa_ds2: float


def _vec_jets(curve, t, order):
    return curve.jet(t, order)


def _cross_jets(a, b):
    return (
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    )


def _dot_jets(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def frenet_apparatus(curve, t, order=DEFAULT_FRENET_ORDER, eps_reg=EPS_REG):
    """Frame, curvature, torsion and their arc-length derivatives at t.

    kappa = |g' x g''| / |g'|^3 and tau = <g' x g'', g'''> / |g' x g''|^2
    are evaluated in jet arithmetic so that their parameter derivatives
    come out alongside the values; arc-length derivatives follow by the
    chain rule.
    """
    P = _vec_jets(curve, t, order)
    D1 = tuple(p.deriv() for p in P)
    D2 = tuple(d.deriv() for d in D1)
    D3 = tuple(d.deriv() for d in D2)
    v2 = _dot_jets(D1, D1)
    if not np.isfinite(v2.coeffs[0]) or v2.coeffs[0] < eps_reg * eps_reg:
        raise SingularPointError(f"speed below regularity floor at t={t}")
    speed_jet = jsqrt(v2)
    v = speed_jet.coeffs[0]
    C = _cross_jets(D1, D2)
    c2 = _dot_jets(C, C)
    if c2.coeffs[0] < (eps_reg * v * v) ** 2:
        raise SingularPointError(f"curvature below regularity floor at t={t}")
    cnorm = jsqrt(c2)
    kappa_jet = cnorm / (speed_jet * speed_jet * speed_jet)
    tau_jet = _dot_jets(C, D3) / c2

    kappa = kappa_jet.coeffs[0]
    tau = tau_jet.coeffs[0]
    kdot = kappa_jet.coeffs[1]
    kddot = 2.0 * kappa_jet.coeffs[2]
    taudot = tau_jet.coeffs[1]
    vdot = speed_jet.coeffs[1]

    Tv = np.array([d.coeffs[0] for d in D1]) / v
    Bv = np.array([c.coeffs[0] for c in C]) / cnorm.coeffs[0]
    Nv = np.cross(Bv, Tv)

    return FrenetData(
        t=float(t),
        speed=float(v),
        T=Tv,
        N=Nv,
        B=Bv,
        kappa=float(kappa),
        tau=float(tau),
        dkappa_ds=float(kdot / v),
        dtau_ds=float(taudot / v),
        d2kappa_ds2=float((kddot * v - kdot * vdot) / v**3),
    )


def frenet_grid(curve, ts, order=DEFAULT_FRENET_ORDER, eps_reg=EPS_REG):
    """frenet_apparatus over a grid; singular points become None entries."""
    out = []
    for t in ts:
        try:
            out.append(frenet_apparatus(curve, t, order=order, eps_reg=eps_reg))
        except SingularPointError:
            out.append(None)
    return out


def slant_geodesic_indicator(fd: FrenetData) -> float:
    """Geodesic-curvature function of the principal-normal image.

    kappa^2/(kappa^2+tau^2)^{3/2} * d(tau/kappa)/ds, expanded so that no
    intermediate quotient by kappa^2 is formed twice.
    """
    k, tau = fd.kappa, fd.tau
    if k <= EPS_REG:
        raise SingularPointError(f"kappa={k} at t={fd.t}")
    num = fd.dtau_ds * k - tau * fd.dkappa_ds
    return float(num / (k * k + tau * tau) ** 1.5)


# ---------------------------------------------------------------------------
# arc length


def arc_length(curve, t0, t1, tol=1e-10):
    """Integral of the speed over [t0, t1] by adaptive quadrature."""
    lo, hi = curve.domain
    if not (lo - 1e-12 <= t0 <= hi + 1e-12 and lo - 1e-12 <= t1 <= hi + 1e-12):
        raise OutOfDomainError(f"[{t0}, {t1}] outside curve domain [{lo}, {hi}]")
    val, err = integrate.quad(curve.speed, t0, t1, epsabs=tol, epsrel=1e-12, limit=200)
    if err > max(tol * 10.0, abs(val) * 1e-8):
        raise NonConvergentError(f"arc length error estimate {err} above tolerance")
    return float(val)


@dataclass
class ArcLengthTable:
    """Monotone (t, s) table invertible in both directions."""

    t: np.ndarray
    s: np.ndarray
    _fwd: interpolate.PchipInterpolator = field(repr=False, default=None)
    _inv: interpolate.PchipInterpolator = field(repr=False, default=None)

    def __post_init__(self):
        if np.any(np.diff(self.s) <= 0):
            raise NonConvergentError("arc-length column not strictly increasing")
        self._fwd = interpolate.PchipInterpolator(self.t, self.s)
        self._inv = interpolate.PchipInterpolator(self.s, self.t)

    def forward(self, t):
        return self._fwd(t)

    def inverse(self, s):
        return self._inv(s)

    @property
    def total(self):
        return float(self.s[-1])


def build_arclength_table(curve, n, tol=1e-10):
    """Cumulative arc length at n+1 uniform parameter nodes."""
    if n < 16:
        raise ValueError("n must be >= 16")
    lo, hi = curve.domain
    ts = np.linspace(lo, hi, n + 1)
    segs = np.empty(n)
    for i in range(n):
        segs[i] = arc_length(curve, ts[i], ts[i + 1], tol=tol)
    s = np.concatenate(([0.0], np.cumsum(segs)))
    return ArcLengthTable(t=ts, s=s)
