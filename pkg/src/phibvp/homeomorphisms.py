"""Odd increasing homeomorphisms of the real line.

A problem's flux nonlinearity is an odd, strictly increasing bijection of the
reals.  We store only its positive branch together with an optional analytic
inverse; the odd extension is applied by sign arithmetic, which keeps oddness
exact in floating point.  A catalog of standard examples is exposed through
short descriptor strings such as ``"power:2"`` or ``"sum-powers:3,1.5"``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ConvergenceError, UnboundedInputError


def _apply_odd(fn, y):
    """Evaluate the odd extension of a positive-branch map, sending 0 to 0."""
    arr = np.asarray(y, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.zeros_like(arr)
    mask = arr != 0.0
    if np.any(mask):
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            vals = fn(np.abs(arr[mask]))
        out[mask] = np.sign(arr[mask]) * vals
    return float(out[0]) if scalar else out


@dataclass(frozen=True, eq=False)
class Homeomorphism:
    """Odd increasing homeomorphism given by its positive branch.

    ``known_alpha`` and ``known_beta`` record the lower and upper growth
    exponents when they are known in closed form (``None`` means unknown,
    ``math.inf`` is allowed).  They are metadata only; nothing in the
    numerics consumes them.
    """

    label: str
    _forward_pos: Callable[[np.ndarray], np.ndarray]
    _inverse_pos: Optional[Callable[[np.ndarray], np.ndarray]] = None
    known_alpha: Optional[float] = None
    known_beta: Optional[float] = None

    def forward(self, y):
        return _apply_odd(self._forward_pos, y)

    def inverse(self, z):
        if self._inverse_pos is not None:
            return _apply_odd(self._inverse_pos, z)
        return numeric_inverse(self, z)

    def __repr__(self):
        return "Homeomorphism(%r)" % self.label


_PROBE_EXPONENTS = np.arange(-320, 309)


def _probe_ladder(forward_pos):
    """Positive probe points and their images, filtered to the finite,
    strictly increasing part usable for bracketing."""
    probes = 10.0 ** _PROBE_EXPONENTS
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        vals = np.asarray(forward_pos(probes), dtype=float)
    valid = np.isfinite(vals) & (vals > 0.0)
    px, pv = probes[valid], vals[valid]
    if px.size == 0:
        raise ConvergenceError("map produced no finite positive values on the probe ladder")
    keep = np.concatenate(([True], np.diff(pv) > 0.0))
    return px[keep], pv[keep]


def _invert_positive(forward_pos, targets, tol, out_of_range="raise"):
    """Vectorized bisection inverse of a positive-branch increasing map.

    ``targets`` must be a positive 1-D array.  Targets above every
    representable image either raise ``UnboundedInputError`` or come back as
    ``inf`` depending on ``out_of_range``.
    """
    targets = np.asarray(targets, dtype=float)
    px, pv = _probe_ladder(forward_pos)

    overflow = targets > pv[-1]
    if np.any(overflow):
        if out_of_range == "raise":
            raise UnboundedInputError(
                "target %g exceeds the largest representable image %g"
                % (float(np.max(targets)), pv[-1]))
        targets = np.where(overflow, pv[-1], targets)

    idx = np.searchsorted(pv, targets, side="left")
    lo = np.where(idx == 0, 0.0, px[np.maximum(idx - 1, 0)])
    hi = px[np.minimum(idx, px.size - 1)]

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for _ in range(64):
            mid = 0.5 * (lo + hi)
            below = np.asarray(forward_pos(mid), dtype=float) < targets
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
    root = 0.5 * (lo + hi)

    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        res = np.abs(np.asarray(forward_pos(root), dtype=float) - targets)
    bad = res > tol * (1.0 + targets)
    bad &= ~overflow
    if np.any(bad):
        raise ConvergenceError(
            "numeric inverse missed its tolerance (worst residual %g)"
            % float(np.max(res[bad])))
    if np.any(overflow):
        root = np.where(overflow, np.inf, root)
    return root


def numeric_inverse(phi: Homeomorphism, y, tol: float = 1e-12):
    """Invert ``phi`` by bracketed bisection over a decade ladder of probes.

    Handles scalars and arrays, applies the odd extension by sign, and
    verifies the result: ``|phi(root) - y| <= tol * (1 + |y|)`` must hold at
    every entry or ``ConvergenceError`` is raised.
    """
    arr = np.asarray(y, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.zeros_like(arr)
    mask = arr != 0.0
    if np.any(mask):
        roots = _invert_positive(phi._forward_pos, np.abs(arr[mask]), tol)
        out[mask] = np.sign(arr[mask]) * roots
    return float(out[0]) if scalar else out


def inverse_saturating(phi: "Homeomorphism", z):
    """Positive-branch inverse that saturates to ``inf`` beyond the
    representable range instead of raising.

    ``z`` must be nonnegative (scalar or array); negative entries are
    clamped to 0.  Useful inside feasibility scans where an off-scale value
    simply means the scanned condition fails or holds trivially.
    """
    arr = np.maximum(np.asarray(z, dtype=float), 0.0)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    out = np.zeros_like(arr)
    mask = arr > 0.0
    if np.any(mask):
        if phi._inverse_pos is not None:
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                out[mask] = phi._inverse_pos(arr[mask])
        else:
            out[mask] = _invert_positive(phi._forward_pos, arr[mask], 1e-12,
                                         out_of_range="inf")
    return float(out[0]) if scalar else out


class _InverseTable:
    """Fast monotone approximation of a positive-branch inverse.

    When the homeomorphism carries an explicit inverse, calls defer to it
    (saturating past the representable range).  Otherwise this tabulates
    the forward map on a geometric grid spanning the representable ladder
    and interpolates the inverse in log-log coordinates.  The approximation
    is itself increasing,
    so order relations survive; arguments below the table floor clamp to 0
    and arguments above the table ceiling clamp to the top entry, which
    under-estimates the true inverse and keeps certified bounds
    conservative.  Used only inside inner loops where an exact bisection
    per evaluation would dominate the runtime.
    """

    def __init__(self, phi: Homeomorphism, z_max: float, points: int = 4096):
        self._exact = phi._inverse_pos is not None
        self._phi = phi
        if self._exact:
            return
        px, _ = _probe_ladder(phi._forward_pos)
        t_hi = inverse_saturating(phi, float(z_max)) * 1.001
        if not np.isfinite(t_hi) or t_hi <= 0.0:
            t_hi = float(px[-1])
        t_lo = min(float(px[0]), t_hi * 1e-16)
        t = np.geomspace(t_lo, t_hi, points)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            z = np.asarray(phi._forward_pos(t), dtype=float)
        good = np.isfinite(z) & (z > 0.0)
        t, z = t[good], z[good]
        keep = np.concatenate(([True], np.diff(z) > 0.0))
        t, z = t[keep], z[keep]
        if t.size < 2:
            raise ValueError("forward map not tabulable on the requested range")
        self._log_t = np.log(t)
        self._log_z = np.log(z)
        self._z_floor = z[0]

    def __call__(self, z):
        if self._exact:
            return inverse_saturating(self._phi, z)
        z = np.asarray(z, dtype=float)
        out = np.zeros_like(z)
        mask = z > self._z_floor
        if np.any(mask):
            with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
                out[mask] = np.exp(
                    np.interp(np.log(z[mask]), self._log_z, self._log_t))
        return out


def make_power(r: float) -> Homeomorphism:
    """The odd power map with exponent ``r > 0``; ``r = 1`` is the identity."""
    if not (r > 0.0 and np.isfinite(r)):
        raise ValueError("power exponent must be positive and finite")
    r = float(r)
    inv = 1.0 / r
    return Homeomorphism(
        label="power:%g" % r,
        _forward_pos=lambda y: y ** r,
        _inverse_pos=lambda z: z ** inv,
        known_alpha=r,
        known_beta=r,
    )


def _make_sum_powers(p1: float, p2: float) -> Homeomorphism:
    if not (p1 >= p2 > 0.0):
        raise ValueError("sum-powers needs p1 >= p2 > 0")
    return Homeomorphism(
        label="sum-powers:%g,%g" % (p1, p2),
        _forward_pos=lambda y: y ** p1 + y ** p2,
        _inverse_pos=None,
        known_alpha=p2,
        known_beta=p1,
    )


def _make_ratio(p1: float, p2: float) -> Homeomorphism:
    if not (p1 > p2 > 0.0):
        raise ValueError("ratio needs p1 > p2 > 0")

    def forward(y):
        # Split at 1 so neither branch overflows prematurely.
        y = np.asarray(y, dtype=float)
        small = y <= 1.0
        out = np.empty_like(y)
        ys = y[small]
        out[small] = ys ** p1 / (1.0 + ys ** p2)
        yl = y[~small]
        out[~small] = yl ** (p1 - p2) / (1.0 + yl ** (-p2))
        return out

    return Homeomorphism(
        label="ratio:%g,%g" % (p1, p2),
        _forward_pos=forward,
        _inverse_pos=None,
        known_alpha=p1 - p2,
        known_beta=p1,
    )


def _xlog_forward(y):
    return y * (np.abs(np.log(y)) + 1.0)


def _x_minus_log1p_forward(y):
    y = np.asarray(y, dtype=float)
    out = np.empty_like(y)
    small = y < 1e-4
    ys = y[small]
    # Series for y - log(1+y) keeps full relative accuracy near 0.
    out[small] = ys * ys * (0.5 - ys * (1.0 / 3.0 - ys * (0.25 - ys / 5.0)))
    yl = y[~small]
    out[~small] = yl - np.log1p(yl)
    return out


def _make_logpow(p: float) -> Homeomorphism:
    if not (p > 0.0):
        raise ValueError("logpow needs a positive exponent")
    return Homeomorphism(
        label="logpow:%g" % p,
        _forward_pos=lambda y: np.log1p(y) ** p,
        _inverse_pos=lambda z: np.expm1(z ** (1.0 / p)),
        known_alpha=0.0,
        known_beta=p,
    )


def make_catalog_entry(descriptor: str) -> Homeomorphism:
    """Build a homeomorphism from a short descriptor string.

    Recognized forms::

        power:r            odd power with exponent r
        sum-powers:p1,p2   y^p1 + y^p2 with p1 >= p2 > 0
        ratio:p1,p2        y^p1 / (1 + y^p2) with p1 > p2 > 0
        xlog               y (|ln y| + 1)
        x-log1p            y - ln(1 + y)
        logpow:p           ln(1 + y)^p with p > 0
        arcsinh            ln(y + sqrt(1 + y^2))
        loglog             ln(1 + ln(1 + y))
    """
    name, _, argstr = descriptor.partition(":")
    name = name.strip()
    args = [float(s) for s in argstr.split(",")] if argstr else []

    if name == "power":
        if len(args) != 1:
            raise ValueError("power descriptor needs exactly one exponent")
        return make_power(args[0])
    if name == "sum-powers":
        if len(args) != 2:
            raise ValueError("sum-powers descriptor needs two exponents")
        return _make_sum_powers(args[0], args[1])
    if name == "ratio":
        if len(args) != 2:
            raise ValueError("ratio descriptor needs two exponents")
        return _make_ratio(args[0], args[1])
    if name == "logpow":
        if len(args) != 1:
            raise ValueError("logpow descriptor needs exactly one exponent")
        return _make_logpow(args[0])
    if args:
        raise ValueError("descriptor %r takes no arguments" % name)
    if name == "xlog":
        return Homeomorphism("xlog", _xlog_forward, None,
                             known_alpha=1.0, known_beta=None)
    if name == "x-log1p":
        return Homeomorphism("x-log1p", _x_minus_log1p_forward, None,
                             known_alpha=1.0, known_beta=None)
    if name == "arcsinh":
        return Homeomorphism("arcsinh", np.arcsinh, np.sinh,
                             known_alpha=None, known_beta=None)
    if name == "loglog":
        return Homeomorphism(
            "loglog",
            lambda y: np.log1p(np.log1p(y)),
            lambda z: np.expm1(np.expm1(z)),
            known_alpha=None, known_beta=None)
    raise ValueError("unknown homeomorphism descriptor %r" % descriptor)


CATALOG_DESCRIPTORS = (
    "power:2",
    "sum-powers:3,1.5",
    "ratio:2,0.5",
    "xlog",
    "x-log1p",
    "logpow:2",
    "arcsinh",
    "loglog",
)


def _reciprocal_index(v):
    if v is None:
        return None
    if v == 0.0:
        return math.inf
    if math.isinf(v):
        return 0.0
    return 1.0 / v


def inverse_homeomorphism(phi: Homeomorphism) -> Homeomorphism:
    """The inverse map as a homeomorphism in its own right.

    Growth exponents of the inverse are the reciprocals of the original's
    (with 1/0 read as infinity).  When the original has no analytic inverse
    the new forward map falls back to bracketed bisection; targets beyond
    the representable range then saturate to ``inf`` instead of raising, so
    growth scans can treat them as off-scale.
    """
    if phi._inverse_pos is not None:
        fwd = phi._inverse_pos
    else:
        def fwd(z):
            return _invert_positive(phi._forward_pos, np.asarray(z, dtype=float),
                                    1e-12, out_of_range="inf")
    return Homeomorphism(
        label="inverse(%s)" % phi.label,
        _forward_pos=fwd,
        _inverse_pos=phi._forward_pos,
        known_alpha=_reciprocal_index(phi.known_beta),
        known_beta=_reciprocal_index(phi.known_alpha),
    )
