"""Problem data for the weighted two-nonlinearity boundary value problem.

A problem couples an interval grid, two nonnegative weights m and n, two
positive parameters lambda and mu, and two scalar nonlinearities f and g
acting on the state:

    -phi(u')' = lambda m(x) f(u) + mu n(x) g(u),   u(a) = u(b) = 0.

The structural constants attached to f and g record the power-law envelopes
the constructions rely on: f dominating c0 t^q near zero, g dominated by
c1 t^{r1} near zero and dominating c2 t^{r2} at infinity.  Each block is
optional; attaching one asserts the corresponding envelope and is
spot-checked on samples at construction time.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .grids import Grid, GridFunction, require_same_grid
from .homeomorphisms import Homeomorphism


class FConstants(NamedTuple):
    """f(t) >= c0 * t^q on [0, t0]."""
    c0: float
    t0: float
    q: float


class G1Constants(NamedTuple):
    """g(t) <= c1 * t^r1 on [0, t1]."""
    c1: float
    t1: float
    r1: float


class G2Constants(NamedTuple):
    """g(t) >= c2 * t^r2 on [t2, infinity), checked on samples."""
    c2: float
    t2: float
    r2: float


def _check_positive(name, *values):
    for v in values:
        if not (np.isfinite(v) and v > 0.0):
            raise ValueError("%s entries must be positive and finite" % name)


_SPOT_SAMPLES = 33


@dataclass(frozen=True, eq=False)
class ProblemSpec:
    """Immutable problem description.

    ``f`` and ``g`` must accept numpy arrays of nonnegative values.  The
    parameter ``lam`` is the weight of the f-term (serialized under the key
    "lambda"), ``mu`` the weight of the g-term.
    """

    grid: Grid
    phi: Homeomorphism
    m: GridFunction
    n: GridFunction
    lam: float
    mu: float
    f: Callable[[np.ndarray], np.ndarray]
    g: Callable[[np.ndarray], np.ndarray]
    f_constants: Optional[FConstants] = None
    g1_constants: Optional[G1Constants] = None
    g2_constants: Optional[G2Constants] = None

    def __post_init__(self):
        require_same_grid(self.m, self.n)
        if self.m.grid != self.grid:
            raise ValueError("weights must live on the problem grid")
        for label, w in (("m", self.m), ("n", self.n)):
            if np.any(w.values < 0.0):
                raise ValueError("weight %s must be nonnegative" % label)
        if not (np.isfinite(self.lam) and self.lam > 0.0):
            raise ValueError("lambda must be positive")
        if not (np.isfinite(self.mu) and self.mu > 0.0):
            raise ValueError("mu must be positive")
        self._spot_check_envelopes()

    def _spot_check_envelopes(self):
        if self.f_constants is not None:
            c0, t0, q = self.f_constants
            _check_positive("f constants", c0, t0, q)
            t = np.linspace(0.0, t0, _SPOT_SAMPLES)
            lhs = np.asarray(self.f(t), dtype=float)
            rhs = c0 * t ** q
            if np.any(lhs < rhs - 1e-9 * (1.0 + rhs)):
                raise ValueError("f fails its stated lower envelope c0 t^q on [0, t0]")
        if self.g1_constants is not None:
            c1, t1, r1 = self.g1_constants
            _check_positive("g near-zero constants", c1, t1, r1)
            t = np.linspace(0.0, t1, _SPOT_SAMPLES)
            lhs = np.asarray(self.g(t), dtype=float)
            rhs = c1 * t ** r1
            if np.any(lhs > rhs + 1e-9 * (1.0 + rhs)):
                raise ValueError("g fails its stated upper envelope c1 t^r1 on [0, t1]")
        if self.g2_constants is not None:
            c2, t2, r2 = self.g2_constants
            _check_positive("g at-infinity constants", c2, t2, r2)
            t = np.geomspace(max(t2, 1e-8), 10.0 * max(t2, 1.0), _SPOT_SAMPLES)
            lhs = np.asarray(self.g(t), dtype=float)
            rhs = c2 * t ** r2
            if np.any(lhs < rhs - 1e-9 * (1.0 + rhs)):
                raise ValueError("g fails its stated lower envelope c2 t^r2 beyond t2")


def with_lambda(spec: ProblemSpec, lam: float) -> ProblemSpec:
    """A copy of the problem at a different lambda."""
    return dataclasses.replace(spec, lam=float(lam))


def rhs(spec: ProblemSpec, u: GridFunction) -> GridFunction:
    """Evaluate lambda m f(u) + mu n g(u) nodewise.

    Entries of u below -1e-12 are rejected; tiny negative roundoff is
    clamped to zero before f and g see it.
    """
    if u.grid != spec.grid:
        raise ValueError("state must live on the problem grid")
    values = u.values
    if np.any(values < -1e-12):
        raise ValueError("state has negative entries beyond roundoff scale")
    plus = np.maximum(values, 0.0)
    fu = np.asarray(spec.f(plus), dtype=float)
    gu = np.asarray(spec.g(plus), dtype=float)
    return GridFunction(spec.grid,
                        spec.lam * spec.m.values * fu + spec.mu * spec.n.values * gu)
