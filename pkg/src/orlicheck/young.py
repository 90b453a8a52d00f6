"""Parametric convex gauges: evaluation, generalized inverses, doubling and
comparison certificates.

Every gauge here is convex, vanishes at 0, is continuous and nondecreasing on
[0, inf), and grows without bound.  Values may saturate to +inf for huge
arguments; all grid checks treat +inf as a legitimate extended-real value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

# Inequality checks are relative so that exact float equalities always pass.
# The absolute term only guards subnormal noise; anything larger would mask
# genuine small-argument violations.
REL_TOL = 1e-9
ABS_TOL = 1e-307

INVERSE_REL_TOL = 1e-12
MAX_INVERSE_ITERS = 200

CERTIFICATE_MARGIN = 1e-12
# A trend counts as diverging only if the per-decade maxima grow by at least
# this factor across the top three populated decades.
GROWTH_FACTOR = 1.5


def default_t_grid():
    """Default argument grid for gauge comparisons: 400 log points on [1e-8, 1e8]."""
    return np.logspace(-8.0, 8.0, 400)


def default_c_grid():
    """Default scaling-candidate grid: 61 log points on [1e-3, 1e3], containing 1."""
    return np.logspace(-3.0, 3.0, 61)


def default_s_grid():
    return np.logspace(-6.0, 6.0, 121)


def ineq_holds(lhs, rhs, rtol=REL_TOL, atol=ABS_TOL):
    """Elementwise lhs <= rhs up to relative slack.

    Equal extended-real values (including inf == inf) pass.
    """
    lhs = np.asarray(lhs, dtype=float)
    rhs = np.asarray(rhs, dtype=float)
    with np.errstate(invalid="ignore"):
        out = lhs <= rhs * (1.0 + rtol) + atol
    return out


def bounded_ratio(lhs, rhs):
    """Extended-real lhs/rhs with equal values (0/0, inf/inf) mapping to 1."""
    scalar = np.ndim(lhs) == 0 and np.ndim(rhs) == 0
    l = np.atleast_1d(np.asarray(lhs, dtype=float))
    r = np.atleast_1d(np.asarray(rhs, dtype=float))
    l, r = np.broadcast_arrays(l, r)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.array(l / r)
    out[l == r] = 1.0
    out[(r == 0.0) & (l > 0.0)] = np.inf
    return float(out[0]) if scalar else out


def _nonneg_array(x, name):
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0.0):
        raise ValueError(f"{name} must be nonnegative")
    return arr


def _match(out, like):
    return float(out) if np.ndim(like) == 0 else out


class YoungFunction:
    """Base class for the supported convex gauges."""

    def value(self, t):
        """Gauge value at t >= 0.  Accepts scalars or arrays."""
        arr = _nonneg_array(t, "t")
        with np.errstate(over="ignore"):
            out = self._value_array(arr)
        return _match(out, t)

    def __call__(self, t):
        return self.value(t)

    def inverse(self, s):
        """Generalized inverse: inf of the set where the gauge exceeds s.

        Agrees with the ordinary inverse wherever the gauge is strictly
        increasing; on a flat segment at height s it returns the segment's
        right endpoint.
        """
        arr = _nonneg_array(s, "s")
        with np.errstate(over="ignore"):
            out = self._inverse_array(arr)
        return _match(out, s)

    def _value_array(self, t):
        raise NotImplementedError

    def _inverse_array(self, s):
        # Fallback: bracketed bisection per element, usable by any variant
        # whose gauge is continuous and unbounded.
        flat = np.ravel(s)
        out = np.array([_bracketed_inverse(self, x) for x in flat])
        return out.reshape(np.shape(s))


def _bracketed_inverse(phi, s):
    """inf{r >= 0 : phi(r) > s} by predicate bisection.

    The bracket upper end is returned, so phi(result) > s always holds and the
    overshoot is below INVERSE_REL_TOL relatively.
    """
    hi = 1.0
    while phi.value(hi) <= s:
        hi *= 2.0
        if hi > 1e308:
            raise OverflowError("gauge never exceeds the requested level")
    lo = 0.0 if hi == 1.0 else hi / 2.0
    for _ in range(MAX_INVERSE_ITERS):
        if hi - lo <= INVERSE_REL_TOL * hi:
            break
        mid = 0.5 * (lo + hi)
        if phi.value(mid) > s:
            hi = mid
        else:
            lo = mid
    return hi


@dataclass(frozen=True)
class Power(YoungFunction):
    """c * t**p with p >= 1, c > 0."""

    p: float
    c: float = 1.0

    def __post_init__(self):
        if not (self.p >= 1.0):
            raise ValueError("power exponent must be >= 1")
        if not (self.c > 0.0):
            raise ValueError("power scale must be positive")

    def _value_array(self, t):
        return self.c * t**self.p

    def _inverse_array(self, s):
        return (s / self.c) ** (1.0 / self.p)


@dataclass(frozen=True)
class ExpPower(YoungFunction):
    """exp(t**p) - 1 with p >= 1."""

    p: float

    def __post_init__(self):
        if not (self.p >= 1.0):
            raise ValueError("exponent must be >= 1")

    def _value_array(self, t):
        return np.expm1(t**self.p)

    def _inverse_array(self, s):
        return np.log1p(s) ** (1.0 / self.p)


@dataclass(frozen=True)
class Sum(YoungFunction):
    """Nonnegative combination sum(coef * gauge); at least one coef positive."""

    terms: tuple

    def __post_init__(self):
        terms = tuple((float(a), phi) for a, phi in self.terms)
        if not terms:
            raise ValueError("sum needs at least one term")
        if any(a < 0.0 for a, _ in terms):
            raise ValueError("coefficients must be nonnegative")
        if not any(a > 0.0 for a, _ in terms):
            raise ValueError("at least one coefficient must be positive")
        for _, phi in terms:
            if not isinstance(phi, YoungFunction):
                raise TypeError("sum terms must wrap gauges")
        object.__setattr__(self, "terms", terms)

    def _value_array(self, t):
        out = np.zeros_like(t)
        for a, phi in self.terms:
            if a > 0.0:
                out = out + a * phi._value_array(t)
        return out


@dataclass(frozen=True)
class PiecewiseLinear(YoungFunction):
    """Convex piecewise-linear gauge from breakpoints and nondecreasing slopes.

    breakpoints = (0, t1, ..., tk) strictly increasing; slopes = (s1, ..., sk)
    with 0 <= s1 <= ... <= sk and sk > 0.  Beyond tk the last slope continues.
    """

    breakpoints: tuple
    slopes: tuple
    _knot_values: tuple = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        ts = tuple(float(t) for t in self.breakpoints)
        ss = tuple(float(s) for s in self.slopes)
        if len(ts) < 2 or len(ss) != len(ts) - 1:
            raise ValueError("need k+1 breakpoints and k slopes")
        if ts[0] != 0.0:
            raise ValueError("first breakpoint must be 0")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if ss[0] < 0.0 or any(b < a for a, b in zip(ss, ss[1:])):
            raise ValueError("slopes must be nonnegative and nondecreasing")
        if ss[-1] <= 0.0:
            raise ValueError("final slope must be positive")
        ys = [0.0]
        for (a, b), s in zip(zip(ts, ts[1:]), ss):
            ys.append(ys[-1] + s * (b - a))
        object.__setattr__(self, "breakpoints", ts)
        object.__setattr__(self, "slopes", ss)
        object.__setattr__(self, "_knot_values", tuple(ys))

    def _value_array(self, t):
        ts = np.asarray(self.breakpoints)
        ys = np.asarray(self._knot_values)
        inner = np.interp(t, ts, ys)
        tail = ys[-1] + self.slopes[-1] * (t - ts[-1])
        return np.where(t <= ts[-1], inner, tail)

    def _inverse_array(self, s):
        ts = np.asarray(self.breakpoints)
        ys = np.asarray(self._knot_values)
        ss = np.asarray(self.slopes)
        shape = np.shape(s)
        s = np.atleast_1d(np.asarray(s, dtype=float))
        idx = np.searchsorted(ys, s, side="right")
        out = np.empty_like(s)
        tail = idx >= len(ys)
        out[tail] = ts[-1] + (s[tail] - ys[-1]) / ss[-1]
        seg = idx[~tail]
        out[~tail] = ts[seg - 1] + (s[~tail] - ys[seg - 1]) / ss[seg - 1]
        return out.reshape(shape)


# ---------------------------------------------------------------------------
# Certificates and counterexamples


@dataclass(frozen=True)
class PrecedenceCertificate:
    """Scaling constant C with phi1(t) <= phi2(C*t) on the checked grid."""

    C: float
    checked_grid: str
    max_slack: float

    def as_dict(self):
        return {
            "kind": "precedence_certificate",
            "C": float(self.C),
            "checked_grid": self.checked_grid,
            "max_slack": float(self.max_slack),
        }


@dataclass(frozen=True)
class Delta2Certificate:
    """Doubling constant K with phi(2t) <= K*phi(t) on the checked grid."""

    K: float
    checked_grid: str

    def as_dict(self):
        return {
            "kind": "delta2_certificate",
            "K": float(self.K),
            "checked_grid": self.checked_grid,
        }


@dataclass(frozen=True)
class Counterexample:
    """A witnessed strict violation of the inequality under test."""

    witness: object
    lhs: float
    rhs: float
    ratio: float
    trend: str | None = None
    detail: str = ""

    def as_dict(self):
        witness = self.witness
        if isinstance(witness, (np.floating, float, int)):
            witness = float(witness)
        elif isinstance(witness, (tuple, list, np.ndarray)):
            witness = [float(v) for v in witness]
        return {
            "kind": "counterexample",
            "witness": witness,
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
            "ratio": float(self.ratio),
            "trend": self.trend,
            "detail": self.detail,
        }


@dataclass(frozen=True)
class PointwiseCheckReport:
    """Result of a pointwise inequality sweep over a grid."""

    passed: bool
    checked: int
    max_ratio: float
    witness: float | None
    lhs: float
    rhs: float

    def as_dict(self):
        return {
            "kind": "pointwise_check",
            "passed": self.passed,
            "checked": self.checked,
            "max_ratio": float(self.max_ratio),
            "witness": None if self.witness is None else float(self.witness),
            "lhs": float(self.lhs),
            "rhs": float(self.rhs),
        }


@dataclass(frozen=True)
class ImplicationCheckReport:
    """Result of checking a pointwise implication over a grid."""

    passed: bool
    checked: int
    hypothesis_holds: int
    max_conclusion_ratio: float
    witness: float | None

    def as_dict(self):
        return {
            "kind": "implication_check",
            "passed": self.passed,
            "checked": self.checked,
            "hypothesis_holds": self.hypothesis_holds,
            "max_conclusion_ratio": float(self.max_conclusion_ratio),
            "witness": None if self.witness is None else float(self.witness),
        }


# ---------------------------------------------------------------------------
# Grid checks


def _decade_maxima(x, values):
    """Max of values per decade of x (x > 0), in ascending decade order."""
    decades = np.floor(np.log10(x)).astype(int)
    out = []
    for d in np.unique(decades):
        vals = values[decades == d]
        vals = vals[~np.isnan(vals)]
        if vals.size:
            out.append(float(np.max(vals)))
    return out


def _diverging(maxima):
    if len(maxima) < 3:
        return False
    a, b, c = maxima[-3], maxima[-2], maxima[-1]
    return b >= GROWTH_FACTOR * a and c >= GROWTH_FACTOR * b


def check_delta2(phi, t_max=1e6, grid_size=400):
    """Search a doubling constant K with phi(2t) <= K*phi(t) on (0, t_max].

    Returns a Delta2Certificate when the ratio stays bounded on the grid, and
    a Counterexample with trend "unbounded" when the per-decade maxima keep
    growing across the top decades.  A grid cannot prove unboundedness, so the
    divergence rule is deliberately conservative.
    """
    if t_max <= 0.0:
        raise ValueError("t_max must be positive")
    if grid_size < 2:
        raise ValueError("grid_size must be at least 2")
    top = math.log10(t_max)
    grid = np.logspace(top - 12.0, top, grid_size)
    num = phi.value(2.0 * grid)
    den = phi.value(grid)

    escapes = (den == 0.0) & (num > 0.0)
    if np.any(escapes):
        i = int(np.argmax(escapes))
        return Counterexample(
            witness=float(grid[i]),
            lhs=float(num[i]),
            rhs=0.0,
            ratio=math.inf,
            detail="doubling escapes a zero plateau; no finite constant works",
        )

    # Saturated points (both values +inf) carry no ratio information and are
    # dropped; a +inf ratio against a finite denominator is divergence.
    valid = np.isfinite(den) & (den > 0.0)
    if not np.any(valid):
        raise ValueError("gauge saturates on the whole grid; shrink t_max")
    with np.errstate(divide="ignore"):
        ratio = np.where(valid, num / np.where(valid, den, 1.0), -np.inf)
    khat = float(np.max(ratio[valid]))
    i = int(np.argmax(ratio))

    if not math.isfinite(khat) or _diverging(_decade_maxima(grid[valid], ratio[valid])):
        return Counterexample(
            witness=float(grid[i]),
            lhs=float(num[i]),
            rhs=float(den[i]),
            ratio=khat,
            trend="unbounded",
            detail="doubling ratio grows across the top grid decades",
        )
    desc = f"{grid_size} log points on ({grid[0]:.3g}, {t_max:.3g}]"
    return Delta2Certificate(K=khat * (1.0 + CERTIFICATE_MARGIN), checked_grid=desc)


def precedes(phi1, phi2, t_grid=None, c_grid=None):
    """Search the smallest grid constant C with phi1(t) <= phi2(C*t) on t_grid.

    Returns a PrecedenceCertificate for the first passing C (ascending sweep),
    else a Counterexample at the largest candidate, annotated with whether the
    violation reaches the grid's t->0 or t->inf endpoint.
    """
    t_grid = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    c_grid = default_c_grid() if c_grid is None else np.asarray(c_grid, dtype=float)
    if t_grid.size == 0 or c_grid.size == 0:
        raise ValueError("grids must be nonempty")
    if t_grid.min() > 1e-6 or t_grid.max() < 1e6:
        raise ValueError("t_grid must span at least [1e-6, 1e6]")
    c_grid = np.sort(c_grid)

    lhs = phi1.value(t_grid)
    desc = f"{t_grid.size} log points on [{t_grid.min():.3g}, {t_grid.max():.3g}]"
    rhs = None
    for C in c_grid:
        rhs = phi2.value(C * t_grid)
        if bool(np.all(ineq_holds(lhs, rhs))):
            ratio = bounded_ratio(lhs, rhs)
            slack = float(np.nanmax(ratio))
            return PrecedenceCertificate(C=float(C), checked_grid=desc, max_slack=slack)

    viol = ~ineq_holds(lhs, rhs)
    ratio = np.where(viol, bounded_ratio(lhs, rhs), -np.inf)
    i = int(np.argmax(ratio))
    if viol[0] and viol[-1]:
        trend = "both"
    elif viol[0]:
        trend = "t->0"
    elif viol[-1]:
        trend = "t->inf"
    else:
        trend = "interior"
    return Counterexample(
        witness=float(t_grid[i]),
        lhs=float(lhs[i]),
        rhs=float(rhs[i]),
        ratio=float(bounded_ratio(lhs[i], rhs[i])),
        trend=trend,
        detail=f"violation at largest candidate C={float(c_grid[-1])!r}",
    )


def inverse_product_dominated(phi1, phi2, phi3, t_grid=None):
    """Check inverse(phi1)*inverse(phi2) <= inverse(phi3) pointwise on the grid."""
    t_grid = default_t_grid() if t_grid is None else np.asarray(t_grid, dtype=float)
    if t_grid.size == 0:
        raise ValueError("grid must be nonempty")
    lhs = phi1.inverse(t_grid) * phi2.inverse(t_grid)
    rhs = phi3.inverse(t_grid)
    ok = ineq_holds(lhs, rhs)
    ratio = bounded_ratio(lhs, rhs)
    if bool(np.all(ok)):
        i = int(np.nanargmax(ratio))
        return PointwiseCheckReport(
            passed=True,
            checked=int(t_grid.size),
            max_ratio=float(np.nanmax(ratio)),
            witness=float(t_grid[i]),
            lhs=float(lhs[i]),
            rhs=float(rhs[i]),
        )
    i = int(np.argmax(~ok))
    return PointwiseCheckReport(
        passed=False,
        checked=int(t_grid.size),
        max_ratio=float(np.nanmax(np.where(ok, -np.inf, ratio))),
        witness=float(t_grid[i]),
        lhs=float(lhs[i]),
        rhs=float(rhs[i]),
    )


def inverse_comparison_implies_precedence(phi1, phi2, C1, C2, s_grid=None):
    """Check: inverse2(s) <= C1*inverse1(C2*s) implies phi1(t/C1) <= C2*phi2(t)
    at t = inverse2(s), for every s on the grid where the hypothesis holds.
    """
    if C1 <= 0.0 or C2 <= 0.0:
        raise ValueError("constants must be positive")
    s_grid = default_s_grid() if s_grid is None else np.asarray(s_grid, dtype=float)
    if s_grid.size == 0:
        raise ValueError("grid must be nonempty")
    t = phi2.inverse(s_grid)
    hyp = ineq_holds(t, C1 * phi1.inverse(C2 * s_grid))
    lhs = phi1.value(t / C1)
    rhs = C2 * phi2.value(t)
    concl = ineq_holds(lhs, rhs)
    bad = hyp & ~concl
    ratio = bounded_ratio(lhs, rhs)
    relevant = ratio[hyp]
    max_ratio = float(np.nanmax(relevant)) if relevant.size else 0.0
    if np.any(bad):
        i = int(np.argmax(bad))
        return ImplicationCheckReport(
            passed=False,
            checked=int(s_grid.size),
            hypothesis_holds=int(np.sum(hyp)),
            max_conclusion_ratio=max_ratio,
            witness=float(s_grid[i]),
        )
    return ImplicationCheckReport(
        passed=True,
        checked=int(s_grid.size),
        hypothesis_holds=int(np.sum(hyp)),
        max_conclusion_ratio=max_ratio,
        witness=None,
    )
