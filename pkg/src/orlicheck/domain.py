"""Regions, simple functions, and submultiplicative weight families on R^n.

Dimensions are restricted to 1, 2, 3.  Boxes are half-open products
[l, h) x ...; balls are open.  Simple functions are finite lists of
(value, region) pieces with pairwise-disjoint regions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .young import (
    CERTIFICATE_MARGIN,
    Counterexample,
    _decade_maxima,
    _diverging,
    bounded_ratio,
    ineq_holds,
)

MAX_DIM = 3
# Mixed box/ball overlap detection falls back to rejection sampling; a clean
# sample of this size may miss only tiny overlaps.
OVERLAP_SAMPLES = 10_000


def ball_volume(n, r):
    """Volume of a ball of radius r in dimension n (1 <= n <= 3)."""
    if r <= 0.0:
        raise ValueError("radius must be positive")
    if n == 1:
        return 2.0 * r
    if n == 2:
        return math.pi * r * r
    if n == 3:
        return (4.0 / 3.0) * math.pi * r**3
    raise ValueError(f"unsupported dimension {n}")


def _as_points(x, dim):
    pts = np.asarray(x, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.shape[-1] != dim:
        raise ValueError(f"expected points in dimension {dim}")
    return pts


@dataclass(frozen=True)
class Ball:
    center: tuple
    radius: float

    def __post_init__(self):
        center = tuple(float(c) for c in self.center)
        if not (1 <= len(center) <= MAX_DIM):
            raise ValueError("dimension must be 1, 2, or 3")
        if not (self.radius > 0.0):
            raise ValueError("radius must be positive")
        object.__setattr__(self, "center", center)
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self):
        return len(self.center)

    @property
    def volume(self):
        return ball_volume(self.dim, self.radius)

    def contains(self, x):
        pts = _as_points(x, self.dim)
        d2 = np.sum((pts - np.asarray(self.center)) ** 2, axis=-1)
        return d2 < self.radius * self.radius

    def bounding_box(self):
        lo = [c - self.radius for c in self.center]
        hi = [c + self.radius for c in self.center]
        return Box(tuple(zip(lo, hi)))

    def translated(self, x):
        return Ball(tuple(c + dx for c, dx in zip(self.center, x)), self.radius)


@dataclass(frozen=True)
class Box:
    bounds: tuple  # ((l1, h1), ..., (ln, hn)), half-open per axis

    def __post_init__(self):
        bounds = tuple((float(l), float(h)) for l, h in self.bounds)
        if not (1 <= len(bounds) <= MAX_DIM):
            raise ValueError("dimension must be 1, 2, or 3")
        for l, h in bounds:
            if not (l < h):
                raise ValueError("each interval needs l < h")
            if not (math.isfinite(l) and math.isfinite(h)):
                raise ValueError("bounds must be finite")
        object.__setattr__(self, "bounds", bounds)

    @property
    def dim(self):
        return len(self.bounds)

    @property
    def volume(self):
        v = 1.0
        for l, h in self.bounds:
            v *= h - l
        return v

    def contains(self, x):
        pts = _as_points(x, self.dim)
        ok = np.ones(pts.shape[0], dtype=bool)
        for i, (l, h) in enumerate(self.bounds):
            ok &= (pts[:, i] >= l) & (pts[:, i] < h)
        return ok

    def translated(self, x):
        return Box(tuple((l + dx, h + dx) for (l, h), dx in zip(self.bounds, x)))


def _boxes_disjoint(a, b):
    return any(ah <= bl or bh <= al for (al, ah), (bl, bh) in zip(a.bounds, b.bounds))


def _balls_disjoint(a, b):
    d = math.dist(a.center, b.center)
    return d >= a.radius + b.radius


def _bbox_intersection(a, b):
    lo = [max(al, bl) for (al, _), (bl, _) in zip(a.bounds, b.bounds)]
    hi = [min(ah, bh) for (_, ah), (_, bh) in zip(a.bounds, b.bounds)]
    if any(l >= h for l, h in zip(lo, hi)):
        return None
    return Box(tuple(zip(lo, hi)))

def _mixed_overlaps(box, ball):
    inter = _bbox_intersection(box, ball.bounding_box())
    if inter is None:
        return False
    rng = np.random.default_rng(0)
    lo = np.array([l for l, _ in inter.bounds])
    hi = np.array([h for _, h in inter.bounds])
    pts = rng.uniform(lo, hi, size=(OVERLAP_SAMPLES, box.dim))
    return bool(np.any(box.contains(pts) & ball.contains(pts)))


def _regions_disjoint(a, b):
    box_a, box_b = isinstance(a, Box), isinstance(b, Box)
    if box_a and box_b:
        return _boxes_disjoint(a, b)
    if not box_a and not box_b:
        return _balls_disjoint(a, b)
    box, ball = (a, b) if box_a else (b, a)
    return not _mixed_overlaps(box, ball)


@dataclass(frozen=True)
class Piece:
    value: float
    region: object  # Box or Ball

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))
        if not isinstance(self.region, (Box, Ball)):
            raise TypeError("region must be a Box or a Ball")


@dataclass(frozen=True)
class SimpleFunction:
    dim: int
    pieces: tuple

    def __post_init__(self):
        pieces = tuple(p if isinstance(p, Piece) else Piece(*p) for p in self.pieces)
        for p in pieces:
            if p.region.dim != self.dim:
                raise ValueError("piece dimension mismatch")
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                if not _regions_disjoint(pieces[i].region, pieces[j].region):
                    raise ValueError(f"pieces {i} and {j} overlap")
        object.__setattr__(self, "pieces", pieces)

    @property
    def is_zero(self):
        return all(p.value == 0.0 for p in self.pieces)

    @property
    def box_only(self):
        return all(isinstance(p.region, Box) for p in self.pieces)

    @property
    def total_measure(self):
        return sum(p.region.volume for p in self.pieces)

    def value_at(self, x):
        for p in self.pieces:
            if bool(p.region.contains(x)[0]):
                return p.value
        return 0.0

    def scaled(self, alpha):
        return SimpleFunction(
            self.dim, tuple(Piece(alpha * p.value, p.region) for p in self.pieces)
        )


def indicator(region):
    """The characteristic function of a single region."""
    return SimpleFunction(region.dim, (Piece(1.0, region),))


def translate(f, x):
    """Shift every region of f by +x; values are unchanged."""
    if len(x) != f.dim:
        raise ValueError("translation vector dimension mismatch")
    return SimpleFunction(f.dim, tuple(Piece(p.value, p.region.translated(x)) for p in f.pieces))


def pointwise_product(f1, f2):
    """Product of two box-only simple functions on their common refinement.

    Cells covered by only one factor multiply against 0 and are dropped.
    """
    if f1.dim != f2.dim:
        raise ValueError("dimension mismatch")
    if not (f1.box_only and f2.box_only):
        raise ValueError("pointwise products support box regions only")
    pieces = []
    for p in f1.pieces:
        for q in f2.pieces:
            inter = _bbox_intersection(p.region, q.region)
            if inter is not None and p.value * q.value != 0.0:
                pieces.append(Piece(p.value * q.value, inter))
    return SimpleFunction(f1.dim, tuple(pieces))


def pointwise_sum(f1, f2):
    """Sum of two box-only simple functions on their common grid refinement."""
    if f1.dim != f2.dim:
        raise ValueError("dimension mismatch")
    if not (f1.box_only and f2.box_only):
        raise ValueError("pointwise sums support box regions only")
    cuts = []
    for axis in range(f1.dim):
        vals = set()
        for f in (f1, f2):
            for p in f.pieces:
                l, h = p.region.bounds[axis]
                vals.update((l, h))
        cuts.append(sorted(vals))
    pieces = []
    for idx in np.ndindex(*[len(c) - 1 for c in cuts]):
        bounds = tuple((cuts[a][i], cuts[a][i + 1]) for a, i in enumerate(idx))
        cell = Box(bounds)
        mid = [0.5 * (l + h) for l, h in bounds]
        v = f1.value_at(mid) + f2.value_at(mid)
        if v != 0.0:
            pieces.append(Piece(v, cell))
    return SimpleFunction(f1.dim, tuple(pieces))


# ---------------------------------------------------------------------------
# Weights


class Weight:
    """Positive measurable weight on R^n; all families here are radial and
    nondecreasing in |x|."""

    def value(self, x):
        pts = np.asarray(x, dtype=float)
        single = pts.ndim == 1
        out = self._value_points(np.atleast_2d(pts))
        return float(out[0]) if single else out

    def __call__(self, x):
        return self.value(x)

    def _value_points(self, pts):
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(Weight):
    c: float

    def __post_init__(self):
        if not (self.c > 0.0):
            raise ValueError("constant weight must be positive")
        object.__setattr__(self, "c", float(self.c))

    def _value_points(self, pts):
        return np.full(pts.shape[0], self.c)


@dataclass(frozen=True)
class ExpNorm(Weight):
    """exp(a * |x|), a >= 0."""

    a: float

    def __post_init__(self):
        if self.a < 0.0:
            raise ValueError("rate must be nonnegative")
        object.__setattr__(self, "a", float(self.a))

    def _value_points(self, pts):
        with np.errstate(over="ignore"):
            return np.exp(self.a * np.linalg.norm(pts, axis=-1))


@dataclass(frozen=True)
class PolyNorm(Weight):
    """(1 + |x|)**a, a >= 0."""

    a: float

    def __post_init__(self):
        if self.a < 0.0:
            raise ValueError("exponent must be nonnegative")
        object.__setattr__(self, "a", float(self.a))

    def _value_points(self, pts):
        with np.errstate(over="ignore"):
            return (1.0 + np.linalg.norm(pts, axis=-1)) ** self.a


@dataclass(frozen=True)
class Product(Weight):
    factors: tuple

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise ValueError("product weight needs at least one factor")
        for w in factors:
            if not isinstance(w, Weight):
                raise TypeError("factors must be weights")
        object.__setattr__(self, "factors", factors)

    def _value_points(self, pts):
        out = np.ones(pts.shape[0])
        for w in self.factors:
            out = out * w._value_points(pts)
        return out


def constant_value(u):
    """The constant value of u when it is structurally constant, else None."""
    if isinstance(u, Constant):
        return u.c
    if isinstance(u, (ExpNorm, PolyNorm)):
        return 1.0 if u.a == 0.0 else None
    if isinstance(u, Product):
        total = 1.0
        for w in u.factors:
            c = constant_value(w)
            if c is None:
                return None
            total *= c
        return total
    return None


# ---------------------------------------------------------------------------
# Sampled weight checks


@dataclass(frozen=True)
class SubmultiplicativityReport:
    passed: bool
    samples: int
    worst_ratio: float  # max u(x+y) / (u(x) u(y))
    witness: tuple | None

    def as_dict(self):
        return {
            "kind": "submultiplicativity_check",
            "passed": self.passed,
            "samples": self.samples,
            "worst_ratio": float(self.worst_ratio),
            "witness": None
            if self.witness is None
            else [[float(v) for v in p] for p in self.witness],
        }


@dataclass(frozen=True)
class DominationCertificate:
    """Constant C with u1(x) <= C u2(x) at every sampled x."""

    C: float
    sampling: str

    def as_dict(self):
        return {"kind": "domination_certificate", "C": float(self.C), "sampling": self.sampling}


def _sample_points(rng, dim, count, radius, include_origin=True):
    pts = rng.uniform(-radius, radius, size=(count, dim))
    if include_origin:
        pts = np.vstack([np.zeros((1, dim)), pts])
    return pts


def check_submultiplicative(u, dim=1, sample_count=20000, radius=50.0, seed=42):
    """Sampled check of u(x+y) <= u(x) u(y) on [-radius, radius]^dim pairs.

    The origin pair is always included, so weights failing exactly at 0
    (constants below 1) are caught deterministically.
    """
    if sample_count < 1:
        raise ValueError("sample_count must be at least 1")
    rng = np.random.default_rng(seed)
    xs = _sample_points(rng, dim, sample_count, radius)
    ys = _sample_points(rng, dim, sample_count, radius)
    lhs = u.value(xs + ys)
    rhs = u.value(xs) * u.value(ys)
    ok = ineq_holds(lhs, rhs)
    ratios = bounded_ratio(lhs, rhs)
    i = int(np.nanargmax(ratios))
    witness = None if bool(np.all(ok)) else (tuple(xs[i]), tuple(ys[i]))
    return SubmultiplicativityReport(
        passed=bool(np.all(ok)),
        samples=xs.shape[0],
        worst_ratio=float(ratios[i]),
        witness=witness,
    )


def weight_dominates(u1, u2, dim=1, sample_count=20000, radius=50.0, c_grid=None, seed=42):
    """Search a constant C with u1 <= C u2 on a sampled box.

    The constant is the sampled max of u1/u2 (plus a tiny margin), optionally
    snapped up to the smallest value of c_grid at least that large.  If the
    per-decade max ratio keeps growing toward the sampling radius the trend is
    declared unbounded and a Counterexample is returned instead.
    """
    rng = np.random.default_rng(seed)
    xs = _sample_points(rng, dim, sample_count, radius)
    ratios = bounded_ratio(u1.value(xs), u2.value(xs))
    chat = float(np.max(ratios))
    i = int(np.argmax(ratios))

    norms = np.linalg.norm(xs, axis=-1)
    positive = norms > 0.0
    maxima = _decade_maxima(norms[positive], ratios[positive])
    if not math.isfinite(chat) or _diverging(maxima):
        x_star = xs[i]
        return Counterexample(
            witness=tuple(float(v) for v in x_star),
            lhs=float(u1.value(x_star)),
            rhs=float(u2.value(x_star)),
            ratio=chat,
            trend="unbounded",
            detail="weight ratio grows across the top sampled decades",
        )
    C = chat * (1.0 + CERTIFICATE_MARGIN)
    if c_grid is not None:
        grid = np.sort(np.asarray(c_grid, dtype=float))
        snapped = grid[grid >= C]
        if snapped.size == 0:
            raise ValueError("candidate grid has no value above the sampled ratio")
        C = float(snapped[0])
    desc = f"{xs.shape[0]} uniform samples on [-{radius:g}, {radius:g}]^{dim}, seed {seed}"
    return DominationCertificate(C=C, sampling=desc)
