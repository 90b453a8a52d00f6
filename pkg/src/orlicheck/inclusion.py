"""Report-producing verifiers for norm inequalities and embedding constants.

Each verifier is certificate-gated: it first establishes its hypotheses
(precedence, domination, submultiplicativity, inverse-product bounds) and
raises HypothesisNotEstablished otherwise, echoing the blocking evidence.
A established hypothesis is then checked instance by instance on a corpus of
simple functions, producing a TheoremReport with a pass/fail verdict and the
worst observed ratio.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import young
from .domain import (
    Ball,
    Box,
    Constant,
    Piece,
    SimpleFunction,
    _sample_points,
    ball_volume,
    check_submultiplicative,
    constant_value,
    indicator,
    pointwise_product,
    translate,
    weight_dominates,
)
from .errors import HypothesisNotEstablished
from .norms import char_norm_closed_form, luxemburg_norm, weak_luxemburg_norm
from .serialize import format_young, simple_function_summary
from .young import Counterexample, Power, bounded_ratio, ineq_holds, precedes

EXACT_RTOL = 1e-9
QUAD_RTOL = 1e-7


@dataclass
class TheoremReport:
    theorem: str
    instances: int
    max_ratio: float
    witness: dict | None
    verdict: str  # "pass" | "fail"
    hypotheses: list
    seed: int
    rows: list = field(default_factory=list, repr=False, compare=False)

    @property
    def passed(self):
        return self.verdict == "pass"

    def as_dict(self):
        return {
            "theorem": self.theorem,
            "instances": int(self.instances),
            "max_ratio": float(self.max_ratio),
            "witness": self.witness,
            "verdict": self.verdict,
            "hypotheses": self.hypotheses,
            "seed": int(self.seed),
        }


@dataclass(frozen=True)
class Corpus:
    seed: int
    dim: int
    functions: tuple
    description: str


def _draw_value(rng, vmin, vmax):
    while True:
        v = float(rng.uniform(-vmax, vmax))
        if abs(v) >= vmin:
            return v


def _disjoint_intervals(rng, k, radius, min_side):
    for _ in range(1000):
        edges = np.sort(rng.uniform(-radius, radius, size=2 * k))
        widths = edges[1::2] - edges[0::2]
        if np.all(widths >= min_side):
            return [(float(edges[2 * i]), float(edges[2 * i + 1])) for i in range(k)]
    raise RuntimeError("could not draw disjoint intervals")


def make_corpus(
    seed=42,
    dim=1,
    size=50,
    min_pieces=1,
    max_pieces=5,
    value_min=0.01,
    value_max=10.0,
    support_radius=3.0,
    box_only=False,
    min_side=None,
    center=None,
):
    """Deterministic corpus of simple functions with nonzero norms.

    Members are indicator multiples over boxes or balls plus multi-piece box
    functions; piece values stay away from zero and regions keep a minimum
    side so every member has a nonzero norm under every gauge and weight.
    """
    if min_side is None:
        min_side = support_radius / 60.0
    rng = np.random.default_rng(seed)
    functions = []
    for _ in range(size):
        k = int(rng.integers(min_pieces, max_pieces + 1))
        if not box_only and k == 1 and rng.random() < 0.3:
            r = float(rng.uniform(0.2 * support_radius, 0.5 * support_radius))
            cmax = max(support_radius - r, 1e-9)
            ctr = tuple(float(c) for c in rng.uniform(-cmax, cmax, size=dim))
            pieces = (Piece(_draw_value(rng, value_min, value_max), Ball(ctr, r)),)
        else:
            slots = _disjoint_intervals(rng, k, support_radius, min_side)
            built = []
            for l0, h0 in slots:
                bounds = [(l0, h0)]
                for _ in range(dim - 1):
                    lo = float(rng.uniform(-support_radius, support_radius - min_side))
                    hi = float(rng.uniform(lo + min_side, support_radius))
                    bounds.append((lo, hi))
                built.append(Piece(_draw_value(rng, value_min, value_max), Box(tuple(bounds))))
            pieces = tuple(built)
        f = SimpleFunction(dim, pieces)
        if center is not None:
            f = translate(f, center)
        functions.append(f)
    desc = (
        f"{size} functions, dim {dim}, pieces {min_pieces}-{max_pieces}, "
        f"values in [{value_min:g}, {value_max:g}], support radius {support_radius:g}, "
        f"{'boxes only' if box_only else 'boxes and balls'}, seed {seed}"
    )
    return Corpus(seed=seed, dim=dim, functions=tuple(functions), description=desc)


def _require(cert_or_cx, message):
    if isinstance(cert_or_cx, Counterexample):
        raise HypothesisNotEstablished(message, evidence=cert_or_cx)
    return cert_or_cx


def _weight_rtol(*weights):
    exact = all(constant_value(u) is not None for u in weights)
    return EXACT_RTOL if exact else QUAD_RTOL


def _finish(theorem, rows, hypotheses, seed, ok_flags, ratios, witnesses):
    max_ratio = float(np.max(ratios)) if len(ratios) else 0.0
    worst = int(np.argmax(ratios)) if len(ratios) else None
    verdict = "pass" if all(ok_flags) else "fail"
    if not all(ok_flags):
        worst = ok_flags.index(False)
    witness = witnesses[worst] if worst is not None else None
    return TheoremReport(
        theorem=theorem,
        instances=len(ok_flags),
        max_ratio=max_ratio,
        witness=witness,
        verdict=verdict,
        hypotheses=hypotheses,
        seed=seed,
        rows=rows,
    )


def verify_phi_inclusion(
    phi1, phi2, u=None, corpus=None, quad=None, t_grid=None, c_grid=None, rtol=None
):
    """Check norm(f; phi1, u) <= C * norm(f; phi2, u) with C from the
    precedence certificate, over every corpus member."""
    u = Constant(1.0) if u is None else u
    corpus = make_corpus() if corpus is None else corpus
    cert = _require(
        precedes(phi1, phi2, t_grid=t_grid, c_grid=c_grid),
        "no precedence certificate for the gauge pair",
    )
    rtol = _weight_rtol(u) if rtol is None else rtol
    rows, ok_flags, ratios, witnesses = [], [], [], []
    for i, f in enumerate(corpus.functions):
        lhs = luxemburg_norm(f, phi1, u, quad).value
        rhs = cert.C * luxemburg_norm(f, phi2, u, quad).value
        ratio = bounded_ratio(lhs, rhs)
        ok = bool(ineq_holds(lhs, rhs, rtol=rtol))
        rows.append({"instance": i, "lhs": lhs, "rhs": rhs, "ratio": ratio, "ok": ok})
        ok_flags.append(ok)
        ratios.append(ratio)
        witnesses.append(
            {"function": simple_function_summary(f), "lhs": lhs, "rhs": rhs, "ratio": ratio}
        )
    return _finish(
        "thm22", rows, [cert.as_dict()], corpus.seed, ok_flags, ratios, witnesses
    )


def verify_weight_inclusion(
    phi1,
    phi2,
    u1,
    u2,
    corpus=None,
    quad=None,
    t_grid=None,
    c_grid=None,
    dom_kwargs=None,
    rtol=None,
):
    """Check norm(f; phi1, u1) <= C1*C2 * norm(f; phi2, u2) with C1 from the
    precedence certificate and C2 from the weight-domination certificate."""
    corpus = make_corpus(box_only=True) if corpus is None else corpus
    cert1 = _require(
        precedes(phi1, phi2, t_grid=t_grid, c_grid=c_grid),
        "no precedence certificate for the gauge pair",
    )
    cert2 = _require(
        weight_dominates(u1, u2, dim=corpus.dim, **(dom_kwargs or {})),
        "no domination certificate for the weight pair",
    )
    if not all(f.box_only for f in corpus.functions) and (
        constant_value(u1) is None or constant_value(u2) is None
    ):
        raise ValueError("non-constant weights need a box-only corpus")
    C = cert1.C * cert2.C
    rtol = _weight_rtol(u1, u2) if rtol is None else rtol
    rows, ok_flags, ratios, witnesses = [], [], [], []
    for i, f in enumerate(corpus.functions):
        lhs = luxemburg_norm(f, phi1, u1, quad).value
        rhs = C * luxemburg_norm(f, phi2, u2, quad).value
        ratio = bounded_ratio(lhs, rhs)
        ok = bool(ineq_holds(lhs, rhs, rtol=rtol))
        rows.append({"instance": i, "lhs": lhs, "rhs": rhs, "ratio": ratio, "ok": ok})
        ok_flags.append(ok)
        ratios.append(ratio)
        witnesses.append(
            {"function": simple_function_summary(f), "lhs": lhs, "rhs": rhs, "ratio": ratio}
        )
    return _finish(
        "thm25",
        rows,
        [cert1.as_dict(), cert2.as_dict()],
        corpus.seed,
        ok_flags,
        ratios,
        witnesses,
    )


def _sup_weight_on_support(u, f):
    """Sup of the (radial, nondecreasing) weight over the mirrored support."""
    best = 0.0
    for p in f.pieces:
        corner = tuple(max(abs(l), abs(h)) for l, h in p.region.bounds)
        best = max(best, u.value(corner))
    return best


def translation_bounds_check(f, phi, u, xs, quad=None, seed=42, rtol=None):
    """Check the shift bounds: norm(shift) <= u(x)*norm(f), and
    norm(shift) >= u(x) * plain_norm(f) / sup of u over the mirrored support.

    The lower bound's numerator uses the unweighted norm of f, which is what
    the submultiplicativity argument actually controls.
    """
    sub = check_submultiplicative(u, dim=f.dim, seed=seed)
    if not sub.passed:
        raise HypothesisNotEstablished("weight is not submultiplicative", evidence=sub)
    if f.is_zero:
        raise ValueError("translation bounds need a nonzero function")
    if not f.box_only:
        raise ValueError("translation bounds support box regions only")
    rtol = _weight_rtol(u) if rtol is None else rtol
    base = luxemburg_norm(f, phi, u, quad).value
    plain = luxemburg_norm(f, phi, Constant(1.0), quad).value
    sup_u = _sup_weight_on_support(u, f)
    rows, ok_flags, ratios, witnesses = [], [], [], []
    for x in xs:
        x = tuple(float(v) for v in x) if np.ndim(x) else (float(x),)
        shifted = translate(f, x)
        t_norm = luxemburg_norm(shifted, phi, u, quad).value
        ux = u.value(x)
        upper = ux * base
        lower = ux * plain / sup_u
        up_ok = bool(ineq_holds(t_norm, upper, rtol=rtol))
        low_ok = bool(ineq_holds(lower, t_norm, rtol=rtol))
        up_ratio = bounded_ratio(t_norm, upper)
        low_ratio = bounded_ratio(lower, t_norm)
        rows.append(
            {
                "x": list(x),
                "norm_shifted": t_norm,
                "upper": upper,
                "lower": lower,
                "upper_ratio": up_ratio,
                "lower_ratio": low_ratio,
                "ok": up_ok and low_ok,
            }
        )
        ok_flags.append(up_ok and low_ok)
        ratios.append(max(up_ratio, low_ratio))
        witnesses.append(
            {
                "x": list(x),
                "norm_shifted": t_norm,
                "upper": upper,
                "lower": lower,
                "upper_ratio": up_ratio,
                "lower_ratio": low_ratio,
            }
        )
    return _finish("lemma24", rows, [sub.as_dict()], seed, ok_flags, ratios, witnesses)


def _sampled_weight_bound(small, big, pts, label):
    lhs = small(pts)
    rhs = big(pts)
    ok = ineq_holds(lhs, rhs)
    ratios = bounded_ratio(lhs, rhs)
    i = int(np.nanargmax(ratios))
    return {
        "kind": "sampled_weight_bound",
        "bound": label,
        "passed": bool(np.all(ok)),
        "samples": int(pts.shape[0]),
        "worst_ratio": float(ratios[i]),
        "witness": None if bool(np.all(ok)) else [float(v) for v in pts[i]],
    }


HOLDER_CONSTANT = 2.0


def holder_check(
    f1,
    f2,
    phi1,
    phi2,
    phi3,
    u1=None,
    u2=None,
    u3=None,
    pairs=100,
    seed=42,
    dim=1,
    support_radius=3.0,
    quad=None,
    t_grid=None,
    rtol=None,
):
    """Check norm(g1*g2; phi3, u3) <= 2 * norm(g1; phi1, u1) * norm(g2; phi2, u2)
    on the supplied pair plus randomized box-function pairs.

    max_ratio records the sharpness lhs / (norm1 * norm2), which must stay
    at or below the constant 2.
    """
    u1 = Constant(1.0) if u1 is None else u1
    u2 = Constant(1.0) if u2 is None else u2
    u3 = Constant(1.0) if u3 is None else u3
    hyp1 = young.inverse_product_dominated(phi1, phi2, phi3, t_grid=t_grid)
    if not hyp1.passed:
        raise HypothesisNotEstablished(
            "inverse-product bound fails for the gauge triple", evidence=hyp1
        )
    rng = np.random.default_rng(seed + 13)
    pts = _sample_points(rng, dim, 2000, support_radius)
    hyp2 = _sampled_weight_bound(
        u3.value, lambda q: u1.value(q) * u2.value(q), pts, "u3 <= u1*u2"
    )
    if not hyp2["passed"]:
        raise HypothesisNotEstablished(
            "weight product bound fails on samples", evidence=hyp2
        )

    left = make_corpus(seed=seed, dim=dim, size=pairs, box_only=True, support_radius=support_radius)
    right = make_corpus(
        seed=seed + 1000, dim=dim, size=pairs, box_only=True, support_radius=support_radius
    )
    instances = [(f1, f2)] + list(zip(left.functions, right.functions))
    rtol = _weight_rtol(u1, u2, u3) if rtol is None else rtol
    rows, ok_flags, ratios, witnesses = [], [], [], []
    for i, (g1, g2) in enumerate(instances):
        prod = pointwise_product(g1, g2)
        lhs = luxemburg_norm(prod, phi3, u3, quad).value
        n1 = luxemburg_norm(g1, phi1, u1, quad).value
        n2 = luxemburg_norm(g2, phi2, u2, quad).value
        degenerate = n1 * n2 == 0.0
        if degenerate:
            ok = lhs == 0.0
            sharp = 0.0
        else:
            sharp = lhs / (n1 * n2)
            ok = bool(ineq_holds(sharp, HOLDER_CONSTANT, rtol=rtol))
        rows.append(
            {
                "instance": i,
                "lhs": lhs,
                "norm1": n1,
                "norm2": n2,
                "sharpness": sharp,
                "degenerate": degenerate,
                "ok": ok,
            }
        )
        ok_flags.append(ok)
        ratios.append(sharp)
        witnesses.append(
            {
                "lhs": lhs,
                "norm1": n1,
                "norm2": n2,
                "sharpness": sharp,
                "degenerate": degenerate,
                "functions": [simple_function_summary(g1), simple_function_summary(g2)],
            }
        )
    return _finish(
        "holder", rows, [hyp1.as_dict(), hyp2], seed, ok_flags, ratios, witnesses
    )


def _sample_in_ball(rng, ball, count):
    lo = np.array([c - ball.radius for c in ball.center])
    hi = np.array([c + ball.radius for c in ball.center])
    out = []
    need = count
    while need > 0:
        batch = rng.uniform(lo, hi, size=(max(2 * need, 64), ball.dim))
        inside = batch[ball.contains(batch)]
        out.append(inside[:need])
        need -= len(inside[:need])
    return np.vstack(out)


def ball_embedding_check(
    p1,
    p2,
    u1=None,
    u2=None,
    X=None,
    corpus=None,
    size=50,
    seed=42,
    quad=None,
    include_indicator=True,
    rtol=None,
):
    """Check norm(f; p2, u2) <= 2*|X|**((p1-p2)/(p1*p2)) * norm(f; p1, u1) for
    functions supported inside the ball X, given u1 <= u2 sampled on X."""
    if not (1.0 <= p2 < p1):
        raise ValueError("need 1 <= p2 < p1")
    X = Ball((0.0,), 0.5) if X is None else X
    rng = np.random.default_rng(seed + 7)
    pts = _sample_in_ball(rng, X, 2000)
    hyp = _sampled_weight_bound(
        (Constant(1.0) if u1 is None else u1).value,
        (Constant(1.0) if u2 is None else u2).value,
        pts,
        "u1 <= u2 on X",
    )
    if not hyp["passed"]:
        raise HypothesisNotEstablished("weight bound fails on the ball", evidence=hyp)
    u1 = Constant(1.0) if u1 is None else u1
    u2 = Constant(1.0) if u2 is None else u2
    constant = 2.0 * X.volume ** ((p1 - p2) / (p1 * p2))
    if corpus is None:
        half = 0.999 * X.radius / math.sqrt(X.dim)
        corpus = make_corpus(
            seed=seed, dim=X.dim, size=size, support_radius=half, box_only=True, center=X.center
        )
    phi1, phi2 = Power(p1), Power(p2)
    members = list(corpus.functions)
    if include_indicator and constant_value(u1) is not None and constant_value(u2) is not None:
        members.append(indicator(X))
    rtol = _weight_rtol(u1, u2) if rtol is None else rtol
    rows, ok_flags, ratios, witnesses = [], [], [], []
    for i, f in enumerate(members):
        lhs = luxemburg_norm(f, phi2, u2, quad).value
        rhs = constant * luxemburg_norm(f, phi1, u1, quad).value
        ratio = bounded_ratio(lhs, rhs)
        ok = bool(ineq_holds(lhs, rhs, rtol=rtol))
        rows.append(
            {"instance": i, "lhs": lhs, "rhs": rhs, "ratio": ratio, "constant": constant, "ok": ok}
        )
        ok_flags.append(ok)
        ratios.append(ratio)
        witnesses.append(
            {
                "function": simple_function_summary(f),
                "lhs": lhs,
                "rhs": rhs,
                "ratio": ratio,
                "constant": constant,
            }
        )
    return _finish("cor33", rows, [hyp], corpus.seed, ok_flags, ratios, witnesses)


def no_inclusion_falsifier(p1, p2, threshold, r_grid=None, dim=1):
    """Find a ball radius where the indicator-norm ratio between the two
    exponents exceeds the threshold, refuting any global embedding constant.

    The ratio equals volume**(1/p1 - 1/p2); it blows up for large balls when
    the exponent is positive and for small balls when it is negative.
    """
    if p1 == p2:
        raise ValueError("exponents must differ; the ratio is identically 1")
    if threshold <= 0.0:
        raise ValueError("threshold must be positive")
    e = 1.0 / p1 - 1.0 / p2
    grid = np.logspace(-14.0, 14.0, 400) if r_grid is None else np.asarray(r_grid, float)
    if grid.size == 0:
        raise ValueError("radius grid must be nonempty")
    grid = np.sort(grid)
    if e < 0.0:
        grid = grid[::-1]
    for r in grid:
        vol = ball_volume(dim, float(r))
        with np.errstate(over="ignore"):
            ratio = vol**e
        if ratio > threshold:
            return Counterexample(
                witness=float(r),
                lhs=float(vol ** (1.0 / p1)),
                rhs=float(threshold * vol ** (1.0 / p2)),
                ratio=float(ratio),
                trend="r->inf" if e > 0.0 else "r->0",
                detail=f"indicator-norm ratio exceeds {threshold:g}",
            )
    raise ValueError("no witness radius on the grid; widen it or lower the threshold")


def strong_to_weak_check(phi1, phi2, u1, u2, corpus=None, t_grid=None, c_grid=None, rtol=None):
    """Check the full inclusion diagram on a constant-weight corpus:
    weak <= strong for both gauge/weight pairs, both horizontal arrows with
    the combined constant, and the diagonal."""
    if constant_value(u1) is None or constant_value(u2) is None:
        raise ValueError("diagram checks support constant weights only")
    corpus = make_corpus() if corpus is None else corpus
    cert1 = _require(
        precedes(phi1, phi2, t_grid=t_grid, c_grid=c_grid),
        "no precedence certificate for the gauge pair",
    )
    cert2 = _require(
        weight_dominates(u1, u2, dim=corpus.dim),
        "no domination certificate for the weight pair",
    )
    C = cert1.C * cert2.C
    rtol = EXACT_RTOL if rtol is None else rtol
    rows, ok_flags, ratios, witnesses = [], [], [], []
    for i, f in enumerate(corpus.functions):
        s1 = luxemburg_norm(f, phi1, u1).value
        s2 = luxemburg_norm(f, phi2, u2).value
        w1 = weak_luxemburg_norm(f, phi1, u1).value
        w2 = weak_luxemburg_norm(f, phi2, u2).value
        checks = {
            "weak_vs_strong_1": (w1, s1),
            "weak_vs_strong_2": (w2, s2),
            "strong_arrow": (s1, C * s2),
            "weak_arrow": (w1, C * w2),
            "diagonal": (w1, C * s2),
        }
        for arrow, (lhs, rhs) in checks.items():
            ratio = bounded_ratio(lhs, rhs)
            ok = bool(ineq_holds(lhs, rhs, rtol=rtol))
            rows.append(
                {"instance": i, "arrow": arrow, "lhs": lhs, "rhs": rhs, "ratio": ratio, "ok": ok}
            )
            ok_flags.append(ok)
            ratios.append(ratio)
            witnesses.append(
                {
                    "function": simple_function_summary(f),
                    "arrow": arrow,
                    "lhs": lhs,
                    "rhs": rhs,
                    "ratio": ratio,
                }
            )
    return _finish(
        "diagram",
        rows,
        [cert1.as_dict(), cert2.as_dict()],
        corpus.seed,
        ok_flags,
        ratios,
        witnesses,
    )


def char_norm_agreement_check(gauges=None, dims=(1, 2, 3), radii=(0.5, 1.0, 2.0), seed=0):
    """Bisection-computed ball-indicator norms must match the closed form
    1/inverse(1/volume) to 1e-9 relative."""
    from .young import ExpPower

    if gauges is None:
        gauges = (Power(1.0), Power(1.5), Power(2.0), Power(4.0), ExpPower(1.0))
    rows, ok_flags, ratios, witnesses = [], [], [], []
    for phi in gauges:
        for n in dims:
            for r in radii:
                ball = Ball((0.0,) * n, float(r))
                closed = char_norm_closed_form(phi, ball)
                solved = luxemburg_norm(indicator(ball), phi).value
                ratio = bounded_ratio(solved, closed)
                ok = abs(ratio - 1.0) <= EXACT_RTOL
                rows.append(
                    {
                        "gauge": format_young(phi),
                        "dim": n,
                        "radius": float(r),
                        "closed_form": closed,
                        "bisection": solved,
                        "ratio": ratio,
                        "ok": ok,
                    }
                )
                ok_flags.append(ok)
                ratios.append(ratio)
                witnesses.append(rows[-1])
    return _finish("lemma21", rows, [], seed, ok_flags, ratios, witnesses)
