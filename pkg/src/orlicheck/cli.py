"""Command-line front end: norms, certificate searches, verification suites.

Exit codes: 0 pass / certificate found, 1 refuted / counterexample, 2 usage or
parse error, 3 numeric overflow, 4 hypothesis not established.
"""

from __future__ import annotations

import argparse
import configparser
import csv
import io
import json
import os
import sys
from datetime import datetime, timezone

from . import inclusion
from .domain import (
    Ball,
    Box,
    ExpNorm,
    PolyNorm,
    check_submultiplicative,
    indicator,
    weight_dominates,
)
from .errors import BracketOverflowError, HypothesisNotEstablished, ParseError
from .norms import QuadratureSpec, luxemburg_norm, weak_luxemburg_norm
from .serialize import load_simple_function, parse_weight, parse_young
from .young import Counterexample, ExpPower, Power, check_delta2, precedes

EXIT_PASS = 0
EXIT_REFUTED = 1
EXIT_USAGE = 2
EXIT_NUMERIC = 3
EXIT_HYPOTHESIS = 4

SUITES = ("lemma21", "thm22", "lemma24", "thm25", "holder", "cor33", "diagram")


def _color_allowed():
    return sys.stderr.isatty() and not os.environ.get("NO_COLOR")

def _diag(message):
    prefix = "\x1b[31merror:\x1b[0m" if _color_allowed() else "error:"
    print(f"{prefix} {message}", file=sys.stderr)


def _timestamp():
    return datetime.now(timezone.utc).isoformat()


def _jsonable(value):
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return value
    try:
        return float(value)
    except (TypeError, ValueError):
        return str(value)


def _rows_to_csv(rows):
    fields = []
    for row in rows:
        for key in row:
            if key not in fields:
                fields.append(key)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=fields)
    writer.writeheader()
    for row in rows:
        flat = {}
        for key in fields:
            v = row.get(key, "")
            if isinstance(v, (dict, list, tuple)):
                v = json.dumps(_jsonable(v), sort_keys=True)
            flat[key] = v
        writer.writerow(flat)
    return buf.getvalue()


def _emit(payload, rows, out, fmt):
    if fmt == "csv":
        text = _rows_to_csv(rows)
    else:
        text = json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


class _Config:
    """Flat key=value config with section headers; flags take priority."""

    def __init__(self, path=None):
        self._cp = configparser.ConfigParser()
        if path:
            read = self._cp.read(path)
            if not read:
                raise ParseError(f"config file not found: {path}")

    def get(self, section, key, default=None, cast=str):
        for sec in (section, "common"):
            if self._cp.has_option(sec, key):
                raw = self._cp.get(sec, key)
                if cast is bool:
                    return raw.strip().lower() in {"1", "true", "yes", "on"}
                return cast(raw)
        return default


def _pick(flag_value, cfg, section, key, default, cast=str):
    if flag_value is not None:
        return flag_value
    return cfg.get(section, key, default=default, cast=cast)


def build_parser():
    parser = argparse.ArgumentParser(
        prog="orlicheck",
        description="Weighted Orlicz-norm computation and inclusion-relation checking.",
    )
    parser.add_argument("--config", help="config file (section headers, key=value)")
    parser.add_argument("--out", help="write the report to this path instead of stdout")
    parser.add_argument("--format", choices=("json", "csv"), dest="fmt", default=None)
    sub = parser.add_subparsers(dest="command", required=True)

    p_norm = sub.add_parser("norm", help="compute a (weak) weighted norm of a function file")
    p_norm.add_argument("--phi", help="gauge expression, e.g. power(p=2,c=1)")
    p_norm.add_argument("--weight", help="weight expression, e.g. const(c=1)")
    p_norm.add_argument("--fn", help="path to a simple-function file")
    p_norm.add_argument("--weak", action="store_true", default=None)
    p_norm.add_argument("--points-per-axis", type=int, default=None)
    p_norm.add_argument("--depth", type=int, default=None)

    p_check = sub.add_parser("check", help="search a certificate or counterexample")
    p_check.add_argument("kind", choices=("precedes", "delta2", "dominates", "submult"))
    p_check.add_argument("--phi")
    p_check.add_argument("--phi1")
    p_check.add_argument("--phi2")
    p_check.add_argument("--u")
    p_check.add_argument("--u1")
    p_check.add_argument("--u2")
    p_check.add_argument("--t-max", type=float, default=None)
    p_check.add_argument("--grid-size", type=int, default=None)
    p_check.add_argument("--dim", type=int, default=None)
    p_check.add_argument("--samples", type=int, default=None)
    p_check.add_argument("--radius", type=float, default=None)
    p_check.add_argument("--seed", type=int, default=None)

    p_verify = sub.add_parser("verify", help="run a verification suite")
    p_verify.add_argument("suite", choices=SUITES + ("all",))
    p_verify.add_argument("--seed", type=int, default=None)
    p_verify.add_argument("--size", type=int, default=None, help="corpus size / pair count")
    p_verify.add_argument("--dim", type=int, default=None)
    p_verify.add_argument("--phi1", help="gauge override (thm22, thm25, diagram)")
    p_verify.add_argument("--phi2")
    p_verify.add_argument("--u1", help="weight override (thm25, diagram)")
    p_verify.add_argument("--u2")
    p_verify.add_argument("--rtol", type=float, default=None, help="check tolerance override")
    p_verify.add_argument("--points-per-axis", type=int, default=None)
    p_verify.add_argument("--depth", type=int, default=None)
    return parser


def _quad_from(args, cfg, section):
    points = _pick(args.points_per_axis, cfg, section, "points_per_axis", 64, int)
    depth = _pick(args.depth, cfg, section, "depth", 2, int)
    return QuadratureSpec(points_per_axis=points, depth=depth)


def cmd_norm(args, cfg):
    phi_text = _pick(args.phi, cfg, "norm", "phi", None)
    weight_text = _pick(args.weight, cfg, "norm", "weight", "const(c=1)")
    fn_path = _pick(args.fn, cfg, "norm", "fn", None)
    weak = _pick(args.weak, cfg, "norm", "weak", False, bool)
    if not phi_text:
        raise ParseError("norm needs --phi")
    if not fn_path:
        raise ParseError("norm needs --fn")
    phi = parse_young(phi_text)
    u = parse_weight(weight_text)
    if not os.path.exists(fn_path):
        raise ParseError(f"function file not found: {fn_path}")
    f = load_simple_function(fn_path)
    quad = _quad_from(args, cfg, "norm")
    result = weak_luxemburg_norm(f, phi, u) if weak else luxemburg_norm(f, phi, u, quad)
    payload = {
        "command": "norm",
        "phi": phi_text,
        "weight": weight_text,
        "fn": fn_path,
        "weak": bool(weak),
        "timestamp": _timestamp(),
        "result": result.as_dict(),
    }
    row = {"phi": phi_text, "weight": weight_text, "weak": weak, **result.as_dict()}
    return payload, [row], EXIT_PASS


def cmd_check(args, cfg):
    kind = args.kind
    seed = _pick(args.seed, cfg, "check", "seed", 42, int)
    dim = _pick(args.dim, cfg, "check", "dim", 1, int)
    samples = _pick(args.samples, cfg, "check", "samples", 20000, int)
    radius = _pick(args.radius, cfg, "check", "radius", 50.0, float)
    params = {}
    if kind == "precedes":
        phi1_text = _pick(args.phi1, cfg, "check", "phi1", None)
        phi2_text = _pick(args.phi2, cfg, "check", "phi2", None)
        if not (phi1_text and phi2_text):
            raise ParseError("check precedes needs --phi1 and --phi2")
        outcome = precedes(parse_young(phi1_text), parse_young(phi2_text))
        params = {"phi1": phi1_text, "phi2": phi2_text}
    elif kind == "delta2":
        phi_text = _pick(args.phi, cfg, "check", "phi", None)
        if not phi_text:
            raise ParseError("check delta2 needs --phi")
        t_max = _pick(args.t_max, cfg, "check", "t_max", 1e6, float)
        grid_size = _pick(args.grid_size, cfg, "check", "grid_size", 400, int)
        outcome = check_delta2(parse_young(phi_text), t_max=t_max, grid_size=grid_size)
        params = {"phi": phi_text, "t_max": t_max, "grid_size": grid_size}
    elif kind == "dominates":
        u1_text = _pick(args.u1, cfg, "check", "u1", None)
        u2_text = _pick(args.u2, cfg, "check", "u2", None)
        if not (u1_text and u2_text):
            raise ParseError("check dominates needs --u1 and --u2")
        outcome = weight_dominates(
            parse_weight(u1_text), parse_weight(u2_text),
            dim=dim, sample_count=samples, radius=radius, seed=seed,
        )
        params = {"u1": u1_text, "u2": u2_text, "dim": dim, "samples": samples,
                  "radius": radius, "seed": seed}
    else:  # submult
        u_text = _pick(args.u, cfg, "check", "u", None)
        if not u_text:
            raise ParseError("check submult needs --u")
        outcome = check_submultiplicative(
            parse_weight(u_text), dim=dim, sample_count=samples, radius=radius, seed=seed
        )
        params = {"u": u_text, "dim": dim, "samples": samples, "radius": radius, "seed": seed}

    refuted = isinstance(outcome, Counterexample) or not getattr(outcome, "passed", True)
    result = outcome.as_dict()
    payload = {
        "command": "check",
        "kind": kind,
        "params": params,
        "timestamp": _timestamp(),
        "outcome": "counterexample" if refuted else "certificate",
        "result": result,
    }
    return payload, [result], EXIT_REFUTED if refuted else EXIT_PASS


def _suite_runners(args, cfg):
    seed = _pick(args.seed, cfg, "verify", "seed", 42, int)
    size = _pick(args.size, cfg, "verify", "size", None, int)
    dim = _pick(args.dim, cfg, "verify", "dim", 1, int)
    rtol = _pick(args.rtol, cfg, "verify", "rtol", None, float)
    quad = _quad_from(args, cfg, "verify")
    phi1 = parse_young(_pick(args.phi1, cfg, "verify", "phi1", "power(p=1,c=1)"))
    phi2 = parse_young(_pick(args.phi2, cfg, "verify", "phi2", "exppower(p=1)"))
    u1 = parse_weight(_pick(args.u1, cfg, "verify", "u1", "const(c=1)"))
    u2 = parse_weight(_pick(args.u2, cfg, "verify", "u2", "const(c=2)"))

    def corpus(**kw):
        return inclusion.make_corpus(seed=seed, dim=dim, size=size or 50, **kw)

    unit_box = indicator(Box(((0.0, 1.0),) * dim))

    def run_lemma21():
        return inclusion.char_norm_agreement_check(seed=seed)

    def run_thm22():
        return inclusion.verify_phi_inclusion(phi1, phi2, u1, corpus(), quad=quad, rtol=rtol)

    def run_lemma24():
        return inclusion.translation_bounds_check(
            unit_box, Power(1.0), ExpNorm(1.0), [0.0, 0.5, 1.0, 2.0, 5.0],
            quad=quad, seed=seed, rtol=rtol,
        )

    def run_thm25():
        return inclusion.verify_weight_inclusion(
            Power(2.0), Power(2.0), PolyNorm(1.0), ExpNorm(1.0),
            corpus(box_only=True), quad=quad, rtol=rtol,
        )

    def run_holder():
        return inclusion.holder_check(
            unit_box, unit_box, Power(2.0), Power(2.0), Power(1.0),
            pairs=size or 100, seed=seed, dim=dim, quad=quad, rtol=rtol,
        )

    def run_cor33():
        return inclusion.ball_embedding_check(
            2.0, 1.0, X=Ball((0.0,) * dim, 0.5), size=size or 50, seed=seed,
            quad=quad, rtol=rtol,
        )

    def run_diagram():
        return inclusion.strong_to_weak_check(phi1, phi2, u1, u2, corpus(), rtol=rtol)

    return seed, {
        "lemma21": run_lemma21,
        "thm22": run_thm22,
        "lemma24": run_lemma24,
        "thm25": run_thm25,
        "holder": run_holder,
        "cor33": run_cor33,
        "diagram": run_diagram,
    }


def cmd_verify(args, cfg):
    seed, runners = _suite_runners(args, cfg)
    names = SUITES if args.suite == "all" else (args.suite,)
    reports = []
    incomplete = False
    try:
        for name in names:
            reports.append(runners[name]())
    except KeyboardInterrupt:
        incomplete = True
    verdict = "pass" if reports and all(r.passed for r in reports) else "fail"
    if incomplete:
        verdict = "incomplete"
    payload = {
        "command": "verify",
        "suite": args.suite,
        "seed": seed,
        "timestamp": _timestamp(),
        "verdict": verdict,
        "reports": [r.as_dict() for r in reports],
    }
    if incomplete:
        payload["incomplete"] = True
    rows = []
    for r in reports:
        for row in r.rows:
            rows.append({"theorem": r.theorem, **row})
    if incomplete:
        return payload, rows, 130
    return payload, rows, EXIT_PASS if verdict == "pass" else EXIT_REFUTED


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _Config(args.config)
        if args.command == "norm":
            payload, rows, code = cmd_norm(args, cfg)
        elif args.command == "check":
            payload, rows, code = cmd_check(args, cfg)
        else:
            payload, rows, code = cmd_verify(args, cfg)
    except ParseError as exc:
        _diag(str(exc))
        return EXIT_USAGE
    except BracketOverflowError as exc:
        _diag(f"numeric overflow: {exc}")
        return EXIT_NUMERIC
    except HypothesisNotEstablished as exc:
        evidence = exc.evidence
        if evidence is not None and hasattr(evidence, "as_dict"):
            evidence = evidence.as_dict()
        payload = {
            "command": args.command,
            "error": "hypothesis_not_established",
            "message": str(exc),
            "evidence": _jsonable(evidence),
            "timestamp": _timestamp(),
        }
        _emit(payload, [], args.out, _pick(args.fmt, cfg, "common", "format", "json"))
        _diag(str(exc))
        return EXIT_HYPOTHESIS
    fmt = _pick(args.fmt, cfg, "common", "format", "json")
    out = args.out if args.out is not None else cfg.get("common", "out")
    _emit(payload, rows, out, fmt)
    return code


if __name__ == "__main__":
    sys.exit(main())
