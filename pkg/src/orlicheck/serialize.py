"""Textual forms used by the CLI and config files.

Gauge grammar:      power(p=2,c=1) | exppower(p=1) | sum(1*power(p=2,c=1),...)
                    | pwl(t=[0,1,2],s=[0.5,2])
Weight grammar:     const(c=1) | expnorm(a=1) | polynorm(a=2) | prod(w1,w2,...)
Function files:     one `piece` record per line after a `dim` header, e.g.

    dim 2
    piece 1.0 box 0.0 1.0 0.0 1.0
    piece -2.5 ball 0.75 0.0 3.0

Printing always round-trips to an equal value; byte-level stability is not
promised.
"""

from __future__ import annotations

from .domain import Ball, Box, Constant, ExpNorm, Piece, PolyNorm, Product, SimpleFunction, Weight
from .errors import ParseError
from .young import ExpPower, PiecewiseLinear, Power, Sum, YoungFunction


def _split_call(text, what):
    text = text.strip()
    if not text.endswith(")") or "(" not in text:
        raise ParseError(f"malformed {what}: {text!r}")
    head, _, rest = text.partition("(")
    return head.strip().lower(), rest[:-1]


def _split_args(body):
    """Split on top-level commas."""
    parts, depth, cur = [], 0, []
    for ch in body:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(cur))
            cur = []
        else:
            cur.append(ch)
    if cur or parts:
        parts.append("".join(cur))
    return [p.strip() for p in parts if p.strip()]


def _kwargs(args, what):
    out = {}
    for a in args:
        if "=" not in a:
            raise ParseError(f"expected key=value in {what}: {a!r}")
        k, _, v = a.partition("=")
        out[k.strip().lower()] = v.strip()
    return out


def _float(text, what):
    try:
        return float(text)
    except ValueError as exc:
        raise ParseError(f"bad number in {what}: {text!r}") from exc


def _float_list(text, what):
    text = text.strip()
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError(f"expected [..] list in {what}: {text!r}")
    items = _split_args(text[1:-1])
    return tuple(_float(v, what) for v in items)


def parse_young(text):
    """Parse a gauge expression."""
    name, body = _split_call(text, "gauge expression")
    args = _split_args(body)
    if name == "power":
        kw = _kwargs(args, "power")
        return Power(p=_float(kw["p"], "power"), c=_float(kw.get("c", "1"), "power"))
    if name == "exppower":
        kw = _kwargs(args, "exppower")
        return ExpPower(p=_float(kw["p"], "exppower"))
    if name == "sum":
        terms = []
        for a in args:
            coef, star, rest = a.partition("*")
            if not star:
                raise ParseError(f"sum terms look like coef*gauge: {a!r}")
            terms.append((_float(coef, "sum"), parse_young(rest)))
        return Sum(tuple(terms))
    if name == "pwl":
        kw = _kwargs(args, "pwl")
        return PiecewiseLinear(_float_list(kw["t"], "pwl"), _float_list(kw["s"], "pwl"))
    raise ParseError(f"unknown gauge {name!r}")


def format_young(phi):
    if isinstance(phi, Power):
        return f"power(p={phi.p!r},c={phi.c!r})"
    if isinstance(phi, ExpPower):
        return f"exppower(p={phi.p!r})"
    if isinstance(phi, Sum):
        inner = ",".join(f"{a!r}*{format_young(g)}" for a, g in phi.terms)
        return f"sum({inner})"
    if isinstance(phi, PiecewiseLinear):
        ts = ",".join(repr(t) for t in phi.breakpoints)
        ss = ",".join(repr(s) for s in phi.slopes)
        return f"pwl(t=[{ts}],s=[{ss}])"
    raise TypeError(f"not a known gauge: {phi!r}")


def parse_weight(text):
    """Parse a weight expression."""
    name, body = _split_call(text, "weight expression")
    args = _split_args(body)
    if name == "const":
        kw = _kwargs(args, "const")
        return Constant(c=_float(kw["c"], "const"))
    if name == "expnorm":
        kw = _kwargs(args, "expnorm")
        return ExpNorm(a=_float(kw["a"], "expnorm"))
    if name == "polynorm":
        kw = _kwargs(args, "polynorm")
        return PolyNorm(a=_float(kw["a"], "polynorm"))
    if name == "prod":
        return Product(tuple(parse_weight(a) for a in args))
    raise ParseError(f"unknown weight {name!r}")


def format_weight(u):
    if isinstance(u, Constant):
        return f"const(c={u.c!r})"
    if isinstance(u, ExpNorm):
        return f"expnorm(a={u.a!r})"
    if isinstance(u, PolyNorm):
        return f"polynorm(a={u.a!r})"
    if isinstance(u, Product):
        return "prod(" + ",".join(format_weight(w) for w in u.factors) + ")"
    raise TypeError(f"not a known weight: {u!r}")


def parse_simple_function(text):
    dim = None
    pieces = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        fields = line.split()
        if fields[0] == "dim":
            if dim is not None:
                raise ParseError(f"line {lineno}: duplicate dim header")
            if len(fields) != 2 or fields[1] not in {"1", "2", "3"}:
                raise ParseError(f"line {lineno}: dim must be 1, 2, or 3")
            dim = int(fields[1])
            continue
        if fields[0] != "piece":
            raise ParseError(f"line {lineno}: expected 'dim' or 'piece', got {fields[0]!r}")
        if dim is None:
            raise ParseError(f"line {lineno}: 'dim <n>' header must come first")
        if len(fields) < 3:
            raise ParseError(f"line {lineno}: piece needs a value and a region kind")
        value = _float(fields[1], f"line {lineno}")
        kind = fields[2]
        params = [_float(v, f"line {lineno}") for v in fields[3:]]
        if kind == "box":
            if len(params) != 2 * dim:
                raise ParseError(f"line {lineno}: box needs {2 * dim} numbers")
            bounds = tuple((params[2 * i], params[2 * i + 1]) for i in range(dim))
            region = Box(bounds)
        elif kind == "ball":
            if len(params) != dim + 1:
                raise ParseError(f"line {lineno}: ball needs radius plus {dim} center coords")
            region = Ball(tuple(params[1:]), params[0])
        else:
            raise ParseError(f"line {lineno}: unknown region kind {kind!r}")
        pieces.append(Piece(value, region))
    if dim is None:
        raise ParseError("missing 'dim <n>' header")
    try:
        return SimpleFunction(dim, tuple(pieces))
    except (ValueError, TypeError) as exc:
        raise ParseError(str(exc)) from exc


def format_simple_function(f):
    lines = [f"dim {f.dim}"]
    for p in f.pieces:
        if isinstance(p.region, Box):
            coords = " ".join(f"{v!r}" for lh in p.region.bounds for v in lh)
            lines.append(f"piece {p.value!r} box {coords}")
        else:
            coords = " ".join(f"{v!r}" for v in p.region.center)
            lines.append(f"piece {p.value!r} ball {p.region.radius!r} {coords}")
    return "\n".join(lines) + "\n"


def load_simple_function(path):
    with open(path, "r", encoding="utf-8") as handle:
        return parse_simple_function(handle.read())


def save_simple_function(f, path):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(format_simple_function(f))


def simple_function_summary(f):
    """Compact JSON-friendly description, used in report witnesses."""
    pieces = []
    for p in f.pieces:
        if isinstance(p.region, Box):
            pieces.append(
                {"value": p.value, "box": [[l, h] for l, h in p.region.bounds]}
            )
        else:
            pieces.append(
                {"value": p.value, "ball": {"radius": p.region.radius, "center": list(p.region.center)}}
            )
    return {"dim": f.dim, "pieces": pieces}
