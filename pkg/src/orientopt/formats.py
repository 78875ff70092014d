"""Parsing and serialization: graph files, objective specs, report values.

Graph text format: a header line ``n m [weighted] [loops]`` followed by
m lines ``u v [w]`` with 0-based endpoints; weights are decimals or
``p/q``.  ``#`` starts a comment.  A JSON document with fields ``n``,
``edges`` (``[u, v]`` or ``[u, v, w]`` triples) and optional
``allow_loops`` is accepted interchangeably.

Objective specs are JSON objects keyed by ``kind`` — cost shapes like
``{"kind": "square"}`` (shorthand for a shared cost sum), ``phi_sum``
with ``shared`` or ``per_vertex`` costs plus optional ``f``/``g`` degree
bounds, or the key objectives ``dec_min``, ``inc_max``, ``inc_min``,
``dec_max``, ``rho_delta_sum``, ``max_weighted_indeg``,
``forbidden_subpaths``.  A bare kind name is also accepted.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction

from .graph import Multigraph, as_fraction, build_graph
from . import objectives as obj


class FormatError(ValueError):
    """Parse failure carrying a 1-based line/column position."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_PHI_KINDS = ("square", "cube", "binom2", "abs_balance", "exp_base",
              "neg_exp_base", "linear", "zero", "table")
_KEY_KINDS = ("dec_min", "inc_max", "inc_min", "dec_max", "rho_delta_sum",
              "max_weighted_indeg", "forbidden_subpaths")


def _tokens(line: str):
    return [(m.start() + 1, m.group()) for m in re.finditer(r"\S+", line)]


def _rational(token: str, lineno: int, col: int) -> Fraction:
    try:
        return as_fraction(token)
    except (ValueError, ZeroDivisionError):
        raise FormatError(f"bad number {token!r}", lineno, col) from None


def _int(token: str, lineno: int, col: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise FormatError(f"expected an integer, got {token!r}", lineno, col) from None


def parse_graph_text(text: str) -> Multigraph:
    lines = text.splitlines()
    rows = []
    for idx, raw in enumerate(lines, start=1):
        body = raw.split("#", 1)[0]
        toks = _tokens(body)
        if toks:
            rows.append((idx, toks))
    if not rows:
        raise FormatError("empty graph file", len(lines) or 1, 1)
    lineno, header = rows[0]
    if len(header) < 2:
        raise FormatError("header needs `n m`", lineno, header[0][0])
    n = _int(header[0][1], lineno, header[0][0])
    m = _int(header[1][1], lineno, header[1][0])
    weighted = False
    allow_loops = False
    for col, tok in header[2:]:
        if tok == "weighted":
            weighted = True
        elif tok == "loops":
            allow_loops = True
        else:
            raise FormatError(f"unknown header flag {tok!r}", lineno, col)
    if len(rows) - 1 != m:
        where = rows[m + 1][0] if len(rows) - 1 > m else lineno
        raise FormatError(
            f"header promises {m} edges but the file has {len(rows) - 1}", where, 1
        )
    edges = []
    weights = [] if weighted else None
    for lineno, toks in rows[1:]:
        want = 3 if weighted else 2
        if len(toks) != want:
            col = toks[want][0] if len(toks) > want else toks[-1][0]
            raise FormatError(
                f"edge line needs {want} fields, got {len(toks)}", lineno, col
            )
        u = _int(toks[0][1], lineno, toks[0][0])
        v = _int(toks[1][1], lineno, toks[1][0])
        if not (0 <= u < n and 0 <= v < n):
            col = toks[0][0] if not 0 <= u < n else toks[1][0]
            raise FormatError(f"endpoint out of range for n={n}", lineno, col)
        if u == v and not allow_loops:
            raise FormatError(
                "loop found but the header has no `loops` flag", lineno, toks[0][0]
            )
        edges.append((u, v))
        if weighted:
            w = _rational(toks[2][1], lineno, toks[2][0])
            if w < 0:
                raise FormatError("negative edge weight", lineno, toks[2][0])
            weights.append(w)
    return build_graph(n, edges, weights, allow_loops=allow_loops)


def parse_graph_json(text: str) -> Multigraph:
    doc = _load_json(text)
    if not isinstance(doc, dict):
        raise FormatError("expected a JSON object")
    for field in ("n", "edges"):
        if field not in doc:
            raise FormatError(f"missing field {field!r}")
    n = doc["n"]
    if not isinstance(n, int) or isinstance(n, bool) or n < 0:
        raise FormatError("`n` must be a non-negative integer")
    allow_loops = doc.get("allow_loops", False)
    if not isinstance(allow_loops, bool):
        raise FormatError("`allow_loops` must be a boolean")
    edges = []
    weights = []
    arity = None
    for i, e in enumerate(doc["edges"]):
        if not isinstance(e, list) or len(e) not in (2, 3):
            raise FormatError(f"edge {i} must be [u, v] or [u, v, w]")
        if arity is None:
            arity = len(e)
        elif len(e) != arity:
            raise FormatError("either all edges carry weights or none do")
        u, v = e[0], e[1]
        if not all(isinstance(x, int) and not isinstance(x, bool) for x in (u, v)):
            raise FormatError(f"edge {i} endpoints must be integers")
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(f"edge {i} endpoint out of range for n={n}")
        if u == v and not allow_loops:
            raise FormatError(f"edge {i} is a loop but `allow_loops` is false")
        edges.append((u, v))
        if len(e) == 3:
            weights.append(_json_rational(e[2], f"edge {i} weight"))
    return build_graph(
        n, edges, weights if arity == 3 else None, allow_loops=allow_loops
    )


def parse_graph(text: str) -> Multigraph:
    """Accept either the text or the JSON graph format."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return parse_graph_json(text)
    return parse_graph_text(text)


def _load_json(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(e.msg, e.lineno, e.colno) from None


def _json_rational(value, what: str) -> Fraction:
    if isinstance(value, bool):
        raise FormatError(f"{what} must be a number or 'p/q' string")
    if isinstance(value, (int, float, str)):
        try:
            return as_fraction(value)
        except (ValueError, ZeroDivisionError):
            pass
    raise FormatError(f"{what} must be a number or 'p/q' string")


# ---------------------------------------------------------------------------
# Objective specs.


def _parse_phi(doc, what: str) -> obj.PhiSpec:
    if isinstance(doc, str):
        doc = {"kind": doc}
    if not isinstance(doc, dict) or "kind" not in doc:
        raise FormatError(f"{what} must name a cost kind")
    kind = doc["kind"]
    if kind not in _PHI_KINDS:
        raise FormatError(f"{what}: unknown cost kind {kind!r}")
    if kind == "square":
        return obj.square()
    if kind == "cube":
        return obj.cube()
    if kind == "binom2":
        return obj.binom2()
    if kind == "zero":
        return obj.zero()
    if kind == "abs_balance":
        d = doc.get("d")
        if d is not None and (not isinstance(d, int) or d < 0):
            raise FormatError(f"{what}: `d` must be a non-negative integer")
        return obj.abs_balance(d)
    if kind in ("exp_base", "neg_exp_base"):
        b = doc.get("base")
        if not isinstance(b, int) or b < 2:
            raise FormatError(f"{what}: `base` must be an integer >= 2")
        return obj.exp_base(b) if kind == "exp_base" else obj.neg_exp_base(b)
    if kind == "linear":
        a = _json_rational(doc.get("a", 0), f"{what}: `a`")
        b = _json_rational(doc.get("b", 0), f"{what}: `b`")
        return obj.linear(a, b)
    values = doc.get("values")
    if not isinstance(values, list) or not values:
        raise FormatError(f"{what}: `table` needs a non-empty `values` list")
    return obj.table([_json_rational(x, f"{what}: values[{i}]") for i, x in enumerate(values)])


def _parse_bound(value, what: str):
    if value is None:
        return None
    if isinstance(value, int) and not isinstance(value, bool):
        return value
    if isinstance(value, list):
        out = []
        for i, x in enumerate(value):
            if not isinstance(x, int) or isinstance(x, bool):
                raise FormatError(f"{what}[{i}] must be an integer")
            out.append(x)
        return tuple(out)
    raise FormatError(f"{what} must be an integer or a per-vertex list")


def parse_objective(text: str):
    """Objective from a JSON spec or a bare kind name."""
    stripped = text.strip()
    doc = _load_json(stripped) if stripped.startswith("{") else {"kind": stripped}
    if not isinstance(doc, dict) or "kind" not in doc:
        raise FormatError("objective spec must have a `kind`")
    kind = doc["kind"]
    if kind in _KEY_KINDS:
        return {
            "dec_min": obj.DecMin,
            "inc_max": obj.IncMax,
            "inc_min": obj.IncMin,
            "dec_max": obj.DecMax,
            "rho_delta_sum": obj.RhoDeltaSum,
            "max_weighted_indeg": obj.MaxWeightedIndeg,
            "forbidden_subpaths": obj.ForbiddenSubpaths,
        }[kind]()
    if kind in _PHI_KINDS:
        # a bare cost shape means: minimize its sum over all vertices
        return obj.PhiSum(shared=_parse_phi(doc, "objective"))
    if kind != "phi_sum":
        raise FormatError(f"unknown objective kind {kind!r}")
    shared = doc.get("shared")
    per_vertex = doc.get("per_vertex")
    if (shared is None) == (per_vertex is None):
        raise FormatError("phi_sum needs exactly one of `shared` / `per_vertex`")
    f = _parse_bound(doc.get("f"), "`f`")
    g = _parse_bound(doc.get("g"), "`g`")
    if per_vertex is not None:
        if not isinstance(per_vertex, list):
            raise FormatError("`per_vertex` must be a list of cost specs")
        specs = []
        for i, p in enumerate(per_vertex):
            spec = _parse_phi(p, f"per_vertex[{i}]")
            if isinstance(p, dict) and ("f" in p or "g" in p):
                # bounds written inline on one entry lift just that vertex
                pf = _parse_bound(p.get("f"), f"per_vertex[{i}].f")
                pg = _parse_bound(p.get("g"), f"per_vertex[{i}].g")
                if isinstance(pf, tuple) or isinstance(pg, tuple):
                    raise FormatError(f"per_vertex[{i}] bounds must be plain integers")
                try:
                    spec = obj.LiftedPhi(spec, pf, pg)
                except ValueError as e:
                    raise FormatError(f"per_vertex[{i}]: {e}") from None
            specs.append(spec)
        return obj.PhiSum(per_vertex=tuple(specs), f=f, g=g)
    return obj.PhiSum(shared=_parse_phi(shared, "`shared`"), f=f, g=g)


# ---------------------------------------------------------------------------
# Serialization.


def rational_to_json(x):
    """Exact value for a report: int when integral, else ``"p/q"``."""
    x = Fraction(x)
    if x.denominator == 1:
        return int(x)
    return f"{x.numerator}/{x.denominator}"


def key_to_json(key):
    if isinstance(key, obj.LiftedCost):
        return {"penalty": key.penalty, "base": rational_to_json(key.base)}
    if isinstance(key, tuple):
        return [int(z) for z in key]
    return rational_to_json(key)


def phi_to_json(spec) -> dict:
    if isinstance(spec, obj.LiftedPhi):
        raise ValueError("serialize the enclosing phi_sum instead")
    doc = {"kind": spec.kind}
    if spec.kind == "abs_balance" and spec.params[0] is not None:
        doc["d"] = spec.params[0]
    elif spec.kind in ("exp_base", "neg_exp_base"):
        doc["base"] = spec.params[0]
    elif spec.kind == "linear":
        doc["a"] = rational_to_json(spec.params[0])
        doc["b"] = rational_to_json(spec.params[1])
    elif spec.kind == "table":
        doc["values"] = [rational_to_json(x) for x in spec.params]
    return doc


def objective_to_json(objective) -> dict:
    if not isinstance(objective, obj.PhiSum):
        return {"kind": objective.kind}
    doc: dict = {"kind": "phi_sum"}
    if objective.per_vertex is not None:
        per = []
        for entry in objective.per_vertex:
            if isinstance(entry, obj.LiftedPhi):
                e = phi_to_json(entry.spec)
                if entry.f is not None:
                    e["f"] = entry.f
                if entry.g is not None:
                    e["g"] = entry.g
                per.append(e)
            else:
                per.append(phi_to_json(entry))
        doc["per_vertex"] = per
    else:
        doc["shared"] = phi_to_json(objective.shared)
    for name, bound in (("f", objective.f), ("g", objective.g)):
        if bound is not None:
            doc[name] = list(bound) if not isinstance(bound, int) else bound
    return doc


def graph_to_text(graph: Multigraph) -> str:
    head = [str(graph.n), str(graph.m)]
    if graph.weights is not None:
        head.append("weighted")
    if graph.allow_loops:
        head.append("loops")
    lines = [" ".join(head)]
    for j, (u, v) in enumerate(graph.edges):
        row = [str(u), str(v)]
        if graph.weights is not None:
            w = graph.weights[j]
            row.append(str(w.numerator) if w.denominator == 1 else f"{w.numerator}/{w.denominator}")
        lines.append(" ".join(row))
    return "\n".join(lines) + "\n"


def graph_to_json(graph: Multigraph) -> dict:
    if graph.weights is None:
        edges = [[u, v] for u, v in graph.edges]
    else:
        edges = [
            [u, v, rational_to_json(w)] for (u, v), w in zip(graph.edges, graph.weights)
        ]
    doc: dict = {"n": graph.n, "edges": edges}
    if graph.allow_loops:
        doc["allow_loops"] = True
    return doc
