"""Built-in quantale families.

The unbounded quantales of the theory ([0,∞] with addition, [0,1] with a
t-norm, distance distributions under convolution) are represented by finite
sub-quantales. Each constructor states which sub-quantale it builds.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .lattice import Quantale
from .report import QuantaleStructureError

INF = float("inf")

TNORMS = {
    "min": min,
    "lukasiewicz": lambda a, b: max(Fraction(0), a + b - 1),
    "product": lambda a, b: a * b,
}


def fmt_number(x):
    if x == INF:
        return "inf"
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_number(text):
    text = str(text).strip()
    if text in ("inf", "∞", "oo"):
        return INF
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise QuantaleStructureError(f"not a number: {text!r}") from None


def _from_order(labels, le, mul, unit, **kw):
    n = len(labels)
    leq = np.array([[le(a, b) for b in range(n)] for a in range(n)], dtype=bool)
    tensor = np.array([[mul(a, b) for b in range(n)] for a in range(n)], dtype=np.int64)
    return Quantale(labels, leq, tensor, unit, **kw)


def terminal():
    """The one-element quantale."""
    return Quantale(["*"], [[True]], [[0]], 0, name="terminal", family="terminal")


def chain_frame(n):
    """The ``n``-element chain 0 < 1 < ... < n-1 with ⊗ = min and k = top."""
    if n < 1:
        raise QuantaleStructureError("chain_frame needs n >= 1")
    return _from_order([str(i) for i in range(n)], lambda a, b: a <= b, min, n - 1,
                       name=f"chain_frame({n})", family="chain_frame", params={"n": n},
                       payload=range(n))


def two_chain():
    q = chain_frame(2)
    q.name = "two_chain"
    return q


def cost_grid(points):
    """Finite points of [0,∞] plus ∞, ordered by ≥, with truncated addition.

    ``points`` must start at 0 and be closed under addition up to its largest
    value; sums beyond it become ∞. The quantale order reverses the numeric
    one, so ∞ is bottom and 0 = k is top.
    """
    pts = sorted({Fraction(p) for p in points})
    if not pts or pts[0] != 0:
        raise QuantaleStructureError("cost grid must contain 0")
    top_point = pts[-1]
    for a, b in itertools.combinations_with_replacement(pts, 2):
        if a + b <= top_point and a + b not in pts:
            raise QuantaleStructureError(
                f"cost grid not closed under addition: {fmt_number(a)} + {fmt_number(b)}")
    values = pts + [INF]
    index = {v: i for i, v in enumerate(values)}

    def add(i, j):
        s = values[i] + values[j]
        return index[s] if s <= top_point else len(pts)

    return _from_order([fmt_number(v) for v in values], lambda a, b: values[a] >= values[b],
                       add, 0, name=f"cost_grid({','.join(map(fmt_number, pts))})",
                       family="cost_grid", params={"points": [fmt_number(p) for p in pts]},
                       payload=values)


def cost_chain(m):
    """{0, 1, ..., m, ∞} under ≥ and truncated addition."""
    if m < 0:
        raise QuantaleStructureError("cost_chain needs m >= 0")
    q = cost_grid(range(m + 1))
    q.name, q.family, q.params = f"cost_chain({m})", "cost_chain", {"m": m}
    return q


def _check_values(values, tnorm):
    vals = sorted({Fraction(v) for v in values})
    if not vals or vals[0] != 0 or vals[-1] != 1:
        raise QuantaleStructureError("value grid must contain 0 and 1")
    if any(not 0 <= v <= 1 for v in vals):
        raise QuantaleStructureError("value grid must lie in [0,1]")
    try:
        t = TNORMS[tnorm]
    except KeyError:
        raise QuantaleStructureError(f"unknown t-norm {tnorm!r}") from None
    for a, b in itertools.combinations_with_replacement(vals, 2):
        if t(a, b) not in vals:
            raise QuantaleStructureError(
                f"value grid not closed under {tnorm}: {fmt_number(a)} & {fmt_number(b)}")
    return vals, t


def value_chain(values, tnorm="min"):
    """A finite subset of [0,1] (containing 0 and 1) under a t-norm, k = 1."""
    vals, t = _check_values(values, tnorm)
    index = {v: i for i, v in enumerate(vals)}
    return _from_order([fmt_number(v) for v in vals], lambda a, b: vals[a] <= vals[b],
                       lambda a, b: index[t(vals[a], vals[b])], len(vals) - 1,
                       name=f"value_chain({','.join(map(fmt_number, vals))};{tnorm})",
                       family="value_chain",
                       params={"values": [fmt_number(v) for v in vals], "tnorm": tnorm},
                       payload=vals)


def unit_grid(m, tnorm="lukasiewicz"):
    """{0, 1/m, ..., 1} under ``min`` or the Łukasiewicz t-norm.

    The product t-norm is not closed on such grids and is refused.
    """
    if m < 1:
        raise QuantaleStructureError("unit_grid needs m >= 1")
    q = value_chain([Fraction(i, m) for i in range(m + 1)], tnorm)
    q.name, q.family, q.params = f"unit_grid({m},{tnorm})", "unit_grid", {"m": m, "tnorm": tnorm}
    return q


def delta_grid(times, values, tnorm="lukasiewicz"):
    """Distance distributions that are step functions on a time grid.

    ``times`` are the finite points 0 = a0 < ... < a(n-1); with ∞ appended
    they cut (0,∞] into intervals (a(i), a(i+1)], the last being
    (a(n-1), ∞]. An element is a non-decreasing vector of values from the
    value grid, one per interval; such functions are left-continuous. Order
    is pointwise, the unit is the constant 1 vector, and

        (φ⊙ψ)[k] = ⋁{φ[i] & ψ[j] | a(i) ⊕ a(j) <= a(k)}

    with ⊕ the truncated addition of the time grid. A listed ∞ is accepted
    and dropped, since it is always present.
    """
    pts = sorted({Fraction(t) for t in times if t != INF})
    if not pts or pts[0] != 0:
        raise QuantaleStructureError("time grid must start at 0")
    for a, b in itertools.combinations_with_replacement(pts, 2):
        if a + b <= pts[-1] and a + b not in pts:
            raise QuantaleStructureError(
                f"time grid not closed under addition: {fmt_number(a)} + {fmt_number(b)}")
    vals, t = _check_values(values, tnorm)
    n = len(pts)
    vecs = [v for v in itertools.product(range(len(vals)), repeat=n)
            if all(v[i] <= v[i + 1] for i in range(n - 1))]
    vecs.sort(key=lambda v: (sum(v), v))
    index = {v: i for i, v in enumerate(vecs)}
    reach = [[(i, j) for i in range(n) for j in range(n) if pts[i] + pts[j] <= pts[k]]
             for k in range(n)]

    def conv(a, b):
        x, y = vecs[a], vecs[b]
        out = []
        for k in range(n):
            best = max(t(vals[x[i]], vals[y[j]]) for i, j in reach[k])
            out.append(vals.index(best))
        return index[tuple(out)]

    labels = ["(" + ",".join(fmt_number(vals[i]) for i in v) + ")" for v in vecs]
    payload = [tuple(vals[i] for i in v) for v in vecs]
    return _from_order(labels, lambda a, b: all(p <= q for p, q in zip(vecs[a], vecs[b])),
                       conv, index[(len(vals) - 1,) * n],
                       name=f"delta_grid({','.join(map(fmt_number, pts))};"
                            f"{','.join(map(fmt_number, vals))};{tnorm})",
                       family="delta_grid",
                       params={"times": [fmt_number(p) for p in pts],
                               "values": [fmt_number(v) for v in vals], "tnorm": tnorm},
                       payload=payload)


def downset(q):
    """Down-closed subsets of ``q`` under inclusion.

    A⊙B is the down-closure of {a⊗b}, and the unit is ↓k. The payload of each
    element is its frozenset of ``q``-indices.
    """
    sets = []
    for bits in range(1 << q.size):
        members = frozenset(i for i in range(q.size) if bits >> i & 1)
        if all(j in members for i in members for j in range(q.size) if q.le(j, i)):
            sets.append(members)
    sets.sort(key=lambda s: (len(s), sorted(s)))
    index = {s: i for i, s in enumerate(sets)}

    def down(elems):
        return frozenset(j for i in elems for j in range(q.size) if q.le(j, i))

    def mul(a, b):
        return index[down(q.mul(x, y) for x in sets[a] for y in sets[b])]

    labels = ["{" + ",".join(q.label(i) for i in sorted(s)) + "}" for s in sets]
    return _from_order(labels, lambda a, b: sets[a] <= sets[b], mul, index[down([q.unit])],
                       name=f"downset({q.name})", family="downset", params={"base": q},
                       payload=sets)


def diamond():
    """M3: bottom, three incomparable atoms a, b, c, and top.

    M3 is not distributive, so ``⊗ = ∧`` fails join preservation. This uses
    a lawful tensor instead: ``a`` is the unit, ``b ⊗ b = a``, ``c`` absorbs
    the other atoms and itself. Not ccd: nothing non-bottom is totally below
    top.
    """
    labels = ["bot", "a", "b", "c", "top"]
    table = [[0, 0, 0, 0, 0],
             [0, 1, 2, 3, 4],
             [0, 2, 1, 3, 4],
             [0, 3, 3, 3, 3],
             [0, 4, 4, 3, 4]]
    return _from_order(labels, lambda x, y: x == y or x == 0 or y == 4,
                       lambda x, y: table[x][y], 1, name="diamond", family="diamond")


def diamond_meet():
    """M3 with ``⊗ = ∧`` and k = top: a lattice, but not a quantale."""
    def meet(x, y):
        if x == y or y == 4:
            return x
        if x == 4:
            return y
        return 0
    return _from_order(["bot", "a", "b", "c", "top"], lambda x, y: x == y or x == 0 or y == 4,
                       meet, 4, name="diamond_meet", family="diamond_meet")


def corrupted_three_chain():
    """chain_frame(3) with m ⊗ m altered to top, breaking monotonicity."""
    base = chain_frame(3)
    t = np.array(base.tensor_table)
    t[1, 1] = 2
    return Quantale(base.labels, base.leq, t, base.unit, name="corrupted_three_chain",
                    family="explicit")


# -- descriptors -------------------------------------------------------------

def _split_list(text):
    return [x for x in str(text).replace(";", ",").split(",") if x != ""]


def parse_builtin(text):
    """Build a quantale from a descriptor such as ``cost_chain:3``.

    Forms: ``terminal``, ``two_chain``, ``chain_frame:N``, ``cost_chain:M``,
    ``cost_grid:0,1,2``, ``unit_grid:M[:tnorm]``, ``value_chain:0,1/2,1[:tnorm]``,
    ``delta_grid:TIMES:VALUES[:tnorm]`` (comma lists, ∞ implicit),
    ``downset:<descriptor>``, ``diamond``, ``diamond_meet``,
    ``corrupted_three_chain``; ``three_chain`` abbreviates ``chain_frame:3``.
    """
    return _parse_builtin(str(text).strip())


@lru_cache(maxsize=None)
def _parse_builtin(text):
    name, _, rest = text.partition(":")
    args = rest.split(":") if rest else []
    try:
        if name == "downset":
            if not rest:
                raise QuantaleStructureError("downset needs a base quantale")
            return downset(_parse_builtin(rest))
        if name in ("terminal", "two_chain", "three_chain", "diamond", "diamond_meet",
                    "corrupted_three_chain") and args:
            raise QuantaleStructureError(f"{name} takes no parameters")
        if name == "terminal":
            return terminal()
        if name == "two_chain":
            return two_chain()
        if name == "three_chain":
            return chain_frame(3)
        if name == "diamond":
            return diamond()
        if name == "diamond_meet":
            return diamond_meet()
        if name == "corrupted_three_chain":
            return corrupted_three_chain()
        if name == "chain_frame" and len(args) == 1:
            return chain_frame(int(args[0]))
        if name == "cost_chain" and len(args) == 1:
            return cost_chain(int(args[0]))
        if name == "cost_grid" and len(args) == 1:
            return cost_grid([parse_number(x) for x in _split_list(args[0])])
        if name == "unit_grid" and len(args) in (1, 2):
            return unit_grid(int(args[0]), *args[1:])
        if name == "value_chain" and len(args) in (1, 2):
            return value_chain([parse_number(x) for x in _split_list(args[0])], *args[1:])
        if name == "delta_grid" and len(args) in (2, 3):
            return delta_grid([parse_number(x) for x in _split_list(args[0])],
                              [parse_number(x) for x in _split_list(args[1])], *args[2:])
    except ValueError as exc:
        if isinstance(exc, QuantaleStructureError):
            raise
        raise QuantaleStructureError(f"bad parameters in {text!r}: {exc}") from None
    raise QuantaleStructureError(f"unknown built-in quantale {text!r}")


def builtin_quantale(name, **params):
    """Keyword-style constructor used by quantale files: ``{"builtin": name, ...}``."""
    if name == "downset":
        base = params.get("base")
        if base is None:
            raise QuantaleStructureError("downset needs a 'base' quantale")
        if isinstance(base, dict):
            base = builtin_quantale(**{("name" if k == "builtin" else k): v
                                       for k, v in base.items()})
        elif not isinstance(base, Quantale):
            base = parse_builtin(base)
        return downset(base)
    parts = [name]
    if name == "chain_frame":
        parts.append(str(params["n"]))
    elif name == "cost_chain":
        parts.append(str(params["m"]))
    elif name == "cost_grid":
        parts.append(",".join(map(str, params["points"])))
    elif name == "unit_grid":
        parts += [str(params["m"]), params.get("tnorm", "lukasiewicz")]
    elif name == "value_chain":
        parts += [",".join(map(str, params["values"])), params.get("tnorm", "min")]
    elif name == "delta_grid":
        parts += [",".join(map(str, params["times"])), ",".join(map(str, params["values"])),
                  params.get("tnorm", "lukasiewicz")]
    elif params:
        raise QuantaleStructureError(f"{name} takes no parameters")
    return parse_builtin(":".join(parts))


def describe(q):
    """A descriptor string for built-in quantales, or None for explicit ones."""
    f, p = q.family, q.params
    simple = {"terminal", "diamond", "diamond_meet"}
    if f in simple:
        return f
    if f == "chain_frame":
        return "two_chain" if q.name == "two_chain" else f"chain_frame:{p['n']}"
    if f == "cost_chain":
        return f"cost_chain:{p['m']}"
    if f == "cost_grid":
        return "cost_grid:" + ",".join(p["points"])
    if f == "unit_grid":
        return f"unit_grid:{p['m']}:{p['tnorm']}"
    if f == "value_chain":
        return f"value_chain:{','.join(p['values'])}:{p['tnorm']}"
    if f == "delta_grid":
        return f"delta_grid:{','.join(p['times'])}:{','.join(p['values'])}:{p['tnorm']}"
    if f == "downset":
        inner = describe(p["base"])
        return None if inner is None else f"downset:{inner}"
    return None


def small_delta_grid():
    """Times {0, 1, ∞}, values {0, 1/2, 1}, Łukasiewicz: six elements."""
    return parse_builtin("delta_grid:0,1:0,1/2,1:lukasiewicz")


def delta_sigma(q, alpha):
    """σ(α) in a delta grid: 1 on intervals starting at or after α, else 0."""
    times = [parse_number(t) for t in q.params["times"]]
    one = Fraction(1)
    vec = tuple(one if t >= alpha else Fraction(0) for t in times)
    return q.payload.index(vec)


def delta_tau(q, u):
    """τ(u): the constant vector u."""
    n = len(q.params["times"])
    return q.payload.index((Fraction(u),) * n)
