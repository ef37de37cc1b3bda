"""JSON file formats for quantales, spaces, convergence tables and maps.

Every element, point and subset is written by label. A quantale reference
is a descriptor string (``"cost_chain:2"``), an inline quantale object, or
``{"file": path}`` resolved against the referring file's directory.

Quantale::

    {"builtin": "cost_chain", "m": 3}          or   {"builtin": "cost_chain:3"}
    {"elements": [...], "leq": [[a, b], ...], "tensor": [[a, b, c], ...], "unit": a}

Space::

    {"type": "space", "quantale": REF, "carrier": ["a", "b"],
     "presentation": "distance", "table": [[["a"], {"a": v, "b": w}], ...]}
    {"type": "space", ..., "presentation": "tower",
     "table": {v: [[["a"], ["a", "b"]], ...], ...}}

Convergence::

    {"type": "convergence", "quantale": REF, "carrier": [...],
     "table": [[generator, point, value], ...]}

Map::

    {"type": "map", "source": REF, "target": REF, "table": {label: label}}
    {"type": "map", "builtin": "rho", "quantale": REF}
"""
from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .base_change import FAMILY_OF, standard_maps
from .convergence import ConvergenceStructure
from .lattice import MonotoneMap, Quantale
from .quantales import builtin_quantale, describe, parse_builtin, two_chain
from .report import CapabilityError, QuantaleStructureError
from .spaces import DistanceStructure, Tower, mask_of
from .vrel import FiniteSet


class ParseError(ValueError):
    """A definition file cannot be read; the message carries its location."""


def _load_json(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"{path}: cannot read file ({exc.strerror})") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _where(path, key):
    return f"{path}: {key}" if path else key


# -- quantales ----------------------------------------------------------------------

def quantale_from_obj(obj, base=None, path=None):
    """Resolve a quantale reference (string, inline object or file pointer)."""
    try:
        if isinstance(obj, str):
            return parse_builtin(obj)
        if not isinstance(obj, dict):
            raise ParseError(_where(path, "quantale must be a string or an object"))
        if "file" in obj:
            ref = Path(obj["file"])
            if base is not None and not ref.is_absolute():
                ref = Path(base) / ref
            return load_quantale(ref)
        if "builtin" in obj:
            name = obj["builtin"]
            params = {k: v for k, v in obj.items() if k != "builtin"}
            if ":" in name or not params:
                if params:
                    raise ParseError(_where(path, "descriptor form takes no extra keys"))
                return parse_builtin(name)
            return builtin_quantale(name, **params)
        missing = [k for k in ("elements", "leq", "tensor", "unit") if k not in obj]
        if missing:
            raise ParseError(_where(path, f"quantale object lacks {', '.join(missing)}"))
        return Quantale.from_tables(obj["elements"], obj["leq"], obj["tensor"], obj["unit"],
                                    name=obj.get("name", "explicit"))
    except (QuantaleStructureError, KeyError, TypeError) as exc:
        if isinstance(exc, QuantaleStructureError) and not path:
            raise
        raise ParseError(_where(path, f"bad quantale: {exc}")) from None


def load_quantale(path):
    path = Path(path)
    return quantale_from_obj(_load_json(path), path.parent, str(path))


def quantale_to_obj(q):
    """Descriptor string when one exists, else the explicit tables."""
    d = describe(q)
    if d is not None:
        return d
    lab = q.labels
    return {"elements": list(lab),
            "leq": [[lab[a], lab[b]] for a in range(q.size) for b in range(q.size) if q.le(a, b)],
            "tensor": [[lab[a], lab[b], lab[q.mul(a, b)]]
                       for a in range(q.size) for b in range(q.size)],
            "unit": lab[q.unit], "name": q.name}


# -- structures ---------------------------------------------------------------------

def _carrier(obj, path):
    items = obj.get("carrier")
    if not isinstance(items, list) or len(set(map(str, items))) != len(items):
        raise ParseError(_where(path, "carrier must be a list of distinct labels"))
    return FiniteSet(str(x) for x in items)


def _element(q, label, path, at):
    try:
        return q.index(str(label))
    except (KeyError, ValueError, IndexError):
        raise ParseError(_where(path, f"{at}: unknown quantale element {label!r}")) from None


def _mask(X, labels, path, at):
    try:
        return mask_of(X, [str(x) for x in labels])
    except (KeyError, TypeError):
        raise ParseError(_where(path, f"{at}: unknown point in {labels!r}")) from None


def structure_from_obj(obj, base=None, path=None):
    """A DistanceStructure, Tower or ConvergenceStructure from a parsed file."""
    if not isinstance(obj, dict):
        raise ParseError(_where(path, "top level must be an object"))
    kind = obj.get("type")
    if "quantale" not in obj:
        raise ParseError(_where(path, "missing quantale reference"))
    q = quantale_from_obj(obj["quantale"], base, path)
    X = _carrier(obj, path)
    n = len(X)
    table = obj.get("table")
    if kind == "convergence":
        ell = np.full((n, n), -1, dtype=np.int64)
        for k, entry in enumerate(table or []):
            if not isinstance(entry, list) or len(entry) != 3:
                raise ParseError(_where(path, f"table[{k}] must be [generator, point, value]"))
            g, y, v = entry
            if str(g) not in X.pos or str(y) not in X.pos:
                raise ParseError(_where(path, f"table[{k}]: unknown point"))
            ell[X.pos[str(g)], X.pos[str(y)]] = _element(q, v, path, f"table[{k}]")
        if (ell < 0).any():
            raise ParseError(_where(path, "convergence table is not total"))
        return ConvergenceStructure(X, q, ell)
    if kind != "space":
        raise ParseError(_where(path, f"unknown file type {kind!r}"))
    pres = obj.get("presentation", "distance")
    if pres == "distance":
        t = np.full((1 << n, n), -1, dtype=np.int64)
        for k, row in enumerate(table or []):
            if not isinstance(row, list) or len(row) != 2 or not isinstance(row[1], dict):
                raise ParseError(_where(path, f"table[{k}] must be [subset, {{point: value}}]"))
            m = _mask(X, row[0], path, f"table[{k}]")
            for x, v in row[1].items():
                if str(x) not in X.pos:
                    raise ParseError(_where(path, f"table[{k}]: unknown point {x!r}"))
                t[m, X.pos[str(x)]] = _element(q, v, path, f"table[{k}]")
        if (t < 0).any():
            raise ParseError(_where(path, "distance table is not total"))
        return DistanceStructure(X, q, t)
    if pres == "tower":
        ops = np.full((q.size, 1 << n), -1, dtype=np.int64)
        if not isinstance(table, dict):
            raise ParseError(_where(path, "tower table must map element labels to rows"))
        for v, rows in table.items():
            vi = _element(q, v, path, f"table[{v!r}]")
            for k, row in enumerate(rows):
                if not isinstance(row, list) or len(row) != 2:
                    raise ParseError(_where(path, f"table[{v!r}][{k}] must be [subset, subset]"))
                ops[vi, _mask(X, row[0], path, f"table[{v!r}][{k}]")] = _mask(
                    X, row[1], path, f"table[{v!r}][{k}]")
        if (ops < 0).any():
            raise ParseError(_where(path, "tower table is not total"))
        return Tower(X, q, ops)
    raise ParseError(_where(path, f"unknown presentation {pres!r}"))


def load_structure(path):
    path = Path(path)
    return structure_from_obj(_load_json(path), path.parent, str(path))


def structure_to_obj(s):
    q = s.quantale
    head = {"quantale": quantale_to_obj(q), "carrier": list(s.carrier.labels)}
    if isinstance(s, DistanceStructure):
        return {"type": "space", **head, "presentation": "distance", "table": s.to_labels()}
    if isinstance(s, Tower):
        return {"type": "space", **head, "presentation": "tower", "table": s.to_labels()}
    if isinstance(s, ConvergenceStructure):
        return {"type": "convergence", **head, "table": s.to_labels()}
    raise TypeError(f"cannot serialize {type(s).__name__}")


# -- maps ---------------------------------------------------------------------------

def builtin_map(name, source=None, target=None):
    """A standard map by name, built around the quantale it must touch.

    ``source`` is the quantale the structure lives over; ``target`` is needed
    only when the map's codomain is not determined by its domain (ι, σ, τ).
    """
    family = FAMILY_OF.get(name)
    if family is None:
        raise CapabilityError(f"unknown map {name!r}")
    if family == "iota_pi_o":
        if name == "iota":
            if target is None:
                raise CapabilityError("iota needs a target quantale")
            if source is not None and source != two_chain():
                raise CapabilityError("iota starts at the two-element chain")
            return standard_maps(family, target)[name]
        return standard_maps(family, source)[name]
    if family == "sigma_tau_rho_lambda":
        delta = target if name in ("sigma", "tau") else source
        if delta is None:
            raise CapabilityError(f"{name} needs a delta-grid quantale")
        m = standard_maps(family, delta)[name]
        if source is not None and m.source != source:
            raise CapabilityError(f"{name} starts at {m.source.name}, not {source.name}")
        return m
    if name == "downset.sup":
        if source is None or source.family != "downset":
            raise CapabilityError("downset.sup starts at a downset quantale")
        return standard_maps(family, source.params["base"])[name]
    return standard_maps(family, source)[name]


def map_from_obj(obj, base=None, path=None):
    if not isinstance(obj, dict) or obj.get("type", "map") != "map":
        raise ParseError(_where(path, "not a map file"))
    if "builtin" in obj:
        src = quantale_from_obj(obj["quantale"], base, path) if "quantale" in obj else None
        tgt = quantale_from_obj(obj["target"], base, path) if "target" in obj else None
        return builtin_map(obj["builtin"], src, tgt)
    for key in ("source", "target", "table"):
        if key not in obj:
            raise ParseError(_where(path, f"map lacks {key!r}"))
    src = quantale_from_obj(obj["source"], base, path)
    tgt = quantale_from_obj(obj["target"], base, path)
    try:
        return MonotoneMap.from_labels(src, tgt, obj["table"], obj.get("name", "map"))
    except (KeyError, ValueError, QuantaleStructureError) as exc:
        raise ParseError(_where(path, f"bad map table: {exc}")) from None


def load_map(path):
    path = Path(path)
    return map_from_obj(_load_json(path), path.parent, str(path))


def map_to_obj(m):
    return {"type": "map", "name": m.name, "source": quantale_to_obj(m.source),
            "target": quantale_to_obj(m.target), "table": m.to_labels()}


def quantale_file_obj(q):
    d = describe(q)
    return {"builtin": d} if d is not None else quantale_to_obj(q)


def load_any(path):
    """(kind, object) for any supported file."""
    path = Path(path)
    obj = _load_json(path)
    if isinstance(obj, dict) and obj.get("type") in ("space", "convergence"):
        return obj["type"], structure_from_obj(obj, path.parent, str(path))
    if isinstance(obj, dict) and obj.get("type") == "map":
        return "map", map_from_obj(obj, path.parent, str(path))
    if isinstance(obj, dict) and obj.get("type", "quantale") == "quantale":
        body = {k: v for k, v in obj.items() if k != "type"}
        return "quantale", quantale_from_obj(body, path.parent, str(path))
    raise ParseError(f"{path}: unknown file type {obj.get('type') if isinstance(obj, dict) else None!r}")


def dumps(obj):
    """Stable JSON text (sorted keys, two-space indent, trailing newline)."""
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


__all__ = ["ParseError", "load_quantale", "quantale_from_obj", "quantale_to_obj",
           "load_structure", "structure_from_obj", "structure_to_obj", "load_map",
           "map_from_obj", "map_to_obj", "builtin_map", "load_any", "dumps",
           "quantale_file_obj"]
