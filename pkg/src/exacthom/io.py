"""JSON documents for complexes, modules, maps, filtrations and simplicial modules.

Canonical form: keys sorted, no insignificant whitespace, integers written as
plain decimals of any size, matrices as row-major arrays of arrays, one
trailing newline.  Degrees are object keys written as decimal strings.
Floats and booleans are rejected wherever an integer is expected.

Schemas (``coefficients`` is ``"Z"`` or ``"F_p"``)::

    {"type": "complex", "coefficients": "Z",
     "degrees": {"0": 1, "1": 1}, "differentials": {"1": [[2]]}}
    {"type": "module", "coefficients": "Z", "free_rank": 1, "torsion": [2]}
    {"type": "map", "coefficients": "Z", "source": BODY, "target": BODY,
     "components": {"0": [[1]]}}
    {"type": "filtered", "coefficients": "Z", "steps": [BODY, ...],
     "inclusions": [{"0": [[1]]}, ...]}
    {"type": "simplicial", "coefficients": "Z", "ranks": [1, 2],
     "faces": {"1": [M, M]}, "degeneracies": {"0": [M]}}

``BODY`` is a complex document without ``type`` and ``coefficients``.  A
complex must list ``differentials[n]`` exactly when degrees ``n`` and
``n - 1`` are both nonzero.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any, Dict, List

from .chain import ChainComplex, ChainMap
from .doldkan import SimplicialModule
from .errors import ExactHomError, SchemaError
from .filtered import FilteredComplex
from .linalg import Coefficients, FgModule, Matrix

__all__ = ["Document", "parse_document", "emit_document", "canonical_json", "load_document"]

KINDS = ("complex", "module", "map", "filtered", "simplicial")


@dataclass(frozen=True)
class Document:
    kind: str
    value: Any


def canonical_json(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"


def _reject_float(text):
    raise SchemaError("", f"non-integer number {text}")


def _loads(text: str):
    try:
        return json.loads(text, parse_float=_reject_float, parse_constant=_reject_float)
    except json.JSONDecodeError as e:
        raise SchemaError("", f"invalid JSON: {e.msg} at line {e.lineno} column {e.colno}") from None


# --- field readers -----------------------------------------------------------------

def _obj(x, path) -> dict:
    if not isinstance(x, dict):
        raise SchemaError(path, "expected an object")
    return x


def _int(x, path, nonneg=False) -> int:
    if isinstance(x, bool) or not isinstance(x, int):
        raise SchemaError(path, "expected an integer")
    if nonneg and x < 0:
        raise SchemaError(path, "expected a nonnegative integer")
    return x


def _key_int(k: str, path) -> int:
    try:
        n = int(k, 10)
    except ValueError:
        raise SchemaError(path, f"key {k!r} is not a decimal integer") from None
    if str(n) != k:
        raise SchemaError(path, f"key {k!r} is not in canonical decimal form")
    return n


def _field(d: dict, name: str, path: str):
    if name not in d:
        raise SchemaError(f"{path}/{name}", "missing field")
    return d[name]


def _check_keys(d: dict, allowed, path):
    for k in d:
        if k not in allowed:
            raise SchemaError(f"{path}/{k}", "unknown field")


def _matrix(x, nrows: int, ncols: int, ring: Coefficients, path) -> Matrix:
    if not isinstance(x, list):
        raise SchemaError(path, "expected an array of rows")
    if len(x) != nrows:
        raise SchemaError(path, f"expected {nrows} rows, got {len(x)}")
    rows = []
    for i, row in enumerate(x):
        if not isinstance(row, list):
            raise SchemaError(f"{path}/{i}", "expected a row array")
        if len(row) != ncols:
            raise SchemaError(f"{path}/{i}", f"expected {ncols} entries, got {len(row)}")
        rows.append([_int(v, f"{path}/{i}/{j}") for j, v in enumerate(row)])
    return Matrix(rows, ncols, ring)


def _ring(d: dict, path) -> Coefficients:
    c = _field(d, "coefficients", path)
    if not isinstance(c, str):
        raise SchemaError(f"{path}/coefficients", "expected a string")
    try:
        return Coefficients.parse(c)
    except ValueError as e:
        raise SchemaError(f"{path}/coefficients", str(e)) from None


def _complex_body(d, ring: Coefficients, path) -> ChainComplex:
    d = _obj(d, path)
    degs = _obj(_field(d, "degrees", path), f"{path}/degrees")
    ranks = {}
    for k, v in degs.items():
        n = _key_int(k, f"{path}/degrees")
        r = _int(v, f"{path}/degrees/{k}", nonneg=True)
        if r:
            ranks[n] = r
    diffs_raw = _obj(d.get("differentials", {}), f"{path}/differentials")
    diffs = {}
    for k, v in diffs_raw.items():
        n = _key_int(k, f"{path}/differentials")
        if not (ranks.get(n) and ranks.get(n - 1)):
            raise SchemaError(f"{path}/differentials/{k}",
                              "differential given between degrees that are not both nonzero")
        diffs[n] = _matrix(v, ranks[n - 1], ranks[n], ring, f"{path}/differentials/{k}")
    for n in ranks:
        if n - 1 in ranks and n not in diffs:
            raise SchemaError(f"{path}/differentials/{n}", "missing differential")
    try:
        return ChainComplex(ranks, diffs, ring)
    except ExactHomError as e:
        raise SchemaError(f"{path}/differentials", str(e)) from None


def _components(x, source: ChainComplex, target: ChainComplex, ring, path, shift=0):
    x = _obj(x, path)
    comps = {}
    for k, v in x.items():
        n = _key_int(k, path)
        comps[n] = _matrix(v, target.rank(n + shift), source.rank(n), ring, f"{path}/{k}")
    return comps


def _module(d, ring, path) -> FgModule:
    f = _int(_field(d, "free_rank", path), f"{path}/free_rank", nonneg=True)
    tors = _field(d, "torsion", path)
    if not isinstance(tors, list):
        raise SchemaError(f"{path}/torsion", "expected an array")
    orders = [_int(t, f"{path}/torsion/{i}") for i, t in enumerate(tors)]
    for i, t in enumerate(orders):
        if t < 2:
            raise SchemaError(f"{path}/torsion/{i}", "cyclic orders must be at least 2")
    if ring.is_field and orders:
        raise SchemaError(f"{path}/torsion", "modules over a field have no torsion")
    return FgModule.from_cyclic(ring, f, orders)


def _simplicial(d, ring, path) -> SimplicialModule:
    ranks_raw = _field(d, "ranks", path)
    if not isinstance(ranks_raw, list) or not ranks_raw:
        raise SchemaError(f"{path}/ranks", "expected a nonempty array")
    ranks = [_int(r, f"{path}/ranks/{i}", nonneg=True) for i, r in enumerate(ranks_raw)]
    top = len(ranks) - 1

    def family(name, lo, hi, tgt):
        raw = _obj(_field(d, name, path), f"{path}/{name}")
        out = {}
        for n in range(lo, hi + 1):
            key = str(n)
            if key not in raw:
                raise SchemaError(f"{path}/{name}/{key}", "missing level")
            ms = raw[key]
            if not isinstance(ms, list) or len(ms) != n + 1:
                raise SchemaError(f"{path}/{name}/{key}", f"expected {n + 1} matrices")
            out[n] = [_matrix(m, ranks[tgt(n)], ranks[n], ring, f"{path}/{name}/{key}/{i}")
                      for i, m in enumerate(ms)]
        for key in raw:
            n = _key_int(key, f"{path}/{name}")
            if not lo <= n <= hi:
                raise SchemaError(f"{path}/{name}/{key}", "level out of range")
        return out

    faces = family("faces", 1, top, lambda n: n - 1)
    degs = family("degeneracies", 0, top - 1, lambda n: n + 1)
    try:
        return SimplicialModule(ranks, faces, degs, ring)
    except ExactHomError as e:
        raise SchemaError(path or "/", str(e)) from None


def parse_document(text: str) -> Document:
    """Parse a document into the matching library object."""
    d = _obj(_loads(text), "")
    kind = _field(d, "type", "")
    if kind not in KINDS:
        raise SchemaError("/type", f"unknown document type {kind!r}")
    ring = _ring(d, "")
    if kind == "complex":
        _check_keys(d, {"type", "coefficients", "degrees", "differentials"}, "")
        return Document(kind, _complex_body(d, ring, ""))
    if kind == "module":
        _check_keys(d, {"type", "coefficients", "free_rank", "torsion"}, "")
        return Document(kind, _module(d, ring, ""))
    if kind == "map":
        _check_keys(d, {"type", "coefficients", "source", "target", "components"}, "")
        S = _complex_body(_field(d, "source", ""), ring, "/source")
        T = _complex_body(_field(d, "target", ""), ring, "/target")
        comps = _components(_field(d, "components", ""), S, T, ring, "/components")
        try:
            return Document(kind, ChainMap(S, T, comps))
        except ExactHomError as e:
            raise SchemaError("/components", str(e)) from None
    if kind == "filtered":
        _check_keys(d, {"type", "coefficients", "steps", "inclusions"}, "")
        raw = _field(d, "steps", "")
        if not isinstance(raw, list) or not raw:
            raise SchemaError("/steps", "expected a nonempty array")
        steps = [_complex_body(s, ring, f"/steps/{i}") for i, s in enumerate(raw)]
        inc = _field(d, "inclusions", "")
        if not isinstance(inc, list) or len(inc) != len(steps) - 1:
            raise SchemaError("/inclusions", f"expected {len(steps) - 1} inclusion maps")
        maps = []
        for i, c in enumerate(inc):
            comps = _components(c, steps[i], steps[i + 1], ring, f"/inclusions/{i}")
            try:
                maps.append(ChainMap(steps[i], steps[i + 1], comps))
            except ExactHomError as e:
                raise SchemaError(f"/inclusions/{i}", str(e)) from None
        try:
            return Document(kind, FilteredComplex.from_maps(steps, maps))
        except ExactHomError as e:
            raise SchemaError("/inclusions", str(e)) from None
    _check_keys(d, {"type", "coefficients", "ranks", "faces", "degeneracies"}, "")
    return Document(kind, _simplicial(d, ring, ""))


def load_document(path: str) -> Document:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


# --- emitters ------------------------------------------------------------------------

def _mat(M: Matrix) -> List[List[int]]:
    return [list(r) for r in M.data]


def complex_body(C: ChainComplex) -> Dict[str, Any]:
    return {"degrees": {str(n): r for n, r in C.ranks.items()},
            "differentials": {str(n): _mat(C.d(n)) for n in C.ranks if n - 1 in C.ranks}}


def module_body(M: FgModule) -> Dict[str, Any]:
    return {"free_rank": M.free_rank, "torsion": list(M.torsion)}


def to_json_obj(obj) -> Dict[str, Any]:
    if isinstance(obj, ChainComplex):
        return {"type": "complex", "coefficients": str(obj.ring), **complex_body(obj)}
    if isinstance(obj, FgModule):
        return {"type": "module", "coefficients": str(obj.ring), **module_body(obj)}
    if isinstance(obj, ChainMap):
        return {"type": "map", "coefficients": str(obj.ring),
                "source": complex_body(obj.source), "target": complex_body(obj.target),
                "components": {str(n): _mat(m) for n, m in obj.components.items()}}
    if isinstance(obj, FilteredComplex):
        return {"type": "filtered", "coefficients": str(obj.ring),
                "steps": [complex_body(s) for s in obj.steps],
                "inclusions": [{str(n): _mat(m) for n, m in f.components.items()}
                               for f in obj.maps]}
    if isinstance(obj, SimplicialModule):
        return {"type": "simplicial", "coefficients": str(obj.ring), "ranks": list(obj.ranks),
                "faces": {str(n): [_mat(m) for m in ms] for n, ms in obj.faces.items()},
                "degeneracies": {str(n): [_mat(m) for m in ms]
                                 for n, ms in obj.degeneracies.items()}}
    raise TypeError(f"cannot emit {type(obj).__name__}")


def emit_document(obj) -> str:
    """Canonical JSON text for a library object (or a :class:`Document`)."""
    if isinstance(obj, Document):
        obj = obj.value
    return canonical_json(to_json_obj(obj))
