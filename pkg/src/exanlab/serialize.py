"""JSON documents for algebras, modules, cochains and extensions.

Scalars are strings ("2/3", "-1", or residues "4" in GF(p)); the field is
declared once per document as "Q" or {"Fp": p}.  Several documents may be
merged; their fields must agree.  Shapes follow the library conventions:

    algebra    {"dim": n, "unit": [n], "mul": [n][n][n], "basis_names": [n]?}
    bimodule   "regular" | {"dim": m, "left": [n][m][m], "right": [n][m][m]}
    module     "regular" | {"dim": r, "action": [n][r][r]}
    cochain    {"degree": p, "matrix": [dim I][n^p]}
    derivation {"matrix": [dim I][n]}
    extension  {"algebra": ..., "ideal_dim": m, "injection": [dim B][m],
                "projection": [n][dim B], "cocycle"?: cochain,
                "base"?: algebra, "bimodule"?: bimodule over base}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from typing import Any, Optional

import numpy as np

from .algebra import Algebra, Bimodule, LeftModule, regular_bimodule, regular_module
from .exactla import Field, field_from_descriptor
from .extensions import ExtensionAlgebra, make_extension
from .hochschild import Cochain


class SchemaError(ValueError):
    pass


# ---------------------------------------------------------------------------
# scalars and arrays


def parse_array(F: Field, data, shape: tuple[int, ...], what: str) -> np.ndarray:
    arr = np.array(data, dtype=object)
    if arr.shape != shape:
        # empty inner lists collapse in numpy; accept them when sizes agree
        if not (arr.size == 0 and int(np.prod(shape)) == 0):
            raise SchemaError(f"{what}: expected shape {list(shape)}, got {list(arr.shape)}")
        arr = np.empty(shape, dtype=object)
    flat = []
    for x in arr.reshape(-1):
        if not isinstance(x, str):
            raise SchemaError(f"{what}: scalars must be strings, got {x!r}")
        try:
            flat.append(F.parse(x))
        except ValueError as exc:
            raise SchemaError(f"{what}: {exc}") from None
    out = F.zeros(shape)
    if flat:
        out.reshape(-1)[:] = flat
    return out


def format_array(F: Field, arr) -> Any:
    arr = np.asarray(arr)
    if arr.ndim == 0:
        return F.format(arr.item())
    return [format_array(F, x) for x in arr] if arr.shape[0] else []


def _require(doc: dict, key: str, what: str):
    if not isinstance(doc, dict) or key not in doc:
        raise SchemaError(f"{what}: missing key {key!r}")
    return doc[key]


def _int(value, what: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise SchemaError(f"{what}: expected a non-negative integer")
    return value


# ---------------------------------------------------------------------------
# sections


def load_algebra(F: Field, doc: dict) -> Algebra:
    n = _int(_require(doc, "dim", "algebra"), "algebra.dim")
    mul = parse_array(F, _require(doc, "mul", "algebra"), (n, n, n), "algebra.mul")
    unit = parse_array(F, _require(doc, "unit", "algebra"), (n,), "algebra.unit")
    names = doc.get("basis_names")
    if names is not None and (not isinstance(names, list) or len(names) != n):
        raise SchemaError("algebra.basis_names must be a list of length dim")
    return Algebra(F, mul, unit, tuple(names) if names else None)


def dump_algebra(a: Algebra) -> dict:
    out = {"dim": a.dim, "mul": format_array(a.field, a.mul), "unit": format_array(a.field, a.unit)}
    if a.basis_names:
        out["basis_names"] = list(a.basis_names)
    return out


def load_bimodule_raw(a: Algebra, doc) -> tuple[np.ndarray, np.ndarray]:
    if doc == "regular":
        return a.left_mult, a.right_mult
    m = _int(_require(doc, "dim", "bimodule"), "bimodule.dim")
    n = a.dim
    left = parse_array(a.field, _require(doc, "left", "bimodule"), (n, m, m), "bimodule.left")
    right = parse_array(a.field, _require(doc, "right", "bimodule"), (n, m, m), "bimodule.right")
    return left, right


def load_bimodule(a: Algebra, doc) -> Bimodule:
    if doc == "regular":
        return regular_bimodule(a)
    return Bimodule(a, *load_bimodule_raw(a, doc))


def dump_bimodule(b: Bimodule) -> dict:
    F = b.field
    return {"dim": b.dim, "left": format_array(F, b.left), "right": format_array(F, b.right)}


def load_module_raw(a: Algebra, doc) -> np.ndarray:
    if doc == "regular":
        return a.left_mult
    r = _int(_require(doc, "dim", "module"), "module.dim")
    return parse_array(a.field, _require(doc, "action", "module"), (a.dim, r, r), "module.action")


def load_module(a: Algebra, doc) -> LeftModule:
    if doc == "regular":
        return regular_module(a)
    return LeftModule(a, load_module_raw(a, doc))


def dump_module(m: LeftModule) -> dict:
    return {"dim": m.dim, "action": format_array(m.field, m.action)}


def load_cochain(a: Algebra, i: Bimodule, doc: dict) -> Cochain:
    p = _int(_require(doc, "degree", "cochain"), "cochain.degree")
    mat = parse_array(a.field, _require(doc, "matrix", "cochain"), (i.dim, a.dim**p), "cochain.matrix")
    return Cochain(a, i, p, mat)


def dump_cochain(c: Cochain) -> dict:
    return {"degree": c.degree, "matrix": format_array(c.field, c.matrix)}


def load_derivation(a: Algebra, i: Bimodule, doc: dict) -> np.ndarray:
    return parse_array(a.field, _require(doc, "matrix", "derivation"), (i.dim, a.dim), "derivation.matrix")


def load_extension(F: Field, doc: dict) -> ExtensionAlgebra:
    b = load_algebra(F, _require(doc, "algebra", "extension"))
    m = _int(_require(doc, "ideal_dim", "extension"), "extension.ideal_dim")
    if m > b.dim:
        raise SchemaError("extension.ideal_dim exceeds the algebra dimension")
    n = b.dim - m
    inj = parse_array(F, _require(doc, "injection", "extension"), (b.dim, m), "extension.injection")
    proj = parse_array(F, _require(doc, "projection", "extension"), (n, b.dim), "extension.projection")
    ext = make_extension(b, m, inj, proj)
    if "cocycle" not in doc:
        return ext
    # provenance: the cocycle lives over the stored base and bimodule
    base = load_algebra(F, doc["base"]) if "base" in doc else ext.base
    if base.dim != n:
        raise SchemaError("extension.base has the wrong dimension")
    if "bimodule" not in doc:
        raise SchemaError("extension.cocycle requires extension.bimodule")
    bim = load_bimodule(base, doc["bimodule"])
    if bim.dim != m:
        raise SchemaError("extension.bimodule has the wrong dimension")
    c = load_cochain(base, bim, doc["cocycle"])
    return ExtensionAlgebra(ext.algebra, base, m, ext.injection, ext.projection, c)


def dump_extension(ext: ExtensionAlgebra) -> dict:
    F = ext.field
    out = {
        "algebra": dump_algebra(ext.algebra),
        "ideal_dim": ext.ideal_dim,
        "injection": format_array(F, ext.injection),
        "projection": format_array(F, ext.projection),
    }
    if ext.cocycle is not None:
        out["cocycle"] = dump_cochain(ext.cocycle)
        out["base"] = dump_algebra(ext.cocycle.algebra)
        out["bimodule"] = dump_bimodule(ext.cocycle.bimodule)
    return out


# ---------------------------------------------------------------------------
# documents


@dataclass
class InputDocument:
    """Merged contents of one or more JSON documents (raw sections)."""

    field: Field
    algebra: Optional[dict] = None
    bimodule: Any = None
    module: Any = None
    cochains: list = dc_field(default_factory=list)
    derivation: Optional[dict] = None
    extension: Optional[dict] = None


SECTIONS = ("algebra", "bimodule", "module", "cochain", "derivation", "extension")


def read_documents(paths) -> InputDocument:
    docs = []
    for path in paths:
        try:
            with open(path, encoding="utf-8") as fh:
                docs.append(json.load(fh))
        except json.JSONDecodeError as exc:
            raise SchemaError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None
        except OSError as exc:
            raise SchemaError(f"{path}: {exc.strerror}") from None
    return merge_documents(docs)


def merge_documents(docs: list[dict]) -> InputDocument:
    field = None
    merged = InputDocument(field=None)  # type: ignore[arg-type]
    for doc in docs:
        if not isinstance(doc, dict):
            raise SchemaError("a document must be a JSON object")
        unknown = set(doc) - set(SECTIONS) - {"field"}
        if unknown:
            raise SchemaError(f"unknown sections: {sorted(unknown)}")
        if "field" not in doc:
            raise SchemaError("document does not declare its field")
        try:
            f = field_from_descriptor(doc["field"])
        except (ValueError, TypeError) as exc:
            raise SchemaError(f"bad field descriptor: {exc}") from None
        if field is None:
            field = f
        elif f != field:
            raise SchemaError(f"field mismatch between documents: {field} vs {f}")
        for key in SECTIONS:
            if key not in doc:
                continue
            if key == "cochain":
                merged.cochains.append(doc[key])
            elif getattr(merged, key) is not None:
                raise SchemaError(f"section {key!r} given twice")
            else:
                setattr(merged, key, doc[key])
    if field is None:
        raise SchemaError("no input documents")
    merged.field = field
    return merged


def dumps(obj) -> str:
    """Deterministic JSON text."""
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"
