"""Reading structure-constant documents and writing deterministic reports.

Documents are JSON with every number an exact rational: an integer or a string
``"p/q"`` / ``"n"``.  Floats are rejected.  See the README for the schema.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np

from .algebra import InvolutiveAlgebra, InvolutiveBimodule, regular_bimodule
from .dendriform import DendriformAlgebra
from .linalg import rational

FIXTURES = ("dual_numbers", "upper_triangular", "zero_product")


class InputError(ValueError):
    def __init__(self, message: str, location: str = ""):
        self.location = location
        super().__init__(f"{location}: {message}" if location else message)


def _scalar(x, loc: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise InputError(f"expected an exact rational (integer or \"p/q\" string), got {x!r}", loc)
    try:
        return rational(x)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational {x!r} ({exc})", loc) from None


def read_tensor(data, shape: tuple[int, ...], loc: str) -> np.ndarray:
    """Nested lists of rationals with exactly the given shape."""
    out = np.empty(shape, dtype=object)

    def walk(node, idx: tuple, depth: int):
        here = loc + "".join(f"[{i}]" for i in idx)
        if depth == len(shape):
            out[idx] = _scalar(node, here)
            return
        if not isinstance(node, list):
            raise InputError(f"expected a list of length {shape[depth]}", here)
        if len(node) != shape[depth]:
            raise InputError(f"expected length {shape[depth]}, found {len(node)}", here)
        for i, child in enumerate(node):
            walk(child, idx + (i,), depth + 1)

    walk(data, (), 0)
    return out


def _field(block: dict, key: str, loc: str, required: bool = True):
    if not isinstance(block, dict):
        raise InputError("expected an object", loc)
    if key not in block:
        if required:
            raise InputError(f"missing key {key!r}", loc)
        return None
    return block[key]


def _dim(block: dict, loc: str) -> int:
    d = _field(block, "dim", loc)
    if isinstance(d, bool) or not isinstance(d, int) or d < 1:
        raise InputError(f"dim must be a positive integer, got {d!r}", f"{loc}.dim")
    return d


def _names(block: dict, dim: int, loc: str, default: str) -> tuple[str, ...]:
    names = _field(block, "names", loc, required=False)
    if names is None:
        return tuple(f"{default}{i}" for i in range(dim))
    if not (isinstance(names, list) and len(names) == dim and all(isinstance(n, str) for n in names)):
        raise InputError(f"names must be a list of {dim} strings", f"{loc}.names")
    if len(set(names)) != dim:
        raise InputError("names must be distinct", f"{loc}.names")
    return tuple(names)


def read_algebra(block: dict, loc: str = "algebra") -> InvolutiveAlgebra:
    n = _dim(block, loc)
    names = _names(block, n, loc, "e")
    mul = read_tensor(_field(block, "mul", loc), (n, n, n), f"{loc}.mul")
    inv = read_tensor(_field(block, "involution", loc), (n, n), f"{loc}.involution")
    return InvolutiveAlgebra(n, mul, inv, names)


def read_bimodule(block, a: InvolutiveAlgebra, loc: str = "bimodule") -> InvolutiveBimodule:
    if block is None or block == "regular":
        return regular_bimodule(a)
    if isinstance(block, str):
        raise InputError(f"unknown bimodule shorthand {block!r} (only \"regular\")", loc)
    n = _dim(block, loc)
    names = _names(block, n, loc, "u")
    left = read_tensor(_field(block, "left", loc), (a.dim, n, n), f"{loc}.left")
    right = read_tensor(_field(block, "right", loc), (n, a.dim, n), f"{loc}.right")
    inv = read_tensor(_field(block, "involution", loc), (n, n), f"{loc}.involution")
    return InvolutiveBimodule(n, left, right, inv, names)


def read_dendriform(block, loc: str = "dendriform") -> DendriformAlgebra:
    n = _dim(block, loc)
    names = _names(block, n, loc, "x")
    prec = read_tensor(_field(block, "prec", loc), (n, n, n), f"{loc}.prec")
    succ = read_tensor(_field(block, "succ", loc), (n, n, n), f"{loc}.succ")
    inv_data = _field(block, "involution", loc, required=False)
    inv = None if inv_data is None else read_tensor(inv_data, (n, n), f"{loc}.involution")
    return DendriformAlgebra(n, prec, succ, inv, names)


@dataclass
class InputDocument:
    source: str
    raw: dict
    algebra: InvolutiveAlgebra | None
    bimodule: InvolutiveBimodule | None

    def _need(self, key: str):
        if self.algebra is None:
            raise InputError("missing key 'algebra'", self.source)
        return self.raw.get(key)

    def operator(self) -> np.ndarray:
        data = self._need("operator")
        if data is None:
            raise InputError("missing key 'operator'", self.source)
        return read_tensor(data, (self.algebra.dim, self.bimodule.dim), "operator")

    def cocycle(self, data=None) -> np.ndarray:
        data = self._need("cocycle") if data is None else data
        if data is None:
            raise InputError("missing key 'cocycle'", self.source)
        return read_tensor(data, (self.bimodule.dim, self.algebra.dim), "cocycle")

    def series(self, data=None) -> list[np.ndarray]:
        data = self._need("series") if data is None else data
        if not isinstance(data, list) or not data:
            raise InputError("series must be a nonempty list of operator matrices", "series")
        shape = (self.algebra.dim, self.bimodule.dim)
        return [read_tensor(t, shape, f"series[{k}]") for k, t in enumerate(data)]

    def cochain(self, data=None) -> np.ndarray:
        data = self._need("cochain") if data is None else data
        if data is None:
            raise InputError("missing key 'cochain'", self.source)
        deg = _field(data, "degree", "cochain")
        if isinstance(deg, bool) or not isinstance(deg, int) or deg < 0:
            raise InputError(f"degree must be a nonnegative integer, got {deg!r}", "cochain.degree")
        shape = (self.bimodule.dim,) * deg + (self.algebra.dim,)
        return read_tensor(_field(data, "coeffs", "cochain"), shape, "cochain.coeffs")

    def dendriform(self) -> DendriformAlgebra | None:
        block = self.raw.get("dendriform")
        return None if block is None else read_dendriform(block)


def parse_document(data: Any, source: str = "<input>") -> InputDocument:
    if not isinstance(data, dict):
        raise InputError("top level must be an object", source)
    if data.get("field") != "rational":
        raise InputError("the 'field' marker must be \"rational\"", f"{source}: field")
    algebra = bimodule = None
    if "algebra" in data:
        algebra = read_algebra(data["algebra"])
        bimodule = read_bimodule(data.get("bimodule"), algebra)
    elif "dendriform" not in data:
        raise InputError("document needs an 'algebra' or a 'dendriform' block", source)
    return InputDocument(source, data, algebra, bimodule)


def load_json(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read file ({exc.strerror})", str(path)) from None

    def reject_float(literal: str):
        raise InputError(f"floating-point number {literal} is not exact; write it as \"p/q\"", str(path))

    try:
        return json.loads(text, parse_float=reject_float)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})", str(path)) from None


def load_document(path: str | Path) -> InputDocument:
    return parse_document(load_json(path), str(path))


def load_block(path: str | Path, key: str):
    """The ``key`` block of a JSON file, or the whole file if it has no such key."""
    data = load_json(path)
    if isinstance(data, dict) and key in data:
        return data[key]
    return data


def fixture_path(name: str) -> Path:
    if name not in FIXTURES:
        raise KeyError(f"unknown fixture {name!r}; available: {FIXTURES}")
    return Path(str(resources.files("rbx") / "fixtures" / f"{name}.json"))


def load_fixture(name: str) -> InputDocument:
    return load_document(fixture_path(name))


def jsonable(obj):
    """Recursively turn Fractions and arrays into JSON values (rationals as strings)."""
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.ndarray):
        return jsonable(obj.tolist())
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(jsonable(obj), sort_keys=True, indent=2, ensure_ascii=False)


__all__ = [
    "FIXTURES",
    "InputDocument",
    "InputError",
    "dumps",
    "fixture_path",
    "jsonable",
    "load_block",
    "load_document",
    "load_fixture",
    "load_json",
    "parse_document",
    "read_algebra",
    "read_bimodule",
    "read_dendriform",
    "read_tensor",
]
