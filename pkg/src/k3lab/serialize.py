"""JSON encoding of lattices, vectors, maps and period data.

Rationals are written as "p/q" strings.  Lattices are referenced by label
and rebuilt with :func:`lattice_from_label`.
"""
from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from typing import Any

from .isometry import Isometry, MirrorContext
from .lattice import IntegralLattice, LatticeError, Vector, lattice_from_label
from .mirror import MirrorImage
from .period import (
    ComplexLine,
    FourSpace,
    KahlerTriple,
    OrientedPlane,
    PlanePair,
    ThreeSpace,
)


class SchemaError(ValueError):
    def __init__(self, message: str, path: str = "$", line: int | None = None):
        self.message = message
        self.path = path
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(f"{where}{path}: {message}")


def rat(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rat(s, path="$") -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise SchemaError("expected a 'p/q' string or an integer, got a float/bool", path)
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise SchemaError(f"expected a 'p/q' string, got {type(s).__name__}", path)
    t = s.strip()
    if "." in t or "e" in t.lower():
        raise SchemaError(f"decimal notation not allowed: {s!r}", path)
    try:
        return Fraction(t)
    except (ValueError, ZeroDivisionError):
        raise SchemaError(f"not a rational: {s!r}", path) from None


@lru_cache(maxsize=None)
def lattice_by_label(label: str) -> IntegralLattice:
    return lattice_from_label(label)


def _field(obj, key, path, kind=None):
    if not isinstance(obj, dict):
        raise SchemaError("expected an object", path)
    if key not in obj:
        raise SchemaError(f"missing field {key!r}", path)
    val = obj[key]
    if kind is not None and not isinstance(val, kind):
        raise SchemaError(f"field has wrong type ({type(val).__name__})", f"{path}.{key}")
    return val


def _check_type(obj, name, path):
    t = obj.get("type") if isinstance(obj, dict) else None
    if t is not None and t != name:
        raise SchemaError(f"expected type {name!r}, got {t!r}", path)


# ---------------------------------------------------------------------------
# encoders


def encode(x: Any) -> Any:
    if isinstance(x, IntegralLattice):
        return {"type": "IntegralLattice", "label": x.label, "rank": x.rank,
                "gram": [list(r) for r in x.gram]}
    if isinstance(x, Vector):
        return {"type": "Vector", "lattice_label": x.lattice.label,
                "coords": [rat(c) for c in x.coords]}
    if isinstance(x, Isometry):
        return {"type": "Isometry", "lattice_label": x.lattice.label,
                "matrix": [[rat(c) for c in r] for r in x.matrix], "integral": x.integral}
    if isinstance(x, OrientedPlane):
        return {"type": "OrientedPlane", "b1": encode(x.b1), "b2": encode(x.b2)}
    if isinstance(x, FourSpace):
        return {"type": "FourSpace", "basis": [encode(b) for b in x.basis]}
    if isinstance(x, ThreeSpace):
        return {"type": "ThreeSpace", "basis": [encode(b) for b in x.basis]}
    if isinstance(x, ComplexLine):
        return {"type": "ComplexLine", "re": encode(x.re), "im": encode(x.im)}
    if isinstance(x, KahlerTriple):
        return {"type": "KahlerTriple", "line": encode(x.line), "omega": encode(x.omega),
                "B": encode(x.B)}
    if isinstance(x, PlanePair):
        return {"type": "PlanePair", "H1": encode(x.H1), "H2": encode(x.H2)}
    if isinstance(x, MirrorImage):
        return {"type": "MirrorImage", "sigmaV": encode(x.sigma), "omegaV": encode(x.omega),
                "BV": encode(x.B)}
    if isinstance(x, MirrorContext):
        return {"type": "MirrorContext", "gamma_label": x.gamma.label, "v": encode(x.v),
                "vstar": encode(x.vstar)}
    if isinstance(x, Fraction):
        return rat(x)
    if isinstance(x, dict):
        return {k: encode(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [encode(v) for v in x]
    return x


def dumps(x: Any) -> str:
    return json.dumps(encode(x), sort_keys=True, separators=(",", ":"), ensure_ascii=False)


# ---------------------------------------------------------------------------
# decoders


def decode_lattice(obj, path="$") -> IntegralLattice:
    _check_type(obj, "IntegralLattice", path)
    label = _field(obj, "label", path, str)
    gram = _field(obj, "gram", path, list)
    try:
        L = IntegralLattice(tuple(tuple(int(parse_rat(x, f"{path}.gram[{i}][{j}]")) for j, x in enumerate(r))
                                  for i, r in enumerate(gram)), label)
    except LatticeError as e:
        raise SchemaError(str(e), f"{path}.gram") from None
    if "rank" in obj and obj["rank"] != L.rank:
        raise SchemaError("rank does not match gram", f"{path}.rank")
    return L


def _resolve(label, path) -> IntegralLattice:
    try:
        return lattice_by_label(label)
    except LatticeError as e:
        raise SchemaError(str(e), path) from None


def decode_vector(obj, path="$", lattice: IntegralLattice | None = None) -> Vector:
    _check_type(obj, "Vector", path)
    label = _field(obj, "lattice_label", path, str)
    coords = _field(obj, "coords", path, list)
    L = _resolve(label, f"{path}.lattice_label")
    if lattice is not None and L != lattice:
        raise SchemaError(f"vector lives in {label!r}, expected {lattice.label!r}", path)
    if len(coords) != L.rank:
        raise SchemaError(f"expected {L.rank} coordinates, got {len(coords)}", f"{path}.coords")
    return Vector(L, [parse_rat(c, f"{path}.coords[{i}]") for i, c in enumerate(coords)])


def decode_isometry(obj, path="$") -> Isometry:
    _check_type(obj, "Isometry", path)
    L = _resolve(_field(obj, "lattice_label", path, str), f"{path}.lattice_label")
    m = _field(obj, "matrix", path, list)
    if len(m) != L.rank or any(not isinstance(r, list) or len(r) != L.rank for r in m):
        raise SchemaError(f"matrix must be {L.rank}x{L.rank}", f"{path}.matrix")
    return Isometry(L, [[parse_rat(c, f"{path}.matrix[{i}][{j}]") for j, c in enumerate(r)]
                        for i, r in enumerate(m)])


def _wrap(fn, path):
    try:
        return fn()
    except SchemaError:
        raise
    except LatticeError as e:
        raise SchemaError(str(e), path) from None


def decode_plane(obj, path="$") -> OrientedPlane:
    _check_type(obj, "OrientedPlane", path)
    b1 = decode_vector(_field(obj, "b1", path), f"{path}.b1")
    b2 = decode_vector(_field(obj, "b2", path), f"{path}.b2")
    return _wrap(lambda: OrientedPlane(b1, b2), path)


def _decode_space(obj, path, cls):
    _check_type(obj, cls.__name__, path)
    basis = _field(obj, "basis", path, list)
    vs = tuple(decode_vector(b, f"{path}.basis[{i}]") for i, b in enumerate(basis))
    return _wrap(lambda: cls(vs), path)


def decode_three_space(obj, path="$") -> ThreeSpace:
    return _decode_space(obj, path, ThreeSpace)


def decode_four_space(obj, path="$") -> FourSpace:
    return _decode_space(obj, path, FourSpace)


def decode_line(obj, path="$") -> ComplexLine:
    _check_type(obj, "ComplexLine", path)
    re = decode_vector(_field(obj, "re", path), f"{path}.re")
    im = decode_vector(_field(obj, "im", path), f"{path}.im")
    return _wrap(lambda: ComplexLine(re, im), path)


def decode_triple(obj, path="$") -> KahlerTriple:
    _check_type(obj, "KahlerTriple", path)
    line = decode_line(_field(obj, "line", path), f"{path}.line")
    om = decode_vector(_field(obj, "omega", path), f"{path}.omega")
    B = decode_vector(_field(obj, "B", path), f"{path}.B")
    return _wrap(lambda: KahlerTriple(line, om, B), path)


def decode_pair(obj, path="$") -> PlanePair:
    _check_type(obj, "PlanePair", path)
    H1 = decode_plane(_field(obj, "H1", path), f"{path}.H1")
    H2 = decode_plane(_field(obj, "H2", path), f"{path}.H2")
    return _wrap(lambda: PlanePair(H1, H2), path)


def decode_mirror_image(obj, path="$") -> MirrorImage:
    _check_type(obj, "MirrorImage", path)
    s = decode_line(_field(obj, "sigmaV", path), f"{path}.sigmaV")
    om = decode_vector(_field(obj, "omegaV", path), f"{path}.omegaV")
    B = decode_vector(_field(obj, "BV", path), f"{path}.BV")
    return _wrap(lambda: MirrorImage(s, om, B), path)


def decode_context(obj, path="$") -> MirrorContext:
    _check_type(obj, "MirrorContext", path)
    L = _resolve(_field(obj, "gamma_label", path, str), f"{path}.gamma_label")
    v = decode_vector(_field(obj, "v", path), f"{path}.v", L)
    vs = decode_vector(_field(obj, "vstar", path), f"{path}.vstar", L)
    ctx = _wrap(lambda: MirrorContext(L, v, vs), path)
    _wrap(ctx.check, path)
    return ctx


DECODERS = {
    "IntegralLattice": decode_lattice,
    "Vector": decode_vector,
    "Isometry": decode_isometry,
    "OrientedPlane": decode_plane,
    "ThreeSpace": decode_three_space,
    "FourSpace": decode_four_space,
    "ComplexLine": decode_line,
    "KahlerTriple": decode_triple,
    "PlanePair": decode_pair,
    "MirrorImage": decode_mirror_image,
    "MirrorContext": decode_context,
}


def decode(obj, path="$"):
    """Decode any tagged object."""
    t = obj.get("type") if isinstance(obj, dict) else None
    if t not in DECODERS:
        raise SchemaError(f"unknown or missing type tag {t!r}", path)
    return DECODERS[t](obj, path)


def loads(text: str, expect: str | None = None):
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SchemaError(e.msg, "$", e.lineno) from None
    if expect is not None:
        if isinstance(obj, dict) and "type" not in obj:
            obj = {**obj, "type": expect}
        return DECODERS[expect](obj)
    return decode(obj)


def load_file(path: str, expect: str | None = None):
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    try:
        return loads(text, expect)
    except SchemaError as e:
        raise SchemaError(e.message, f"{path}:{e.path}", e.line) from None
