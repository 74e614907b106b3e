"""JSON document formats: parsing, serialization, schema checks, hashing.

Two document kinds exist, one for combinatorial stack data and one for
morphism candidates; their exact field names are fixed by the schema files
shipped under ``toricdm/schemas``.  Integers whose magnitude exceeds the
53-bit range safe for double-based JSON readers are written as decimal
strings, and both forms are accepted on input.  Cone lists may name only the
maximal cones; the loader closes them under faces before anything else sees
the fan.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any

import jsonschema

from .errors import DocumentError
from .fans import SimplicialFan, close_under_faces, maximal_cones
from .gerbes import PicClass, picard_group
from .lattice import IntegerMatrix
from .morphisms import MorphismData, SparsePolynomial
from .stacky import StackyData

SCHEMA_VERSION = "1"
_JSON_SAFE_MAX = 2 ** 53 - 1


def encode_int(value: int):
    value = int(value)
    return value if abs(value) <= _JSON_SAFE_MAX else str(value)


def decode_int(value, where: str = "") -> int:
    if isinstance(value, bool):
        raise DocumentError(f"expected an integer, got a boolean", where)
    if isinstance(value, int):
        return value
    if isinstance(value, str):
        try:
            return int(value, 10)
        except ValueError:
            raise DocumentError(f"not an integer literal: {value!r}", where) from None
    raise DocumentError(f"expected an integer, got {type(value).__name__}", where)


def _decode_int_list(values, where: str) -> list[int]:
    if not isinstance(values, list):
        raise DocumentError("expected a list of integers", where)
    return [decode_int(v, f"{where}/{i}") for i, v in enumerate(values)]


def _decode_int_grid(values, where: str) -> list[list[int]]:
    if not isinstance(values, list):
        raise DocumentError("expected a list of integer lists", where)
    return [_decode_int_list(row, f"{where}/{i}") for i, row in enumerate(values)]


def encode_grid(matrix: IntegerMatrix) -> list[list[Any]]:
    return [[encode_int(x) for x in row] for row in matrix.entries]


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    text = resources.files(__package__).joinpath(f"schemas/{name}").read_text()
    return json.loads(text)


def schema_errors(document: Any, schema_name: str) -> list[str]:
    """Human-readable schema violations, empty when the document conforms."""
    validator = jsonschema.Draft202012Validator(load_schema(schema_name))
    messages = []
    for err in sorted(validator.iter_errors(document), key=lambda e: list(e.absolute_path)):
        path = "/" + "/".join(str(p) for p in err.absolute_path)
        messages.append(f"{path}: {err.message}")
    return messages


def document_hash(document: Any) -> str:
    """SHA-256 of the canonical JSON form, insensitive to key order."""
    canonical = json.dumps(document, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()


# ---------------------------------------------------------------------------
# Stack data documents
# ---------------------------------------------------------------------------

def parse_stacky_document(document: Any) -> StackyData:
    """Build a :class:`StackyData` from a parsed JSON object.

    Structural problems raise :class:`DocumentError` with a location; the
    semantic invariants are left to :func:`toricdm.stacky.validate_data`.
    """
    problems = schema_errors(document, "stacky_data.schema.json")
    if problems:
        location, _, message = problems[0].partition(": ")
        raise DocumentError(message, location)
    rank = decode_int(document["lattice_rank"], "/lattice_rank")
    rays = _decode_int_grid(document["rays"], "/rays")
    cones = _decode_int_grid(document["cones"], "/cones")
    r = _decode_int_list(document["r"], "/r")
    b = _decode_int_grid(document["b"], "/b")
    if rank < 0:
        raise DocumentError("lattice_rank must be nonnegative", "/lattice_rank")
    for i, row in enumerate(b):
        if len(row) != len(rays):
            raise DocumentError(
                f"b row {i} has {len(row)} entries for {len(rays)} rays", f"/b/{i}")
    if len(b) != len(r):
        raise DocumentError(f"{len(b)} b rows for {len(r)} root orders", "/b")
    for i, idx_list in enumerate(cones):
        for idx in idx_list:
            if not 0 <= idx < len(rays):
                raise DocumentError(f"cone uses unknown ray index {idx}", f"/cones/{i}")
    fan = SimplicialFan(rank, tuple(tuple(v) for v in rays), close_under_faces(cones))
    return StackyData(fan=fan, r=tuple(r),
                      b=IntegerMatrix.from_rows(b, len(rays)))


def serialize_stacky_data(data: StackyData) -> dict:
    """Document form with only the maximal cones listed."""
    return {
        "schema_version": SCHEMA_VERSION,
        "lattice_rank": encode_int(data.lattice_rank),
        "rays": [[encode_int(x) for x in ray] for ray in data.fan.rays],
        "cones": [sorted(cone) for cone in maximal_cones(data.fan)],
        "r": [encode_int(x) for x in data.r],
        "b": encode_grid(data.b),
    }


# ---------------------------------------------------------------------------
# Morphism documents
# ---------------------------------------------------------------------------

def _parse_fraction(text, where: str) -> Fraction:
    if not isinstance(text, str):
        raise DocumentError("coefficients must be p/q strings", where)
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise DocumentError(f"bad coefficient {text!r}: {exc}", where) from None


def parse_morphism_document(document: Any) -> MorphismData:
    problems = schema_errors(document, "morphism.schema.json")
    if problems:
        location, _, message = problems[0].partition(": ")
        raise DocumentError(message, location)
    source = parse_stacky_document(document["source"])
    target = parse_stacky_document(document["target"])
    n_source = source.ray_count

    polys = []
    for p_idx, term_list in enumerate(document["polynomials"]):
        terms = []
        for t_idx, term in enumerate(term_list):
            where = f"/polynomials/{p_idx}/{t_idx}"
            coeff = _parse_fraction(term["coefficient"], where + "/coefficient")
            exponents = _decode_int_list(term["exponents"], where + "/exponents")
            if len(exponents) != n_source:
                raise DocumentError(
                    f"exponent vector has {len(exponents)} entries for "
                    f"{n_source} source rays", where + "/exponents")
            if any(e < 0 for e in exponents):
                raise DocumentError("exponents must be nonnegative", where + "/exponents")
            terms.append((coeff, tuple(exponents)))
        polys.append(SparsePolynomial(n_source, tuple(terms)))

    presentation = picard_group(source) if source.is_rigid else None
    chi = []
    for c_idx, vector in enumerate(document["chi"]):
        values = _decode_int_list(vector, f"/chi/{c_idx}")
        if len(values) != n_source:
            raise DocumentError(
                f"chi vector has {len(values)} entries for {n_source} source rays",
                f"/chi/{c_idx}")
        if presentation is None:
            raise DocumentError("chi classes require a rigid source", f"/chi/{c_idx}")
        chi.append(PicClass(tuple(values), presentation))

    return MorphismData(source=source, target=target,
                        polys=tuple(polys), chi=tuple(chi))


def serialize_morphism_data(md: MorphismData) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "source": serialize_stacky_data(md.source),
        "target": serialize_stacky_data(md.target),
        "polynomials": [
            [{"coefficient": str(coeff), "exponents": [encode_int(e) for e in exps]}
             for coeff, exps in poly.terms]
            for poly in md.polys
        ],
        "chi": [[encode_int(x) for x in cls.representative] for cls in md.chi],
    }


# ---------------------------------------------------------------------------
# File access
# ---------------------------------------------------------------------------

def read_json(path) -> Any:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except OSError as exc:
        raise DocumentError(f"cannot read {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON in {path}: {exc}", f"line {exc.lineno}") from None


def load_stacky_file(path) -> tuple[StackyData, str]:
    document = read_json(path)
    return parse_stacky_document(document), document_hash(document)


def load_morphism_file(path) -> tuple[MorphismData, str]:
    document = read_json(path)
    return parse_morphism_document(document), document_hash(document)
