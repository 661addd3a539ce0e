"""Interchange formats: IFS spec files, segment files, canonical reports.

Scalars travel as strings so no precision is lost: rationals as "p/q" or
decimal literals, binary64 values as hex floats, Q(sqrt2) elements as
"a+b*sqrt2".  Report serialization is canonical (sorted keys, floats at 17
significant digits), so identical inputs produce identical bytes.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from . import __version__
from .convex import ConvexPointSet
from .errors import SpecFormatError
from .families import Segment
from .ifs import AffineMap, IteratedFunctionSystem, make_ifs
from .scalars import FLOAT, QSqrt2, format_scalar, parse_scalar

SPEC_VERSION = 1


@dataclass(frozen=True)
class SegmentSpec:
    segments: tuple
    meta: dict


@dataclass(frozen=True)
class UnionSpec:
    members: tuple        # IteratedFunctionSystem per piece
    meta: dict


def _arithmetic_of(values) -> str:
    kinds = set()
    for v in values:
        if isinstance(v, QSqrt2):
            kinds.add("sqrt2")
        elif isinstance(v, float):
            kinds.add("float")
    if "sqrt2" in kinds:
        return "sqrt2"
    if "float" in kinds:
        return "float"
    return "rational"


def _ifs_scalars(ifs: IteratedFunctionSystem):
    for m in ifs.maps:
        for row in m.matrix:
            yield from row
        yield from m.translation
    for p in ifs.seed.points:
        yield from p


def emit_ifs_spec(ifs: IteratedFunctionSystem, meta: Optional[dict] = None) -> bytes:
    doc = {
        "version": SPEC_VERSION,
        "type": "ifs",
        "dim": ifs.dim,
        "arithmetic": _arithmetic_of(_ifs_scalars(ifs)),
        "maps": [
            {
                "matrix": [[format_scalar(x) for x in row] for row in m.matrix],
                "translation": [format_scalar(x) for x in m.translation],
            }
            for m in ifs.maps
        ],
        "seed": [[format_scalar(x) for x in p] for p in ifs.seed.points],
        "meta": meta or {},
    }
    return canonical_json(doc)


def emit_segments_spec(segments, meta: Optional[dict] = None) -> bytes:
    doc = {
        "version": SPEC_VERSION,
        "type": "segments",
        "dim": 2,
        "segments": [
            [[format_scalar(x) for x in s.a], [format_scalar(x) for x in s.b]]
            for s in segments
        ],
        "meta": meta or {},
    }
    return canonical_json(doc)


def parse_spec(data: bytes):
    """Parse a spec file into an IteratedFunctionSystem or SegmentSpec."""
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SpecFormatError(f"not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise SpecFormatError("spec must be a JSON object")
    kind = doc.get("type", "ifs")
    if doc.get("version") != SPEC_VERSION:
        raise SpecFormatError(f"unsupported spec version {doc.get('version')!r}")
    if kind == "ifs":
        return _parse_ifs(doc)
    if kind == "segments":
        return _parse_segments(doc)
    if kind == "ifs_union":
        members = doc.get("members")
        if not isinstance(members, list) or not members:
            raise SpecFormatError("union spec needs a nonempty members list")
        return UnionSpec(
            members=tuple(_parse_ifs(m) for m in members),
            meta=doc.get("meta", {}),
        )
    raise SpecFormatError(f"unknown spec type {kind!r}")


def _parse_point(entry, dim):
    if not isinstance(entry, list) or len(entry) != dim:
        raise SpecFormatError(f"point {entry!r} does not have dimension {dim}")
    return tuple(parse_scalar(c) for c in entry)


def _parse_ifs(doc) -> IteratedFunctionSystem:
    try:
        dim = int(doc["dim"])
        raw_maps = doc["maps"]
        raw_seed = doc["seed"]
    except (KeyError, TypeError, ValueError) as exc:
        raise SpecFormatError(f"malformed ifs spec: {exc}") from exc
    if not isinstance(raw_maps, list) or not raw_maps:
        raise SpecFormatError("spec needs a nonempty maps list")
    maps = []
    for entry in raw_maps:
        try:
            matrix = tuple(
                tuple(parse_scalar(x) for x in row) for row in entry["matrix"]
            )
            translation = tuple(parse_scalar(x) for x in entry["translation"])
        except (KeyError, TypeError) as exc:
            raise SpecFormatError(f"malformed map entry: {exc}") from exc
        if len(matrix) != dim or any(len(r) != dim for r in matrix) or len(translation) != dim:
            raise SpecFormatError("map shape does not match dim")
        maps.append(AffineMap(matrix, translation))
    if not isinstance(raw_seed, list) or not raw_seed:
        raise SpecFormatError("spec needs a nonempty seed point list")
    seed = ConvexPointSet(dim, tuple(_parse_point(p, dim) for p in raw_seed))
    # float tolerance here: exact re-validation of float-sourced specs would
    # reject images that graze the hull by one ulp
    return make_ifs(tuple(maps), seed, FLOAT)


def _parse_segments(doc) -> SegmentSpec:
    try:
        raw = doc["segments"]
    except KeyError as exc:
        raise SpecFormatError("segments spec needs a segments list") from exc
    segs = []
    for entry in raw:
        if not isinstance(entry, list) or len(entry) != 2:
            raise SpecFormatError(f"malformed segment {entry!r}")
        segs.append(Segment(_parse_point(entry[0], 2), _parse_point(entry[1], 2)))
    return SegmentSpec(segments=tuple(segs), meta=doc.get("meta", {}))


# -- canonical report serialization ---------------------------------------------


def _canonical(value):
    """Reports carry every scalar as a string: floats at 17 significant
    digits, exact values in spec-file notation.  Keeps bytes deterministic."""
    if value is None or isinstance(value, (bool, int, str)):
        return value
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, (Fraction, QSqrt2)):
        return format_scalar(value)
    if isinstance(value, dict):
        return {str(k): _canonical(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_canonical(v) for v in value]
    raise SpecFormatError(f"cannot serialize {type(value).__name__} into a report")


def canonical_json(doc) -> bytes:
    return (
        json.dumps(_canonical(doc), sort_keys=True, indent=1, ensure_ascii=True) + "\n"
    ).encode("ascii")


def input_digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def report_document(payloads: dict, digest: str) -> bytes:
    doc = {"tool": "shadowlab", "tool_version": __version__, "input_digest": digest}
    doc.update(payloads)
    return canonical_json(doc)
