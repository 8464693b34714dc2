"""JSON session and report files.

Rationals are written as ``"p/q"`` strings, elements and basis vectors in the
element grammar, and keys are sorted so files are stable under re-saving.

Session file::

    {"format": "aidlab-session/1",
     "spec": {"rank": 2, "gram": [["1", "0"], ["0", "1"]], "variant": "affine"},
     "elements": {"X": "h1 t^2 + x1 t^1"},
     "maps": {"D": {"window": 4, "images": [["h1 t^2", "K"]]}},
     "suite": {"window": 6, "seed": 42}}

Report file::

    {"metadata": {"tool": "aidlab", "version": ..., "seed": ..., "spec": {...}},
     "checks": [{"name": ..., "params": {...}, "status": "pass" | "fail" | "finding",
                 "witness": {...} | null, "timing": seconds}]}
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any

from .algebra import AlgSpec, Elem, make_spec
from .derivations import DMap
from .linalg import RatMatrix
from .textio import format_basis, format_element, parse_basis, parse_element

__all__ = [
    "SESSION_FORMAT",
    "Session",
    "CheckResult",
    "ReportFile",
    "spec_to_json",
    "spec_from_json",
    "dmap_to_json",
    "dmap_from_json",
    "jsonable",
]

SESSION_FORMAT = "aidlab-session/1"


def spec_to_json(spec: AlgSpec) -> dict:
    return {
        "rank": spec.rank,
        "gram": [[str(v) for v in row] for row in spec.gram.rows],
        "variant": spec.variant.value,
    }


def spec_from_json(data: dict) -> AlgSpec:
    unknown = set(data) - {"rank", "gram", "variant"}
    if unknown:
        raise ValueError(f"unknown spec keys: {sorted(unknown)}")
    gram = [[Fraction(v) for v in row] for row in data["gram"]]
    return make_spec(int(data["rank"]), gram, data.get("variant", "affine"))


def dmap_to_json(D: DMap) -> dict:
    return {
        "window": D.window,
        "images": [[format_basis(b), format_element(e)] for b, e in D.images.items() if e],
    }


def dmap_from_json(spec: AlgSpec, data: dict) -> DMap:
    images = {}
    for b_text, e_text in data.get("images", []):
        images[parse_basis(b_text, spec)] = parse_element(e_text, spec)
    return DMap(spec, int(data["window"]), images)


@dataclass
class Session:
    spec: AlgSpec
    elements: dict[str, Elem] = field(default_factory=dict)
    maps: dict[str, DMap] = field(default_factory=dict)
    suite: dict[str, Any] = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "format": SESSION_FORMAT,
            "spec": spec_to_json(self.spec),
            "elements": {k: format_element(v) for k, v in self.elements.items()},
            "maps": {k: dmap_to_json(v) for k, v in self.maps.items()},
            "suite": dict(self.suite),
        }

    @classmethod
    def from_json(cls, data: dict) -> "Session":
        if data.get("format") != SESSION_FORMAT:
            raise ValueError(f"not an {SESSION_FORMAT} file")
        spec = spec_from_json(data["spec"])
        elements = {k: parse_element(v, spec) for k, v in data.get("elements", {}).items()}
        maps = {k: dmap_from_json(spec, v) for k, v in data.get("maps", {}).items()}
        return cls(spec, elements, maps, dict(data.get("suite", {})))

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    @classmethod
    def loads(cls, text: str) -> "Session":
        return cls.from_json(json.loads(text))

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps() + "\n")

    @classmethod
    def load(cls, path: str | Path) -> "Session":
        return cls.loads(Path(path).read_text())


def jsonable(value):
    """Convert witnesses made of Fractions, elements, maps and tuples to plain JSON."""
    from .algebra import BasisVec
    from .kernel import LPoly

    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, Elem):
        return format_element(value)
    if isinstance(value, BasisVec):
        return format_basis(value)
    if isinstance(value, LPoly):
        return str(value)
    if isinstance(value, DMap):
        return dmap_to_json(value)
    if isinstance(value, AlgSpec):
        return spec_to_json(value)
    if isinstance(value, RatMatrix):
        return [[str(v) for v in row] for row in value.rows]
    if isinstance(value, dict):
        return {str(k) if not isinstance(k, tuple) else ",".join(map(str, k)): jsonable(v)
                for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return value


@dataclass
class CheckResult:
    name: str
    status: str
    params: dict[str, Any] = field(default_factory=dict)
    witness: Any = None
    detail: str = ""
    timing: float = 0.0

    @property
    def failed(self) -> bool:
        return self.status == "fail"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "params": jsonable(self.params),
            "status": self.status,
            "witness": jsonable(self.witness),
            "detail": self.detail,
            "timing": round(self.timing, 4),
        }


@dataclass
class ReportFile:
    metadata: dict[str, Any]
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def failed(self) -> bool:
        return any(c.failed for c in self.checks)

    def to_json(self) -> dict:
        return {"metadata": jsonable(self.metadata), "checks": [c.to_json() for c in self.checks]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def save(self, path: str | Path) -> None:
        Path(path).write_text(self.dumps() + "\n")

    def text(self) -> str:
        width = max((len(c.name) for c in self.checks), default=0)
        lines = [f"{c.status.upper():8s}{c.name:{width}s}  {c.detail}".rstrip() for c in self.checks]
        n_fail = sum(c.failed for c in self.checks)
        lines.append(f"{len(self.checks)} checks, {n_fail} failed")
        return "\n".join(lines)
