"""Turn building point lists into Brick models.

Thin Python layer over the native core: scores come back as Fractions,
stage summaries as StageResult tuples.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple, Optional

_PACKAGED_DATA = Path(__file__).with_name("data")
if "BRICKGEN_DATA" not in os.environ and _PACKAGED_DATA.is_dir():
    os.environ["BRICKGEN_DATA"] = str(_PACKAGED_DATA)

from . import _core  # noqa: E402
from ._core import (  # noqa: E402,F401
    ConflictError,
    Error,
    InvalidInput,
    MissingPrerequisite,
    NotFound,
    ParseError,
    canonical_turtle,
    data_dir,
    timeseries_id,
)

__all__ = [
    "ConflictError",
    "Error",
    "InvalidInput",
    "MissingPrerequisite",
    "NotFound",
    "ParseError",
    "Project",
    "StageResult",
    "Toolkit",
    "canonical_turtle",
    "data_dir",
    "jaccard",
    "parse_turtle",
    "timeseries_id",
]


class StageResult(NamedTuple):
    stage: str
    summary: str
    failed: bool


def jaccard(a, b) -> Fraction:
    num, den = _core.jaccard(set(a), set(b))
    return Fraction(num, den)


def parse_turtle(text: str):
    """Returns (triples, prefixes). Literal objects come as (lexical, datatype)."""
    raw, prefixes = _core.parse_turtle(text)
    triples = set()
    for s, p, o, dt in raw:
        triples.add((s, p, o if dt is None else (o, dt)))
    return triples, dict(prefixes)


def _match(d: dict) -> dict:
    d = dict(d)
    d["score"] = Fraction(*d["score"])
    d["alternates"] = [(cls, Fraction(*score)) for cls, score in d["alternates"]]
    return d


class Toolkit:
    """Tokenizer, matcher and validator over one data directory."""

    def __init__(self, data: Optional[str] = None):
        self._t = _core.Toolkit(str(data or data_dir()))

    def tokenize(self, label: str, code: str = "") -> dict:
        return self._t.tokenize(label, code)

    def match(self, label: str, code: str = "") -> dict:
        return _match(self._t.match(label, code))

    def superclass_chain(self, cls: str) -> list:
        return self._t.superclass_chain(cls)

    def validate(self, model_turtle: str, templates_path: str) -> dict:
        return json.loads(self._t.validate(model_turtle, str(templates_path)))


class Project:
    """A project directory driven stage by stage or all at once."""

    def __init__(self, pipeline):
        self._p = pipeline

    @classmethod
    def create(cls, directory, id: str, *, prefix: str = "", base: str = "", registry: str = "",
               threshold: str = "", toggles: str = "", templates: str = "") -> "Project":
        return cls(_core.Pipeline.init(str(directory), id, prefix, base, str(registry), threshold, toggles,
                                       str(templates)))

    @classmethod
    def open(cls, directory) -> "Project":
        return cls(_core.Pipeline.open(str(directory)))

    @property
    def dir(self) -> Path:
        return Path(self._p.dir)

    @property
    def config(self) -> dict:
        return json.loads(self._p.config_json())

    def read(self, artifact: str) -> str:
        return self._p.read(artifact)

    def has(self, artifact: str) -> bool:
        return self._p.has(artifact)

    def ingest(self, pointlist, timeseries="") -> StageResult:
        return StageResult(*self._p.ingest(str(pointlist), str(timeseries)))

    def translate(self) -> StageResult:
        return StageResult(*self._p.translate())

    def tokenize(self) -> StageResult:
        return StageResult(*self._p.tokenize())

    def match(self) -> StageResult:
        return StageResult(*self._p.match())

    def layout(self) -> StageResult:
        return StageResult(*self._p.layout())

    def graph(self) -> StageResult:
        return StageResult(*self._p.graph())

    def validate(self, templates="") -> StageResult:
        return StageResult(*self._p.validate(str(templates)))

    def report(self) -> StageResult:
        return StageResult(*self._p.report())

    def run_all(self, pointlist, timeseries="", templates="") -> list:
        return [StageResult(*r) for r in self._p.run_all(str(pointlist), str(timeseries), str(templates))]

    def refresh(self) -> list:
        return [StageResult(*r) for r in self._p.refresh()]

    def rebuild(self) -> list:
        return [StageResult(*r) for r in self._p.rebuild()]

    def matches(self) -> list:
        return [_match(m) for m in self._p.matches()]

    def stats(self) -> dict:
        return self._p.stats()

    def override(self, code: str, cls: Optional[str], note: str = "") -> dict:
        return _match(self._p.override_match(code, cls, note))

    def prefixes(self) -> list:
        return self._p.prefixes()

    def layout_json(self) -> dict:
        return json.loads(self.read("layout.json"))

    def model(self) -> str:
        return self.read("model.ttl")

    def timeseries(self, ts_id: str, start: str = "0001-01-01", end: str = "9999-12-31") -> list:
        return self._p.timeseries(ts_id, start, end)
