"""Versioned JSON run reports."""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import GroupCutError
from .extremality import ExtremalityVerdict, extremality_test
from .minimality import MinimalityReport, minimality_test
from .pwl import PwlPeriodic, rational_str

SCHEMA = 1


def _version() -> str:
    from . import __version__

    return __version__


@dataclass
class RunReport:
    input: dict
    minimality: MinimalityReport
    extremality: ExtremalityVerdict | None
    extremality_error: str | None = None
    timings: dict[str, float] = field(default_factory=dict)
    version: str = field(default_factory=_version)

    def to_json(self, include_timings: bool = False) -> dict:
        out = {
            "schema": SCHEMA,
            "version": self.version,
            "input": self.input,
            "minimality": self.minimality.to_json(),
            "extremality": None if self.extremality is None else self.extremality.to_json(),
        }
        if self.extremality_error is not None:
            out["extremality_error"] = self.extremality_error
        if include_timings:
            out["timings"] = {k: round(v, 6) for k, v in self.timings.items()}
        return out

    def dumps(self, include_timings: bool = False) -> str:
        return json.dumps(self.to_json(include_timings), indent=2, sort_keys=True) + "\n"


def input_descriptor(name: str | None = None, params: dict | None = None, file: str | None = None) -> dict:
    if file is not None:
        return {"file": file}
    return {
        "constructor": name,
        "parameters": {k: rational_str(Fraction(v)) for k, v in sorted((params or {}).items())},
    }


def run_report(pi: PwlPeriodic, descriptor: dict, f=None) -> RunReport:
    """Minimality, then extremality if minimal.  Timings are collected but
    only serialized on request, keeping default output byte-stable."""
    t0 = time.perf_counter()
    mini = minimality_test(pi, f)
    t1 = time.perf_counter()
    verdict, err = None, None
    if mini.is_minimal:
        try:
            verdict = extremality_test(pi, mini.f)
        except GroupCutError as exc:
            err = f"{type(exc).__name__}: {exc}"
    t2 = time.perf_counter()
    return RunReport(descriptor, mini, verdict, err, {"minimality": t1 - t0, "extremality": t2 - t1})
