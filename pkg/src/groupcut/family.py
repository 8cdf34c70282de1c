"""Seeded random search over a parametric family of functions.

A family is given in JSON::

    {"parameters": [{"name": "lam", "min": "1/100", "max": "99/100", "max_denominator": 50}],
     "breakpoints": ["0", "1/12", ...],
     "values": ["0", "1", "10/11*lam + 2/13*(1 - lam)", ...],
     "constraints": ["lam >= 0", "1 - lam"]}

Expressions are affine in the parameters with rational coefficients.  A
constraint is either a comparison (``>=`` or ``<=``) or a bare
expression read as ``expr >= 0``.  Each sample draws every parameter
from its own 64-bit LCG stream seeded with ``seed + index``, so samples
are independent of evaluation order.
"""

from __future__ import annotations

import ast
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .errors import BadFamilySpec, GroupCutError
from .extremality import EXTREME, INCONCLUSIVE, NOT_EXTREME, extremality_test
from .minimality import minimality_test
from .pwl import PwlPeriodic, as_rational, from_breakpoints, rational_str

# Knuth's MMIX constants
LCG_A = 6364136223846793005
LCG_C = 1442695040888963407
LCG_MASK = (1 << 64) - 1

TALLY_KEYS = ("invalid", "not_minimal", "minimal_not_extreme", "extreme", "inconclusive")


class Lcg64:
    """x <- a*x + c mod 2**64; outputs use the high 32 bits."""

    def __init__(self, seed: int):
        self.state = seed & LCG_MASK

    def next(self) -> int:
        self.state = (LCG_A * self.state + LCG_C) & LCG_MASK
        return self.state

    def below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection on the high 32 bits."""
        if not 0 < n <= 1 << 32:
            raise ValueError("range must be in (0, 2**32]")
        limit = (1 << 32) - (1 << 32) % n
        while True:
            x = self.next() >> 32
            if x < limit:
                return x % n


# -- affine expressions ------------------------------------------------------

Affine = dict[str, Fraction]  # "" holds the constant term


def _const(e: Affine) -> Fraction | None:
    return e.get("", Fraction(0)) if all(k == "" or v == 0 for k, v in e.items()) else None


def _combine(a: Affine, b: Affine, sign: int) -> Affine:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + sign * v
    return {k: v for k, v in out.items() if v != 0 or k == ""}


def _scale(a: Affine, c: Fraction) -> Affine:
    return {k: v * c for k, v in a.items()}


def _affine(node: ast.AST, names: set[str], text: str) -> Affine:
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return {"": Fraction(node.value)}
    if isinstance(node, ast.Name):
        if node.id not in names:
            raise BadFamilySpec(f"unknown parameter {node.id!r} in {text!r}")
        return {"": Fraction(0), node.id: Fraction(1)}
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        inner = _affine(node.operand, names, text)
        return _scale(inner, Fraction(-1 if isinstance(node.op, ast.USub) else 1))
    if isinstance(node, ast.BinOp):
        left, right = _affine(node.left, names, text), _affine(node.right, names, text)
        if isinstance(node.op, ast.Add):
            return _combine(left, right, 1)
        if isinstance(node.op, ast.Sub):
            return _combine(left, right, -1)
        if isinstance(node.op, ast.Mult):
            cl, cr = _const(left), _const(right)
            if cl is not None:
                return _scale(right, cl)
            if cr is not None:
                return _scale(left, cr)
            raise BadFamilySpec(f"product of parameters is not affine: {text!r}")
        if isinstance(node.op, ast.Div):
            cr = _const(right)
            if cr is None:
                raise BadFamilySpec(f"division by a parameter is not affine: {text!r}")
            if cr == 0:
                raise BadFamilySpec(f"division by zero in {text!r}")
            return _scale(left, 1 / cr)
    raise BadFamilySpec(f"unsupported syntax in expression {text!r}")


def parse_affine(text: str, names: set[str]) -> Affine:
    """Parse a rational affine expression such as ``"1/2 - 3*lam/4"``."""
    if not isinstance(text, str):
        raise BadFamilySpec(f"expression must be a string, got {text!r}")
    try:
        tree = ast.parse(text, mode="eval")
    except SyntaxError as exc:
        raise BadFamilySpec(f"cannot parse {text!r}: {exc.msg}") from None
    return _affine(tree.body, names, text)


def parse_constraint(text: str, names: set[str]) -> Affine:
    """Return an affine form that must be >= 0."""
    try:
        tree = ast.parse(text, mode="eval").body
    except SyntaxError as exc:
        raise BadFamilySpec(f"cannot parse {text!r}: {exc.msg}") from None
    if isinstance(tree, ast.Compare):
        if len(tree.ops) != 1 or not isinstance(tree.ops[0], (ast.GtE, ast.LtE)):
            raise BadFamilySpec(f"constraints must use a single >= or <=: {text!r}")
        lhs = _affine(tree.left, names, text)
        rhs = _affine(tree.comparators[0], names, text)
        return _combine(lhs, rhs, -1) if isinstance(tree.ops[0], ast.GtE) else _combine(rhs, lhs, -1)
    return _affine(tree, names, text)


def evaluate(e: Affine, params: dict[str, Fraction]) -> Fraction:
    return sum((v * (params[k] if k else 1) for k, v in e.items()), Fraction(0))


# -- family spec -------------------------------------------------------------


@dataclass(frozen=True)
class ParameterRange:
    name: str
    lo: Fraction
    hi: Fraction
    max_denominator: int

    def candidates(self) -> list[Fraction]:
        """Distinct rationals in [lo, hi] with denominator <= max_denominator, sorted."""
        out = set()
        for d in range(1, self.max_denominator + 1):
            for n in range(math.ceil(self.lo * d), math.floor(self.hi * d) + 1):
                out.add(Fraction(n, d))
        return sorted(out)


@dataclass
class FamilySpec:
    parameters: list[ParameterRange]
    breakpoints: list[Affine]
    values: list[Affine]
    constraints: list[Affine] = field(default_factory=list)
    source: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._grids = [p.candidates() for p in self.parameters]
        for p, grid in zip(self.parameters, self._grids):
            if not grid:
                raise BadFamilySpec(f"parameter {p.name!r} has no rational in range with the given denominator bound")
            if len(grid) > 1 << 32:
                raise BadFamilySpec(f"parameter {p.name!r} has too many candidates")

    @classmethod
    def from_dict(cls, data: dict) -> "FamilySpec":
        if not isinstance(data, dict):
            raise BadFamilySpec("family spec must be a JSON object")
        for key in ("parameters", "breakpoints", "values"):
            if not isinstance(data.get(key), list):
                raise BadFamilySpec(f"family spec needs a list {key!r}")
        params = []
        for p in data["parameters"]:
            try:
                name = p["name"]
                lo, hi = as_rational(p["min"]), as_rational(p["max"])
                den = int(p["max_denominator"])
            except (KeyError, TypeError, ValueError) as exc:
                raise BadFamilySpec(f"bad parameter entry {p!r}: {exc}") from None
            if not name.isidentifier():
                raise BadFamilySpec(f"parameter name {name!r} is not an identifier")
            if lo > hi or den < 1:
                raise BadFamilySpec(f"empty range for parameter {name!r}")
            params.append(ParameterRange(name, lo, hi, den))
        names = {p.name for p in params}
        if len(names) != len(params):
            raise BadFamilySpec("duplicate parameter names")
        bps = [parse_affine(e, names) for e in data["breakpoints"]]
        vals = [parse_affine(e, names) for e in data["values"]]
        if len(bps) != len(vals):
            raise BadFamilySpec("breakpoints and values differ in length")
        cons = [parse_constraint(e, names) for e in data.get("constraints", [])]
        return cls(params, bps, vals, cons, data)

    @classmethod
    def from_file(cls, path) -> "FamilySpec":
        try:
            data = json.loads(Path(path).read_text())
        except json.JSONDecodeError as exc:
            raise BadFamilySpec(f"{path}: invalid JSON ({exc})") from None
        return cls.from_dict(data)

    def sample(self, seed: int) -> dict[str, Fraction]:
        rng = Lcg64(seed)
        return {p.name: grid[rng.below(len(grid))] for p, grid in zip(self.parameters, self._grids)}

    def satisfied(self, params: dict[str, Fraction]) -> bool:
        return all(evaluate(c, params) >= 0 for c in self.constraints)

    def instantiate(self, params: dict[str, Fraction]) -> PwlPeriodic:
        """Continuous interpolant; raises a ConstructionError on bad data."""
        return from_breakpoints([evaluate(e, params) for e in self.breakpoints], [evaluate(e, params) for e in self.values])


@dataclass
class SampleOutcome:
    index: int
    parameters: dict[str, Fraction]
    category: str
    detail: str = ""


@dataclass
class SearchSummary:
    count: int
    seed: int
    tallies: dict[str, int]
    extreme_samples: list[SampleOutcome] = field(default_factory=list)

    @property
    def extreme_count(self) -> int:
        return self.tallies["extreme"]

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "count": self.count,
            "seed": self.seed,
            "tallies": dict(self.tallies),
            "extreme_count": self.extreme_count,
            "extreme_samples": [
                {"index": s.index, "parameters": {k: rational_str(v) for k, v in s.parameters.items()}}
                for s in self.extreme_samples
            ],
        }


def classify(spec: FamilySpec, index: int, seed: int) -> SampleOutcome:
    params = spec.sample(seed + index)
    if not spec.satisfied(params):
        return SampleOutcome(index, params, "invalid", "constraint violated")
    try:
        pi = spec.instantiate(params)
    except GroupCutError as exc:
        return SampleOutcome(index, params, "invalid", str(exc))
    report = minimality_test(pi)
    if not report.is_minimal:
        return SampleOutcome(index, params, "not_minimal", ", ".join(sorted(report.checks_failed())))
    status = extremality_test(pi, report.f).status
    category = {EXTREME: "extreme", NOT_EXTREME: "minimal_not_extreme", INCONCLUSIVE: "inconclusive"}[status]
    return SampleOutcome(index, params, category)


def search_random(spec: FamilySpec, count: int, seed: int) -> SearchSummary:
    tallies = dict.fromkeys(TALLY_KEYS, 0)
    extreme = []
    for i in range(count):
        out = classify(spec, i, seed)
        tallies[out.category] += 1
        if out.category == "extreme":
            extreme.append(out)
    return SearchSummary(count, seed, tallies, extreme)
