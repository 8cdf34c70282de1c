import json
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from groupcut.errors import BadFamilySpec
from groupcut.family import (
    LCG_A,
    LCG_C,
    FamilySpec,
    Lcg64,
    ParameterRange,
    classify,
    evaluate,
    parse_affine,
    parse_constraint,
    search_random,
)

GMIC_FAMILY = {
    "parameters": [{"name": "f", "min": "1/50", "max": "49/50", "max_denominator": 50}],
    "breakpoints": ["0", "f", "1"],
    "values": ["0", "1", "0"],
}


def test_lcg_recurrence():
    g = Lcg64(0)
    assert g.next() == LCG_C
    assert g.next() == (LCG_A * LCG_C + LCG_C) % 2**64
    assert Lcg64(2**64 + 5).state == 5


@given(st.integers(0, 2**64 - 1), st.integers(1, 1000))
def test_below_is_in_range(seed, n):
    assert 0 <= Lcg64(seed).below(n) < n


def test_below_rejects_bad_range():
    with pytest.raises(ValueError):
        Lcg64(1).below(0)


def test_parse_affine():
    e = parse_affine("1/2 - 3*lam/4 + (lam - 1)*2", {"lam"})
    assert evaluate(e, {"lam": F(1, 3)}) == F(1, 2) - F(1, 4) + F(-4, 3)
    c = parse_constraint("lam <= 1/3", {"lam"})
    assert evaluate(c, {"lam": F(1, 3)}) == 0
    assert evaluate(c, {"lam": F(1, 2)}) < 0
    assert evaluate(parse_constraint("lam - 1/5", {"lam"}), {"lam": F(1, 5)}) == 0


@pytest.mark.parametrize(
    "text",
    ["lam*lam", "1/lam", "mu + 1", "lam ** 2", "abs(lam)", "0.5*lam", "1/0", "lam +", "lam < 1"],
)
def test_parse_rejects_non_affine(text):
    with pytest.raises(BadFamilySpec):
        parse_constraint(text, {"lam"})


def test_candidates():
    r = ParameterRange("x", F(0), F(1), 3)
    assert r.candidates() == [0, F(1, 3), F(1, 2), F(2, 3), 1]


def test_bad_specs(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(BadFamilySpec):
        FamilySpec.from_file(bad)
    with pytest.raises(BadFamilySpec):
        FamilySpec.from_dict({"parameters": []})
    with pytest.raises(BadFamilySpec):
        FamilySpec.from_dict(dict(GMIC_FAMILY, values=["0", "1"]))
    with pytest.raises(BadFamilySpec):
        FamilySpec.from_dict(
            dict(GMIC_FAMILY, parameters=[{"name": "f", "min": "1/3", "max": "2/5", "max_denominator": 2}])
        )


def test_sampling_is_deterministic():
    spec = FamilySpec.from_dict(GMIC_FAMILY)
    assert [spec.sample(s) for s in range(20)] == [spec.sample(s) for s in range(20)]
    a, b = search_random(spec, 10, 7), search_random(spec, 10, 7)
    assert a.to_json() == b.to_json()


def test_gmic_family_is_all_extreme():
    summary = search_random(FamilySpec.from_dict(GMIC_FAMILY), 100, 1)
    assert summary.extreme_count == 100
    d = summary.to_json()
    assert d["schema"] == 1
    assert d["tallies"]["extreme"] == 100
    assert len(d["extreme_samples"]) == 100


def test_constraint_violations_are_invalid():
    spec = FamilySpec.from_dict(dict(GMIC_FAMILY, constraints=["f >= 2"]))
    assert classify(spec, 0, 3).category == "invalid"


def test_non_minimal_samples():
    spec = FamilySpec.from_dict(dict(GMIC_FAMILY, values=["0", "1/2", "0"]))
    assert search_random(spec, 5, 0).tallies["not_minimal"] == 5


def test_bad_breakpoints_are_invalid():
    spec = FamilySpec.from_dict(dict(GMIC_FAMILY, breakpoints=["0", "f + 1", "1"]))
    assert classify(spec, 0, 0).category == "invalid"


def test_fixture_family(fixtures_dir):
    spec = FamilySpec.from_file(fixtures_dir / "midpoint_family.json")
    summary = search_random(spec, 5, 1)
    assert summary.tallies["minimal_not_extreme"] == 5
    assert json.loads(json.dumps(summary.to_json()))["count"] == 5
