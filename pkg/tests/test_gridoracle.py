from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from groupcut.compendium import drlm_backward_3_slope, gmic, rlm_dpl1_extreme_3a
from groupcut.errors import GridTooCoarse, NotContinuous, NotMinimalFinite
from groupcut.gridoracle import (
    FiniteGroupFunction,
    _rank_mod_p,
    additive_pairs,
    finite_extremality,
    finite_minimality,
    grid_denominator,
    oracle_check,
    restrict,
)
from groupcut.linalg import RREF
from groupcut.pwl import combine


def test_restrict_gmic_half():
    g = restrict(gmic(F(1, 2)), 8)
    assert g.values == tuple(F(k) for k in (0, F(1, 4), F(1, 2), F(3, 4), 1, F(3, 4), F(1, 2), F(1, 4)))
    assert g.f_index == 4 and g.f == F(1, 2)


def test_restrict_drlm():
    pi = drlm_backward_3_slope(F(1, 12), F(1, 6))
    assert grid_denominator(pi) == 12
    g = restrict(pi, 48)
    assert g.f_index == 4
    assert g.values[8] == F(2, 13)


def test_restrict_rejects_discontinuous_and_coarse_grids():
    with pytest.raises(NotContinuous):
        restrict(rlm_dpl1_extreme_3a(F(1, 5)), 20)
    with pytest.raises(GridTooCoarse):
        restrict(drlm_backward_3_slope(F(1, 12), F(1, 6)), 18)


def test_two_element_group():
    g = FiniteGroupFunction(2, (F(0), F(1)), 1)
    assert finite_minimality(g) == []
    v = finite_extremality(g)
    assert v.extreme and v.verdict == "extreme"


def test_finite_minimality_reports_problems():
    g = FiniteGroupFunction(4, (F(0), F(1, 4), F(1), F(1)), 2)
    assert "symmetry" in finite_minimality(g)
    with pytest.raises(NotMinimalFinite):
        finite_extremality(g)


def test_additive_pairs_are_sorted_pairs():
    g = restrict(gmic(F(1, 2)), 4)
    pairs = additive_pairs(g)
    assert all(i <= j for i, j in pairs)
    assert (1, 1) in pairs and (0, 3) in pairs
    assert (2, 2) not in pairs


@pytest.mark.parametrize(
    "pi",
    [gmic(F(4, 5)), drlm_backward_3_slope(F(1, 12), F(1, 6)), drlm_backward_3_slope(F(1, 10), F(3, 20))],
)
def test_extreme_functions(pi):
    report = oracle_check(pi)
    assert report.verdict == "extreme"
    assert [r.N for r in report.runs] == [4 * grid_denominator(pi), 8 * grid_denominator(pi)]


def test_mixture_is_not_extreme_with_checked_kernel_vector():
    pi = combine(gmic(F(1, 12)), drlm_backward_3_slope(F(1, 12), F(1, 6)), F(1, 3))
    report = oracle_check(pi)
    assert report.verdict == "not_extreme"
    assert report.kernel_dimension > 0
    g = restrict(pi, report.N)
    v = finite_extremality(g).kernel_vector
    assert any(v)
    assert v[0] == 0 and v[g.f_index] == 0
    for i, j in additive_pairs(g):
        assert v[i] + v[j] == v[(i + j) % g.N]


def test_oracle_json():
    d = oracle_check(gmic(F(1, 2))).to_json()
    assert d == {
        "N": 8,
        "verdict": "extreme",
        "kernel_dimension": 0,
        "runs": [
            {"N": 8, "verdict": "extreme", "kernel_dimension": 0},
            {"N": 16, "verdict": "extreme", "kernel_dimension": 0},
        ],
    }


sparse_rows = st.lists(
    st.dictionaries(st.integers(0, 11), st.integers(-2, 2).filter(bool), min_size=1, max_size=3),
    min_size=1,
    max_size=30,
)


@settings(max_examples=60, deadline=None)
@given(sparse_rows, st.sampled_from([1, 2, 5, 512]))
def test_modular_rank_matches_exact_rank(rows, chunk):
    ech = RREF(12)
    for row in rows:
        ech.add({c: F(s) for c, s in row.items()})
    exact = 12 - len(ech.kernel_basis())
    r, chosen = _rank_mod_p(rows, 12, chunk)
    assert r == exact
    sub = RREF(12)
    for k in chosen:
        sub.add({c: F(s) for c, s in rows[k].items()})
    assert 12 - len(sub.kernel_basis()) == exact
