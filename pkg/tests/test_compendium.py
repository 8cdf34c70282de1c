from fractions import Fraction as F

import pytest

from groupcut.compendium import (
    MAX_DEPTH,
    ExplicitEpsParams,
    GeometricEpsParams,
    catalog,
    construct,
    drlm_backward_3_slope,
    gmic,
    kf_n_step_mir_psi,
    kf_params_of_psi,
    lookup,
    negative_measure,
    positive_slope,
    psi_n,
    rlm_dpl1_extreme_3a,
)
from groupcut.errors import ParamOutOfRange, SeriesDiverges
from groupcut.pwl import equal

TABLE_NAMES = {
    "gmic", "gj_2_slope", "gj_2_slope_repeat", "dg_2_step_mir", "kf_n_step_mir", "bccz_counterexample",
    "gj_forward_3_slope", "drlm_backward_3_slope", "dr_projected_sequential_merge_3_slope", "bhk_irrational",
    "chen_4_slope", "hildebrand_5_slope_22_1", "ll_strong_fractional", "drlm_2_slope_limit",
    "drlm_3_slope_limit", "rlm_dpl1_extreme_3a", "hildebrand_2_sided_discont_1_slope_1",
    "hildebrand_2_sided_discont_2_slope_1", "hildebrand_discont_3_slope_1",
}


def positive_intervals(pi):
    """Maximal intervals where pi has positive slope."""
    out = []
    for lo, hi, slope, _ in pi.pieces():
        if slope > 0:
            if out and out[-1][1] == lo:
                out[-1] = (out[-1][0], hi)
            else:
                out.append((lo, hi))
    return out


def test_gmic_examples():
    assert gmic(F(1, 2)).eval(F(1, 4)) == F(1, 2)
    assert gmic(F(1, 5)).eval(F(1, 5)) == 1
    assert gmic(F(2, 5)).slopes[0] == F(5, 2) == positive_slope(F(2, 5), F(2, 5))


@pytest.mark.parametrize("f", [0, 1, F(-1, 2), F(3, 2)])
def test_gmic_rejects_bad_f(f):
    with pytest.raises(ParamOutOfRange):
        gmic(f)


def test_rlm_examples():
    pi = rlm_dpl1_extreme_3a(F(1, 5))
    assert (pi.eval(F(3, 5)), pi.eval(F(3, 5), "left"), pi.eval(F(3, 5), "right")) == (F(1, 2), F(6, 7), F(1, 7))
    assert pi.eval(1, "left") == F(5, 7)
    assert pi.eval(1) == 0
    assert pi.eval(F(1, 5)) == 1


@pytest.mark.parametrize("f", [F(1, 3), F(1, 2), 0])
def test_rlm_parameter_range_is_strict(f):
    with pytest.raises(ParamOutOfRange):
        rlm_dpl1_extreme_3a(f)


def test_drlm_examples():
    pi = drlm_backward_3_slope(F(1, 12), F(1, 6))
    assert pi.eval(F(1, 6)) == F(2, 13)
    assert pi.eval(F(1, 12)) == 1
    assert pi.eval(F(11, 12)) == F(11, 13)
    assert len(set(pi.slopes)) == 3
    assert pi.slopes[1] == pi.slopes[3]


def test_drlm_boundary_b_is_inclusive():
    f = F(1, 10)
    drlm_backward_3_slope(f, (1 + f) / 4)
    with pytest.raises(ParamOutOfRange):
        drlm_backward_3_slope(f, (1 + f) / 4 + F(1, 1000))
    with pytest.raises(ParamOutOfRange):
        drlm_backward_3_slope(f, f)


def test_geometric_params_first_level():
    p = GeometricEpsParams(F(2, 5), F(3), 1)
    assert p.epsilons == [F(2, 15)]
    assert p.gamma(1) == F(4, 15)
    assert positive_slope(p.f, p.gamma(1)) == F(55, 12)
    assert negative_measure(p.f, p.epsilons) == F(11, 15) == 1 - p.gamma(1)


@pytest.mark.parametrize(
    "f, q, n",
    [(F(2, 5), 2, 1), (F(2, 5), F(3, 2), 1), (F(3, 4), 4, 1), (F(2, 5), 3, MAX_DEPTH + 1), (0, 3, 1)],
)
def test_geometric_params_validation(f, q, n):
    with pytest.raises(ParamOutOfRange):
        GeometricEpsParams(F(f), F(q), n)


def test_geometric_params_allow_q_up_to_bound_for_large_f():
    f = F(3, 4)  # 2f/(2f-1) = 3
    GeometricEpsParams(f, F(3), 2)


def test_explicit_eps_params():
    p = ExplicitEpsParams(F(2, 5), [F(1, 10), F(1, 20)])
    assert negative_measure(p.f, p.epsilons) == F(3, 5) + F(1, 10) + F(1, 10)
    with pytest.raises(SeriesDiverges):
        ExplicitEpsParams(F(2, 5), [F(3, 10), F(1, 5)])
    with pytest.raises(ParamOutOfRange):
        ExplicitEpsParams(F(2, 5), [F(1, 10), F(1, 10)])
    with pytest.raises(ParamOutOfRange):
        ExplicitEpsParams(F(2, 5), [F(7, 10)])


def test_psi_zero_is_gmic():
    assert equal(kf_n_step_mir_psi(F(2, 5), 3, 0), gmic(F(2, 5)))


def test_psi_one():
    pi = kf_n_step_mir_psi(F(2, 5), 3, 1)
    assert positive_intervals(pi) == [(0, F(2, 15)), (F(4, 15), F(2, 5))]
    assert pi.slopes[0] == F(55, 12)


@pytest.mark.parametrize("n", range(0, 6))
def test_psi_structure(n):
    f, q = F(2, 5), F(3)
    params = GeometricEpsParams(f, q, n)
    pi = psi_n(params)
    gamma = params.gamma(n)
    ivs = positive_intervals(pi)
    assert len(ivs) == 2**n
    assert all(hi - lo == gamma / 2**n for lo, hi in ivs)
    assert {s for s in pi.slopes if s > 0} == {positive_slope(f, gamma)}
    assert {s for s in pi.slopes if s <= 0} == {-1 / (1 - f)}


@pytest.mark.parametrize("n", range(0, 5))
def test_psi_refinement_preserves_endpoint_values(n):
    f, q = F(2, 5), F(3)
    prev, nxt = kf_n_step_mir_psi(f, q, n), kf_n_step_mir_psi(f, q, n + 1)
    for lo, hi in positive_intervals(prev):
        assert nxt.eval(lo) == prev.eval(lo)
        assert nxt.eval(hi) == prev.eval(hi)


def test_psi_slopes_blow_up():
    f, q = F(2, 5), F(3)
    slopes = [positive_slope(f, GeometricEpsParams(f, q, n).gamma(n)) for n in range(8)]
    assert all(a < b for a, b in zip(slopes, slopes[1:]))


def test_kf_params():
    assert kf_params_of_psi(GeometricEpsParams(F(2, 5), F(3), 0)) == [F(2, 5), 1]
    assert kf_params_of_psi(GeometricEpsParams(F(2, 5), F(3), 2)) == [F(2, 5), 1, F(4, 15), F(4, 45)]


def test_catalog_covers_the_table():
    entries = catalog()
    names = [e.name for e in entries]
    assert len(entries) == 20
    assert len(set(names)) == 20
    assert TABLE_NAMES <= set(names)
    constructible = {e.name for e in entries if e.status == "constructible"}
    assert constructible == {
        "gmic", "kf_n_step_mir", "bccz_counterexample", "drlm_backward_3_slope", "rlm_dpl1_extreme_3a",
    }
    assert lookup("hildebrand_5_slope_22_1").status == "stub"


def test_stub_construction_raises_with_citation():
    entry = lookup("chen_4_slope")
    with pytest.raises(NotImplementedError, match="Chen"):
        entry.construct()


def test_construct_by_name():
    assert equal(construct("gmic", f=F(1, 3)), gmic(F(1, 3)))
    with pytest.raises(KeyError):
        lookup("no_such_function")


def test_catalog_serializes():
    d = lookup("drlm_backward_3_slope").to_dict()
    assert d["constraints"] == "0 < f < b <= (1+f)/4"
    assert [p["name"] for p in d["parameters"]] == ["f", "b"]
