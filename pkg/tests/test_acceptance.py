"""Acceptance criteria 1-9.  Each test prints one PASS/FAIL line with its time."""

import contextlib
import subprocess
import sys
import time
from fractions import Fraction as F

from groupcut import cli
from groupcut.compendium import (
    GeometricEpsParams,
    bccz_counterexample_approximant,
    drlm_backward_3_slope,
    gmic,
    kf_n_step_mir_psi,
    negative_measure,
    psi_n,
    rlm_dpl1_extreme_3a,
)
from groupcut.extremality import EXTREME, NOT_EXTREME, extremality_test
from groupcut.family import FamilySpec, search_random
from groupcut.gridoracle import oracle_check
from groupcut.minimality import minimality_test
from groupcut.pwl import combine, equal, from_breakpoints, merged_points

RLM_F = [F(1, 7), F(1, 5), F(1, 4), F(3, 10), F(33, 100)]
DRLM = [(F(1, 12), F(1, 6)), (F(1, 10), F(3, 20)), (F(1, 20), F(13, 50))]
GMIC_F = [F(1, 2), F(1, 5), F(4, 5), F(2, 3), F(1, 12)]


@contextlib.contextmanager
def criterion(capsys, number, limit):
    start = time.perf_counter()
    status = "FAIL"
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit, f"took {elapsed:.2f} s, limit {limit} s"
        status = "PASS"
    finally:
        elapsed = time.perf_counter() - start
        with capsys.disabled():
            print(f"\ncriterion {number}: {status} ({elapsed:.2f} s, limit {limit} s)")


def timed(fn, limit):
    start = time.perf_counter()
    out = fn()
    elapsed = time.perf_counter() - start
    assert elapsed < limit, f"single run took {elapsed:.2f} s, limit {limit} s"
    return out


def test_criterion_1_rlm_is_extreme(capsys):
    with criterion(capsys, 1, 5 * len(RLM_F)):
        for f in RLM_F:
            v = timed(lambda: extremality_test(rlm_dpl1_extreme_3a(f)), 5)
            assert v.status == EXTREME
            s = v.solved_parameters
            assert s["s1"] == 2 / (1 + 2 * f)
            assert s[f"phi({f}+)"] == 2 * f / (1 + 2 * f)


def test_criterion_2_drlm_is_extreme(capsys):
    with criterion(capsys, 2, 5 * len(DRLM)):
        for f, b in DRLM:
            assert f < b <= (1 + f) / 4
            pi = drlm_backward_3_slope(f, b)
            v = timed(lambda: extremality_test(pi), 5)
            assert v.status == EXTREME
            s = v.solved_parameters
            pattern = [s["s0"], s["s1"], s["s2"], s["s1"]]
            assert pattern == list(pi.slopes)
            assert len(set(pattern)) == 3


def test_criterion_3_minimality_suite(capsys):
    valid = {
        gmic: [dict(f=f) for f in GMIC_F],
        rlm_dpl1_extreme_3a: [dict(f=f) for f in RLM_F],
        drlm_backward_3_slope: [dict(f=f, b=b) for f, b in DRLM] + [dict(f=F(1, 5), b=F(3, 10)), dict(f=F(1, 7), b=F(2, 7))],
        kf_n_step_mir_psi: [dict(f=F(2, 5), q=3, n=n) for n in range(4)] + [dict(f=F(3, 4), q=3, n=2)],
        bccz_counterexample_approximant: [dict(f=F(2, 5), q=q, n=2) for q in (3, 4, 5, F(7, 2), 10)],
    }
    with criterion(capsys, 3, 10):
        for ctor, sets in valid.items():
            assert len(sets) >= 5
            for params in sets:
                assert minimality_test(ctor(**params)).is_minimal, (ctor.__name__, params)
        scaled = minimality_test(gmic(F(1, 2)) * F(1, 2), F(1, 2))
        assert not scaled.is_minimal and "pi_of_f" in scaled.checks_failed()
        shifted = minimality_test(gmic(F(1, 2)) + from_breakpoints([0, 1], [F(1, 10), F(1, 10)]), F(1, 2))
        assert not shifted.is_minimal and "origin" in shifted.checks_failed()


def test_criterion_4_witness_soundness(capsys):
    with criterion(capsys, 4, 5):
        pi = combine(gmic(F(1, 5)), rlm_dpl1_extreme_3a(F(1, 5)), F(1, 2))
        v = extremality_test(pi)
        assert v.status == NOT_EXTREME
        w = v.witness
        assert not equal(w.pi1, w.pi2)
        assert minimality_test(w.pi1, F(1, 5)).is_minimal
        assert minimality_test(w.pi2, F(1, 5)).is_minimal
        assert equal(combine(w.pi1, w.pi2, F(1, 2)), pi)


def test_criterion_5_oracle_equivalence(capsys):
    instances = [gmic(f) for f in GMIC_F] + [drlm_backward_3_slope(f, b) for f, b in DRLM]
    instances += [
        combine(gmic(F(1, 12)), drlm_backward_3_slope(F(1, 12), F(1, 6)), F(1, 3)),
        combine(gmic(F(1, 10)), drlm_backward_3_slope(F(1, 10), F(3, 20)), F(1, 2)),
    ]
    with criterion(capsys, 5, 30):
        for pi in instances:
            assert pi.is_continuous()
            engine = extremality_test(pi).status
            report = oracle_check(pi)  # raises if N = 4q and N = 8q disagree
            assert len(report.runs) == 2
            assert (engine == EXTREME) == (report.verdict == "extreme")


def test_criterion_6_psi_sequence(capsys):
    f, q, C = F(2, 5), F(3), F(5, 2)
    with criterion(capsys, 6, 60):
        psis = []
        for n in range(7):
            params = GeometricEpsParams(f, q, n)
            pi = psi_n(params)
            psis.append(pi)
            gamma = F(2, 3) ** n * F(2, 5)
            assert params.gamma(n) == gamma
            pos = []
            for lo, hi, slope, _ in pi.pieces():
                if slope > 0:
                    if pos and pos[-1][1] == lo:
                        pos[-1] = (pos[-1][0], hi)
                    else:
                        pos.append((lo, hi))
            assert len(pos) == 2**n  # (a)
            assert all(hi - lo == gamma / 2**n for lo, hi in pos)
            assert {s for s in pi.slopes if s > 0} == {(1 - gamma) / ((1 - f) * gamma)}  # (b)
            assert negative_measure(f, params.epsilons) == 1 - gamma  # (d)
            assert minimality_test(pi, f).is_minimal  # (e)
        for n in range(7):
            for m in range(n + 1, 7):
                gap = max(abs(psis[n].eval(x) - psis[m].eval(x)) for x in merged_points(psis[n], psis[m]))
                assert gap <= C / F(2) ** (n - 1)  # (c)
                assert gap == F(5, 18) / 2**n


def test_criterion_7_psi_extremality(capsys):
    with criterion(capsys, 7, 60):
        for n in range(3):
            pi = kf_n_step_mir_psi(F(2, 5), 3, n)
            assert extremality_test(pi).status == EXTREME
            assert oracle_check(pi).verdict == "extreme"


def test_criterion_8_random_family_search(capsys, fixtures_dir):
    spec = FamilySpec.from_file(fixtures_dir / "midpoint_family.json")
    with criterion(capsys, 8, 600):
        summary = search_random(spec, 1000, 1)
        assert summary.extreme_count == 0
        assert summary.tallies["minimal_not_extreme"] == 1000
        assert search_random(spec, 50, 1).to_json() == search_random(spec, 50, 1).to_json()
        assert len({spec.sample(1 + i)["lam"] for i in range(1000)}) > 100


def test_criterion_9_determinism(capsys, tmp_path):
    cases = {
        "rlm": ["rlm_dpl1_extreme_3a", "--param", "f=1/5"],
        "drlm": ["drlm_backward_3_slope", "--param", "f=1/12", "--param", "b=1/6"],
    }
    with criterion(capsys, 9, 60):
        for key, args in cases.items():
            outputs = []
            for run in range(2):
                rep, cpx, fn = (tmp_path / f"{key}{run}.{ext}" for ext in ("json", "complex.svg", "function.svg"))
                assert cli.main(["report", *args, "--json", str(rep)]) == 0
                assert cli.main(["plot", *args, "--out", str(cpx)]) == 0
                assert cli.main(["plot", *args, "--function", "--out", str(fn)]) == 0
                outputs.append([p.read_bytes() for p in (rep, cpx, fn)])
            assert outputs[0] == outputs[1]
            # and once more in a fresh interpreter
            rep, cpx = tmp_path / f"{key}.sub.json", tmp_path / f"{key}.sub.svg"
            for argv in (["report", *args, "--json", str(rep)], ["plot", *args, "--out", str(cpx)]):
                subprocess.run([sys.executable, "-m", "groupcut", *argv], check=True, capture_output=True)
            assert [rep.read_bytes(), cpx.read_bytes()] == outputs[0][:2]
        capsys.readouterr()
