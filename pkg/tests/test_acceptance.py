"""End-to-end acceptance checks, one test per guaranteed property.

Each test prints a single pass/fail line; everything is exact
arithmetic, so a pass means the defect is identically zero or the
dimensions match exactly.  The slow tests sweep full spanning sets and
are deliberately not trimmed.
"""

import json
import random
import time

from gerst import cli
from gerst.fields import QQ, GerstError
from gerst.algebra import (dual_numbers, field_algebra, matrix_algebra,
                           polynomial_algebra, with_unit_basis)
from gerst.cochains import (cohomology, cotrace_cochain,
                            dense_cohomology_dims, induced_cohomology_map,
                            random_cochain)
from gerst.jets import JetModel
from gerst.mc import (TCochain, defect_matches_residual, gauge_act,
                      gauge_recover, mc_residual, moyal_parameter,
                      random_gauge, trivial_deformation)
from gerst.prolong import de_rham_report
from gerst.suites import run_suite


def _report(tag, ok, elapsed):
    print("%s: %s (%.1fs)" % (tag, "PASS" if ok else "FAIL", elapsed))
    assert ok


def _suite_ok(name, config=None):
    results = run_suite(name, config)
    bad = [(r["name"], r["detail"]) for r in results if r["status"] != "pass"]
    assert not bad, bad
    return results


def test_01_dgla_axioms_both_fields_under_30s():
    t0 = time.time()
    for field in ("Q", "Fp:10007"):
        _suite_ok("dgla-axioms", {"field": field})
    elapsed = time.time() - t0
    _report("dgla-axioms over Q and F_10007", elapsed < 30, elapsed)


def test_02_star_defect_equals_residual_and_moyal_under_60s():
    t0 = time.time()
    A = matrix_algebra(2, field_algebra(QQ))
    rng = random.Random(0)
    for _ in range(100):
        lam = TCochain(A, 2, 3, {1: random_cochain(A, 2, rng, 4),
                                 2: random_cochain(A, 2, rng, 4)})
        assert defect_matches_residual(A, lam) is None
    P = polynomial_algebra(2, 3, QQ, var_names=["x", "p"])
    moyal = moyal_parameter(P, 3)
    assert mc_residual(moyal).is_zero()
    assert defect_matches_residual(P, moyal) is None
    elapsed = time.time() - t0
    _report("deformation defect equals residual + Moyal", elapsed < 60,
            elapsed)


def test_03_matrix_invariance_and_cotrace_iso_under_5min():
    t0 = time.time()
    M2 = matrix_algebra(2, field_algebra(QQ))
    R = dual_numbers(QQ)
    M2R = matrix_algebra(2, R)
    M2Ru, _, _ = with_unit_basis(M2R)
    dims_m2 = [cohomology(M2, k).dim_hh for k in range(3)]
    dims_r = [cohomology(R, k, normalized=True).dim_hh for k in range(3)]
    dims_m2r = [cohomology(M2Ru, k, normalized=True).dim_hh
                for k in range(3)]
    assert dims_m2 == [1, 0, 0]
    assert dims_r == [2, 1, 1]
    assert dims_m2r == [2, 1, 1]
    assert [dense_cohomology_dims(M2, k)[2] for k in range(3)] == dims_m2
    assert [dense_cohomology_dims(R, k, normalized=True)[2]
            for k in range(3)] == dims_r
    assert [dense_cohomology_dims(M2Ru, k, normalized=True)[2]
            for k in range(3)] == dims_m2r
    base = M2R.matrix_base
    for k in range(3):
        src = cohomology(base, k, normalized=True)
        tgt = cohomology(M2R, k)
        mat = induced_cohomology_map(lambda D: cotrace_cochain(D, M2R),
                                     src, tgt)
        assert src.dim_hh == tgt.dim_hh == mat.rank()
    elapsed = time.time() - t0
    _report("matrix-algebra cohomology invariance via cotrace",
            elapsed < 300, elapsed)


def test_04_contraction_identities_full_spanning_set():
    t0 = time.time()
    _suite_ok("commutators")
    _report("four contraction identities on the full spanning set", True,
            time.time() - t0)


def test_05_twist_solver_and_conjugation_under_10min():
    t0 = time.time()
    _suite_ok("adiota")
    elapsed = time.time() - t0
    _report("50 seeded twists: structure equation and conjugation",
            elapsed < 600, elapsed)


def test_06_jet_de_rham_slices():
    t0 = time.time()
    m = JetModel(1, 2, 2, 2, QQ)
    report = de_rham_report(m, 1, 2)
    for (q, w), s in report.items():
        assert s.ok(), (q, w, s.dims, s.flat_dim)
    _report("per-weight de Rham cohomology of the jet complex", True,
            time.time() - t0)


def test_07_induced_maps_independent_of_choices():
    t0 = time.time()
    _suite_ok("choices")
    _report("induced cohomology maps agree across choice pairs", True,
            time.time() - t0)


def test_08_gauge_action_and_recovery():
    t0 = time.time()
    A = dual_numbers(QQ)
    rng = random.Random(1)
    for _ in range(100):
        lam = trivial_deformation(A, random_gauge(A, rng, 3))
        assert mc_residual(lam).is_zero()
        assert mc_residual(gauge_act(random_gauge(A, rng, 3),
                                     lam)).is_zero()
    for _ in range(10):
        base = trivial_deformation(A, random_gauge(A, rng, 3))
        X = random_gauge(A, rng, 3)
        target = gauge_act(X, base)
        Y, obstruction = gauge_recover(A, base, target)
        assert obstruction is None
        assert gauge_act(Y, base).equals(target)
    _report("gauge action preserves solutions; recovery round trip", True,
            time.time() - t0)


def test_09_cli_determinism_and_negative_controls(capsys, tmp_path):
    t0 = time.time()

    def run(argv):
        code = cli.main(argv)
        return code, json.loads(capsys.readouterr().out)

    def stripped(data):
        clean = json.loads(json.dumps(data))
        for c in clean["checks"]:
            c.pop("wall_ms", None)
        return json.dumps(clean, sort_keys=True)

    argv = ["verify", "cotrace-morphism", "--seed", "9"]
    code1, first = run(argv)
    code2, second = run(argv)
    assert code1 == code2 == 0
    assert stripped(first) == stripped(second)

    bad = tmp_path / "bad.json"
    bad.write_text("[1, 2,")
    code, data = run(["hh", str(bad)])
    assert code == 1
    assert data["checks"][0]["status"] == "fail"
    assert "parse error" in data["checks"][0]["detail"]

    alg = tmp_path / "dual.json"
    alg.write_text(json.dumps(dual_numbers(QQ).to_json()))
    mc = tmp_path / "mc.json"
    mc.write_text(json.dumps({"arity": 2,
                              "entries": [[[0, 1], 1, "1", 1]]}))
    code, data = run(["deform", str(alg), "--mc", str(mc), "--order", "2"])
    by_name = {c["name"]: c for c in data["checks"]}
    assert by_name["maurer-cartan-residual"]["status"] == "fail"
    assert by_name["star-associativity"]["status"] == "fail"
    assert code == data["failures"] == 2
    _report("reports deterministic; corrupted inputs fail exactly", True,
            time.time() - t0)
