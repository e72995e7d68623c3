import math

import pytest

import bellpost as bp


def test_catalog_and_constants():
    chsh = bp.catalog("chsh", 2)
    assert chsh.classical_bound == pytest.approx(2.0)
    assert bp.constant_c(chsh) == pytest.approx(4.0)
    assert bp.constant_c_opt(chsh) == pytest.approx(2.0)
    assert chsh.quantum_value == pytest.approx(2.0 * math.sqrt(2.0))
    assert set(bp.catalog_names()) == {"chsh", "mermin", "svetlichny"}


def test_enumeration_bounds():
    assert bp.lhv_bound(bp.catalog("chsh", 2)) == pytest.approx(2.0)
    assert bp.hlnhv_bound(bp.catalog("svetlichny", 3)) == pytest.approx(4.0)
    assert bp.ns_vertex_count() == 24


def test_thresholds():
    r2 = math.sqrt(2.0)
    chsh = bp.catalog("chsh", 2)
    assert bp.threshold_eta_c(chsh, bp.ModelClass.LHV) == pytest.approx(2.0 * (r2 - 1.0))
    sv = bp.catalog("svetlichny", 3)
    assert bp.threshold_eta_c(sv, bp.ModelClass.HLNHV) == pytest.approx(12.0 / (11.0 + r2))
    assert bp.mermin_family_threshold(3) == pytest.approx(0.75)


def test_sharpened_bound_reduces_to_classical():
    chsh = bp.catalog("chsh", 2)
    assert bp.sharpened_bound(chsh, 1.0, bp.ModelClass.LHV) == pytest.approx(2.0)


def test_quantum_optimizer():
    value = bp.optimize_quantum_value(bp.catalog("chsh", 2), restarts=8, seed=1)
    assert value == pytest.approx(2.0 * math.sqrt(2.0), abs=1e-6)


def test_ys_detector_model():
    dm = bp.DetectorModel.on_off(1.0)
    assert bp.ys_eta_c(2, dm) == pytest.approx(2.0 / 3.0)
    est, err = bp.ys_eta_c_monte_carlo(2, dm, samples=50000, seed=3)
    assert abs(est - 2.0 / 3.0) < max(4.0 * err, 1e-2)
    r2 = math.sqrt(2.0)
    assert bp.ys_threshold_eta_det(2, 2.0 * (r2 - 1.0)) == pytest.approx(4.0 / (3.0 + r2))
    assert bp.ys_threshold_eta_det(2, 2.0 * (r2 - 1.0), on_off=True) is None


def test_property_suites():
    chsh = bp.catalog("chsh", 2)
    assert bp.run_fair_sampling_suite(chsh, 50, seed=4).passed
    assert bp.run_lhv_chain_suite(chsh, 25, seed=5).passed


def test_dsep():
    g = bp.bell_diagram(2, bp.DiagramKind.LHV)
    separated, _ = bp.d_separated(g, ["A1", "X1"], ["A2", "X2"], ["L", "D1", "D2"])
    assert separated
    separated, witness = bp.d_separated(g, ["X1"], ["L"], ["D1", "D2"])
    assert not separated
    assert len(witness) >= 3
    assert bp.ci_oracle(g, 7, bp.DsepQuery(["A1", "X1"], ["A2", "X2"], ["L", "D1", "D2"])) < 1e-10


def test_causal_battery():
    all_pass, claims = bp.verify_causal_claims(seed=900)
    assert all_pass and len(claims) >= 8
