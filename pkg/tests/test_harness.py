import numpy as np
import pytest

from qdrd import ExperimentConfig, make_qam, op_report, run_montecarlo, run_pipeline, sample_instance, thin_qr_mgs
from qdrd.counting import OpCounter
from qdrd.harness import CSV_HEADER, ledger_for_instance, noise_statistics, rows_to_csv

from conftest import crandn


def test_op_report_qam4():
    c = make_qam(4)
    inst = sample_instance(2, 2, 10.0, c, seed=0)
    rep, counters = ledger_for_instance(inst, c)
    assert rep.ok, rep.text()
    diff = counters["qdrd-weighted"]["detection"].mults - counters["qdrd-unweighted"]["detection"].mults
    assert diff == 32


def test_op_report_qam16():
    c = make_qam(16)
    inst = sample_instance(4, 2, 10.0, c, seed=0)
    rep, counters = ledger_for_instance(inst, c)
    assert rep.ok, rep.text()
    assert {ch.name: ch.actual for ch in rep.checks}["weighted - unweighted detection mults"] == 512


def test_thin_qr_4x4_sqrts(rng):
    c = OpCounter()
    thin_qr_mgs(crandn(rng, 4, 4), c)
    assert c.total().sqrts == 4


def test_op_report_flags_failure():
    bad = OpCounter()
    bad.record(sqrts=1)
    rep = op_report({"qdrd-weighted": bad}, n=2, p=16)
    assert not rep.ok
    assert "[FAIL] qdrd-weighted pipeline sqrts" in rep.text()


def test_division_savings_ledger():
    # thin QR: n normalization + n back-substitution divisions; QDRD: n factorization divisions
    c = make_qam(4)
    inst = sample_instance(4, 3, 10.0, c, seed=2)
    qr, qd = OpCounter(), OpCounter()
    run_pipeline(inst, c, "qr", qr)
    run_pipeline(inst, c, "qdrd-weighted", qd)
    assert qr.total().divs - qd.total().divs == 3
    assert qr.total().sqrts - qd.total().sqrts == 3


def test_config_validation():
    with pytest.raises(ValueError):
        ExperimentConfig(1, 2, "qam4", [10.0], 5)
    with pytest.raises(ValueError):
        ExperimentConfig(2, 2, "qam4", [10.0], 0)
    with pytest.raises(ValueError):
        ExperimentConfig(2, 2, "qam4", [10.0], 5, methods=["mmse"])


def test_montecarlo_equivalent_methods_never_mismatch():
    cfg = ExperimentConfig(2, 2, "qam16", [5.0, 15.0], 150, seed=3)
    rows = run_montecarlo(cfg)
    assert len(rows) == 2 * 4
    for r in rows:
        assert 0 <= r.ser <= 1 and 0 <= r.mismatch_rate <= 1
        if r.method != "qdrd-unweighted":
            assert r.mismatch_rate == 0.0
    by = {(r.snr_db, r.method): r for r in rows}
    assert by[5.0, "oracle"].ser == by[5.0, "qr"].ser == by[5.0, "qdrd-weighted"].ser
    assert by[5.0, "qdrd-unweighted"].mismatch_rate > 0
    assert by[15.0, "qdrd-weighted"].mean_sqrts == 0
    assert by[15.0, "qr"].mean_sqrts == 2


def test_montecarlo_noiseless_zero_ser():
    rows = run_montecarlo(ExperimentConfig(3, 2, "qam4", [float("inf")], 50, seed=1, methods=["oracle", "qr", "qdrd-weighted"]))
    assert all(r.ser == 0.0 for r in rows)


def test_csv_schema_and_determinism():
    cfg = ExperimentConfig(2, 2, "qam4", [10.0], 20, seed=42)
    a, b = rows_to_csv(run_montecarlo(cfg)), rows_to_csv(run_montecarlo(cfg))
    assert a == b
    assert a.splitlines()[0] == ",".join(CSV_HEADER)
    assert a.splitlines()[0] == "snr_db,method,trials,ser,mismatch_rate,mean_adds,mean_mults,mean_divs,mean_sqrts"


def test_noise_statistics_shapes(rng):
    a = crandn(rng, 3, 2)
    st = noise_statistics(a, 0.5, 20_000, seed=0)
    assert st.cov_q.shape == (2, 2)
    np.testing.assert_allclose(np.diag(st.cov_q).real, 0.5, rtol=0.05)
    np.testing.assert_allclose(np.diag(st.cov_q_prime).real, 0.5 / st.d_prime, rtol=0.05)
