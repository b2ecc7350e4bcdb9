"""Physical gate errors, logical error rate, factory table, layout counts."""

import math

import pytest

from catshor.errormodel import (
    DEFAULT_CYCLE_TIME,
    GATE_TAGS,
    ErrorParams,
    FactoryRow,
    LayoutBreakdown,
    LayoutSpec,
    factory_lookup,
    factory_table,
    layout_qubits,
    logical_error_rate,
    logical_error_terms,
    logical_qubit_count,
    physical_errors,
)

HEADLINE = ErrorParams(kappa_ratio=1e-5, alpha_sq=19.0)


def _close_to_printed(computed, printed, unit):
    """Within 1.5 units of the last printed significant digit."""
    return abs(computed - printed) <= 1.5 * unit


def test_params_validation():
    with pytest.raises(ValueError):
        ErrorParams(kappa_ratio=0.0, alpha_sq=19.0)
    with pytest.raises(ValueError):
        ErrorParams(kappa_ratio=1e-5, alpha_sq=-1.0)
    assert HEADLINE.kappa2 == 5 / DEFAULT_CYCLE_TIME == pytest.approx(1e7)
    assert HEADLINE.kappa1 == pytest.approx(100.0)
    assert HEADLINE.with_alpha_sq(8.0).alpha_sq == 8.0
    assert HEADLINE.with_alpha_sq(8.0).kappa_ratio == HEADLINE.kappa_ratio


def test_fast_gate_errors_at_headline_point():
    # two-significant-figure reference values: 1.9e-4, 8.3e-3, 9.5e-5, 8.4e-3
    assert physical_errors(HEADLINE, "prep")["z"] == pytest.approx(1.9e-4)
    assert physical_errors(HEADLINE, "meas")["total"] == pytest.approx(1.9e-4)
    cx = physical_errors(HEADLINE, "cnot_fast")
    assert _close_to_printed(cx["z1"], 8.3e-3, 1e-4)
    assert cx["z2"] == pytest.approx(9.5e-5)
    assert cx["z1z2"] == cx["z2"]
    assert _close_to_printed(cx["total"], 8.4e-3, 1e-4)
    assert cx["total"] == pytest.approx(cx["z1"] + 2 * cx["z2"])


def test_slow_gate_errors_at_headline_point():
    # reference values: 3.5e-3, 2.6e-3, 4.4e-4 (CNOT);
    # 4.6e-3, 1.8e-3, 1.1e-4, 8.8e-4, 2.3e-5 (Toffoli)
    cx = physical_errors(HEADLINE, "cnot_slow")
    assert _close_to_printed(cx["total"], 3.5e-3, 1e-4)
    assert _close_to_printed(cx["z1"], 2.6e-3, 1e-4)
    assert _close_to_printed(cx["z2"], 4.4e-4, 1e-5)
    ccx = physical_errors(HEADLINE, "ccx")
    assert _close_to_printed(ccx["total"], 4.6e-3, 1e-4)
    assert _close_to_printed(ccx["z1"], 1.8e-3, 1e-4)
    assert ccx["z2"] == ccx["z1"]
    assert _close_to_printed(ccx["z3"], 1.1e-4, 1e-5)
    assert _close_to_printed(ccx["z1z2"], 8.8e-4, 1e-5)
    assert _close_to_printed(ccx["z1z3"], 2.3e-5, 1e-6)
    assert ccx["z1z3"] == ccx["z2z3"] == ccx["z1z2z3"]
    seven = (
        2 * ccx["z1"] + ccx["z1z2"] + ccx["z3"] + 3 * ccx["z1z3"]
    )
    assert ccx["total"] == pytest.approx(seven)


def test_slow_gates_independent_of_photon_number():
    # fidelity-optimized duration cancels alpha^2 in every Z component
    a, b = HEADLINE, HEADLINE.with_alpha_sq(6.0)
    for gate in ("cnot_slow", "ccx"):
        ea, eb = physical_errors(a, gate), physical_errors(b, gate)
        for key in ea:
            if key == "bitflip":
                assert eb[key] > ea[key]  # bit flips grow at low photon number
            else:
                assert ea[key] == eb[key]


def test_unknown_gate_tag():
    with pytest.raises(ValueError):
        physical_errors(HEADLINE, "swap")
    assert set(GATE_TAGS) == {"prep", "meas", "cnot_fast", "cnot_slow", "ccx"}


def test_logical_error_rate_frozen_values():
    phase, bit = logical_error_terms(HEADLINE, 13)
    assert phase == pytest.approx(4.453292677488837e-16, rel=1e-12)
    assert bit == pytest.approx(3.7669593504576353e-16, rel=1e-12)
    assert logical_error_rate(HEADLINE, 13) == pytest.approx(8.220252027946472e-16, rel=1e-12)
    noisy = ErrorParams(kappa_ratio=1e-3, alpha_sq=4.0)
    assert logical_error_rate(noisy, 3) == pytest.approx(0.004267130810222521, rel=1e-12)
    assert logical_error_terms(noisy, 3)[0] == pytest.approx(0.003596205554417497, rel=1e-12)


def test_logical_error_rate_monotonic():
    # below threshold, growing the distance suppresses the phase term
    for d1, d2 in [(3, 5), (5, 7), (11, 13)]:
        p1, _ = logical_error_terms(HEADLINE, d1)
        p2, _ = logical_error_terms(HEADLINE, d2)
        assert p2 < p1
    # the bit-flip term instead grows linearly with distance
    assert logical_error_terms(HEADLINE, 5)[1] > logical_error_terms(HEADLINE, 3)[1]
    # pushing the loss ratio up always hurts
    worse = ErrorParams(kappa_ratio=1e-4, alpha_sq=19.0)
    assert logical_error_rate(worse, 13) > logical_error_rate(HEADLINE, 13)


def test_logical_error_rate_rejects_even_distance():
    with pytest.raises(ValueError):
        logical_error_rate(HEADLINE, 4)
    with pytest.raises(ValueError):
        logical_error_rate(HEADLINE, 0)


# ---------------------------------------------------------------------------
# factory table


def test_factory_table_shape():
    rows = factory_table()
    assert len(rows) == 15
    assert [r.i for r in rows] == list(range(15))
    for r in rows:
        assert r.d_f % 2 == 1
        assert 0 < r.acceptance <= 1.0
        assert r.error_prob > 0 and r.prep_time > 0 and r.steps > 0
    # error probability improves down the table
    errors = [r.error_prob for r in rows]
    assert errors[-1] < errors[0]


def test_factory_row_12_frozen():
    row = factory_lookup(12)
    assert row == FactoryRow(12, 19, 17.35, 7.90e-12, 9576, 4.92e-3, 1.0)
    assert row.prep_time_at(DEFAULT_CYCLE_TIME) == pytest.approx(4.92e-3)
    assert row.prep_time_at(1e-6) == pytest.approx(9.84e-3)


def test_factory_lookup_missing():
    with pytest.raises(IndexError):
        factory_lookup(15)


def test_factory_table_csv_override(tmp_path):
    path = tmp_path / "rows.csv"
    path.write_text(
        "i,d_f,alpha_sq_f,error_prob,steps,prep_time,acceptance\n"
        "0,3,4.0,1e-3,20,5e-5,0.9\n"
        "1,5,8.0,1e-6,50,6e-5,0.5\n"
    )
    rows = factory_table(str(path))
    assert len(rows) == 2
    assert rows[0] == FactoryRow(0, 3, 4.0, 1e-3, 20, 5e-5, 0.9)
    assert rows[1].d_f == 5 and rows[1].acceptance == 0.5


def test_factory_table_csv_bad_header(tmp_path):
    path = tmp_path / "rows.csv"
    path.write_text("a,b,c\n1,2,3\n")
    with pytest.raises(ValueError):
        factory_table(str(path))


# ---------------------------------------------------------------------------
# layout


def test_layout_skeleton():
    # empty processor still carries one routing line and its two side buses
    b = layout_qubits(LayoutSpec(nb_log=0, nb_factories=0, d=3), d_f=3)
    assert b.nb_rout == 1
    assert b.logical_qubits_phys == 0
    assert b.routing_qubits == 5
    assert b.side_qubits == 4
    assert b.factory_qubits == 0
    assert b.total == 9


def test_layout_small_example():
    b = layout_qubits(LayoutSpec(nb_log=4, nb_factories=1, d=5), d_f=5)
    assert b.nb_rout == 4
    assert b.logical_qubits_phys == 36
    assert b.routing_qubits == 36
    assert b.side_qubits == 70
    assert b.factory_qubits == 45
    assert b.total == 187


def test_layout_headline_points():
    # the flagship operating point at the reference factory count
    ref = layout_qubits(LayoutSpec(nb_log=2326, nb_factories=84, d=13), d_f=19)
    assert ref.total == 127046
    # and at the model's own factory count
    own = layout_qubits(LayoutSpec(nb_log=2326, nb_factories=102, d=13), d_f=19)
    assert own.nb_rout == 1215
    assert own.logical_qubits_phys == 58150
    assert own.routing_qubits == 30375
    assert own.side_qubits == 23692
    assert own.factory_qubits == 18870
    assert own.total == 131087


def test_layout_as_dict():
    b = layout_qubits(LayoutSpec(nb_log=4, nb_factories=1, d=5), d_f=5)
    d = b.as_dict()
    assert d["total"] == b.total
    assert set(d) == {
        "nb_rout",
        "logical_qubits_phys",
        "routing_qubits",
        "side_qubits",
        "factory_qubits",
        "total",
    }


def test_layout_validation():
    with pytest.raises(ValueError):
        LayoutSpec(nb_log=-1, nb_factories=0, d=3)
    with pytest.raises(ValueError):
        LayoutSpec(nb_log=0, nb_factories=0, d=0)


def test_logical_qubit_count_column():
    widths = [8, 16, 32, 64, 128, 256, 512]
    windows = [9, 11, 13, 15, 17, 18, 20]
    column = [logical_qubit_count(n, w) for n, w in zip(widths, windows)]
    assert column == [85, 159, 305, 595, 1173, 2326, 4632]
    assert logical_qubit_count(256, 18) == 9 * 256 + 18 + 4
