import mpmath
import numpy as np
import pytest

from ddkit.core import pauli, sequences
from ddkit.core.sequences import (
    build_sequence,
    cdd_general_events,
    filter_function,
    filter_taylor_check,
    generate_cdd_dephasing,
    generate_cdd_general,
    generate_cpmg,
    generate_cudd,
    generate_qdd,
    generate_udd,
    lambda_p,
    lambdas,
    modulation,
    read_sequence_csv,
    sequence_to_csv,
)
from ddkit.exceptions import SequenceError
from ddkit.schemas import Pulse, PulseSequence


def test_udd_times():
    seq = generate_udd(3, 2.0)
    expected = 2.0 * np.sin(np.arange(1, 4) * np.pi / 8) ** 2
    np.testing.assert_allclose(seq.times, expected, rtol=0, atol=1e-15)
    assert seq.axes == ("X", "X", "X")
    assert seq.parity == "X"
    assert seq.label == "udd:3"


def test_udd_two_is_a_cpmg_block():
    for total_time in (1.0, 0.3, 7.5):
        assert np.array_equal(generate_udd(2, total_time).times, generate_cpmg(1, total_time).times)


def test_udd_rejects_bad_arguments():
    with pytest.raises(SequenceError):
        generate_udd(0, 1.0)
    with pytest.raises(SequenceError):
        generate_udd(2, -1.0)
    with pytest.raises(SequenceError):
        generate_udd(2, 1.0, axis="W")


def test_cpmg_times():
    seq = generate_cpmg(2, 8.0)
    np.testing.assert_array_equal(seq.times, [1.0, 3.0, 5.0, 7.0])


def test_pdd_and_hahn():
    pdd = build_sequence("pdd", 3, total_time=4.0)
    np.testing.assert_allclose(pdd.times, [1.0, 2.0, 3.0])
    hahn = build_sequence("hahn", total_time=2.0)
    np.testing.assert_array_equal(hahn.times, [1.0])
    assert build_sequence("free", total_time=1.0).count == 0


def test_cdd_dephasing_level_one():
    seq = generate_cdd_dephasing(1, 1.0)
    assert seq.total_time == 2.0
    np.testing.assert_array_equal(seq.times, [1.0])
    assert seq.parity == "X"


def test_cdd_dephasing_level_two_cancels_the_middle_pair():
    seq = generate_cdd_dephasing(2, 1.0)
    assert seq.total_time == 4.0
    np.testing.assert_array_equal(seq.times, [1.0, 3.0])
    assert seq.parity == "I"


def test_cdd_general_level_one():
    seq = generate_cdd_general(1, 1.0)
    assert seq.total_time == 4.0
    np.testing.assert_array_equal(seq.times, [1.0, 2.0, 3.0])
    assert seq.axes == ("X", "Z", "X")
    assert seq.parity == "Z"


def test_cdd_general_level_two():
    seq = generate_cdd_general(2, 1.0)
    assert seq.total_time == 16.0
    assert seq.count == 14


@pytest.mark.parametrize("level", [1, 2, 3, 4, 5])
def test_cdd_pulse_count_bounds(level):
    assert generate_cdd_dephasing(level, 1.0).count <= 2**level - 1
    if level <= 3:
        assert generate_cdd_general(level, 1.0).count <= 4**level - 1


def test_cudd_level_one():
    seq = generate_cudd(1, 1, 1.0)
    assert seq.total_time == 2.0
    np.testing.assert_allclose(seq.times, [0.5, 1.0, 1.5])
    assert seq.axes == ("Z", "X", "Z")


def test_cudd_and_qdd_pulse_counts():
    assert generate_cudd(3, 3, 1.0).count <= 3 * 2**3 + 2**3
    assert generate_qdd(4, 4, 1.0).count <= 4 + 5 * 4
    assert generate_qdd(3, 0, 1.0).times.tolist() == generate_udd(3, 1.0).times.tolist()


def test_qdd_one_one():
    seq = generate_qdd(1, 1, 1.0)
    np.testing.assert_allclose(seq.times, [0.25, 0.5, 0.75])
    assert seq.axes == ("Z", "X", "Z")


def test_build_sequence_derives_base_durations():
    assert build_sequence("cdd", 3, total_time=2.0).min_interval == pytest.approx(2.0 / 8)
    assert build_sequence("cdd4", 1, total_time=2.0).min_interval == pytest.approx(0.5)
    assert build_sequence("cudd", 1, 1, total_time=1.0).total_time == 1.0
    with pytest.raises(SequenceError):
        build_sequence("ramsey", 1)


def test_pulse_sequence_validation():
    with pytest.raises(ValueError):
        PulseSequence(total_time=1.0, pulses=(Pulse(time=0.6, axis="X"), Pulse(time=0.4, axis="X")))
    with pytest.raises(ValueError):
        PulseSequence(total_time=1.0, pulses=(Pulse(time=1.5, axis="X"),))
    with pytest.raises(SequenceError):
        sequences.from_times([0.2, 0.2], 1.0)


def test_lambda_udd_two_third_moment():
    assert lambda_p(generate_udd(2, 1.0), 3) == pytest.approx(3 / 16, rel=1e-14)


@pytest.mark.parametrize("n", range(1, 21))
def test_lambda_identities(n):
    values = lambdas(generate_udd(n, 1.0), n + 1)
    assert max(abs(v) for v in values[:n]) < 1e-12
    closed_form = (-1) ** n * (n + 1) / 4**n
    # the leading moment cancels down from O(1) terms, so rounding bounds it absolutely
    assert values[n] == pytest.approx(closed_form, rel=1e-6, abs=1e-13)
    if n <= 8:
        assert abs(values[n]) > 1e-4


def test_lambda_rejects_mixed_axes():
    with pytest.raises(SequenceError):
        lambda_p(generate_qdd(1, 1, 1.0), 1)


def test_filter_taylor_check_udd_four():
    values = filter_taylor_check(generate_udd(4, 1.0), 5)
    assert all(abs(v) < 1e-12 for v in values[:4])
    assert abs(values[4]) > 1e-3


def test_filter_function_hahn_closed_form():
    omega, T = 1.0, 1.0
    expected = -(np.exp(1j * omega * T / 2) - 1) ** 2 / (1j * omega)
    assert filter_function(generate_udd(1, T), omega) == pytest.approx(expected, rel=1e-13)


def test_filter_function_series_branch_matches_free_evolution():
    T = 2.0
    seq = build_sequence("free", total_time=T)
    omega = np.array([1e-6, 1e-4, 4e-3, 6e-3, 0.5, 3.0])
    expected = np.expm1(1j * omega * T) / (1j * omega)
    np.testing.assert_allclose(filter_function(seq, omega), expected, rtol=1e-12)


def test_filter_function_vanishes_to_order_n_at_low_frequency():
    seq = generate_udd(3, 1.0)
    small = abs(filter_function(seq, 9e-3))
    smaller = abs(filter_function(seq, 9e-4))
    assert np.log10(small / smaller) == pytest.approx(3.0, abs=0.01)


def test_modulation_signs():
    F = modulation(generate_udd(2, 1.0))
    np.testing.assert_array_equal(F(np.array([0.1, 0.5, 0.9])), [1.0, -1.0, 1.0])
    assert F(0.0) == 1.0


def test_sequence_csv_file(tmp_path):
    seq = generate_qdd(2, 2, 3.0)
    text = sequence_to_csv(seq)
    assert text.splitlines()[0] == f"# total_time=3 parity={seq.parity} label=qdd:2:2"
    assert text.splitlines()[1] == "index,time,axis"
    path = tmp_path / "seq.csv"
    path.write_text(text)
    loaded = read_sequence_csv(path)
    np.testing.assert_array_equal(loaded.times, seq.times)
    assert loaded.axes == seq.axes


def same_up_to_phase(a, b):
    return abs(abs(np.trace(a.conj().T @ b)) / a.shape[0] - 1.0) < 1e-12


def test_pauli_labels_multiply_like_matrices():
    rng = np.random.default_rng(8)
    for _ in range(50):
        labels = list(rng.choice(list("IXYZ"), size=int(rng.integers(1, 9))))
        expected = np.eye(2, dtype=complex)
        for label in labels:
            expected = pauli.matrix(label) @ expected
        assert same_up_to_phase(pauli.matrix(pauli.multiply(*labels)), expected)


@pytest.mark.parametrize("level", [1, 2, 3])
def test_merged_pulses_equal_the_product_of_their_events(level):
    events = cdd_general_events(level)
    seq = generate_cdd_general(level, 1.0)
    merged = {pulse.time: pulse.axis for pulse in seq.pulses}
    for time in sorted({t for t, _ in events}):
        product = np.eye(2, dtype=complex)
        for t, axis in events:
            if t == time:
                product = pauli.matrix(axis) @ product
        if 0 < time < seq.total_time and not same_up_to_phase(product, np.eye(2)):
            assert same_up_to_phase(pauli.matrix(merged[float(time)]), product)
        else:
            assert float(time) not in merged


@pytest.mark.parametrize("n", range(1, 13))
@pytest.mark.parametrize("total_time", [1.0, 3.7])
def test_udd_times_are_symmetric(n, total_time):
    times = generate_udd(n, total_time).times
    np.testing.assert_allclose(times + times[::-1], total_time, rtol=0, atol=1e-15 * total_time)


def ideal_udd_filter(n, omega):
    """Filter function of UDD-n at T = 1 from the exact pulse times, with 60 digits."""
    with mpmath.workdps(60):
        edges = [mpmath.mpf(0)]
        edges += [mpmath.sin(j * mpmath.pi / (2 * n + 2)) ** 2 for j in range(1, n + 1)]
        edges += [mpmath.mpf(1)]
        w = mpmath.mpf(omega)
        total = mpmath.fsum(
            (-1) ** j * (mpmath.expj(w * edges[j + 1]) - mpmath.expj(w * edges[j])) for j in range(n + 1)
        )
        return complex(total / (1j * w))


@pytest.mark.parametrize("n", [2, 3, 5, 7])
@pytest.mark.parametrize("omega", [0.005, 0.02, 0.1])
def test_filter_function_is_accurate_at_low_frequency(n, omega):
    expected = ideal_udd_filter(n, omega)
    assert filter_function(generate_udd(n, 1.0), omega) == pytest.approx(expected, rel=1e-10)
