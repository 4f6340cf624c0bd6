import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from entangle_sim.analysis import (
    SweepSpec,
    averaged_trace_distance,
    classical_counterpart,
    classify,
    coherence_trace_distance,
    condition_point,
    condition_scan,
    default_averaging_grid,
    entanglement_entropy_closed_form,
    entanglement_entropy_state,
    fig2_spec,
    fig3_spec,
    mutual_information_ad,
    run_sweep,
)
from entangle_sim.protocol import AngleTriple, conditional_state, prepare_joint_state, reduced_abcd
from entangle_sim.qcore import InvalidArgumentError, StateVector
from oracles import binary_entropy, brute_rho_abcd, jacobi_eigvals, rot

Q = math.pi / 4
angle = st.floats(min_value=0, max_value=math.pi, allow_nan=False)
BITS = list(itertools.product((0, 1), repeat=2))


def classical_mi_ad(t, tp, tpp):
    """S(A:D) of the diagonal AD state with weights p_il / 2."""
    u, up, upp = ([[x * x for x in row] for row in rot(a)] for a in (t, tp, tpp))
    p = {(i, l): sum(u[i][j] * up[j][k] * upp[k][l] for j in (0, 1) for k in (0, 1)) / 2
         for i, l in BITS}
    pa = [p[0, 0] + p[0, 1], p[1, 0] + p[1, 1]]
    pd = [p[0, 0] + p[1, 0], p[0, 1] + p[1, 1]]
    return sum(v * math.log2(v / (pa[i] * pd[l])) for (i, l), v in p.items() if v > 0)


def block_trace_distance(t, tp, tpp):
    """Trace distance from the four (i, l) blocks, diagonal removed, via Jacobi."""
    rho = brute_rho_abcd(t, tp, tpp)
    diff = rho - np.diag(np.diag(rho))
    total = 0.0
    for i, l in BITS:
        idx = [8 * i + 4 * j + 2 * k + l for j in (0, 1) for k in (0, 1)]
        total += np.sum(np.abs(jacobi_eigvals(diff[np.ix_(idx, idx)])))
    return total / 2


def test_entanglement_entropy_state_examples():
    r = 1 / math.sqrt(2)
    assert entanglement_entropy_state(StateVector(np.array([r, 0, 0, r]))) == pytest.approx(1.0, abs=1e-14)
    assert entanglement_entropy_state(StateVector.basis([0, 1])) == 0.0
    psi = StateVector(np.array([math.cos(math.pi / 6), 0, 0, math.sin(math.pi / 6)]))
    assert entanglement_entropy_state(psi) == pytest.approx(binary_entropy(0.75), abs=1e-14)
    assert binary_entropy(0.75) == pytest.approx(0.811278, abs=1e-6)


def test_entanglement_entropy_state_rejects_bad_input():
    with pytest.raises(InvalidArgumentError):
        entanglement_entropy_state(StateVector(np.array([1.0, 1.0, 0, 0]), normalized=False))
    with pytest.raises(InvalidArgumentError):
        entanglement_entropy_state(StateVector.basis([0, 0, 0]))


def test_closed_form_examples():
    assert entanglement_entropy_closed_form(0) == 0.0
    assert entanglement_entropy_closed_form(Q) == pytest.approx(1.0, abs=1e-12)
    assert entanglement_entropy_closed_form(math.pi / 6) == pytest.approx(binary_entropy(0.75), abs=1e-14)


@settings(max_examples=40, deadline=None)
@given(angle, angle)
def test_closed_form_matches_conditional_states(tp, tpp):
    closed = entanglement_entropy_closed_form(tpp)
    for i, l in BITS:
        _, phi = conditional_state(AngleTriple(Q, tp, tpp), i, l)
        assert abs(entanglement_entropy_state(phi) - closed) < 1e-10


@settings(max_examples=30, deadline=None)
@given(angle, angle)
def test_ad_mutual_information_vanishes_at_quarter_pi(tp, tpp):
    rho = reduced_abcd(prepare_joint_state(AngleTriple(Q, tp, tpp)))
    assert mutual_information_ad(rho) < 1e-10


def test_ad_mutual_information_examples():
    rho = reduced_abcd(prepare_joint_state(AngleTriple(0, 0, 0)))
    assert mutual_information_ad(rho) == pytest.approx(1.0, abs=1e-12)
    eighth = math.pi / 8
    rho = reduced_abcd(prepare_joint_state(AngleTriple(eighth, eighth, eighth)))
    expected = classical_mi_ad(eighth, eighth, eighth)
    assert expected == pytest.approx(0.0921476993980716, abs=1e-14)
    assert mutual_information_ad(rho) == pytest.approx(expected, abs=1e-10)
    assert mutual_information_ad(rho) > 1e-3


@settings(max_examples=40, deadline=None)
@given(angle, angle, angle)
def test_ad_mutual_information_matches_classical_oracle(t, tp, tpp):
    rho = reduced_abcd(prepare_joint_state(AngleTriple(t, tp, tpp)))
    assert mutual_information_ad(rho) == pytest.approx(classical_mi_ad(t, tp, tpp), abs=1e-9)


def test_classical_counterpart_zero_angles():
    sigma = classical_counterpart(AngleTriple(0, 0, 0)).matrix
    expected = np.zeros((16, 16))
    expected[0, 0] = expected[15, 15] = 0.5
    np.testing.assert_array_equal(sigma, expected)


@settings(max_examples=40, deadline=None)
@given(angle, angle, angle)
def test_classical_counterpart_is_dephased_state(t, tp, tpp):
    angles = AngleTriple(t, tp, tpp)
    sigma = classical_counterpart(angles).matrix
    rho = brute_rho_abcd(t, tp, tpp)
    assert np.max(np.abs(sigma - np.diag(np.diag(rho)))) < 1e-12
    assert abs(np.trace(sigma) - 1) < 1e-12


def test_coherence_trace_distance_examples():
    assert coherence_trace_distance(AngleTriple(Q, 0, Q)) == pytest.approx(0.5, abs=1e-12)
    assert block_trace_distance(Q, 0, Q) == pytest.approx(0.5, abs=1e-12)
    assert coherence_trace_distance(AngleTriple(Q, 0, 0)) == pytest.approx(0.0, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(angle, angle)
def test_coherence_trace_distance_matches_block_oracle(tp, tpp):
    value = coherence_trace_distance(AngleTriple(Q, tp, tpp))
    assert value == pytest.approx(block_trace_distance(Q, tp, tpp), abs=1e-11)
    assert value < 1


def test_trace_distance_at_zero_theta2_is_half_abs_sin():
    # B stays coherent over j when theta'' = 0, so rho != sigma unless sin(2t') = 0.
    for tp in np.linspace(0, math.pi, 13):
        expected = 0.5 * abs(math.sin(2 * tp))
        assert coherence_trace_distance(AngleTriple(Q, tp, 0)) == pytest.approx(expected, abs=1e-12)


def test_averaged_trace_distance_examples():
    grid = default_averaging_grid()
    assert len(grid) == 181 and grid[0] == 0 and grid[-1] < math.pi
    # Riemann sum of |sin 2t'| / 2 on the 181-point grid; tends to 1/pi.
    expected = float(np.mean(0.5 * np.abs(np.sin(2 * grid))))
    assert expected == pytest.approx(0.318301894953294, abs=1e-14)
    assert averaged_trace_distance(Q, 0, grid) == pytest.approx(expected, abs=1e-10)
    value = averaged_trace_distance(Q, Q, grid)
    assert 0 < value < 1
    with pytest.raises(InvalidArgumentError):
        averaged_trace_distance(Q, Q, [])


def test_averaged_trace_distance_increases_up_to_quarter_pi():
    grid = default_averaging_grid(61)
    values = [averaged_trace_distance(Q, tpp, grid) for tpp in np.linspace(0, Q, 16)]
    assert all(b >= a for a, b in zip(values, values[1:]))


def test_sweep_spec_validation():
    with pytest.raises(InvalidArgumentError):
        SweepSpec({"theta": Q, "theta_double_prime": Q}, "theta_prime", [])
    with pytest.raises(InvalidArgumentError):
        SweepSpec({"theta": Q, "theta_double_prime": Q}, "theta_prime", [0.2, 0.1])
    with pytest.raises(InvalidArgumentError):
        SweepSpec({"theta": Q}, "theta_prime", [0.1, 0.2])
    with pytest.raises(InvalidArgumentError):
        SweepSpec({"theta": Q, "theta_double_prime": Q}, "theta_prime", [0.1], averaging_grid=[0.0])
    with pytest.raises(InvalidArgumentError):
        SweepSpec({"theta": Q}, "phi", [0.1])


def test_run_sweep_matches_pointwise():
    spec = SweepSpec({"theta": Q, "theta_double_prime": Q}, "theta_prime", [0.0, 0.5, 1.0])
    expected = [coherence_trace_distance(AngleTriple(Q, tp, Q)) for tp in spec.grid]
    np.testing.assert_array_equal(run_sweep(spec), expected)

    spec = fig2_spec(grid_points=3, avg_points=7)
    out = run_sweep(spec)
    assert out[1] == averaged_trace_distance(Q, spec.grid[1], spec.averaging_grid)


def test_figure_specs():
    f2, f3 = fig2_spec(), fig3_spec()
    assert f2.grid[0] == 0 and f2.grid[-1] == pytest.approx(math.pi / 2)
    assert len(f2.averaging_grid) == 181
    assert f3.grid[0] == 0 and f3.grid[-1] < math.pi


def test_classify_thresholds():
    assert classify(0.0) == "vanishing"
    assert classify(5e-8) == "indeterminate"
    assert classify(1e-3) == "positive"


def test_condition_point_examples():
    p = condition_point(AngleTriple(Q, 0.3, 0.6))
    assert p.condition_met and p.entropies_constant and p.entanglement_nonzero

    eighth = math.pi / 8
    p = condition_point(AngleTriple(eighth, eighth, eighth))
    assert p.mutual_info_ad > 1e-6 and not p.condition_met

    p = condition_point(AngleTriple(Q, 0.4, 0))
    assert p.condition_met
    assert p.entropies_constant
    assert all(abs(s) < 1e-12 for s in p.defined_entropies)
    assert not p.entanglement_nonzero

    p = condition_point(AngleTriple(0, 0, 0))
    assert p.num_degenerate == 2
    assert p.entropies[1] is None and p.entropies[2] is None


def test_condition_scan_order_and_flags():
    axis = [0.0, Q, math.pi / 2]
    report = condition_scan(axis, axis, axis)
    assert len(report) == 27
    assert [p.angles.as_tuple() for p in report] == list(itertools.product(axis, repeat=3))
    for point in report:
        if point.has_quarter_pi:
            assert point.mutual_info_ad < 1e-9
            assert point.entropies_constant
    assert all(p.condition_met for p in report.flagged)
    with pytest.raises(InvalidArgumentError):
        condition_scan([], axis, axis)


@settings(max_examples=30, deadline=None)
@given(angle, angle, st.integers(0, 2), st.integers(0, 3))
def test_any_quarter_pi_angle_gives_uniform_weights(a, b, slot, k):
    vals = [a, b]
    vals.insert(slot, Q * (2 * k + 1))
    point = condition_point(AngleTriple(*vals))
    assert point.mutual_info_ad < 1e-10
    assert point.entropies_constant
