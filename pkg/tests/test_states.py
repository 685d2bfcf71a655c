import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cvbound.states import (
    GaussianState,
    NoisePattern,
    SymplecticMap,
    add_classical_noise,
    apply_symplectic,
    beamsplitter,
    epr_pair,
    partial_trace,
    partial_transpose,
    quad_variance,
    rotation,
    sample_oracle,
    state_from_dict,
    state_to_dict,
    symplectic_eigenvalues,
    symplectic_form,
    tensor,
    vacuum_state,
)

from conftest import brute_variance, two_mode_symplectic_eigs


def test_vacuum_moments():
    st1 = vacuum_state(1)
    assert np.allclose(st1.cov, np.diag([0.5, 0.5]))
    assert np.allclose(symplectic_eigenvalues(st1.cov), [0.5])
    st4 = vacuum_state(4)
    assert np.allclose(np.diag(st4.cov), 0.5)
    assert np.allclose(st4.cov - np.diag(np.diag(st4.cov)), 0.0)


def test_vacuum_duan_boundary():
    st2 = vacuum_state(2)
    value = quad_variance(st2, [1, 0, 1, 0]) + quad_variance(st2, [0, 1, 0, -1])
    assert value == pytest.approx(2.0, abs=1e-14)


def test_vacuum_rejects_zero_modes():
    with pytest.raises(ValueError):
        vacuum_state(0)


def test_epr_closed_forms():
    r = 1.0
    pair = epr_pair(r)
    assert quad_variance(pair, [1, 0, 1, 0]) == pytest.approx(np.exp(-2 * r), abs=1e-12)
    assert quad_variance(pair, [0, 1, 0, -1]) == pytest.approx(np.exp(-2 * r), abs=1e-12)
    assert pair.cov[0, 0] == pytest.approx(np.cosh(2 * r) / 2, abs=1e-12)
    assert pair.cov[0, 2] == pytest.approx(-np.sinh(2 * r) / 2, abs=1e-12)
    assert pair.cov[1, 3] == pytest.approx(+np.sinh(2 * r) / 2, abs=1e-12)
    assert np.allclose(symplectic_eigenvalues(pair.cov), [0.5, 0.5], atol=1e-10)


def test_epr_zero_squeezing_is_vacuum():
    assert np.allclose(epr_pair(0.0).cov, vacuum_state(2).cov)


def test_epr_argument_range():
    with pytest.raises(ValueError):
        epr_pair(-0.1)
    with pytest.raises(ValueError):
        epr_pair(20.5)
    # the cap itself must stay representable and constructible
    epr_pair(20.0)


def test_tensor_blocks_and_nullifier():
    r = 1.0
    two = tensor(epr_pair(r), epr_pair(r))
    assert two.n_modes == 4
    assert np.allclose(two.cov[0:4, 4:8], 0.0)
    coeffs = [1, 0, 1, 0, 1, 0, 1, 0]
    assert quad_variance(two, coeffs) == pytest.approx(2 * np.exp(-2 * r), abs=1e-12)


def test_tensor_vacuum():
    assert np.allclose(tensor(vacuum_state(1), vacuum_state(1)).cov, vacuum_state(2).cov)


@given(seed=st.integers(0, 2**31))
@settings(max_examples=25, deadline=None)
def test_tensor_associative_up_to_relabeling(seed):
    rng = np.random.default_rng(seed)
    parts = []
    for _ in range(3):
        state = vacuum_state(1)
        smap = rotation(0, rng.uniform(0, np.pi), 1)
        noise = NoisePattern(rng.uniform(-1, 1, 2) + 1e-3, rng.uniform(0, 2))
        parts.append(add_classical_noise(apply_symplectic(state, smap), noise))
    a, b, c = parts
    left = tensor(tensor(a, b), c)
    right = tensor(a, tensor(b, c))
    assert np.allclose(left.cov, right.cov, atol=1e-12)


def test_apply_symplectic_identity():
    pair = epr_pair(0.7)
    out = apply_symplectic(pair, SymplecticMap(np.eye(4)))
    assert np.allclose(out.cov, pair.cov)


def test_beamsplitter_preserves_symplectic_spectrum():
    pair = epr_pair(1.0)
    out = apply_symplectic(pair, beamsplitter(0, 1, np.pi / 4, 2))
    assert np.allclose(symplectic_eigenvalues(out.cov), [0.5, 0.5], atol=1e-10)


def test_rotation_by_half_pi_swaps_quadratures():
    state = add_classical_noise(vacuum_state(1), NoisePattern(np.array([1.0, 0.0]), 2.0))
    out = apply_symplectic(state, rotation(0, np.pi / 2, 1))
    # direct conjugation oracle
    S = np.array([[0.0, 1.0], [-1.0, 0.0]])
    assert np.allclose(out.cov, S @ state.cov @ S.T, atol=1e-12)
    assert out.cov[1, 1] == pytest.approx(4.5, abs=1e-12)


def test_beamsplitter_composition_is_rotation():
    bs = beamsplitter(0, 1, np.pi / 4, 2)
    twice = bs @ bs
    expected = beamsplitter(0, 1, np.pi / 2, 2)
    assert np.allclose(twice.matrix, expected.matrix, atol=1e-12)


def test_beamsplitter_is_symplectic():
    S = beamsplitter(0, 2, 0.3, 3).matrix
    omega = symplectic_form(3)
    assert np.allclose(S @ omega @ S.T, omega, atol=1e-12)
    assert np.allclose(beamsplitter(0, 1, 0.0, 2).matrix, np.eye(4))
    with pytest.raises(ValueError):
        beamsplitter(1, 1, 0.3, 2)


def test_non_symplectic_matrix_rejected():
    with pytest.raises(ValueError):
        SymplecticMap(np.diag([2.0, 1.0, 1.0, 1.0]))


def test_add_classical_noise_examples():
    state = vacuum_state(1)
    noisy = add_classical_noise(state, NoisePattern(np.array([1.0, 0.0]), 2.0))
    assert np.allclose(noisy.cov, np.diag([4.5, 0.5]))
    same = add_classical_noise(state, NoisePattern(np.array([1.0, 0.0]), 0.0))
    assert np.allclose(same.cov, state.cov)


def test_noise_pattern_validation():
    with pytest.raises(ValueError):
        NoisePattern(np.zeros(4), 1.0)
    with pytest.raises(ValueError):
        NoisePattern(np.array([1.0, 0.0]), -1.0)
    with pytest.raises(ValueError):
        add_classical_noise(vacuum_state(2), NoisePattern(np.array([1.0, 0.0]), 1.0))


def test_partial_trace_examples():
    pair = epr_pair(0.9)
    kept = partial_trace(pair, [0, 1])
    assert np.allclose(kept.cov, pair.cov)
    single = partial_trace(pair, [0])
    assert np.allclose(single.cov, np.diag([np.cosh(1.8) / 2] * 2), atol=1e-12)
    with pytest.raises(ValueError):
        partial_trace(pair, [])


def test_partial_transpose_examples():
    vac = vacuum_state(2)
    assert np.allclose(partial_transpose(vac, [1]), vac.cov)

    pair = epr_pair(1.0)
    nu = symplectic_eigenvalues(partial_transpose(pair, [1]))
    assert nu[0] == pytest.approx(np.exp(-2) / 2, abs=1e-10)
    assert nu[0] < 0.5

    product = tensor(vacuum_state(1), epr_pair(0.0))
    assert symplectic_eigenvalues(partial_transpose(product, [0])).min() >= 0.5 - 1e-12

    with pytest.raises(ValueError):
        partial_transpose(pair, [])
    with pytest.raises(ValueError):
        partial_transpose(pair, [0, 1])


def test_symplectic_eigenvalues_examples():
    assert np.allclose(symplectic_eigenvalues(vacuum_state(3).cov), [0.5] * 3)
    assert np.allclose(symplectic_eigenvalues(np.diag([1.3, 1.3])), [1.3])
    with pytest.raises(ValueError):
        symplectic_eigenvalues(np.diag([1.0, -1.0]))
    with pytest.raises(ValueError):
        symplectic_eigenvalues(np.array([[1.0, 0.5], [0.0, 1.0]]))


def test_symplectic_eigenvalues_match_two_mode_closed_form(rng):
    state = epr_pair(0.8)
    state = apply_symplectic(state, beamsplitter(0, 1, 0.4, 2))
    state = add_classical_noise(state, NoisePattern(rng.uniform(-1, 1, 4), 0.7))
    assert np.allclose(
        symplectic_eigenvalues(state.cov), two_mode_symplectic_eigs(state.cov), atol=1e-9
    )


@given(
    theta=st.floats(-3.0, 3.0),
    phi=st.floats(0.0, np.pi),
    r=st.floats(0.0, 2.0),
)
@settings(max_examples=40, deadline=None)
def test_symplectic_invariance_of_spectrum(theta, phi, r):
    state = tensor(epr_pair(r), vacuum_state(1))
    smap = beamsplitter(0, 2, theta, 3) @ rotation(1, phi, 3) @ beamsplitter(1, 2, 0.5, 3)
    before = symplectic_eigenvalues(state.cov)
    after = symplectic_eigenvalues(apply_symplectic(state, smap).cov)
    assert np.allclose(before, after, atol=1e-8)


@given(
    r=st.floats(0.0, 3.0),
    sigma=st.floats(0.0, 5.0),
    seed=st.integers(0, 2**31),
)
@settings(max_examples=40, deadline=None)
def test_physicality_preserved_by_all_operations(r, sigma, seed):
    rng = np.random.default_rng(seed)
    state = tensor(epr_pair(r), epr_pair(r))
    state = apply_symplectic(state, beamsplitter(0, 3, rng.uniform(0, np.pi), 4))
    state = add_classical_noise(state, NoisePattern(rng.uniform(-1, 1, 8), sigma))
    reduced = partial_trace(state, [0, 2])
    for s in (state, reduced):
        scale = max(1.0, np.abs(s.cov).max())
        assert symplectic_eigenvalues(s.cov).min() >= 0.5 - 1e-9 * scale


@given(sigma=st.floats(0.0, 4.0), seed=st.integers(0, 2**31))
@settings(max_examples=40, deadline=None)
def test_noise_never_decreases_any_variance(sigma, seed):
    rng = np.random.default_rng(seed)
    state = epr_pair(1.0)
    pattern = NoisePattern(rng.uniform(-1, 1, 4) + 1e-6, sigma)
    noisy = add_classical_noise(state, pattern)
    for _ in range(8):
        v = rng.uniform(-1, 1, 4)
        assert quad_variance(noisy, v) >= quad_variance(state, v) - 1e-12


def test_quad_variance_against_brute_force(rng):
    state = add_classical_noise(
        tensor(epr_pair(0.6), epr_pair(1.1)), NoisePattern(rng.uniform(-1, 1, 8), 1.3)
    )
    coeffs = rng.uniform(-2, 2, 8)
    assert quad_variance(state, coeffs) == pytest.approx(
        brute_variance(state.cov, coeffs), rel=1e-12
    )
    assert quad_variance(state, 2 * coeffs) == pytest.approx(
        4 * quad_variance(state, coeffs), rel=1e-12
    )
    with pytest.raises(ValueError):
        quad_variance(state, coeffs[:6])


def test_sample_oracle_law_of_large_numbers():
    _, cov_est = sample_oracle(vacuum_state(1), 10**6, seed=11)
    assert np.abs(np.diag(cov_est) - 0.5).max() < 0.01


def test_sample_oracle_deterministic():
    a = sample_oracle(epr_pair(1.0), 5000, seed=42)
    b = sample_oracle(epr_pair(1.0), 5000, seed=42)
    assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
    c = sample_oracle(epr_pair(1.0), 5000, seed=43)
    assert not np.array_equal(a[1], c[1])


def test_sample_oracle_validation():
    with pytest.raises(ValueError):
        sample_oracle(vacuum_state(1), 1, seed=0)
    with pytest.raises(ValueError):
        sample_oracle((np.zeros(2), -np.eye(2)), 100, seed=0)


def test_state_validation_errors():
    with pytest.raises(ValueError):
        GaussianState(np.zeros(4), np.diag([0.1, 0.5, 0.5, 0.5]))  # below vacuum limit
    bad = np.eye(4) * 0.5
    bad_asym = bad.copy()
    bad_asym[0, 1] = 1e-3
    with pytest.raises(ValueError):
        GaussianState(np.zeros(4), bad_asym)
    with pytest.raises(ValueError):
        GaussianState(np.zeros(3), np.eye(3) * 0.5)


def test_states_are_immutable():
    state = vacuum_state(2)
    with pytest.raises(ValueError):
        state.cov[0, 0] = 9.0


def test_serialization_round_trip():
    state = add_classical_noise(epr_pair(1.2), NoisePattern(np.array([1.0, 0, -1, 0]), 0.8))
    data = state_to_dict(state)
    back = state_from_dict(data)
    assert np.array_equal(back.cov, state.cov)
    assert np.array_equal(back.mean, state.mean)
    with pytest.raises(ValueError):
        state_from_dict({"n_modes": 2, "mean": [0, 0], "cov": data["cov"]})
