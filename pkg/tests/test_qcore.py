"""Unit tests for states, operators, and linear algebra helpers."""

import numpy as np
import numpy.testing as npt
import pytest

from telelocal import qcore

RNG_SEED = 20240811


def test_tensor_matches_kron_chain():
    a = np.array([[1, 2], [3, 4]], dtype=complex)
    b = np.array([[0, 1j], [-1j, 0]], dtype=complex)
    npt.assert_allclose(qcore.tensor(a, b), np.kron(a, b))
    npt.assert_allclose(qcore.tensor(a, b, a), np.kron(np.kron(a, b), a))


def test_tensor_rejects_no_arguments():
    with pytest.raises(ValueError):
        qcore.tensor()


def test_partial_trace_of_product_state_recovers_factors():
    rng = np.random.default_rng(RNG_SEED)
    rho = qcore.random_density(rng, 2)
    sig = qcore.random_density(rng, 3)
    big = qcore.tensor(rho, sig)
    npt.assert_allclose(qcore.partial_trace(big, (2, 3), trace_out="B"), rho, atol=1e-14)
    npt.assert_allclose(qcore.partial_trace(big, (2, 3), trace_out="A"), sig, atol=1e-14)


def test_partial_trace_is_trace_preserving_and_validates():
    rng = np.random.default_rng(RNG_SEED + 1)
    rho = qcore.random_density(rng, 4)
    for side in ("A", "B"):
        reduced = qcore.partial_trace(rho, (2, 2), trace_out=side)
        assert abs(np.trace(reduced) - 1.0) < 1e-13
    with pytest.raises(ValueError):
        qcore.partial_trace(rho, (3, 2))
    with pytest.raises(ValueError):
        qcore.partial_trace(rho, (2, 2), trace_out="C")


def test_bloch_round_trip():
    rng = np.random.default_rng(RNG_SEED + 2)
    for m in qcore.random_bloch_vectors(rng, 25):
        ket = qcore.bloch_to_ket(m)
        assert abs(np.linalg.norm(ket) - 1.0) < 1e-12
        npt.assert_allclose(qcore.ket_to_bloch(ket), m, atol=1e-12)


def test_bloch_poles():
    npt.assert_allclose(qcore.bloch_to_ket([0.0, 0.0, 1.0]), [1.0, 0.0], atol=1e-15)
    npt.assert_allclose(np.abs(qcore.bloch_to_ket([0.0, 0.0, -1.0])), [0.0, 1.0], atol=1e-15)


def test_spin_projector_properties():
    rng = np.random.default_rng(RNG_SEED + 3)
    for n in qcore.random_bloch_vectors(rng, 10):
        plus = qcore.spin_projector(n, +1)
        minus = qcore.spin_projector(n, -1)
        npt.assert_allclose(plus + minus, np.eye(2), atol=1e-14)
        npt.assert_allclose(plus @ plus, plus, atol=1e-14)
        assert abs(np.trace(plus) - 1.0) < 1e-13
        # +n eigenvector of n.sigma with eigenvalue +1 spans the + projector
        nsigma = n[0] * qcore.PAULI_X + n[1] * qcore.PAULI_Y + n[2] * qcore.PAULI_Z
        npt.assert_allclose(nsigma @ plus, plus, atol=1e-13)
    with pytest.raises(ValueError):
        qcore.spin_projector([0.0, 0.0, 1.0], sign=2)


def test_bell_basis_is_orthonormal_with_pinned_singlet_sign():
    basis = qcore.bell_basis()
    npt.assert_allclose(basis @ basis.conj().T, np.eye(4), atol=1e-15)
    s = np.sqrt(0.5)
    npt.assert_allclose(basis[0], [0.0, s, -s, 0.0], atol=1e-15)
    npt.assert_allclose(basis[1], [0.0, s, s, 0.0], atol=1e-15)
    npt.assert_allclose(basis[2], [s, 0.0, 0.0, -s], atol=1e-15)
    npt.assert_allclose(basis[3], [s, 0.0, 0.0, s], atol=1e-15)


def test_singlet_projector_entries():
    p = qcore.singlet_projector()
    expected = np.zeros((4, 4), dtype=complex)
    expected[1, 1] = expected[2, 2] = 0.5
    expected[1, 2] = expected[2, 1] = -0.5
    npt.assert_allclose(p, expected, atol=1e-15)


def test_werner_alpha_entries_and_limits():
    w = qcore.werner_alpha(0.6)
    # (1 - a)/4 on the diagonal plus the singlet block at weight a
    npt.assert_allclose(np.diag(w), [0.1, 0.4, 0.4, 0.1], atol=1e-15)
    assert abs(w[1, 2] + 0.3) < 1e-15
    npt.assert_allclose(qcore.werner_alpha(0.0), np.eye(4) / 4, atol=1e-15)
    npt.assert_allclose(qcore.werner_alpha(1.0), qcore.singlet_projector(), atol=1e-15)
    for alpha in (0.0, 0.3, 1.0):
        assert qcore.is_density(qcore.werner_alpha(alpha))
    with pytest.raises(ValueError):
        qcore.werner_alpha(1.5)
    with pytest.raises(ValueError):
        qcore.werner_alpha(-0.1)


def test_werner_general_qubit_case_reduces_to_half_singlet_fraction():
    npt.assert_allclose(qcore.werner_general(2), qcore.werner_alpha(0.5), atol=1e-14)
    for d in (2, 3, 4):
        w = qcore.werner_general(d)
        assert qcore.is_density(w)
        # invariant under U x U conjugation
        rng = np.random.default_rng(RNG_SEED + d)
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        u, _ = np.linalg.qr(g)
        uu = qcore.tensor(u, u)
        npt.assert_allclose(uu @ w @ uu.conj().T, w, atol=1e-12)
    with pytest.raises(ValueError):
        qcore.werner_general(1)


def test_fidelity_definition_and_validation():
    chi = np.array([1.0, 0.0], dtype=complex)
    m = np.array([[0.7, 0.1], [0.1, 0.3]], dtype=complex)
    assert abs(qcore.fidelity(chi, m) - 0.7) < 1e-15
    with pytest.raises(ValueError):
        qcore.fidelity(chi, np.eye(3))


def test_is_density_rejects_bad_matrices():
    assert qcore.is_density(np.eye(2) / 2)
    assert not qcore.is_density(np.eye(2))  # trace 2
    assert not qcore.is_density(np.array([[0.5, 0.5], [-0.5, 0.5]]))  # not hermitian
    assert not qcore.is_density(np.diag([1.5, -0.5]))  # negative eigenvalue
    assert not qcore.is_density(np.zeros((2, 3)))


def test_haar_kets_are_normalized_and_unbiased():
    rng = np.random.default_rng(RNG_SEED + 4)
    kets = qcore.haar_kets(rng, 4000, 2)
    npt.assert_allclose(np.linalg.norm(kets, axis=1), 1.0, atol=1e-12)
    # E|<0|psi>|^2 = 1/2 for Haar qubit kets
    overlap = np.mean(np.abs(kets[:, 0]) ** 2)
    assert abs(overlap - 0.5) < 0.02


def test_random_bloch_vectors_unit_norm():
    rng = np.random.default_rng(RNG_SEED + 5)
    v = qcore.random_bloch_vectors(rng, 1000)
    npt.assert_allclose(np.linalg.norm(v, axis=1), 1.0, atol=1e-12)
    assert np.abs(v.mean(axis=0)).max() < 0.05


def test_random_density_is_density():
    rng = np.random.default_rng(RNG_SEED + 6)
    for dim in (2, 4):
        assert qcore.is_density(qcore.random_density(rng, dim))


def test_unit_vector_guard():
    with pytest.raises(ValueError):
        qcore.bloch_to_ket([0.0, 0.0, 2.0])
