import numpy as np
import pytest

from ringchain.coupling import (CouplingParams, alpha_from_gamma,
                                circulant_matrix, coupling_matrix, dft_matrix,
                                fourier_eigenvector, gamma_from_alpha,
                                generating_vector_from_eigenvalues,
                                interpolated_eigenvalues)


def test_params_validation():
    with pytest.raises(ValueError):
        CouplingParams(-0.1, 0.0)
    with pytest.raises(ValueError):
        CouplingParams(1.1, 0.0)
    with pytest.raises(ValueError):
        CouplingParams(0.5, np.pi)
    with pytest.raises(ValueError):
        CouplingParams(0.5, -np.pi)
    CouplingParams(0.0, 0.0)
    CouplingParams(1.0, 3.14)


def test_gamma_alpha_roundtrip():
    for alpha in (-10.0, -1.0, 0.0, 0.3, 5.0, 100.0):
        gamma = gamma_from_alpha(alpha)
        assert -np.pi < gamma < np.pi
        assert alpha_from_gamma(gamma) == pytest.approx(alpha, rel=1e-12, abs=1e-12)
    assert gamma_from_alpha(0.0) == 0.0


def test_unitarity_and_eigenvalues():
    rng = np.random.default_rng(7)
    for _ in range(20):
        params = CouplingParams(rng.uniform(0, 1), rng.uniform(-3.1, 3.1))
        U = coupling_matrix(params)
        assert np.allclose(U @ U.conj().T, np.eye(3), atol=1e-12)
        lam = np.linalg.eigvals(U)
        expect = interpolated_eigenvalues(params)
        # compare as multisets (degenerate real parts break lexicographic sort)
        for e in expect:
            assert np.min(np.abs(lam - e)) < 1e-12


def test_delta_endpoint():
    # t = 0 must give the delta coupling: U = (2/(n+i*alpha))*J - I
    for alpha in (-2.0, 0.0, 1.5, 7.0):
        gamma = gamma_from_alpha(alpha)
        U = coupling_matrix(CouplingParams(0.0, gamma))
        n = 3
        expect = 2 / (n + 1j * alpha) * np.ones((n, n)) - np.eye(n)
        assert np.max(np.abs(U - expect)) < 1e-12


def test_shift_endpoint():
    # t = 1 must give the cyclic shift matrix regardless of gamma
    for gamma in (-1.0, 0.0, 2.0):
        U = coupling_matrix(CouplingParams(1.0, gamma))
        R = np.roll(np.eye(3), 1, axis=1)
        assert np.max(np.abs(U - R)) < 1e-12


def test_circulant_structure_and_dft():
    params = CouplingParams(0.37, -0.9)
    U = coupling_matrix(params)
    c = generating_vector_from_eigenvalues(interpolated_eigenvalues(params))
    assert np.max(np.abs(U - circulant_matrix(c))) < 1e-12
    F = dft_matrix(3)
    assert np.allclose(F @ F.conj().T, np.eye(3), atol=1e-12)
    # circulants are diagonalized by the Fourier eigenvectors
    lam = interpolated_eigenvalues(params)
    for j in range(3):
        phi = fourier_eigenvector(j)
        assert np.allclose(U @ phi, lam[j] * phi, atol=1e-12)


def test_eigenvalues_on_unit_circle():
    rng = np.random.default_rng(3)
    for _ in range(10):
        params = CouplingParams(rng.uniform(0, 1), rng.uniform(-3.1, 3.1))
        lam = interpolated_eigenvalues(params)
        assert np.allclose(np.abs(lam), 1.0, atol=1e-14)
