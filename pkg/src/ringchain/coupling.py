"""Interpolated circulant vertex couplings for a degree-n vertex.

The coupling family U(t) is a one-parameter interpolation between a
delta coupling (t=0, strength encoded by the angle gamma) and the cyclic
shift matrix R (t=1).  U(t) is circulant, hence diagonalized by the
discrete Fourier transform; everything here is built from its eigenvalues.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class CouplingParams:
    """Interpolation parameter t in [0,1] and delta-strength angle gamma.

    gamma must lie strictly inside (-pi, pi): cos(gamma) = -1 is excluded
    by the definition gamma = arg((n+ia)/(n-ia)).
    """

    t: float
    gamma: float
    n: int = 3

    def __post_init__(self):
        if not (0.0 <= self.t <= 1.0):
            raise ValueError(f"t must be in [0,1], got {self.t}")
        if not (-np.pi < self.gamma < np.pi):
            raise ValueError(f"gamma must be in (-pi, pi), got {self.gamma}")
        if self.n < 1:
            raise ValueError("vertex degree n must be >= 1")


def gamma_from_alpha(alpha, n=3):
    """gamma = arg((n + i*alpha)/(n - i*alpha)), in (-pi, pi)."""
    return float(np.angle((n + 1j * alpha) / (n - 1j * alpha)))


def alpha_from_gamma(gamma, n=3):
    """Inverse of gamma_from_alpha: alpha = n*tan(gamma/2)."""
    return n * np.tan(gamma / 2)


def interpolated_eigenvalues(params):
    """Eigenvalues of U(t): lam_0 = e^{-i(1-t)gamma}, lam_j = -e^{i pi t (2j/n - 1)}."""
    n = params.n
    lam = np.empty(n, complex)
    lam[0] = np.exp(-1j * (1 - params.t) * params.gamma)
    j = np.arange(1, n)
    lam[1:] = -np.exp(1j * np.pi * params.t * (2 * j / n - 1))
    return lam


def generating_vector_from_eigenvalues(lam):
    """First row (c_1,...,c_n) of the circulant with the given eigenvalues.

    Index convention: c_j = (1/n) sum_a lam_a w^{-a(j-1)} with a running over
    a full period and lam indexed from 0.  This is the offset for which the
    eigen-equation U phi_j = lam_j phi_j holds with phi_j = (1/sqrt n)(1, w^j,
    w^{2j}, ...) and for which U(1) is exactly the shift matrix.
    """
    lam = np.asarray(lam, dtype=complex)
    n = len(lam)
    w = np.exp(2j * np.pi / n)
    a = np.arange(n)
    j = np.arange(n)
    return (lam[None, :] * w ** (-np.outer(j, a))).sum(axis=1) / n


def circulant_matrix(c):
    """Circulant matrix whose row r is the cyclic right-shift of row r-1."""
    c = np.asarray(c, dtype=complex)
    n = len(c)
    U = np.empty((n, n), complex)
    for r in range(n):
        U[r] = np.roll(c, r)
    return U


def dft_matrix(n):
    """F with F_{rs} = w^{-(r-1)(s-1)}/sqrt(n), w = e^{2 pi i/n}; unitary."""
    w = np.exp(2j * np.pi / n)
    r, s = np.meshgrid(np.arange(n), np.arange(n), indexing="ij")
    return w ** (-(r * s)) / np.sqrt(n)


def coupling_matrix(params):
    """The unitary U(t) itself, assembled as F* D F."""
    lam = interpolated_eigenvalues(params)
    F = dft_matrix(params.n)
    return F.conj().T @ np.diag(lam) @ F


def fourier_eigenvector(j, n=3):
    """phi_j = (1/sqrt n)(1, w^j, w^{2j}, ...), the j-th eigenvector of any circulant."""
    w = np.exp(2j * np.pi / n)
    return w ** (j * np.arange(n)) / np.sqrt(n)
