"""Fiber spectral condition of the periodic ring chain, two independent ways.

The chain period cell is one ring (arcs l2, l3 with l2 + l3 = 2 pi) plus a
connecting segment l1; the two degree-3 vertices carry the interpolated
circulant coupling with length-scale parameter l.  For quasimomentum theta
the spectral condition can be written either as a 6x6 determinant built
directly from the matching matrices M, N, or as the closed-form polynomial

    k^6 P6 + ... + k P1 + P0 + k^2 (Ps sin(theta) + Pc cos(theta)) = 0.

The determinant path is the ground-truth oracle; the coefficient path is the
fast production path.  Both are exposed here, together with the band
parametrization triple (v_c, v_s, v_z).
"""

from dataclasses import dataclass

import numpy as np

from .coupling import dft_matrix, interpolated_eigenvalues

TWO_PI = 2 * np.pi


@dataclass(frozen=True)
class ChainGeometry:
    """Edge lengths of the period cell plus the coupling length-scale l.

    The ring arcs are normalized to l2 + l3 = 2*pi (checked to 1e-12); use
    ChainGeometry.normalized to rescale arbitrary lengths.
    """

    l1: float
    l2: float
    l3: float
    l: float = 1.0

    def __post_init__(self):
        for name in ("l1", "l2", "l3", "l"):
            v = getattr(self, name)
            if not (v > 0) or not np.isfinite(v):
                raise ValueError(f"{name} must be positive and finite, got {v}")
        if abs(self.l2 + self.l3 - TWO_PI) > 1e-12:
            raise ValueError(
                f"l2 + l3 must equal 2*pi (got {self.l2 + self.l3}); "
                "use ChainGeometry.normalized to rescale"
            )

    @classmethod
    def normalized(cls, l1, l2, l3, l=1.0):
        """Rescale all lengths by s = 2*pi/(l2+l3) to meet the normalization."""
        s = TWO_PI / (l2 + l3)
        # tiny residual from the division is absorbed into l3
        l2n = l2 * s
        return cls(l1 * s, l2n, TWO_PI - l2n, l * s)

    @classmethod
    def from_l3(cls, l1, l3, l=1.0):
        """Normalized geometry with l2 inferred from l2 + l3 = 2*pi."""
        return cls(l1, TWO_PI - l3, l3, l)

    def swapped(self):
        """The geometry with the two ring arcs interchanged."""
        return ChainGeometry(self.l1, self.l3, self.l2, self.l)


@dataclass(frozen=True)
class SecularCoefficients:
    """The nine real coefficient values P0..P6, Ps, Pc at a given k."""

    p0: float
    p1: float
    p2: float
    p3: float
    p4: float
    p5: float
    p6: float
    ps: float
    pc: float


@dataclass(frozen=True)
class VTriple:
    """Band-parametrization triple: vc cos(theta) + vs sin(theta) = vz."""

    vc: float
    vs: float
    vz: float


def build_MN(k, theta, geom):
    """The 6x6 matching matrices M (values) and N (scaled derivatives).

    Row order: segment endpoint at l1/2, arc-3 start, arc-2 start for the
    first vertex; segment endpoint at -l1/2 and the Bloch-shifted arc ends
    for the second vertex.  Columns are the coefficient pairs (a_j^+, a_j^-)
    of the plane-wave Ansatz on the three edges.
    """
    l1, l2, l3 = geom.l1, geom.l2, geom.l3
    e = np.exp
    bloch = e(-1j * theta)
    M = np.array([
        [e(1j * k * l1 / 2), e(-1j * k * l1 / 2), 0, 0, 0, 0],
        [0, 0, 0, 0, 1, 1],
        [0, 0, 1, 1, 0, 0],
        [e(-1j * k * l1 / 2), e(1j * k * l1 / 2), 0, 0, 0, 0],
        [0, 0, e(1j * k * l2) * bloch, e(-1j * k * l2) * bloch, 0, 0],
        [0, 0, 0, 0, e(1j * k * l3) * bloch, e(-1j * k * l3) * bloch],
    ], dtype=complex)
    N = np.array([
        [-e(1j * k * l1 / 2), e(-1j * k * l1 / 2), 0, 0, 0, 0],
        [0, 0, 0, 0, 1, -1],
        [0, 0, 1, -1, 0, 0],
        [e(-1j * k * l1 / 2), -e(1j * k * l1 / 2), 0, 0, 0, 0],
        [0, 0, -e(1j * k * l2) * bloch, e(-1j * k * l2) * bloch, 0, 0],
        [0, 0, 0, 0, -e(1j * k * l3) * bloch, e(-1j * k * l3) * bloch],
    ], dtype=complex)
    return M, N


def secular_determinant(k, theta, params, geom):
    """det[(D-I) F M - k l (D+I) F N], normalized by the Bloch phase e^{2 i theta}.

    The raw determinant carries an overall factor e^{-2 i theta}; multiplying
    it out makes the value proportional to the real polynomial form with a
    theta-independent complex ratio, which is what the oracle tests assert.
    Accepts complex k (used for the negative spectrum via k = i kappa).
    """
    if k == 0:
        raise ValueError("k = 0 is excluded; the plane-wave Ansatz degenerates there")
    lam = interpolated_eigenvalues(params)
    D = np.diag(np.concatenate([lam, lam]))
    F3 = dft_matrix(params.n)
    F = np.block([[F3, np.zeros((3, 3))], [np.zeros((3, 3)), F3]])
    M, N = build_MN(k, theta, geom)
    I6 = np.eye(6)
    det = np.linalg.det((D - I6) @ F @ M - k * geom.l * (D + I6) @ F @ N)
    return det * np.exp(2j * theta)


def _coefficient_arrays(k, t, gamma, geom):
    """All nine coefficient polynomials at momentum k (array- and complex-capable)."""
    l1, l2, l3, l = geom.l1, geom.l2, geom.l3, geom.l
    A = np.cos(np.pi * t / 3)
    B = np.sin(np.pi * t / 3)
    G = np.cos(gamma * (1 - t))
    S = np.sin(gamma * (1 - t))
    sin, cos = np.sin, np.cos
    s1, s2, s3 = sin(k * l1), sin(k * l2), sin(k * l3)
    c1, c2, c3 = cos(k * l1), cos(k * l2), cos(k * l3)
    sT = sin(k * (l1 + l2 + l3))
    cT = cos(k * (l1 + l2 + l3))
    mix = sin(k * (l1 + l2 - l3)) + sin(k * (l2 + l3 - l1)) + sin(k * (l3 + l1 - l2))
    mixc = cos(k * (l1 + l2 - l3)) + cos(k * (l2 + l3 - l1)) + cos(k * (l3 + l1 - l2))
    s23 = sin(k * (l2 + l3))

    p6 = 36 * l**6 * (G + 1) * (A - 1)**2 * s1 * s2 * s3
    p5 = -24 * l**5 * S * (A - 1)**2 * (c1 * s2 * s3 + s1 * s23)
    p4 = (-16 * l**4 * s1 * (G * (A - 1) * (A + 2) + 2 * (A - 1) * (A + 0.5))
          + 9 * l**4 * sT * (G * (A - 1) * (A + 3) + 3 * (A - 1) * (A + 1 / 3))
          + l**4 * mix * (7 * G * (A - 1) * (A + 5 / 7) + 5 * (A - 1) * (A + 7 / 5)))
    p3 = 4 * l**3 * S * (A - 1) * (A + 1) * (8 * c1 - 9 * cT - 5 * mixc)
    p2 = (-16 * l**2 * s1 * (G * (A + 1) * (A - 2) - 2 * (A + 1) * (A - 0.5))
          + 9 * l**2 * sT * (G * (A + 1) * (A - 3) - 3 * (A + 1) * (A - 1 / 3))
          + l**2 * mix * (7 * G * (A + 1) * (A - 5 / 7) - 5 * (A + 1) * (A - 7 / 5)))
    p1 = -24 * l * S * (A + 1)**2 * (c1 * s2 * s3 + s1 * s23)
    p0 = 36 * (G - 1) * (A + 1)**2 * s1 * s2 * s3
    ps = 16 * l**2 * np.sqrt(3) * B * ((s3 - s2) * S * (k**2 * l**2 * (A - 1) + (A + 1))
                                       + 2 * k * l * (c3 - c2) * (A * G + 1))
    pc = -16 * l**2 * ((s2 + s3) * (k**2 * l**2 * (G * (A - 1) * (A + 2) + 2 * (A - 1) * (A + 0.5))
                                    + G * (A + 1) * (A - 2) - 2 * (A + 1) * (A - 0.5))
                       - 2 * k * l * (c3 + c2) * S * (A - 1) * (A + 1))
    return p0, p1, p2, p3, p4, p5, p6, ps, pc


def polynomial_coefficients(k, params, geom):
    """SecularCoefficients at momentum k (scalar, real)."""
    vals = _coefficient_arrays(float(k), params.t, params.gamma, geom)
    return SecularCoefficients(*[float(v) for v in vals])


def secular_polynomial(k, theta, params, geom):
    """Left-hand side of the closed-form secular condition (vectorized in k)."""
    p0, p1, p2, p3, p4, p5, p6, ps, pc = _coefficient_arrays(k, params.t, params.gamma, geom)
    return (k**6 * p6 + k**5 * p5 + k**4 * p4 + k**3 * p3 + k**2 * p2 + k * p1 + p0
            + k**2 * (ps * np.sin(theta) + pc * np.cos(theta)))


def v_arrays(k, params, geom):
    """(vc, vs, vz) with vc = k^2 Pc, vs = k^2 Ps, vz = -(sum k^j Pj); vectorized."""
    p0, p1, p2, p3, p4, p5, p6, ps, pc = _coefficient_arrays(k, params.t, params.gamma, geom)
    vc = k**2 * pc
    vs = k**2 * ps
    vz = -(k**6 * p6 + k**5 * p5 + k**4 * p4 + k**3 * p3 + k**2 * p2 + k * p1 + p0)
    return vc, vs, vz


def v_triple(k, params, geom):
    """VTriple at scalar k > 0.

    Sign convention: vc cos(theta) + vs sin(theta) - vz is a positive multiple
    of the (phase-normalized) determinant at the reference point t=0.5,
    gamma=1, k=1, theta=0, l1=2, l3=pi/2 and the convention is kept globally.
    """
    vc, vs, vz = v_arrays(float(k), params, geom)
    return VTriple(float(vc), float(vs), float(vz))


def band_function(k, params, geom):
    """f(k) = vc^2 + vs^2 - vz^2, rescaled by max(|vc|,|vs|,|vz|)^2; vectorized.

    f >= 0 exactly on spectral bands.  The rescaling only changes the
    magnitude, never the sign, and keeps k^12-growth from overflowing.
    """
    vc, vs, vz = v_arrays(np.asarray(k, dtype=float), params, geom)
    m = np.maximum(np.maximum(np.abs(vc), np.abs(vs)), np.abs(vz)) + 1e-300
    return (vc / m)**2 + (vs / m)**2 - (vz / m)**2
