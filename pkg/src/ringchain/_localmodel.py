"""Local polynomial model of the secular condition around a band center.

High-energy bands sit near the points k0 = m*pi/l_j and are far narrower
than any affordable global grid.  Because the secular polynomial is entire
in k, a Taylor model of modest order around k0 — with coefficients obtained
to machine precision from an FFT over a small circle in the complex plane —
pins the band edges without any hand-derived asymptotic expansion, and it
works uniformly in the incommensurate, single-resonance and double-resonance
cases.
"""

import numpy as np

from .secular import v_arrays


def _taylor_parts(k0, params, geom, radius, order, nsamples=64):
    """Taylor coefficients (ascending) of -vz, vc, vs around k0, rescaled."""
    ks = k0 + radius * np.exp(2j * np.pi * np.arange(nsamples) / nsamples)
    vc, vs, vz = v_arrays(ks, params, geom)
    pw = radius ** np.arange(order + 1)
    A = (np.fft.fft(-vz) / nsamples)[:order + 1] / pw
    B = (np.fft.fft(vc) / nsamples)[:order + 1] / pw
    C = (np.fft.fft(vs) / nsamples)[:order + 1] / pw
    scale = max(np.abs(A).max(), np.abs(B).max(), np.abs(C).max())
    if scale == 0:
        return None
    # the underlying functions are real-analytic, so the coefficients are real
    return A.real / scale, B.real / scale, C.real / scale


def local_band_edges(k0, params, geom, radius=0.15, order=8, ntheta=721):
    """Edges (k_lo, k_hi) of the spectral band adjacent to k0, or None.

    Solves the dispersion relation -vz + vc cos(theta) + vs sin(theta) = 0 for
    the momentum offset delta on a theta grid, using the local Taylor model;
    the band is the range of the real roots found within the trust region
    |delta| < 0.6*radius.
    """
    parts = _taylor_parts(k0, params, geom, radius, order)
    if parts is None:
        return None
    A, B, C = parts
    thetas = np.linspace(-np.pi, np.pi, ntheta)
    P = (A[None, :] + np.cos(thetas)[:, None] * B[None, :]
         + np.sin(thetas)[:, None] * C[None, :])
    deg = order
    lead = P[:, -1].copy()
    # guard against a vanishing leading coefficient (companion matrix blows up)
    tiny = np.abs(lead) < 1e-14
    lead[tiny] = 1e-14
    comp = np.zeros((ntheta, deg, deg))
    comp[:, 1:, :-1] = np.eye(deg - 1)
    comp[:, 0, :] = -P[:, -2::-1] / lead[:, None]
    roots = np.linalg.eigvals(comp)
    good = (np.abs(roots.imag) < 1e-8) & (np.abs(roots.real) < 0.6 * radius)
    if not good.any():
        return None
    dmax = roots.real[good].max()
    dmin = roots.real[good].min()
    return k0 + dmin, k0 + dmax
