"""Spectral output of the ring chain: bands, gaps, dispersion, flat bands,
negative spectrum and the zero-energy threshold test."""

import enum
import warnings
from dataclasses import dataclass

import numpy as np

from ._localmodel import local_band_edges
from .coupling import alpha_from_gamma, interpolated_eigenvalues
from .secular import band_function, v_arrays, v_triple

TWO_PI = 2 * np.pi


class BandKind(enum.Enum):
    Band = "Band"
    Gap = "Gap"


class EnergySign(enum.Enum):
    Positive = "Positive"
    Negative = "Negative"


class Threshold(enum.Enum):
    ReachesZero = "ReachesZero"
    PositiveThreshold = "PositiveThreshold"


class FlatBandOrigin(enum.Enum):
    IntegerMomentum = "IntegerMomentum"
    HalfIntegerFamily = "HalfIntegerFamily"
    KirchhoffFamily = "KirchhoffFamily"


class FlatBandCandidate(Exception):
    """Pointwise band/gap classification is undefined: vc and vs both vanish."""


class NoSolution(Exception):
    """No quasimomentum solves the dispersion relation at this k (gap point)."""


class NegativeBandBoundError(AssertionError):
    """More negative bands detected than the theory allows — a numerics bug."""


class ThresholdBoundary(Exception):
    """tan(gamma/2) sits within 1e-10 of a threshold-interval endpoint."""


class BandCenterWarning(UserWarning):
    pass


@dataclass(frozen=True)
class SpectralInterval:
    k_lo: float
    k_hi: float
    kind: BandKind
    energy_sign: EnergySign = EnergySign.Positive
    edge_residuals: tuple = (0.0, 0.0)


@dataclass(frozen=True)
class FlatBand:
    k: float
    energy: float
    origin: FlatBandOrigin
    residual: float


@dataclass(frozen=True)
class DispersionPoint:
    theta: float
    k: float
    branch: int


# ---------------------------------------------------------------------------
# pointwise test

def band_test(k, params, geom):
    """Band/Gap classification at a single k > 0.

    Raises FlatBandCandidate when vc and vs are both negligible relative to
    the local magnitude of the secular functions (the classification is then
    undefined pointwise; use flat_bands).
    """
    if not k > 0:
        raise ValueError("band_test requires k > 0")
    vc, vs, vz = v_arrays(float(k), params, geom)
    here = max(abs(vc), abs(vs), abs(vz))
    near = 0.0
    for kk in (k * (1 - 1e-3), k * (1 + 1e-3)):
        nc, ns, nz = v_arrays(float(kk), params, geom)
        near = max(near, abs(nc), abs(ns), abs(nz))
    if np.hypot(vc, vs) < 1e-9 * max(near, 1e-300):
        raise FlatBandCandidate(f"vc and vs both vanish at k={k}")
    return BandKind.Band if vc * vc + vs * vs - vz * vz >= 0 else BandKind.Gap


# ---------------------------------------------------------------------------
# band scanning

def _bisect_roots(f, lo, hi, tol=1e-10, max_iter=60):
    """Vectorized bisection: refine every bracket [lo_i, hi_i] with a sign change."""
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    flo = f(lo)
    for _ in range(max_iter):
        if np.all(hi - lo < tol):
            break
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        same = (flo > 0) == (fm > 0)
        lo = np.where(same, mid, lo)
        flo = np.where(same, fm, flo)
        hi = np.where(same, hi, mid)
    return 0.5 * (lo + hi)


def _guard_samples(k_min, k_max, params, geom):
    """Extra sample points around the predicted band centers m*pi/l_j.

    At high energy (t in (0,1)) bands are O(1/m)-narrow and displaced from
    the nominal centers by a comparable amount, so fixed-width windows miss
    them; instead the local Taylor model predicts the edges and we sample
    across them directly.  A coarse uniform window is kept as a fallback.
    """
    samples = []
    centers = []
    for lj in (geom.l1, geom.l2, geom.l3):
        m_lo = max(1, int(np.ceil(k_min * lj / np.pi)))
        m_hi = int(np.floor(k_max * lj / np.pi))
        for m in range(m_lo, m_hi + 1):
            centers.append((m * np.pi / lj, m))
    predicted = []
    for k0, m in centers:
        w = max(1e-2 * np.pi / m, 1e-4)
        samples.append(np.linspace(k0 - w, k0 + w, 64))
        if m >= 8:
            edges = local_band_edges(k0, params, geom, ntheta=257)
            if edges is not None:
                k_lo, k_hi = edges
                pad = 0.25 * max(k_hi - k_lo, 1e-9)
                samples.append(np.linspace(k_lo - pad, k_hi + pad, 9))
                predicted.append((k0, k_lo, k_hi))
    if not samples:
        return np.empty(0), predicted
    return np.concatenate(samples), predicted


def scan_bands(k_min, k_max, resolution, params, geom, guards=True):
    """Alternating Band/Gap tiling of [k_min, k_max] from sign changes of
    f(k) = vc^2 + vs^2 - vz^2, refined by bisection to |dk| < 1e-10."""
    if not (0 < k_min < k_max):
        raise ValueError("need 0 < k_min < k_max")
    if resolution <= 0:
        raise ValueError("resolution must be positive")

    f = lambda k: band_function(k, params, geom)
    grid = np.arange(k_min, k_max, resolution)
    grid = np.append(grid, k_max)
    predicted = []
    if guards and 0 < params.t < 1:
        extra, predicted = _guard_samples(k_min, k_max, params, geom)
        extra = extra[(extra > k_min) & (extra < k_max)]
        grid = np.unique(np.concatenate([grid, extra]))

    fv = f(grid)
    sign = fv > 0
    change = np.nonzero(sign[:-1] != sign[1:])[0]
    roots = _bisect_roots(f, grid[change], grid[change + 1]) if len(change) else np.empty(0)
    roots = np.unique(roots)

    cuts = np.concatenate([[k_min], roots, [k_max]])
    intervals = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a < 1e-12:
            continue
        # majority vote over interior samples: a single midpoint can land on a
        # sub-resolution feature (e.g. the micro-gap around a flat-band point)
        probes = a + (b - a) * np.arange(1, 10) / 10.0
        kind = (BandKind.Band if np.count_nonzero(f(probes) >= 0) >= 5
                else BandKind.Gap)
        res = (abs(f(np.array([a]))[0]), abs(f(np.array([b]))[0]))
        if intervals and intervals[-1].kind is kind:
            prev = intervals[-1]
            intervals[-1] = SpectralInterval(prev.k_lo, b, kind,
                                             EnergySign.Positive,
                                             (prev.edge_residuals[0], res[1]))
        else:
            intervals.append(SpectralInterval(a, b, kind, EnergySign.Positive, res))

    bands = [iv for iv in intervals if iv.kind is BandKind.Band]
    for k0, k_lo, k_hi in predicted:
        hit = any(iv.k_hi >= k_lo - 1e-8 and iv.k_lo <= k_hi + 1e-8 for iv in bands)
        if not hit:
            warnings.warn(f"no band detected near predicted center k={k0:.6g}",
                          BandCenterWarning, stacklevel=2)
    return intervals


# ---------------------------------------------------------------------------
# dispersion curves

def _wrap_angle(x):
    w = (x + np.pi) % TWO_PI - np.pi
    return np.pi if w <= -np.pi else w


def dispersion(k_grid, params, geom):
    """Quasimomentum branches theta(k) for every k in a band.

    Solves sin(theta + vartheta) = vz/R with R = sqrt(vc^2+vs^2) and
    vartheta = atan2(vc, vs); both branches are emitted.  Raises NoSolution
    if some k lies in a gap.
    """
    points = []
    for k in np.atleast_1d(k_grid):
        vc, vs, vz = v_arrays(float(k), params, geom)
        R = np.hypot(vc, vs)
        if R == 0 or abs(vz) > R * (1 + 1e-12):
            raise NoSolution(f"k={k} is not inside a band")
        a = np.arcsin(np.clip(vz / R, -1.0, 1.0))
        vartheta = np.arctan2(vc, vs)
        points.append(DispersionPoint(_wrap_angle(a - vartheta), float(k), 0))
        points.append(DispersionPoint(_wrap_angle(np.pi - a - vartheta), float(k), 1))
    return points


# ---------------------------------------------------------------------------
# flat bands

def _rational_multiple_of_pi(x, max_den=10**6, tol=1e-9):
    """Return (p, q) with x = (p/q)*pi if such coprime integers exist."""
    from fractions import Fraction
    frac = Fraction(x / np.pi).limit_denominator(max_den)
    if frac.numerator <= 0:
        return None
    if abs(x / np.pi - float(frac)) < tol:
        return frac.numerator, frac.denominator
    return None


def _local_scale(k, params, geom):
    offs = np.array([-0.05, -0.02, 0.02, 0.05])
    vc, vs, vz = v_arrays(k + offs, params, geom)
    return float(np.max(np.abs([vc, vs, vz])))


def extra_flat_band_roots(params, geom, m_max):
    """Integers m <= m_max solving ml + a*tan(ml1/2) = 0 or ml - a*cot(ml1/2) = 0
    for the delta coupling (t=0); these give additional flat bands at k=m."""
    if params.t != 0:
        raise ValueError("extra flat-band roots are defined for t=0 only")
    alpha = alpha_from_gamma(params.gamma, params.n)
    out = []
    for m in range(1, m_max + 1):
        x = m * geom.l1 / 2
        t1 = m * geom.l + alpha * np.tan(x)
        t2 = m * geom.l - alpha / np.tan(x) if np.tan(x) != 0 else np.inf
        scale = m * geom.l + abs(alpha) * max(abs(np.tan(x)), 1.0)
        if abs(t1) < 1e-9 * scale or abs(t2) < 1e-9 * scale:
            out.append(m)
    return out


def flat_bands(k_max, params, geom, grid_step=0.01, rel_tol=1e-7):
    """Quasimomentum-independent eigenvalues on (0, k_max].

    Generic detector: every sign-change root of vc is refined and kept if the
    relative residuals of vs and vz at the root are negligible (vz typically
    has an even-order zero at a flat band, so a root-intersection test on sign
    changes would miss it; residuals at the vc-root are robust).  Closed-form
    candidate families are probed as well in case a vc-root is tangential.
    """
    if k_max <= 0:
        raise ValueError("k_max must be positive")
    f_vc = lambda k: v_arrays(k, params, geom)[0]
    grid = np.arange(grid_step, k_max + grid_step, grid_step)
    vc = f_vc(grid)
    sgn = vc > 0
    idx = np.nonzero(sgn[:-1] != sgn[1:])[0]
    candidates = list(_bisect_roots(f_vc, grid[idx], grid[idx + 1], tol=1e-12)) if len(idx) else []

    # closed-form families, probed regardless of the sign-change scan
    pq3 = _rational_multiple_of_pi(geom.l3)
    if pq3 is not None:
        q = pq3[1]
        candidates += [q * m for m in range(1, int(k_max / q) + 1)]
    if geom.l3 < np.pi:
        step = np.pi / (2 * (np.pi - geom.l3))
        candidates += [(2 * m - 1) * step for m in range(1, int(k_max / (2 * step)) + 2)]
    candidates += [m + 0.5 for m in range(int(k_max))]          # l3 -> 0 half-integer family
    candidates += [float(m) for m in range(1, int(k_max) + 1)]  # integer momenta
    if params.t == 0:
        candidates += [float(m) for m in extra_flat_band_roots(params, geom, int(k_max))]

    found = []
    for k in sorted(candidates):
        if not (0 < k <= k_max):
            continue
        if any(abs(k - fb.k) < 1e-8 * (1 + k) for fb in found):
            continue
        scale = _local_scale(k, params, geom)
        if scale == 0:
            continue
        vck, vsk, vzk = v_arrays(float(k), params, geom)
        residual = max(abs(vck), abs(vsk), abs(vzk)) / scale
        if residual > rel_tol:
            continue
        if params.gamma == 0 and 0 < params.t < 1:
            origin = FlatBandOrigin.KirchhoffFamily
        elif abs(np.cos(k * (np.pi - geom.l3))) < 1e-6:
            origin = FlatBandOrigin.HalfIntegerFamily
        else:
            origin = FlatBandOrigin.IntegerMomentum
        found.append(FlatBand(float(k), float(k) ** 2, origin, float(residual)))
    return found


# ---------------------------------------------------------------------------
# negative spectrum (k = i kappa)

def negative_band_function(kappa, params, geom):
    """Band-test quantity continued to k = i*kappa; vectorized and real.

    All of vc, vs, vz become purely imaginary there; the imaginary parts are
    extracted after checking the real residue, and the same normalized
    vc^2 + vs^2 - vz^2 sign test applies.
    """
    kk = 1j * np.asarray(kappa, dtype=float)
    vc, vs, vz = v_arrays(kk, params, geom)
    mag = np.maximum(np.maximum(np.abs(vc), np.abs(vs)), np.abs(vz)) + 1e-300
    worst = max(np.max(np.abs(vc.real) / mag), np.max(np.abs(vs.real) / mag),
                np.max(np.abs(vz.real) / mag))
    if worst > 1e-9:
        raise AssertionError(f"analytic continuation lost realness: residue {worst:.2e}")
    a, b, c = vc.imag / mag, vs.imag / mag, vz.imag / mag
    return a * a + b * b - c * c


def negative_band_bound(params):
    if params.t == 0:
        return 0 if params.gamma >= 0 else 2
    if params.t == 1:
        return 2
    return 4 if params.gamma < 0 else 2


def _negative_guard_samples(params, geom, kappa_max):
    """Dense samples around the decoupled-vertex bound states.

    A single vertex with coupling eigenvalue lam supports a bound state
    e^(-kappa*x) on each edge when (lam-1) - i*l*kappa*(lam+1) = 0, i.e.
    kappa = Re(-i*(lam-1)/(lam+1))/l > 0.  For strong attraction the chain's
    negative bands hug these values exponentially tightly (width well below
    any uniform scan step), so we sample windows around them at ~5e-7 pitch.
    Bands narrower than that pitch (very deep bound states) stay undetected.
    """
    samples = []
    for lam in interpolated_eigenvalues(params):
        if abs(lam + 1) < 1e-12:
            continue
        kap = (-1j * (lam - 1) / (lam + 1)).real / geom.l
        if not 0 < kap < kappa_max + 0.1:
            continue
        w = max(0.05, 1e-2 * kap)
        npts = min(2 * int(w / 5e-7) + 1, 400001)
        samples.append(np.linspace(max(1e-6, kap - w),
                                   min(kappa_max, kap + w), npts))
    return np.concatenate(samples) if samples else np.empty(0)


def negative_spectrum(kappa_max, resolution, params, geom):
    """Negative-energy bands as kappa-intervals on (0, kappa_max].

    Raises NegativeBandBoundError if more bands are found than the theory
    allows (<=4 for gamma<0, <=2 for gamma>=0 at t in (0,1); empty for t=0
    with gamma>=0): that would indicate a numerics bug, not physics.
    """
    if kappa_max <= 0:
        raise ValueError("kappa_max must be positive")
    g = lambda kap: negative_band_function(kap, params, geom)
    grid = np.arange(1e-6, kappa_max, resolution)
    grid = np.append(grid, kappa_max)
    extra = _negative_guard_samples(params, geom, kappa_max)
    if len(extra):
        grid = np.unique(np.concatenate([grid, extra]))
    gv = g(grid)
    sgn = gv > 0
    change = np.nonzero(sgn[:-1] != sgn[1:])[0]
    roots = _bisect_roots(g, grid[change], grid[change + 1]) if len(change) else np.empty(0)
    cuts = np.concatenate([[grid[0]], np.unique(roots), [kappa_max]])
    bands = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        if b - a < 1e-12:
            continue
        if g(np.array([0.5 * (a + b)]))[0] >= 0:
            res = (abs(g(np.array([a]))[0]), abs(g(np.array([b]))[0]))
            bands.append(SpectralInterval(a, b, BandKind.Band, EnergySign.Negative, res))
    bound = negative_band_bound(params)
    if len(bands) > bound:
        raise NegativeBandBoundError(
            f"{len(bands)} negative bands found, bound is {bound} "
            f"(t={params.t}, gamma={params.gamma})")
    return bands


# ---------------------------------------------------------------------------
# zero-energy threshold (t = 0)

def threshold_intervals(geom):
    """The two open intervals of tan(gamma/2) for which the spectrum reaches 0."""
    u = (4 * np.pi / 3) * geom.l / (geom.l2 * geom.l3)
    w = (2 / 3) * geom.l / geom.l1
    return (-min(u, w), 0.0), (-(u + w), -max(u, w))


def threshold_at_zero(params, geom):
    """Closed-form test whether the spectrum extends down to k = 0 (t = 0 only)."""
    if params.t != 0:
        raise ValueError("threshold_at_zero applies to t=0 only")
    if params.gamma > 0:
        return Threshold.PositiveThreshold
    tg = np.tan(params.gamma / 2)
    (a1, b1), (a2, b2) = threshold_intervals(geom)
    for endpoint in (a1, b1, a2, b2):
        if abs(tg - endpoint) < 1e-10:
            raise ThresholdBoundary(f"tan(gamma/2)={tg} at interval endpoint {endpoint}")
    if a1 < tg < b1 or a2 < tg < b2:
        return Threshold.ReachesZero
    return Threshold.PositiveThreshold


def lowest_band_edge(params, geom, k_hi=3.0, resolution=1e-4):
    """Numeric lower edge of the first positive band in (resolution, k_hi), or None."""
    intervals = scan_bands(resolution, k_hi, resolution, params, geom, guards=False)
    for iv in intervals:
        if iv.kind is BandKind.Band:
            return iv.k_lo
    return None


def lowest_negative_edge(params, geom, kappa_max=10.0, resolution=1e-4):
    """Numeric lower kappa-edge of the negative band closest to zero, or None."""
    bands = negative_spectrum(kappa_max, resolution, params, geom)
    return bands[0].k_lo if bands else None
