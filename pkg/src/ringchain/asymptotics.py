"""High-energy band-width machinery, degenerate limits, and the spectral
probability P_sigma (direct measurement and ergodic torus Monte Carlo)."""

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._localmodel import local_band_edges
from .secular import band_function, v_arrays
from .spectrum import BandKind, scan_bands

TWO_PI = 2 * np.pi


# ---------------------------------------------------------------------------
# beta coefficients

@dataclass(frozen=True)
class BetaCoefficients:
    beta_a: float
    beta_b: float
    beta_c: float
    beta_d: float
    beta_e: float
    beta_f: float


def beta_coefficients(params):
    """The six high-energy expansion coefficients; defined for t in (0, 1]."""
    if params.t == 0:
        raise ValueError("beta_c..beta_f are undefined at t=0")
    t, gamma = params.t, params.gamma
    A = np.cos(np.pi * t / 3)
    G = np.cos(gamma * (1 - t))
    S = np.sin(gamma * (1 - t))
    B = np.sin(np.pi * t / 3)
    return BetaCoefficients(
        beta_a=G + 1,
        beta_b=S,
        beta_c=G * (A + 2) / (A - 1) + 2 * (A + 0.5) / (A - 1),
        beta_d=G * (A + 3) / (A - 1) + 3 * (A + 1 / 3) / (A - 1),
        beta_e=7 * G * (A + 5 / 7) / (A - 1) + 5 * (A + 7 / 5) / (A - 1),
        beta_f=np.sqrt(3) * S * B * (A + 1) / (A - 1) ** 2,
    )


# ---------------------------------------------------------------------------
# band-width prediction

class WidthRegime(enum.Enum):
    Incommensurate_1overM = "Incommensurate_1overM"
    CommensurateConstant = "CommensurateConstant"
    DoubleResonanceConstant = "DoubleResonanceConstant"


class RegimeMismatch(Exception):
    """The rationality pattern of the length ratios is ambiguous at this m."""


@dataclass(frozen=True)
class BandWidthPrediction:
    m: int
    center_k: float
    j: int
    width: float
    regime: WidthRegime


def _rational(x, max_den=10**6, tol=1e-9):
    frac = Fraction(x).limit_denominator(max_den)
    if frac.denominator <= max_den and abs(x - float(frac)) < tol * max(1.0, abs(x)):
        return frac
    return None


def _family_lengths(j, geom):
    ls = {1: geom.l1, 2: geom.l2, 3: geom.l3}
    base = ls.pop(j)
    others = list(ls.values())
    return base, others


def classify_regime(m, j, geom):
    """Regime of the band near m*pi/l_j from the rationality of length ratios."""
    base, others = _family_lengths(j, geom)
    resonant = []
    for lo in others:
        ratio = lo / base
        frac = _rational(ratio)
        sin_val = np.sin(m * np.pi * ratio)
        if frac is not None:
            resonant.append(m % frac.denominator == 0)
        else:
            if abs(sin_val) < 1e-9:
                raise RegimeMismatch(
                    f"sin(m*pi*{ratio}) ~ 0 at m={m} but the ratio is not "
                    "recognized as rational; declare the regime explicitly")
            resonant.append(False)
    n_res = sum(resonant)
    if n_res == 2:
        return WidthRegime.DoubleResonanceConstant
    if n_res == 1:
        return WidthRegime.CommensurateConstant
    return WidthRegime.Incommensurate_1overM


def band_width_prediction(m, j, params, geom, m_min=20, regime=None, radius=0.15):
    """Predicted width Delta E_m of the band near k = m*pi/l_j.

    The regime label comes from the continued-fraction rationality test; the
    width itself is computed from the local polynomial model of the secular
    condition around the center, which reproduces the closed-form asymptotics
    in all three regimes (see incommensurate_width_leading for the explicit
    O(1/m) leading term) without relying on the hand-expanded formulas.
    """
    if not (0 < params.t < 1):
        raise ValueError("width asymptotics apply for t in (0,1)")
    if m < m_min:
        raise ValueError(f"m={m} below the asymptotic-regime floor m_min={m_min}")
    if regime is None:
        regime = classify_regime(m, j, geom)
    base, _ = _family_lengths(j, geom)
    k0 = m * np.pi / base
    edges = local_band_edges(k0, params, geom, radius=radius)
    width = 0.0 if edges is None else edges[1] ** 2 - edges[0] ** 2
    return BandWidthPrediction(m, k0, j, width, regime)


def incommensurate_width_leading(m, j, params, geom):
    """Closed-form O(1/m) width of an incommensurate-regime band.

    Delta E_m = (16/(9 m pi l^2)) * sqrt[(beta_c (s_a+s_b))^2
                + (bf~ (s_b-s_a))^2] / |beta_a s_a s_b|
    with s_a, s_b the sines of m pi l_other/l_base.  The coefficient of the
    sin-theta term, bf~ = sqrt(3) sin(gamma(1-t)) sin(pi t/3)/(cos(pi t/3)-1),
    is fixed by matching the exact secular polynomial; it multiplies the
    antisymmetric combination s_b - s_a.
    """
    beta = beta_coefficients(params)
    t, gamma = params.t, params.gamma
    A = np.cos(np.pi * t / 3)
    bft = np.sqrt(3) * np.sin(gamma * (1 - t)) * np.sin(np.pi * t / 3) / (A - 1)
    base, (la, lb) = _family_lengths(j, geom)
    sa = np.sin(m * np.pi * la / base)
    sb = np.sin(m * np.pi * lb / base)
    amp = np.hypot(beta.beta_c * (sa + sb), bft * (sb - sa))
    return 16 / (9 * m * np.pi * geom.l ** 2) * amp / abs(beta.beta_a * sa * sb)


def measure_band_width(m, j, params, geom, n_samples=4001):
    """Scanner-measured width of the band near m*pi/l_j, or None if absent.

    Independent of the local-model prediction path: samples the sign of the
    band function f = vc^2+vs^2-vz^2 across a guard window and bisects the
    outermost sign changes.
    """
    base, _ = _family_lengths(j, geom)
    k0 = m * np.pi / base
    edges = local_band_edges(k0, params, geom)
    if edges is not None:
        half = 5 * max(edges[1] - edges[0], 1e-5)
        center = 0.5 * (edges[0] + edges[1])
    else:
        half = max(0.5 / m, 1e-3)
        center = k0
    ks = np.linspace(center - half, center + half, n_samples)
    f = band_function(ks, params, geom)
    pos = np.nonzero(f > 0)[0]
    if len(pos) == 0:
        return None

    def refine(a, b):
        fa = band_function(np.array([a]), params, geom)[0]
        for _ in range(60):
            mid = 0.5 * (a + b)
            fm = band_function(np.array([mid]), params, geom)[0]
            if (fa > 0) == (fm > 0):
                a, fa = mid, fm
            else:
                b = mid
        return 0.5 * (a + b)

    i0, i1 = pos[0], pos[-1]
    k_lo = refine(ks[i0], ks[i0 - 1]) if i0 > 0 else ks[0]
    k_hi = refine(ks[i1], ks[i1 + 1]) if i1 < len(ks) - 1 else ks[-1]
    return k_hi ** 2 - k_lo ** 2


# ---------------------------------------------------------------------------
# degenerate limits

class DegenerateLimit(enum.Enum):
    L1_to_0 = "L1_to_0"
    L3_to_0 = "L3_to_0"


class BandFamily(enum.Enum):
    MPiOverL1 = "MPiOverL1"
    MPiOverL2 = "MPiOverL2"
    MPiOverL3 = "MPiOverL3"
    IntegerK = "IntegerK"
    HalfIntegerK = "HalfIntegerK"


def degenerate_band_width(limit, family, m, params, geom):
    """Asymptotic band width for the degenerate chains l1 -> 0 or l3 -> 0.

    geom supplies the surviving lengths (the vanishing one is ignored).
    Requires gamma != 0 (beta_b appears in every denominator) and t in (0,1).
    """
    if params.gamma == 0:
        raise ValueError("degenerate widths are undefined at gamma=0 (beta_b=0)")
    if not (0 < params.t < 1):
        raise ValueError("degenerate widths apply for t in (0,1)")
    beta = beta_coefficients(params)
    # The sin-theta amplitude carries bf~ = sqrt(3) S B/(A-1) rather than
    # beta_f, for the same matching reason as in incommensurate_width_leading;
    # verified against wide-window scans of the exact band function at l1=0.
    t, gamma = params.t, params.gamma
    A = np.cos(np.pi * t / 3)
    bft = np.sqrt(3) * np.sin(gamma * (1 - t)) * np.sin(np.pi * t / 3) / (A - 1)
    Q = np.hypot(beta.beta_c, bft) / abs(beta.beta_b)
    l, l1, l2, l3 = geom.l, geom.l1, geom.l2, geom.l3

    if limit is DegenerateLimit.L1_to_0:
        if family is BandFamily.MPiOverL3:
            base, other = l3, l2
        elif family is BandFamily.MPiOverL2:
            base, other = l2, l3
        else:
            raise ValueError(f"family {family} has no bands in the l1->0 limit")
        frac = _rational(other / base)
        if frac is not None and m % frac.denominator == 0:
            return 8 * (l2 + l3) / (3 * l * l2 * l3) * Q
        return 8 / (3 * l * base) * Q

    if limit is DegenerateLimit.L3_to_0:
        if family is BandFamily.MPiOverL1:
            return 8 / (3 * l * l1) * Q
        if family is BandFamily.IntegerK:
            c = np.cos(m * l1)
            if abs(c) > 1e-9:
                return 8 / (3 * l * l1) * Q / abs(c)
            return 4 / (3 * l) * Q / np.sqrt(l1 ** 2 / 2 + np.pi ** 2 / 2)
        if family is BandFamily.HalfIntegerK:
            s = np.sin((2 * m - 1) * l1 / 2)
            if abs(s) > 1e-9:
                return (2 / (9 * (2 * m - 1) * np.pi * l ** 2)
                        * abs((9 * beta.beta_d + beta.beta_e)
                              * np.hypot(beta.beta_c, bft)
                              / (beta.beta_b ** 2 * s)))
            return 8 / (3 * l * l1) * Q
        raise ValueError(f"family {family} has no bands in the l3->0 limit")
    raise ValueError(f"unknown degenerate limit {limit}")


# ---------------------------------------------------------------------------
# spectral probability

class ProbabilityMethod(enum.Enum):
    DirectMeasure = "DirectMeasure"
    TorusMonteCarlo = "TorusMonteCarlo"
    Analytic = "Analytic"


class TorusVariant(enum.Enum):
    GenericDelta = "GenericDelta"
    SymmetricDelta = "SymmetricDelta"
    L1Zero = "L1Zero"
    L3Zero = "L3Zero"


@dataclass(frozen=True)
class ProbabilityEstimate:
    value: float
    method: ProbabilityMethod
    standard_error: float
    samples_or_emax: float


def sigma_probability_direct(e_max, params, geom, resolution=None):
    """|sigma cap [0, E_max]| / E_max measured from the band scanner."""
    k_max = np.sqrt(e_max)
    if resolution is None:
        resolution = max(2e-3, k_max / 200000)
    intervals = scan_bands(min(1e-3, resolution), k_max, resolution, params, geom)
    measure = sum(iv.k_hi ** 2 - iv.k_lo ** 2
                  for iv in intervals if iv.kind is BandKind.Band)
    return ProbabilityEstimate(measure / e_max, ProbabilityMethod.DirectMeasure,
                               0.0, e_max)


def _torus_fraction(samples, seed, ndim, condition, chunk=1_000_000):
    """Counter-based Monte Carlo on the flat torus [0,2pi)^ndim.

    Each chunk draws from a Philox stream at a disjoint counter offset, so the
    result is bit-reproducible for a given seed regardless of chunking.
    """
    hits = 0
    done = 0
    idx = 0
    while done < samples:
        n = min(chunk, samples - done)
        bitgen = np.random.Philox(key=seed, counter=idx << 128)
        rng = np.random.Generator(bitgen)
        x = rng.uniform(0.0, TWO_PI, size=(n, ndim))
        hits += int(np.count_nonzero(condition(x)))
        done += n
        idx += 1
    p = hits / samples
    return p, np.sqrt(p * (1 - p) / samples)


def sigma_probability_torus(samples, seed, variant, symmetric_rings=False,
                            monte_carlo=None):
    """P_sigma from the ergodic-torus representation of the band condition.

    GenericDelta samples the t=0 high-energy band condition on [0,2pi)^3;
    SymmetricDelta returns the analytic value 2 arcsin(2 sqrt2/3)/pi (pass
    monte_carlo=True to sample the symmetric condition instead); L1Zero and
    L3Zero are the degenerate-chain conditions.  With symmetric_rings=True,
    L1Zero uses the l2=l3 diagonal, on which the band condition always holds.
    """
    if samples < 10**5:
        raise ValueError("need at least 1e5 samples for a meaningful estimate")
    if variant is TorusVariant.GenericDelta:
        def cond(x):
            s1, s2, s3 = np.sin(x[:, 0]), np.sin(x[:, 1]), np.sin(x[:, 2])
            num = np.sin(x.sum(axis=1)) - 0.5 * s1 * s2 * s3 - s1
            den = s2 + s3
            return np.abs(num) <= np.abs(den)
        p, se = _torus_fraction(samples, seed, 3, cond)
        return ProbabilityEstimate(p, ProbabilityMethod.TorusMonteCarlo, se, samples)
    if variant is TorusVariant.SymmetricDelta:
        if monte_carlo:
            def cond(x):
                s = np.sin(x[:, 0])
                return np.abs(1 - 2.25 * s * s) <= 1.0
            p, se = _torus_fraction(samples, seed, 1, cond)
            return ProbabilityEstimate(p, ProbabilityMethod.TorusMonteCarlo, se, samples)
        value = 2 * np.arcsin(2 * np.sqrt(2) / 3) / np.pi
        return ProbabilityEstimate(value, ProbabilityMethod.Analytic, 0.0, samples)
    if variant is TorusVariant.L1Zero:
        if symmetric_rings:
            def cond(x):
                s = np.sin(x[:, 0])
                return s * s >= 0
            p, se = _torus_fraction(samples, seed, 1, cond)
        else:
            def cond(x):
                return np.sin(x[:, 0]) * np.sin(x[:, 1]) >= 0
            p, se = _torus_fraction(samples, seed, 2, cond)
        return ProbabilityEstimate(p, ProbabilityMethod.TorusMonteCarlo, se, samples)
    if variant is TorusVariant.L3Zero:
        def cond(x):
            return np.sin(x[:, 0]) * np.sin(x[:, 0] + x[:, 1]) >= 0
        p, se = _torus_fraction(samples, seed, 2, cond)
        return ProbabilityEstimate(p, ProbabilityMethod.TorusMonteCarlo, se, samples)
    raise ValueError(f"unknown torus variant {variant}")


def low_energy_ratio(geom, gamma):
    """Taylor value of vz/vc as k -> 0 for the delta coupling (t=0)."""
    l1, l2, l3, l = geom.l1, geom.l2, geom.l3, geom.l
    tg = np.tan(gamma / 2)
    return (1 + 3 * (l2 * l3 + l1 * l3 + l1 * l2) * tg / (l * (l2 + l3))
            + 4.5 * l1 * l2 * l3 * tg ** 2 / (l ** 2 * (l2 + l3)))


def low_energy_ratio_numeric(geom, gamma, k=1e-5):
    """vz/vc at small k, for cross-checking low_energy_ratio."""
    from .coupling import CouplingParams
    vc, _, vz = v_arrays(float(k), CouplingParams(0.0, gamma), geom)
    return vz / vc
