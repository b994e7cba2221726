"""Band spectrum of a periodic ring-chain quantum graph with an interpolated
circulant vertex coupling: secular condition (determinant and closed-form
polynomial paths), band/gap/flat-band/negative-spectrum scans, dispersion
curves, high-energy band-width asymptotics and spectral probabilities."""

__version__ = "0.1.0"

from .asymptotics import (BandFamily, BandWidthPrediction, BetaCoefficients,
                          DegenerateLimit, ProbabilityEstimate,
                          ProbabilityMethod, RegimeMismatch, TorusVariant,
                          WidthRegime, band_width_prediction,
                          beta_coefficients, classify_regime,
                          degenerate_band_width, incommensurate_width_leading,
                          low_energy_ratio, measure_band_width,
                          sigma_probability_direct, sigma_probability_torus)
from .coupling import (CouplingParams, alpha_from_gamma, circulant_matrix,
                       coupling_matrix, dft_matrix, fourier_eigenvector,
                       gamma_from_alpha, generating_vector_from_eigenvalues,
                       interpolated_eigenvalues)
from .secular import (ChainGeometry, SecularCoefficients, VTriple,
                      polynomial_coefficients, band_function,
                      secular_determinant, secular_polynomial, v_arrays,
                      v_triple)
from .spectrum import (BandCenterWarning, BandKind, DispersionPoint,
                       EnergySign, FlatBand, FlatBandCandidate,
                       FlatBandOrigin, NegativeBandBoundError, NoSolution,
                       SpectralInterval, Threshold, ThresholdBoundary,
                       band_test, dispersion, flat_bands, lowest_band_edge,
                       lowest_negative_edge, negative_band_bound,
                       negative_band_function, negative_spectrum, scan_bands,
                       threshold_at_zero, threshold_intervals)

__all__ = [name for name in dir() if not name.startswith("_")]
