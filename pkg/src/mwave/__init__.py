"""Continuous spectral wavelets on the torus and the 2-sphere."""

__version__ = "0.1.0"

from .errors import (AliasWarning, DegenerateFit, DegenerateSymbol, DimensionMismatch, GridTooNarrow,
                     MwaveError, NonAdmissible, NotUnitVector, QuadratureFailure, SingularTriangle,
                     TruncationWarning)
from .spectral_core import (ScaleGrid, SymbolFunction, TruncationConstants, band_integral, bilateral_sum,
                            calderon_constant, daubechies_bounds, discrete_sum, gauss, mexican, paper_torus,
                            parse_symbol, reconstruction_grid, truncation_constants)
from .torus import (SeriesMode, ThetaPair, TorusPoint, U_t, V_t, mexican_hat_T2, torus_distance,
                    torus_kernel, torus_kernel_grid)
from .sphere import (GegenbauerEvaluator, HeatTraceSeries, MaclaurinApprox, ZonalKernel, gegenbauer,
                     gt_approx, heat_kernel_series, heat_trace, ht_approx, sphere_distance,
                     sphere_kernel_series)
from .maclaurin import maclaurin_from_pole, pole_coefficients, pole_matrix
from .transform import (Manifold, SpectralField, apply_wavelet, calderon_identity_check, holder_fit,
                        localization_report, random_field, reconstruct, relative_l2_error, sup_norm)
from .config import RunConfig
