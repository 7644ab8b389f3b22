"""Extreme value analysis for finite, multivariate, correlated time series.

Pipeline: normalize a panel of high-frequency returns, rotate it into
the eigenbasis of its correlation matrix to obtain uncorrelated modes,
then run univariate peaks-over-threshold tail estimation, extremal-index
clustering diagnostics and, for nonstationary series, deseasonalization
plus rolling local-threshold estimation. A seeded synthetic market
supplies ground truth for every estimator.
"""

from .clustering import (
    InterexceedanceTimes,
    autocorrelation,
    ferro_segers,
    interexceedance,
    sample_interexceedance,
)
from .distributions import (
    GevParams,
    GpdParams,
    gev_cdf,
    gev_pdf,
    gev_quantile,
    gev_support,
    gpd_cdf,
    gpd_pdf,
    gpd_quantile,
    gpd_sample,
    gpd_support,
)
from .errors import (
    DegenerateDenominator,
    DegenerateRange,
    EvtError,
    InputError,
    InvalidLoadings,
    MissingHistory,
    NearSingular,
    NonConvergence,
    NonpositivePrice,
    NotSymmetric,
    NumericalError,
    TooFewExceedances,
    WindowTooLarge,
    ZeroProfile,
    ZeroVariance,
)
from .estimation import (
    ExcessSample,
    GpdFit,
    SweepEntry,
    asymptotic_se,
    extract_excesses,
    fit_gpd_mle,
    gpd_log_likelihood,
    gpd_score,
    infer_gev,
    nearest_rank_quantile,
    nrmsd,
    qq_points,
    theta_sweep,
    threshold_sweep,
)
from .modes import (
    Spectrum,
    correlation_matrix,
    eigenvalue_density,
    eigenvector_report,
    rotate_rescale,
    spectral_decompose,
)
from .nonstationary import (
    DynamicThreshold,
    NonstationaryGev,
    VolatilityProfile,
    dynamic_exceedances,
    intraday_profile,
    nonstationary_gev,
    residuals,
    rolling_quantile,
)
from .preprocess import (
    QuoteRecord,
    ReturnMatrix,
    TradingGrid,
    build_grid,
    log_returns,
    midpoint_series,
    normalize,
)
from .synthetic import (
    GroundTruth,
    SectorSpec,
    SimConfig,
    named_profile,
    simulate_cluster_process,
    simulate_returns,
)

__version__ = "0.1.0"
