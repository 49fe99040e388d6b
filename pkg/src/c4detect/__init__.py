"""Detection of cross-correlated extreme events with fourth-order cumulants."""

from .copula_gen import (
    CopulaSpec,
    ExperimentDataset,
    gcop2tstudent,
    make_experiment,
    random_correlation,
    sample_gaussian,
)
from .detectors import (
    DetectionResult,
    RocCurve,
    hosvd_c4_detect,
    roc_point,
    roc_curve,
    rx_detect,
    rx_scores,
)
from .errors import (
    C4Error,
    DomainError,
    IngestionError,
    InsufficientDataError,
    InvalidOrderError,
    NumericError,
    SingularCovarianceError,
)
from .experiment import ExperimentConfig, run_experiment
from .ingest import PriceSeries, ingest_prices, log_increments
from .stats_dist import (
    MutualInfoReport,
    TDist,
    chi2_quantile,
    chi2_sample,
    gaussian_cdf,
    gaussian_quantile,
    mi_gaussian,
    mi_student_extra,
    mutual_information,
    t_cdf,
    t_quantile,
    tail_dependence,
)
from .sym_tensor import (
    SpectralDirections,
    SymmetricTensor,
    central_moment,
    contract_self,
    cumulants_upto_4,
    fourth_cumulant,
    leading_directions,
    whiten,
)

__version__ = "0.1.0"
