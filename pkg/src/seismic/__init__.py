"""Real-time prediction of information-cascade size with a self-exciting point process."""
from .calibration import (CalibrationReport, ReactionSample, calibrate, calibrate_alpha,
                          estimate_n_star, fit_memory_kernel)
from .config import RunConfig, dumps_config, load_config, loads_config
from .errors import (ConfigError, DomainError, FitError, NoPredictionError, ParseError,
                     SeismicError, UndefinedCorrelationError, UndefinedEstimateError)
from .estimator import (Cascade, CascadeStats, InfectiousnessEstimate, cascade_stats,
                        infectiousness_mle, infectiousness_weighted)
from .evaluation import (EvaluationReport, ape, breakout_coverage, kendall_tau, median_ape,
                         run_benchmark)
from .kernel import (TWITTER_KERNEL, MemoryKernelParams, phi, phi_integral, triangular_weight,
                     weighted_phi_integral)
from .predictor import (TWITTER_ALPHA_SCHEDULE, Prediction, PredictionParams, alpha_at, predict,
                        predict_uncorrected)
from .simulator import (DegreeDistribution, GwConfig, SimConfig, simulate_cascade,
                        simulate_galton_watson)

__version__ = "0.1.0"
