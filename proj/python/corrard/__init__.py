"""Sparse Bayesian regression with correntropy (MCR-ARD) and Gaussian (LSR-ARD) likelihoods."""

from ._corrard import (
    AllFeaturesPruned,
    CorrardError,
    FittedModel,
    InputError,
    NotSPD,
    TrainedModel,
    __version__,
    build_lagged_design,
    correlation,
    corrupt_covariates,
    fit_lsr_ard,
    fit_mcr_ard,
    generate_synthetic,
    grid_points,
    load_model,
    model_from_json,
    normalize_target_01,
    penalized_correntropy,
    rmse,
    select_bandwidth,
    selection_recall,
    source_contribution,
    top_k_sources,
    train,
    w_step,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
