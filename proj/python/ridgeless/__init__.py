from ._core import (
    DimensionError,
    DomainError,
    EffectiveRidge,
    FeatureMap,
    InfeasibleError,
    KernelModel,
    KernelSpec,
    RFModel,
    effective_dimension,
    effective_ridge,
    fit_kernel_ridge,
    fit_kernel_ridgeless,
    fit_rf_ridge,
    fit_rf_ridgeless,
    gd_closed_form,
    kernel_approx_error,
    kernel_matrix,
    rftk_train,
    sample_feature_map,
    sgd_train,
    synthetic_minmax,
    synthetic_slab,
    variance_factor,
)

__all__ = [name for name in dir() if not name.startswith("_")]
