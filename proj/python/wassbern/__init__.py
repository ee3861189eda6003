from ._wassbern import (
    GaussianMixtureAt,
    GprModel,
    MixtureModel,
    PolyModel,
    PredictiveModel,
    WassbernError,
    bernstein_basis,
    dataset_families,
    energy_distance,
    evaluate,
    gaussian_w2_sq,
    gaussian_w2_sq_isotropic_target,
    generate,
    psd_sqrt,
    train,
)

__all__ = [
    "GaussianMixtureAt",
    "GprModel",
    "MixtureModel",
    "PolyModel",
    "PredictiveModel",
    "WassbernError",
    "bernstein_basis",
    "dataset_families",
    "energy_distance",
    "evaluate",
    "gaussian_w2_sq",
    "gaussian_w2_sq_isotropic_target",
    "generate",
    "psd_sqrt",
    "train",
]
