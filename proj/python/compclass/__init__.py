"""Compressive classification of low-rank Gaussian mixtures."""

from ._compclass import (
    InfeasibleDesign,
    MapClassifier,
    MeasurementKernel,
    SourceModel,
    ValidationError,
    design_from_allocation,
    design_one_vs_all,
    design_single_measurement,
    design_two_class,
    estimate_pe,
    exponent_report,
    noise_db_to_variance,
    pairwise_exponent,
    random_kernel,
    solve_allocation,
    sweep_noise,
    synthetic_model,
    transition,
    union_bound,
)

__all__ = [name for name in dir() if not name.startswith("_")]
