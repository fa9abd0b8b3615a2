"""Dual-subarray push-broom super-resolution lab."""

from ._core import (
    PARAMETER_NAMES,
    ConfigError,
    MeasurementError,
    Observation,
    ResolutionReport,
    Scenario,
    SolverConfig,
    SrResult,
    StarSpec,
    SystemParams,
    bicubic_upsample,
    footprint_mtf,
    frequency_to_resolution,
    generate_target,
    jitter_mtf,
    load_scenario,
    measure_resolution,
    mtf_curves,
    nem,
    optics_mtf,
    read_pgm,
    run_campaign,
    run_cli,
    run_trial,
    sample_parameters,
    sampling_mtf,
    simulate,
    smear_mtf,
    super_resolve,
    sweep,
    system_otf,
    write_pgm,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
