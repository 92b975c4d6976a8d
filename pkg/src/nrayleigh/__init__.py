"""Outage, diversity and amount-of-fading analytics for TAS/MRC and TAS/SC
antenna selection over cascaded (n*) Rayleigh fading channels, validated by
a seeded Monte-Carlo channel simulator."""

from .fading import (
    BranchSnrParams,
    FadingParams,
    SingularDensityError,
    amplitude_pdf,
    branch_snr_params,
    fading_params,
    mrc_snr_cdf,
    mrc_snr_pdf,
)
from .moments import (
    CAPTION_COEFFS,
    NonPhysicalMomentError,
    WeightingCoefficients,
    af_bound_tas_mrc,
    af_simo,
    af_siso,
    amount_of_fading,
    default_weights,
    moment_oracle,
    moment_tas_mrc,
    moment_tas_sc,
)
from .montecarlo import (
    EmpiricalEstimate,
    MomentsAfEstimate,
    SimSettings,
    UniformStream,
    empirical_cdf,
    empirical_cdf_pair,
    estimate_moments_af,
    estimate_outage,
    sample_channel_coefficient,
    simulate_postproc_snr,
)
from .schemes import (
    AsymptoticForm,
    ChannelConfig,
    CodingGain,
    OutageQuery,
    Scheme,
    coding_gain,
    diversity_order,
    outage,
    outage_asymptotic,
    postproc_cdf,
    required_snr,
)
from .specfun import (
    Accuracy,
    ConvergenceError,
    binomial,
    ln_gamma,
    reg_lower_gamma,
    reg_upper_gamma,
)

__version__ = "0.1.0"

__all__ = [
    "Accuracy",
    "AsymptoticForm",
    "BranchSnrParams",
    "CAPTION_COEFFS",
    "ChannelConfig",
    "CodingGain",
    "ConvergenceError",
    "EmpiricalEstimate",
    "FadingParams",
    "MomentsAfEstimate",
    "NonPhysicalMomentError",
    "OutageQuery",
    "Scheme",
    "SimSettings",
    "SingularDensityError",
    "UniformStream",
    "WeightingCoefficients",
    "af_bound_tas_mrc",
    "af_simo",
    "af_siso",
    "amount_of_fading",
    "amplitude_pdf",
    "binomial",
    "branch_snr_params",
    "coding_gain",
    "default_weights",
    "diversity_order",
    "empirical_cdf",
    "empirical_cdf_pair",
    "estimate_moments_af",
    "estimate_outage",
    "fading_params",
    "ln_gamma",
    "moment_oracle",
    "moment_tas_mrc",
    "moment_tas_sc",
    "mrc_snr_cdf",
    "mrc_snr_pdf",
    "outage",
    "outage_asymptotic",
    "postproc_cdf",
    "reg_lower_gamma",
    "reg_upper_gamma",
    "required_snr",
    "sample_channel_coefficient",
    "simulate_postproc_snr",
    "__version__",
]
