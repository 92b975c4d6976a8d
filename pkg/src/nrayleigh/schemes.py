"""TAS/MRC and TAS/SC analytics over cascaded Rayleigh fading.

TAS/MRC picks the transmit antenna whose receive-side maximal-ratio combined
SNR is largest; TAS/SC picks the single best transmit/receive antenna pair.
Both post-processing SNR distributions are powers of a regularized
incomplete gamma:

    TAS/MRC: F(g) = P(a, w * beta_mrc * g^(1/n)) ^ n_t,   a = m * n_r
    TAS/SC:  F(g) = P(m, w * beta_sc  * g^(1/n)) ^ (n_t * n_r)

where w is a calibration weight on the scale (default 1.176 for TAS/MRC,
1.0 for TAS/SC).  On top of the distributions this module provides outage
probability, its small-threshold power-law form, diversity order, coding
gain and the inverse (required-SNR) solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from .fading import branch_snr_params, fading_params, validate_cascade_order
from .specfun import ConvergenceError, ln_gamma, ln_reg_lower_gamma

__all__ = [
    "AsymptoticForm",
    "ChannelConfig",
    "CodingGain",
    "DEFAULT_CALIBRATION",
    "OutageQuery",
    "Scheme",
    "coding_gain",
    "diversity_order",
    "outage",
    "outage_asymptotic",
    "postproc_cdf",
    "required_snr",
]


class Scheme(Enum):
    """Antenna-selection scheme: MRC combining or best-pair selection."""

    TAS_MRC = "tas-mrc"
    TAS_SC = "tas-sc"


DEFAULT_CALIBRATION = {Scheme.TAS_MRC: 1.176, Scheme.TAS_SC: 1.0}

# Bracket for the required-SNR bisection, in dB.
_BRACKET_DB = (-100.0, 200.0)


@dataclass(frozen=True)
class ChannelConfig:
    """A complete link scenario: cascade order, antennas, mean branch SNR.

    ``calibration_omega`` is the weight applied to the distribution scale;
    ``None`` selects the per-scheme default (1.176 for TAS/MRC, 1.0 for
    TAS/SC).  Set it to 1.0 explicitly to disable calibration.
    """

    n: int
    n_t: int
    n_r: int
    mean_snr: float
    calibration_omega: float | None = None

    def __post_init__(self) -> None:
        validate_cascade_order(self.n)
        for name, value in (("n_t", self.n_t), ("n_r", self.n_r)):
            if value != int(value) or int(value) < 1:
                raise ValueError(f"{name} must be an integer >= 1, got {value}")
        if not (self.mean_snr > 0.0) or not math.isfinite(self.mean_snr):
            raise ValueError(f"mean_snr must be positive and finite, got {self.mean_snr}")
        if self.calibration_omega is not None and not (self.calibration_omega > 0.0):
            raise ValueError(
                f"calibration_omega must be positive, got {self.calibration_omega}"
            )

    @property
    def total_antennas(self) -> int:
        """N = n_t * n_r."""
        return int(self.n_t) * int(self.n_r)

    def omega_for(self, scheme: Scheme) -> float:
        """Calibration weight in effect for the given scheme."""
        if self.calibration_omega is not None:
            return float(self.calibration_omega)
        return DEFAULT_CALIBRATION[scheme]

    def with_mean_snr(self, mean_snr: float) -> "ChannelConfig":
        return ChannelConfig(
            n=self.n,
            n_t=self.n_t,
            n_r=self.n_r,
            mean_snr=mean_snr,
            calibration_omega=self.calibration_omega,
        )


@dataclass(frozen=True)
class OutageQuery:
    """Outage threshold, given directly or via a target rate R (bits/s/Hz).

    Exactly one of ``threshold`` / ``rate`` must be provided; a rate R maps
    to the linear SNR threshold 2^R - 1.
    """

    threshold: float | None = None
    rate: float | None = None

    def __post_init__(self) -> None:
        if (self.threshold is None) == (self.rate is None):
            raise ValueError("provide exactly one of threshold or rate")
        if self.threshold is not None and not (self.threshold > 0.0):
            raise ValueError(f"threshold must be positive, got {self.threshold}")
        if self.rate is not None and not (self.rate > 0.0):
            raise ValueError(f"rate must be positive, got {self.rate}")

    @property
    def gamma_o(self) -> float:
        """The linear SNR threshold."""
        if self.threshold is not None:
            return float(self.threshold)
        return 2.0 ** float(self.rate) - 1.0


@dataclass(frozen=True)
class AsymptoticForm:
    """Decomposed small-threshold power law: coefficient * z^diversity."""

    coefficient: float
    diversity: float
    z: float
    z_definition: str


@dataclass(frozen=True)
class CodingGain:
    """Coding gain, both as printed and as extracted from the power law.

    For TAS/SC the two coincide.  For TAS/MRC the printed formula is
    typographically ambiguous in where the n_r^(1/n) factor sits; the
    ``printed`` value takes it in the denominator (gain falling with n_r)
    while ``extracted`` (gain proportional to n_r) is self-consistent with
    the asymptotic coefficient by construction.
    """

    printed: float
    extracted: float


def _shape_exponent_scale(scheme: Scheme, cfg: ChannelConfig) -> tuple[float, int, float]:
    """(gamma-shape, order-statistics exponent, calibrated scale) for cfg."""
    params = branch_snr_params(cfg.n, cfg.n_r, cfg.mean_snr)
    w = cfg.omega_for(scheme)
    if scheme is Scheme.TAS_MRC:
        return params.a, int(cfg.n_t), w * params.beta_mrc
    return fading_params(cfg.n).m, cfg.total_antennas, w * params.beta_sc


def postproc_cdf(scheme: Scheme, gamma: float, cfg: ChannelConfig) -> float:
    """CDF of the post-processing SNR after selection and combining.

    Computed as exp(k * ln P) so that deep-outage values keep full relative
    accuracy.
    """
    gamma = float(gamma)
    if gamma < 0.0:
        raise ValueError(f"SNR must be nonnegative, got {gamma}")
    if gamma == 0.0:
        return 0.0
    shape, exponent, beta = _shape_exponent_scale(scheme, cfg)
    ln_p = ln_reg_lower_gamma(shape, beta * gamma ** (1.0 / cfg.n))
    if ln_p == -math.inf:
        return 0.0
    return math.exp(exponent * ln_p)


def outage(scheme: Scheme, query: OutageQuery, cfg: ChannelConfig) -> float:
    """Outage probability: post-processing SNR falls below the threshold."""
    return postproc_cdf(scheme, query.gamma_o, cfg)


def diversity_order(scheme: Scheme, cfg: ChannelConfig) -> float:
    """High-SNR slope magnitude d = m N / n; identical for both schemes."""
    del scheme  # shared by construction
    return fading_params(cfg.n).m * cfg.total_antennas / cfg.n


def _ln_asym_coefficient(scheme: Scheme, cfg: ChannelConfig) -> float:
    """ln of the power-law coefficient [(2s/Omega)^s / (s Gamma(s))]^k."""
    fp = fading_params(cfg.n)
    if scheme is Scheme.TAS_MRC:
        shape, exponent = fp.m * cfg.n_r, int(cfg.n_t)
    else:
        shape, exponent = fp.m, cfg.total_antennas
    per_factor = (
        shape * math.log(2.0 * shape / fp.omega)
        - math.log(shape)
        - ln_gamma(shape)
    )
    return exponent * per_factor


def outage_asymptotic(
    scheme: Scheme, query: OutageQuery, cfg: ChannelConfig
) -> tuple[float, AsymptoticForm]:
    """Leading-order outage power law for small normalized threshold.

    The normalized threshold is z = gamma_o / (n_r * mean_snr) for TAS/MRC
    and z = gamma_o / mean_snr for TAS/SC (the latter follows from the
    small-argument expansion of the TAS/SC distribution, which carries no
    n_r factor in its scale).  Calibration is never applied here: the power
    law describes the uncalibrated closed form.

    Returns the value together with its (coefficient, diversity, z)
    decomposition.  The value is meaningful only for z << 1; it is returned
    unconditionally and the caller judges the regime.
    """
    if scheme is Scheme.TAS_MRC:
        z = query.gamma_o / (cfg.n_r * cfg.mean_snr)
        z_definition = "gamma_o / (n_r * mean_snr)"
    else:
        z = query.gamma_o / cfg.mean_snr
        z_definition = "gamma_o / mean_snr"
    d = diversity_order(scheme, cfg)
    ln_coeff = _ln_asym_coefficient(scheme, cfg)
    value = math.exp(ln_coeff + d * math.log(z)) if z > 0.0 else 0.0
    return value, AsymptoticForm(
        coefficient=math.exp(ln_coeff), diversity=d, z=z, z_definition=z_definition
    )


def coding_gain(scheme: Scheme, cfg: ChannelConfig) -> CodingGain:
    """Coding gain: the SNR scale at which the asymptote crosses unity.

    Extracted form: writing the power law as (gamma_o / (CG * mean_snr))^d
    gives CG = n_r * C^(-1/d) for TAS/MRC and CG = C^(-1/d) for TAS/SC,
    with C the asymptotic coefficient.
    """
    fp = fading_params(cfg.n)
    n = cfg.n
    d = diversity_order(scheme, cfg)
    ln_c = _ln_asym_coefficient(scheme, cfg)
    if scheme is Scheme.TAS_MRC:
        a = fp.m * cfg.n_r
        # Printed reading: n_r^(1/n) multiplies the denominator scale 2a/Omega.
        printed = (
            math.exp((ln_gamma(a) + math.log(a)) / a)
            / ((2.0 * a / fp.omega) * cfg.n_r ** (1.0 / n))
        ) ** n
        extracted = cfg.n_r * math.exp(-ln_c / d)
        return CodingGain(printed=printed, extracted=extracted)
    m = fp.m
    printed = (
        math.exp((ln_gamma(m) + math.log(m)) / m) / (2.0 * m / fp.omega)
    ) ** n
    extracted = math.exp(-ln_c / d)
    return CodingGain(printed=printed, extracted=extracted)


def required_snr(
    scheme: Scheme,
    target_outage: float,
    query: OutageQuery,
    cfg: ChannelConfig,
    rel_tol: float = 1e-9,
) -> float:
    """Mean branch SNR at which the outage equals ``target_outage``.

    Bisects on log mean-SNR inside [-100, +200] dB, exploiting that outage
    is strictly decreasing in the mean SNR.  ``cfg.mean_snr`` is ignored
    (it is the unknown being solved for).

    Raises:
        ConvergenceError: if the solution lies outside the bracket.
    """
    if not (0.0 < target_outage < 1.0):
        raise ValueError(f"target outage must be in (0, 1), got {target_outage}")
    lo = 10.0 ** (_BRACKET_DB[0] / 10.0)
    hi = 10.0 ** (_BRACKET_DB[1] / 10.0)

    def out_at(g: float) -> float:
        return outage(scheme, query, cfg.with_mean_snr(g))

    if out_at(lo) < target_outage or out_at(hi) > target_outage:
        raise ConvergenceError(
            f"required SNR for outage {target_outage} lies outside "
            f"[{_BRACKET_DB[0]}, {_BRACKET_DB[1]}] dB"
        )
    ln_lo, ln_hi = math.log(lo), math.log(hi)
    while ln_hi - ln_lo > rel_tol:
        ln_mid = 0.5 * (ln_lo + ln_hi)
        if out_at(math.exp(ln_mid)) > target_outage:
            ln_lo = ln_mid
        else:
            ln_hi = ln_mid
    return math.exp(0.5 * (ln_lo + ln_hi))
