"""Spatially correlated Rayleigh fading and channel hardening for planar RIS."""

from .geometry import (
    Direction,
    RisGeometry,
    array_response,
    element_indices,
    element_position,
    sample_isotropic_direction,
    wave_vector,
)
from .correlation import (
    EigenSpectrum,
    NumericalError,
    SpatialCorrelation,
    approx_rank,
    build_correlation,
    build_kronecker_approx,
    correlation_entry_quadrature,
    correlation_matrix_distance,
    effective_rank_energy,
    effective_rank_threshold,
    eigen_spectrum,
    ula_correlation,
)
from .channels import (
    ChannelRealization,
    CorrelationFactor,
    PropagationScenario,
    correlation_factor,
    empirical_covariance,
    plane_wave_channel,
    sample_channel,
    substream,
)
from .link import (
    PhaseConfig,
    SnrSampleSet,
    crossover_size,
    deterministic_snr_approx,
    ergodic_rate_estimate,
    hardening_statistic,
    optimal_phases,
    optimal_snr,
    outage_probability_estimate,
    random_phase_snr,
    snr_with_phases,
)

__version__ = "0.1.0"
