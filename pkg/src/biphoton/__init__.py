"""Numerics for attosecond-entangled XUV photon pairs from two-photon decay
of metastable helium-like atoms: spheroid-cavity polarization transport, pair
spectra and time correlations, and excitation-scheme rate budgets."""

from .cavity import (
    RayPair,
    Spheroid,
    ThetaConvergenceError,
    angular_jacobian,
    emission_ray,
    theta_curve,
    theta_factor_mc,
    theta_factor_quadrature,
)
from .registry import Registry, SpeciesData, SpeciesNotFound, default_registry, species
from .reporting import ReproRow, ReproTable, Scenario, SchemaError, repro_report, run_scenario
from .schemes import (
    AbsorberChain,
    RateReport,
    ReportEntry,
    SchemeConfig,
    absorption_coefficient,
    attenuation_fraction,
    biphoton_rate_narrowband,
    biphoton_rate_sequential,
    collection_fraction,
    etpa_ion_rate,
    four_photon_rabi,
    four_photon_rate,
    four_photon_rate_broadband,
    he_absorber,
    lz_integral,
    lz_leakage_rate,
    one_photon_rate,
    r_trans,
    scrap_biphoton_rate,
    scrap_transfer_probability,
    steady_state_fraction,
)
from .spectrum import (
    BiphotonSpectrum,
    CorrelationSeries,
    CorrelationTime,
    DipoleChainProvider,
    FlatChain,
    PoleChain,
    ScaledChain,
    TabulatedChain,
    angular_distribution,
    correlation_function,
    correlation_time,
    flat_correlation_closed_form,
    hydrogenic_scaled,
    provider_flat,
    provider_pole,
    spectral_amplitude,
    two_photon_decay_rate,
)
from .units import (
    DimensionError,
    Quantity,
    UnknownUnitError,
    atoms_in_focal_volume,
    convert,
    intensity_to_field,
    number_density,
    photon_flux,
    photon_flux_density,
)

__version__ = "0.1.0"
