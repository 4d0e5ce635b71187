"""Viscoelastic dispersion-attenuation models with positive relaxation spectra.

The package evaluates attenuation laws built from spectral measures or
closed-form families, computes the frequency-domain observables they induce,
classifies finite versus infinite propagation speed, synthesizes Green's
functions including precursor demonstrations, and fits or converts discrete
spectra.
"""

from .errors import (AccuracyError, AccuracyWarning, InconclusiveError,
                     PathologyWarning, ViscowaveError)
from .measure import PowerLawDensity, SpectralMeasure, TabulatedDensity
from .laws import (AdmissibilityReport, AttenuationLaw, CmCheckResult, ColeLaw,
                   LogPowerLaw, MaterialModel, MeasureLaw, PowerLaw,
                   TwoExponentLaw, admissibility_check, cm_check, law_from_json)
from .dispersion import (CriticalFrequencyResult, FrequencyGrid, attenuation,
                         critical_frequency, dispersion, local_exponent,
                         phase_speed, slowness, variable_exponent)
from .causality import (CausalityVerdict, Classification, PaleyWienerResult,
                        TailFit, classify, fit_attenuation_tail, pw_integral,
                        square_integrability)
from .green import (ContourParams, GreenSnapshot, InversionResult,
                    bromwich_invert, green_1d, green_3d, snapshot,
                    stable_density)
from .fit import (AttenuationSamples, ConversionDiagnostic, ConversionResult,
                  RationalSpectrum, RecoveredSpectrum, attenuation_to_relaxation,
                  fit_atoms, perron_density, recover_density,
                  relaxation_to_attenuation)

__version__ = "0.1.0"

__all__ = [
    "AccuracyError", "AccuracyWarning", "InconclusiveError", "PathologyWarning",
    "ViscowaveError",
    "PowerLawDensity", "SpectralMeasure", "TabulatedDensity",
    "AdmissibilityReport", "AttenuationLaw", "CmCheckResult", "ColeLaw",
    "LogPowerLaw", "MaterialModel", "MeasureLaw", "PowerLaw", "TwoExponentLaw",
    "admissibility_check", "cm_check", "law_from_json",
    "CriticalFrequencyResult", "FrequencyGrid", "attenuation",
    "critical_frequency", "dispersion", "local_exponent", "phase_speed",
    "slowness", "variable_exponent",
    "CausalityVerdict", "Classification", "PaleyWienerResult", "TailFit",
    "classify", "fit_attenuation_tail", "pw_integral", "square_integrability",
    "ContourParams", "GreenSnapshot", "InversionResult", "bromwich_invert",
    "green_1d", "green_3d", "snapshot", "stable_density",
    "AttenuationSamples", "ConversionDiagnostic", "ConversionResult",
    "RationalSpectrum", "RecoveredSpectrum", "attenuation_to_relaxation",
    "fit_atoms", "perron_density", "recover_density", "relaxation_to_attenuation",
    "__version__",
]
