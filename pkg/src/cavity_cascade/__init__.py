"""Cavity control of cascaded chi(3) x chi(3) contributions to fifth-order 2D Raman signals."""

from .errors import InvalidReferenceError, NoFeasiblePointError, SingularConfigurationError
from .kernel import (
    CascadeConfig,
    ConeBound,
    DirectPrefactor,
    ModeTerm,
    SampleConfig,
    SuppressionReport,
    angle_window_50,
    angle_window_95,
    cascade_prefactor_m,
    cascade_prefactor_total,
    cascade_to_direct_scale,
    direct_prefactor,
    matched_peak_total,
    reference_value,
    suppression_ratio,
    term_sinc_squared,
)
from .modes import (
    CavityGeometry,
    ResonanceWindow,
    cascade_mode_frequency,
    contributing_modes,
    mode_frequencies,
    mode_frequency,
)
from .phase_matching import (
    Pulse,
    PulseSequence,
    direct_mismatch,
    longitudinal_mismatch,
    signal_directions,
    sinc,
)
from .response import (
    SignalSurfaces,
    Surface2D,
    VibronicModel,
    assemble_signal,
    default_response,
)
from .scan import (
    OptimumResult,
    ScanRange,
    ScanSpec,
    ScanTable,
    large_cavity_spec,
    optimize,
    run_scan,
    sensitivity,
    sub_wavelength_spec,
)

__version__ = "0.1.0"
