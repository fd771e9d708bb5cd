"""Physical constants and the unit conversions used at the user boundary."""

import math

from scipy import constants as _sc

C_LIGHT = _sc.c  # m/s

NM = 1e-9
UM = 1e-6
FS = 1e-15
PS = 1e-12


def wavenumber_from_wavelength(wavelength: float) -> float:
    """k = 2π/λ (λ in meters, k in 1/m)."""
    if wavelength <= 0:
        raise ValueError(f"wavelength must be > 0, got {wavelength}")
    return 2.0 * math.pi / wavelength


def wavelength_from_wavenumber(k: float) -> float:
    if k <= 0:
        raise ValueError(f"wavenumber must be > 0, got {k}")
    return 2.0 * math.pi / k


def angular_frequency_from_wavenumber_cm(nu_cm: float) -> float:
    """Spectroscopic wavenumber (cm^-1) to angular frequency (rad/s)."""
    return 2.0 * math.pi * C_LIGHT * 100.0 * nu_cm


def wavenumber_cm_from_angular_frequency(omega: float) -> float:
    return omega / (2.0 * math.pi * C_LIGHT * 100.0)
