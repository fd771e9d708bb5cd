"""Fabry-Perot mode frequencies and the modes that take part in a cascade.

The mirrors quantize the longitudinal wavevector to ``n pi / L``; the
transverse wavevector is a continuum, pinned by phase matching to the
transverse part of the seeding pulse.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np

from .constants import C_LIGHT

if TYPE_CHECKING:
    from .phase_matching import Pulse

DEFAULT_MAX_MODE_INDEX = 64
DEFAULT_RELATIVE_HALFWIDTH = 0.5

# A mode whose band edge sits on the gap frequency up to rounding still counts.
_EDGE_RTOL = 1e-9


@dataclass(frozen=True)
class CavityGeometry:
    """Planar cavity of mirror spacing ``length`` (m)."""

    length: float
    speed_of_light: float = C_LIGHT
    max_mode_index: int = DEFAULT_MAX_MODE_INDEX

    def __post_init__(self):
        if not self.length > 0:
            raise ValueError(f"cavity length must be > 0, got {self.length}")
        if int(self.max_mode_index) != self.max_mode_index or self.max_mode_index < 1:
            raise ValueError(f"max_mode_index must be an integer >= 1, got {self.max_mode_index}")

    @property
    def fundamental_kz(self) -> float:
        """pi / L, the longitudinal wavevector spacing."""
        return math.pi / self.length

    def band_edge(self, n: int) -> float:
        """Lowest frequency mode ``n`` supports (k_perp = 0), rad/s."""
        return self.speed_of_light * n * math.pi / self.length


@dataclass(frozen=True)
class ResonanceWindow:
    """Band of photon frequencies around the electronic gap.

    ``relative_halfwidth`` is a calibration choice: 0.5 reproduces both the
    ``m <= 2`` count of a wavelength-sized cavity and the ``m <= 2p`` count
    at ``L = 2 p pi / k``. A halfwidth of 0 is accepted and admits only exact
    resonances.
    """

    center_frequency: float
    relative_halfwidth: float = DEFAULT_RELATIVE_HALFWIDTH

    def __post_init__(self):
        if not self.center_frequency > 0:
            raise ValueError(f"center_frequency must be > 0, got {self.center_frequency}")
        if not 0.0 <= self.relative_halfwidth < 1.0:
            raise ValueError(
                f"relative_halfwidth must lie in [0, 1), got {self.relative_halfwidth}"
            )

    @classmethod
    def for_pulse(cls, pulse: Pulse, relative_halfwidth: float = DEFAULT_RELATIVE_HALFWIDTH,
                  speed_of_light: float = C_LIGHT) -> ResonanceWindow:
        """Window centred on c·k of ``pulse`` (the gap is taken resonant with the pulses)."""
        return cls(speed_of_light * pulse.wavenumber, relative_halfwidth)

    @property
    def is_calibrated_default(self) -> bool:
        return self.relative_halfwidth == DEFAULT_RELATIVE_HALFWIDTH

    def contains(self, omega: float) -> bool:
        return abs(omega - self.center_frequency) <= self.relative_halfwidth * self.center_frequency


def mode_frequency(n: int, k_perp: float, cavity: CavityGeometry) -> float:
    """omega_n(k_perp) = c sqrt(k_perp^2 + n^2 pi^2 / L^2) in rad/s."""
    if int(n) != n or n < 1:
        raise ValueError(f"mode index must be an integer >= 1, got {n}")
    if k_perp < 0:
        raise ValueError(f"k_perp must be >= 0, got {k_perp}")
    kz = n * math.pi / cavity.length
    return cavity.speed_of_light * math.hypot(k_perp, kz)


def cascade_mode_frequency(m: int, seeding_pulse: Pulse, cavity: CavityGeometry) -> float:
    """Frequency of the exchanged photon in mode ``m``.

    Transverse matching pins the photon's k_perp to that of the seeding
    pulse (k2 for the sequential cascade, k3 for the parallel one).
    """
    return mode_frequency(m, seeding_pulse.k_perp, cavity)


def mode_frequencies(k_perp: float, cavity: CavityGeometry, n_max: int | None = None) -> np.ndarray:
    """Vectorised omega_n for n = 1..n_max (defaults to the cavity cutoff)."""
    n = np.arange(1, (n_max or cavity.max_mode_index) + 1)
    return cavity.speed_of_light * np.hypot(k_perp, n * math.pi / cavity.length)


def contributing_modes(
    seeding_pulse: Pulse, cavity: CavityGeometry, window: ResonanceWindow
) -> list[int]:
    """Mode indices through which a near-resonant virtual photon is exchanged.

    Mode ``m`` is kept when

    * its band edge ``c m pi / L`` does not exceed the gap frequency, i.e.
      the mode can carry a photon at the gap at all, and
    * its frequency at the pinned transverse wavevector lies inside
      ``window``.

    The result is sorted, duplicate free and capped at
    ``cavity.max_mode_index``. An empty list is a legal answer.
    """
    omega_eg = window.center_frequency
    out = []
    for m in range(1, cavity.max_mode_index + 1):
        if cavity.band_edge(m) > omega_eg * (1.0 + _EDGE_RTOL):
            break  # band edges grow with m
        if window.contains(cascade_mode_frequency(m, seeding_pulse, cavity)):
            out.append(m)
    return out
