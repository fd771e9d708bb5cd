"""Wavevector bookkeeping for the five-pulse fifth-order Raman geometry.

Angles are polar angles measured from the cavity axis (z); the mirrors are
normal to z, so only ``k cos(theta)`` is affected by the confinement and the
transverse component ``k sin(theta)`` is a free continuum label.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .constants import C_LIGHT
from .modes import CavityGeometry

Kind = Literal["sequential", "parallel"]
KINDS: tuple[Kind, ...] = ("sequential", "parallel")

_RECOMPOSE_RTOL = 1e-12


@dataclass(frozen=True)
class Pulse:
    """One incoming beam.

    Parameters
    ----------
    wavenumber:
        Carrier wavevector magnitude k = 2π/λ (1/m).
    theta:
        Polar angle from the cavity z-axis, in [0, π] (rad).
    phi:
        Azimuth in [0, 2π) (rad).
    sign:
        +1 or -1, the sign with which the pulse enters a phase-matching
        combination.
    center_time:
        Envelope centre (s).
    carrier_frequency:
        Optical carrier (rad/s). Defaults to c·k when left at 0.
    """

    wavenumber: float
    theta: float = 0.0
    phi: float = 0.0
    sign: int = 1
    center_time: float = 0.0
    carrier_frequency: float = 0.0

    def __post_init__(self):
        if not self.wavenumber > 0:
            raise ValueError(f"wavenumber must be > 0, got {self.wavenumber}")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi < 2.0 * math.pi:
            raise ValueError(f"phi must lie in [0, 2pi), got {self.phi}")
        if self.sign not in (1, -1):
            raise ValueError(f"sign must be +1 or -1, got {self.sign}")
        if self.carrier_frequency == 0.0:
            object.__setattr__(self, "carrier_frequency", C_LIGHT * self.wavenumber)
        kz, kp = self.k_z, self.k_perp
        if abs(kz * kz + kp * kp - self.wavenumber**2) > _RECOMPOSE_RTOL * self.wavenumber**2:
            raise ValueError("wavevector components do not recompose to k")

    @property
    def k_z(self) -> float:
        return self.wavenumber * math.cos(self.theta)

    @property
    def k_perp(self) -> float:
        return self.wavenumber * math.sin(self.theta)

    @property
    def wavevector(self) -> np.ndarray:
        """Unsigned Cartesian wavevector (1/m)."""
        st = math.sin(self.theta)
        return self.wavenumber * np.array(
            [st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)]
        )

    @property
    def signed_wavevector(self) -> np.ndarray:
        return self.sign * self.wavevector


@dataclass(frozen=True)
class PulseSequence:
    """Pulses k1..k5 plus the heterodyne/detection direction ks.

    Pulses 1 and 2 share a centre time, as do 3 and 4; the two controllable
    delays are ``T2 = tau3 - tau1`` and ``T4 = tau5 - tau3``.
    """

    pulses: tuple[Pulse, Pulse, Pulse, Pulse, Pulse]
    detection: Pulse

    def __post_init__(self):
        if len(self.pulses) != 5:
            raise ValueError(f"need exactly five pulses, got {len(self.pulses)}")
        p = self.pulses
        if p[1].center_time != p[0].center_time or p[3].center_time != p[2].center_time:
            raise ValueError("pulse pairs (1,2) and (3,4) must share centre times")
        if self.T2 < 0 or self.T4 < 0:
            raise ValueError(f"delays must be >= 0, got T2={self.T2}, T4={self.T4}")

    @property
    def T2(self) -> float:
        return self.pulses[2].center_time - self.pulses[0].center_time

    @property
    def T4(self) -> float:
        return self.pulses[4].center_time - self.pulses[2].center_time

    def pulse(self, j: int) -> Pulse:
        """1-based access, ``seq.pulse(2)`` is k2."""
        return self.pulses[j - 1]

    def seeding_pulse(self, kind: Kind) -> Pulse:
        """k2 seeds the sequential cascade, k3 the parallel one."""
        if kind == "sequential":
            return self.pulses[1]
        if kind == "parallel":
            return self.pulses[2]
        raise ValueError(f"unknown cascade kind {kind!r}")

    def with_angles(self, theta2: float | None = None, theta3: float | None = None) -> PulseSequence:
        """Copy with the degenerate pairs re-aimed (k1 follows k2, k4/k5/ks follow k3)."""
        p = list(self.pulses)
        det = self.detection
        if theta2 is not None:
            p[0] = _replace(p[0], theta=theta2)
            p[1] = _replace(p[1], theta=theta2)
        if theta3 is not None:
            for j in (2, 3, 4):
                p[j] = _replace(p[j], theta=theta3)
            det = _replace(det, theta=theta3)
        return PulseSequence(tuple(p), det)

    @classmethod
    def degenerate(
        cls,
        wavenumber: float,
        theta2: float,
        theta3: float,
        T2: float = 0.0,
        T4: float = 0.0,
        phi: float = 0.0,
    ) -> PulseSequence:
        """The k2 = k1, k4 = k3 geometry with k5 and ks along k3.

        In this geometry every one of the four signal directions reduces to
        k5, so detection along k3 needs k5 parallel to k3.
        """
        t1, t3 = 0.0, T2
        t5 = T2 + T4
        k12 = dict(wavenumber=wavenumber, theta=theta2, phi=phi)
        k345 = dict(wavenumber=wavenumber, theta=theta3, phi=phi)
        pulses = (
            Pulse(**k12, center_time=t1),
            Pulse(**k12, center_time=t1),
            Pulse(**k345, center_time=t3),
            Pulse(**k345, center_time=t3),
            Pulse(**k345, center_time=t5),
        )
        return cls(pulses, Pulse(**k345, center_time=t5))


def _replace(p: Pulse, **kw) -> Pulse:
    d = dict(
        wavenumber=p.wavenumber,
        theta=p.theta,
        phi=p.phi,
        sign=p.sign,
        center_time=p.center_time,
        carrier_frequency=p.carrier_frequency,
    )
    d.update(kw)
    return Pulse(**d)


# Coefficients of (k1, k2, k3, k4, k5) for the four fifth-order directions.
SIGNAL_COMBINATIONS = np.array(
    [
        [-1, +1, -1, +1, +1],
        [+1, -1, -1, +1, +1],
        [-1, +1, +1, -1, +1],
        [+1, -1, +1, -1, +1],
    ],
    dtype=float,
)


def signal_directions(seq: PulseSequence) -> np.ndarray:
    """The four fifth-order signal wavevectors, shape (4, 3).

    Row ``i`` is ks^(i+1): k5+k4-k3+k2-k1, k5+k4-k3-k2+k1, k5-k4+k3+k2-k1 and
    k5-k4+k3-k2+k1. Each pulse contributes its signed wavevector.
    """
    vecs = np.stack([p.signed_wavevector for p in seq.pulses])
    return SIGNAL_COMBINATIONS @ vecs


def longitudinal_mismatch(
    seeding_pulse: Pulse, m: int, cavity: CavityGeometry, branch: int
) -> float:
    """Intermediate z-mismatch ``k cos(theta) - branch * m pi / L`` (1/m).

    ``branch`` selects the upper (+1) or lower (-1) sign of the ∓ attached to
    the cavity standing-wave component.
    """
    if m < 1:
        raise ValueError(f"mode index must be >= 1, got {m}")
    if branch not in (1, -1):
        raise ValueError(f"branch must be +1 or -1, got {branch}")
    return seeding_pulse.k_z - branch * m * math.pi / cavity.length


def direct_mismatch(seq: PulseSequence) -> float:
    """Overall z-mismatch of the direct signal, ks_z - k3_z (1/m)."""
    return seq.detection.k_z - seq.pulses[2].k_z


def sinc(x):
    """Unnormalised sinc, sin(x)/x with sinc(0) = 1. Accepts arrays."""
    out = np.sinc(np.asarray(x, dtype=float) / np.pi)
    return float(out) if np.ndim(out) == 0 else out
