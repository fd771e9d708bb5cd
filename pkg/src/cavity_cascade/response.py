"""Two-dimensional (T2, T4) signal surfaces built from the geometric prefactors.

The molecular response functions of the direct and cascaded signals are
not modelled in detail here. ``default_response`` is a damped
vibrational-coherence placeholder, and any callable with the same signature
can be passed instead; the cavity enters only through the prefactors.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Literal

import numpy as np

from .kernel import (
    CascadeConfig,
    SampleConfig,
    cascade_prefactor_total,
    cascade_to_direct_scale,
    direct_prefactor,
)
from .modes import CavityGeometry, ResonanceWindow
from .phase_matching import KINDS, PulseSequence

Label = Literal["direct", "sequential", "parallel", "total"]
Response = Callable[["VibronicModel", np.ndarray, np.ndarray], np.ndarray]

# Parallel over sequential magnitude of the two cascade prefactors (512 vs 256).
PARALLEL_WEIGHT = 2.0


@dataclass(frozen=True)
class VibronicModel:
    """Displaced-oscillator style molecule: vibrational level spacings and damping.

    Frequencies are angular (rad/s), ``damping`` is a rate (1/s).
    """

    ground_frequencies: tuple[float, ...]
    excited_frequencies: tuple[float, ...] = ()
    damping: float = 1e12
    dipole_scale: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "ground_frequencies", tuple(float(w) for w in self.ground_frequencies))
        object.__setattr__(
            self,
            "excited_frequencies",
            tuple(float(w) for w in (self.excited_frequencies or self.ground_frequencies)),
        )
        if not self.ground_frequencies:
            raise ValueError("need at least one ground vibrational frequency")
        if any(w < 0 for w in self.ground_frequencies + self.excited_frequencies):
            raise ValueError("vibrational frequencies must be >= 0")
        if not self.damping > 0:
            raise ValueError(f"damping must be > 0, got {self.damping}")
        if not self.dipole_scale > 0:
            raise ValueError(f"dipole_scale must be > 0, got {self.dipole_scale}")


@dataclass(frozen=True)
class Surface2D:
    t2: np.ndarray
    t4: np.ndarray
    values: np.ndarray  # shape (len(t2), len(t4))
    label: Label

    def __post_init__(self):
        if self.values.shape != (self.t2.size, self.t4.size):
            raise ValueError(
                f"values shape {self.values.shape} does not match axes ({self.t2.size}, {self.t4.size})"
            )
        for name in ("t2", "t4"):
            ax = getattr(self, name)
            if ax.size > 1 and not np.all(np.diff(ax) > 0):
                raise ValueError(f"{name} axis must be strictly increasing")

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0


@dataclass(frozen=True)
class SignalSurfaces:
    direct: Surface2D
    sequential: Surface2D
    parallel: Surface2D
    total: Surface2D
    prefactors: dict = field(default_factory=dict)

    def __iter__(self):
        return iter((self.direct, self.sequential, self.parallel, self.total))


def default_response(model: VibronicModel, T2, T4) -> np.ndarray:
    """Sum over ground-coherence pairs of sin(w_a T2) sin(w_b T4) e^{-g (T2 + T4)}.

    ``T2`` and ``T4`` broadcast against each other; delays must be >= 0.
    """
    T2 = np.asarray(T2, dtype=float)
    T4 = np.asarray(T4, dtype=float)
    if np.any(T2 < 0) or np.any(T4 < 0):
        raise ValueError("delays must be >= 0")
    w = np.asarray(model.ground_frequencies)
    s2 = np.sin(np.multiply.outer(T2, w)).sum(axis=-1)
    s4 = np.sin(np.multiply.outer(T4, w)).sum(axis=-1)
    return model.dipole_scale * s2 * s4 * np.exp(-model.damping * (T2 + T4))


def uniform_axis(start: float, stop: float, count: int) -> np.ndarray:
    if count < 1:
        raise ValueError("grid needs at least one point")
    return np.linspace(start, stop, count)


def assemble_signal(
    seq: PulseSequence,
    cavity: CavityGeometry,
    sample: SampleConfig,
    model: VibronicModel,
    t2: Iterable[float],
    t4: Iterable[float],
    *,
    config: CascadeConfig = CascadeConfig(),
    window_halfwidth: float | None = None,
    modes: Iterable[int] | None = None,
    response: Response = default_response,
    cascade_prefactors: dict[str, float] | None = None,
) -> SignalSurfaces:
    """Direct, sequential, parallel and total surfaces on a (T2, T4) grid.

    direct = mu L sinc(dk_z L/2) e^{i dk_z L} R
    sequential = mu F_sq S R,  parallel = -2 mu F_pr S R

    with ``F`` the weighted cascade totals, ``S = cascade_to_direct_scale``
    and ``R`` the response on the grid. ``cascade_prefactors`` overrides
    ``F`` per kind (e.g. ``{"sequential": 0, "parallel": 0}``); a zero
    prefactor yields an exactly zero surface.
    """
    t2 = np.asarray(list(t2), dtype=float)
    t4 = np.asarray(list(t4), dtype=float)
    if t2.size == 0 or t4.size == 0:
        raise ValueError("grids must be non-empty")
    T2, T4 = np.meshgrid(t2, t4, indexing="ij")
    R = np.asarray(response(model, T2, T4), dtype=float)
    mu = sample.dipole_scale

    direct = mu * direct_prefactor(seq, cavity).complex_amplitude * R.astype(complex)

    modes = None if modes is None else tuple(modes)
    F = {}
    for kind in KINDS:
        if cascade_prefactors is not None and kind in cascade_prefactors:
            F[kind] = float(cascade_prefactors[kind])
            continue
        pulse = seq.seeding_pulse(kind)
        window = None
        if window_halfwidth is not None:
            window = ResonanceWindow.for_pulse(pulse, window_halfwidth, cavity.speed_of_light)
        rep = cascade_prefactor_total(pulse, cavity, window, sample, config.replace(kind=kind), modes)
        F[kind] = rep.total_prefactor

    scale = cascade_to_direct_scale(sample)
    surfaces = {}
    for kind, sign in (("sequential", 1.0), ("parallel", -PARALLEL_WEIGHT)):
        if F[kind] == 0.0:
            surfaces[kind] = np.zeros_like(direct)
        else:
            surfaces[kind] = (sign * mu * F[kind] * scale) * R.astype(complex)
    total = direct + surfaces["sequential"] + surfaces["parallel"]

    return SignalSurfaces(
        Surface2D(t2, t4, direct, "direct"),
        Surface2D(t2, t4, surfaces["sequential"], "sequential"),
        Surface2D(t2, t4, surfaces["parallel"], "parallel"),
        Surface2D(t2, t4, total, "total"),
        prefactors=dict(F, scale=scale),
    )
