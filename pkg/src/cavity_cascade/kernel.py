"""Geometric cascade prefactors, their mode sums and suppression ratios.

Every cascade term is reduced to the dimensionless factor

    f_m = m^2 pi^2 / D^2 * sinc^2(dk L / 2),    dk L = k L cos(theta) - b m pi

with ``b = ±1`` the branch and ``D`` either ``dk L + 2 b m pi`` (literal
reading) or ``dk L`` (the reading that reproduces the 0.005 estimate for
``k L = 4 pi`` on axis). Response amplitudes are set to one; only ratios of
these factors are meaningful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Literal

from .errors import InvalidReferenceError, SingularConfigurationError
from .modes import (
    CavityGeometry,
    ResonanceWindow,
    cascade_mode_frequency,
    contributing_modes,
)
from .phase_matching import Kind, Pulse, PulseSequence, direct_mismatch, longitudinal_mismatch, sinc

Convention = Literal["as-evaluated", "literal"]
BranchPolicy = Literal["both", "plus", "minus", "nearest"]
Reference = Literal["unit-bound", "matched-peak"]

CONVENTIONS = ("as-evaluated", "literal")
BRANCH_POLICIES = ("both", "plus", "minus", "nearest")
REFERENCES = ("unit-bound", "matched-peak")

# Value of any literal-convention term at perfect longitudinal matching.
MATCHED_PEAK_VALUE = 0.25

# 256 pi^6 / (4 pi^2): cascade over direct constant in front of N/Omega.
CASCADE_TO_DIRECT_CONSTANT = 64.0 * math.pi**4

_SINGULAR_RTOL = 1e-9


@dataclass(frozen=True)
class SampleConfig:
    molecule_count: float = 1.0
    volume: float = 1e-18  # m^3
    dipole_scale: float = 1.0

    def __post_init__(self):
        for name in ("molecule_count", "volume", "dipole_scale"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)}")
        if self.molecule_count < 1:
            raise ValueError(f"molecule_count must be >= 1, got {self.molecule_count}")

    @property
    def number_density(self) -> float:
        return self.molecule_count / self.volume


@dataclass(frozen=True)
class CascadeConfig:
    """Which cascade and which reading of the ambiguous signs to use.

    ``branch_policy`` picks the standing-wave branches that enter a total:
    ``both`` sums b = -1 and +1, ``plus``/``minus`` keep one, and
    ``nearest`` keeps the branch closer to phase matching (b = sign of
    cos(theta)), which is the ``|k |cos(theta)| - m pi / L|`` arithmetic.
    """

    kind: Kind = "sequential"
    branch_policy: BranchPolicy = "both"
    denominator_convention: Convention = "as-evaluated"
    reference_convention: Reference = "unit-bound"

    def __post_init__(self):
        if self.kind not in ("sequential", "parallel"):
            raise ValueError(f"unknown cascade kind {self.kind!r}")
        if self.branch_policy not in BRANCH_POLICIES:
            raise ValueError(f"unknown branch policy {self.branch_policy!r}")
        if self.denominator_convention not in CONVENTIONS:
            raise ValueError(f"unknown denominator convention {self.denominator_convention!r}")
        if self.reference_convention not in REFERENCES:
            raise ValueError(f"unknown reference convention {self.reference_convention!r}")

    def branches(self, seeding_pulse: Pulse) -> tuple[int, ...]:
        if self.branch_policy == "both":
            return (-1, 1)
        if self.branch_policy == "plus":
            return (1,)
        if self.branch_policy == "minus":
            return (-1,)
        return (1,) if seeding_pulse.k_z >= 0 else (-1,)

    def replace(self, **kw) -> CascadeConfig:
        d = dict(
            kind=self.kind,
            branch_policy=self.branch_policy,
            denominator_convention=self.denominator_convention,
            reference_convention=self.reference_convention,
        )
        d.update(kw)
        return CascadeConfig(**d)


@dataclass(frozen=True)
class ModeTerm:
    m: int
    branch: int
    mismatch_phase: float  # dk_z * L
    omega: float  # rad/s
    weight: float  # omega / omega_eg
    geometric: float  # f_m
    value: float  # weight * f_m


@dataclass(frozen=True)
class SuppressionReport:
    """Outcome of one cascade prefactor evaluation.

    ``total_prefactor`` is the frequency-weighted mode sum
    ``sum (omega_m / omega_eg) f_m`` that scales the cascade amplitude;
    ``geometric_total`` is the unweighted ``sum f_m`` from which the
    suppression ratio is formed.
    """

    terms: tuple[ModeTerm, ...]
    total_prefactor: float
    geometric_total: float
    suppression_ratio: float
    reference_value: float
    config: CascadeConfig
    length: float
    theta: float
    wavenumber: float
    modes: tuple[int, ...]
    mode_selection: str  # "window" or "explicit"
    window_halfwidth: float | None
    scaled_total: float | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    @property
    def per_mode_prefactors(self) -> list[tuple[int, int, float]]:
        return [(t.m, t.branch, t.value) for t in self.terms]

    def as_dict(self) -> dict:
        return {
            "kind": self.config.kind,
            "denominator_convention": self.config.denominator_convention,
            "reference_convention": self.config.reference_convention,
            "branch_policy": self.config.branch_policy,
            "length_m": self.length,
            "theta_rad": self.theta,
            "wavenumber_per_m": self.wavenumber,
            "mode_selection": self.mode_selection,
            "window_relative_halfwidth": self.window_halfwidth,
            "modes": list(self.modes),
            "terms": [
                {
                    "m": t.m,
                    "branch": t.branch,
                    "mismatch_phase": t.mismatch_phase,
                    "omega_rad_per_s": t.omega,
                    "weight": t.weight,
                    "geometric": t.geometric,
                    "value": t.value,
                }
                for t in self.terms
            ],
            "total_prefactor": self.total_prefactor,
            "geometric_total": self.geometric_total,
            "reference_value": self.reference_value,
            "suppression_ratio": self.suppression_ratio,
            "scaled_total": self.scaled_total,
            "notes": list(self.notes),
        }


def _denominator(dkL: float, m: int, branch: int, convention: Convention) -> float:
    if convention == "as-evaluated":
        return dkL
    if convention == "literal":
        return dkL + 2.0 * branch * m * math.pi
    raise ValueError(f"unknown denominator convention {convention!r}")


def cascade_prefactor_m(
    m: int,
    seeding_pulse: Pulse,
    cavity: CavityGeometry,
    branch: int,
    convention: Convention = "as-evaluated",
) -> float:
    """Dimensionless prefactor f_m of a single (mode, branch) cascade term.

    Raises
    ------
    SingularConfigurationError
        If the denominator vanishes (the expression diverges there).
    """
    dkL = longitudinal_mismatch(seeding_pulse, m, cavity, branch) * cavity.length
    D = _denominator(dkL, m, branch, convention)
    scale = abs(seeding_pulse.k_z * cavity.length) + m * math.pi
    if abs(D) <= _SINGULAR_RTOL * scale:
        raise SingularConfigurationError(m, branch)
    return (m * math.pi / D) ** 2 * sinc(0.5 * dkL) ** 2


def term_sinc_squared(m: int, seeding_pulse: Pulse, cavity: CavityGeometry, branch: int) -> float:
    """The phase-matching factor sinc^2(dk L / 2) of one term on its own."""
    dkL = longitudinal_mismatch(seeding_pulse, m, cavity, branch) * cavity.length
    return sinc(0.5 * dkL) ** 2


def reference_value(config: CascadeConfig) -> float:
    """f_ref: 1 for the unit bound, 1/4 for the phase-matched literal term."""
    if config.reference_convention == "unit-bound":
        return 1.0
    return MATCHED_PEAK_VALUE


def suppression_ratio(value: float, reference: float | CascadeConfig) -> float:
    """1 - value / f_ref, clamped to [0, 1]."""
    f_ref = reference_value(reference) if isinstance(reference, CascadeConfig) else float(reference)
    if f_ref == 0:
        raise InvalidReferenceError("reference prefactor is zero")
    return min(1.0, max(0.0, 1.0 - value / f_ref))


def cascade_to_direct_scale(sample: SampleConfig) -> float:
    """Cascade/direct amplitude scale 64 pi^4 N / Omega (1/m^3).

    The cascade carries N^2/Omega^2 against N/Omega for the direct signal;
    response amplitudes are taken as unity, so the absolute value is
    model dependent.
    """
    return CASCADE_TO_DIRECT_CONSTANT * sample.number_density


def cascade_prefactor_total(
    seeding_pulse: Pulse,
    cavity: CavityGeometry,
    window: ResonanceWindow | None = None,
    sample: SampleConfig | None = None,
    config: CascadeConfig = CascadeConfig(),
    modes: Iterable[int] | None = None,
) -> SuppressionReport:
    """Sum the cascade terms over modes and branches.

    Modes come from ``contributing_modes`` unless ``modes`` lists them
    explicitly. Terms are accumulated in ascending (m, branch) order.
    """
    if window is None:
        window = ResonanceWindow.for_pulse(seeding_pulse, speed_of_light=cavity.speed_of_light)
    notes = []
    if modes is None:
        selected = tuple(contributing_modes(seeding_pulse, cavity, window))
        selection = "window"
        if window.is_calibrated_default:
            notes.append("resonance halfwidth 0.5 is a calibration choice")
    else:
        selected = tuple(sorted(set(int(m) for m in modes)))
        if selected and selected[0] < 1:
            raise ValueError(f"mode indices must be >= 1, got {selected}")
        selection = "explicit"
    if not selected:
        notes.append("no resonant modes")

    omega_eg = window.center_frequency
    terms = []
    total = 0.0
    geometric = 0.0
    for m in selected:
        omega = cascade_mode_frequency(m, seeding_pulse, cavity)
        weight = omega / omega_eg
        for b in sorted(config.branches(seeding_pulse)):
            f = cascade_prefactor_m(m, seeding_pulse, cavity, b, config.denominator_convention)
            dkL = longitudinal_mismatch(seeding_pulse, m, cavity, b) * cavity.length
            t = ModeTerm(m, b, dkL, omega, weight, f, weight * f)
            terms.append(t)
            total += t.value
            geometric += f

    f_ref = reference_value(config)
    return SuppressionReport(
        terms=tuple(terms),
        total_prefactor=total,
        geometric_total=geometric,
        suppression_ratio=suppression_ratio(geometric, f_ref),
        reference_value=f_ref,
        config=config,
        length=cavity.length,
        theta=seeding_pulse.theta,
        wavenumber=seeding_pulse.wavenumber,
        modes=selected,
        mode_selection=selection,
        window_halfwidth=window.relative_halfwidth if selection == "window" else None,
        scaled_total=None if sample is None else total * cascade_to_direct_scale(sample),
        notes=tuple(notes),
    )


def matched_peak_total(report: SuppressionReport) -> float:
    """Weighted total the same terms would have if each were phase matched."""
    total = 0.0
    for t in report.terms:
        total += t.weight * MATCHED_PEAK_VALUE
    return total


@dataclass(frozen=True)
class DirectPrefactor:
    magnitude: float  # L |sinc(dk_z L / 2)|, meters
    phase: float  # dk_z L
    signed: float  # L sinc(dk_z L / 2)

    @property
    def complex_amplitude(self) -> complex:
        return self.signed * complex(math.cos(self.phase), math.sin(self.phase))


def direct_prefactor(seq: PulseSequence, cavity: CavityGeometry) -> DirectPrefactor:
    """L sinc(dk_z L/2) e^{i dk_z L} of the direct fifth-order signal.

    Transverse matching is taken as exact, so the transverse delta factor is 1.
    """
    phase = direct_mismatch(seq) * cavity.length
    s = cavity.length * sinc(0.5 * phase)
    return DirectPrefactor(abs(s), phase, s)


def angle_window_50(wavenumber: float, cavity: CavityGeometry) -> tuple[float, float]:
    """Polar-angle interval (rad) where ``|cos(theta)| <= (pi - 3) / (k L)``.

    Inside it the dominant sub-wavelength term keeps ``|dk L| >~ 3`` and the
    cascade loses at least about half of its weight. Returns ``(0, pi)``
    when the bound exceeds one.
    """
    bound = (math.pi - 3.0) / (wavenumber * cavity.length)
    if bound >= 1.0:
        return 0.0, math.pi
    lo = math.acos(bound)
    return lo, math.pi - lo


@dataclass(frozen=True)
class ConeBound:
    theta_max: float  # rad
    empty: bool


def angle_window_95(p: int) -> ConeBound:
    """Half-angle of the on-axis cone with ``|cos(theta)| >= (p + 5/2pi)/(p + 1)``.

    Applies to ``L = 2 pi (p + 1) / k``; inside the cone every mode up to
    ``2p`` keeps ``|k L |cos(theta)| - m pi| >~ 5``.
    """
    if int(p) != p or p < 1:
        raise ValueError(f"p must be an integer >= 1, got {p}")
    ratio = (p + 5.0 / (2.0 * math.pi)) / (p + 1.0)
    if ratio > 1.0:
        return ConeBound(0.0, True)
    return ConeBound(math.acos(ratio), False)
