"""Parameter sweeps over cavity length and pulse angles, and a grid optimizer.

The objective is the cascade suppression ratio. When both cascades are
evaluated, a configuration scores the worse (smaller) of the two ratios.
The objective oscillates with sinc^2 lobes, so the optimizer is a coarse
grid followed by local grid refinement rather than a gradient method.
"""

from __future__ import annotations

import itertools
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Literal, Sequence

import numpy as np

from .errors import NoFeasiblePointError, SingularConfigurationError
from .kernel import CascadeConfig, SuppressionReport, cascade_prefactor_total
from .modes import DEFAULT_MAX_MODE_INDEX, DEFAULT_RELATIVE_HALFWIDTH, CavityGeometry, ResonanceWindow
from .phase_matching import KINDS, Kind, PulseSequence

Parameter = Literal["length", "theta2", "theta3"]
PARAMETERS: tuple[Parameter, ...] = ("length", "theta2", "theta3")

DEFAULT_REFINEMENT = 30
REFINEMENT_POINTS = 5
POINTS_PER_LOBE = 8
MIN_POINTS = 9

# The regime presets score each mode on the branch nearer to phase matching,
# i.e. by |k L |cos(theta)| - m pi|. Summing both branches at grazing
# incidence counts every mode twice and caps the ratio near 0.19.
REGIME_CONFIG = CascadeConfig(branch_policy="nearest")


@dataclass(frozen=True)
class ScanRange:
    start: float
    stop: float
    count: int

    def __post_init__(self):
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"point count must be an integer >= 1, got {self.count}")
        if self.count == 1 and self.start != self.stop:
            raise ValueError("a one-point range needs start == stop")
        if self.stop < self.start:
            raise ValueError(f"range is reversed: {self.start} > {self.stop}")

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([float(self.start)])
        return np.linspace(self.start, self.stop, self.count)

    @property
    def cell(self) -> float:
        return 0.0 if self.count == 1 else (self.stop - self.start) / (self.count - 1)


def lobe_resolved_count(phase_span: float) -> int:
    """Grid size giving at least 8 points per 2π of mismatch phase dk·L."""
    return max(MIN_POINTS, math.ceil(POINTS_PER_LOBE * phase_span / (2.0 * math.pi)) + 1)


def validity_window(wavenumber: float) -> tuple[float, float]:
    """Cavity lengths for which confinement alters the mode density: [0.2π/k, 20π/k]."""
    return 0.2 * math.pi / wavenumber, 20.0 * math.pi / wavenumber


@dataclass(frozen=True)
class ScanSpec:
    """A sweep over any of ``length``, ``theta2`` and ``theta3``.

    Unswept parameters take the fixed values. ``max_mode`` fixes the mode set
    to ``1..max_mode``; left as ``None`` the modes come from the resonance
    window of each configuration.
    """

    wavenumber: float
    length: float
    theta2: float = 0.0
    theta3: float = 0.0
    ranges: tuple[tuple[Parameter, ScanRange], ...] = ()
    config: CascadeConfig = CascadeConfig()
    kinds: tuple[Kind, ...] = KINDS
    max_mode: int | None = None
    window_halfwidth: float = DEFAULT_RELATIVE_HALFWIDTH
    max_mode_index: int = DEFAULT_MAX_MODE_INDEX
    allow_outside_validity: bool = False

    def __post_init__(self):
        if isinstance(self.ranges, dict):
            object.__setattr__(self, "ranges", tuple(self.ranges.items()))
        names = [n for n, _ in self.ranges]
        if len(set(names)) != len(names):
            raise ValueError(f"parameter swept twice: {names}")
        for n in names:
            if n not in PARAMETERS:
                raise ValueError(f"unknown scan parameter {n!r}")
        if not self.wavenumber > 0 or not self.length > 0:
            raise ValueError("wavenumber and length must be > 0")
        if not self.kinds or any(k not in KINDS for k in self.kinds):
            raise ValueError(f"invalid cascade kinds {self.kinds}")
        if self.max_mode is not None and self.max_mode < 1:
            raise ValueError(f"max_mode must be >= 1, got {self.max_mode}")
        for name, value in (("theta2", self.theta2), ("theta3", self.theta3)):
            if not 0.0 <= value <= math.pi:
                raise ValueError(f"{name} must lie in [0, pi], got {value}")
        lo, hi = validity_window(self.wavenumber)
        for name, r in self.ranges:
            if name == "length":
                if r.start <= 0:
                    raise ValueError("length range must be > 0")
                if r.start < lo * (1 - 1e-12) or r.stop > hi * (1 + 1e-12):
                    msg = (
                        f"length range [{r.start:.4g}, {r.stop:.4g}] m leaves the "
                        f"validity window [{lo:.4g}, {hi:.4g}] m"
                    )
                    if not self.allow_outside_validity:
                        raise ValueError(msg + " (set allow_outside_validity to override)")
                    warnings.warn(msg, stacklevel=2)
            elif r.start < 0 or r.stop > math.pi:
                raise ValueError(f"{name} range must lie within [0, pi]")

    @property
    def swept(self) -> tuple[Parameter, ...]:
        return tuple(n for n, _ in self.ranges)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(r.count for _, r in self.ranges)

    def range_of(self, name: Parameter) -> ScanRange:
        return dict(self.ranges)[name]

    def fixed(self) -> dict[str, float]:
        return {"length": self.length, "theta2": self.theta2, "theta3": self.theta3}

    def modes(self) -> tuple[int, ...] | None:
        return None if self.max_mode is None else tuple(range(1, self.max_mode + 1))

    def replace(self, **kw) -> ScanSpec:
        d = {f: getattr(self, f) for f in self.__dataclass_fields__}
        d.update(kw)
        return ScanSpec(**d)


@dataclass(frozen=True)
class ScanRow:
    index: tuple[int, ...]
    params: dict[str, float]
    reports: dict[str, SuppressionReport]
    ratio: float  # nan when singular
    error: str | None = None


@dataclass
class ScanTable:
    spec: ScanSpec
    rows: list[ScanRow]

    def ratios(self) -> np.ndarray:
        """Suppression ratios reshaped onto the scan grid (nan at singular points)."""
        return np.array([r.ratio for r in self.rows], dtype=float).reshape(self.spec.shape or (1,))

    def __len__(self):
        return len(self.rows)


def evaluate_point(spec: ScanSpec, params: dict[str, float]) -> tuple[dict[str, SuppressionReport], float]:
    """Reports for each configured cascade at one parameter point.

    Raises SingularConfigurationError if any term diverges.
    """
    seq = PulseSequence.degenerate(spec.wavenumber, params["theta2"], params["theta3"])
    cavity = CavityGeometry(params["length"], max_mode_index=spec.max_mode_index)
    modes = spec.modes()
    reports = {}
    for kind in spec.kinds:
        pulse = seq.seeding_pulse(kind)
        window = ResonanceWindow.for_pulse(pulse, spec.window_halfwidth, cavity.speed_of_light)
        reports[kind] = cascade_prefactor_total(
            pulse, cavity, window, None, spec.config.replace(kind=kind), modes
        )
    ratio = min(r.suppression_ratio for r in reports.values())
    return reports, ratio


def _row(spec: ScanSpec, index: tuple[int, ...], params: dict[str, float]) -> ScanRow:
    try:
        reports, ratio = evaluate_point(spec, params)
    except SingularConfigurationError as exc:
        return ScanRow(index, params, {}, math.nan, str(exc))
    return ScanRow(index, params, reports, ratio)


def _grid_points(spec: ScanSpec, axes: Sequence[np.ndarray]):
    names = spec.swept
    base = spec.fixed()
    for index in itertools.product(*(range(len(a)) for a in axes)):
        params = dict(base)
        for name, ax, i in zip(names, axes, index):
            params[name] = float(ax[i])
        yield index, params


def _evaluate_grid(spec: ScanSpec, axes: Sequence[np.ndarray], workers: int | None) -> list[ScanRow]:
    points = list(_grid_points(spec, axes))
    if workers is None or workers <= 1:
        return [_row(spec, i, p) for i, p in points]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        # map preserves input order, so the table is independent of scheduling
        return list(pool.map(lambda ip: _row(spec, *ip), points))


def run_scan(spec: ScanSpec, workers: int | None = None) -> ScanTable:
    """Evaluate every grid point; rows are in lexicographic index order.

    Singular points are kept as rows with ``ratio = nan`` and an error text.
    """
    axes = [r.values() for _, r in spec.ranges]
    return ScanTable(spec, _evaluate_grid(spec, axes, workers))


def _best(rows: Iterable[ScanRow]) -> ScanRow | None:
    best = None
    for row in rows:
        if row.error is not None:
            continue
        if best is None or row.ratio > best.ratio:
            best = row
    return best


@dataclass(frozen=True)
class RefinementStep:
    step: int
    half_widths: dict[str, float]
    ratio: float
    params: dict[str, float]


@dataclass
class OptimumResult:
    params: dict[str, float]
    ratio: float
    reports: dict[str, SuppressionReport]
    grid_shape: tuple[int, ...]
    refinement_steps: int
    final_half_widths: dict[str, float]
    trace: list[RefinementStep] = field(default_factory=list)
    coarse: ScanTable | None = None

    @property
    def length(self) -> float:
        return self.params["length"]

    def dominates_grid(self) -> bool:
        if self.coarse is None:
            return True
        vals = [r.ratio for r in self.coarse.rows if r.error is None]
        return all(self.ratio >= v for v in vals)


def optimize(
    spec: ScanSpec,
    refinement: int = DEFAULT_REFINEMENT,
    points: int = REFINEMENT_POINTS,
    workers: int | None = None,
) -> OptimumResult:
    """Maximise the suppression ratio over the swept parameters.

    A coarse ``run_scan`` picks the incumbent (ties go to the lowest grid
    index). Each refinement step lays ``points`` nodes per swept axis over
    ``incumbent ± h`` (clipped to the scan range), moves the incumbent only
    on strict improvement, and then halves ``h``. ``h`` starts at one coarse
    cell.
    """
    if not spec.ranges:
        raise ValueError("optimize needs at least one swept parameter")
    if refinement < 0:
        raise ValueError("refinement must be >= 0")
    coarse = run_scan(spec, workers)
    best = _best(coarse.rows)
    if best is None:
        raise NoFeasiblePointError("every coarse grid point is singular")

    half = {n: r.cell for n, r in spec.ranges}
    trace = []
    for step in range(1, refinement + 1):
        axes = []
        for name, r in spec.ranges:
            c = best.params[name]
            ax = np.clip(c + np.linspace(-half[name], half[name], points), r.start, r.stop)
            axes.append(np.unique(ax))
        cand = _best(_evaluate_grid(spec, axes, workers))
        if cand is not None and cand.ratio > best.ratio:
            best = cand
        trace.append(RefinementStep(step, dict(half), best.ratio, dict(best.params)))
        half = {n: h / 2.0 for n, h in half.items()}

    return OptimumResult(
        params=dict(best.params),
        ratio=best.ratio,
        reports=best.reports,
        grid_shape=spec.shape,
        refinement_steps=refinement,
        final_half_widths={n: h * 2.0 for n, h in half.items()} if refinement else half,
        trace=trace,
        coarse=coarse,
    )


@dataclass(frozen=True)
class Sensitivity:
    derivative: float
    one_sided: bool
    relative: bool


def sensitivity(
    spec: ScanSpec,
    at: dict[str, float],
    parameter: Parameter,
    step: float = 1e-4,
    relative: bool | None = None,
) -> Sensitivity:
    """Finite-difference derivative of the suppression ratio.

    For ``length`` the default is relative: the derivative is taken with
    respect to the fractional change dL/L and ``step`` is a fraction. Angles
    use absolute radians. Central differences are used; if a neighbour is
    singular, the one-sided difference against the centre is returned and
    flagged.
    """
    if parameter not in PARAMETERS:
        raise ValueError(f"unknown parameter {parameter!r}")
    if relative is None:
        relative = parameter == "length"
    base = {**spec.fixed(), **at}
    x0 = base[parameter]
    dx = step * x0 if relative else step
    if dx == 0:
        raise ValueError("zero finite-difference step")

    def value(x):
        try:
            return evaluate_point(spec, {**base, parameter: x})[1]
        except SingularConfigurationError:
            return None

    hi, lo = value(x0 + dx), value(x0 - dx)
    scale = step if relative else dx
    if hi is not None and lo is not None:
        return Sensitivity((hi - lo) / (2.0 * scale), False, relative)
    mid = value(x0)
    if mid is None:
        raise SingularConfigurationError(0, 0, "configuration itself is singular")
    if hi is not None:
        return Sensitivity((hi - mid) / scale, True, relative)
    if lo is not None:
        return Sensitivity((mid - lo) / scale, True, relative)
    raise SingularConfigurationError(0, 0, "both neighbours are singular")


def sub_wavelength_spec(
    wavenumber: float,
    theta: float = math.pi / 2,
    count: int | None = None,
    config: CascadeConfig = REGIME_CONFIG,
) -> ScanSpec:
    """Length sweep over 0.2π/k..2π/k with the two modes m = 1, 2."""
    lo, hi = 0.2 * math.pi / wavenumber, 2.0 * math.pi / wavenumber
    if count is None:
        count = lobe_resolved_count(wavenumber * (hi - lo))
    return ScanSpec(
        wavenumber=wavenumber,
        length=hi,
        theta2=theta,
        theta3=theta,
        ranges=(("length", ScanRange(lo, hi, count)),),
        config=config,
        max_mode=2,
    )


def large_cavity_spec(
    wavenumber: float,
    p: int,
    theta: float = 0.0,
    span: float | None = None,
    count: int | None = None,
    config: CascadeConfig = REGIME_CONFIG,
) -> ScanSpec:
    """Length sweep around 2π(p+1)/k with modes m = 1..2p.

    ``span`` is the relative half-width of the sweep. The default,
    1/(2(p+1)), covers k L in [(2p+1)π, (2p+3)π]: the lobe holding the
    optimum at 2(p+1)π. Wider sweeps reach the lobe around 2(p+2)π, which
    suppresses more with the same mode set.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    if span is None:
        span = 1.0 / (2.0 * (p + 1))
    centre = 2.0 * math.pi * (p + 1) / wavenumber
    lo, hi = (1 - span) * centre, (1 + span) * centre
    if count is None:
        count = lobe_resolved_count(wavenumber * (hi - lo))
    outside = hi > validity_window(wavenumber)[1]
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return ScanSpec(
            wavenumber=wavenumber,
            length=centre,
            theta2=theta,
            theta3=theta,
            ranges=(("length", ScanRange(lo, hi, count)),),
            config=config,
            max_mode=2 * p,
            allow_outside_validity=outside,
        )
