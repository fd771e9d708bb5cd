import math
import random

import numpy as np
import pytest

from cavity_cascade import (
    CascadeConfig,
    NoFeasiblePointError,
    ScanRange,
    ScanSpec,
    large_cavity_spec,
    optimize,
    run_scan,
    sensitivity,
    sub_wavelength_spec,
)
from cavity_cascade.scan import evaluate_point, lobe_resolved_count, validity_window
from cavity_cascade import CavityGeometry, Pulse, cascade_prefactor_total

NM = 1e-9
K = 2 * math.pi / (500 * NM)


def test_range_values():
    assert np.allclose(ScanRange(0.0, 1.0, 5).values(), [0, 0.25, 0.5, 0.75, 1])
    assert ScanRange(2.0, 2.0, 1).values().tolist() == [2.0]
    for args in ((0.0, 1.0, 0), (0.0, 1.0, 1), (1.0, 0.0, 3)):
        with pytest.raises(ValueError):
            ScanRange(*args)


def test_lobe_resolution():
    assert lobe_resolved_count(0.1) == 9
    assert lobe_resolved_count(2 * math.pi * 4) == 33


def test_validity_window_enforced():
    lo, hi = validity_window(K)
    with pytest.raises(ValueError):
        ScanSpec(K, hi, ranges=(("length", ScanRange(lo, 2 * hi, 5)),))
    with pytest.warns(UserWarning):
        ScanSpec(K, hi, ranges=(("length", ScanRange(lo, 2 * hi, 5)),), allow_outside_validity=True)


def test_spec_rejects_bad_angles():
    with pytest.raises(ValueError):
        ScanSpec(K, 1e-6, ranges=(("theta2", ScanRange(0.0, 4.0, 3)),))
    with pytest.raises(ValueError):
        ScanSpec(K, 1e-6, ranges=(("bogus", ScanRange(0.0, 1.0, 3)),))


class TestRunScan:
    def test_single_point_at_optimum(self):
        L = 4 * math.pi / K
        spec = ScanSpec(K, L, ranges=(("length", ScanRange(L, L, 1)),), max_mode=2,
                        config=CascadeConfig(branch_policy="nearest"))
        t = run_scan(spec)
        assert len(t) == 1
        assert t.rows[0].ratio == pytest.approx(0.995, abs=1e-3)

    def test_theta_symmetry(self):
        spec = ScanSpec(K, 1.3 * math.pi / K, ranges=(("theta2", ScanRange(math.pi / 2 - 1.2, math.pi / 2 + 1.2, 13)),
                                                      ("theta3", ScanRange(math.pi / 2 - 1.2, math.pi / 2 + 1.2, 13))))
        r = run_scan(spec).ratios()
        assert np.allclose(r, r[::-1, ::-1], rtol=1e-9, atol=1e-12, equal_nan=True)

    def test_rows_match_pointwise_oracle(self):
        rng = random.Random(3)
        lo, hi = validity_window(K)
        a, b = sorted(rng.uniform(lo, hi) for _ in range(2))
        t0, t1 = sorted(rng.uniform(0, math.pi) for _ in range(2))
        spec = ScanSpec(K, a, ranges=(("length", ScanRange(a, b, 5)), ("theta2", ScanRange(t0, t1, 5))))
        rows = run_scan(spec).rows
        assert [r.index for r in rows] == [(i, j) for i in range(5) for j in range(5)]
        for row in rows:
            L, th = row.params["length"], row.params["theta2"]
            assert L == np.linspace(a, b, 5)[row.index[0]]
            cav = CavityGeometry(L)
            ratios = []
            try:
                for kind, theta in (("sequential", th), ("parallel", 0.0)):
                    rep = cascade_prefactor_total(Pulse(K, theta), cav, config=CascadeConfig(kind=kind))
                    ratios.append(rep.suppression_ratio)
            except Exception:
                assert row.error is not None
                continue
            assert row.ratio == min(ratios)

    def test_singular_rows_recorded(self):
        L = 4 * math.pi / K
        spec = ScanSpec(K, L, ranges=(("length", ScanRange(0.9 * L, 1.1 * L, 5)),))
        rows = run_scan(spec).rows
        assert rows[2].error is not None and math.isnan(rows[2].ratio)
        assert all(r.error is None for i, r in enumerate(rows) if i != 2)

    def test_deterministic_across_workers(self):
        spec = sub_wavelength_spec(K).replace(
            ranges=(("length", ScanRange(0.3 * math.pi / K, 2 * math.pi / K, 17)),
                    ("theta2", ScanRange(0.2, 2.9, 9))), max_mode=None)
        a = run_scan(spec, workers=1).ratios()
        b = run_scan(spec, workers=7).ratios()
        assert a.tobytes() == b.tobytes()


class TestOptimize:
    @pytest.mark.parametrize("p", [1, 2])
    def test_analytic_optimum(self, p):
        res = optimize(large_cavity_spec(K, p))
        assert res.length == pytest.approx(2 * (p + 1) * math.pi / K, rel=0.01)
        assert res.dominates_grid()

    def test_refinement_zero_is_best_grid_point(self):
        spec = large_cavity_spec(K, 1, count=21)
        res = optimize(spec, refinement=0)
        table = run_scan(spec)
        r = table.ratios()
        best = table.rows[int(np.nanargmax(r))]
        assert res.params == best.params and res.ratio == best.ratio
        assert res.trace == []

    def test_trace_monotone(self):
        res = optimize(large_cavity_spec(K, 2), refinement=12)
        vals = [s.ratio for s in res.trace]
        assert all(b >= a for a, b in zip(vals, vals[1:]))
        assert [s.step for s in res.trace] == list(range(1, 13))
        hw = [s.half_widths["length"] for s in res.trace]
        assert all(b == a / 2 for a, b in zip(hw, hw[1:]))

    def test_two_parameter_vs_fine_brute_force(self):
        lo, hi = 3.3 * math.pi / K, 4.7 * math.pi / K
        spec = ScanSpec(K, lo, ranges=(("length", ScanRange(lo, hi, 13)), ("theta2", ScanRange(0.0, 0.5, 9))),
                        max_mode=2)
        res = optimize(spec, refinement=10)
        fine = spec.replace(ranges=(("length", ScanRange(lo, hi, 141)), ("theta2", ScanRange(0.0, 0.5, 101))))
        table = run_scan(fine)
        best = table.rows[int(np.nanargmax(table.ratios()))]
        assert abs(res.params["length"] - best.params["length"]) <= fine.range_of("length").cell
        assert abs(res.params["theta2"] - best.params["theta2"]) <= fine.range_of("theta2").cell
        assert res.ratio >= best.ratio - 1e-12

    def test_needs_swept_parameter(self):
        with pytest.raises(ValueError):
            optimize(ScanSpec(K, 1e-6))

    def test_all_singular(self):
        L = 4 * math.pi / K
        spec = ScanSpec(K, L, ranges=(("length", ScanRange(L, L, 1)),))
        with pytest.raises(NoFeasiblePointError):
            optimize(spec)


class TestSensitivity:
    def test_stationary_at_optimum(self):
        spec = large_cavity_spec(K, 1)
        res = optimize(spec)
        s = sensitivity(spec, res.params, "length")
        assert abs(s.derivative) <= 1e-3 and not s.one_sided

    def test_flank_sign(self):
        spec = large_cavity_spec(K, 1)
        L = 4 * math.pi / K
        assert sensitivity(spec, {"length": 0.92 * L}, "length").derivative > 0
        assert sensitivity(spec, {"length": 1.08 * L}, "length").derivative < 0

    def test_two_point_oracle(self):
        rng = random.Random(5)
        spec = ScanSpec(K, 1e-6, kinds=("sequential",), max_mode=3)
        for _ in range(5):
            at = {"length": rng.uniform(1.0, 3.0) * 1e-6 / 2, "theta2": rng.uniform(0.2, 1.2)}
            h = 1e-4
            up = evaluate_point(spec, {**spec.fixed(), **at, "theta2": at["theta2"] + h})[1]
            dn = evaluate_point(spec, {**spec.fixed(), **at, "theta2": at["theta2"] - h})[1]
            s = sensitivity(spec, at, "theta2", step=h)
            assert s.derivative == pytest.approx((up - dn) / (2 * h), rel=1e-12, abs=1e-15)

    def test_one_sided_next_to_singularity(self):
        L = 2 * math.pi / K  # m = 2 diverges here
        spec = ScanSpec(K, L, max_mode=2)
        s = sensitivity(spec, {"length": L / (1 + 1e-4)}, "length", step=1e-4)
        assert s.one_sided


def test_sub_wavelength_plateau():
    r = run_scan(sub_wavelength_spec(K)).ratios()
    assert np.allclose(r, 1 - (2 / math.pi) ** 2, rtol=1e-12)
    both = run_scan(sub_wavelength_spec(K, config=CascadeConfig())).ratios()
    assert np.allclose(both, 1 - 2 * (2 / math.pi) ** 2, rtol=1e-12)
