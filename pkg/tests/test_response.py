import math

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from cavity_cascade import (
    CascadeConfig,
    CavityGeometry,
    Pulse,
    PulseSequence,
    SampleConfig,
    Surface2D,
    VibronicModel,
    assemble_signal,
    cascade_prefactor_total,
    default_response,
)
from cavity_cascade.constants import C_LIGHT

NM = 1e-9
FS = 1e-15
K500 = 2 * math.pi / (500 * NM)
W656 = 2 * math.pi * C_LIGHT * 656e2  # 656 cm^-1


class TestDefaultResponse:
    def test_zero_at_zero_T2(self):
        m = VibronicModel((W656, 2 * W656))
        assert np.all(default_response(m, 0.0, np.linspace(0, 1e-12, 7)) == 0.0)

    def test_decays(self):
        m = VibronicModel((W656,), damping=5e12)
        t = np.linspace(0, 5e-12, 400)
        r = np.abs(default_response(m, t, t))
        assert r[-1] < 1e-20
        assert np.all(r <= np.exp(-2 * m.damping * t) + 1e-15)

    def test_peak_location_oracle(self):
        w, g = W656, 3e12
        m = VibronicModel((w,), damping=g)
        T4 = 5 * FS
        res = minimize_scalar(lambda t: -abs(default_response(m, t, T4)),
                              bounds=(0.0, math.pi / w), method="bounded",
                              options={"xatol": 1e-22})
        assert res.x == pytest.approx(math.atan(w / g) / w, rel=1e-5)

    def test_superposition_of_modes(self):
        w1, w2 = W656, 1.7 * W656
        t2 = np.linspace(0, 1e-12, 5)
        t4 = np.linspace(0, 2e-12, 6)
        T2, T4 = np.meshgrid(t2, t4, indexing="ij")
        both = default_response(VibronicModel((w1, w2), damping=1e12), T2, T4)
        env = np.exp(-1e12 * (T2 + T4))
        expected = (np.sin(w1 * T2) + np.sin(w2 * T2)) * (np.sin(w1 * T4) + np.sin(w2 * T4)) * env
        assert np.allclose(both, expected, rtol=1e-13, atol=1e-15)

    def test_linear_in_dipole_scale(self):
        t = np.linspace(0, 1e-12, 9)
        a = default_response(VibronicModel((W656,), dipole_scale=1.0), t, t)
        b = default_response(VibronicModel((W656,), dipole_scale=3.0), t, t)
        assert np.allclose(b, 3 * a, rtol=1e-15, atol=0)

    def test_negative_delay(self):
        with pytest.raises(ValueError):
            default_response(VibronicModel((W656,)), -1e-15, 0.0)

    @pytest.mark.parametrize("kw", [dict(ground_frequencies=()), dict(ground_frequencies=(-1.0,)),
                                    dict(ground_frequencies=(1.0,), damping=0.0)])
    def test_model_validation(self, kw):
        with pytest.raises(ValueError):
            VibronicModel(**kw)

    def test_excited_defaults_to_ground(self):
        assert VibronicModel((1.0, 2.0)).excited_frequencies == (1.0, 2.0)


class TestSurface:
    def test_shape_checked(self):
        with pytest.raises(ValueError):
            Surface2D(np.arange(3.0), np.arange(4.0), np.zeros((4, 3)), "direct")

    def test_axis_increasing(self):
        with pytest.raises(ValueError):
            Surface2D(np.array([0.0, 0.0]), np.arange(2.0), np.zeros((2, 2)), "direct")


def _setup(kL=4 * math.pi, theta=0.0):
    seq = PulseSequence.degenerate(K500, theta, theta)
    cav = CavityGeometry(kL / K500)
    return seq, cav


class TestAssemble:
    t2 = np.linspace(0, 1000 * FS, 16)
    t4 = np.linspace(0, 1000 * FS, 12)

    def test_forced_zero_equals_direct(self):
        seq, cav = _setup()
        s = assemble_signal(seq, cav, SampleConfig(1e6), VibronicModel((W656,)), self.t2, self.t4,
                            modes=[1, 2], cascade_prefactors={"sequential": 0, "parallel": 0})
        assert np.array_equal(s.total.values, s.direct.values)
        assert not np.any(s.sequential.values) and not np.any(s.parallel.values)

    def test_unit_response_gives_prefactor_multiples(self):
        seq, cav = _setup()
        sample = SampleConfig(10, 2e-18, dipole_scale=1.0)
        s = assemble_signal(seq, cav, sample, VibronicModel((W656,)), self.t2, self.t4,
                            modes=[1, 2], response=lambda m, a, b: np.ones_like(a))
        scale = s.prefactors["scale"]
        assert np.allclose(s.sequential.values, s.prefactors["sequential"] * scale)
        assert np.allclose(s.parallel.values, -2 * s.prefactors["parallel"] * scale)
        assert np.allclose(s.direct.values, cav.length)

    def test_end_to_end_oracle(self):
        # scripted independently: direct = L, cascades from hand-summed terms
        k, L = K500, 4 * math.pi / K500
        w, g, N, V = W656, 2e12, 1e4, 1e-18
        t2 = np.linspace(0, 300 * FS, 4)
        t4 = np.linspace(50 * FS, 400 * FS, 4)
        R = np.array([[math.sin(w * a) * math.sin(w * b) * math.exp(-g * (a + b)) for b in t4] for a in t2])
        F = 0.0
        for m in (1, 2):
            for b in (-1, 1):
                dkL = k * L - b * m * math.pi
                F += (math.sqrt(m * m * math.pi**2 / L**2) / k) * (m * math.pi / dkL) ** 2 * (math.sin(dkL / 2) / (dkL / 2)) ** 2
        S = 64 * math.pi**4 * N / V
        seq, cav = _setup()
        s = assemble_signal(seq, cav, SampleConfig(N, V), VibronicModel((w,), damping=g), t2, t4, modes=[1, 2])
        assert np.allclose(s.direct.values, L * R, rtol=1e-12, atol=0)
        assert np.allclose(s.sequential.values, F * S * R, rtol=1e-12, atol=0)
        assert np.allclose(s.parallel.values, -2 * F * S * R, rtol=1e-12, atol=0)
        assert np.allclose(s.total.values, (L - F * S) * R, rtol=1e-10, atol=0)

    def test_uses_kernel_totals(self):
        seq, cav = _setup(theta=0.3)
        s = assemble_signal(seq, cav, SampleConfig(), VibronicModel((W656,)), self.t2, self.t4, modes=[1, 2])
        for kind in ("sequential", "parallel"):
            rep = cascade_prefactor_total(seq.seeding_pulse(kind), cav, modes=[1, 2],
                                          config=CascadeConfig(kind=kind))
            assert s.prefactors[kind] == rep.total_prefactor

    def test_linear_in_dipole_scale(self):
        seq, cav = _setup()
        a = assemble_signal(seq, cav, SampleConfig(dipole_scale=1.0), VibronicModel((W656,)), self.t2, self.t4, modes=[1])
        b = assemble_signal(seq, cav, SampleConfig(dipole_scale=2.0), VibronicModel((W656,)), self.t2, self.t4, modes=[1])
        for x, y in zip(a, b):
            assert np.allclose(y.values, 2 * x.values, rtol=1e-14, atol=0)

    def test_iteration_order(self):
        seq, cav = _setup()
        s = assemble_signal(seq, cav, SampleConfig(), VibronicModel((W656,)), [0.0], [0.0], modes=[1])
        assert [x.label for x in s] == ["direct", "sequential", "parallel", "total"]

    def test_empty_grid(self):
        seq, cav = _setup()
        with pytest.raises(ValueError):
            assemble_signal(seq, cav, SampleConfig(), VibronicModel((W656,)), [], [0.0])
