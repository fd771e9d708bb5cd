import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cavity_cascade import (
    CavityGeometry,
    Pulse,
    PulseSequence,
    direct_mismatch,
    longitudinal_mismatch,
    signal_directions,
    sinc,
)
from oracles import sinc_series

NM = 1e-9

angles = st.floats(0.0, math.pi)
azimuths = st.floats(0.0, 2 * math.pi, exclude_max=True)
wavenumbers = st.floats(1e6, 5e7)


@st.composite
def pulses(draw, sign=None):
    return Pulse(
        draw(wavenumbers),
        theta=draw(angles),
        phi=draw(azimuths),
        sign=draw(st.sampled_from([1, -1])) if sign is None else sign,
    )


def sequence_of(ps, det):
    return PulseSequence(tuple(Pulse(p.wavenumber, p.theta, p.phi, p.sign, 0.0) for p in ps), det)


class TestPulse:
    def test_components(self):
        p = Pulse(2.0, theta=math.pi / 3, phi=0.5)
        assert p.k_z == pytest.approx(1.0)
        assert p.k_perp == pytest.approx(math.sqrt(3))
        assert np.linalg.norm(p.wavevector) == pytest.approx(2.0)

    @pytest.mark.parametrize(
        "kw", [dict(wavenumber=0.0), dict(wavenumber=1.0, theta=-0.1), dict(wavenumber=1.0, theta=4.0),
               dict(wavenumber=1.0, phi=2 * math.pi), dict(wavenumber=1.0, sign=0)]
    )
    def test_rejects(self, kw):
        with pytest.raises(ValueError):
            Pulse(**kw)

    @settings(max_examples=100)
    @given(pulses())
    def test_recomposes(self, p):
        assert abs(p.k_z**2 + p.k_perp**2 - p.wavenumber**2) <= 1e-12 * p.wavenumber**2


class TestSequence:
    def test_delays(self):
        seq = PulseSequence.degenerate(1e7, 0.1, 0.2, T2=100e-15, T4=250e-15)
        assert seq.T2 == pytest.approx(100e-15)
        assert seq.T4 == pytest.approx(250e-15)

    def test_pairing_enforced(self):
        p = Pulse(1e7)
        q = Pulse(1e7, center_time=1e-15)
        with pytest.raises(ValueError):
            PulseSequence((p, q, q, q, q), q)

    def test_negative_delay_rejected(self):
        late = Pulse(1e7, center_time=1e-12)
        early = Pulse(1e7, center_time=0.0)
        with pytest.raises(ValueError):
            PulseSequence((late, late, early, early, early), early)


class TestSignalDirections:
    def test_collinear(self):
        p = Pulse(3.0, theta=0.0)
        ks = signal_directions(PulseSequence((p,) * 5, p))
        assert np.allclose(ks[3], [0, 0, 3.0])

    def test_degenerate_geometry_detects_along_k3(self):
        seq = PulseSequence.degenerate(1e7, 0.4, 1.1, phi=0.3)
        ks = signal_directions(seq)
        for row in ks:
            assert np.allclose(row, seq.pulse(3).wavevector, rtol=0, atol=1e-9)

    @settings(max_examples=100)
    @given(st.lists(pulses(), min_size=5, max_size=5))
    def test_matches_componentwise_sum(self, ps):
        seq = sequence_of(ps, ps[2])
        ks = signal_directions(seq)
        v = [p.sign * p.wavenumber * np.array([math.sin(p.theta) * math.cos(p.phi),
                                              math.sin(p.theta) * math.sin(p.phi),
                                              math.cos(p.theta)]) for p in ps]
        expected = [
            v[4] + v[3] - v[2] + v[1] - v[0],
            v[4] + v[3] - v[2] - v[1] + v[0],
            v[4] - v[3] + v[2] + v[1] - v[0],
            v[4] - v[3] + v[2] - v[1] + v[0],
        ]
        assert np.allclose(ks, expected, rtol=1e-12, atol=1e-6)

    @settings(max_examples=100)
    @given(st.lists(pulses(), min_size=5, max_size=5))
    def test_sign_flip_negates(self, ps):
        flipped = [Pulse(p.wavenumber, p.theta, p.phi, -p.sign) for p in ps]
        a = signal_directions(sequence_of(ps, ps[2]))
        b = signal_directions(sequence_of(flipped, ps[2]))
        assert np.array_equal(a, -b)


class TestLongitudinalMismatch:
    def test_on_axis_optimum_input(self, k500):
        cav = CavityGeometry(4 * math.pi / k500)
        dk = longitudinal_mismatch(Pulse(k500, 0.0), 1, cav, 1)
        assert dk * cav.length == pytest.approx(3 * math.pi, rel=1e-12)

    @pytest.mark.parametrize("m, b", [(1, 1), (2, -1), (5, 1)])
    def test_grazing(self, m, b):
        cav = CavityGeometry(321 * NM)
        dk = longitudinal_mismatch(Pulse(1e7, math.pi / 2), m, cav, b)
        assert dk == pytest.approx(-b * m * math.pi / cav.length, abs=1e-6)

    def test_oblique(self):
        k = 2 * math.pi / (500 * NM)
        cav = CavityGeometry(750 * NM)
        dk = longitudinal_mismatch(Pulse(k, math.pi / 3), 2, cav, -1)
        assert dk == pytest.approx(k / 2 + 2 * math.pi / cav.length, rel=1e-12)

    def test_rejects_bad_inputs(self):
        cav = CavityGeometry(1e-6)
        with pytest.raises(ValueError):
            longitudinal_mismatch(Pulse(1e7), 0, cav, 1)
        with pytest.raises(ValueError):
            longitudinal_mismatch(Pulse(1e7), 1, cav, 0)

    @settings(max_examples=200)
    @given(pulses(sign=1), st.integers(1, 50), st.floats(50e-9, 20e-6))
    def test_branch_sum_identity(self, p, m, L):
        cav = CavityGeometry(L)
        s = longitudinal_mismatch(p, m, cav, 1) + longitudinal_mismatch(p, m, cav, -1)
        assert s == pytest.approx(2 * p.wavenumber * math.cos(p.theta), rel=1e-9, abs=1e-9 * m * math.pi / L)


class TestDirectMismatch:
    def test_matched(self):
        seq = PulseSequence.degenerate(1e7, 0.3, 0.9)
        assert direct_mismatch(seq) == 0.0

    def test_axis_vs_grazing(self):
        k = 1e7
        seq = PulseSequence.degenerate(k, 0.0, math.pi / 2)
        seq = PulseSequence(seq.pulses, Pulse(k, 0.0, center_time=seq.detection.center_time))
        assert direct_mismatch(seq) == pytest.approx(k, rel=1e-12)

    @settings(max_examples=100)
    @given(st.lists(pulses(sign=1), min_size=6, max_size=6))
    def test_matches_z_subtraction(self, ps):
        seq = sequence_of(ps[:5], ps[5])
        expected = ps[5].wavevector[2] - ps[2].wavevector[2]
        assert direct_mismatch(seq) == pytest.approx(expected, rel=1e-12, abs=1e-6)


class TestSinc:
    def test_removable_singularity(self):
        assert sinc(0.0) == 1.0

    def test_first_zero(self):
        assert abs(sinc(math.pi)) < 1e-15

    def test_against_series(self):
        assert sinc(1.5) == pytest.approx(float(sinc_series(1.5)), rel=1e-14)
        assert sinc(1.5) == pytest.approx(0.66500, abs=5e-6)

    def test_array(self):
        x = np.array([0.0, 1.5, -1.5])
        assert np.allclose(sinc(x), [1.0, 0.6649966577360363, 0.6649966577360363])

    @settings(max_examples=300)
    @given(st.floats(-200.0, 200.0))
    def test_even_and_bounded(self, x):
        assert sinc(x) == sinc(-x)
        if x != 0.0:
            assert sinc(x) ** 2 <= 1.0
        if abs(x) < 3:
            assert sinc(x) == pytest.approx(float(sinc_series(x)), rel=1e-12, abs=1e-15)
