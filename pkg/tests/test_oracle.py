"""Unit tests for the discrete-bath brute-force oracle."""

import math

import numpy as np
import pytest
from scipy.linalg import eigh

from clausius_lab import (
    BathSpec,
    Constants,
    DiscreteBath,
    OscillatorParams,
    convergence_report,
    default_omega_max,
    reduced_moments_exact,
    sample_bath,
    spectral_density,
    thermal_moments_decoupled,
)

C = Constants()
OSC = OscillatorParams(mass=1.0, frequency=1.0)


def discrete_matsubara(o, db, temperature, c, n_max=2_000_000):
    """[DERIVED] independent identity check: the Matsubara series with the
    exact kernel of THIS discrete bath must reproduce the eigen-decomposition
    moments. Evaluated by direct partial sums with 1/N Richardson closure."""
    beta = 1.0 / (c.kB * temperature)
    nu1 = 2 * math.pi * c.kB * temperature / c.hbar
    wk2 = db.mode_frequencies**2
    c_sq = db.couplings**2
    w2 = o.frequency**2

    def partial(n_terms):
        s1 = s2 = 0.0
        chunk = 100_000
        for lo in range(1, n_terms + 1, chunk):
            n = np.arange(lo, min(lo + chunk, n_terms + 1))
            nu2 = (nu1 * n) ** 2
            # nu ghat(nu) for the discrete bath, counter-term included
            kernel = np.sum(c_sq[None, :] / wk2 * nu2[:, None] / (nu2[:, None] + wk2), axis=1) / o.mass
            den = nu2 + w2 + kernel
            s1 += float(np.sum(1.0 / den))
            s2 += float(np.sum((w2 + kernel) / den))
        return s1, s2

    s1_h, s2_h = partial(n_max // 2)
    s1_f, s2_f = partial(n_max)
    s1, s2 = 2 * s1_f - s1_h, 2 * s2_f - s2_h
    f1 = (1.0 / w2 + 2 * s1) / (o.mass * beta)
    f2 = o.mass / beta * (1.0 + 2 * s2)
    return f1, f2


class TestDiscreteBath:
    def test_rejects_mismatched_arrays(self):
        with pytest.raises(ValueError):
            DiscreteBath(np.array([1.0, 2.0]), np.array([0.1]))

    def test_rejects_nonpositive_frequencies(self):
        with pytest.raises(ValueError):
            DiscreteBath(np.array([0.0, 1.0]), np.array([0.1, 0.1]))

    def test_rejects_unsorted_frequencies(self):
        with pytest.raises(ValueError):
            DiscreteBath(np.array([2.0, 1.0]), np.array([0.1, 0.1]))


class TestSampling:
    def test_spectral_density_shape(self):
        b = BathSpec(temperature=1.0, damping=2.0, cutoff=10.0)
        # Ohmic at small u, rolls off above the cutoff
        assert spectral_density(0.01, OSC, b) == pytest.approx(2.0 * 0.01, rel=1e-3)
        assert spectral_density(100.0, OSC, b) < spectral_density(10.0, OSC, b)

    def test_sample_grid_is_linear_endpoint(self):
        b = BathSpec(temperature=1.0, damping=1.0, cutoff=10.0)
        db = sample_bath(b, OSC, 8, 4.0)
        assert db.mode_count == 8
        assert np.allclose(np.diff(db.mode_frequencies), 0.5)
        assert db.mode_frequencies[-1] == pytest.approx(4.0)

    def test_default_omega_max(self):
        b = BathSpec(temperature=1.0, damping=1.0, cutoff=100.0)
        assert default_omega_max(OSC, b) == 2000.0


class TestReducedMoments:
    def test_zero_coupling_recovers_gibbs(self):
        db = DiscreteBath(np.linspace(0.5, 5.0, 16), np.zeros(16))
        m = reduced_moments_exact(db, OSC, 0.8, C)
        ref = thermal_moments_decoupled(OSC, 0.8, C)
        assert m.f1 == pytest.approx(ref.f1, rel=1e-12)
        assert m.f2 == pytest.approx(ref.f2, rel=1e-12)

    def test_cross_correlation_is_exact_zero(self):
        b = BathSpec(temperature=1.0, damping=1.0, cutoff=10.0)
        db = sample_bath(b, OSC, 64, 40.0)
        assert reduced_moments_exact(db, OSC, 1.0, C).cross == 0.0

    def test_single_mode_against_inline_diagonalization(self):
        # [DERIVED] 2x2 system built and diagonalized inline, sharing nothing
        # with the library path
        w_b, coupling, mass, w0, temperature = 2.0, 0.4, 1.5, 1.0, 0.6
        o = OscillatorParams(mass=mass, frequency=w0)
        db = DiscreteBath(np.array([w_b]), np.array([coupling]))
        m = reduced_moments_exact(db, o, temperature, C)

        k = np.array(
            [
                [(mass * w0**2 + coupling**2 / w_b**2) / mass, -coupling / math.sqrt(mass)],
                [-coupling / math.sqrt(mass), w_b**2],
            ]
        )
        eigvals, eigvecs = eigh(k)
        omegas = np.sqrt(eigvals)
        coth = 1.0 / np.tanh(omegas / (2 * temperature))
        f1 = float(np.sum(eigvecs[0] ** 2 / (2 * omegas) * coth)) / mass
        f2 = mass * float(np.sum(eigvecs[0] ** 2 * omegas / 2 * coth))
        assert m.f1 == pytest.approx(f1, rel=1e-12)
        assert m.f2 == pytest.approx(f2, rel=1e-12)

    def test_matches_discrete_matsubara_identity(self):
        # the eigen route and the series route describe the same finite model,
        # so they must agree far inside the 1% certification band
        b = BathSpec(temperature=1.0, damping=2.0, cutoff=20.0)
        db = sample_bath(b, OSC, 48, 200.0)
        m = reduced_moments_exact(db, OSC, 1.0, C)
        f1_ref, f2_ref = discrete_matsubara(OSC, db, 1.0, C)
        assert m.f1 == pytest.approx(f1_ref, rel=1e-6)
        assert m.f2 == pytest.approx(f2_ref, rel=1e-6)

    def test_rejects_nonpositive_temperature(self):
        db = DiscreteBath(np.array([1.0]), np.array([0.1]))
        with pytest.raises(ValueError):
            reduced_moments_exact(db, OSC, 0.0, C)


class TestConvergenceReport:
    def test_rows_and_deltas(self):
        b = BathSpec(temperature=1.0, damping=1.0, cutoff=10.0)
        rows, _ = convergence_report(OSC, b, 1.0, [32, 64, 128], C)
        assert [r.mode_count for r in rows] == [32, 64, 128]
        assert rows[0].delta_f1 is None
        assert rows[1].delta_f1 is not None and rows[1].delta_f1 >= 0

    def test_deltas_shrink_with_resolution(self):
        b = BathSpec(temperature=5.0, damping=1.0, cutoff=10.0)
        rows, _ = convergence_report(OSC, b, 5.0, [64, 128, 256, 512], C)
        assert rows[-1].delta_f1 < rows[1].delta_f1

    def test_rejects_unsorted_counts(self):
        b = BathSpec(temperature=1.0, damping=1.0, cutoff=10.0)
        with pytest.raises(ValueError):
            convergence_report(OSC, b, 1.0, [128, 64], C)
