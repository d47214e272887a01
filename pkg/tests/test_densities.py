import math

import numpy as np
import pytest

from logent import (
    DensityGrid,
    DomainError,
    GridError,
    NormalizationError,
    amplitude_bound_check,
    build_kernel,
    continuum_information,
    evolve_density,
    evolve_density_timestepped,
    gaussian_density,
    omega_constant,
    omega_harmonic,
    omega_linear,
    omega_quartic,
    omega_tabulated,
    uniform_density,
)
from logent.densities import pure_state_residual, read_density_csv, write_density_csv
from oracles import gaussian_information_quad

H = 1.0
SIGMA_PURE = H / (2.0 * math.sqrt(math.pi))


def pure_gaussian(n=1024, length=8.0):
    return gaussian_density(n, length, H, SIGMA_PURE)


class TestDensityGrid:
    def test_rejects_non_power_of_two(self):
        with pytest.raises(GridError):
            DensityGrid(values=np.full(100, 1.0 / 100), z0=0.0, dz=1.0 / 100 * 100 / 100, h=1.0)

    def test_rejects_unnormalized(self):
        with pytest.raises(NormalizationError):
            DensityGrid(values=np.full(128, 1.0), z0=0.0, dz=1.0, h=1.0)

    def test_uniform_information_floor(self):
        f = uniform_density(256, 4.0, H)
        assert f.information == pytest.approx(H / 4.0, rel=1e-13)
        assert f.information_floor == pytest.approx(H / 4.0, rel=1e-15)

    def test_spike_is_inadmissible(self):
        n, dz = 256, 0.01
        values = np.zeros(n)
        values[40] = 1.0 / dz
        f = DensityGrid(values=values, z0=0.0, dz=dz, h=1.0)
        assert f.information == pytest.approx(100.0, rel=1e-12)
        assert not f.is_admissible


class TestInformation:
    def test_saturating_gaussian(self):
        f = pure_gaussian()
        assert abs(continuum_information(f) - 1.0) < 1e-9

    def test_double_width_gaussian_closed_form(self):
        # closed form I = h / (2 sigma sqrt(pi)); at sigma = h/sqrt(pi) it is 1/2
        f = gaussian_density(1024, 12.0, H, H / math.sqrt(math.pi))
        assert continuum_information(f) == pytest.approx(0.5, abs=1e-9)
        assert gaussian_information_quad(H / math.sqrt(math.pi), H) == pytest.approx(
            0.5, abs=1e-10
        )

    def test_sigma_sweep_matches_quadrature_oracle(self):
        for sigma in np.linspace(SIGMA_PURE, 4.0 * H, 9):
            length = max(8.0, 22.0 * sigma)
            f = gaussian_density(2048, length, H, sigma)
            closed = H / (2.0 * sigma * math.sqrt(math.pi))
            assert continuum_information(f) == pytest.approx(closed, abs=1e-6)
            assert gaussian_information_quad(sigma, H) == pytest.approx(closed, abs=1e-9)

    def test_nonunit_scale_constant(self):
        h = 0.7
        f = gaussian_density(1024, 8.0, h, h / (2.0 * math.sqrt(math.pi)))
        assert continuum_information(f) == pytest.approx(1.0, abs=1e-9)
        rep = amplitude_bound_check(f)
        assert rep.max_abs == pytest.approx(math.sqrt(2.0) / h, rel=1e-9)


class TestAmplitudeBound:
    def test_saturation(self):
        rep = amplitude_bound_check(pure_gaussian())
        assert rep.satisfied
        assert rep.max_abs * H / math.sqrt(2.0) == pytest.approx(1.0, abs=1e-6)

    def test_wider_gaussian_strictly_below(self):
        rep = amplitude_bound_check(gaussian_density(1024, 12.0, H, H / math.sqrt(math.pi)))
        assert rep.satisfied
        assert rep.max_abs < rep.bound * 0.9

    def test_spike_violates(self):
        values = np.zeros(256)
        values[10] = 100.0
        f = DensityGrid(values=values, z0=0.0, dz=0.01, h=1.0)
        rep = amplitude_bound_check(f)
        assert not rep.satisfied
        assert not f.is_admissible

    def test_bound_ratio_maximal_at_smallest_sigma(self):
        ratios = []
        for sigma in np.linspace(SIGMA_PURE, 4.0 * H, 7):
            f = gaussian_density(2048, max(8.0, 22.0 * sigma), H, sigma)
            rep = amplitude_bound_check(f)
            ratios.append(rep.max_abs * f.h / math.sqrt(2.0 * f.information))
        assert np.argmax(ratios) == 0

    def test_gaussian_needs_enough_domain(self):
        with pytest.raises(GridError):
            gaussian_density(256, 2.0, H, 1.0)


class TestKernel:
    def test_constant_omega_gives_zero_kernel(self):
        f = pure_gaussian(256)
        k = build_kernel(omega_constant(3.7), 0.4, f)
        assert np.all(k.m_hat == 0.0)
        out = evolve_density(f, k, 5.0)
        assert np.allclose(out.values, f.values, atol=1e-15)

    def test_linear_omega_independent_of_offset(self):
        f = pure_gaussian(256)
        alpha = 0.7
        k0 = build_kernel(omega_linear(alpha), 0.0, f)
        k1 = build_kernel(omega_linear(alpha), 1.3, f)
        k2 = build_kernel(omega_linear(alpha), -2.1, f)
        assert np.max(np.abs(k0.m_hat - k1.m_hat)) < 1e-12
        assert np.max(np.abs(k0.m_hat - k2.m_hat)) < 1e-12
        # and the sampled transform is alpha * lambda away from Nyquist
        inner = np.abs(k0.lambdas) < np.abs(k0.lambdas).max()
        assert np.allclose(k0.m_hat[inner], alpha * k0.lambdas[inner], atol=1e-12)

    def test_quadratic_omega_depends_on_offset(self):
        f = pure_gaussian(256)
        k1 = build_kernel(omega_harmonic(1.0), 0.5, f)
        k2 = build_kernel(omega_harmonic(1.0), 1.0, f)
        assert np.max(np.abs(k1.m_hat - k2.m_hat)) > 1e-3
        # quadratic difference identity: mhat = 2 c a lambda
        inner = np.abs(k1.lambdas) < np.abs(k1.lambdas).max()
        assert np.allclose(k1.m_hat[inner], 2.0 * 0.5 * k1.lambdas[inner], atol=1e-10)

    def test_m_hat_is_odd_and_zero_at_origin(self):
        f = pure_gaussian(256)
        k = build_kernel(omega_quartic(0.3), 0.8, f)
        n = k.n
        mirrored = k.m_hat[(-np.arange(n)) % n]
        assert np.max(np.abs(k.m_hat + mirrored)) == 0.0
        assert k.m_hat[0] == 0.0

    def test_real_kernel_odd_antisymmetry(self):
        f = pure_gaussian(256)
        k = build_kernel(omega_harmonic(1.0), 0.5, f)
        m = k.real_kernel
        n = k.n
        assert np.all(m + m[(-np.arange(n)) % n] == 0.0)
        assert m[0] == 0.0 and m[n // 2] == 0.0

    def test_tabulated_omega(self):
        # linear interpolation of a quadratic is off by c dx^2 / 8 per point
        f = pure_gaussian(256)
        xs = np.linspace(-40.0, 40.0, 30001)
        k_tab = build_kernel(omega_tabulated(xs, 0.5 * xs**2), 0.5, f)
        k_ref = build_kernel(omega_harmonic(0.5), 0.5, f)
        assert np.max(np.abs(k_tab.m_hat - k_ref.m_hat)) < 1e-5
        with pytest.raises(DomainError):
            build_kernel(omega_tabulated(xs[:100], 0.5 * xs[:100] ** 2), 0.0, f)

    def test_non_finite_omega_rejected(self):
        f = pure_gaussian(256)
        with np.errstate(divide="ignore", invalid="ignore"):
            with pytest.raises(DomainError):
                build_kernel(lambda x: 1.0 / np.asarray(x), 0.0, f)


class TestSpectralEvolution:
    def test_time_zero_identity(self):
        f = pure_gaussian(256)
        k = build_kernel(omega_harmonic(1.0), 0.5, f)
        out = evolve_density(f, k, 0.0)
        assert np.allclose(out.values, f.values, atol=1e-15)

    def test_unitarity_per_mode(self):
        # mode magnitudes in quadrature scaling (dz * |F_k| <= 1) are frozen
        f = pure_gaussian(512)
        k = build_kernel(omega_harmonic(2.0), 0.7, f)
        s0 = f.dz * np.abs(np.fft.fft(f.values))
        for t in (0.1, 1.0, 10.0):
            out = evolve_density(f, k, t)
            s1 = out.dz * np.abs(np.fft.fft(out.values))
            assert np.max(np.abs(s1 - s0)) < 1e-13

    def test_conservation(self):
        f = pure_gaussian(1024)
        k = build_kernel(omega_harmonic(1.0), 0.5, f)
        out = evolve_density(f, k, 3.0)
        assert abs(out.total - 1.0) < 1e-13
        assert abs(out.information - f.information) < 1e-12

    def test_bound_stays_satisfied_along_evolution(self):
        f = pure_gaussian(512)
        k = build_kernel(omega_harmonic(1.0), 0.8, f)
        for t in np.linspace(0.0, 5.0, 11):
            assert amplitude_bound_check(evolve_density(f, k, t)).satisfied

    def test_grid_mismatch_rejected(self):
        f = pure_gaussian(256)
        g = pure_gaussian(512)
        k = build_kernel(omega_harmonic(1.0), 0.0, f)
        with pytest.raises(GridError):
            evolve_density(g, k, 1.0)


class TestTimesteppedEvolution:
    def test_agrees_with_spectral(self):
        f = pure_gaussian(256)
        k = build_kernel(omega_harmonic(1.0), 0.3, f)
        a = evolve_density(f, k, 0.5)
        b = evolve_density_timestepped(f, k, 0.5, 1e-3)
        assert np.max(np.abs(a.values - b.values)) < 1e-6

    def test_probability_drift_per_step(self):
        f = pure_gaussian(256)
        k = build_kernel(omega_harmonic(1.0), 0.5, f)
        state = f
        for _ in range(20):
            state = evolve_density_timestepped(state, k, 0.01, 0.01)
            assert abs(state.total - 1.0) < 1e-10

    def test_information_conserved_for_coarse_steps(self):
        # the Cayley step conserves the quadratic invariant for any dt
        f = pure_gaussian(256)
        k = build_kernel(omega_harmonic(1.0), 0.5, f)
        out = evolve_density_timestepped(f, k, 1.0, 0.2)
        assert abs(out.information - f.information) < 1e-11

    def test_rejects_bad_dt(self):
        f = pure_gaussian(256)
        k = build_kernel(omega_harmonic(1.0), 0.5, f)
        with pytest.raises(DomainError):
            evolve_density_timestepped(f, k, 1.0, -0.1)


class TestPureStateResidual:
    def test_saturating_gaussian_satisfies_integral_identity(self):
        f = pure_gaussian(1024)
        assert pure_state_residual(f) < 1e-8

    def test_mixed_gaussian_does_not(self):
        f = gaussian_density(1024, 12.0, H, 2.0 * SIGMA_PURE)
        assert pure_state_residual(f) > 1e-3


class TestCsvRoundTrip:
    def test_bit_exact_round_trip(self, tmp_path):
        f = pure_gaussian(256)
        path = tmp_path / "grid.csv"
        write_density_csv(f, path)
        back = read_density_csv(path)
        assert np.array_equal(back.values, f.values)
        assert (back.z0, back.dz, back.h, back.n) == (f.z0, f.dz, f.h, f.n)
