"""Core solver tests: folding, validation, static limits, oracle agreement,
mode selection, weights, and structural invariances."""

import math

import numpy as np
import pytest

from bifloquet.floquet import (
    AMBIGUITY_TOL,
    DriveConfig,
    FloquetSpectrum,
    ModeTrackingError,
    TruncationConfig,
    build_extended_hamiltonian,
    default_truncation,
    diagonalize_symmetric,
    fold,
    folded_gap_magnitude,
    fourier_weights,
    propagator_oracle,
    quasienergy_gap,
    select_physical_modes,
    solve_floquet,
    static_eigenstates,
    zone_distance,
)


def random_drive(rng):
    n1 = int(rng.integers(1, 4))
    n2 = int(rng.integers(1, 3))
    if n1 == n2:
        n1 += 1
    return DriveConfig(
        w_q=1.0,
        b=float(rng.uniform(-1, 1)),
        big_omega=float(rng.uniform(0, 1)),
        nu=float(rng.uniform(0, math.pi / 2)),
        n1=n1,
        n2=n2,
        omega=float(rng.uniform(0.5, 10.0)),
    )


class TestFolding:
    def test_fold_identity_inside_zone(self):
        assert fold(0.3, 1.0) == pytest.approx(0.3, abs=1e-15)
        assert fold(-0.49, 1.0) == pytest.approx(-0.49, abs=1e-15)

    def test_fold_wraps(self):
        assert fold(0.75, 1.0) == pytest.approx(-0.25, abs=1e-12)
        assert fold(-0.75, 1.0) == pytest.approx(0.25, abs=1e-12)
        assert fold(5.03, 10.0) == pytest.approx(-4.97, abs=1e-12)

    def test_fold_half_boundary_maps_to_lower_edge(self):
        assert fold(0.5, 1.0) == pytest.approx(-0.5, abs=1e-15)

    def test_zone_distance_symmetric(self):
        assert zone_distance(0.45, -0.45, 1.0) == pytest.approx(0.1, abs=1e-12)
        assert zone_distance(-0.45, 0.45, 1.0) == pytest.approx(0.1, abs=1e-12)


class TestDriveConfig:
    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            DriveConfig(w_q=-1.0)
        with pytest.raises(ValueError):
            DriveConfig(omega=0.0)
        with pytest.raises(ValueError):
            DriveConfig(big_omega=-0.1)
        with pytest.raises(ValueError):
            DriveConfig(nu=math.pi)
        with pytest.raises(ValueError):
            DriveConfig(n1=0)
        with pytest.raises(ValueError):
            DriveConfig(b=math.nan)

    def test_equal_harmonics_need_inactive_tone(self):
        with pytest.raises(ValueError):
            DriveConfig(big_omega=0.5, nu=0.3, n1=2, n2=2)
        # inactive second tone (nu = 0) is fine
        DriveConfig(big_omega=0.5, nu=0.0, n1=2, n2=2)
        DriveConfig(big_omega=0.0, nu=0.3, n1=2, n2=2)

    def test_tone_amplitudes(self):
        d = DriveConfig(big_omega=2.0, nu=math.pi / 6, n1=3, n2=1)
        assert d.omega_1 == pytest.approx(2.0 * math.cos(math.pi / 6))
        assert d.omega_2 == pytest.approx(1.0)
        assert d.period == pytest.approx(2 * math.pi / d.omega)

    def test_drive_value(self):
        d = DriveConfig(b=0.25, big_omega=1.0, nu=0.0, n1=2, n2=1, omega=1.0)
        assert d.drive_value(0.0) == pytest.approx(1.25)


class TestTruncation:
    def test_invalid(self):
        with pytest.raises(ValueError):
            TruncationConfig(n_max=0, k_max=0)
        with pytest.raises(ValueError):
            TruncationConfig(n_max=3, k_max=7)

    def test_default_scales_with_drive(self):
        weak = default_truncation(DriveConfig(big_omega=0.1, omega=1.0))
        strong = default_truncation(DriveConfig(big_omega=20.0, omega=1.0))
        assert strong.n_max > weak.n_max
        assert weak.dim == 2 * (2 * weak.n_max + 1)


class TestStaticLimit:
    @pytest.mark.parametrize("b,omega", [(0.0, 1.0), (0.6, 1.0),
                                         (1.0, 0.7), (-0.4, 3.0)])
    def test_undriven_gap_matches_static_splitting(self, b, omega):
        d = DriveConfig(b=b, big_omega=0.0, omega=omega)
        spec = solve_floquet(d)
        splitting = math.hypot(1.0, b)
        expected = zone_distance(splitting / 2, -splitting / 2, omega)
        assert folded_gap_magnitude(spec) == pytest.approx(expected, abs=1e-10)

    def test_undriven_modes_are_static_eigenstates(self):
        d = DriveConfig(b=0.3, big_omega=0.0, omega=2.0)
        spec = solve_floquet(d)
        u_minus, u_plus = static_eigenstates(d)
        c0_plus = spec.coeffs_plus[spec.n_max]
        c0_minus = spec.coeffs_minus[spec.n_max]
        assert abs(abs(np.dot(c0_plus, u_plus)) - 1.0) < 1e-12
        assert abs(abs(np.dot(c0_minus, u_minus)) - 1.0) < 1e-12


class TestExtendedMatrix:
    def test_symmetric_and_block_structure(self):
        d = DriveConfig(b=0.2, big_omega=0.8, nu=0.4, n1=3, n2=1, omega=1.3)
        trunc = TruncationConfig(n_max=6, k_max=4)
        mat = build_extended_hamiltonian(d, trunc)
        h = mat.entries
        assert np.array_equal(h, h.T)
        m = 2 * trunc.n_max + 1
        assert h.shape == (2 * m, 2 * m)
        # central diagonal block
        i0 = 2 * trunc.n_max
        assert h[i0, i0] == pytest.approx(-0.5)
        assert h[i0, i0 + 1] == pytest.approx(0.1)
        # n1-offset coupling is (Omega/4)*cos(nu) on sigma_x
        c1 = 0.8 / 4 * math.cos(0.4)
        assert h[i0, i0 + 2 * 3 + 1] == pytest.approx(c1)

    def test_equal_harmonic_couplings_sum(self):
        # one inactive tone keeps the config valid; couplings land on one offset
        d = DriveConfig(big_omega=0.6, nu=0.0, n1=2, n2=2, omega=1.0)
        trunc = TruncationConfig(n_max=5, k_max=4)
        h = build_extended_hamiltonian(d, trunc).entries
        i0 = 2 * trunc.n_max
        assert h[i0, i0 + 2 * 2 + 1] == pytest.approx(0.6 / 4)

    def test_rejects_too_small_truncation(self):
        d = DriveConfig(big_omega=0.5, nu=0.2, n1=3, n2=1)
        with pytest.raises(ValueError):
            build_extended_hamiltonian(d, TruncationConfig(n_max=3, k_max=2))


class TestDiagonalize:
    def test_reconstruction(self):
        rng = np.random.default_rng(3)
        a = rng.normal(size=(12, 12))
        a = a + a.T
        evals, evecs = diagonalize_symmetric(a)
        assert np.allclose(evecs @ np.diag(evals) @ evecs.T, a, atol=1e-10)

    def test_rejects_asymmetric(self):
        with pytest.raises(ValueError):
            diagonalize_symmetric(np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            diagonalize_symmetric(np.array([[math.nan, 0.0], [0.0, 0.0]]))


class TestOracle:
    def test_matches_diagonalization_randomized(self):
        rng = np.random.default_rng(11)
        for _ in range(6):
            d = random_drive(rng)
            spec = solve_floquet(d)
            _, quasi, defect = propagator_oracle(d, steps_per_period=1 << 14)
            assert defect < 1e-8
            mine = np.sort([spec.eps_plus, spec.eps_minus])
            assert np.max(np.abs(mine - quasi)) < 1e-6

    def test_rejects_too_few_steps(self):
        with pytest.raises(ValueError):
            propagator_oracle(DriveConfig(), steps_per_period=512)


class TestModeSelection:
    def test_warm_start_tracks_continuously(self):
        d = DriveConfig(b=0.0, big_omega=0.3, nu=0.4, n1=3, n2=1, omega=1.1)
        trunc = default_truncation(d)
        prev = solve_floquet(d, trunc)
        for b in np.linspace(0.01, 0.3, 15):
            cur = solve_floquet(DriveConfig(b=float(b), big_omega=0.3, nu=0.4,
                                            n1=3, n2=1, omega=1.1),
                                trunc, previous=prev)
            # raw quasienergies move smoothly along the chain
            assert abs(cur.eps_plus_raw - prev.eps_plus_raw) < 0.1
            prev = cur

    def test_warm_start_rejects_unrelated_previous(self):
        d = DriveConfig(b=0.0, big_omega=0.2, omega=1.0, nu=0.3, n1=3, n2=1)
        trunc = default_truncation(d)
        spec = solve_floquet(d, trunc)
        m = 2 * spec.n_max + 1
        fake = FloquetSpectrum(
            eps_plus=0.0, eps_minus=0.0, eps_plus_raw=0.0, eps_minus_raw=0.0,
            coeffs_plus=np.full((m, 2), 1.0 / math.sqrt(2 * m)),
            coeffs_minus=np.full((m, 2), 1.0 / math.sqrt(2 * m)),
            omega=d.omega, n_max=spec.n_max)
        mat = build_extended_hamiltonian(d, trunc)
        evals, evecs = diagonalize_symmetric(mat)
        with pytest.raises(ModeTrackingError):
            select_physical_modes(evals, evecs, d, trunc, previous=fake)

    def test_distinct_modes_selected(self):
        rng = np.random.default_rng(5)
        for _ in range(5):
            spec = solve_floquet(random_drive(rng))
            assert not np.allclose(spec.coeffs_plus, spec.coeffs_minus)


class TestFourierWeights:
    def test_symmetry_and_identity_structure(self):
        d = DriveConfig(b=0.2, big_omega=0.1, nu=0.3, n1=3, n2=1, omega=1.0)
        spec = solve_floquet(d)
        w = fourier_weights(spec, 6)
        for k in range(1, 7):
            assert w[-k] == w[k]
        assert set(w) == set(range(-6, 7))

    def test_k_max_bounds(self):
        spec = solve_floquet(DriveConfig(big_omega=0.1, nu=0.2, n1=2, n2=1))
        with pytest.raises(ValueError):
            fourier_weights(spec, 2 * spec.n_max + 1)

    def test_undriven_g0_is_static_slope(self):
        d = DriveConfig(b=1.0, big_omega=0.0, omega=3.0)
        w = fourier_weights(solve_floquet(d), 0)
        assert abs(w[0]) == pytest.approx(1.0 / math.sqrt(2.0), abs=1e-9)


class TestEquivalenceClass:
    def test_harmonic_shift_leaves_observables_invariant(self):
        """Shifting both modes by one harmonic and both quasienergies by omega
        is a gauge change: gap, weights, and the rate must not move."""
        from bifloquet.noise import NoiseModel, dephasing_rate

        d = DriveConfig(b=0.15, big_omega=0.2, nu=0.5, n1=3, n2=1, omega=1.2)
        trunc = default_truncation(d, extra=10)
        spec = solve_floquet(d, trunc)
        shift_p = np.roll(spec.coeffs_plus, 1, axis=0)
        shift_m = np.roll(spec.coeffs_minus, 1, axis=0)
        shift_p[0] = 0.0
        shift_m[0] = 0.0
        shifted = FloquetSpectrum(
            eps_plus=float(fold(spec.eps_plus_raw + d.omega, d.omega)),
            eps_minus=float(fold(spec.eps_minus_raw + d.omega, d.omega)),
            eps_plus_raw=spec.eps_plus_raw + d.omega,
            eps_minus_raw=spec.eps_minus_raw + d.omega,
            coeffs_plus=shift_p, coeffs_minus=shift_m,
            omega=d.omega, n_max=spec.n_max)
        assert folded_gap_magnitude(shifted) == pytest.approx(
            folded_gap_magnitude(spec), abs=1e-12)
        w0 = fourier_weights(spec, trunc.k_max)
        w1 = fourier_weights(shifted, trunc.k_max)
        for k in w0:
            assert w1[k] == pytest.approx(w0[k], abs=1e-12)
        model = NoiseModel()
        r0 = dephasing_rate(w0, d, model)
        r1 = dephasing_rate(w1, d, model)
        assert r1.gamma_phi == pytest.approx(r0.gamma_phi, rel=1e-12)


class TestTruncationConvergence:
    def test_gap_converged_at_default_cutoff(self):
        rng = np.random.default_rng(2)
        for _ in range(3):
            d = random_drive(rng)
            base = default_truncation(d)
            bigger = default_truncation(d, extra=10)
            g0 = folded_gap_magnitude(solve_floquet(d, base))
            g1 = folded_gap_magnitude(solve_floquet(d, bigger))
            assert abs(g0 - g1) < 1e-10


class TestGapConventions:
    def test_signed_vs_magnitude(self):
        d = DriveConfig(b=0.2, big_omega=0.1, nu=0.3, n1=3, n2=1, omega=1.0)
        spec = solve_floquet(d)
        assert abs(quasienergy_gap(spec)) >= folded_gap_magnitude(spec) - 1e-15
        assert 0.0 <= folded_gap_magnitude(spec) <= d.omega / 2 + 1e-15
