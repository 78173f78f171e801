"""Cutoffs, quantization (against a brute-force oracle), symbol extraction,
seminorms, symbolic composition/adjoint order fits, and concrete symbols."""
import numpy as np
import pytest

from paratorus import (BadParams, NonZeroMean, PeriodicGrid, SpectralFunction,
                       Symbol, adjoint_symbol, build_cutoff, compose_symbols,
                       default_cutoff, dispersion_symbol, extract_symbol,
                       fit_exponent, gauge_symbol, operator_matrix, probe_set,
                       quantize, random_trig_polynomial, sobolev_norm,
                       symbol_seminorm, transport_symbol, zygmund_norm)
from paratorus.symbols import (LinearOperatorProbe, filtered_symbol,
                               gauge_symbol_xi_derivative)


def sharp_psi(zeta, eta, B=4.0, b=1.0):
    """Oracle cutoff on the integer lattice.

    For integer B and b the admissible transition band contains no lattice
    points, so the cutoff is the sharp indicator |eta| >= B|zeta| + b + 1.
    """
    return 1.0 if abs(eta) >= B * abs(zeta) + b + 1.0 else 0.0


def brute_quantize(grid, symbol_values, u_coeffs, B=4.0, b=1.0):
    """Definition-level double sum, independent of the library FFT path."""
    n = grid.n_points
    freqs = grid.frequencies
    x = grid.nodes
    out = np.zeros(n, dtype=complex)
    for oi, xi in enumerate(freqs):
        acc = 0.0 + 0.0j
        for ei, eta in enumerate(freqs):
            if u_coeffs[ei] == 0.0:
                continue
            zeta = xi - eta
            if not -n // 2 <= zeta < n // 2:
                continue
            w = sharp_psi(zeta, eta, B, b)
            if w == 0.0:
                continue
            c = np.sum(symbol_values[:, ei] * np.exp(-1j * zeta * x)) / n
            acc += w * c * u_coeffs[ei]
        out[oi] = acc
    return out


class TestCutoff:
    def test_param_validation(self, grid64):
        with pytest.raises(BadParams):
            build_cutoff(1.0, 1.0, grid64)
        with pytest.raises(BadParams):
            build_cutoff(4.0, 0.0, grid64)

    def test_support_at_zero_symbol_frequency(self, grid64):
        psi = build_cutoff(4.0, 1.0, grid64)
        vals = psi.value(0.0, np.array([0.0, 1.0, 2.0, 5.0]))
        assert vals[0] == 0.0 and vals[1] == 0.0
        assert vals[2] == 1.0 and vals[3] == 1.0

    def test_vanishes_below_b(self, grid64):
        psi = build_cutoff(4.0, 1.0, grid64)
        eta = np.arange(-8, 9, dtype=float)
        for xi in (-1.0, 0.0, 1.0):
            assert np.all(psi.value(eta, xi) == 0.0)

    def test_range_and_monotone_region(self, grid128):
        psi = build_cutoff(4.0, 1.3, grid128)
        t = psi.table()
        assert np.all((0.0 <= t) & (t <= 1.0))

    def test_transition_count_matches_inequality_scan(self):
        grid = PeriodicGrid(64)
        for B, b in ((4.0, 1.0), (4.0, 0.5)):
            psi = build_cutoff(B, b, grid)
            t = psi.table()
            strict = np.sum((t > 0.0) & (t < 1.0))
            f = grid.frequencies.astype(float)
            eta, xi = np.meshgrid(f, f, indexing="ij")
            gap = np.abs(xi) - B * np.abs(eta) - b
            scan = np.sum((gap > 0.0) & (gap < 1.0))
            assert strict == scan
            if b == 1.0:
                assert strict == 0  # integer parameters give a sharp lattice cutoff


class TestQuantize:
    def test_identity_symbol_is_high_pass(self, grid64, rng):
        psi = default_cutoff(grid64)
        one = Symbol.from_multiplier(grid64, np.ones(64), order=0.0)
        u = random_trig_polynomial(grid64, rng, band=20, real=False)
        out = quantize(one, psi, u)
        expected = psi.high_pass() * u.coeffs
        assert np.max(np.abs(out.coeffs - expected)) <= 1e-14

    def test_multiplier_symbol(self, grid64, rng):
        psi = default_cutoff(grid64)
        table = (1.0 + np.abs(grid64.frequencies)) ** 0.7
        a = Symbol.from_multiplier(grid64, table, order=0.7)
        u = random_trig_polynomial(grid64, rng, band=20, real=False)
        out = quantize(a, psi, u)
        assert np.max(np.abs(out.coeffs - psi.high_pass() * table * u.coeffs)) <= 1e-12

    def test_cosine_paraproduct_sidebands(self):
        grid = PeriodicGrid(128)
        psi = default_cutoff(grid)
        a = Symbol.from_x_function(
            SpectralFunction.from_values(grid, np.cos(grid.nodes)))
        u = SpectralFunction.single_mode(grid, 32)
        out = quantize(a, psi, u)
        nonzero = grid.frequencies[np.abs(out.coeffs) > 1e-15]
        assert sorted(nonzero.tolist()) == [31, 33]
        assert out.coeff(31) == pytest.approx(0.5, abs=1e-13)
        assert out.coeff(33) == pytest.approx(0.5, abs=1e-13)

    def test_against_brute_force_oracle(self, rng):
        grid = PeriodicGrid(64)
        psi = default_cutoff(grid)
        for _ in range(3):
            w = random_trig_polynomial(grid, rng, band=6)
            table = np.abs(grid.frequencies.astype(float)) ** 1.2
            a = Symbol(grid, w.values().real[:, None] * table[None, :], order=1.2)
            u = random_trig_polynomial(grid, rng, band=20, real=False)
            out = quantize(a, psi, u)
            oracle = brute_quantize(grid, a.values, u.coeffs)
            assert np.max(np.abs(out.coeffs - oracle)) <= 1e-12

    def test_spectral_support_exact(self, rng):
        grid = PeriodicGrid(128)
        psi = default_cutoff(grid)
        B, b = psi.B, psi.b
        for _ in range(50):
            band = int(rng.integers(2, 12))
            radius = int(rng.integers(3, 30))
            a = Symbol.from_x_function(random_trig_polynomial(grid, rng, band=band))
            u = random_trig_polynomial(grid, rng, band=radius, real=False)
            out = quantize(a, psi, u)
            limit = (1.0 + 1.0 / B) * radius - b / B
            outside = np.abs(grid.frequencies) > limit
            assert not np.any(out.coeffs[outside])

    def test_linear_in_symbol_and_data(self, grid64, rng):
        psi = default_cutoff(grid64)
        a1 = Symbol.from_x_function(random_trig_polynomial(grid64, rng, band=5))
        a2 = Symbol.from_x_function(random_trig_polynomial(grid64, rng, band=5))
        u = random_trig_polynomial(grid64, rng, band=20, real=False)
        v = random_trig_polynomial(grid64, rng, band=20, real=False)
        lhs = quantize(a1 + a2, psi, u)
        rhs = quantize(a1, psi, u) + quantize(a2, psi, u)
        assert (lhs - rhs).l2_norm() <= 1e-10 * max(lhs.l2_norm(), 1e-30)
        probe = LinearOperatorProbe.from_quantization(a1, psi)
        assert probe.linearity_defect(rng) <= 1e-10
        lhs2 = quantize(a1, psi, SpectralFunction(grid64, u.coeffs + 2.0 * v.coeffs))
        rhs2 = quantize(a1, psi, u).coeffs + 2.0 * quantize(a1, psi, v).coeffs
        assert np.max(np.abs(lhs2.coeffs - rhs2)) <= 1e-10

    def test_real_input_real_symbol_gives_real_output(self, grid64, rng):
        psi = default_cutoff(grid64)
        a = Symbol.from_x_function(random_trig_polynomial(grid64, rng, band=4))
        u = random_trig_polynomial(grid64, rng, band=20)
        out = quantize(a, psi, u)
        assert out.is_real
        assert out.hermitian_defect() <= 1e-12 * max(np.max(np.abs(out.coeffs)), 1e-30)

    def test_continuity_constant_uniform(self, rng):
        # ||T_a u||_{H^{mu-m}} <= K M^m_0(a) ||u||_{H^mu} with one K
        grid = PeriodicGrid(128)
        psi = default_cutoff(grid)
        worst = 0.0
        for _ in range(34):
            w = random_trig_polynomial(grid, rng, band=8)
            m = float(rng.uniform(0.0, 1.5))
            table = (1.0 + np.abs(grid.frequencies.astype(float))) ** m
            a = Symbol(grid, w.values().real[:, None] * table[None, :], order=m)
            seminorm = symbol_seminorm(a, m, 0)
            u = random_trig_polynomial(grid, rng, band=40, real=False)
            for mu in (0.0, 1.0, 2.0):
                num = sobolev_norm(quantize(a, psi, u), mu - m)
                den = seminorm * sobolev_norm(u, mu)
                worst = max(worst, num / den)
        assert worst <= 5.0


class TestExtractSymbol:
    def test_multiplier_recovered(self, grid64):
        table = (1.0 + np.abs(grid64.frequencies.astype(float))) ** 0.5
        probe = LinearOperatorProbe.from_matrix(grid64, np.diag(table))
        rec = extract_symbol(probe, grid64)
        assert np.max(np.abs(rec.values - table[None, :])) <= 1e-12

    def test_identity_symbol_extracts_high_pass(self, grid64):
        psi = default_cutoff(grid64)
        one = Symbol.from_multiplier(grid64, np.ones(64), order=0.0)
        probe = LinearOperatorProbe.from_quantization(one, psi)
        rec = extract_symbol(probe, grid64)
        assert np.max(np.abs(rec.values - psi.high_pass()[None, :])) <= 1e-12

    def test_round_trip_equals_filtered_symbol(self, rng):
        grid = PeriodicGrid(128)
        psi = default_cutoff(grid)
        for _ in range(5):
            w = random_trig_polynomial(grid, rng, band=8)
            a = Symbol.from_x_function(w)
            probe = LinearOperatorProbe.from_quantization(a, psi)
            rec = extract_symbol(probe, grid)
            target = filtered_symbol(a, psi)
            assert np.max(np.abs(rec.values - target.values)) <= 1e-10


class TestSeminorm:
    def test_pure_power(self, grid64):
        m = 1.3
        a = dispersion_symbol(grid64, 1.3)  # |xi|^{0.3} xi, order 1.3
        val = symbol_seminorm(a, 1.3, 0)
        xi = np.abs(grid64.frequencies.astype(float))
        xi = xi[xi > 0]
        expected = np.max(xi ** m / (1.0 + xi) ** m)
        assert val == pytest.approx(expected, rel=1e-10)
        assert val < 1.0

    def test_order_zero_x_symbol(self, grid64):
        u = SpectralFunction.from_values(grid64, np.cos(grid64.nodes))
        a = Symbol.from_x_function(u)
        assert symbol_seminorm(a, 0.0, 0) == pytest.approx(
            zygmund_norm(u, 0.0), rel=1e-12)

    def test_gauge_symbol_seminorm_grid_stable(self):
        vals = {}
        for n in (128, 256):
            grid = PeriodicGrid(n)
            v = SpectralFunction.from_values(grid, np.cos(grid.nodes))
            p = gauge_symbol(v, 1.5)
            vals[n] = symbol_seminorm(p, 0.5, 1)
        assert vals[256] == pytest.approx(vals[128], rel=0.10)
        assert np.isfinite(vals[128]) and vals[128] > 0.0


class TestComposeAdjoint:
    def test_rho_one_is_pointwise_product(self, grid64, rng):
        a = Symbol.from_x_function(random_trig_polynomial(grid64, rng, band=5))
        table = np.abs(grid64.frequencies.astype(float)) ** 0.5
        b = Symbol.from_multiplier(grid64, table, order=0.5)
        c = compose_symbols(a, b, 1.0)
        assert np.max(np.abs(c.values - a.values * b.values)) <= 1e-14

    def test_transport_composition_closed_form(self, grid64, rng):
        # a = xi, b = v(x), rho = 2:  a#b = v xi + (1/i) dv/dx
        # (all columns but the zero-padded top lattice edge)
        v = random_trig_polynomial(grid64, rng, band=5)
        xi = grid64.frequencies.astype(float)
        a = Symbol.from_multiplier(grid64, xi.astype(complex), order=1.0)
        b = Symbol.from_x_function(v, regularity=2.0)
        c = compose_symbols(a, b, 2.0)
        dv = v.values().real
        dvx = np.fft.ifft(np.fft.ifftshift(
            1j * xi * np.fft.fftshift(np.fft.fft(dv)))).real
        expected = dv[:, None] * xi[None, :] + (1.0 / 1j) * dvx[:, None]
        assert np.max(np.abs(c.values[:, :-1] - expected[:, :-1])) <= 1e-11

    def test_real_x_independent_adjoint_is_identity(self, grid64):
        table = (1.0 + np.abs(grid64.frequencies.astype(float))) ** 0.8
        a = Symbol.from_multiplier(grid64, table, order=0.8)
        astar = adjoint_symbol(a, 2.0)
        assert np.max(np.abs(astar.values - a.values)) <= 1e-14

    def test_adjoint_transport_hand_expansion(self, grid64, rng):
        # a = i xi v(x):  a* = -i xi v - dv/dx  (forward difference of xi is
        # one; the sign matches the exact conjugate transpose of T_a, and the
        # L^2 adjoint of v d/dx, which is -v d/dx - v')
        v = random_trig_polynomial(grid64, rng, band=3)
        a = transport_symbol(v).scaled_by_i()
        astar = adjoint_symbol(a, 2.0)
        xi = grid64.frequencies.astype(float)
        vx = v.values().real
        dvx = np.fft.ifft(np.fft.ifftshift(
            1j * xi * np.fft.fftshift(np.fft.fft(vx)))).real
        expected = -1j * xi[None, :] * vx[:, None] - dvx[:, None]
        assert np.max(np.abs(astar.values[:, :-1] - expected[:, :-1])) <= 1e-11

    def test_adjoint_transport_matches_conjugate_transpose(self):
        grid = PeriodicGrid(256)
        psi = default_cutoff(grid)
        v = SpectralFunction.from_values(grid, np.cos(grid.nodes))
        a = transport_symbol(v).scaled_by_i()
        D = operator_matrix(a, psi).conj().T - operator_matrix(
            adjoint_symbol(a, 2.0), psi)
        for f in (16, 32, 64):
            e = SpectralFunction.single_mode(grid, f)
            assert np.linalg.norm(D @ e.coeffs) <= 1e-10

    def test_composition_remainder_order(self):
        # ||(T_a T_b - T_{a#b}) e^{iNx}|| ~ N^{m + m' - rho}; coefficient
        # functions are band-one so every probe sits above the cutoff knee
        # of the truncated-composition symbol (whose x-band is the sum)
        grid = PeriodicGrid(512)
        psi = default_cutoff(grid)
        x = grid.nodes
        table = np.abs(grid.frequencies.astype(float)) ** 1.5
        a = Symbol(grid, (0.7 + np.cos(x + 0.4))[:, None] * table[None, :],
                   order=1.5, regularity=2.0)
        b = Symbol.from_x_function(
            SpectralFunction.from_values(grid, 0.3 + np.sin(x)), regularity=2.0)
        Ma = operator_matrix(a, psi)
        Mb = operator_matrix(b, psi)
        Mc = operator_matrix(compose_symbols(a, b, 2.0), psi)
        D = Ma @ Mb - Mc
        freqs = [16, 32, 64, 128]
        norms = []
        for f in freqs:
            e = SpectralFunction.single_mode(grid, f)
            norms.append(np.linalg.norm(D @ e.coeffs))
        slope = fit_exponent(freqs, norms)
        assert slope == pytest.approx(1.5 + 0.0 - 2.0, abs=0.35)

    def test_adjoint_remainder_order(self):
        # ||((T_a)^H - T_{a*}) e^{iNx}|| ~ N^{m - rho}
        grid = PeriodicGrid(512)
        psi = default_cutoff(grid)
        x = grid.nodes
        table = np.abs(grid.frequencies.astype(float)) ** 1.5
        a = Symbol(grid, (0.7 + np.cos(x + 0.4))[:, None] * table[None, :],
                   order=1.5, regularity=2.0)
        D = operator_matrix(a, psi).conj().T - operator_matrix(
            adjoint_symbol(a, 2.0), psi)
        freqs = [16, 32, 64, 128]
        norms = [np.linalg.norm(D @ SpectralFunction.single_mode(grid, f).coeffs)
                 for f in freqs]
        slope = fit_exponent(freqs, norms)
        assert slope == pytest.approx(1.5 - 2.0, abs=0.35)

    def test_bony_remainder_bounded_under_refinement(self, rng):
        # F(t) = t^2: the remainder a^2 - 2 T_a a stays bounded in H^{2s - 1/2}
        norms = []
        for n in (64, 128, 256):
            grid = PeriodicGrid(n)
            psi = default_cutoff(grid)
            rng_local = np.random.default_rng(7)
            a = random_trig_polynomial(grid, rng_local, band=n // 3, decay=2.1)
            a = (1.0 / sobolev_norm(a, 1.5)) * a
            sq = SpectralFunction.from_values(grid, a.values().real ** 2)
            ta_a = quantize(Symbol.from_x_function(a), psi, a)
            rem = sq - 2.0 * ta_a
            norms.append(sobolev_norm(rem, 2 * 1.5 - 0.5))
        assert max(norms) <= 1.5 * min(norms) + 1e-12


class TestConcreteSymbols:
    def test_gauge_symbol_cosine(self):
        grid = PeriodicGrid(128)
        alpha = 1.5
        v = SpectralFunction.from_values(grid, np.cos(grid.nodes))
        p = gauge_symbol(v, alpha)
        xi = grid.frequencies.astype(float)
        expected = np.zeros((128, 128))
        nz = xi != 0
        expected[:, nz] = (-(1.0 / alpha) * np.sin(grid.nodes)[:, None]
                           * (xi[nz] * np.abs(xi[nz]) ** (1 - alpha))[None, :])
        assert np.max(np.abs(p.values - expected)) <= 1e-12
        assert p.order == pytest.approx(2.0 - alpha)
        assert p.is_real_valued

    def test_gauge_symbol_zero(self, grid64):
        p = gauge_symbol(SpectralFunction.zero(grid64), 1.7)
        assert np.max(np.abs(p.values)) == 0.0

    def test_gauge_symbol_validation(self, grid64):
        v = SpectralFunction.from_values(grid64, np.cos(grid64.nodes))
        with pytest.raises(BadParams):
            gauge_symbol(v, 2.5)
        with pytest.raises(NonZeroMean):
            gauge_symbol(SpectralFunction.single_mode(grid64, 0, 1.0), 1.5)

    def test_bracket_cancellation_lattice_identity(self):
        # alpha |xi|^{alpha-1} d_x p + v xi = 0 exactly on the lattice
        grid = PeriodicGrid(128)
        alpha = 1.5
        v = SpectralFunction.from_values(grid, np.cos(grid.nodes))
        p = gauge_symbol(v, alpha)
        xi = grid.frequencies.astype(float)
        dxp = p.x_derivative().values
        lhs = alpha * np.abs(xi)[None, :] ** (alpha - 1.0) * dxp \
            + v.values().real[:, None] * xi[None, :]
        nz = xi != 0
        scale = np.max(np.abs(v.values().real[:, None] * xi[None, :]))
        assert np.max(np.abs(lhs[:, nz])) <= 1e-10 * scale

    def test_gauge_xi_derivative_table(self):
        grid = PeriodicGrid(64)
        v = SpectralFunction.from_values(grid, np.cos(grid.nodes))
        alpha = 1.5
        pxi = gauge_symbol_xi_derivative(v, alpha)
        xi = grid.frequencies.astype(float)
        nz = xi != 0
        expected = (-(2 - alpha) / alpha) * np.sin(grid.nodes)[:, None] \
            * np.abs(xi[nz]) ** (1 - alpha)
        assert np.max(np.abs(pxi.values[:, nz] - expected)) <= 1e-12
