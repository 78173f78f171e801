"""Grid contract and spectral-function representation."""
import numpy as np
import pytest

from paratorus import BadParams, GridMismatch, PeriodicGrid, SpectralFunction


def test_grid_rejects_odd_and_tiny():
    with pytest.raises(BadParams):
        PeriodicGrid(7)
    with pytest.raises(BadParams):
        PeriodicGrid(4)


def test_lattice_layout():
    g = PeriodicGrid(16)
    assert g.frequencies[0] == -8
    assert g.frequencies[-1] == 7
    assert g.frequencies[g.zero_index] == 0
    assert g.index_of(-8) == 0 and g.index_of(7) == 15


def test_mean_is_zero_mode():
    g = PeriodicGrid(32)
    u = SpectralFunction.from_values(g, 2.5 + np.sin(3 * g.nodes))
    assert u.mean == pytest.approx(2.5, abs=1e-14)


def test_real_data_hermitian_and_nyquist_free(rng):
    g = PeriodicGrid(64)
    u = SpectralFunction.from_values(g, rng.standard_normal(64))
    assert u.is_real
    assert u.coeffs[0] == 0.0
    assert u.hermitian_defect() <= 1e-12 * max(np.max(np.abs(u.coeffs)), 1e-30)


def test_single_mode_convention():
    g = PeriodicGrid(32)
    u = SpectralFunction.single_mode(g, 3)
    assert np.max(np.abs(u.values() - np.exp(3j * g.nodes))) <= 1e-13


def test_arithmetic_and_grid_mismatch(rng):
    g = PeriodicGrid(32)
    u = SpectralFunction.from_values(g, np.cos(g.nodes))
    v = SpectralFunction.from_values(g, np.sin(g.nodes))
    w = 2.0 * u - v
    assert w.is_real
    assert np.max(np.abs(w.values() - (2 * np.cos(g.nodes) - np.sin(g.nodes)))) <= 1e-13
    other = SpectralFunction.zero(PeriodicGrid(64))
    with pytest.raises(GridMismatch):
        u + other


def test_from_coeffs_detects_realness():
    g = PeriodicGrid(16)
    c = np.zeros(16, dtype=complex)
    c[g.index_of(2)] = 1.0 - 0.5j
    c[g.index_of(-2)] = 1.0 + 0.5j
    assert SpectralFunction.from_coeffs(g, c).is_real
    c[g.index_of(-2)] = 0.0
    assert not SpectralFunction.from_coeffs(g, c).is_real
