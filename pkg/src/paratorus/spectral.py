"""Dyadic decomposition, Sobolev/Zygmund norms, and Fourier multipliers.

The dyadic profile is fixed library-wide: P0(xi) = theta(2 - |xi|) with the
exponential smoothstep `theta`, so P0 = 1 on |xi| <= 1 and P0 = 0 on
|xi| >= 2.  Blocks are P_k(xi) = P0(2^{-k} xi) - P0(2^{-k+1} xi) and form an
exact partition of unity on the lattice.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import BadParams, NonZeroMean
from .grid import PeriodicGrid, SpectralFunction

ZERO_MEAN_TOL = 1e-12


def smoothstep(t) -> np.ndarray:
    """C-infinity step: 0 for t <= 0, 1 for t >= 1, exp-type blend between."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    out[t >= 1.0] = 1.0
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    lo = np.exp(-1.0 / tm)
    hi = np.exp(-1.0 / (1.0 - tm))
    out[mid] = lo / (lo + hi)
    return out


def lp_profile(xi) -> np.ndarray:
    """Low-pass profile P0 evaluated at (possibly rescaled) frequencies."""
    return smoothstep(2.0 - np.abs(np.asarray(xi, dtype=float)))


def block_count(grid: PeriodicGrid) -> int:
    """Smallest K with 2^K >= N/2, so that P_{<=K} == 1 on the lattice."""
    k = 0
    while 2 ** k < grid.n_points // 2:
        k += 1
    return k


def block_weights(grid: PeriodicGrid) -> np.ndarray:
    """Matrix [K+1, N] of P_k weights on the frequency lattice."""
    xi = grid.frequencies.astype(float)
    k_max = block_count(grid)
    rows = [lp_profile(xi)]
    for k in range(1, k_max + 1):
        rows.append(lp_profile(xi / 2.0 ** k) - lp_profile(xi / 2.0 ** (k - 1)))
    return np.array(rows)


def ring_bounds(k: int) -> tuple[float, float]:
    """Open ring (2^{k-1}, 2^{k+1}) carrying block k >= 1; block 0 sits in |xi| < 2."""
    if k == 0:
        return (0.0, 2.0)
    return (2.0 ** (k - 1), 2.0 ** (k + 1))


@dataclass
class DyadicDecomposition:
    """Littlewood-Paley blocks of a function plus their ring supports."""

    source: SpectralFunction
    blocks: list[SpectralFunction]

    @property
    def k_max(self) -> int:
        return len(self.blocks) - 1

    def reconstruct(self) -> SpectralFunction:
        total = self.blocks[0]
        for b in self.blocks[1:]:
            total = total + b
        return total

    def ring(self, k: int) -> tuple[float, float]:
        return ring_bounds(k)


def lp_decompose(u: SpectralFunction) -> DyadicDecomposition:
    """Split u into dyadic blocks; the blocks sum back to u exactly."""
    weights = block_weights(u.grid)
    blocks = [SpectralFunction(u.grid, w * u.coeffs, is_real=u.is_real)
              for w in weights]
    return DyadicDecomposition(u, blocks)


def sobolev_norm(u: SpectralFunction, s: float) -> float:
    """H^s norm in exact lattice form, (sum (1+xi^2)^s |uhat|^2)^{1/2}."""
    xi = u.grid.frequencies.astype(float)
    return float(np.sqrt(np.sum((1.0 + xi * xi) ** s * np.abs(u.coeffs) ** 2)))


def sobolev_block_norm(u: SpectralFunction, s: float) -> float:
    """Block form (sum_q 2^{2qs} ||u_q||_{L^2}^2)^{1/2}; equivalent to
    `sobolev_norm` up to two-sided constants, used only in equivalence tests."""
    dec = lp_decompose(u)
    total = sum(4.0 ** (q * s) * b.l2_norm() ** 2 for q, b in enumerate(dec.blocks))
    return float(np.sqrt(total))


def zygmund_norm(u: SpectralFunction, r: float) -> float:
    """sup_q 2^{qr} max_j |u_q(x_j)|: grid approximation of the C^r_* norm."""
    dec = lp_decompose(u)
    best = 0.0
    for q, b in enumerate(dec.blocks):
        if np.any(b.coeffs):
            best = max(best, 2.0 ** (q * r) * float(np.max(np.abs(b.values()))))
    return best


def multiplier(u: SpectralFunction, m) -> SpectralFunction:
    """Apply a Fourier multiplier given as a callable on xi or an array.

    The result is flagged real when u is real and m(-xi) = conj(m(xi))
    with m(-N/2) arbitrary (that mode is zero on real data anyway).
    """
    xi = u.grid.frequencies
    table = np.asarray(m(xi) if callable(m) else m, dtype=complex)
    if table.shape != xi.shape:
        raise BadParams("multiplier table does not match the lattice")
    if not np.all(np.isfinite(table)):
        raise BadParams("multiplier takes non-finite values on the lattice")
    out = table * u.coeffs
    real = False
    if u.is_real:
        mirrored = np.conj(table[_mirror_idx(len(table))])
        real = bool(np.allclose(table[1:], mirrored[1:], rtol=0.0, atol=1e-14))
    return SpectralFunction(u.grid, out, is_real=real)


def _mirror_idx(n: int) -> np.ndarray:
    idx = np.arange(n)
    return np.concatenate(([0], n - idx[1:]))


def fractional_derivative_symbol(grid: PeriodicGrid, a: float) -> np.ndarray:
    """|xi|^a on the lattice with the 0-mode annihilated."""
    xi = grid.frequencies.astype(float)
    out = np.zeros_like(xi)
    nz = xi != 0.0
    out[nz] = np.abs(xi[nz]) ** a
    return out


def fractional_derivative(u: SpectralFunction, a: float) -> SpectralFunction:
    """|D|^a u with the mean mode mapped to zero."""
    return multiplier(u, fractional_derivative_symbol(u.grid, a))


def dispersion_multiplier_symbol(grid: PeriodicGrid, alpha: float) -> np.ndarray:
    """i xi |xi|^{alpha-1}: symbol of the dispersive operator d/dx |D|^{alpha-1}."""
    xi = grid.frequencies.astype(float)
    out = np.zeros_like(xi, dtype=complex)
    nz = xi != 0.0
    out[nz] = 1j * xi[nz] * np.abs(xi[nz]) ** (alpha - 1.0)
    return out


def derivative(u: SpectralFunction, order: int = 1) -> SpectralFunction:
    xi = u.grid.frequencies.astype(float)
    return multiplier(u, (1j * xi) ** order)


def antiderivative_zero_mean(u: SpectralFunction) -> SpectralFunction:
    """Periodic zero-mean primitive: Vhat(0) = 0, Vhat(xi) = uhat(xi)/(i xi).

    Requires uhat(0) = 0; d/dx of the result reproduces u exactly on the
    lattice.
    """
    if abs(u.mean) > ZERO_MEAN_TOL:
        raise NonZeroMean(f"mean {u.mean} exceeds tolerance {ZERO_MEAN_TOL}")
    xi = u.grid.frequencies.astype(float)
    out = np.zeros_like(u.coeffs)
    nz = xi != 0.0
    out[nz] = u.coeffs[nz] / (1j * xi[nz])
    return SpectralFunction(u.grid, out, is_real=u.is_real)


def gaussian_mollify(u: SpectralFunction, eps: float) -> SpectralFunction:
    """Damp coefficients by exp(-eps^2 xi^2 / 2) (Gaussian-density transform)."""
    if eps <= 0.0:
        raise BadParams("mollifier width must be positive")
    xi = u.grid.frequencies.astype(float)
    return multiplier(u, np.exp(-0.5 * eps ** 2 * xi ** 2))


def high_frequency_cut(u: SpectralFunction, cutoff: float) -> SpectralFunction:
    """Zero all modes with |xi| > cutoff."""
    xi = u.grid.frequencies.astype(float)
    mask = (np.abs(xi) <= cutoff).astype(float)
    out = SpectralFunction(u.grid, mask * u.coeffs, is_real=u.is_real)
    return out


def random_trig_polynomial(grid: PeriodicGrid, rng: np.random.Generator,
                           band: int | None = None, decay: float = 0.0,
                           real: bool = True,
                           zero_mean: bool = False) -> SpectralFunction:
    """Random band-limited function with optional power-law coefficient decay."""
    n = grid.n_points
    band = n // 3 if band is None else min(band, n // 2 - 1)
    xi = grid.frequencies
    c = (rng.standard_normal(n) + 1j * rng.standard_normal(n)) / np.sqrt(2.0)
    c[np.abs(xi) > band] = 0.0
    if decay > 0.0:
        c *= (1.0 + np.abs(xi).astype(float)) ** (-decay)
    if real:
        c = 0.5 * (c + np.conj(c[_mirror_idx(n)]))
        c[0] = 0.0
        c[grid.zero_index] = c[grid.zero_index].real
    if zero_mean:
        c[grid.zero_index] = 0.0
    return SpectralFunction(grid, c, is_real=real)
