"""Log-log exponent fits, probe families, and operator-norm estimation.

Asymptotic order claims are pinned down by regressing log(norm) against
log(frequency or size); operator norms are estimated by maximizing the
Rayleigh ratio over a fixed, seeded probe set so results are reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .grid import PeriodicGrid, SpectralFunction
from .spectral import random_trig_polynomial, sobolev_norm


def fit_exponent(sizes: Sequence[float], norms: Sequence[float]) -> float:
    """Least-squares slope of log(norms) vs log(sizes)."""
    sizes = np.asarray(sizes, dtype=float)
    norms = np.asarray(norms, dtype=float)
    if np.any(norms <= 0.0):
        # all-zero residuals mean arbitrarily negative order
        return -np.inf
    return float(np.polyfit(np.log(sizes), np.log(norms), 1)[0])


@dataclass
class OrderFitReport:
    """Result of one frequency-scaling study."""

    experiment: str
    sizes: list
    norms: list
    fitted_exponent: float
    predicted_exponent: float
    predicted_exponent_alt: float | None = None
    reference_norms: list | None = None

    def within(self, tol: float) -> bool:
        return abs(self.fitted_exponent - self.predicted_exponent) <= tol

    def rows(self) -> list[tuple]:
        """CSV rows (experiment, N, norm, fitted_exponent, predicted_exponent)."""
        return [(self.experiment, n, v, self.fitted_exponent, self.predicted_exponent)
                for n, v in zip(self.sizes, self.norms)]


def wave_packet(grid: PeriodicGrid, freq: int, envelope: Callable | None = None) -> SpectralFunction:
    """e^{i freq x} modulated by an optional smooth envelope."""
    x = grid.nodes
    vals = np.exp(1j * freq * x)
    if envelope is not None:
        vals = vals * envelope(x)
    return SpectralFunction.from_values(grid, vals)


def probe_set(grid: PeriodicGrid, seed: int = 7, n_random: int = 64,
              freqs: Sequence[int] | None = None,
              band: int | None = None) -> list[SpectralFunction]:
    """Deterministic probe family: bump-modulated wave packets plus seeded
    random trigonometric polynomials."""
    from .burgers import plateau_bump_values  # local import: avoids a cycle

    rng = np.random.default_rng(seed)
    band = grid.n_points // 3 if band is None else band
    if freqs is None:
        freqs = [f for f in (4, 8, 16, 32, 64, 128) if f < band]
    probes = []
    x = grid.nodes
    env = 0.5 + plateau_bump_values(((x + np.pi) % (2 * np.pi)) - np.pi)
    for f in freqs:
        vals = np.exp(1j * f * x) * env
        probes.append(SpectralFunction.from_values(grid, vals))
    for _ in range(n_random):
        probes.append(random_trig_polynomial(grid, rng, band=band, real=False))
    return probes


def operator_norm_estimate(apply_fn: Callable[[SpectralFunction], SpectralFunction],
                           probes: Sequence[SpectralFunction],
                           source_s: float = 0.0, target_s: float = 0.0) -> float:
    """max over probes of ||A u||_{H^target} / ||u||_{H^source}."""
    best = 0.0
    for u in probes:
        denom = sobolev_norm(u, source_s)
        if denom == 0.0:
            continue
        best = max(best, sobolev_norm(apply_fn(u), target_s) / denom)
    return best


def matrix_norm_estimate(M: np.ndarray, grid: PeriodicGrid,
                         probes: Sequence[SpectralFunction],
                         source_s: float = 0.0, target_s: float = 0.0) -> float:
    def _apply(u: SpectralFunction) -> SpectralFunction:
        return SpectralFunction(grid, M @ u.coeffs)

    return operator_norm_estimate(_apply, probes, source_s, target_s)
