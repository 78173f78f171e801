"""Principal and sub-principal symbols of the symmetrized free-surface system.

All formulas are evaluated from the surface slope eta_x and curvature input
eta_xx; the xi = 0 column is set to zero (the calculus only quantifies over
nonzero frequencies).  Chain-rule x-derivatives use the supplied eta_xx
exactly rather than re-differentiating on the grid.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParams
from .grid import PeriodicGrid, SpectralFunction
from .symbols import Symbol


@dataclass
class WaterWaveSymbols:
    lambda1: Symbol   # |xi|
    lambda0: Symbol   # sub-principal part of the Dirichlet-Neumann symbol
    l2: Symbol        # (1 + eta_x^2)^{-3/2} xi^2
    l1: Symbol        # -(i/2) d_x d_xi l2
    q: Symbol         # (1 + eta_x^2)^{-1/2}
    p_half: Symbol    # (1 + eta_x^2)^{-5/4} |xi|^{1/2}
    gamma32: Symbol   # sqrt(l2 * lambda1)
    gamma12: Symbol   # sqrt(l2 / lambda1) * Re(lambda0) / 2

    def ellipticity_minimum(self) -> float:
        """min over (x, xi != 0) of gamma32 / |xi|^{3/2}."""
        grid = self.gamma32.grid
        xi = grid.frequencies.astype(float)
        nz = xi != 0.0
        ratios = np.abs(self.gamma32.values[:, nz]) / np.abs(xi[nz]) ** 1.5
        return float(np.min(ratios.real))


def ww_symbols(eta_x: SpectralFunction, eta_xx: SpectralFunction,
               grid: PeriodicGrid | None = None) -> WaterWaveSymbols:
    """Evaluate the symbol family on (grid nodes) x (frequency lattice).

    eta_x and eta_xx are real-valued samples of the first and second surface
    derivatives.  Nonzero-frequency entries follow the closed forms; the
    continuous xi-derivative is used inside l1 (the only place one appears).
    """
    if not (eta_x.is_real and eta_xx.is_real):
        raise BadParams("surface derivatives must be real-valued")
    grid = grid if grid is not None else eta_x.grid
    n = grid.n_points
    ex = eta_x.values().real[:, None]
    exx = eta_xx.values().real[:, None]
    xi = grid.frequencies.astype(float)[None, :]
    absxi = np.abs(xi)
    nz = absxi > 0.0
    sgn = np.where(nz, np.sign(xi), 0.0)

    g = (1.0 + ex ** 2) ** -0.5           # (1 + eta_x^2)^{-1/2}
    gx = -ex * exx * g ** 3               # d/dx of g

    lam1 = np.where(nz, absxi, 0.0) * np.ones((n, 1))

    # alpha1 = g (|xi| + i eta_x xi);  d_x alpha1 = gx (|xi| + i eta_x xi) + i g eta_xx xi
    alpha1 = g * (absxi + 1j * ex * xi)
    dx_alpha1 = gx * (absxi + 1j * ex * xi) + 1j * g * exx * xi
    # d_x(alpha1 * eta_x) with the same chain rule
    dx_alpha1_etax = gx * (ex * absxi + 1j * ex ** 2 * xi) \
        + g * (exx * absxi + 2j * ex * exx * xi)
    with np.errstate(divide="ignore", invalid="ignore"):
        lam0 = ((1.0 + ex ** 2) / (2.0 * absxi)) * (dx_alpha1_etax + 1j * sgn * dx_alpha1)
    lam0 = np.where(nz, lam0, 0.0)

    l2 = g ** 3 * xi ** 2
    # d_xi(l2) = 2 g^3 xi (continuous), so l1 = -i * d_x(g^3) * xi
    l1 = -1j * (3.0 * g ** 2 * gx) * xi

    q = g * np.ones((1, n))
    p_half = np.where(nz, g ** 2.5 * absxi ** 0.5, 0.0)
    gamma32 = np.where(nz, g ** 1.5 * absxi ** 1.5, 0.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        gamma12 = np.where(nz, g ** 1.5 * absxi ** 0.5 * lam0.real / 2.0, 0.0)

    def sym(vals, order, real=False):
        return Symbol(grid, np.ascontiguousarray(np.where(nz, vals, 0.0)),
                      order=order, regularity=1.0, is_real_valued=real)

    return WaterWaveSymbols(
        lambda1=sym(lam1, 1.0, real=True),
        lambda0=sym(lam0, 0.0),
        l2=sym(l2, 2.0, real=True),
        l1=sym(l1, 1.0),
        q=Symbol(grid, (q * np.ones((1, n))).astype(complex), order=0.0,
                 regularity=1.0, is_real_valued=True),
        p_half=sym(p_half, 0.5, real=True),
        gamma32=sym(gamma32, 1.5, real=True),
        gamma12=sym(gamma12, 0.5, real=True),
    )
