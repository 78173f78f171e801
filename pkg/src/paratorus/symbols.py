"""Symbols a(x, xi), admissible cutoffs, and frequency-localized quantization.

A Symbol is sampled densely on (spatial nodes) x (frequency lattice).  The
quantized operator acts in coefficient space as

    (T_a u)^(xi) = sum_eta psi(xi - eta, eta) c_{xi-eta}(a(., eta)) uhat(eta),

where c_zeta(a(., eta)) are the Fourier coefficients of the symbol in x and
psi is an admissible cutoff: psi(eta, xi) vanishes for |xi| <= B|eta| + b and
equals one for |xi| >= B|eta| + b + 1.  Output frequencies beyond the lattice
are dropped; columns near the lattice edge see the same truncation that the
discrete operator itself applies.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import BadParams, GridMismatch, NonZeroMean
from .grid import PeriodicGrid, SpectralFunction
from .spectral import antiderivative_zero_mean, smoothstep, zygmund_norm

DEFAULT_B = 4.0
DEFAULT_SMALL_B = 1.0


@dataclass
class CutoffFunction:
    """Admissible cutoff psi^{B,b} tabulated on lattice pairs.

    First argument: symbol-side frequency eta; second: data-side frequency
    xi.  The transition band B|eta|+b < |xi| < B|eta|+b+1 is one unit wide,
    so the derivative-decay bounds hold with constants of order one and
    psi takes only the values 0 and 1 at integer pairs when B and b are
    integers.
    """

    B: float
    b: float
    grid: PeriodicGrid
    _table: np.ndarray | None = field(default=None, repr=False)

    def value(self, eta, xi) -> np.ndarray:
        return smoothstep(np.abs(xi) - self.B * np.abs(eta) - self.b)

    def table(self) -> np.ndarray:
        """psi[eta_index, xi_index] over the full lattice."""
        if self._table is None:
            f = self.grid.frequencies.astype(float)
            self._table = self.value(f[:, None], f[None, :])
        return self._table

    def high_pass(self) -> np.ndarray:
        """psi(0, xi) on the lattice: the multiplier T_1 reduces to."""
        return self.value(0.0, self.grid.frequencies.astype(float))


def build_cutoff(B: float, b: float, grid: PeriodicGrid) -> CutoffFunction:
    if B <= 1.0 or b <= 0.0:
        raise BadParams(f"cutoff needs B > 1 and b > 0, got B={B}, b={b}")
    return CutoffFunction(B, b, grid)


def default_cutoff(grid: PeriodicGrid) -> CutoffFunction:
    return CutoffFunction(DEFAULT_B, DEFAULT_SMALL_B, grid)


@dataclass
class Symbol:
    """a(x, xi) sampled as values[x_index, xi_index] with declared order and
    spatial regularity.  The regularity is a label used by seminorms and
    truncation bookkeeping; it is measured, never assumed."""

    grid: PeriodicGrid
    values: np.ndarray
    order: float = 0.0
    regularity: float = 0.0
    is_real_valued: bool = False

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=complex)
        n = self.grid.n_points
        if self.values.shape != (n, n):
            raise GridMismatch("symbol table must be (n_points, n_points)")
        if self.is_real_valued and np.max(np.abs(self.values.imag)) > 1e-12 * max(
                1.0, np.max(np.abs(self.values))):
            raise BadParams("symbol flagged real-valued but has imaginary part")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_function(cls, grid: PeriodicGrid, f: Callable, order: float = 0.0,
                      regularity: float = 0.0) -> "Symbol":
        x = grid.nodes[:, None]
        xi = grid.frequencies[None, :].astype(float)
        vals = np.broadcast_to(f(x, xi), (grid.n_points, grid.n_points)).astype(complex)
        real = bool(np.max(np.abs(vals.imag)) <= 1e-14 * max(1.0, np.max(np.abs(vals))))
        return cls(grid, vals.real.astype(complex) if real else vals.copy(),
                   order, regularity, is_real_valued=real)

    @classmethod
    def from_multiplier(cls, grid: PeriodicGrid, m, order: float = 0.0) -> "Symbol":
        table = np.asarray(m(grid.frequencies) if callable(m) else m, dtype=complex)
        vals = np.tile(table, (grid.n_points, 1))
        real = bool(np.max(np.abs(vals.imag)) == 0.0)
        return cls(grid, vals, order, regularity=np.inf, is_real_valued=real)

    @classmethod
    def from_x_function(cls, u: SpectralFunction, regularity: float = 0.0) -> "Symbol":
        """Paraproduct symbol a(x) independent of xi."""
        col = u.values()
        vals = np.repeat(col[:, None], u.grid.n_points, axis=1).astype(complex)
        return cls(u.grid, vals, order=0.0, regularity=regularity,
                   is_real_valued=u.is_real)

    # -- elementary calculus on tables --------------------------------------

    def x_fourier(self) -> np.ndarray:
        """Coefficients c_zeta(a(., eta)) as a [zeta_index, eta_index] table."""
        return np.fft.fftshift(np.fft.fft(self.values, axis=0), axes=0) / self.grid.n_points

    def x_derivative(self, k: int = 1) -> "Symbol":
        zeta = self.grid.frequencies.astype(float)[:, None]
        hat = self.x_fourier() * (1j * zeta) ** k
        vals = np.fft.ifft(np.fft.ifftshift(hat, axes=0), axis=0) * self.grid.n_points
        return Symbol(self.grid, vals, self.order, max(0.0, self.regularity - k))

    def xi_forward_difference(self, k: int = 1) -> "Symbol":
        """Iterated forward difference in xi; the right lattice edge is
        padded with zeros (tests use band-limited probes away from it)."""
        vals = self.values
        for _ in range(k):
            vals = np.concatenate(
                [vals[:, 1:] - vals[:, :-1],
                 np.zeros((self.grid.n_points, 1), dtype=complex)], axis=1)
        return Symbol(self.grid, vals, self.order - k, self.regularity)

    def conjugate(self) -> "Symbol":
        return Symbol(self.grid, np.conj(self.values), self.order, self.regularity,
                      self.is_real_valued)

    def pointwise(self, fn: Callable[[np.ndarray], np.ndarray], order: float | None = None) -> "Symbol":
        return Symbol(self.grid, fn(self.values),
                      self.order if order is None else order, self.regularity)

    def __add__(self, other: "Symbol") -> "Symbol":
        return Symbol(self.grid, self.values + other.values,
                      max(self.order, other.order),
                      min(self.regularity, other.regularity),
                      self.is_real_valued and other.is_real_valued)

    def __sub__(self, other: "Symbol") -> "Symbol":
        return Symbol(self.grid, self.values - other.values,
                      max(self.order, other.order),
                      min(self.regularity, other.regularity),
                      self.is_real_valued and other.is_real_valued)

    def __mul__(self, scalar) -> "Symbol":
        return Symbol(self.grid, self.values * scalar, self.order, self.regularity,
                      self.is_real_valued and np.isrealobj(np.asarray(scalar)))

    __rmul__ = __mul__

    def __neg__(self) -> "Symbol":
        return Symbol(self.grid, -self.values, self.order, self.regularity,
                      self.is_real_valued)

    def scaled_by_i(self) -> "Symbol":
        return Symbol(self.grid, 1j * self.values, self.order, self.regularity)

    def preserves_real(self) -> bool:
        """True when conj(a(x, -xi)) = a(x, xi) on the paired lattice, so the
        quantized operator maps real functions to real functions."""
        n = self.grid.n_points
        mirrored = np.conj(self.values[:, _mirror_idx(n)])
        scale = max(1.0, float(np.max(np.abs(self.values))))
        return bool(np.max(np.abs(self.values[:, 1:] - mirrored[:, 1:])) <= 1e-12 * scale)


def _mirror_idx(n: int) -> np.ndarray:
    idx = np.arange(n)
    return np.concatenate(([0], n - idx[1:]))


# -- quantization ------------------------------------------------------------


def operator_matrix(a: Symbol, psi: CutoffFunction) -> np.ndarray:
    """Dense coefficient-space matrix M with (T_a u)^ = M @ uhat.

    M[xi, eta] = psi(xi - eta, eta) c_{xi-eta}(a(., eta)); entries with
    xi - eta off the lattice or xi off the lattice are dropped.
    """
    if psi.grid.n_points != a.grid.n_points:
        raise GridMismatch("cutoff and symbol on different grids")
    n = a.grid.n_points
    half = n // 2
    ahat = a.x_fourier()
    table = psi.table()
    M = np.zeros((n, n), dtype=complex)
    for ei in range(n):
        # zeta index zi contributes to output row zi + ei - half
        lo = max(0, half - ei)
        hi = min(n, n + half - ei)
        zi = np.arange(lo, hi)
        M[zi + ei - half, ei] = table[zi, ei] * ahat[zi, ei]
    return M


def quantize(a: Symbol, psi: CutoffFunction, u: SpectralFunction) -> SpectralFunction:
    """Apply the paradifferential operator T_a (with cutoff psi) to u."""
    if u.grid.n_points != a.grid.n_points:
        raise GridMismatch("symbol and function on different grids")
    out = operator_matrix(a, psi) @ u.coeffs
    return SpectralFunction(u.grid, out, is_real=u.is_real and a.preserves_real())


@dataclass
class LinearOperatorProbe:
    """An opaque linear map on spectral functions with a declared band limit."""

    apply: Callable[[SpectralFunction], SpectralFunction]
    grid: PeriodicGrid
    band_limit: int
    matrix: np.ndarray | None = None

    def __call__(self, u: SpectralFunction) -> SpectralFunction:
        return self.apply(u)

    @classmethod
    def from_matrix(cls, grid: PeriodicGrid, M: np.ndarray,
                    band_limit: int | None = None) -> "LinearOperatorProbe":
        band = grid.n_points // 2 - 1 if band_limit is None else band_limit

        def _apply(u: SpectralFunction) -> SpectralFunction:
            return SpectralFunction(u.grid, M @ u.coeffs)

        return cls(_apply, grid, band, matrix=M)

    @classmethod
    def from_quantization(cls, a: Symbol, psi: CutoffFunction) -> "LinearOperatorProbe":
        return cls.from_matrix(a.grid, operator_matrix(a, psi))

    def linearity_defect(self, rng: np.random.Generator, trials: int = 4) -> float:
        """max over random pairs of ||A(au+bv) - aAu - bAv|| / (||u|| + ||v||)."""
        from .spectral import random_trig_polynomial

        worst = 0.0
        for _ in range(trials):
            u = random_trig_polynomial(self.grid, rng, band=self.band_limit, real=False)
            v = random_trig_polynomial(self.grid, rng, band=self.band_limit, real=False)
            al, be = rng.standard_normal(2)
            lhs = self(SpectralFunction(self.grid, al * u.coeffs + be * v.coeffs))
            rhs = al * self(u).coeffs + be * self(v).coeffs
            worst = max(worst, float(np.linalg.norm(lhs.coeffs - rhs))
                        / (u.l2_norm() + v.l2_norm()))
        return worst


def extract_symbol(A: LinearOperatorProbe, grid: PeriodicGrid,
                   order: float = 0.0, regularity: float = 0.0) -> Symbol:
    """Recover a(x_j, xi_k) = e^{-i x_j xi_k} (A e^{i xi_k .})(x_j).

    For A = T_a this returns the cutoff-filtered symbol whose x-coefficients
    are psi(zeta, xi) c_zeta(a(., xi)), truncated at the lattice edge exactly
    as the operator is.
    """
    n = grid.n_points
    x = grid.nodes
    vals = np.empty((n, n), dtype=complex)
    for k, xi in enumerate(grid.frequencies):
        probe = SpectralFunction.single_mode(grid, int(xi))
        image = A(probe).values()
        vals[:, k] = np.exp(-1j * x * xi) * image
    return Symbol(grid, vals, order=order, regularity=regularity)


def filtered_symbol(a: Symbol, psi: CutoffFunction) -> Symbol:
    """Direct cutoff filtering of the symbol's x-coefficients (the oracle side
    of the extract/quantize round trip), with the same edge truncation."""
    n = a.grid.n_points
    half = n // 2
    ahat = a.x_fourier()
    table = psi.table()
    filt = table * ahat
    # drop (zeta, xi) pairs whose output frequency zeta + xi leaves the lattice
    zi = np.arange(n)[:, None]
    ei = np.arange(n)[None, :]
    keep = (zi + ei - half >= 0) & (zi + ei - half < n)
    filt = np.where(keep, filt, 0.0)
    vals = np.fft.ifft(np.fft.ifftshift(filt, axes=0), axis=0) * n
    return Symbol(a.grid, vals, a.order, a.regularity)


# -- seminorms ----------------------------------------------------------------


def symbol_seminorm(a: Symbol, m: float, n: int) -> float:
    """Order-m seminorm with n forward differences in xi:

    max_{0<=j<=n} sup_{xi != 0} (1+|xi|)^{-(m-j)} || D^j_xi a(., xi) ||_{C^rho_*},

    where rho is the symbol's declared regularity and the sup runs over
    lattice frequencies whose j-step forward stencil stays on the lattice.
    """
    if n < 0:
        raise BadParams("need n >= 0")
    rho = 0.0 if not np.isfinite(a.regularity) else a.regularity
    best = 0.0
    table = a.values
    freqs = a.grid.frequencies
    for j in range(n + 1):
        valid = a.grid.n_points - j
        for k in range(valid):
            xi = freqs[k]
            if xi == 0:
                continue
            col = SpectralFunction.from_values(a.grid, np.ascontiguousarray(table[:, k]))
            w = (1.0 + abs(float(xi))) ** (-(m - j))
            best = max(best, w * zygmund_norm(col, rho))
        table = np.concatenate(
            [table[:, 1:] - table[:, :-1],
             np.zeros((a.grid.n_points, 1), dtype=complex)], axis=1)
    return best


# -- symbolic composition and adjoint ----------------------------------------


def compose_symbols(a: Symbol, b: Symbol, rho: float) -> Symbol:
    """Truncated composition sum_{j < rho} (1/(i^j j!)) D^j_xi a d^j_x b.

    The xi-derivative is the lattice forward difference and the x-derivative
    is spectral; rho <= 1 reduces to the pointwise product.
    """
    if rho < 0:
        raise BadParams("need rho >= 0")
    terms = int(np.ceil(rho)) if rho > 0 else 1
    total = np.zeros_like(a.values)
    fac = 1.0
    da = a
    db = b
    for j in range(terms):
        if j >= rho and j > 0:
            break
        if j > 0:
            fac *= j
            da = da.xi_forward_difference()
            db = db.x_derivative()
        total = total + (1.0 / (1j ** j * fac)) * da.values * db.values
    return Symbol(a.grid, total, a.order + b.order,
                  max(0.0, min(a.regularity, b.regularity) - (terms - 1)))


def adjoint_symbol(a: Symbol, rho: float) -> Symbol:
    """Truncated adjoint sum_{j < rho} (1/(i^j j!)) D^j_xi d^j_x conj(a)."""
    if rho < 0:
        raise BadParams("need rho >= 0")
    terms = int(np.ceil(rho)) if rho > 0 else 1
    total = np.zeros_like(a.values)
    fac = 1.0
    cur = a.conjugate()
    for j in range(terms):
        if j >= rho and j > 0:
            break
        if j > 0:
            fac *= j
            cur = cur.xi_forward_difference().x_derivative()
        total = total + (1.0 / (1j ** j * fac)) * cur.values
    return Symbol(a.grid, total, a.order, max(0.0, a.regularity - (terms - 1)))


# -- concrete symbols ---------------------------------------------------------


def dispersion_symbol(grid: PeriodicGrid, alpha: float) -> Symbol:
    """xi |xi|^{alpha-1}, the real symbol of the dispersive term."""
    xi = grid.frequencies.astype(float)
    row = np.zeros_like(xi)
    nz = xi != 0.0
    row[nz] = xi[nz] * np.abs(xi[nz]) ** (alpha - 1.0)
    return Symbol.from_multiplier(grid, row, order=alpha)


def dispersion_symbol_xi_derivative(grid: PeriodicGrid, alpha: float) -> Symbol:
    """Continuous xi-derivative alpha |xi|^{alpha-1} of the dispersive symbol."""
    xi = grid.frequencies.astype(float)
    row = np.zeros_like(xi)
    nz = xi != 0.0
    row[nz] = alpha * np.abs(xi[nz]) ** (alpha - 1.0)
    return Symbol.from_multiplier(grid, row, order=alpha - 1.0)


def transport_symbol(v: SpectralFunction) -> Symbol:
    """v(x) * xi, the order-one transport symbol."""
    xi = v.grid.frequencies.astype(float)[None, :]
    vals = v.values()[:, None] * xi
    return Symbol(v.grid, vals, order=1.0, regularity=1.0,
                  is_real_valued=v.is_real)


def gauge_symbol(v: SpectralFunction, alpha: float) -> Symbol:
    """Gauge generator -(1/alpha) xi |xi|^{1-alpha} V with V the zero-mean
    primitive of v; declared order 2 - alpha.

    The bracket identity alpha |xi|^{alpha-1} d_x p = -v xi holds exactly on
    the lattice (note the minus sign; the flow direction used in the
    transport-cancellation experiments is chosen accordingly).
    """
    if not 1.0 < alpha < 2.0:
        raise BadParams(f"alpha must lie in (1, 2), got {alpha}")
    if abs(v.mean) > 1e-12:
        raise NonZeroMean("gauge symbol needs zero-mean v")
    V = antiderivative_zero_mean(v)
    xi = v.grid.frequencies.astype(float)
    row = np.zeros_like(xi)
    nz = xi != 0.0
    row[nz] = xi[nz] * np.abs(xi[nz]) ** (1.0 - alpha)
    vals = (-1.0 / alpha) * V.values().real[:, None] * row[None, :]
    rho = float(np.ceil(alpha / (alpha - 1.0)))
    return Symbol(v.grid, vals.astype(complex), order=2.0 - alpha,
                  regularity=rho, is_real_valued=True)


def gauge_symbol_xi_derivative(v: SpectralFunction, alpha: float) -> Symbol:
    """Continuous xi-derivative of the gauge symbol,
    -((2-alpha)/alpha) |xi|^{1-alpha} V."""
    V = antiderivative_zero_mean(v)
    xi = v.grid.frequencies.astype(float)
    row = np.zeros_like(xi)
    nz = xi != 0.0
    row[nz] = np.abs(xi[nz]) ** (1.0 - alpha)
    vals = (-(2.0 - alpha) / alpha) * V.values().real[:, None] * row[None, :]
    return Symbol(v.grid, vals.astype(complex), order=1.0 - alpha,
                  regularity=float(np.ceil(alpha / (alpha - 1.0))),
                  is_real_valued=True)


def gauge_triple(v: SpectralFunction, alpha: float):
    """Symbols (a, b, p) with b = -d_xi p d_x a + d_x p d_xi a computed from
    closed-form xi-derivatives, plus those derivative tables (a_xi, p_xi).

    Here a is the dispersive symbol, p the gauge generator, and the bracket
    collapses to b = -v(x) xi since a is x-independent.
    """
    a = dispersion_symbol(v.grid, alpha)
    a_xi = dispersion_symbol_xi_derivative(v.grid, alpha)
    p = gauge_symbol(v, alpha)
    p_xi = gauge_symbol_xi_derivative(v, alpha)
    b_vals = p.x_derivative().values * a_xi.values  # d_x a = 0
    b = Symbol(v.grid, b_vals, order=1.0, regularity=p.regularity - 1.0,
               is_real_valued=True)
    return a, b, p, a_xi, p_xi
