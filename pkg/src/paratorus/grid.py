"""Periodic grid and spectral representation of 2*pi-periodic functions.

Convention: u(x) = sum_xi uhat(xi) e^{i xi x} with uhat(xi) = (2*pi)^{-1}
int u e^{-i xi x} dx, so uhat(0) is the mean value.  Coefficients are stored
in ascending frequency order on the symmetric lattice {-N/2, ..., N/2-1}.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BadParams, GridMismatch

_HERMITIAN_TOL = 1e-12


@dataclass(frozen=True)
class PeriodicGrid:
    """Equispaced nodes x_j = 2*pi*j/N and the integer frequency lattice.

    N must be even and at least 8.  The lattice {-N/2, ..., N/2-1} is
    symmetric except for the unpaired mode -N/2, which is always zeroed
    on real-valued data.
    """

    n_points: int

    def __post_init__(self):
        n = self.n_points
        if n < 8 or n % 2 != 0:
            raise BadParams(f"grid size must be even and >= 8, got {n}")

    @property
    def nodes(self) -> np.ndarray:
        return 2.0 * np.pi * np.arange(self.n_points) / self.n_points

    @property
    def frequencies(self) -> np.ndarray:
        n = self.n_points
        return np.arange(-n // 2, n // 2)

    @property
    def zero_index(self) -> int:
        return self.n_points // 2

    def index_of(self, xi: int) -> int:
        n = self.n_points
        if not -n // 2 <= xi < n // 2:
            raise BadParams(f"frequency {xi} outside lattice for N={n}")
        return int(xi) + n // 2

    def coeffs_from_values(self, values: np.ndarray) -> np.ndarray:
        """Sampled values at the nodes -> coefficients in ascending order."""
        return np.fft.fftshift(np.fft.fft(values)) / self.n_points

    def values_from_coeffs(self, coeffs: np.ndarray) -> np.ndarray:
        return np.fft.ifft(np.fft.ifftshift(coeffs)) * self.n_points


@dataclass
class SpectralFunction:
    """A 2*pi-periodic function stored by its Fourier coefficients.

    `is_real` records that, mathematically, the function is real-valued;
    in that case the coefficients satisfy uhat(-xi) = conj(uhat(xi)) and
    uhat(-N/2) = 0 up to rounding.
    """

    grid: PeriodicGrid
    coeffs: np.ndarray
    is_real: bool = False

    def __post_init__(self):
        self.coeffs = np.asarray(self.coeffs, dtype=complex)
        if self.coeffs.shape != (self.grid.n_points,):
            raise GridMismatch("coefficient array does not match grid size")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_values(cls, grid: PeriodicGrid, values: np.ndarray) -> "SpectralFunction":
        values = np.asarray(values)
        real = not np.iscomplexobj(values)
        coeffs = grid.coeffs_from_values(values.astype(complex))
        if real:
            coeffs[0] = 0.0  # unpaired -N/2 mode
        return cls(grid, coeffs, is_real=real)

    @classmethod
    def from_coeffs(cls, grid: PeriodicGrid, coeffs: np.ndarray) -> "SpectralFunction":
        coeffs = np.asarray(coeffs, dtype=complex)
        return cls(grid, coeffs.copy(), is_real=bool(_is_hermitian(coeffs)))

    @classmethod
    def zero(cls, grid: PeriodicGrid) -> "SpectralFunction":
        return cls(grid, np.zeros(grid.n_points, dtype=complex), is_real=True)

    @classmethod
    def single_mode(cls, grid: PeriodicGrid, xi: int, amplitude: complex = 1.0) -> "SpectralFunction":
        c = np.zeros(grid.n_points, dtype=complex)
        c[grid.index_of(xi)] = amplitude
        return cls(grid, c, is_real=(xi == 0 and np.isreal(amplitude)))

    # -- basic queries -----------------------------------------------------

    def values(self) -> np.ndarray:
        vals = self.grid.values_from_coeffs(self.coeffs)
        return vals.real if self.is_real else vals

    def coeff(self, xi: int) -> complex:
        return complex(self.coeffs[self.grid.index_of(xi)])

    @property
    def mean(self) -> complex:
        return complex(self.coeffs[self.grid.zero_index])

    def l2_norm(self) -> float:
        """L^2(T, dx/2pi) norm, i.e. the plain l^2 norm of the coefficients."""
        return float(np.linalg.norm(self.coeffs))

    def hermitian_defect(self) -> float:
        c = self.coeffs
        return float(max(np.max(np.abs(c - np.conj(c[_mirror(len(c))]))), abs(c[0])))

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "SpectralFunction"):
        if self.grid.n_points != other.grid.n_points:
            raise GridMismatch("operands on different grids")

    def __add__(self, other: "SpectralFunction") -> "SpectralFunction":
        self._check(other)
        return SpectralFunction(self.grid, self.coeffs + other.coeffs,
                                is_real=self.is_real and other.is_real)

    def __sub__(self, other: "SpectralFunction") -> "SpectralFunction":
        self._check(other)
        return SpectralFunction(self.grid, self.coeffs - other.coeffs,
                                is_real=self.is_real and other.is_real)

    def __mul__(self, scalar) -> "SpectralFunction":
        return SpectralFunction(self.grid, self.coeffs * scalar,
                                is_real=self.is_real and np.isrealobj(np.asarray(scalar)))

    __rmul__ = __mul__

    def __neg__(self) -> "SpectralFunction":
        return SpectralFunction(self.grid, -self.coeffs, is_real=self.is_real)


def _mirror(n: int) -> np.ndarray:
    # index map sending position of xi to position of -xi; -N/2 maps to itself
    idx = np.arange(n)
    return np.concatenate(([0], (n - idx[1:])))


def _is_hermitian(coeffs: np.ndarray, tol: float = _HERMITIAN_TOL) -> bool:
    n = len(coeffs)
    scale = np.max(np.abs(coeffs))
    if scale == 0.0:
        return True
    mirrored = np.conj(coeffs[_mirror(n)])
    return bool(np.max(np.abs(coeffs - mirrored)) <= tol * scale and
                abs(coeffs[0]) <= tol * scale)
