"""Dense constructors for time- and band-limiting operator matrices.

Builds the periodic (Dirichlet-kernel) prolate matrix, the classical
sinc-kernel prolate matrix, the unitary DFT matrix with its cyclic square
submatrices, and partial Fourier frames of sampled complex exponentials.
All builders are pure functions of their parameters and return freshly
allocated arrays that are safe to share read-only.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class ParameterError(ValueError):
    """A parameter is outside the documented domain of an operation."""


@dataclass(frozen=True)
class ProlateParams:
    """Problem sizes for a periodic prolate matrix.

    M is the ambient (period) length, N the time-limit length, and K the
    half-bandwidth: the frequency window keeps 2K+1 DFT bins.  Requires
    N <= M and 2K+1 < M, which pins the bandwidth ratio W = (2K+1)/(2M)
    strictly below 1/2.
    """

    M: int
    N: int
    K: int

    def __post_init__(self) -> None:
        for name in ("M", "N", "K"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise ParameterError(f"{name} must be an integer, got {value!r}")
        if self.M < 1:
            raise ParameterError(f"M must be positive, got {self.M}")
        if self.N < 1:
            raise ParameterError(f"N must be positive, got {self.N}")
        if self.K < 0:
            raise ParameterError(f"K must be non-negative, got {self.K}")
        if self.N > self.M:
            raise ParameterError(f"need N <= M, got N={self.N} > M={self.M}")
        if 2 * self.K + 1 >= self.M:
            raise ParameterError(
                f"need 2K+1 < M, got 2K+1={2 * self.K + 1} >= M={self.M}"
            )

    @property
    def W(self) -> float:
        """Bandwidth ratio (2K+1)/(2M), strictly inside (0, 1/2)."""
        return (2 * self.K + 1) / (2 * self.M)

    @property
    def cluster_point(self) -> float:
        """N(2K+1)/M, the expected count of near-unit eigenvalues."""
        return self.N * (2 * self.K + 1) / self.M


@dataclass
class SymbolMatrix:
    """Real symmetric Toeplitz matrix stored by its first column.

    Entry (m, k) of the dense realization is ``symbol[|m - k|]``, so the
    matrix is exactly symmetric by construction.
    """

    symbol: np.ndarray

    def __post_init__(self) -> None:
        self.symbol = np.asarray(self.symbol, dtype=np.float64)
        if self.symbol.ndim != 1 or self.symbol.size == 0:
            raise ParameterError("symbol must be a non-empty 1-d real sequence")

    @property
    def n(self) -> int:
        return self.symbol.size

    def dense(self) -> np.ndarray:
        idx = np.abs(np.subtract.outer(np.arange(self.n), np.arange(self.n)))
        return self.symbol[idx]


def dirichlet_entry(params: ProlateParams, k: int) -> float:
    """Dirichlet-kernel value sin(2*pi*W*k) / (M*sin(pi*k/M)) at offset k.

    The formula is 0/0 on the diagonal; k = 0 returns the analytic limit
    (2K+1)/M, which is the only removable point for |k| < M.
    """
    k = int(k)
    if abs(k) >= params.M:
        raise ParameterError(f"offset |k| must be < M={params.M}, got {k}")
    if k == 0:
        return (2 * params.K + 1) / params.M
    return math.sin(2.0 * math.pi * params.W * k) / (
        params.M * math.sin(math.pi * k / params.M)
    )


def periodic_prolate(params: ProlateParams) -> SymbolMatrix:
    """N x N leading principal block of the periodic prolate matrix.

    Equivalent to building the full M x M Dirichlet-kernel Toeplitz matrix
    and dropping the last M-N rows and columns.
    """
    symbol = np.array(
        [dirichlet_entry(params, k) for k in range(params.N)], dtype=np.float64
    )
    return SymbolMatrix(symbol)


def sinc_prolate(n: int, w: float) -> SymbolMatrix:
    """n x n sinc-kernel prolate matrix for bandwidth ratio w in (0, 1/2).

    symbol[0] is the analytic limit 2w; symbol[k] = sin(2*pi*w*k)/(pi*k).
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ParameterError(f"dimension must be a positive integer, got {n!r}")
    w = float(w)
    if not 0.0 < w < 0.5:
        raise ParameterError(f"bandwidth ratio must lie in (0, 1/2), got {w}")
    symbol = np.empty(n, dtype=np.float64)
    symbol[0] = 2.0 * w
    if n > 1:
        k = np.arange(1, n, dtype=np.float64)
        symbol[1:] = np.sin(2.0 * np.pi * w * k) / (np.pi * k)
    return SymbolMatrix(symbol)


def dft_matrix(m: int) -> np.ndarray:
    """Unitary DFT matrix with entries exp(-2i*pi*j*k/m)/sqrt(m)."""
    if not isinstance(m, (int, np.integer)) or m < 1:
        raise ParameterError(f"dimension must be a positive integer, got {m!r}")
    j = np.arange(m)
    return np.exp(-2j * np.pi * np.outer(j, j) / m) / math.sqrt(m)


def dft_submatrix(
    m: int, p: int, row_offset: int = 0, col_offset: int = 0
) -> np.ndarray:
    """L x L cyclically-consecutive submatrix of the DFT matrix, L = m/p.

    Keeps rows row_offset..row_offset+L-1 and columns col_offset..
    col_offset+L-1 with indices taken mod m, so consecutive blocks wrap
    around the period.
    """
    if not isinstance(p, (int, np.integer)) or p < 1:
        raise ParameterError(f"divisor must be a positive integer, got {p!r}")
    if m % p != 0:
        raise ParameterError(f"p={p} does not divide m={m}")
    length = m // p
    rows = (int(row_offset) + np.arange(length)) % m
    cols = (int(col_offset) + np.arange(length)) % m
    return dft_matrix(m)[np.ix_(rows, cols)]


def sampled_exponential(n: int, f: float) -> np.ndarray:
    """Length-n complex exponential [exp(2i*pi*f*t)] for t = 0..n-1."""
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ParameterError(f"dimension must be a positive integer, got {n!r}")
    return np.exp(2j * np.pi * float(f) * np.arange(n))


def partial_fourier(n: int, w: float) -> np.ndarray:
    """n x (2*floor(n*w)+1) frame of the lowest-frequency DFT vectors.

    Column j holds the unit-norm sampled exponential at frequency k/n with
    k = -floor(n*w)..floor(n*w) in ascending order.  The columns are
    orthonormal because the frequencies are distinct mod n.
    """
    if not isinstance(n, (int, np.integer)) or n < 1:
        raise ParameterError(f"dimension must be a positive integer, got {n!r}")
    w = float(w)
    if not 0.0 < w < 0.5:
        raise ParameterError(f"bandwidth ratio must lie in (0, 1/2), got {w}")
    kmax = int(math.floor(n * w))
    if 2 * kmax + 1 > n:
        raise ParameterError(
            f"2*floor(n*w)+1 = {2 * kmax + 1} exceeds the dimension n={n}"
        )
    ks = np.arange(-kmax, kmax + 1)
    t = np.arange(n)
    return np.exp(2j * np.pi * np.outer(t, ks) / n) / math.sqrt(n)


def bandlimit_index_set(m: int, k: int) -> np.ndarray:
    """Frequency bins {0..k} plus {m-k..m-1} kept by the band-limiting step."""
    if k < 0 or 2 * k + 1 >= m:
        raise ParameterError(f"need 0 <= 2k+1 < m, got k={k}, m={m}")
    if k == 0:
        return np.array([0])
    return np.concatenate([np.arange(k + 1), np.arange(m - k, m)])
