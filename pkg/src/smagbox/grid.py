"""Uniform collocation grid on a periodic cube and its spectral layout."""

import numpy as np


class Grid:
    """A cube [0, L)^3 sampled at n points per axis, plus wavenumber arrays.

    The spectral layout matches a real-to-complex transform over the last
    axis: full integer modes on x and y, non-negative modes on z. Integer
    modes m map to wavenumbers k = 2*pi*m / L.

    Dealiasing keeps modes with max(|mx|, |my|, |mz|) <= n // 3, the usual
    two-thirds rule for a quadratic (and here cubic-ish) nonlinearity.
    """

    def __init__(self, n: int, length: float = 2.0 * np.pi):
        n = int(n)
        if n < 4 or n % 2 != 0:
            raise ValueError(f"grid size must be even and >= 4, got {n}")
        length = float(length)
        if not length > 0.0:
            raise ValueError(f"box length must be positive, got {length}")

        self.n = n
        self.length = length
        self.spacing = length / n
        self.volume = length**3
        self.cell_volume = self.spacing**3

        half = n // 2 + 1
        mx = np.fft.fftfreq(n, d=1.0 / n).astype(np.int64)
        mz = np.arange(half, dtype=np.int64)
        self.modes_x = mx.reshape(n, 1, 1)
        self.modes_y = mx.reshape(1, n, 1)
        self.modes_z = mz.reshape(1, 1, half)

        scale = 2.0 * np.pi / length
        self.kx = scale * self.modes_x.astype(np.float64)
        self.ky = scale * self.modes_y.astype(np.float64)
        self.kz = scale * self.modes_z.astype(np.float64)
        self.k_sq = self.kx**2 + self.ky**2 + self.kz**2
        with np.errstate(divide="ignore"):
            inv = np.where(self.k_sq > 0.0, 1.0 / self.k_sq, 0.0)
        self.inv_k_sq = inv

        self.dealias_cutoff = n // 3
        cut = self.dealias_cutoff
        self.dealias_mask = (
            (np.abs(self.modes_x) <= cut)
            & (np.abs(self.modes_y) <= cut)
            & (np.abs(self.modes_z) <= cut)
        )

        # Multiplicity of each stored mode when summing over the full
        # spectrum: conjugate z-modes are implicit except the mz = 0 and
        # mz = n/2 planes.
        w = np.full(half, 2.0)
        w[0] = 1.0
        w[-1] = 1.0
        self.spectral_weight = w.reshape(1, 1, half)

    @property
    def real_shape(self):
        return (self.n, self.n, self.n)

    @property
    def spectral_shape(self):
        return (self.n, self.n, self.n // 2 + 1)

    def axis(self):
        """Collocation coordinates along one axis."""
        return self.spacing * np.arange(self.n)

    def coords(self):
        """Broadcastable x, y, z coordinate arrays for building fields."""
        ax = self.axis()
        return (
            ax.reshape(self.n, 1, 1),
            ax.reshape(1, self.n, 1),
            ax.reshape(1, 1, self.n),
        )

    def __eq__(self, other):
        if not isinstance(other, Grid):
            return NotImplemented
        return self.n == other.n and self.length == other.length

    def __hash__(self):
        return hash((self.n, self.length))

    def __repr__(self):
        return f"Grid(n={self.n}, length={self.length!r})"
