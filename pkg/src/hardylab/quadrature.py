"""Circle grids, periodic midpoint quadrature and the disk kernels.

All integrals over the unit circle are normalized by ``dtheta / 2pi``.
"""
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidArgumentError, NonIntegrableSampleError

TWO_PI = 2.0 * np.pi

# nodes per circle are doubled until r**M drops below this
RESOLUTION_TOL = 1e-13
MAX_REFINED_SIZE = 2 ** 21


@dataclass(frozen=True, eq=False)
class CircleGrid:
    """Uniform midpoint rule on the unit circle.

    Nodes are ``2 pi (j + 1/2) / N`` so that no node sits at theta = 0,
    where most of the boundary singularities used in this package live.
    """

    size: int
    nodes: np.ndarray = field(repr=False)
    weights: np.ndarray = field(repr=False)

    @property
    def points(self):
        """Nodes as points ``exp(i theta_j)`` on the circle."""
        return np.exp(1j * self.nodes)

    def __eq__(self, other):
        return isinstance(other, CircleGrid) and other.size == self.size

    def __hash__(self):
        return hash(("CircleGrid", self.size))


def make_grid(N):
    """Return the ``N``-point midpoint grid (``N >= 4``)."""
    if isinstance(N, bool) or int(N) != N or N < 4:
        raise InvalidArgumentError(f"grid size must be an integer >= 4, got {N!r}")
    N = int(N)
    nodes = TWO_PI * (np.arange(N) + 0.5) / N
    weights = np.full(N, TWO_PI / N)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return CircleGrid(N, nodes, weights)


def resolving_size(N, r, tol=RESOLUTION_TOL):
    """Smallest ``N * 2**m`` with ``r**size <= tol``.

    A Poisson kernel centred at radius ``r`` has Fourier coefficients
    ``r**|k|``; the midpoint rule on ``M`` nodes aliases them with relative
    error ``~2 r**M``, so this is the size at which a circle of radius ``r``
    is resolved.
    """
    M = int(N)
    r = abs(float(r))
    if r == 0.0:
        return M
    while M < MAX_REFINED_SIZE and M * np.log(r) > np.log(tol):
        M *= 2
    return M


def resolving_grid(grid, r, tol=RESOLUTION_TOL):
    """``grid`` itself, or a refinement of it that resolves radius ``r``."""
    M = resolving_size(grid.size, r, tol)
    return grid if M == grid.size else make_grid(M)


def _check_disk(z):
    z = np.asarray(z, dtype=complex)
    if not np.all(np.abs(z) < 1.0):
        raise InvalidArgumentError("points must lie in the open unit disk")
    return z


def herglotz_kernel(theta, z):
    """``(e^{i theta} + z) / (e^{i theta} - z)``, broadcast over inputs."""
    z = _check_disk(z)
    e = np.exp(1j * np.asarray(theta, dtype=float))
    d = e - z
    # (e + z)(conj e - conj z) / |e - z|^2 with |e| = 1
    denom = d.real ** 2 + d.imag ** 2
    out = ((1.0 - (z.real ** 2 + z.imag ** 2)) + 2j * (z * e.conj()).imag) / denom
    return out[()] if out.ndim == 0 else out


def poisson_kernel(theta, z):
    """``(1 - |z|^2) / |e^{i theta} - z|^2``; the real part of the Herglotz kernel."""
    z = _check_disk(z)
    e = np.exp(1j * np.asarray(theta, dtype=float))
    d = e - z
    # |d|^2 via real/imag keeps this bitwise equal to Re(herglotz)
    out = (1.0 - (z.real ** 2 + z.imag ** 2)) / (d.real ** 2 + d.imag ** 2)
    return out[()] if out.ndim == 0 else out


def circle_mean(samples, grid):
    """``sum_j w_j s_j / 2pi`` for samples taken at the grid nodes."""
    s = np.asarray(samples, dtype=float)
    if s.shape[-1] != grid.size:
        raise InvalidArgumentError(
            f"expected {grid.size} samples per row, got {s.shape[-1]}"
        )
    if not np.all(np.isfinite(s)):
        raise NonIntegrableSampleError(
            "non-finite sample: a boundary singularity hit a grid node"
        )
    return s @ grid.weights / TWO_PI
