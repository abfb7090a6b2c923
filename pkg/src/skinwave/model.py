"""Open-boundary Hamiltonians for the four model families.

Conventions used throughout:

* Chains (continuous and discrete): matrix index i sits at coordinate
  ``x_i = i * dx`` (``dx = 1`` for lattice models).  The walls are implicit,
  ``psi = 0`` one site beyond each end of the grid.
* Two-band chains: basis ordering (cell 0 A, cell 0 B, cell 1 A, ...), both
  sublattices of cell c at coordinate c.  The asymmetric variant carries the
  non-Hermiticity on the intracell hops (t1 +/- gamma/2); the gain/loss
  variant carries it as +i gamma/2 on A and -i gamma/2 on B sites.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import ExceptionalParameter, InvalidGrid, InvalidParameter

_SQ = math.sqrt


def _require_finite(name: str, *values: float) -> None:
    for v in values:
        if not math.isfinite(v):
            raise InvalidParameter(f"{name}: non-finite parameter {v!r}")


@dataclass(frozen=True)
class ContinuousHN:
    """Continuum drift-diffusion chain in a hard-wall box, discretized on a grid.

    ``e0 = None`` resolves to the conventional offset -b^2 m / 2.
    """

    m: float
    b: float
    length: float
    dx: float
    e0: float | None = None

    def __post_init__(self) -> None:
        _require_finite("ContinuousHN", self.m, self.b, self.length, self.dx)
        if self.m <= 0:
            raise InvalidParameter("ContinuousHN: mass must be positive")
        if self.dx <= 0 or self.length <= 0:
            raise InvalidGrid("ContinuousHN: dx and length must be positive")
        if self.n_sites < 3:
            raise InvalidGrid("ContinuousHN: need at least 3 grid points")
        if self.e0 is None:
            object.__setattr__(self, "e0", -self.b * self.b * self.m / 2.0)
        _require_finite("ContinuousHN.e0", self.e0)

    @property
    def n_sites(self) -> int:
        return round(self.length / self.dx)


@dataclass(frozen=True)
class DiscreteHN:
    """Single-band chain with asymmetric hops: superdiagonal t1, subdiagonal t_minus1."""

    t1: float
    t_minus1: float
    n_sites: int

    def __post_init__(self) -> None:
        _require_finite("DiscreteHN", self.t1, self.t_minus1)
        if self.t1 <= 0 or self.t_minus1 <= 0:
            raise InvalidParameter("DiscreteHN: hops must be positive")
        if self.n_sites < 2:
            raise InvalidGrid("DiscreteHN: need at least 2 sites")


@dataclass(frozen=True)
class NonHermitianSSH:
    """Two-band chain with uniform non-Hermiticity of strength gamma.

    ``axis='y'``: asymmetric intracell hops t1 +/- gamma/2.
    ``axis='z'``: on-site gain/loss +/- i gamma/2 (kinetic sine term moves onto
    the sublattice-diagonal, giving imaginary same-sublattice hops).
    """

    t1: float
    t2: float
    gamma: float
    n_cells: int
    axis: str = "y"

    def __post_init__(self) -> None:
        _require_finite("NonHermitianSSH", self.t1, self.t2, self.gamma)
        if self.n_cells < 1:
            raise InvalidGrid("NonHermitianSSH: need at least 1 cell")
        if self.axis not in ("y", "z"):
            raise InvalidParameter(f"NonHermitianSSH: axis must be 'y' or 'z', got {self.axis!r}")
        if abs(self.gamma / 2.0) == abs(self.t1):
            raise ExceptionalParameter("NonHermitianSSH: |gamma/2| == |t1| is excluded")


@dataclass(frozen=True)
class BoundarySSH:
    """Two-band chain with gamma switched on only in the rightmost cells."""

    t1: float
    t2: float
    gamma: float
    n_cells: int
    boundary_cells: int
    axis: str = "z"

    def __post_init__(self) -> None:
        _require_finite("BoundarySSH", self.t1, self.t2, self.gamma)
        if self.n_cells < 1:
            raise InvalidGrid("BoundarySSH: need at least 1 cell")
        if not 0 <= self.boundary_cells <= self.n_cells:
            raise InvalidParameter("BoundarySSH: boundary_cells must lie in [0, n_cells]")
        if self.axis not in ("y", "z"):
            raise InvalidParameter(f"BoundarySSH: axis must be 'y' or 'z', got {self.axis!r}")
        if self.boundary_cells > 0 and abs(self.gamma / 2.0) == abs(self.t1):
            raise ExceptionalParameter("BoundarySSH: |gamma/2| == |t1| is excluded")


ModelSpec = Union[ContinuousHN, DiscreteHN, NonHermitianSSH, BoundarySSH]


@dataclass(frozen=True)
class Geometry:
    """Map from matrix index to physical coordinate and sublattice label."""

    positions: np.ndarray          # coordinate of each matrix index
    dx: float                      # grid spacing (1 for lattice models)
    sites_per_cell: int = 1        # 2 for two-band chains (A, B interleaved)

    @property
    def dim(self) -> int:
        return len(self.positions)

    @property
    def density_positions(self) -> np.ndarray:
        """Coordinates of density bins (one per cell for two-band chains)."""
        return self.positions[:: self.sites_per_cell]

    def sublattice(self, i: int) -> str:
        if self.sites_per_cell == 1:
            return "none"
        return "A" if i % 2 == 0 else "B"


@dataclass(frozen=True)
class HamiltonianMatrix:
    """Dense complex operator plus its site geometry."""

    matrix: np.ndarray
    geometry: Geometry

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def build_laplacian(dx: float, n: int) -> np.ndarray:
    """Second-difference matrix with hard-wall closure: diag -2/dx^2, off-diag 1/dx^2."""
    if n < 3:
        raise InvalidGrid(f"build_laplacian: need n >= 3, got {n}")
    if dx <= 0:
        raise InvalidGrid("build_laplacian: dx must be positive")
    inv2 = 1.0 / (dx * dx)
    lap = np.zeros((n, n))
    np.fill_diagonal(lap, -2.0 * inv2)
    idx = np.arange(n - 1)
    lap[idx, idx + 1] = inv2
    lap[idx + 1, idx] = inv2
    return lap


def build_gradient_forward(dx: float, n: int) -> np.ndarray:
    """Two-point forward difference: diag -1/dx, superdiagonal 1/dx."""
    if n < 2:
        raise InvalidGrid(f"build_gradient_forward: need n >= 2, got {n}")
    if dx <= 0:
        raise InvalidGrid("build_gradient_forward: dx must be positive")
    inv = 1.0 / dx
    grad = np.zeros((n, n))
    np.fill_diagonal(grad, -inv)
    idx = np.arange(n - 1)
    grad[idx, idx + 1] = inv
    return grad


def _gamma_profile(spec: NonHermitianSSH | BoundarySSH) -> np.ndarray:
    """Per-cell gamma values."""
    g = np.zeros(spec.n_cells)
    if isinstance(spec, NonHermitianSSH):
        g[:] = spec.gamma
    else:
        if spec.boundary_cells > 0:
            g[spec.n_cells - spec.boundary_cells:] = spec.gamma
    return g


def _build_ssh(spec: NonHermitianSSH | BoundarySSH) -> np.ndarray:
    n = spec.n_cells
    t1, t2 = spec.t1, spec.t2
    gamma = _gamma_profile(spec)
    h = np.zeros((2 * n, 2 * n), dtype=complex)
    a = np.arange(n) * 2          # A-site indices
    bidx = a + 1                  # B-site indices
    if spec.axis == "y":
        h[a, bidx] = t1 + gamma / 2.0
        h[bidx, a] = t1 - gamma / 2.0
        h[bidx[:-1], a[1:]] = t2
        h[a[1:], bidx[:-1]] = t2
    else:
        # sublattice-diagonal variant: intracell t1 symmetric, the cosine part of
        # the intercell coupling stays on the off-sublattice block and the sine
        # part becomes imaginary same-sublattice hops; gain/loss on the diagonal
        h[a, bidx] = t1
        h[bidx, a] = t1
        h[a, a] = 1j * gamma / 2.0
        h[bidx, bidx] = -1j * gamma / 2.0
        h[a[:-1], bidx[1:]] = t2 / 2.0
        h[bidx[1:], a[:-1]] = t2 / 2.0
        h[bidx[:-1], a[1:]] = t2 / 2.0
        h[a[1:], bidx[:-1]] = t2 / 2.0
        h[a[:-1], a[1:]] = -1j * t2 / 2.0
        h[a[1:], a[:-1]] = 1j * t2 / 2.0
        h[bidx[:-1], bidx[1:]] = 1j * t2 / 2.0
        h[bidx[1:], bidx[:-1]] = -1j * t2 / 2.0
    return h


def build_hamiltonian(spec: ModelSpec) -> HamiltonianMatrix:
    """Dense open-boundary Hamiltonian for any model family."""
    if isinstance(spec, ContinuousHN):
        n = spec.n_sites
        h = (
            -(1.0 / (2.0 * spec.m)) * build_laplacian(spec.dx, n)
            + spec.b * build_gradient_forward(spec.dx, n)
            + spec.e0 * np.eye(n)
        ).astype(complex)
        geom = Geometry(positions=np.arange(n) * spec.dx, dx=spec.dx)
    elif isinstance(spec, DiscreteHN):
        n = spec.n_sites
        h = np.zeros((n, n), dtype=complex)
        idx = np.arange(n - 1)
        h[idx, idx + 1] = spec.t1
        h[idx + 1, idx] = spec.t_minus1
        geom = Geometry(positions=np.arange(n, dtype=float), dx=1.0)
    elif isinstance(spec, (NonHermitianSSH, BoundarySSH)):
        h = _build_ssh(spec)
        geom = Geometry(
            positions=np.repeat(np.arange(spec.n_cells, dtype=float), 2),
            dx=1.0,
            sites_per_cell=2,
        )
    else:
        raise InvalidParameter(f"unknown model spec {type(spec).__name__}")
    if not np.all(np.isfinite(h)):
        raise InvalidParameter("build_hamiltonian: non-finite matrix entry")
    return HamiltonianMatrix(matrix=h, geometry=geom)


def bloch_matrix(spec: NonHermitianSSH | BoundarySSH, k: float) -> np.ndarray:
    """2x2 momentum-space block of the two-band chain (bulk gamma)."""
    gamma = spec.gamma if isinstance(spec, NonHermitianSSH) else 0.0
    sx = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
    sy = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
    sz = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)
    hx = spec.t1 + spec.t2 * math.cos(k)
    hyz = spec.t2 * math.sin(k) + 0.5j * gamma
    return hx * sx + hyz * (sy if spec.axis == "y" else sz)


def counterpart_t1(spec: NonHermitianSSH | BoundarySSH) -> float:
    """Intracell hop of the Hermitian counterpart, sqrt((t1-g/2)(t1+g/2))."""
    gamma = spec.gamma if isinstance(spec, NonHermitianSSH) else 0.0
    prod = (spec.t1 - gamma / 2.0) * (spec.t1 + gamma / 2.0)
    if prod <= 0:
        raise InvalidParameter("counterpart_t1: no Hermitian counterpart for |gamma/2| > |t1|")
    return _SQ(prod)


def bloch_dispersion(spec: ModelSpec, k: float):
    """Periodic-boundary dispersion.

    Chains return the (complex) single-band energy; two-band chains return the
    Hermitian-counterpart pair ``array([E_minus, E_plus])``.
    """
    if isinstance(spec, ContinuousHN):
        return k * k / (2.0 * spec.m) + 1j * spec.b * k + spec.e0
    if isinstance(spec, DiscreteHN):
        return spec.t1 * np.exp(1j * k) + spec.t_minus1 * np.exp(-1j * k)
    tbar = counterpart_t1(spec)
    e = _SQ((tbar + spec.t2 * math.cos(k)) ** 2 + (spec.t2 * math.sin(k)) ** 2)
    return np.array([-e, e])


def hermitian_dispersion(spec: ModelSpec, k: float, band: int = 1) -> float:
    """Real dispersion of the Hermitian counterpart; ``band`` = +1/-1 for two-band chains."""
    if isinstance(spec, ContinuousHN):
        return k * k / (2.0 * spec.m) + spec.e0
    if isinstance(spec, DiscreteHN):
        return 2.0 * _SQ(spec.t1 * spec.t_minus1) * math.cos(k)
    if band not in (1, -1):
        raise InvalidParameter("hermitian_dispersion: band must be +1 or -1")
    return float(bloch_dispersion(spec, k)[1 if band == 1 else 0])


def dispersion_handle(spec: ModelSpec, band: int = 1) -> Callable[[float], float]:
    """Counterpart dispersion as a plain callable (for velocity derivatives)."""
    return lambda k: hermitian_dispersion(spec, k, band)


def group_velocity(spec: ModelSpec, k: float, band: int = 1, step: float = 1e-5) -> float:
    """dE/dk of the Hermitian counterpart by central difference."""
    e = dispersion_handle(spec, band)
    return (e(k + step) - e(k - step)) / (2.0 * step)


def solve_momentum_for_velocity(
    spec: ModelSpec, target: float, band: int = 1, k_hi: float = math.pi
) -> float:
    """Smallest k in (0, k_hi] whose counterpart group velocity reaches ``target``.

    Falls back to the velocity maximum when the target is (marginally) out of
    reach, which happens when the target equals the band's top speed.
    """
    ks = np.linspace(1e-6, k_hi, 4001)
    vs = np.array([group_velocity(spec, k, band) for k in ks])
    if target > 0:
        above = np.nonzero(vs >= target)[0]
    else:
        above = np.nonzero(vs <= target)[0]
    if len(above) == 0:
        return float(ks[int(np.argmax(np.abs(vs)))])
    j = above[0]
    if j == 0:
        return float(ks[0])
    k_lo, k_up = ks[j - 1], ks[j]
    for _ in range(80):
        mid = 0.5 * (k_lo + k_up)
        if (group_velocity(spec, mid, band) - target) * (1 if target > 0 else -1) >= 0:
            k_up = mid
        else:
            k_lo = mid
    return float(0.5 * (k_lo + k_up))
