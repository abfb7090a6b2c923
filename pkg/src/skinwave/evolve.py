"""Exact time evolution under non-Hermitian Hamiltonians.

Two independent routes:

* spectral: biorthogonal eigen-expansion, each requested time evaluated
  directly from the initial state (no step accumulation);
* expm: scaling-and-squaring matrix exponential, stepped over the frame grid.

Amplification is never carried in the raw amplitudes: states renormalize to
unit norm after every propagation and accumulate the growth in a log-norm
offset, so norms of order exp(hundreds) stay representable.

For families that a positive diagonal conjugates to a Hermitian matrix, the
decomposition goes through that counterpart (an orthogonal eigenbasis scaled
by the diagonal).  This keeps the left basis accurate far beyond the point
where inverting the right-eigenvector matrix breaks down; the generic
inversion route refuses to proceed past a 1e12 condition number instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DefectiveMatrix, DimensionMismatch, InvalidParameter, NumericalOverflow
from .model import (
    ContinuousHN,
    DiscreteHN,
    Geometry,
    HamiltonianMatrix,
    ModelSpec,
    NonHermitianSSH,
    build_hamiltonian,
)
from .similarity import build_similarity, exact_chain_symmetrizer

CONDITION_LIMIT = 1e12

# rotation taking the gain/loss two-band variant to the asymmetric-hop one
_U_AXIS = np.array([[1.0, -1.0j], [-1.0j, 1.0]], dtype=complex) / math.sqrt(2.0)


@dataclass(frozen=True)
class WaveState:
    """Complex amplitudes plus an accumulated log-norm offset.

    Total squared norm is ``exp(2 * log_norm_offset) * ||amplitudes||^2``.
    """

    amplitudes: np.ndarray
    log_norm_offset: float = 0.0
    time: float = 0.0

    @classmethod
    def from_amplitudes(cls, amps: np.ndarray, time: float = 0.0) -> "WaveState":
        amps = np.asarray(amps, dtype=complex)
        nrm = float(np.linalg.norm(amps))
        if nrm == 0 or not math.isfinite(nrm):
            raise InvalidParameter("WaveState: amplitudes must be finite and nonzero")
        return cls(amplitudes=amps / nrm, log_norm_offset=math.log(nrm), time=time)

    @property
    def dim(self) -> int:
        return len(self.amplitudes)

    @property
    def log_norm(self) -> float:
        """log of the total state norm."""
        return self.log_norm_offset + math.log(float(np.linalg.norm(self.amplitudes)))

    def site_density(self) -> np.ndarray:
        """|amplitude|^2 per matrix index (pre-normalization view of the state)."""
        return np.abs(self.amplitudes) ** 2


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues with biorthonormal right/left bases: left^H @ right == I."""

    eigenvalues: np.ndarray
    right: np.ndarray    # columns R_n
    left: np.ndarray     # columns L_n
    condition: float     # max left-vector norm (diagnostic)

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)


@dataclass(frozen=True)
class EvolutionResult:
    """Sampled frames: per-index densities of unit-normalized states plus log norms."""

    times: np.ndarray
    site_densities: np.ndarray   # shape (frames, dim)
    log_norms: np.ndarray        # total log norm per frame
    geometry: Geometry
    method: str
    spec: ModelSpec | None = None


def _as_matrix(h) -> np.ndarray:
    m = h.matrix if isinstance(h, HamiltonianMatrix) else np.asarray(h)
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch("expected a square matrix")
    if not np.all(np.isfinite(m)):
        raise InvalidParameter("matrix has non-finite entries")
    return m


def decompose(h) -> SpectralDecomposition:
    """Generic route: eig + inversion of the right-eigenvector matrix.

    One Newton polish of the inverse tightens biorthogonality to roundoff;
    raises DefectiveMatrix past the 1e12 condition limit (fall back to expm).
    """
    m = _as_matrix(h)
    w, v = np.linalg.eig(m)
    x = np.linalg.inv(v)
    cond = float(np.linalg.norm(v, 1) * np.linalg.norm(x, 1))
    if cond > CONDITION_LIMIT:
        raise DefectiveMatrix(
            f"right-eigenvector matrix condition {cond:.2e} exceeds {CONDITION_LIMIT:.0e}"
        )
    x = x @ (2.0 * np.eye(m.shape[0]) - v @ x)
    x /= np.einsum("ij,ji->i", x, v)[:, None]
    left = x.conj().T
    return SpectralDecomposition(
        eigenvalues=w,
        right=v,
        left=left,
        condition=float(np.max(np.linalg.norm(left, axis=0))),
    )


def _decompose_via_diagonal(m: np.ndarray, diag: np.ndarray) -> SpectralDecomposition:
    """Eigendecomposition through the Hermitian counterpart S^-1 M S."""
    hbar = m * (diag[None, :] / diag[:, None])
    hbar = 0.5 * (hbar + hbar.conj().T)
    energies, q = np.linalg.eigh(hbar)
    right = diag[:, None] * q
    norms = np.linalg.norm(right, axis=0)
    if not np.all(np.isfinite(norms)) or np.any(norms == 0):
        raise NumericalOverflow("similarity-scaled eigenbasis overflowed")
    right = right / norms[None, :]
    left = (q / diag[:, None]) * norms[None, :]
    if not np.all(np.isfinite(left)):
        raise NumericalOverflow("similarity-scaled left basis overflowed")
    return SpectralDecomposition(
        eigenvalues=energies.astype(complex),
        right=right,
        left=left,
        condition=float(np.max(np.linalg.norm(left, axis=0))),
    )


def decompose_model(h: HamiltonianMatrix, spec: ModelSpec | None) -> SpectralDecomposition:
    """Best decomposition route for a known model family.

    Chains use the exact tridiagonal symmetrizer; uniform two-band chains use
    the per-cell diagonal (rotating the gain/loss variant onto the
    asymmetric-hop one first).  Everything else goes through ``decompose``.
    """
    if isinstance(spec, (ContinuousHN, DiscreteHN)):
        diag = exact_chain_symmetrizer(h.matrix)
        if diag is not None:
            return _decompose_via_diagonal(h.matrix, diag)
    if isinstance(spec, NonHermitianSSH):
        if spec.axis == "y":
            s = build_similarity(spec, h.dim)
            return _decompose_via_diagonal(h.matrix, s.diagonal)
        twin = NonHermitianSSH(spec.t1, spec.t2, spec.gamma, spec.n_cells, axis="y")
        h_y = build_hamiltonian(twin)
        s = build_similarity(twin, h_y.dim)
        dec = _decompose_via_diagonal(h_y.matrix, s.diagonal)
        w = np.kron(np.eye(spec.n_cells), _U_AXIS)
        return SpectralDecomposition(
            eigenvalues=dec.eigenvalues,
            right=w @ dec.right,
            left=w @ dec.left,
            condition=dec.condition,
        )
    return decompose(h)


def propagate_spectral(dec: SpectralDecomposition, psi0: WaveState, t: float) -> WaveState:
    """Evolve by duration t through the eigenbasis, exact at any t.

    The largest Im(E_n) * t is factored into the log-norm offset before
    exponentiating, so growing modes never overflow.
    """
    if not math.isfinite(t):
        raise InvalidParameter("propagate_spectral: t must be finite")
    if psi0.dim != dec.dim:
        raise DimensionMismatch(f"state dim {psi0.dim} != decomposition dim {dec.dim}")
    coeff = dec.left.conj().T @ psi0.amplitudes
    growth = dec.eigenvalues.imag * t
    mu = float(np.max(growth))
    coeff = coeff * np.exp(-1j * dec.eigenvalues.real * t + (growth - mu))
    amps = dec.right @ coeff
    nrm = float(np.linalg.norm(amps))
    if nrm == 0 or not math.isfinite(nrm):
        raise NumericalOverflow("propagate_spectral: state norm degenerate")
    return WaveState(
        amplitudes=amps / nrm,
        log_norm_offset=psi0.log_norm_offset + mu + math.log(nrm),
        time=psi0.time + t,
    )


def matrix_exp(m: np.ndarray) -> np.ndarray:
    """Scaling-and-squaring with a machine-precision Taylor core."""
    m = np.asarray(m, dtype=complex)
    n = m.shape[0]
    norm1 = float(np.linalg.norm(m, 1))
    if not math.isfinite(norm1):
        raise NumericalOverflow("matrix_exp: input norm not finite")
    squarings = max(0, int(math.ceil(math.log2(norm1 / 0.25)))) if norm1 > 0.25 else 0
    a = m / (2.0 ** squarings)
    result = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 60):
        term = term @ a / k
        result += term
        if np.linalg.norm(term, 1) <= 1e-18 * np.linalg.norm(result, 1):
            break
    for _ in range(squarings):
        result = result @ result
    if not np.all(np.isfinite(result)):
        raise NumericalOverflow("matrix_exp: overflow during squaring")
    return result


def propagate_expm(h, psi0: WaveState, t: float) -> WaveState:
    """Independent propagation route: exp(-i H t) applied to the state.

    The mean diagonal growth rate is shifted into the log-norm offset so that
    uniformly amplifying spectra do not overflow the exponential itself.
    """
    if not math.isfinite(t):
        raise InvalidParameter("propagate_expm: t must be finite")
    m = _as_matrix(h)
    if psi0.dim != m.shape[0]:
        raise DimensionMismatch(f"state dim {psi0.dim} != matrix dim {m.shape[0]}")
    gen = -1j * m * t
    shift = float(np.mean(gen.diagonal().real))
    propagator = matrix_exp(gen - shift * np.eye(m.shape[0]))
    amps = propagator @ psi0.amplitudes
    nrm = float(np.linalg.norm(amps))
    if nrm == 0 or not math.isfinite(nrm):
        raise NumericalOverflow("propagate_expm: state norm degenerate")
    return WaveState(
        amplitudes=amps / nrm,
        log_norm_offset=psi0.log_norm_offset + shift + math.log(nrm),
        time=psi0.time + t,
    )


def _check_times(times) -> np.ndarray:
    ts = np.asarray(times, dtype=float)
    if ts.ndim != 1 or len(ts) == 0:
        raise InvalidParameter("evolve_series: need a non-empty 1-d time list")
    if not np.all(np.isfinite(ts)):
        raise InvalidParameter("evolve_series: times must be finite")
    if np.any(np.diff(ts) < 0):
        raise InvalidParameter("evolve_series: times must be ascending")
    return ts


def evolve_series(
    h: HamiltonianMatrix,
    psi0: WaveState,
    times,
    method: str = "auto",
    spec: ModelSpec | None = None,
) -> EvolutionResult:
    """Sample the evolution on a time grid.

    spectral evaluates every frame directly from psi0; expm steps frame to
    frame (propagators cached per distinct gap); auto falls back to expm when
    the decomposition is refused as defective.
    """
    if method not in ("spectral", "expm", "auto"):
        raise InvalidParameter(f"evolve_series: unknown method {method!r}")
    ts = _check_times(times)
    used = method
    dec = None
    if method in ("spectral", "auto"):
        try:
            dec = decompose_model(h, spec)
            used = "spectral"
        except DefectiveMatrix:
            if method == "spectral":
                raise
            used = "expm"

    dim = h.dim
    densities = np.empty((len(ts), dim))
    log_norms = np.empty(len(ts))

    if used == "spectral":
        for k, t in enumerate(ts):
            try:
                state = propagate_spectral(dec, psi0, t - psi0.time)
            except Exception as exc:
                raise type(exc)(f"frame {k} (t={t}): {exc}") from exc
            densities[k] = state.site_density()
            log_norms[k] = state.log_norm
    else:
        cache: dict[float, tuple[np.ndarray, float]] = {}
        state = psi0
        prev_t = psi0.time
        for k, t in enumerate(ts):
            # uniform grids produce gaps differing in the last bits; quantize
            # so one propagator serves the whole series
            gap = float(f"{t - prev_t:.12g}")
            try:
                if gap != 0.0:
                    if gap not in cache:
                        gen = -1j * h.matrix * gap
                        shift = float(np.mean(gen.diagonal().real))
                        cache[gap] = (matrix_exp(gen - shift * np.eye(dim)), shift)
                    prop, shift = cache[gap]
                    amps = prop @ state.amplitudes
                    nrm = float(np.linalg.norm(amps))
                    if nrm == 0 or not math.isfinite(nrm):
                        raise NumericalOverflow("stepped expm: degenerate norm")
                    state = WaveState(
                        amplitudes=amps / nrm,
                        log_norm_offset=state.log_norm_offset + shift + math.log(nrm),
                        time=t,
                    )
            except Exception as exc:
                raise type(exc)(f"frame {k} (t={t}): {exc}") from exc
            densities[k] = state.site_density()
            log_norms[k] = state.log_norm
            prev_t = t

    return EvolutionResult(
        times=ts,
        site_densities=densities,
        log_norms=log_norms,
        geometry=h.geometry,
        method=used,
        spec=spec,
    )
