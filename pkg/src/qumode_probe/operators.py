"""Hermitian operators, density matrices, and spectral-line extraction.

Everything downstream (measurement distributions, reconstruction,
thermodynamics) is driven by the eigendecomposition of an interaction
operator and the populations of its eigenstates in a given system state.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .jacobi import jacobi_eigh

DIMENSION_CAP = 1024
HERMITICITY_TOL = 1e-12
DEGENERACY_MERGE_TOL = 1e-8


def _as_square(entries) -> np.ndarray:
    a = np.asarray(entries, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    return a


@dataclass(frozen=True)
class EigenDecomposition:
    """Ascending eigenvalues and the unitary of column eigenvectors."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)


@dataclass
class HermitianOperator:
    """Dense Hermitian matrix with a lazily cached eigendecomposition.

    The cache is populated at most once; share instances across threads
    only after calling :meth:`eig` (single-writer initialization).
    """

    entries: np.ndarray
    _eig: EigenDecomposition | None = field(default=None, repr=False, compare=False)

    def __init__(self, entries):
        a = _as_square(entries)
        if a.shape[0] > DIMENSION_CAP:
            raise ValueError(f"dimension {a.shape[0]} exceeds cap {DIMENSION_CAP}")
        tol = HERMITICITY_TOL * max(1.0, np.abs(a).max(initial=0.0))
        if not np.allclose(a, a.conj().T, rtol=0.0, atol=tol):
            raise ValueError("matrix is not Hermitian")
        a = 0.5 * (a + a.conj().T)
        a.setflags(write=False)
        self.entries = a
        self._eig = None

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def eig(self) -> EigenDecomposition:
        if self._eig is None:
            vals, vecs = jacobi_eigh(self.entries)
            self._eig = EigenDecomposition(eigenvalues=vals, eigenvectors=vecs)
        return self._eig

    def spectral_norm(self) -> float:
        return float(np.max(np.abs(self.eig().eigenvalues), initial=0.0))

    def __matmul__(self, other: "HermitianOperator") -> np.ndarray:
        return self.entries @ other.entries


@dataclass
class SystemState:
    """Density matrix of the probed system."""

    rho: np.ndarray

    def __init__(self, rho):
        a = _as_square(rho)
        tol = HERMITICITY_TOL * max(1.0, np.abs(a).max(initial=0.0))
        if not np.allclose(a, a.conj().T, rtol=0.0, atol=tol):
            raise ValueError("density matrix is not Hermitian")
        if abs(np.trace(a).real - 1.0) > 1e-10 or abs(np.trace(a).imag) > 1e-10:
            raise ValueError(f"density matrix trace {np.trace(a)} != 1")
        # validation only; the spectral pipeline itself uses jacobi_eigh
        if np.linalg.eigvalsh(a).min() < -1e-10:
            raise ValueError("density matrix has a negative eigenvalue")
        a = 0.5 * (a + a.conj().T)
        a.setflags(write=False)
        self.rho = a

    @property
    def dim(self) -> int:
        return self.rho.shape[0]


@dataclass(frozen=True)
class SpectralLine:
    """One line of the measured spectrum: energy, population, degeneracy."""

    E: float
    P: float
    g: int = 1


@dataclass(frozen=True)
class Spectrum:
    """Normalized set of spectral lines, energies strictly increasing."""

    lines: tuple[SpectralLine, ...]

    def __post_init__(self):
        if not self.lines:
            raise ValueError("spectrum has no lines")
        total = sum(line.P for line in self.lines)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"line populations sum to {total}, not 1")
        energies = [line.E for line in self.lines]
        if any(b <= a for a, b in zip(energies, energies[1:])):
            raise ValueError("line energies must be strictly increasing")
        if any(line.P < 0 for line in self.lines):
            raise ValueError("negative line population")
        if any(line.g < 1 for line in self.lines):
            raise ValueError("degeneracy must be a positive integer")

    @classmethod
    def from_lines(cls, triples) -> "Spectrum":
        return cls(tuple(SpectralLine(float(e), float(p), int(g)) for e, p, g in triples))

    @property
    def energies(self) -> np.ndarray:
        return np.array([line.E for line in self.lines])

    @property
    def populations(self) -> np.ndarray:
        return np.array([line.P for line in self.lines])

    @property
    def degeneracies(self) -> np.ndarray:
        return np.array([line.g for line in self.lines])

    def moment(self, m: int) -> float:
        return float(np.sum(self.populations * self.energies ** m))


def spin_x(two_j: int, pauli: bool = False) -> HermitianOperator:
    """Spin-x operator for total spin j = two_j / 2 (dimension two_j + 1).

    Uses the physics normalization J_x built from ladder operators; with
    ``pauli=True`` and two_j == 1 the result is doubled to sigma_x.
    """
    if two_j < 0:
        raise ValueError("two_j must be nonnegative")
    j = two_j / 2.0
    dim = two_j + 1
    m = j - np.arange(dim)  # m = j, j-1, ..., -j
    # <j, m+1| J+ |j, m> = sqrt(j(j+1) - m(m+1))
    upper = 0.5 * np.sqrt(j * (j + 1) - m[1:] * (m[1:] + 1))
    jx = np.zeros((dim, dim), dtype=complex)
    jx[np.arange(dim - 1), np.arange(1, dim)] = upper
    jx[np.arange(1, dim), np.arange(dim - 1)] = upper
    if pauli:
        if two_j != 1:
            raise ValueError("pauli normalization only applies to two_j = 1")
        jx *= 2.0
    return HermitianOperator(jx)


def sigma_x() -> HermitianOperator:
    return spin_x(1, pauli=True)


def sigma_z() -> HermitianOperator:
    return HermitianOperator(np.diag([1.0, -1.0]).astype(complex))


def site_sum(single: HermitianOperator, n_sites: int) -> HermitianOperator:
    """Sum of ``single`` acting on each of ``n_sites`` tensor factors."""
    if n_sites < 1:
        raise ValueError("n_sites must be positive")
    d = single.dim
    if d ** n_sites > DIMENSION_CAP:
        raise ValueError(f"total dimension {d}**{n_sites} exceeds cap {DIMENSION_CAP}")
    total = np.zeros((d ** n_sites, d ** n_sites), dtype=complex)
    for i in range(n_sites):
        term = np.eye(d ** i, dtype=complex)
        term = np.kron(term, single.entries)
        term = np.kron(term, np.eye(d ** (n_sites - i - 1), dtype=complex))
        total += term
    return HermitianOperator(total)


def eigendecompose(op: HermitianOperator) -> EigenDecomposition:
    return op.eig()


def thermal_state(H: HermitianOperator, beta: float) -> SystemState:
    """Gibbs state exp(-beta H)/Z; spectrum shifted by E_min to avoid underflow."""
    if not np.isfinite(beta) or beta < 0:
        raise ValueError(f"beta must be finite and nonnegative, got {beta}")
    dec = H.eig()
    shifted = dec.eigenvalues - dec.eigenvalues.min()
    weights = np.exp(-beta * shifted)
    weights /= weights.sum()
    v = dec.eigenvectors
    rho = (v * weights) @ v.conj().T
    return SystemState(rho)


def spectrum_of(state: SystemState, H: HermitianOperator,
                merge_tol: float = DEGENERACY_MERGE_TOL) -> Spectrum:
    """Spectral lines of H with populations taken from ``state``.

    Eigenvalues closer than ``merge_tol`` are reported as one degenerate
    line carrying the summed population.
    """
    if state.dim != H.dim:
        raise ValueError(f"dimension mismatch: state {state.dim} vs operator {H.dim}")
    dec = H.eig()
    populations = np.real(np.einsum("ij,jk,ki->i", dec.eigenvectors.conj().T,
                                    state.rho, dec.eigenvectors))
    populations = np.clip(populations, 0.0, None)
    populations /= populations.sum()

    lines = []
    i = 0
    vals = dec.eigenvalues
    n = len(vals)
    while i < n:
        j = i + 1
        while j < n and vals[j] - vals[j - 1] <= merge_tol:
            j += 1
        block = slice(i, j)
        lines.append(SpectralLine(E=float(vals[block].mean()),
                                  P=float(populations[block].sum()),
                                  g=j - i))
        i = j
    return Spectrum(tuple(lines))


def commutator_norm(A: HermitianOperator, B: HermitianOperator) -> float:
    """Spectral norm of the commutator AB - BA."""
    if A.dim != B.dim:
        raise ValueError(f"dimension mismatch: {A.dim} vs {B.dim}")
    comm = A.entries @ B.entries - B.entries @ A.entries
    return float(np.linalg.norm(comm, ord=2))


def evenly_spaced_spectrum(n_lines: int, spacing: float = 1.0, e0: float = 0.0,
                           seed: int | None = None,
                           populations=None) -> Spectrum:
    """Equally spaced lines with given or seeded-random populations."""
    if n_lines < 1:
        raise ValueError("need at least one line")
    if populations is None:
        rng = np.random.default_rng(seed)
        populations = rng.random(n_lines)
    populations = np.asarray(populations, dtype=float)
    populations = populations / populations.sum()
    return Spectrum.from_lines(
        (e0 + k * spacing, populations[k], 1) for k in range(n_lines))
