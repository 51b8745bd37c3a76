"""Cyclic Jacobi eigensolver for dense complex Hermitian matrices.

Dense two-sided rotations are robust for every Hermitian input at the
matrix sizes this package targets (d <= 1024), which is why it is used
instead of an iterative/sparse scheme.
"""

from __future__ import annotations

import numpy as np

OFFDIAG_TOL = 1e-13
MAX_ROTATIONS_PER_DIM2 = 100


class ConvergenceError(RuntimeError):
    """Raised when an iterative numerical routine exhausts its budget."""


def _offdiag_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.linalg.norm(off))


def jacobi_eigh(matrix: np.ndarray,
                tol: float = OFFDIAG_TOL,
                max_rotations: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Diagonalize a Hermitian matrix by cyclic complex Jacobi rotations.

    Returns (eigenvalues, eigenvectors) with eigenvalues ascending and
    eigenvectors as the columns of a unitary matrix.  Convergence is
    declared when the off-diagonal Frobenius norm drops below
    ``tol * ||matrix||_F``; the rotation budget is ``100 * d**2``.
    """
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {a.shape}")
    d = a.shape[0]
    if not np.allclose(a, a.conj().T, rtol=0.0, atol=1e-12 * max(1.0, np.abs(a).max(initial=0.0))):
        raise ValueError("matrix is not Hermitian")

    if max_rotations is None:
        max_rotations = MAX_ROTATIONS_PER_DIM2 * d * d

    scale = np.linalg.norm(a)
    if d == 1 or scale == 0.0:
        return np.sort(np.diag(a).real), np.eye(d, dtype=complex)

    a = a.copy()
    v = np.eye(d, dtype=complex)
    threshold = tol * scale
    rotations = 0

    while _offdiag_norm(a) > threshold:
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                r = abs(apq)
                # skipping negligible elements keeps each sweep O(d) per row
                if r <= threshold / d:
                    continue
                if rotations >= max_rotations:
                    raise ConvergenceError(
                        f"Jacobi eigensolver did not converge within {max_rotations} rotations")
                rotations += 1

                # phase that makes the pivot real, then a real rotation
                phase = np.conj(apq) / r
                app = a[p, p].real
                aqq = a[q, q].real
                tau = (aqq - app) / (2.0 * r)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c

                block = np.array([[c, s], [-s * phase, c * phase]], dtype=complex)
                a[:, [p, q]] = a[:, [p, q]] @ block
                a[[p, q], :] = block.conj().T @ a[[p, q], :]
                v[:, [p, q]] = v[:, [p, q]] @ block

                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

    eigenvalues = np.diag(a).real
    order = np.argsort(eigenvalues, kind="stable")
    return eigenvalues[order], v[:, order]
