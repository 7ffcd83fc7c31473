"""Small dense numeric kernels shared by the rest of the package.

Everything here works on plain ``numpy`` arrays of size at most 8x8 (or the
63x9 W matrix for three qubits), so no attempt is made at sparsity or
batching. Tolerances are collected in :class:`TolerancePolicy`.
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .errors import BadGenerator, NotUnitary

# Absolute floor under the relative singular-value threshold.
SVD_FLOOR = 1e-12


@dataclass(frozen=True)
class TolerancePolicy:
    """Numerical tolerances used throughout the package.

    Attributes:
        eps_unitary: max-norm bound on ``U^dag U - I`` for a matrix to count as
            unitary.
        eps_rank: singular values below ``eps_rank * sigma_max`` count as zero.
        eps_eig: eigenphases closer than this (radians, on the circle) are
            treated as one degenerate eigenvalue.
        eps_match: tolerance for comparing invariants and coordinates.
    """

    eps_unitary: float = 1e-9
    eps_rank: float = 1e-7
    eps_eig: float = 1e-7
    eps_match: float = 1e-8

    def __post_init__(self):
        for name in ("eps_unitary", "eps_rank", "eps_eig", "eps_match"):
            value = getattr(self, name)
            if not value > 0:
                raise ValueError(f"{name} must be strictly positive, got {value!r}")
        if not self.eps_rank > self.eps_unitary:
            raise ValueError("eps_rank must exceed eps_unitary")

    def replace(self, **overrides) -> "TolerancePolicy":
        return replace(self, **overrides)


DEFAULT_TOLERANCE = TolerancePolicy()


def _tol(tol: TolerancePolicy | None) -> TolerancePolicy:
    return DEFAULT_TOLERANCE if tol is None else tol


def unitarity_defect(U: np.ndarray) -> float:
    """Return ``max |U^dag U - I|``."""
    U = np.asarray(U)
    return float(np.max(np.abs(U.conj().T @ U - np.eye(U.shape[0]))))


def is_unitary(U: np.ndarray, tol: TolerancePolicy | None = None) -> bool:
    U = np.asarray(U)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        return False
    return unitarity_defect(U) <= _tol(tol).eps_unitary


def require_unitary(U: np.ndarray, tol: TolerancePolicy | None = None) -> np.ndarray:
    U = np.asarray(U, dtype=complex)
    if U.ndim != 2 or U.shape[0] != U.shape[1]:
        raise NotUnitary(f"expected a square matrix, got shape {U.shape}")
    defect = unitarity_defect(U)
    if defect > _tol(tol).eps_unitary:
        raise NotUnitary(f"matrix is not unitary (max |U^dag U - I| = {defect:.3e})")
    return U


def principal_angle(z) -> np.ndarray | float:
    """Argument of ``z`` in the half-open interval (-pi, pi]."""
    theta = np.angle(z)
    theta = np.where(theta <= -np.pi, np.pi, theta)
    return float(theta) if theta.ndim == 0 else theta


def special_unitarize(U, tol: TolerancePolicy | None = None) -> tuple[np.ndarray, float]:
    """Strip the global phase so the determinant becomes 1.

    Returns ``(U / det(U)**(1/dim), phase)`` where the root is the principal
    one, i.e. ``phase = arg(det U) / dim`` with ``arg`` in (-pi, pi].
    """
    U = require_unitary(U, tol)
    dim = U.shape[0]
    phase = principal_angle(np.linalg.det(U)) / dim
    return U * np.exp(-1j * phase), float(phase)


def eigenphases_unitary(M, tol: TolerancePolicy | None = None) -> np.ndarray:
    """Eigenphases of a unitary matrix in (-pi, pi], ascending, with multiplicity."""
    M = require_unitary(M, tol)
    return np.sort(principal_angle(np.linalg.eigvals(M)))


def _phase_groups(phases, eps: float) -> list[list[int]]:
    """Single-linkage clusters of sorted phases on the circle, as index lists."""
    phases = np.asarray(phases, dtype=float)
    k = len(phases)
    if k == 0:
        return []
    linked = np.diff(phases) <= eps
    groups = [[0]]
    for i in range(1, k):
        if linked[i - 1]:
            groups[-1].append(i)
        else:
            groups.append([i])
    # wrap-around link between the last and first phase
    if len(groups) > 1 and phases[0] + 2 * np.pi - phases[-1] <= eps:
        groups[0] = groups.pop() + groups[0]
    return groups


def cluster_phases(phases, eps_eig: float | None = None) -> list[int]:
    """Multiplicities of numerically coincident phases.

    ``phases`` must be sorted ascending in (-pi, pi]. Phases are merged by
    single linkage with link length ``eps_eig``, treating -pi and pi as
    neighbours.
    """
    eps = DEFAULT_TOLERANCE.eps_eig if eps_eig is None else eps_eig
    return [len(g) for g in _phase_groups(phases, eps)]


def cluster_representatives(phases, eps_eig: float | None = None) -> list[tuple[float, int]]:
    """``(circular mean, multiplicity)`` for each phase cluster."""
    eps = DEFAULT_TOLERANCE.eps_eig if eps_eig is None else eps_eig
    phases = np.asarray(phases, dtype=float)
    out = []
    for g in _phase_groups(phases, eps):
        mean = principal_angle(np.mean(np.exp(1j * phases[g])))
        out.append((float(mean), len(g)))
    return out


def _rank_threshold(s: np.ndarray, eps_rank: float) -> float:
    smax = float(s[0]) if s.size else 0.0
    return max(eps_rank * smax, SVD_FLOOR)


def rank(M, eps_rank: float | None = None) -> int:
    eps = DEFAULT_TOLERANCE.eps_rank if eps_rank is None else eps_rank
    M = np.atleast_2d(np.asarray(M, dtype=float))
    if M.size == 0:
        return 0
    s = np.linalg.svd(M, compute_uv=False)
    return int(np.sum(s > _rank_threshold(s, eps)))


def nullity(M, eps_rank: float | None = None) -> int:
    """Dimension of the kernel of a real matrix.

    Singular values are compared against ``eps_rank * sigma_max`` with an
    absolute floor of ``SVD_FLOOR``. A matrix with zero rows has full nullity.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {M.shape}")
    return M.shape[1] - rank(M, eps_rank)


def kernel_basis(M, eps_rank: float | None = None) -> np.ndarray:
    """Orthonormal basis of ``ker M`` as the columns of the returned array."""
    eps = DEFAULT_TOLERANCE.eps_rank if eps_rank is None else eps_rank
    M = np.asarray(M, dtype=float)
    ncols = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(ncols)
    _, s, vh = np.linalg.svd(M, full_matrices=True)
    r = int(np.sum(s > _rank_threshold(s, eps)))
    return vh[r:].conj().T


def expm_antihermitian(H, tol: TolerancePolicy | None = None) -> np.ndarray:
    """``exp(H)`` for antihermitian ``H`` via the eigendecomposition of ``iH``."""
    H = np.asarray(H, dtype=complex)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise BadGenerator(f"expected a square matrix, got shape {H.shape}")
    if np.max(np.abs(H + H.conj().T), initial=0.0) > _tol(tol).eps_unitary:
        raise BadGenerator("generator is not antihermitian")
    w, V = np.linalg.eigh(1j * H)
    # H = -i V diag(w) V^dag
    return (V * np.exp(-1j * w)) @ V.conj().T
