"""The binding invariant eta: how many local degrees of freedom a gate binds.

Three independent routes are provided for two-qubit gates:

* :func:`eta_numeric` builds the real matrix of the adjoint action of ``U``
  on the local generators and counts kernel dimensions (works for n = 1..3);
* :func:`eta_analytic` evaluates the closed-form 2x2 blocks of that matrix
  for a canonical gate;
* :func:`eta_spectral` counts coincident eigenvalues of ``M(U)``.

:func:`eta_table` gives the value per Weyl-chamber stratum, and
:func:`gate_count_lower_bound` turns eta into a gate-count bound.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache, reduce

import numpy as np

from .errors import BadDim, ImaginaryW, UnboundedGate, UsageError
from .gates import I2, PAULIS, CanonicalParams, GateMatrix
from .invariants import WeylRegion, canonical_phases, m_spectrum, weyl_reduce
from .numkernel import DEFAULT_TOLERANCE, TolerancePolicy, cluster_phases, kernel_basis, nullity

W_IMAG_ASSERT = 1e-9
W_IMAG_LIMIT = 1e-6

_PAULI_NAMES = "xyz"


@dataclass(frozen=True)
class GeneratorBasis:
    """Orthonormal basis of su(2^n) split into local and nonlocal generators.

    Local generators are ordered qubit-major, ``[x1, y1, z1, x2, y2, z2, ...]``,
    so that for two qubits local index ``i`` pairs with ``i + 3``. Nonlocal
    generators are the Pauli strings of weight >= 2 in lexicographic order
    (identity first), e.g. ``xx, xy, xz, yx, ...`` for two qubits.
    """

    n: int
    locals: np.ndarray
    nonlocals: np.ndarray
    local_labels: tuple[str, ...]
    nonlocal_labels: tuple[str, ...]

    @property
    def all(self) -> np.ndarray:
        return np.concatenate([self.locals, self.nonlocals])

    def gram(self) -> np.ndarray:
        X = self.all
        return np.einsum("iab,jab->ij", X.conj(), X)


@lru_cache(maxsize=None)
def generator_basis(n: int) -> GeneratorBasis:
    if n not in (1, 2, 3):
        raise BadDim(f"generator basis supported for n in 1..3, got {n}")
    paulis = (I2,) + PAULIS
    norm = 1j / math.sqrt(2 ** n)
    locals_, local_labels = [], []
    for q in range(n):
        for a in range(1, 4):
            idx = [0] * n
            idx[q] = a
            locals_.append(norm * reduce(np.kron, (paulis[k] for k in idx)))
            local_labels.append(f"{_PAULI_NAMES[a - 1]}{q + 1}")
    nonlocals, nonlocal_labels = [], []
    for idx in itertools.product(range(4), repeat=n):
        if sum(k != 0 for k in idx) < 2:
            continue
        nonlocals.append(norm * reduce(np.kron, (paulis[k] for k in idx)))
        nonlocal_labels.append("".join("i" if k == 0 else _PAULI_NAMES[k - 1] for k in idx))
    loc = np.array(locals_)
    non = np.array(nonlocals).reshape(-1, 2 ** n, 2 ** n)
    loc.setflags(write=False)
    non.setflags(write=False)
    return GeneratorBasis(n, loc, non, tuple(local_labels), tuple(nonlocal_labels))


@dataclass(frozen=True)
class WMatrix:
    """Adjoint action of a gate on the local generators, split into row blocks."""

    W_L: np.ndarray
    W_N: np.ndarray

    @property
    def stacked(self) -> np.ndarray:
        return np.vstack([self.W_L, self.W_N])


@dataclass(frozen=True)
class EtaReport:
    eta: int
    dim_ker_WN: int
    dim_intersection: int
    method: str
    n: int = 2
    block_breakdown: tuple[int, ...] | None = None

    def __post_init__(self):
        if self.eta != 3 * self.n - self.dim_ker_WN + self.dim_intersection:
            raise ValueError("inconsistent eta report")
        if not 0 <= self.eta <= 3 * self.n:
            raise ValueError(f"eta={self.eta} outside [0, {3 * self.n}]")


def _matrix(U) -> np.ndarray:
    return np.asarray(U.matrix if isinstance(U, GateMatrix) else U, dtype=complex)


def w_matrix(U, basis: GeneratorBasis | None = None) -> WMatrix:
    """``W_ij = tr(U X_j^dag U^dag X_i)`` for local ``X_j`` and all ``X_i``."""
    m = _matrix(U)
    if basis is None:
        n = int(round(math.log2(m.shape[0]))) if m.ndim == 2 and m.shape[0] > 0 else 0
        if n < 1 or m.shape != (2 ** n, 2 ** n):
            raise BadDim(f"not a qubit-gate shape: {m.shape}")
        basis = generator_basis(n)
    if m.shape != (2 ** basis.n, 2 ** basis.n):
        raise BadDim(f"gate of shape {m.shape} does not match a {basis.n}-qubit basis")
    conj = m @ basis.locals.conj().transpose(0, 2, 1) @ m.conj().T
    W = np.einsum("jab,iba->ij", conj, basis.all)
    residue = float(np.max(np.abs(W.imag), initial=0.0))
    if residue > W_IMAG_LIMIT:
        raise ImaginaryW(f"W has imaginary residue {residue:.3e}")
    W = np.ascontiguousarray(W.real)
    k = 3 * basis.n
    return WMatrix(W[:k], W[k:])


def _eta_from_w(w: WMatrix, n: int, eps_rank: float) -> EtaReport:
    ker = kernel_basis(w.W_N, eps_rank)
    dim_ker = ker.shape[1]
    inter = nullity(w.W_L @ ker, eps_rank) if dim_ker else 0
    return EtaReport(3 * n - dim_ker + inter, dim_ker, inter, "numeric", n)


def eta_numeric(U, tol: TolerancePolicy | None = None) -> EtaReport:
    """eta from the kernel dimensions of the W matrix (rank-nullity)."""
    tol = tol or DEFAULT_TOLERANCE
    m = _matrix(U)
    w = w_matrix(m)
    n = int(round(math.log2(m.shape[0])))
    return _eta_from_w(w, n, tol.eps_rank)


# Index pairs (j, k) with eps_{ijk} = 1, for i = 1, 2, 3.
_CYCLIC = ((1, 2), (2, 0), (0, 1))

# Rows of W_N carrying block N^i, listed in the row order of the closed form.
_N_ROWS = {0: ("zy", "yz"), 1: ("zx", "xz"), 2: ("yx", "xy")}


def analytic_blocks(c) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Closed-form 2x2 blocks ``L^i`` and ``N^i`` of W for the canonical gate at ``c``."""
    c1, c2, c3 = CanonicalParams.of(c)
    cos, sin = math.cos, math.sin

    def sym(a, b):
        return np.array([[a, b], [b, a]])

    L = [
        sym(cos(c2) * cos(c3), sin(c2) * sin(c3)),
        sym(cos(c1) * cos(c3), sin(c1) * sin(c3)),
        sym(cos(c1) * cos(c2), sin(c1) * sin(c2)),
    ]
    N = [
        sym(sin(c2) * cos(c3), -cos(c2) * sin(c3)),
        sym(-sin(c1) * cos(c3), cos(c1) * sin(c3)),
        sym(sin(c1) * cos(c2), -cos(c1) * sin(c2)),
    ]
    return L, N


def w_blocks(w: WMatrix) -> tuple[list[np.ndarray], list[np.ndarray]]:
    """Pull the 2x2 blocks ``L^i``, ``N^i`` out of a two-qubit W matrix."""
    if w.W_L.shape != (6, 6):
        raise BadDim("block extraction is defined for two-qubit W matrices only")
    labels = generator_basis(2).nonlocal_labels
    L, N = [], []
    for i in range(3):
        cols = [i, i + 3]
        L.append(w.W_L[np.ix_(cols, cols)])
        rows = [labels.index(r) for r in _N_ROWS[i]]
        N.append(w.W_N[np.ix_(rows, cols)])
    return L, N


def eta_analytic(c, tol: TolerancePolicy | None = None) -> EtaReport:
    """eta of the canonical class ``c`` from the nullities of the ``N^i`` blocks."""
    eps = (tol or DEFAULT_TOLERANCE).eps_match
    r = weyl_reduce(c, eps)
    v = r.as_array()
    _, N = analytic_blocks(r)
    breakdown = []
    for i, (j, k) in enumerate(_CYCLIC):
        if np.max(np.abs(N[i])) <= eps:
            breakdown.append(2)
        elif abs(math.sin(v[j] + v[k]) * math.sin(v[j] - v[k])) <= eps:
            breakdown.append(1)
        else:
            breakdown.append(0)
    leaked = sum(breakdown)
    return EtaReport(6 - leaked, leaked, 0, "analytic", 2, tuple(breakdown))


def _is_triple(x) -> bool:
    return isinstance(x, CanonicalParams) or np.shape(x) == (3,)


def eta_spectral(U_or_c, tol: TolerancePolicy | None = None) -> EtaReport:
    """eta from eigenvalue multiplicities of ``M(U)``.

    An ``m``-fold eigenvalue leaks ``m(m-1)/2`` local degrees of freedom.
    Accepts either a two-qubit gate or a canonical triple.
    """
    tol = tol or DEFAULT_TOLERANCE
    if _is_triple(U_or_c):
        phases = canonical_phases(U_or_c)
    else:
        m = _matrix(U_or_c)
        if m.shape != (4, 4):
            raise BadDim(f"spectral eta needs a two-qubit gate, got shape {m.shape}")
        phases = m_spectrum(m, tol)
    leaked = sum(k * (k - 1) // 2 for k in cluster_phases(phases, tol.eps_eig))
    return EtaReport(6 - leaked, leaked, 0, "spectral", 2)


ETA_BY_REGION = {
    WeylRegion.VertexIdentity: 0,
    WeylRegion.VertexSwap: 0,
    WeylRegion.EdgeOA3: 3,
    WeylRegion.EdgeA1A3: 3,
    WeylRegion.EdgeOA1: 4,
    WeylRegion.EdgeA2A3: 4,
    WeylRegion.FaceOA1A3: 5,
    WeylRegion.FaceOA2A3: 5,
    WeylRegion.FaceA1A2A3: 5,
    WeylRegion.Generic: 6,
}


def eta_table(region: WeylRegion) -> int:
    return ETA_BY_REGION[WeylRegion(region)]


def eta_table_report(region: WeylRegion) -> EtaReport:
    eta = eta_table(region)
    return EtaReport(eta, 6 - eta, 0, "table", 2)


def gate_count_lower_bound(n: int, eta: int) -> int:
    """Minimum uses of a two-qubit gate binding ``eta`` local degrees of freedom
    needed for a generic ``n``-qubit gate: ``ceil((4^n - 3n - 1) / eta)``."""
    if n < 2:
        raise UsageError(f"lower bound needs n >= 2 qubits, got {n}")
    if eta < 0:
        raise UsageError(f"eta must be nonnegative, got {eta}")
    if eta == 0:
        raise UnboundedGate("gate binds no local degrees of freedom; no finite lower bound")
    return -(-(4 ** n - 3 * n - 1) // eta)
