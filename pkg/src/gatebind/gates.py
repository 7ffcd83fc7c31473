"""Gate catalog, canonical (Cartan) gates, local gates and random sampling.

Qubit 1 is the most significant bit of the computational-basis index, so
``kron(a, b)`` acts with ``a`` on qubit 1 and ``b`` on qubit 2.
"""
from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from functools import reduce
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import BadDim, BadFactor, BadSpec, NotUnitary
from .numkernel import (
    DEFAULT_TOLERANCE,
    TolerancePolicy,
    expm_antihermitian,
    special_unitarize,
    unitarity_defect,
)

I2 = np.eye(2, dtype=complex)
SX = np.array([[0, 1], [1, 0]], dtype=complex)
SY = np.array([[0, -1j], [1j, 0]], dtype=complex)
SZ = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SX, SY, SZ)

XX = np.kron(SX, SX)
YY = np.kron(SY, SY)
ZZ = np.kron(SZ, SZ)

CNOT = np.array(
    [[1, 0, 0, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0]], dtype=complex)

# control on qubit 2, target qubit 1
CNOT_21 = np.array(
    [[1, 0, 0, 0],
     [0, 0, 0, 1],
     [0, 0, 1, 0],
     [0, 1, 0, 0]], dtype=complex)

SWAP = np.array(
    [[1, 0, 0, 0],
     [0, 0, 1, 0],
     [0, 1, 0, 0],
     [0, 0, 0, 1]], dtype=complex)

# Symmetric/antisymmetric projector split: SWAP = P_s - P_a. This root is
# P_s - i P_a, the one whose Makhlin g2 is +1/4.
SQRT_SWAP = 0.5 * np.array(
    [[2, 0, 0, 0],
     [0, 1 - 1j, 1 + 1j, 0],
     [0, 1 + 1j, 1 - 1j, 0],
     [0, 0, 0, 2]], dtype=complex)


@dataclass(frozen=True)
class CanonicalParams:
    """Cartan coordinates ``[c1, c2, c3]`` in radians."""

    c1: float
    c2: float
    c3: float

    def __iter__(self):
        return iter((self.c1, self.c2, self.c3))

    def as_array(self) -> np.ndarray:
        return np.array([self.c1, self.c2, self.c3], dtype=float)

    @classmethod
    def of(cls, c) -> "CanonicalParams":
        if isinstance(c, CanonicalParams):
            return c
        c1, c2, c3 = (float(x) for x in c)
        return cls(c1, c2, c3)

    def close_to(self, other, tol: float) -> bool:
        return bool(np.max(np.abs(self.as_array() - CanonicalParams.of(other).as_array())) <= tol)


@dataclass(frozen=True, eq=False)
class GateMatrix:
    """A unitary on ``n`` qubits, compared up to a global phase."""

    n: int
    matrix: np.ndarray = field(repr=False)
    label: str | None = None

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        dim = 2 ** self.n
        if m.shape != (dim, dim):
            raise BadDim(f"{self.n}-qubit gate needs a {dim}x{dim} matrix, got {m.shape}")
        defect = unitarity_defect(m)
        if defect > DEFAULT_TOLERANCE.eps_unitary:
            raise NotUnitary(f"gate matrix is not unitary (max |U^dag U - I| = {defect:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @classmethod
    def from_matrix(cls, matrix, label: str | None = None) -> "GateMatrix":
        m = np.asarray(matrix, dtype=complex)
        n = int(round(math.log2(m.shape[0]))) if m.ndim == 2 and m.shape[0] > 0 else 0
        if n < 1 or m.shape != (2 ** n, 2 ** n):
            raise BadDim(f"not a qubit-gate shape: {m.shape}")
        return cls(n, m, label)

    @property
    def dim(self) -> int:
        return 2 ** self.n

    def phase_distance(self, other: "GateMatrix") -> float:
        """``max |U - e^{i phi} V|`` with ``phi`` the best Frobenius-norm phase."""
        a = np.asarray(self.matrix)
        b = np.asarray(other.matrix if isinstance(other, GateMatrix) else other)
        if a.shape != b.shape:
            return math.inf
        overlap = np.vdot(b, a)
        phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
        return float(np.max(np.abs(a - phase * b)))

    def equals(self, other, tol: TolerancePolicy | None = None) -> bool:
        eps = (tol or DEFAULT_TOLERANCE).eps_match
        return self.phase_distance(other) <= eps

    def __eq__(self, other):
        if not isinstance(other, GateMatrix):
            return NotImplemented
        return self.equals(other)

    __hash__ = None

    def __matmul__(self, other: "GateMatrix") -> "GateMatrix":
        return GateMatrix(self.n, self.matrix @ other.matrix)

    def dagger(self) -> "GateMatrix":
        return GateMatrix(self.n, self.matrix.conj().T, self.label and f"{self.label}^dag")


@dataclass(frozen=True, eq=False)
class LocalGate:
    """Tensor product of single-qubit special unitaries."""

    factors: tuple

    @property
    def n(self) -> int:
        return len(self.factors)

    @property
    def matrix(self) -> np.ndarray:
        return reduce(np.kron, self.factors)

    def gate(self) -> GateMatrix:
        return GateMatrix(self.n, self.matrix, "local")


class GateKind(enum.Enum):
    IDENTITY = "identity"
    SWAP = "swap"
    CNOT = "cnot"
    DCNOT = "dcnot"
    SQRT_SWAP = "sqrtswap"
    INV_SQRT_SWAP = "invsqrtswap"
    B = "b"
    CONTROLLED_U = "cu"
    SPE = "spe"
    CANONICAL = "canonical"
    FROM_FILE = "file"


_ALIASES = {
    "i": GateKind.IDENTITY, "id": GateKind.IDENTITY, "identity": GateKind.IDENTITY,
    "swap": GateKind.SWAP,
    "cnot": GateKind.CNOT, "cx": GateKind.CNOT,
    "dcnot": GateKind.DCNOT,
    "sqrtswap": GateKind.SQRT_SWAP, "sqrt_swap": GateKind.SQRT_SWAP,
    "invsqrtswap": GateKind.INV_SQRT_SWAP, "inv_sqrt_swap": GateKind.INV_SQRT_SWAP,
    "sqrtswapinv": GateKind.INV_SQRT_SWAP,
    "b": GateKind.B, "bgate": GateKind.B,
    "cu": GateKind.CONTROLLED_U, "controlled-u": GateKind.CONTROLLED_U,
    "controlledu": GateKind.CONTROLLED_U,
    "spe": GateKind.SPE,
    "canonical": GateKind.CANONICAL,
}

_PARAMETRIC = (GateKind.CONTROLLED_U, GateKind.SPE)


@dataclass(frozen=True)
class GateSpec:
    """Description of a catalog gate.

    ``alpha`` is required for the controlled-U and SPE families, ``c`` for
    canonical gates and ``path`` for gates read from a file.
    """

    kind: GateKind
    alpha: float | None = None
    c: CanonicalParams | None = None
    path: str | Path | None = None

    def __post_init__(self):
        if not isinstance(self.kind, GateKind):
            raise BadSpec(f"unknown gate kind {self.kind!r}")
        if (self.alpha is not None) != (self.kind in _PARAMETRIC):
            raise BadSpec(f"alpha must be given exactly for {[k.value for k in _PARAMETRIC]}")
        if (self.c is not None) != (self.kind is GateKind.CANONICAL):
            raise BadSpec("c must be given exactly for canonical gates")
        if (self.path is not None) != (self.kind is GateKind.FROM_FILE):
            raise BadSpec("path must be given exactly for file gates")
        if self.alpha is not None and not math.isfinite(self.alpha):
            raise BadSpec("alpha must be finite")
        if self.c is not None:
            object.__setattr__(self, "c", CanonicalParams.of(self.c))

    @classmethod
    def parse(cls, text: str) -> "GateSpec":
        """Parse ``name`` or ``name:alpha`` (e.g. ``cnot``, ``cu:0.5``)."""
        name, _, arg = text.strip().partition(":")
        kind = _ALIASES.get(name.strip().lower())
        if kind is None or kind is GateKind.CANONICAL:
            raise BadSpec(f"unknown gate name {name!r}")
        if kind in _PARAMETRIC:
            if not arg:
                raise BadSpec(f"gate {name!r} needs a parameter, e.g. {name}:0.5")
            try:
                alpha = float(arg)
            except ValueError:
                raise BadSpec(f"bad parameter {arg!r} for gate {name!r}") from None
            return cls(kind, alpha=alpha)
        if arg:
            raise BadSpec(f"gate {name!r} takes no parameter")
        return cls(kind)


def canonical_gate(c) -> GateMatrix:
    """``exp(i/2 (c1 XX + c2 YY + c3 ZZ))``."""
    c = CanonicalParams.of(c)
    H = 0.5j * (c.c1 * XX + c.c2 * YY + c.c3 * ZZ)
    return GateMatrix(2, expm_antihermitian(H), f"canonical[{c.c1:.6g},{c.c2:.6g},{c.c3:.6g}]")


def build_named(spec: GateSpec) -> GateMatrix:
    """Matrix for a catalog entry."""
    kind = spec.kind
    label = kind.value if spec.alpha is None else f"{kind.value}:{spec.alpha:.12g}"
    if kind is GateKind.IDENTITY:
        return GateMatrix(2, np.eye(4, dtype=complex), label)
    if kind is GateKind.SWAP:
        return GateMatrix(2, SWAP, label)
    if kind is GateKind.CNOT:
        return GateMatrix(2, CNOT, label)
    if kind is GateKind.DCNOT:
        return GateMatrix(2, CNOT_21 @ CNOT, label)
    if kind is GateKind.SQRT_SWAP:
        return GateMatrix(2, SQRT_SWAP, label)
    if kind is GateKind.INV_SQRT_SWAP:
        return GateMatrix(2, SQRT_SWAP.conj().T, label)
    if kind is GateKind.FROM_FILE:
        return load_gate(spec.path)
    if kind is GateKind.B:
        c = (math.pi / 2, math.pi / 4, 0.0)
    elif kind is GateKind.CONTROLLED_U:
        c = (spec.alpha, 0.0, 0.0)
    elif kind is GateKind.SPE:
        c = (math.pi / 2, spec.alpha, 0.0)
    elif kind is GateKind.CANONICAL:
        c = spec.c
    else:  # pragma: no cover
        raise BadSpec(f"unhandled gate kind {kind}")
    g = canonical_gate(c)
    return GateMatrix(2, g.matrix, label if kind is not GateKind.CANONICAL else g.label)


def tensor_local(factors: Sequence, tol: TolerancePolicy | None = None) -> LocalGate:
    """Build a local gate from single-qubit SU(2) factors (qubit 1 first)."""
    eps = (tol or DEFAULT_TOLERANCE).eps_unitary
    checked = []
    for i, f in enumerate(factors):
        f = np.array(f, dtype=complex)
        if f.shape != (2, 2):
            raise BadFactor(f"factor {i} has shape {f.shape}, expected (2, 2)")
        if unitarity_defect(f) > eps or abs(np.linalg.det(f) - 1) > eps:
            raise BadFactor(f"factor {i} is not in SU(2)")
        f.setflags(write=False)
        checked.append(f)
    if not checked:
        raise BadFactor("need at least one factor")
    return LocalGate(tuple(checked))


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def random_su(dim: int, seed=None) -> GateMatrix:
    """Haar-random element of SU(dim).

    ``seed`` may be an integer or a ``numpy.random.Generator``; a generator is
    advanced in place, which is how long sample streams are drawn.
    """
    n = int(round(math.log2(dim))) if dim > 0 else 0
    if n < 1 or 2 ** n != dim:
        raise BadDim(f"dimension must be a power of two, got {dim}")
    u, _ = special_unitarize(_haar_unitary(dim, _rng(seed)))
    return GateMatrix(n, u, "haar")


def random_local(n: int, seed=None) -> LocalGate:
    """``n`` independent Haar-random SU(2) factors."""
    rng = _rng(seed)
    return tensor_local([random_su(2, rng).matrix for _ in range(n)])


def dress(U: GateMatrix, k1: LocalGate, k2: LocalGate) -> GateMatrix:
    """``k1 . U . k2``."""
    if k1.n != U.n or k2.n != U.n:
        raise BadDim("local gates must act on the same number of qubits as U")
    return GateMatrix(U.n, k1.matrix @ U.matrix @ k2.matrix, U.label)


def dump_gate(U: GateMatrix) -> str:
    """Serialize a gate to the JSON gate-file format.

    Entries are written as ``[re, im]`` pairs with 17 significant digits.
    """
    rows = []
    for row in np.asarray(U.matrix):
        pairs = ", ".join(f"[{z.real:.16e}, {z.imag:.16e}]" for z in row)
        rows.append(f"    [{pairs}]")
    return '{\n  "n": %d,\n  "matrix": [\n%s\n  ]\n}\n' % (U.n, ",\n".join(rows))


def save_gate(U: GateMatrix, path) -> None:
    Path(path).write_text(dump_gate(U))


def parse_gate(text: str, label: str | None = None) -> GateMatrix:
    try:
        obj = json.loads(text)
        n = int(obj["n"])
        m = np.array(obj["matrix"], dtype=float)
    except (ValueError, KeyError, TypeError) as exc:
        raise BadSpec(f"malformed gate file: {exc}") from None
    dim = 2 ** n
    if n < 1 or m.shape != (dim, dim, 2):
        raise BadSpec(f"gate file matrix must be {dim}x{dim} [re, im] pairs, got {m.shape}")
    return GateMatrix(n, m[..., 0] + 1j * m[..., 1], label)


def load_gate(path) -> GateMatrix:
    path = Path(path)
    return parse_gate(path.read_text(), label=path.name)
