"""Local invariants of two-qubit gates.

Magic-basis machinery, the symmetric unitary ``M(U) = U_B^T U_B``, Makhlin
invariants, extraction of canonical (Cartan) coordinates, reduction into the
Weyl chamber and classification of chamber points into strata.
"""
from __future__ import annotations

import enum
import io
import itertools
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import BadDim, ImaginaryG2, NoConsistentAssignment, NotReduced, ReductionDiverged
from .gates import YY, CanonicalParams, GateMatrix, canonical_gate
from .numkernel import (
    DEFAULT_TOLERANCE,
    TolerancePolicy,
    eigenphases_unitary,
    principal_angle,
    special_unitarize,
)

__all__ = [
    "Q",
    "CanonicalParams",
    "MakhlinInvariants",
    "WeylRegion",
    "SurfaceSample",
    "EquivalenceResult",
    "magic_transform",
    "m_matrix",
    "m_spectrum",
    "gamma2_spectrum",
    "canonical_phases",
    "makhlin_from_gate",
    "makhlin_from_canonical",
    "canonical_from_gate",
    "weyl_reduce",
    "is_reduced",
    "classify_region",
    "locally_equivalent",
    "weyl_surface_samples",
    "write_surface_csv",
]

HALF_PI = math.pi / 2

Q = np.array(
    [[1, 0, 0, 1],
     [0, -1j, -1j, 0],
     [0, 1, -1, 0],
     [-1j, 0, 0, 1j]], dtype=complex) / math.sqrt(2)

# |G2| imaginary residue above which the input is rejected.
G2_IMAG_LIMIT = 1e-6
# Coordinates this close to pi after the mod-pi step are folded to 0.
_PI_SNAP = 1e-14
# The base reflection c1 -> pi - c1 is exact only at c3 = 0; it changes g2 by
# at most c3, so it is applied only when c3 is at roundoff level.
BASE_ZERO = 1e-13
_MAX_REDUCTION_STEPS = 16


@dataclass(frozen=True)
class MakhlinInvariants:
    """``(g1, g2, g3) = (Re G1, Im G1, G2)``."""

    g1: float
    g2: float
    g3: float

    def __iter__(self):
        return iter((self.g1, self.g2, self.g3))

    def as_array(self) -> np.ndarray:
        return np.array([self.g1, self.g2, self.g3], dtype=float)

    def distance(self, other: "MakhlinInvariants") -> float:
        return float(np.max(np.abs(self.as_array() - other.as_array())))

    def close_to(self, other: "MakhlinInvariants", tol: float | None = None) -> bool:
        eps = DEFAULT_TOLERANCE.eps_match if tol is None else tol
        return self.distance(other) <= eps


class WeylRegion(enum.Enum):
    """Strata of the Weyl chamber, one per row of the eta classification."""

    VertexIdentity = "O/A1"
    VertexSwap = "A3"
    EdgeOA3 = "OA3"
    EdgeA1A3 = "A1A3"
    EdgeOA1 = "OA1"
    EdgeA2A3 = "A2A3"
    FaceOA1A3 = "OA1A3"
    FaceOA2A3 = "OA2A3"
    FaceA1A2A3 = "A1A2A3"
    Generic = "interior"


@dataclass(frozen=True)
class SurfaceSample:
    s: float
    t: float
    g: MakhlinInvariants


@dataclass(frozen=True)
class EquivalenceResult:
    """Verdict of :func:`locally_equivalent` together with its evidence."""

    equivalent: bool
    makhlin_u: MakhlinInvariants
    makhlin_v: MakhlinInvariants
    canonical_u: CanonicalParams
    canonical_v: CanonicalParams

    def __bool__(self):
        return self.equivalent


def _two_qubit(U) -> np.ndarray:
    m = U.matrix if isinstance(U, GateMatrix) else np.asarray(U, dtype=complex)
    if m.shape != (4, 4):
        raise BadDim(f"expected a two-qubit (4x4) gate, got shape {m.shape}")
    return np.asarray(m, dtype=complex)


def magic_transform(U, direction: str = "forward") -> np.ndarray:
    """``Q U Q^dag`` (forward) or ``Q^dag U Q`` (inverse)."""
    m = _two_qubit(U)
    if direction == "forward":
        return Q @ m @ Q.conj().T
    if direction == "inverse":
        return Q.conj().T @ m @ Q
    raise ValueError(f"direction must be 'forward' or 'inverse', not {direction!r}")


def m_matrix(U) -> np.ndarray:
    """``M(U) = U_B^T U_B``; symmetric and unitary."""
    ub = magic_transform(U)
    return ub.T @ ub


def m_spectrum(U, tol: TolerancePolicy | None = None) -> np.ndarray:
    """Eigenphases of ``M(U)``, ascending in (-pi, pi]."""
    return eigenphases_unitary(m_matrix(U), tol)


def gamma2_spectrum(U, tol: TolerancePolicy | None = None) -> np.ndarray:
    """Eigenphases of ``U (Y x Y) U^T (Y x Y)``.

    Same multiset as :func:`m_spectrum`; kept as an independent route to the
    spectrum that never touches the magic basis.
    """
    m = _two_qubit(U)
    return eigenphases_unitary(m @ YY @ m.T @ YY, tol)


def canonical_phases(c) -> np.ndarray:
    """Eigenphases of ``M`` for the canonical gate at ``c``, sorted in (-pi, pi]."""
    c1, c2, c3 = CanonicalParams.of(c)
    raw = np.array([c1 + c2 - c3, c1 - c2 + c3, -c1 + c2 + c3, -(c1 + c2 + c3)])
    return np.sort(principal_angle(np.exp(1j * raw)))


def makhlin_from_gate(U) -> MakhlinInvariants:
    """Makhlin invariants from ``tr M`` and ``tr M^2``, normalised by ``det U``.

    Accepts any unitary in U(4); the determinant absorbs the global phase.
    """
    m = _two_qubit(U)
    M = m_matrix(m)
    det = np.linalg.det(m)
    tr = np.trace(M)
    G1 = tr * tr / (16 * det)
    G2 = (tr * tr - np.trace(M @ M)) / (4 * det)
    if abs(G2.imag) > G2_IMAG_LIMIT:
        raise ImaginaryG2(f"Im G2 = {G2.imag:.3e}; input is not unitary to working precision")
    return MakhlinInvariants(float(G1.real), float(G1.imag), float(G2.real))


def makhlin_from_canonical(c) -> MakhlinInvariants:
    c1, c2, c3 = CanonicalParams.of(c)
    cc = (math.cos(c1) * math.cos(c2) * math.cos(c3)) ** 2
    ss = (math.sin(c1) * math.sin(c2) * math.sin(c3)) ** 2
    g1 = cc - ss
    g2 = 0.25 * math.sin(2 * c1) * math.sin(2 * c2) * math.sin(2 * c3)
    g3 = 4 * cc - 4 * ss - math.cos(2 * c1) * math.cos(2 * c2) * math.cos(2 * c3)
    return MakhlinInvariants(g1, g2, g3)


def _fold_mod_pi(x: float) -> float:
    r = math.fmod(x, math.pi)
    if r < 0:
        r += math.pi
    if math.pi - r <= _PI_SNAP:
        r = 0.0
    return r


def weyl_reduce(c, eps: float | None = None) -> CanonicalParams:
    """Map any canonical triple into the Weyl chamber.

    Only moves that preserve the local equivalence class are used: shifting a
    single coordinate by pi, permuting coordinates, and the paired flip
    ``(c1, c2) -> (pi - c1, pi - c2)``. On the base ``c3 = 0`` (up to
    roundoff) the triangle with ``c1 > pi/2`` is reflected onto ``c1 <= pi/2``.
    """
    eps = DEFAULT_TOLERANCE.eps_match if eps is None else eps
    v = [float(x) for x in CanonicalParams.of(c)]
    if not all(math.isfinite(x) for x in v):
        raise ReductionDiverged(f"non-finite canonical parameters {v}")
    for _ in range(_MAX_REDUCTION_STEPS):
        v = sorted((_fold_mod_pi(x) for x in v), reverse=True)
        if v[0] + v[1] > math.pi + eps:
            v = [math.pi - v[0], math.pi - v[1], v[2]]
            continue
        break
    else:
        raise ReductionDiverged(f"no chamber point after {_MAX_REDUCTION_STEPS} steps from {c}")
    if v[2] <= BASE_ZERO and v[0] > HALF_PI + eps:
        v[0] = math.pi - v[0]
        v.sort(reverse=True)
    return CanonicalParams(*v)


def is_reduced(c, eps: float | None = None) -> bool:
    eps = DEFAULT_TOLERANCE.eps_match if eps is None else eps
    c1, c2, c3 = CanonicalParams.of(c)
    in_chamber = (
        math.pi + eps >= c1
        and c1 + eps >= c2
        and c2 + eps >= c3
        and c3 >= -eps
        and math.pi - c1 + eps >= c2
    )
    if not in_chamber:
        return False
    return c3 > BASE_ZERO or c1 <= HALF_PI + eps


def canonical_from_gate(U, tol: TolerancePolicy | None = None) -> CanonicalParams:
    """Reduced canonical coordinates of a two-qubit gate.

    Every assignment of the eigenphases of ``M(U)`` to the four spectral slots
    (and both branches of the fourth root of ``det U``) is tried; the reduced
    candidate whose Makhlin invariants agree with those computed directly from
    ``U`` wins.
    """
    tol = tol or DEFAULT_TOLERANCE
    m = _two_qubit(U)
    su, _ = special_unitarize(m, tol)
    target = makhlin_from_gate(su)
    phases = m_spectrum(su, tol)
    best, best_err = None, math.inf
    for shift in (0.0, math.pi):
        shifted = phases + shift
        for a, b, c, _d in itertools.permutations(shifted):
            cand = weyl_reduce(((a + b) / 2, (a + c) / 2, (b + c) / 2), tol.eps_match)
            err = makhlin_from_canonical(cand).distance(target)
            if err < best_err:
                best, best_err = cand, err
    if best is None or best_err > tol.eps_match:
        raise NoConsistentAssignment(
            f"no eigenphase assignment reproduces the Makhlin invariants (best error {best_err:.3e})")
    return best


def classify_region(c, eps: float | None = None) -> WeylRegion:
    """Stratum of a reduced chamber point.

    Coordinate equalities are decided within ``eps``; a point within
    tolerance of a lower-dimensional stratum is assigned to it.
    """
    eps = DEFAULT_TOLERANCE.eps_match if eps is None else eps
    c = CanonicalParams.of(c)
    if not is_reduced(c, eps):
        raise NotReduced(f"{tuple(c)} is not a reduced Weyl-chamber point")
    c1, c2, c3 = c

    def eq(a, b):
        return abs(a - b) <= eps

    if eq(c2, 0) and eq(c3, 0) and (eq(c1, 0) or eq(c1, math.pi)):
        return WeylRegion.VertexIdentity
    if eq(c1, HALF_PI) and eq(c2, HALF_PI) and eq(c3, HALF_PI):
        return WeylRegion.VertexSwap
    if eq(c1, c2) and eq(c2, c3):
        return WeylRegion.EdgeOA3
    if eq(c2, c3) and eq(c1 + c2, math.pi):
        return WeylRegion.EdgeA1A3
    if eq(c2, 0) and eq(c3, 0):
        return WeylRegion.EdgeOA1
    if eq(c1, HALF_PI) and eq(c2, HALF_PI):
        return WeylRegion.EdgeA2A3
    if eq(c1, c2):
        return WeylRegion.FaceOA1A3
    if eq(c2, c3):
        return WeylRegion.FaceOA2A3
    if eq(c1 + c2, math.pi):
        return WeylRegion.FaceA1A2A3
    return WeylRegion.Generic


def locally_equivalent(U, V, tol: float | None = None) -> EquivalenceResult:
    """Decide ``U ~ V`` by comparing Makhlin invariants within ``tol``."""
    gu, gv = makhlin_from_gate(U), makhlin_from_gate(V)
    eps = DEFAULT_TOLERANCE.eps_match if tol is None else tol
    return EquivalenceResult(
        equivalent=gu.close_to(gv, eps),
        makhlin_u=gu,
        makhlin_v=gv,
        canonical_u=canonical_from_gate(U),
        canonical_v=canonical_from_gate(V),
    )


def _surface_point(s: float, t: float) -> MakhlinInvariants:
    cs, ss = math.cos(s), math.sin(s)
    ct, st = math.cos(t), math.sin(t)
    g1 = cs * cs * ct ** 4 - ss * ss * st ** 4
    g2 = 0.25 * math.sin(2 * s) * math.sin(2 * t) ** 2
    g3 = 4 * g1 - math.cos(2 * s) * math.cos(2 * t) ** 2
    return MakhlinInvariants(g1, g2, g3)


def weyl_surface_samples(ns: int, nt: int) -> list[SurfaceSample]:
    """Grid over the chamber boundary in Makhlin coordinates.

    ``s`` spans [0, pi] with ``ns`` points and ``t`` spans [0, pi/2] with ``nt``
    points; rows are ordered t-major, then s.
    """
    if ns < 2 or nt < 2:
        raise ValueError("ns and nt must both be at least 2")
    out = []
    for t in np.linspace(0.0, HALF_PI, nt):
        for s in np.linspace(0.0, math.pi, ns):
            out.append(SurfaceSample(float(s), float(t), _surface_point(float(s), float(t))))
    return out


def write_surface_csv(samples, dest) -> int:
    """Write samples as ``s,t,g1,g2,g3`` rows; ``dest`` is a path or text stream."""
    buf = io.StringIO()
    buf.write("s,t,g1,g2,g3\n")
    for smp in samples:
        vals = (smp.s, smp.t, smp.g.g1, smp.g.g2, smp.g.g3)
        buf.write(",".join(f"{v:.17g}" for v in vals) + "\n")
    text = buf.getvalue()
    if isinstance(dest, (str, Path)):
        Path(dest).write_text(text)
    else:
        dest.write(text)
    return len(samples)


def reduced_point(U, tol: TolerancePolicy | None = None) -> tuple[CanonicalParams, WeylRegion]:
    """Convenience: reduced coordinates and their stratum."""
    c = canonical_from_gate(U, tol)
    return c, classify_region(c, (tol or DEFAULT_TOLERANCE).eps_match)


def canonical_representative(c) -> GateMatrix:
    """The canonical gate at the reduced image of ``c``."""
    return canonical_gate(weyl_reduce(c))
