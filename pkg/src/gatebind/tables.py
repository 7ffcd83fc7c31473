"""Reference values for catalog gates and Weyl-chamber strata, with checkers.

``TABLE1`` lists the canonical coordinates and Makhlin invariants of the
catalog gates (parametric families as functions of alpha); ``TABLE2`` lists
the eta value of every stratum together with sample points on it.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import GateBindError
from .eta import eta_analytic, eta_numeric, eta_spectral, eta_table
from .gates import GateKind, GateSpec, build_named, canonical_gate
from .invariants import (
    WeylRegion,
    canonical_from_gate,
    classify_region,
    makhlin_from_gate,
    weyl_reduce,
)
from .numkernel import DEFAULT_TOLERANCE, TolerancePolicy

PI = math.pi
ALPHAS = (PI / 6, PI / 3, 2 * PI / 5)
TABLE1_TOL = 1e-9


@dataclass(frozen=True)
class Table1Row:
    name: str
    kind: GateKind
    c: Callable[[float | None], tuple[float, float, float]]
    g: Callable[[float | None], tuple[float, float, float]]
    parametric: bool = False


TABLE1 = (
    Table1Row("I", GateKind.IDENTITY, lambda a: (0, 0, 0), lambda a: (1, 0, 3)),
    Table1Row("SWAP", GateKind.SWAP, lambda a: (PI / 2, PI / 2, PI / 2), lambda a: (-1, 0, -3)),
    Table1Row("CNOT", GateKind.CNOT, lambda a: (PI / 2, 0, 0), lambda a: (0, 0, 1)),
    Table1Row("DCNOT", GateKind.DCNOT, lambda a: (PI / 2, PI / 2, 0), lambda a: (0, 0, -1)),
    Table1Row("sqrtSWAP", GateKind.SQRT_SWAP,
              lambda a: (PI / 4, PI / 4, PI / 4), lambda a: (0, 0.25, 0)),
    Table1Row("sqrtSWAP^-1", GateKind.INV_SQRT_SWAP,
              lambda a: (3 * PI / 4, PI / 4, PI / 4), lambda a: (0, -0.25, 0)),
    Table1Row("B", GateKind.B, lambda a: (PI / 2, PI / 4, 0), lambda a: (0, 0, 0)),
    Table1Row("controlled-U", GateKind.CONTROLLED_U,
              lambda a: (a, 0, 0),
              lambda a: (math.cos(a) ** 2, 0, 2 * math.cos(a) ** 2 + 1), parametric=True),
    Table1Row("SPE", GateKind.SPE,
              lambda a: (PI / 2, a, 0), lambda a: (0, 0, math.cos(2 * a)), parametric=True),
)


@dataclass(frozen=True)
class Stratum:
    region: WeylRegion
    pattern: str
    eta: int
    samples: tuple[tuple[float, float, float], ...]


TABLE2 = (
    Stratum(WeylRegion.VertexIdentity, "[0,0,0]=[pi,0,0]", 0,
            ((0, 0, 0), (PI, 0, 0), (0, 0, PI))),
    Stratum(WeylRegion.VertexSwap, "[pi/2,pi/2,pi/2]", 0,
            ((PI / 2, PI / 2, PI / 2), (-PI / 2, PI / 2, PI / 2), (PI / 2, 3 * PI / 2, PI / 2))),
    Stratum(WeylRegion.EdgeOA3, "[x,x,x]", 3,
            ((0.3, 0.3, 0.3), (PI / 4, PI / 4, PI / 4), (1.2, 1.2, 1.2))),
    Stratum(WeylRegion.EdgeA1A3, "[pi-x,x,x]", 3,
            ((PI - 0.3, 0.3, 0.3), (3 * PI / 4, PI / 4, PI / 4), (PI - 1.2, 1.2, 1.2))),
    Stratum(WeylRegion.EdgeOA1, "[x,0,0]=[pi-x,0,0]", 4,
            ((0.3, 0, 0), (PI / 2, 0, 0), (PI - 1.2, 0, 0))),
    Stratum(WeylRegion.EdgeA2A3, "[pi/2,pi/2,x]", 4,
            ((PI / 2, PI / 2, 0), (PI / 2, PI / 2, 0.3), (PI / 2, PI / 2, 1.2))),
    Stratum(WeylRegion.FaceOA1A3, "[x,x,y]", 5,
            ((1.2, 1.2, 0.3), (0.9, 0.9, 0.0), (1.4, 1.4, 1.0))),
    Stratum(WeylRegion.FaceOA2A3, "[x,y,y]", 5,
            ((1.2, 0.5, 0.5), (2.0, 0.6, 0.6), (0.9, 0.3, 0.3))),
    Stratum(WeylRegion.FaceA1A2A3, "[pi-x,x,y]", 5,
            ((PI - 1.2, 1.2, 0.4), (PI - 0.9, 0.9, 0.5), (PI - 1.4, 1.4, 1.0))),
    Stratum(WeylRegion.Generic, "all other points", 6,
            ((0.9, 0.4, 0.2), (PI / 2, PI / 4, 0), (1.1, 0.7, 0.3))),
)


@dataclass
class CheckResult:
    table: str
    name: str
    passed: bool
    detail: str = ""
    values: dict = field(default_factory=dict)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.table} {self.name}" + (f"  {self.detail}" if self.detail else "")


def _maxdiff(a, b) -> float:
    return float(np.max(np.abs(np.asarray(tuple(a), float) - np.asarray(tuple(b), float))))


def verify_table1(tol: TolerancePolicy | None = None, match: float = TABLE1_TOL) -> list[CheckResult]:
    """Rebuild every catalog row and compare extracted (c, g) with the reference."""
    tol = tol or DEFAULT_TOLERANCE
    results = []
    for row in TABLE1:
        for alpha in (ALPHAS if row.parametric else (None,)):
            name = row.name if alpha is None else f"{row.name}(alpha={alpha:.6f})"
            try:
                U = build_named(GateSpec(row.kind, alpha=alpha))
                c = canonical_from_gate(U, tol)
                g = makhlin_from_gate(U)
                dc, dg = _maxdiff(c, row.c(alpha)), _maxdiff(g, row.g(alpha))
                ok = dc <= match and dg <= match
                results.append(CheckResult("table1", name, ok, f"|dc|={dc:.1e} |dg|={dg:.1e}",
                                           {"c": tuple(c), "g": tuple(g)}))
            except GateBindError as exc:
                results.append(CheckResult("table1", name, False, f"{type(exc).__name__}: {exc}"))
    return results


def stratum_etas(c, tol: TolerancePolicy | None = None) -> dict:
    """eta of the class of ``c`` by every available route."""
    tol = tol or DEFAULT_TOLERANCE
    U = canonical_gate(c)
    region = classify_region(weyl_reduce(c, tol.eps_match), tol.eps_match)
    return {
        "region": region,
        "numeric": eta_numeric(U, tol).eta,
        "analytic": eta_analytic(c, tol).eta,
        "spectral": eta_spectral(U, tol).eta,
        "spectral_c": eta_spectral(c, tol).eta,
        "table": eta_table(region),
    }


def verify_table2(tol: TolerancePolicy | None = None) -> list[CheckResult]:
    """Sample each stratum and check every eta route against the reference value."""
    tol = tol or DEFAULT_TOLERANCE
    results = []
    for st in TABLE2:
        for c in st.samples:
            name = f"{st.region.name} {st.pattern} c=[{c[0]:.4f},{c[1]:.4f},{c[2]:.4f}]"
            try:
                etas = stratum_etas(c, tol)
            except GateBindError as exc:
                results.append(CheckResult("table2", name, False, f"{type(exc).__name__}: {exc}"))
                continue
            values = [v for k, v in etas.items() if k != "region"]
            ok = etas["region"] is st.region and all(v == st.eta for v in values)
            detail = (f"expected eta={st.eta} region={st.region.name}; got region="
                      f"{etas['region'].name} " + " ".join(f"{k}={v}" for k, v in etas.items()
                                                          if k != "region"))
            results.append(CheckResult("table2", name, ok, detail, etas))
    return results
