"""Right-hand-side bound families and their evaluation into BoundResult records.

Bound names used throughout reports:

  new_osc            pointwise oscillation bound, (1 - sum w^2)/2 for positive
                     weights, the absolute pair sum for signed ones
  new_osc_family     the per-family closed-form coefficient majorizing new_osc
  new_osc_degree     the degree-only majorant n/(2(n+1)) where stated
  gruss_quarter      (M-m)(P-p)/4 over what the functional reads
  mercer             min((M-m) L|g-G|, (P-p) L|f-F|)/2
  classical_ws       second-moment bound via least concave majorants
  classical_ws_uniform  its x-free form where one is stated
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import special
from .funcspace import (RealFunction, cached_envelope, oscillation,
                        range_on_grid)
from .operators import PointFunctional, chebyshev_T

__all__ = [
    "BoundResult",
    "gruss_quarter",
    "mercer_bound",
    "classical_ws_bound",
    "classical_ws_uniform",
    "new_bound_positive",
    "new_bound_signed",
    "specialized_rhs",
    "margin_allowance",
]

BASE_REL_TOL = 1e-9


@dataclass(frozen=True)
class BoundResult:
    """One (operator, f, g, x) evaluation: |T| against every applicable bound."""

    operator: str
    n: int
    x: float
    f: str
    g: str
    lhs: float
    rhs: dict[str, float]
    margins: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.margins:
            object.__setattr__(
                self, "margins", {k: v - self.lhs for k, v in self.rhs.items()}
            )

    def to_dict(self) -> dict:
        return {
            "operator": self.operator,
            "n": self.n,
            "x": self.x,
            "f": self.f,
            "g": self.g,
            "lhs": self.lhs,
            "rhs": dict(sorted(self.rhs.items())),
            "margins": dict(sorted(self.margins.items())),
        }


def gruss_quarter(m: float, M: float, p: float, P: float) -> float:
    """(M - m)(P - p)/4 for value ranges m <= f <= M, p <= g <= P."""
    if m > M or p > P:
        raise ValueError("need m <= M and p <= P")
    return 0.25 * (M - m) * (P - p)


def mercer_bound(L: PointFunctional, f: RealFunction, g: RealFunction,
                 ranges: tuple[tuple[float, float], tuple[float, float]]) -> float:
    """min((M-m) L|g-G|, (P-p) L|f-F|)/2 with F = Lf, G = Lg; positive L only."""
    if not L.positive:
        raise ValueError("the mean-deviation bound needs a positive functional")
    (m, M), (p, P) = ranges
    if m > M or p > P:
        raise ValueError("need m <= M and p <= P")
    fv = f.values(L.nodes)
    gv = g.values(L.nodes)
    w = L.weights
    F = float(w @ fv)
    G = float(w @ gv)
    dev_f = float(w @ np.abs(fv - F))
    dev_g = float(w @ np.abs(gv - G))
    return 0.5 * min((M - m) * dev_g, (P - p) * dev_f)


_WS_FAMILIES = ("bernstein", "sdelta", "king")


def classical_ws_bound(family: str, n: int, x: float, f: RealFunction,
                       g: RealFunction, grid_n: int = 1001) -> float:
    """Least-concave-majorant bound (1/4) w~(f; 2 sqrt(M2)) w~(g; 2 sqrt(M2))."""
    if family not in _WS_FAMILIES:
        raise ValueError(f"no second-moment form stated for family {family!r}")
    m2 = special.second_moment(family, n, x)
    s = 2.0 * math.sqrt(m2)
    wf = cached_envelope(f, grid_n).hull_value(s)
    wg = cached_envelope(g, grid_n).hull_value(s)
    return 0.25 * wf * wg


def classical_ws_uniform(family: str, n: int, f: RealFunction, g: RealFunction,
                         grid_n: int = 1001) -> float:
    """x-free majorant of the classical bound: step 1/sqrt(n) resp. 1/n."""
    if family == "bernstein":
        s = 1.0 / math.sqrt(n)
    elif family == "sdelta":
        s = 1.0 / n
    else:
        raise ValueError(f"no x-free classical form stated for family {family!r}")
    wf = cached_envelope(f, grid_n).hull_value(s)
    wg = cached_envelope(g, grid_n).hull_value(s)
    return 0.25 * wf * wg


def new_bound_positive(L: PointFunctional, f: RealFunction, g: RealFunction) -> float:
    """(1 - sum w^2)/2 * osc(f) * osc(g) over the functional's nodes."""
    if not L.positive:
        raise ValueError("use new_bound_signed for signed functionals")
    coef = 0.5 * (1.0 - L.sum_squares())
    nodes = L.node_set
    return coef * oscillation(f, nodes) * oscillation(g, nodes)


def new_bound_signed(L: PointFunctional, f: RealFunction, g: RealFunction) -> float:
    """osc(f) * osc(g) * sum_{k<l} |w_k w_l|, via ((sum|w|)^2 - sum w^2)/2."""
    coef = 0.5 * (L.sum_abs() ** 2 - L.sum_squares())
    nodes = L.node_set
    return coef * oscillation(f, nodes) * oscillation(g, nodes)


def specialized_rhs(family: str, n: int, x: float | None = None) -> float:
    """Per-family closed-form coefficient multiplying osc(f) * osc(g).

    Majorizes the pointwise coefficient (1 - sum w^2)/2 at every admissible x
    (up to truncation slack for the infinite families).
    """
    if family == "bernstein" or family == "bbh":
        return 0.5 * (1.0 - special.central_binom_scaled(n))
    if family == "sdelta":
        return 0.25
    if family == "szasz":
        return 0.5
    if family == "baskakov":
        if x is None:
            return 0.5
        return 0.5 * (1.0 - special.theta_baskakov(n, x))
    if family == "king":
        return 0.25 if n == 1 else n / (2.0 * (n + 1.0))
    raise ValueError(f"no specialized oscillation coefficient for {family!r}")


def margin_allowance(lhs: float, rhs: float, *,
                     tail_eps: float = 0.0,
                     osc_f: float = 0.0,
                     osc_g: float = 0.0,
                     quad_n: int | None = None) -> float:
    """Declared slack for one margin check.

    Base relative tolerance, plus a truncation allowance for the infinite
    families (the tail deficit enters T through node values, and every corpus
    member satisfies |f| <= 1 + osc over the truncated nodes), plus a
    quadrature allowance for the mixed-measure example.
    """
    allowed = BASE_REL_TOL * max(1.0, abs(lhs), abs(rhs))
    if tail_eps > 0.0:
        allowed += 3.0 * tail_eps * (osc_f + 1.0) * (osc_g + 1.0)
    if quad_n is not None:
        allowed += (8.0 / quad_n) * (1.0 + osc_f * osc_g)
    return allowed


def node_ranges(L: PointFunctional, f: RealFunction, g: RealFunction):
    """Value ranges of f and g over what the functional reads."""
    nodes = L.node_set
    return range_on_grid(f, nodes), range_on_grid(g, nodes)


def evaluate_cell(operator: str, n: int, x: float, L: PointFunctional,
                  f: RealFunction, g: RealFunction,
                  family: str | None = None,
                  grid_n: int = 1001) -> BoundResult:
    """All applicable bounds for one functional and corpus pair.

    Convenience used by the CLI one-shot path; the sweep in :mod:`verify`
    computes the same quantities in vectorized form.
    """
    lhs = abs(chebyshev_T(L, f, g))
    rhs: dict[str, float] = {}
    rhs["new_osc"] = (new_bound_positive(L, f, g) if L.positive
                      else new_bound_signed(L, f, g))
    if L.positive:
        rf, rg = node_ranges(L, f, g)
        rhs["gruss_quarter"] = gruss_quarter(rf[0], rf[1], rg[0], rg[1])
        rhs["mercer"] = mercer_bound(L, f, g, (rf, rg))
    if family in ("bernstein", "sdelta", "szasz", "baskakov", "bbh", "king"):
        nodes = L.node_set
        osc_fg = oscillation(f, nodes) * oscillation(g, nodes)
        rhs["new_osc_family"] = specialized_rhs(family, n, x) * osc_fg
        if family in ("bernstein", "king"):
            rhs["new_osc_degree"] = (n / (2.0 * (n + 1.0))) * osc_fg
    if family in _WS_FAMILIES:
        rhs["classical_ws"] = classical_ws_bound(family, n, x, f, g, grid_n)
        if family in ("bernstein", "sdelta"):
            rhs["classical_ws_uniform"] = classical_ws_uniform(family, n, f, g, grid_n)
    return BoundResult(operator=operator, n=n, x=x, f=f.name, g=g.name,
                       lhs=lhs, rhs=rhs)
