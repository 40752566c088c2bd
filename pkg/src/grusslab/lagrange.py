"""Lagrange interpolation at Chebyshev nodes: basis, Lebesgue function, bounds.

The basis is evaluated in barycentric form specialized to first-kind Chebyshev
nodes (weights proportional to (-1)^k sin t_k); the quotient form through the
node polynomial is unstable near the nodes, so node hits are detected exactly
and replaced by point evaluation.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .bounds import BoundResult
from .funcspace import NodeSet, RealFunction, cached_envelope, oscillation
from .operators import PointFunctional, chebyshev_T

__all__ = [
    "ChebyshevGrid",
    "chebyshev_grid",
    "lagrange_basis",
    "basis_weights",
    "lebesgue_function",
    "lebesgue_constant",
    "pair_product_sum",
    "lagrange_new_bound",
    "lagrange_classical_bound",
    "hermann_ratio",
    "rivlin_gap",
]

_NODE_HIT = 1e-14

#: classical two-sided estimate on ||L_n|| - (2/pi) ln n at Chebyshev nodes
RIVLIN_LO = 0.9625
RIVLIN_HI = 1.0


@dataclass(frozen=True)
class ChebyshevGrid:
    """First-kind Chebyshev nodes cos((2k-1) pi / (2n)), sorted ascending."""

    n: int
    nodes: np.ndarray
    bary: np.ndarray

    def __post_init__(self):
        self.nodes.flags.writeable = False
        self.bary.flags.writeable = False


@functools.lru_cache(maxsize=512)
def chebyshev_grid(n: int) -> ChebyshevGrid:
    if int(n) != n or n < 1:
        raise ValueError("need a positive number of nodes")
    k = np.arange(1, n + 1)
    theta = (2.0 * k - 1.0) * math.pi / (2.0 * n)   # decreasing cos
    nodes = np.cos(theta)[::-1].copy()
    # barycentric weights up to an irrelevant common factor: alternating sines
    sines = np.sin(theta)[::-1]
    bary = sines * np.where(np.arange(n) % 2 == 0, 1.0, -1.0)
    return ChebyshevGrid(n=n, nodes=nodes, bary=bary)


def basis_weights(n: int, x: float) -> np.ndarray:
    """Fundamental-function values l_k(x); rows sum to 1 by construction."""
    grid = chebyshev_grid(n)
    if n == 1:
        return np.array([1.0])
    diff = x - grid.nodes
    hit = np.abs(diff) < _NODE_HIT
    if np.any(hit):
        out = np.zeros(n)
        out[int(np.argmax(hit))] = 1.0
        return out
    r = grid.bary / diff
    return r / np.sum(r)


def lagrange_basis(n: int, x: float) -> PointFunctional:
    """The interpolation functional at x as a (generally signed) PointFunctional."""
    if not -1.0 <= x <= 1.0:
        raise ValueError("lagrange_basis requires x in [-1, 1]")
    grid = chebyshev_grid(n)
    w = basis_weights(n, x)
    return PointFunctional(grid.nodes, w, positive=bool(np.min(w) >= -1e-15))


def lebesgue_function(n: int, x: float) -> float:
    """Lambda_n(x) = sum |l_k(x)|; >= 1 everywhere, = 1 at the nodes."""
    return float(np.sum(np.abs(basis_weights(n, x))))


def _lebesgue_on(n: int, xs: np.ndarray) -> np.ndarray:
    grid = chebyshev_grid(n)
    if n == 1:
        return np.ones_like(xs)
    diff = xs[:, None] - grid.nodes[None, :]
    hit = np.abs(diff) < _NODE_HIT
    diff[hit] = 1.0  # placeholder; hit rows overwritten below
    r = grid.bary[None, :] / diff
    lam = np.abs(r).sum(axis=1) / np.abs(r.sum(axis=1))
    lam[hit.any(axis=1)] = 1.0
    return lam


@functools.lru_cache(maxsize=512)
def lebesgue_constant(n: int, grid_size: int = 4097) -> float:
    """max of Lambda_n over [-1, 1]: coarse grid plus golden-section refinement."""
    if grid_size < 129:
        raise ValueError("grid_size must be at least 129")
    if n == 1:
        return 1.0
    xs = np.linspace(-1.0, 1.0, grid_size)
    lam = _lebesgue_on(n, xs)
    i = int(np.argmax(lam))
    lo = xs[max(i - 1, 0)]
    hi = xs[min(i + 1, grid_size - 1)]
    best = float(lam[i])
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = lebesgue_function(n, c), lebesgue_function(n, d)
    for _ in range(90):
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = lebesgue_function(n, c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = lebesgue_function(n, d)
        if b - a < 1e-13:
            break
    return max(best, fc, fd)


def pair_product_sum(n: int, x: float) -> float:
    """sum_{k<m} |l_k(x) l_m(x)| via the half-difference of Lambda^2 and sum l^2."""
    w = basis_weights(n, x)
    lam = float(np.sum(np.abs(w)))
    ssq = float(np.dot(w, w))
    return max(0.0, 0.5 * (lam * lam - ssq))


def rivlin_gap(n: int, grid_size: int = 4097) -> float:
    """||L_n|| - (2/pi) ln n; lands in (0.9625, 1) for n >= 2."""
    return lebesgue_constant(n, grid_size) - (2.0 / math.pi) * math.log(n)


def lagrange_new_bound(n: int, f: RealFunction, g: RealFunction,
                       x: float) -> BoundResult:
    """Signed-functional oscillation bound |T| <= osc(f) osc(g) sum |l_k l_m|."""
    L = lagrange_basis(n, x)
    nodes = NodeSet(chebyshev_grid(n).nodes)
    lhs = abs(chebyshev_T(L, f, g))
    rhs = oscillation(f, nodes) * oscillation(g, nodes) * pair_product_sum(n, x)
    return BoundResult(operator=f"lagrange_cheb:{n}", n=n, x=x,
                       f=f.name, g=g.name, lhs=lhs, rhs={"new_osc": rhs})


def lagrange_classical_bound(n: int, f: RealFunction, g: RealFunction,
                             grid_n: int = 1001) -> dict[str, float]:
    """The x-free norm-form bound and its logarithmic majorants.

    ``classical_norm``: (1/4) ||L_n|| (1 + ||L_n||) w~(f;2) w~(g;2).
    ``classical_log``: the (2/pi^2) log^2 majorant the norm chain yields.
    ``classical_log_stated``: the looser (2/pi) log^2 variant, kept so both
    printed forms of the estimate are on record.
    """
    wf = cached_envelope(f, grid_n).hull_value(2.0)
    wg = cached_envelope(g, grid_n).hull_value(2.0)
    lam = lebesgue_constant(n)
    ln = math.log(n)
    out = {
        "classical_norm": 0.25 * lam * (1.0 + lam) * wf * wg,
        "classical_log": 0.5 * (1.0 + (3.0 / math.pi) * ln
                                + (2.0 / math.pi ** 2) * ln * ln) * wf * wg,
        "classical_log_stated": 0.5 * (1.0 + (3.0 / math.pi) * ln
                                       + (2.0 / math.pi) * ln * ln) * wf * wg,
    }
    return out


def hermann_ratio(n: int, grid_size: int = 1001) -> float:
    """Diagnostic for the lower estimate on sum l_k^2.

    Minimum over the grid of sum l_k^2(x) / (1 + cos^2(n t) pi^2/6) with
    x = cos t.  The literature bound holds with an unspecified constant, so
    this ratio is reported, never asserted.
    """
    xs = np.linspace(-1.0, 1.0, grid_size)
    ts = np.arccos(np.clip(xs, -1.0, 1.0))
    best = math.inf
    for x, t in zip(xs, ts):
        w = basis_weights(n, x)
        ssq = float(np.dot(w, w))
        denom = 1.0 + math.cos(n * t) ** 2 * (math.pi ** 2 / 6.0)
        best = min(best, ssq / denom)
    return best
