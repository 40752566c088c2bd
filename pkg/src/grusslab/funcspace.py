"""Function corpus, oscillations, moduli of continuity and their concave envelopes.

Everything in this module is pure and immutable after construction, so values
can be shared freely between worker threads.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

DEFAULT_GRID = 1001
DEFAULT_XMAX = 50.0
DEFAULT_SEED = 90210

__all__ = [
    "RealFunction",
    "NodeSet",
    "ModulusEnvelope",
    "uniform_grid",
    "oscillation",
    "range_on_grid",
    "modulus",
    "modulus_profile",
    "concave_majorant",
    "envelope_of",
    "cached_envelope",
    "standard_corpus",
    "CORPUS_NAMES",
]


@dataclass(frozen=True)
class RealFunction:
    """A named scalar function on a closed interval; the right end may be +inf.

    ``bounded`` marks members whose values stay inside ``value_range`` on the
    whole domain.  Unbounded members (e.g. the identity on [0, inf)) carry
    ``value_range=None`` and are only ranged over working grids.
    """

    name: str
    domain: tuple[float, float]
    fn: Callable
    bounded: bool = True
    value_range: tuple[float, float] | None = None

    def __post_init__(self):
        lo, hi = self.domain
        if not lo < hi:
            raise ValueError(f"empty domain for {self.name!r}: {self.domain}")

    def __call__(self, x):
        return self.fn(x)

    def values(self, xs) -> np.ndarray:
        """Evaluate on an array, falling back to a scalar loop if needed."""
        arr = np.asarray(xs, dtype=float)
        try:
            out = np.asarray(self.fn(arr), dtype=float)
        except (TypeError, ValueError):
            out = np.array([float(self.fn(float(v))) for v in arr.ravel()])
            return out.reshape(arr.shape)
        if out.shape != arr.shape:
            out = np.broadcast_to(out, arr.shape).astype(float)
        return out

    def contains(self, x: float, tol: float = 1e-12) -> bool:
        lo, hi = self.domain
        return lo - tol <= x <= hi + tol


@dataclass(frozen=True)
class NodeSet:
    """A finite, strictly increasing set of real nodes."""

    nodes: np.ndarray

    def __post_init__(self):
        arr = np.atleast_1d(np.asarray(self.nodes, dtype=float)).copy()
        if arr.ndim != 1 or arr.size == 0:
            raise ValueError("NodeSet requires a nonempty 1-d node collection")
        if arr.size > 1 and not np.all(np.diff(arr) > 0):
            raise ValueError("nodes must be strictly increasing (distinct)")
        arr.flags.writeable = False
        object.__setattr__(self, "nodes", arr)

    def __len__(self) -> int:
        return int(self.nodes.size)

    @property
    def lo(self) -> float:
        return float(self.nodes[0])

    @property
    def hi(self) -> float:
        return float(self.nodes[-1])


def uniform_grid(lo: float, hi: float, n: int = DEFAULT_GRID) -> NodeSet:
    if n < 2:
        raise ValueError("grid needs at least 2 points")
    return NodeSet(np.linspace(lo, hi, n))


def _check_inside(f: RealFunction, nodes: np.ndarray) -> None:
    lo, hi = f.domain
    if nodes[0] < lo - 1e-12 or nodes[-1] > hi + 1e-12:
        raise ValueError(
            f"nodes [{nodes[0]}, {nodes[-1]}] leave the domain of {f.name!r}"
        )


def oscillation(f: RealFunction, nodes: NodeSet) -> float:
    """Largest |f(x_k) - f(x_l)| over node pairs, i.e. max - min of node values."""
    if len(nodes) == 0:
        raise ValueError("oscillation over an empty node set")
    _check_inside(f, nodes.nodes)
    vals = f.values(nodes.nodes)
    return float(np.max(vals) - np.min(vals))


def range_on_grid(f: RealFunction, grid: NodeSet) -> tuple[float, float]:
    """(min, max) of f over the grid points."""
    _check_inside(f, grid.nodes)
    vals = f.values(grid.nodes)
    return float(np.min(vals)), float(np.max(vals))


def modulus(f: RealFunction, t: float, grid: NodeSet) -> float:
    """Grid modulus of continuity: sup |f(x)-f(y)| over grid pairs with |x-y| <= t."""
    if t < 0:
        raise ValueError("modulus needs t >= 0")
    if t == 0:
        return 0.0
    xs = grid.nodes
    _check_inside(f, xs)
    ys = f.values(xs)
    best = 0.0
    # row-blocked pair scan keeps the temporary below a few MB for big grids
    step = max(1, 4_000_000 // max(1, xs.size))
    for i0 in range(0, xs.size, step):
        i1 = min(xs.size, i0 + step)
        dx = np.abs(xs[i0:i1, None] - xs[None, :])
        dy = np.abs(ys[i0:i1, None] - ys[None, :])
        dy[dx > t + 1e-15] = 0.0
        m = float(dy.max()) if dy.size else 0.0
        best = max(best, m)
    return best


def modulus_profile(f: RealFunction, grid: NodeSet) -> tuple[np.ndarray, np.ndarray]:
    """Sampled modulus at every lag of a uniform grid.

    Returns (ts, omega) with ts[k] = k*h and omega[k] the running maximum of
    |f(x_{i+k}) - f(x_i)|; omega is nondecreasing and omega[0] = 0 by
    construction.
    """
    xs = grid.nodes
    if xs.size < 2:
        raise ValueError("profile needs at least 2 grid points")
    gaps = np.diff(xs)
    h = float(gaps[0])
    if np.max(np.abs(gaps - h)) > 1e-9 * max(1.0, abs(h)):
        raise ValueError("modulus_profile requires a uniform grid")
    ys = f.values(xs)
    n = xs.size
    omega = np.zeros(n)
    for k in range(1, n):
        omega[k] = float(np.max(np.abs(ys[k:] - ys[:-k])))
    omega = np.maximum.accumulate(omega)
    ts = h * np.arange(n)
    return ts, omega


@dataclass(frozen=True)
class ModulusEnvelope:
    """Sampled modulus together with its least concave majorant.

    The hull is stored as vertex arrays; between vertices the majorant is
    linear, beyond the diameter it stays at the full-diameter modulus.
    """

    ts: np.ndarray
    omega: np.ndarray
    hull_t: np.ndarray
    hull_y: np.ndarray

    @property
    def diameter(self) -> float:
        return float(self.ts[-1])

    def hull_value(self, t):
        t = np.asarray(t, dtype=float)
        out = np.interp(np.clip(t, 0.0, self.diameter), self.hull_t, self.hull_y)
        return float(out) if out.ndim == 0 else out

    def omega_value(self, t):
        t = np.asarray(t, dtype=float)
        out = np.interp(np.clip(t, 0.0, self.diameter), self.ts, self.omega)
        return float(out) if out.ndim == 0 else out


def concave_majorant(ts, omega) -> ModulusEnvelope:
    """Least concave piecewise-linear function dominating the samples.

    Computed as the upper convex-position hull of the sampled graph by a
    monotone-chain scan; the hull always contains (0, 0) and the rightmost
    sample, so the majorant agrees with the modulus at the full diameter.
    """
    ts = np.asarray(ts, dtype=float)
    om = np.asarray(omega, dtype=float)
    if ts.ndim != 1 or ts.shape != om.shape or ts.size == 0:
        raise ValueError("ts and omega must be matching nonempty 1-d arrays")
    if ts.size > 1 and np.any(np.diff(ts) <= 0):
        raise ValueError("ts must be strictly increasing")
    if abs(ts[0]) > 1e-15 or abs(om[0]) > 1e-12:
        raise ValueError("samples must start at t=0 with omega(0)=0")
    hull: list[tuple[float, float]] = []
    for p in zip(ts.tolist(), om.tolist()):
        while len(hull) >= 2:
            o, a = hull[-2], hull[-1]
            # pop a when it lies on or below the chord o -> p
            if (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0]) >= 0.0:
                hull.pop()
            else:
                break
        hull.append(p)
    ht = np.array([p[0] for p in hull])
    hy = np.array([p[1] for p in hull])
    return ModulusEnvelope(ts=ts, omega=om, hull_t=ht, hull_y=hy)


def envelope_of(f: RealFunction, grid: NodeSet) -> ModulusEnvelope:
    ts, om = modulus_profile(f, grid)
    return concave_majorant(ts, om)


@functools.lru_cache(maxsize=256)
def cached_envelope(f: RealFunction, grid_n: int = DEFAULT_GRID,
                    x_max: float = DEFAULT_XMAX) -> ModulusEnvelope:
    """Envelope on the member's working interval (infinite domains cut at x_max)."""
    lo, hi = f.domain
    if math.isinf(hi):
        hi = x_max
    return envelope_of(f, uniform_grid(lo, hi, grid_n))


# ---------------------------------------------------------------------------
# corpus


CORPUS_NAMES = (
    "e0", "e1", "e2", "hat", "absmid", "sinpi",
    "expneg", "halfstep", "dirichlet", "randlip",
)


def _sin_range(lo: float, hi: float) -> tuple[float, float]:
    # candidate extrema of sin(pi x): endpoints plus interior half-integers
    cands = [lo, hi]
    k = math.ceil(lo - 0.5)
    while k + 0.5 <= hi:
        cands.append(k + 0.5)
        k += 1
    vals = [math.sin(math.pi * c) for c in cands]
    return min(vals), max(vals)


def _hat_range(lo: float, hi: float) -> tuple[float, float]:
    vals = [lo * (1 - lo), hi * (1 - hi)]
    if lo <= 0.5 <= hi:
        vals.append(0.25)
    return min(vals), max(vals)


def standard_corpus(domain: tuple[float, float] = (0.0, 1.0),
                    seed: int = DEFAULT_SEED,
                    x_max: float = DEFAULT_XMAX) -> dict[str, RealFunction]:
    """The fixed ten-member corpus adapted to a domain.

    Members (published formulas, midpoint m = (lo+hi)/2 on finite domains):
      e0 = 1, e1 = x, e2 = x^2, hat = x(1-x), absmid = |x - m|,
      sinpi = sin(pi x), expneg = exp(-x), halfstep = floor(2x)/2,
      dirichlet = 1 (the Dirichlet indicator restricted to rational nodes;
      every binary float is rational, hence constant 1), randlip = a seeded
      Lipschitz-1 piecewise-linear function.

    On [0, inf) the polynomial-growth members are flagged unbounded, absmid is
    anchored at 1/2 and randlip is constant beyond x_max.
    """
    lo, hi = float(domain[0]), float(domain[1])
    infinite = math.isinf(hi)
    eff_hi = x_max if infinite else hi
    mid = 0.5 if infinite else 0.5 * (lo + hi)

    rng = np.random.default_rng(seed)
    n_seg = 32
    bps = np.linspace(lo, eff_hi, n_seg + 1)
    slopes = rng.uniform(-1.0, 1.0, size=n_seg)
    vals = np.concatenate([[0.0], np.cumsum(slopes * np.diff(bps))])

    def randlip_eval(x, _bps=bps, _vals=vals):
        return np.interp(x, _bps, _vals)

    members = {
        "e0": RealFunction("e0", domain, lambda x: np.ones_like(np.asarray(x, dtype=float)),
                           bounded=True, value_range=(1.0, 1.0)),
        "e1": RealFunction("e1", domain, lambda x: np.asarray(x, dtype=float),
                           bounded=not infinite,
                           value_range=None if infinite else (lo, hi)),
        "e2": RealFunction("e2", domain, lambda x: np.square(np.asarray(x, dtype=float)),
                           bounded=not infinite,
                           value_range=None if infinite else (
                               0.0 if lo <= 0.0 <= hi else min(lo * lo, hi * hi),
                               max(lo * lo, hi * hi))),
        "hat": RealFunction("hat", domain, lambda x: np.asarray(x, dtype=float) * (1.0 - np.asarray(x, dtype=float)),
                            bounded=not infinite,
                            value_range=None if infinite else _hat_range(lo, hi)),
        "absmid": RealFunction("absmid", domain, lambda x, _m=mid: np.abs(np.asarray(x, dtype=float) - _m),
                               bounded=not infinite,
                               value_range=None if infinite else (0.0, max(hi - mid, mid - lo))),
        "sinpi": RealFunction("sinpi", domain, lambda x: np.sin(np.pi * np.asarray(x, dtype=float)),
                              bounded=True,
                              value_range=(-1.0, 1.0) if infinite else _sin_range(lo, hi)),
        "expneg": RealFunction("expneg", domain, lambda x: np.exp(-np.asarray(x, dtype=float)),
                               bounded=True,
                               value_range=(0.0 if infinite else math.exp(-hi), math.exp(-lo))),
        "halfstep": RealFunction("halfstep", domain, lambda x: np.floor(2.0 * np.asarray(x, dtype=float)) / 2.0,
                                 bounded=not infinite,
                                 value_range=None if infinite else (math.floor(2 * lo) / 2, math.floor(2 * hi) / 2)),
        "dirichlet": RealFunction("dirichlet", domain, lambda x: np.ones_like(np.asarray(x, dtype=float)),
                                  bounded=True, value_range=(1.0, 1.0)),
        "randlip": RealFunction("randlip", domain, randlip_eval,
                                bounded=True, value_range=(float(vals.min()), float(vals.max()))),
    }
    return members
