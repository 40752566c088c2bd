"""Point functionals for the operator families and the Chebyshev functional.

Every family is realized as a :class:`PointFunctional`: the nodes the
functional reads plus the weights it attaches to them at an evaluation point.
Infinite families (Szasz, Baskakov) are truncated at a declared tail mass;
weights are built by multiplicative ratio recurrences seeded at the
distribution mode, which stays in range where a plain start at k=0 would
underflow (e.g. exp(-nx) for nx beyond ~745).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .funcspace import NodeSet, RealFunction, oscillation, uniform_grid

__all__ = [
    "PointFunctional",
    "OperatorSpec",
    "FAMILIES",
    "bernstein_at",
    "sdelta_at",
    "szasz_at",
    "baskakov_at",
    "bbh_at",
    "r_star",
    "king_at",
    "two_point",
    "measure_example_T",
    "apply",
    "chebyshev_T",
    "pairwise_identity",
    "parse_operator_spec",
]

_SUM_TOL = 1e-10
_NEG_TOL = 1e-12

FAMILIES = (
    "bernstein", "sdelta", "szasz", "baskakov", "bbh",
    "king", "two_point", "measure_example", "lagrange_cheb",
)


@dataclass(frozen=True)
class PointFunctional:
    """Nodes and weights of a normalized discrete functional.

    Invariants checked at construction: nodes distinct, weights aligned,
    |sum(weights) - 1| within tail_mass_bound plus rounding, and nonnegative
    weights whenever ``positive`` is set.
    """

    nodes: np.ndarray
    weights: np.ndarray
    positive: bool
    tail_mass_bound: float = 0.0

    def __post_init__(self):
        nodes = np.atleast_1d(np.asarray(self.nodes, dtype=float)).copy()
        weights = np.atleast_1d(np.asarray(self.weights, dtype=float)).copy()
        if nodes.shape != weights.shape or nodes.ndim != 1 or nodes.size == 0:
            raise ValueError("nodes and weights must be matching nonempty 1-d arrays")
        if nodes.size > 1 and np.min(np.diff(np.sort(nodes))) <= 0.0:
            raise ValueError("functional nodes must be distinct")
        total = float(np.sum(weights))
        if abs(total - 1.0) > self.tail_mass_bound + _SUM_TOL:
            raise ValueError(
                f"weights sum to {total!r}, outside 1 +/- {self.tail_mass_bound + _SUM_TOL}"
            )
        if self.positive and float(np.min(weights)) < -_NEG_TOL:
            raise ValueError("positive functional with a negative weight")
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)

    @property
    def node_set(self) -> NodeSet:
        order = np.argsort(self.nodes)
        return NodeSet(self.nodes[order])

    def sum_squares(self) -> float:
        return float(np.dot(self.weights, self.weights))

    def sum_abs(self) -> float:
        return float(np.sum(np.abs(self.weights)))


@dataclass(frozen=True)
class OperatorSpec:
    """CLI-expressible operator description ``family:n[:param]``."""

    family: str
    n: int = 1
    param: float | None = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown operator family {self.family!r}")
        if self.n < 1:
            raise ValueError("degree n must be >= 1")
        if self.family in ("two_point", "measure_example"):
            if self.param is None or not 0.0 <= self.param <= 1.0:
                raise ValueError(f"{self.family} requires a parameter a in [0, 1]")

    def spec_string(self) -> str:
        if self.param is None:
            return f"{self.family}:{self.n}"
        return f"{self.family}:{self.n}:{self.param:g}"


def parse_operator_spec(text: str) -> OperatorSpec:
    parts = text.split(":")
    if not 1 <= len(parts) <= 3:
        raise ValueError(f"cannot parse operator spec {text!r}")
    family = parts[0]
    n = int(parts[1]) if len(parts) > 1 and parts[1] else 1
    param = float(parts[2]) if len(parts) > 2 else None
    return OperatorSpec(family=family, n=n, param=param)


# ---------------------------------------------------------------------------
# weight builders


def _binomial_weights(n: int, p: float) -> np.ndarray:
    """Binomial(n, p) masses by symmetric multiplicative ratio recurrence."""
    if not 0.0 <= p <= 1.0:
        raise ValueError("binomial parameter must lie in [0, 1]")
    w = np.zeros(n + 1)
    if p == 0.0:
        w[0] = 1.0
        return w
    if p == 1.0:
        w[n] = 1.0
        return w
    if p <= 0.5:
        q = 1.0 - p
        ratios = (p / q) * (n - np.arange(n)) / np.arange(1.0, n + 1)
        w = q ** n * np.concatenate(([1.0], np.cumprod(ratios)))
    else:
        w = _binomial_weights(n, 1.0 - p)[::-1].copy()
    return w


def _mode_seeded_weights(log_w_mode: float, mode: int, kmax: int,
                         up_ratio, down_ratio) -> np.ndarray:
    """Masses for k = 0..kmax from the mode outward via ratio products."""
    wm = math.exp(log_w_mode)
    parts = [np.array([wm])]
    if mode > 0:
        down = wm * np.cumprod(down_ratio(np.arange(mode, 0, -1.0)))
        parts.insert(0, down[::-1])
    if kmax > mode:
        up = wm * np.cumprod(up_ratio(np.arange(float(mode), float(kmax))))
        parts.append(up)
    return np.concatenate(parts)


_KCAP = 5_000_000


def _truncate(w: np.ndarray, tail_eps: float, up_ratio) -> tuple[np.ndarray, float]:
    """Cut at the first index whose remaining mass is below tail_eps.

    If the initial window does not yet accumulate 1 - tail_eps (slowly
    decaying tails, e.g. nearly geometric weights), it is grown by continuing
    the upward ratio recurrence.  Long recurrences can leave a rounding
    deficit of order 1e-11 that no amount of true tail can close; extension
    stops once the gained mass no longer closes the gap, and the achieved
    deficit is reported as the tail bound instead.
    """
    c = np.cumsum(w)
    while 1.0 - c[-1] > tail_eps:
        if w.size > _KCAP:
            raise ArithmeticError("truncation window exceeded the hard cap")
        start = float(w.size - 1)
        chunk = w.size // 2 + 64
        ext = w[-1] * np.cumprod(up_ratio(np.arange(start, start + chunk)))
        gain = float(np.sum(ext))
        if not np.isfinite(gain) or gain <= 0.0:
            break
        w = np.concatenate([w, ext])
        c = np.concatenate([c, c[-1] + np.cumsum(ext)])
        if 1.0 - c[-1] > tail_eps and gain < 0.25 * (1.0 - c[-1]):
            break
    k = int(np.searchsorted(c, 1.0 - tail_eps))
    k = min(k, w.size - 1)
    tail = max(tail_eps, 1.0 - float(c[k]))
    return w[: k + 1], tail


def _poisson_weights(lam: float, tail_eps: float) -> tuple[np.ndarray, float]:
    if lam <= 0.0:
        return np.array([1.0]), 0.0
    kmax = int(lam + 12.0 * math.sqrt(lam) + 50.0)
    mode = min(int(lam), kmax)
    log_wm = -lam + mode * math.log(lam) - math.lgamma(mode + 1)
    up_ratio = lambda k: lam / (k + 1.0)         # w_{k+1} = w_k * lam/(k+1)
    w = _mode_seeded_weights(
        log_wm, mode, kmax,
        up_ratio=up_ratio,
        down_ratio=lambda k: k / lam,            # w_{k-1} = w_k * k/lam
    )
    return _truncate(w, tail_eps, up_ratio)


def _negbin_weights(n: int, x: float, tail_eps: float) -> tuple[np.ndarray, float]:
    if x <= 0.0:
        return np.array([1.0]), 0.0
    p = x / (1.0 + x)
    mean = n * x
    kmax = int(mean + 15.0 * math.sqrt(mean * (1.0 + x)) + 60.0)
    mode = min(int((n - 1) * x), kmax) if n > 1 else 0
    log_wm = (gammaln(n + mode) - gammaln(mode + 1) - gammaln(n)
              + mode * math.log(p) - n * math.log1p(x))
    up_ratio = lambda k: p * (n + k) / (k + 1.0)
    w = _mode_seeded_weights(
        log_wm, mode, kmax,
        up_ratio=up_ratio,
        down_ratio=lambda k: k / (p * (n + k - 1.0)),
    )
    return _truncate(w, tail_eps, up_ratio)


# ---------------------------------------------------------------------------
# families


def bernstein_at(n: int, x: float) -> PointFunctional:
    """Bernstein basis masses at x: nodes k/n, weights C(n,k) x^k (1-x)^(n-k)."""
    _check_degree(n)
    if not 0.0 <= x <= 1.0:
        raise ValueError("bernstein_at requires x in [0, 1]")
    nodes = np.arange(n + 1) / n
    return PointFunctional(nodes, _binomial_weights(n, x), positive=True)


def _sdelta_cell(n: int, x: float) -> tuple[int, float]:
    """Knot cell and local coordinate for piecewise-linear interpolation.

    Returns (k, u) with x = (k + u)/n, u in [0, 1); u snaps to the nearest
    knot when n*x sits within a few ulps of an integer so that knot hits stay
    exact interpolation.
    """
    m = n * x
    k = int(math.floor(m))
    u = m - k
    snap = 32.0 * np.finfo(float).eps * max(1.0, abs(m))
    if u <= snap and k >= 0:
        return k, 0.0
    if 1.0 - u <= snap:
        return k + 1, 0.0
    return k, u


def sdelta_at(n: int, x: float) -> PointFunctional:
    """Hat-function masses of piecewise-linear interpolation at equidistant knots."""
    _check_degree(n)
    if not 0.0 <= x <= 1.0:
        raise ValueError("sdelta_at requires x in [0, 1]")
    k, u = _sdelta_cell(n, x)
    if u == 0.0:
        return PointFunctional(np.array([x]), np.array([1.0]), positive=True)
    nodes = np.array([k / n, (k + 1) / n])
    weights = np.array([1.0 - u, u])
    return PointFunctional(nodes, weights, positive=True)


def szasz_at(n: int, x: float, tail_eps: float = 1e-12) -> PointFunctional:
    """Truncated Poisson masses: nodes k/n, weights exp(-nx) (nx)^k / k!."""
    _check_degree(n)
    if x < 0.0:
        raise ValueError("szasz_at requires x >= 0")
    if tail_eps <= 0.0:
        raise ValueError("tail_eps must be positive")
    w, tail = _poisson_weights(n * x, tail_eps)
    nodes = np.arange(w.size) / n
    return PointFunctional(nodes, w, positive=True, tail_mass_bound=tail)


def baskakov_at(n: int, x: float, tail_eps: float = 1e-12) -> PointFunctional:
    """Truncated negative-binomial masses: C(n+k-1,k) x^k / (1+x)^(n+k)."""
    _check_degree(n)
    if x < 0.0:
        raise ValueError("baskakov_at requires x >= 0")
    if tail_eps <= 0.0:
        raise ValueError("tail_eps must be positive")
    w, tail = _negbin_weights(n, x, tail_eps)
    nodes = np.arange(w.size) / n
    return PointFunctional(nodes, w, positive=True, tail_mass_bound=tail)


def bbh_at(n: int, x: float) -> PointFunctional:
    """Bleimann-Butzer-Hahn masses: nodes k/(n-k+1), binomial weights at x/(1+x)."""
    _check_degree(n)
    if x < 0.0:
        raise ValueError("bbh_at requires x >= 0")
    ks = np.arange(n + 1)
    nodes = ks / (n - ks + 1.0)
    return PointFunctional(nodes, _binomial_weights(n, x / (1.0 + x)), positive=True)


def r_star(n: int, x: float) -> float:
    """Reparameterization making the Bernstein-type family reproduce e2."""
    _check_degree(n)
    if not 0.0 <= x <= 1.0:
        raise ValueError("r_star requires x in [0, 1]")
    if n == 1:
        r = x * x
    else:
        c = 1.0 / (2.0 * (n - 1.0))
        r = -c + math.sqrt((n / (n - 1.0)) * x * x + c * c)
    r = min(max(r, 0.0), 1.0)
    residual = r / n + ((n - 1.0) / n) * r * r - x * x
    if abs(residual) > 1e-12:
        raise ArithmeticError(f"r_star residual {residual} at n={n}, x={x}")
    return r


def king_at(n: int, x: float) -> PointFunctional:
    """Bernstein weights evaluated at r_star(n, x); reproduces e0 and e2."""
    r = r_star(n, x)
    nodes = np.arange(n + 1) / n
    return PointFunctional(nodes, _binomial_weights(n, r), positive=True)


def two_point(a: float) -> PointFunctional:
    """(1-a) f(0) + a f(1)."""
    if not 0.0 <= a <= 1.0:
        raise ValueError("two_point requires a in [0, 1]")
    return PointFunctional(np.array([0.0, 1.0]), np.array([1.0 - a, a]), positive=True)


def _check_degree(n: int) -> None:
    if int(n) != n or n < 1:
        raise ValueError("degree n must be a positive integer")


# ---------------------------------------------------------------------------
# the mixed Lebesgue + point-mass example functional


def simpson_weights(quad_n: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Simpson nodes and weights for quad_n panels on [0, 1]."""
    if quad_n < 1:
        raise ValueError("quad_n must be >= 1")
    m = 2 * quad_n + 1
    xs = np.linspace(0.0, 1.0, m)
    w = np.full(m, 2.0)
    w[1::2] = 4.0
    w[0] = w[-1] = 1.0
    h = 1.0 / (2.0 * quad_n)
    return xs, w * (h / 3.0)


def measure_example_T(a: float, f: RealFunction, g: RealFunction,
                      quad_n: int = 2048,
                      grid: NodeSet | None = None) -> tuple[float, float]:
    """Chebyshev functional and oscillation bound for a*Lebesgue + (1-a)*delta_{1/2}.

    Returns (T, rhs) where T = L(fg) - L(f)L(g) with the Lebesgue part done by
    composite Simpson on quad_n panels, and rhs = a(2-a)/2 * osc(f) * osc(g)
    with oscillations over the global grid (the product measure charges all of
    [0,1]^2 whenever a > 0).
    """
    if quad_n < 1:
        raise ValueError("quad_n must be >= 1")
    if not 0.0 <= a <= 1.0:
        raise ValueError("measure_example_T requires a in [0, 1]")
    xs, sw = simpson_weights(quad_n)
    fv = f.values(xs)
    gv = g.values(xs)
    int_f = float(sw @ fv)
    int_g = float(sw @ gv)
    int_fg = float(sw @ (fv * gv))
    fm = float(f.values(np.array([0.5]))[0])
    gm = float(g.values(np.array([0.5]))[0])
    lf = a * int_f + (1.0 - a) * fm
    lg = a * int_g + (1.0 - a) * gm
    lfg = a * int_fg + (1.0 - a) * fm * gm
    t_val = lfg - lf * lg
    if grid is None:
        grid = uniform_grid(0.0, 1.0)
    if a == 0.0:
        rhs = 0.0
    else:
        rhs = 0.5 * a * (2.0 - a) * oscillation(f, grid) * oscillation(g, grid)
    return t_val, rhs


# ---------------------------------------------------------------------------
# application and the Chebyshev functional


def apply(L: PointFunctional, f: RealFunction) -> float:
    """L(f) = sum of weight * f(node)."""
    lo, hi = f.domain
    if np.min(L.nodes) < lo - 1e-12 or np.max(L.nodes) > hi + 1e-12:
        raise ValueError(f"functional nodes leave the domain of {f.name!r}")
    return float(np.dot(L.weights, f.values(L.nodes)))


def chebyshev_T(L: PointFunctional, f: RealFunction, g: RealFunction) -> float:
    """T_L(f, g) = L(fg) - L(f) L(g)."""
    lo_f, hi_f = f.domain
    lo_g, hi_g = g.domain
    lo, hi = max(lo_f, lo_g), min(hi_f, hi_g)
    if np.min(L.nodes) < lo - 1e-12 or np.max(L.nodes) > hi + 1e-12:
        raise ValueError("functional nodes leave the common domain")
    fv = f.values(L.nodes)
    gv = g.values(L.nodes)
    w = L.weights
    return float(w @ (fv * gv) - (w @ fv) * (w @ gv))


def pairwise_identity(L: PointFunctional, f: RealFunction, g: RealFunction) -> float:
    """The same functional via the direct pair sum over k < l.

    Kept as an explicit double sum (row-blocked) so it stays an independent
    cross-check of :func:`chebyshev_T` rather than an algebraic rearrangement.
    """
    fv = f.values(L.nodes)
    gv = g.values(L.nodes)
    w = L.weights
    total = 0.0
    for k in range(w.size - 1):
        total += float(w[k] * np.sum(
            w[k + 1:] * (fv[k] - fv[k + 1:]) * (gv[k] - gv[k + 1:])
        ))
    return total
