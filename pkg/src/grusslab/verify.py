"""Verification suites: bound sweeps, identity cross-checks, sign checks,
equality witnesses, conjecture scans, and deterministic report aggregation.

A sweep cell is one (family, degree, x, f, g) evaluation.  Blocks are keyed by
(family, degree); they may be computed on a thread pool, but results are
always merged in the canonical block order, so reports are byte-identical for
a fixed :class:`SuiteConfig`.
"""

from __future__ import annotations

import dataclasses
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
import scipy

from . import bounds as bnd
from . import lagrange as lag
from . import operators as ops
from . import special
from .funcspace import (CORPUS_NAMES, DEFAULT_GRID, DEFAULT_SEED, DEFAULT_XMAX,
                        RealFunction, cached_envelope, standard_corpus,
                        uniform_grid)

__all__ = [
    "SuiteConfig",
    "VerificationReport",
    "run_suite",
    "conjecture_scan",
    "sharpness_suite",
    "monotone_chebyshev_check",
    "build_point_functional",
    "FAMILY_DOMAINS",
]

DEFAULT_DEGREES = (1, 2, 3, 4, 8, 16, 32, 64)

FAMILY_DOMAINS = {
    "bernstein": (0.0, 1.0),
    "sdelta": (0.0, 1.0),
    "king": (0.0, 1.0),
    "two_point": (0.0, 1.0),
    "measure_example": (0.0, 1.0),
    "szasz": (0.0, math.inf),
    "baskakov": (0.0, math.inf),
    "bbh": (0.0, math.inf),
    "lagrange_cheb": (-1.0, 1.0),
}

#: families whose functionals are exact (no truncated tail)
EXACT_FAMILIES = ("bernstein", "sdelta", "bbh", "king", "two_point", "lagrange_cheb")

#: bound names each family must contribute to the sweep (coverage assertion);
#: lattice_* rows check the dominance orderings between bounds, not |T| itself
FAMILY_BOUNDS = {
    "bernstein": ("new_osc", "new_osc_family", "new_osc_degree", "gruss_quarter",
                  "mercer", "classical_ws", "classical_ws_uniform",
                  "lattice_family_vs_new", "lattice_gruss_vs_mercer"),
    "sdelta": ("new_osc", "new_osc_family", "gruss_quarter", "mercer",
               "classical_ws", "classical_ws_uniform",
               "lattice_family_vs_new", "lattice_gruss_vs_mercer"),
    "king": ("new_osc", "new_osc_family", "new_osc_degree", "gruss_quarter",
             "mercer", "classical_ws",
             "lattice_family_vs_new", "lattice_gruss_vs_mercer"),
    "bbh": ("new_osc", "new_osc_family", "gruss_quarter", "mercer",
            "lattice_family_vs_new", "lattice_gruss_vs_mercer"),
    "two_point": ("new_osc", "gruss_quarter", "mercer",
                  "lattice_gruss_vs_mercer"),
    "szasz": ("new_osc", "new_osc_family", "new_osc_globalrange",
              "gruss_quarter", "mercer",
              "lattice_family_vs_new", "lattice_gruss_vs_mercer"),
    "baskakov": ("new_osc", "new_osc_family", "new_osc_globalrange",
                 "gruss_quarter", "mercer",
                 "lattice_family_vs_new", "lattice_gruss_vs_mercer"),
    "lagrange_cheb": ("new_osc", "classical_norm", "classical_log",
                      "classical_log_stated"),
    "measure_example": ("measure_support", "gruss_quarter"),
}

#: recorded for comparison only, never gated (working-grid ranges are not a
#: theorem for the unbounded corpus members)
REPORT_ONLY_BOUNDS = ("new_osc_globalrange",)


@dataclass(frozen=True)
class SuiteConfig:
    families: tuple[str, ...] = tuple(FAMILY_DOMAINS)
    degrees: tuple[int, ...] = DEFAULT_DEGREES
    x_grid: int = 257
    functions: tuple[str, ...] = CORPUS_NAMES
    base_rel_tol: float = bnd.BASE_REL_TOL
    tail_eps: float = 1e-12
    quad_n: int = 2048
    grid_n: int = DEFAULT_GRID
    x_max: float = DEFAULT_XMAX
    seed: int = DEFAULT_SEED
    conjecture_nmax: int = 64
    threads: int = 0  # 0 -> env GRUSS_LAB_THREADS, else 1

    def __post_init__(self):
        if not self.degrees:
            raise ValueError("degree list must be nonempty")
        if self.x_grid < 3:
            raise ValueError("x grid needs at least 3 points")
        unknown = set(self.families) - set(FAMILY_DOMAINS)
        if unknown:
            raise ValueError(f"unknown families: {sorted(unknown)}")
        unknown = set(self.functions) - set(CORPUS_NAMES)
        if unknown:
            raise ValueError(f"unknown corpus members: {sorted(unknown)}")

    def worker_count(self) -> int:
        if self.threads > 0:
            return self.threads
        env = os.environ.get("GRUSS_LAB_THREADS", "")
        try:
            return max(1, int(env)) if env else 1
        except ValueError:
            return 1


@dataclass
class VerificationReport:
    schema: int
    config: dict
    environment: dict
    suites: dict
    coverage: dict
    passed: bool

    def to_json(self) -> str:
        payload = {
            "schema": self.schema,
            "config": self.config,
            "environment": self.environment,
            "suites": self.suites,
            "coverage": self.coverage,
            "pass": self.passed,
        }
        return json.dumps(payload, sort_keys=True, indent=2, allow_nan=False)


def build_point_functional(spec: ops.OperatorSpec, x: float,
                           tail_eps: float = 1e-12) -> ops.PointFunctional:
    """Functional for one operator spec at an evaluation point."""
    fam = spec.family
    if fam == "bernstein":
        return ops.bernstein_at(spec.n, x)
    if fam == "sdelta":
        return ops.sdelta_at(spec.n, x)
    if fam == "szasz":
        return ops.szasz_at(spec.n, x, tail_eps)
    if fam == "baskakov":
        return ops.baskakov_at(spec.n, x, tail_eps)
    if fam == "bbh":
        return ops.bbh_at(spec.n, x)
    if fam == "king":
        return ops.king_at(spec.n, x)
    if fam == "two_point":
        return ops.two_point(spec.param if spec.param is not None else x)
    if fam == "lagrange_cheb":
        return lag.lagrange_basis(spec.n, x)
    raise ValueError(f"{fam} has no point-functional form")


# ---------------------------------------------------------------------------
# sweep internals


class _Accum:
    """Worst margins, failures and sign statistics for one sweep block."""

    def __init__(self, family: str, n: int):
        self.family = family
        self.n = n
        self.worst: dict[str, dict] = {}
        self.failures: list[dict] = []
        self.checks = 0
        self.cells = 0
        self.com_min: float | None = None
        self.anti_max: float | None = None

    def update(self, bound: str, margins: np.ndarray, allow: np.ndarray,
               lhs: np.ndarray, x: float, names: tuple[str, ...],
               asserted: bool = True) -> None:
        self.checks += margins.size
        i, j = np.unravel_index(int(np.argmin(margins)), margins.shape)
        m = float(margins[i, j])
        cur = self.worst.get(bound)
        if cur is None or m < cur["margin"]:
            self.worst[bound] = {
                "margin": m,
                "operator": self.family,
                "n": self.n,
                "x": float(x),
                "f": names[i],
                "g": names[j],
                "lhs": float(lhs[i, j]),
                "rhs": float(lhs[i, j] + m),
            }
        if asserted:
            bad = margins + allow < 0.0
            if np.any(bad):
                for i, j in zip(*np.nonzero(bad)):
                    if len(self.failures) >= 25:
                        break
                    self.failures.append({
                        "bound": bound, "operator": self.family, "n": self.n,
                        "x": float(x), "f": names[int(i)], "g": names[int(j)],
                        "lhs": float(lhs[i, j]),
                        "margin": float(margins[i, j]),
                        "allowance": float(allow[i, j]),
                    })
                self.failures_total = getattr(self, "failures_total", 0) + int(np.sum(bad))

    def sign_stats(self, t_mat: np.ndarray, t_anti: float,
                   names: tuple[str, ...]) -> None:
        idx = {nm: k for k, nm in enumerate(names)}
        if "e1" not in idx:
            return
        vals = [t_mat[idx["e1"], idx["e1"]]]
        if "e2" in idx:
            vals.append(t_mat[idx["e1"], idx["e2"]])
        lo = float(min(vals))
        self.com_min = lo if self.com_min is None else min(self.com_min, lo)
        self.anti_max = (t_anti if self.anti_max is None
                         else max(self.anti_max, t_anti))


def _rel_allow(lhs: np.ndarray, rhs: np.ndarray, extra=0.0) -> np.ndarray:
    return bnd.BASE_REL_TOL * np.maximum(1.0, np.maximum(np.abs(lhs), np.abs(rhs))) + extra


def _corpus_matrix(funcs, nodes: np.ndarray) -> np.ndarray:
    return np.stack([f.values(nodes) for f in funcs])


def _x_grid(family: str, cfg: SuiteConfig) -> np.ndarray:
    lo, hi = FAMILY_DOMAINS[family]
    if math.isinf(hi):
        hi = cfg.x_max
    return np.linspace(lo, hi, cfg.x_grid)


def _gram_pieces(v: np.ndarray, w: np.ndarray):
    a = v @ w
    t = (v * w) @ v.T - np.outer(a, a)
    return a, t


def _anti_t(v_e1: np.ndarray, w: np.ndarray) -> float:
    """T(e1, 1 - e1) computed honestly from node values."""
    u = 1.0 - v_e1
    return float(w @ (v_e1 * u) - (w @ v_e1) * (w @ u))


def _sweep_fixed_nodes(family: str, n: int, cfg: SuiteConfig, corpus,
                       names: tuple[str, ...]) -> _Accum:
    """bernstein / bbh / king / two_point / sdelta share this path."""
    funcs = [corpus[nm] for nm in names]
    acc = _Accum(family, n)
    xs = _x_grid(family, cfg)

    if family == "sdelta":
        all_nodes = np.arange(n + 1) / n
        v_all = _corpus_matrix(funcs, all_nodes)
    elif family == "two_point":
        nodes = np.array([0.0, 1.0])
        v_fix = _corpus_matrix(funcs, nodes)
    elif family == "bbh":
        ks = np.arange(n + 1)
        nodes = ks / (n - ks + 1.0)
        v_fix = _corpus_matrix(funcs, nodes)
    else:
        nodes = np.arange(n + 1) / n
        v_fix = _corpus_matrix(funcs, nodes)

    spec_coef = None
    if family in ("bernstein", "sdelta", "bbh", "king"):
        spec_coef = bnd.specialized_rhs(family, n)
    deg_coef = n / (2.0 * (n + 1.0)) if family in ("bernstein", "king") else None

    # x-dependent envelope arguments for the classical second-moment bound
    env_vals = env_uni = None
    env_h = 1.0 / (cfg.grid_n - 1)  # envelope grid spacing on [0, 1]
    if family in ("bernstein", "king", "sdelta"):
        if family == "bernstein":
            m2 = xs * (1.0 - xs) / n
        elif family == "king":
            m2 = np.array([special.second_moment("king", n, float(x)) for x in xs])
        else:
            m2 = np.array([special.second_moment("sdelta", n, float(x)) for x in xs])
        s_arr = 2.0 * np.sqrt(np.maximum(m2, 0.0))
        env_vals = np.stack([
            cached_envelope(f, cfg.grid_n, cfg.x_max).hull_value(s_arr) for f in funcs
        ])
        if family in ("bernstein", "sdelta"):
            s_uni = 1.0 / math.sqrt(n) if family == "bernstein" else 1.0 / n
            env_uni = np.array([
                cached_envelope(f, cfg.grid_n, cfg.x_max).hull_value(s_uni)
                for f in funcs
            ])

    e1_row = names.index("e1") if "e1" in names else None

    for ix, x in enumerate(xs):
        if family == "sdelta":
            k, u = ops._sdelta_cell(n, float(x))
            if u == 0.0:
                idx = [min(k, n)]
                w = np.array([1.0])
            else:
                idx = [k, k + 1]
                w = np.array([1.0 - u, u])
            v = v_all[:, idx]
        elif family == "two_point":
            v = v_fix
            w = np.array([1.0 - x, x])
        elif family == "bernstein":
            v = v_fix
            w = ops._binomial_weights(n, float(x))
        elif family == "bbh":
            v = v_fix
            w = ops._binomial_weights(n, float(x) / (1.0 + float(x)))
        else:  # king
            v = v_fix
            w = ops._binomial_weights(n, ops.r_star(n, float(x)))

        a, t = _gram_pieces(v, w)
        lhs = np.abs(t)
        osc = v.max(axis=1) - v.min(axis=1)
        osc_outer = np.outer(osc, osc)
        coef = 0.5 * (1.0 - float(w @ w))

        new_rhs = coef * osc_outer
        acc.update("new_osc", new_rhs - lhs, _rel_allow(lhs, new_rhs), lhs, x, names)
        acc.cells += lhs.size

        if spec_coef is not None:
            rhs = spec_coef * osc_outer
            acc.update("new_osc_family", rhs - lhs, _rel_allow(lhs, rhs), lhs, x, names)
            acc.update("lattice_family_vs_new", rhs - new_rhs,
                       _rel_allow(new_rhs, rhs), new_rhs, x, names)
        if deg_coef is not None:
            rhs = deg_coef * osc_outer
            acc.update("new_osc_degree", rhs - lhs, _rel_allow(lhs, rhs), lhs, x, names)

        gruss_rhs = 0.25 * osc_outer  # node ranges: spread == osc
        acc.update("gruss_quarter", gruss_rhs - lhs, _rel_allow(lhs, gruss_rhs),
                   lhs, x, names)

        dev = np.abs(v - a[:, None]) @ w
        mercer_rhs = 0.5 * np.minimum(np.outer(osc, dev), np.outer(dev, osc))
        acc.update("mercer", mercer_rhs - lhs, _rel_allow(lhs, mercer_rhs),
                   lhs, x, names)
        acc.update("lattice_gruss_vs_mercer", gruss_rhs - mercer_rhs,
                   _rel_allow(mercer_rhs, gruss_rhs), mercer_rhs, x, names)

        if env_vals is not None:
            # sampled moduli undershoot the true sup by at most slope*h;
            # declare the grid allowance h*(wf+wg) + 4h^2 on these margins
            ew = env_vals[:, ix]
            rhs = 0.25 * np.outer(ew, ew)
            extra = env_h * np.add.outer(ew, ew) + 4.0 * env_h * env_h
            acc.update("classical_ws", rhs - lhs, _rel_allow(lhs, rhs, extra),
                       lhs, x, names)
            if env_uni is not None:
                rhs = 0.25 * np.outer(env_uni, env_uni)
                extra = env_h * np.add.outer(env_uni, env_uni) + 4.0 * env_h * env_h
                acc.update("classical_ws_uniform", rhs - lhs,
                           _rel_allow(lhs, rhs, extra), lhs, x, names)

        if e1_row is not None:
            acc.sign_stats(t, _anti_t(v[e1_row], w), names)
    return acc


def _sweep_truncated(family: str, n: int, cfg: SuiteConfig, corpus,
                     names: tuple[str, ...]) -> _Accum:
    funcs = [corpus[nm] for nm in names]
    acc = _Accum(family, n)
    xs = _x_grid(family, cfg)

    def weights_at(x: float):
        if family == "szasz":
            return ops._poisson_weights(n * x, cfg.tail_eps)
        return ops._negbin_weights(n, x, cfg.tail_eps)

    w_top, _ = weights_at(float(xs[-1]))
    state = {"k_glob": 0, "v": None, "maxp": None, "minp": None}

    def ensure_window(k_needed: int) -> None:
        if k_needed < state["k_glob"]:
            return
        state["k_glob"] = k_needed + 256
        v = _corpus_matrix(funcs, np.arange(state["k_glob"]) / n)
        state["v"] = v
        state["maxp"] = np.maximum.accumulate(v, axis=1)
        state["minp"] = np.minimum.accumulate(v, axis=1)

    ensure_window(w_top.size + 8)

    glob = uniform_grid(0.0, cfg.x_max, cfg.grid_n)
    gv = _corpus_matrix(funcs, glob.nodes)
    osc_glob = gv.max(axis=1) - gv.min(axis=1)
    glob_outer = np.outer(osc_glob, osc_glob)

    e1_row = names.index("e1") if "e1" in names else None

    for x in xs:
        w, tail = weights_at(float(x))
        k = w.size - 1
        ensure_window(k + 1)
        v = state["v"][:, : k + 1]
        a, t = _gram_pieces(v, w)
        lhs = np.abs(t)
        osc = state["maxp"][:, k] - state["minp"][:, k]
        osc_outer = np.outer(osc, osc)
        # truncation allowance: the mass deficit enters T through node values,
        # and every corpus member has |f| <= 1 + osc over these nodes
        trunc_extra = 3.0 * tail * np.outer(osc + 1.0, osc + 1.0)
        coef = 0.5 * (1.0 - float(w @ w))

        new_rhs = coef * osc_outer
        acc.update("new_osc", new_rhs - lhs, _rel_allow(lhs, new_rhs, trunc_extra),
                   lhs, x, names)
        acc.cells += lhs.size

        fam_coef = bnd.specialized_rhs(family, n, float(x))
        rhs = fam_coef * osc_outer
        acc.update("new_osc_family", rhs - lhs, _rel_allow(lhs, rhs, trunc_extra),
                   lhs, x, names)
        acc.update("lattice_family_vs_new", rhs - new_rhs,
                   _rel_allow(new_rhs, rhs, trunc_extra), new_rhs, x, names)

        # working-grid range fallback: recorded, not gated
        rhs = coef * glob_outer
        acc.update("new_osc_globalrange", rhs - lhs,
                   _rel_allow(lhs, rhs, trunc_extra), lhs, x, names,
                   asserted=False)

        gruss_rhs = 0.25 * osc_outer
        acc.update("gruss_quarter", gruss_rhs - lhs,
                   _rel_allow(lhs, gruss_rhs, trunc_extra), lhs, x, names)

        dev = np.abs(v - a[:, None]) @ w
        mercer_rhs = 0.5 * np.minimum(np.outer(osc, dev), np.outer(dev, osc))
        acc.update("mercer", mercer_rhs - lhs,
                   _rel_allow(lhs, mercer_rhs, trunc_extra), lhs, x, names)
        acc.update("lattice_gruss_vs_mercer", gruss_rhs - mercer_rhs,
                   _rel_allow(mercer_rhs, gruss_rhs, trunc_extra),
                   mercer_rhs, x, names)

        if e1_row is not None:
            acc.sign_stats(t, _anti_t(v[e1_row], w), names)
    return acc


def _sweep_lagrange(n: int, cfg: SuiteConfig, corpus,
                    names: tuple[str, ...]) -> _Accum:
    funcs = [corpus[nm] for nm in names]
    acc = _Accum("lagrange_cheb", n)
    xs = _x_grid("lagrange_cheb", cfg)
    grid = lag.chebyshev_grid(n)
    v = _corpus_matrix(funcs, grid.nodes)
    osc = v.max(axis=1) - v.min(axis=1)
    osc_outer = np.outer(osc, osc)

    w2 = np.array([
        cached_envelope(f, cfg.grid_n, cfg.x_max).hull_value(2.0) for f in funcs
    ])
    lam = lag.lebesgue_constant(n)
    ln = math.log(n)
    cl_norm = 0.25 * lam * (1.0 + lam) * np.outer(w2, w2)
    cl_log = 0.5 * (1.0 + (3.0 / math.pi) * ln + (2.0 / math.pi ** 2) * ln * ln) \
        * np.outer(w2, w2)
    cl_log_stated = 0.5 * (1.0 + (3.0 / math.pi) * ln + (2.0 / math.pi) * ln * ln) \
        * np.outer(w2, w2)
    env_h = 2.0 / (cfg.grid_n - 1)  # envelope grid spacing on [-1, 1]
    cl_extra = lam * (1.0 + lam) * (env_h * np.add.outer(w2, w2) + 4.0 * env_h * env_h)

    for x in xs:
        w = lag.basis_weights(n, float(x))
        _, t = _gram_pieces(v, w)
        lhs = np.abs(t)
        pair = max(0.0, 0.5 * (np.sum(np.abs(w)) ** 2 - float(w @ w)))
        rhs = pair * osc_outer
        acc.update("new_osc", rhs - lhs, _rel_allow(lhs, rhs), lhs, x, names)
        acc.cells += lhs.size
        acc.update("classical_norm", cl_norm - lhs,
                   _rel_allow(lhs, cl_norm, cl_extra), lhs, x, names)
        acc.update("classical_log", cl_log - lhs,
                   _rel_allow(lhs, cl_log, cl_extra), lhs, x, names)
        acc.update("classical_log_stated", cl_log_stated - lhs,
                   _rel_allow(lhs, cl_log_stated, cl_extra), lhs, x, names)
    return acc


def _sweep_measure(cfg: SuiteConfig, corpus, names: tuple[str, ...]) -> _Accum:
    funcs = [corpus[nm] for nm in names]
    acc = _Accum("measure_example", 1)
    a_grid = _x_grid("measure_example", cfg)
    xq, sw = ops.simpson_weights(cfg.quad_n)
    vq = _corpus_matrix(funcs, xq)
    int_v = vq @ sw
    int_prod = (vq * sw) @ vq.T
    mid = np.array([float(f.values(np.array([0.5]))[0]) for f in funcs])

    glob = uniform_grid(0.0, 1.0, cfg.grid_n)
    gv = _corpus_matrix(funcs, glob.nodes)
    osc_glob = gv.max(axis=1) - gv.min(axis=1)
    osc_outer = np.outer(osc_glob, osc_glob)
    spread_outer = osc_outer  # ranges over the full grid
    quad_extra = (8.0 / cfg.quad_n) * (1.0 + osc_outer)

    e1_row = names.index("e1") if "e1" in names else None

    for a in a_grid:
        lf = a * int_v + (1.0 - a) * mid
        lfg = a * int_prod + (1.0 - a) * np.outer(mid, mid)
        t = lfg - np.outer(lf, lf)
        lhs = np.abs(t)
        rhs = 0.5 * a * (2.0 - a) * osc_outer
        acc.update("measure_support", rhs - lhs, _rel_allow(lhs, rhs, quad_extra),
                   lhs, a, names)
        acc.cells += lhs.size
        rhs = 0.25 * spread_outer
        acc.update("gruss_quarter", rhs - lhs, _rel_allow(lhs, rhs, quad_extra),
                   lhs, a, names)
        if e1_row is not None:
            # L(e0) = 1 is exact here, so T(e1, 1 - e1) = -T(e1, e1) exactly
            acc.sign_stats(t, -float(t[e1_row, e1_row]), names)
    return acc


def _sweep_block(family: str, n: int, cfg: SuiteConfig, corpus,
                 names: tuple[str, ...]) -> _Accum:
    if family in ("bernstein", "bbh", "king", "two_point", "sdelta"):
        return _sweep_fixed_nodes(family, n, cfg, corpus, names)
    if family in ("szasz", "baskakov"):
        return _sweep_truncated(family, n, cfg, corpus, names)
    if family == "lagrange_cheb":
        return _sweep_lagrange(n, cfg, corpus, names)
    if family == "measure_example":
        return _sweep_measure(cfg, corpus, names)
    raise ValueError(f"unknown family {family!r}")


# ---------------------------------------------------------------------------
# non-sweep suites


def conjecture_scan(n_max: int, grid: int = DEFAULT_GRID) -> list[dict]:
    """Evidence table for the three shape conjectures about phi_n.

    The convexity and unimodality scans are reported only; the global-minimum
    statement is proven, so ``min_gap_to_half`` is expected >= -1e-12.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    xs = np.linspace(0.0, 1.0, grid)
    findings = []
    for n in range(1, n_max + 1):
        phi = _phi_grid(n, xs)
        phi_half = special.phi_bernstein(n, 0.5)
        d1 = np.diff(phi)
        d2 = np.diff(phi, 2)
        signs = np.sign(d1[np.abs(d1) > 1e-15])
        changes = int(np.count_nonzero(np.diff(signs) != 0))
        findings.append({
            "n": n,
            "min_second_difference": float(d2.min()) if d2.size else 0.0,
            "first_difference_sign_changes": changes,
            "min_gap_to_half": float(np.min(phi - phi_half)),
        })
    return findings


def _phi_grid(n: int, xs: np.ndarray) -> np.ndarray:
    """Vectorized sum of squared binomial masses over a grid of x values."""
    p = np.minimum(xs, 1.0 - xs)  # phi is invariant under weight reversal
    q = 1.0 - p
    with np.errstate(divide="ignore", invalid="ignore"):
        base = np.where(p > 0.0, p / q, 0.0)
    ks = np.arange(n, dtype=float)
    ratios = base[:, None] * ((n - ks) / (ks + 1.0))[None, :]
    w = np.concatenate([np.ones((xs.size, 1)), np.cumprod(ratios, axis=1)], axis=1)
    w *= (q ** n)[:, None]
    point_mass = p <= 0.0
    w[point_mass] = 0.0
    w[point_mass, 0] = 1.0
    return np.sum(w * w, axis=1)


def sharpness_suite() -> list[dict]:
    """Equality witnesses; every |lhs - rhs| is expected at or below 1e-10."""
    corpus01 = standard_corpus((0.0, 1.0))
    corpus_pm = standard_corpus((-1.0, 1.0))
    e1, e1pm = corpus01["e1"], corpus_pm["e1"]
    out = []

    for n, x in ((1, 0.5), (4, 0.3), (8, 0.9), (16, 0.12)):
        L = ops.bernstein_at(n, x)
        lhs = abs(ops.chebyshev_T(L, e1, e1))
        rhs = bnd.classical_ws_bound("bernstein", n, x, e1, e1)
        out.append({"witness": "bernstein_classical_identity", "n": n, "x": x,
                    "lhs": lhs, "rhs": rhs, "gap": abs(lhs - rhs)})

    for a in (0.1, 0.25, 0.5, 0.9):
        L = ops.two_point(a)
        lhs = abs(ops.chebyshev_T(L, e1, e1))
        rhs = bnd.new_bound_positive(L, e1, e1)
        out.append({"witness": "two_point_oscillation", "n": 1, "x": a,
                    "lhs": lhs, "rhs": rhs, "gap": abs(lhs - rhs)})

    for a in (0.1, 0.25, 0.5, 0.9):
        L = ops.two_point(a)
        lhs = abs(ops.chebyshev_T(L, e1, e1))
        rng = bnd.node_ranges(L, e1, e1)
        rhs = bnd.mercer_bound(L, e1, e1, rng)
        out.append({"witness": "two_point_mercer", "n": 1, "x": a,
                    "lhs": lhs, "rhs": rhs, "gap": abs(lhs - rhs)})

    res = lag.lagrange_new_bound(2, e1pm, e1pm, 0.0)
    out.append({"witness": "lagrange_pair_product", "n": 2, "x": 0.0,
                "lhs": res.lhs, "rhs": res.rhs["new_osc"],
                "gap": abs(res.lhs - res.rhs["new_osc"])})

    L = ops.PointFunctional(np.array([0.0, 1.0]), np.array([1.5, -0.5]),
                            positive=False)
    lhs = abs(ops.chebyshev_T(L, e1, e1))
    rhs = bnd.new_bound_signed(L, e1, e1)
    out.append({"witness": "signed_two_point", "n": 1, "x": -0.5,
                "lhs": lhs, "rhs": rhs, "gap": abs(lhs - rhs)})
    return out


def monotone_chebyshev_check(cfg: SuiteConfig | None = None) -> dict:
    """Sign checks for comonotone and antimonotone pairs on sample functionals."""
    cfg = cfg or SuiteConfig(x_grid=33)
    corpus = standard_corpus((0.0, 1.0), cfg.seed, cfg.x_max)
    corpus_inf = standard_corpus((0.0, math.inf), cfg.seed, cfg.x_max)
    anti01 = RealFunction("one_minus_e1", (0.0, 1.0), lambda v: 1.0 - np.asarray(v, float))
    anti_inf = RealFunction("one_minus_e1", (0.0, math.inf), lambda v: 1.0 - np.asarray(v, float))

    worst_com, worst_anti = math.inf, -math.inf
    witness_com = witness_anti = None
    samples = []
    for family in ("bernstein", "sdelta", "king", "two_point"):
        for n in (1, 3, 8):
            for x in np.linspace(0.0, 1.0, 9):
                samples.append((family, n, float(x), corpus, anti01))
    for family in ("szasz", "baskakov", "bbh"):
        for n in (1, 3, 8):
            for x in np.linspace(0.0, cfg.x_max, 9):
                samples.append((family, n, float(x), corpus_inf, anti_inf))
    for family, n, x, crp, anti in samples:
        param = x if family == "two_point" else None
        spec = ops.OperatorSpec(family, 1 if family == "two_point" else n, param)
        L = build_point_functional(spec, x, cfg.tail_eps)
        for f, g, kind in ((crp["e1"], crp["e2"], "com"),
                           (crp["e1"], crp["e1"], "com"),
                           (crp["e1"], anti, "anti")):
            t = ops.chebyshev_T(L, f, g)
            if kind == "com" and t < worst_com:
                worst_com = t
                witness_com = {"operator": family, "n": n, "x": x, "g": g.name}
            if kind == "anti" and t > worst_anti:
                worst_anti = t
                witness_anti = {"operator": family, "n": n, "x": x}
    return {
        "min_comonotone_T": worst_com,
        "max_antimonotone_T": worst_anti,
        "comonotone_witness": witness_com,
        "antimonotone_witness": witness_anti,
        "pass": worst_com >= -1e-12 and worst_anti <= 1e-12,
    }


# ---------------------------------------------------------------------------
# run_suite


def _identity_suite(cfg: SuiteConfig, corpora) -> dict:
    names = cfg.functions
    worst = {"tol_ratio": 0.0}
    checks = 0
    ok = True
    for family in cfg.families:
        if family not in EXACT_FAMILIES:
            continue
        domain = FAMILY_DOMAINS[family]
        corpus = corpora[domain]
        funcs = [corpus[nm] for nm in names]
        degrees = (1,) if family == "two_point" else cfg.degrees
        xs = _x_grid(family, cfg)
        sample = xs[:: max(1, (len(xs) - 1) // 4)]
        for n in degrees:
            for x in sample:
                spec = ops.OperatorSpec(family, n, float(x) if family == "two_point" else None)
                L = build_point_functional(spec, float(x), cfg.tail_eps)
                fv = np.stack([f.values(L.nodes) for f in funcs])
                scale_f = 1.0 + np.max(np.abs(fv), axis=1)
                for i, f in enumerate(funcs):
                    for j, g in enumerate(funcs):
                        t1 = ops.chebyshev_T(L, f, g)
                        t2 = ops.pairwise_identity(L, f, g)
                        # rounding floor: both routes sum ~size terms of this scale
                        floor = 256.0 * np.finfo(float).eps * scale_f[i] * scale_f[j]
                        dev = abs(t1 - t2)
                        tol = 1e-10 * max(abs(t1), abs(t2)) + floor
                        checks += 1
                        if dev / tol > worst["tol_ratio"]:
                            worst = {"tol_ratio": dev / tol, "deviation": dev,
                                     "operator": family, "n": n,
                                     "x": float(x), "f": f.name, "g": g.name,
                                     "chebyshev_T": t1, "pair_sum": t2}
                        if dev > tol:
                            ok = False
    return {"pass": ok, "checks": checks, "worst": worst}


def _environment_stamp() -> dict:
    return {
        "python": sys.version.split()[0],
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "platform": sys.platform,
    }


def run_suite(cfg: SuiteConfig | None = None) -> VerificationReport:
    """Run every verification suite and aggregate a deterministic report."""
    cfg = cfg or SuiteConfig()
    cached_envelope.cache_clear()
    corpora = {
        dom: standard_corpus(dom, cfg.seed, cfg.x_max)
        for dom in {FAMILY_DOMAINS[f] for f in cfg.families}
    }
    names = cfg.functions

    blocks: list[tuple[str, int]] = []
    for family in cfg.families:
        if family in ("two_point", "measure_example"):
            blocks.append((family, 1))
        else:
            blocks.extend((family, n) for n in cfg.degrees)

    def work(block):
        family, n = block
        corpus = corpora[FAMILY_DOMAINS[family]]
        try:
            return _sweep_block(family, n, cfg, corpus, names)
        except Exception as exc:  # recorded, not fatal
            return exc

    workers = cfg.worker_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(work, blocks))
    else:
        results = [work(b) for b in blocks]

    # canonical merge
    worst_margins: dict[str, dict] = {}
    per_family: dict[str, dict] = {}
    failures: list[dict] = []
    block_errors: list[dict] = []
    failures_total = 0
    cells = checks = 0
    com_min, anti_max = math.inf, -math.inf
    com_wit = anti_wit = None
    fam_seen, bound_seen = set(), set()
    for (family, n), acc in zip(blocks, results):
        if isinstance(acc, Exception):
            block_errors.append({"operator": family, "n": n, "error": repr(acc)})
            continue
        fam_seen.add(family)
        cells += acc.cells
        checks += acc.checks
        failures_total += getattr(acc, "failures_total", 0)
        failures.extend(acc.failures[: max(0, 25 - len(failures))])
        fam_worst = per_family.setdefault(family, {})
        for bound_name, wrec in sorted(acc.worst.items()):
            bound_seen.add(bound_name)
            cur = worst_margins.get(bound_name)
            if cur is None or wrec["margin"] < cur["margin"]:
                worst_margins[bound_name] = wrec
            curf = fam_worst.get(bound_name)
            if curf is None or wrec["margin"] < curf["margin"]:
                fam_worst[bound_name] = wrec
        if acc.com_min is not None and acc.com_min < com_min:
            com_min = acc.com_min
            com_wit = {"operator": family, "n": n}
        if acc.anti_max is not None and acc.anti_max > anti_max:
            anti_max = acc.anti_max
            anti_wit = {"operator": family, "n": n}

    # coverage: every requested family contributed every expected bound
    if not block_errors:
        for family in cfg.families:
            missing = set(FAMILY_BOUNDS[family]) - set(per_family.get(family, {}))
            assert not missing, f"sweep did not touch {sorted(missing)} for {family}"
        assert fam_seen == set(cfg.families)

    sweep_pass = failures_total == 0 and not block_errors

    identity = _identity_suite(cfg, corpora)

    have_e1 = "e1" in names
    monotone = {
        "pass": (not have_e1) or (com_min >= -1e-12 and anti_max <= 1e-12),
        "min_comonotone_T": None if com_min is math.inf else com_min,
        "max_antimonotone_T": None if anti_max == -math.inf else anti_max,
        "comonotone_witness": com_wit,
        "antimonotone_witness": anti_wit,
    }

    witnesses = sharpness_suite()
    sharp_gap = max(w["gap"] for w in witnesses)
    sharp = {"pass": sharp_gap <= 1e-10, "max_abs_gap": sharp_gap,
             "witnesses": witnesses}

    conj = conjecture_scan(cfg.conjecture_nmax, min(cfg.grid_n, 513))
    conj_pass = all(f["min_gap_to_half"] >= -1e-12 for f in conj)

    rivlin = []
    if "lagrange_cheb" in cfg.families:
        for n in cfg.degrees:
            gap = lag.rivlin_gap(n) if n >= 2 else None
            rivlin.append({
                "n": n,
                "lebesgue_constant": lag.lebesgue_constant(n),
                "gap": gap,
                "in_window": None if gap is None
                else bool(lag.RIVLIN_LO < gap < lag.RIVLIN_HI),
                "hermann_min_ratio": lag.hermann_ratio(n, 257),
            })

    suites = {
        "bound_sweep": {
            "pass": sweep_pass,
            "cells": cells,
            "margin_checks": checks,
            "failures": failures_total,
            "failure_samples": failures,
            "block_errors": block_errors,
            "worst_margins": worst_margins,
            "per_family_worst": per_family,
            "note": "bounds in REPORT_ONLY are recorded, not gated",
            "report_only": list(REPORT_ONLY_BOUNDS),
            "declared_slack": {
                "base": "1e-9 * max(1, |lhs|, |rhs|)",
                "truncated_families": "3 * tail * (osc_f + 1)(osc_g + 1), "
                                      "tail = achieved truncation mass bound",
                "measure_quadrature": "(8 / quad_n)(1 + osc_f * osc_g)",
                "classical_modulus_grid": "h (w_f + w_g) + 4 h^2, h = envelope "
                                          "grid step",
            },
        },
        "identity_equivalence": identity,
        "monotone_signs": monotone,
        "sharpness": sharp,
        "conjectures": {
            "pass": conj_pass,
            "findings": conj,
            "note": "convexity/unimodality scanned only; the half-point "
                    "minimum is asserted",
        },
        "lagrange_diagnostics": {"rivlin": rivlin},
    }
    passed = bool(sweep_pass and identity["pass"] and monotone["pass"]
                  and sharp["pass"] and conj_pass)
    return VerificationReport(
        schema=1,
        config=dataclasses.asdict(cfg),
        environment=_environment_stamp(),
        suites=suites,
        coverage={"families": sorted(fam_seen), "bounds": sorted(bound_seen)},
        passed=passed,
    )
