"""Best weighted polynomial approximation and dyadic decompositions.

``compute_E(f, n, ...)`` returns the error of the best approximation to ``f``
by polynomials of degree at most ``n - 1`` in the weighted ``L_p`` norm
``|| g * Si^alpha ||_p``:

* ``p = 2`` -- orthogonal projection onto the Jacobi family of the weight;
* ``p = inf`` -- a Remez exchange restricted to a Chebyshev-spaced grid;
* other ``p`` -- iteratively reweighted least squares on the same grid.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from numpy.polynomial import chebyshev as _cheb

from .errors import ConvergenceError, EvaluationError, ParameterDomainError
from .jacobi import JacobiParams, PolynomialRep, gauss_jacobi_rule, jacobi_table
from .spaces import NormConfig, SpaceParams, WeightSpec, chebyshev_points, weighted_norm

__all__ = [
    "ApproxResult",
    "DyadicDecomposition",
    "best_approx_l2",
    "best_approx_minimax",
    "best_approx_lp",
    "compute_E",
    "dyadic_polys",
    "DEFAULT_GRID_SIZE",
]

DEFAULT_GRID_SIZE = 2049
_MINIMAX_MAX_EXCHANGES = 200
_MINIMAX_REL_TOL = 1e-8
_IRLS_MAX_ITER = 100
_IRLS_REL_TOL = 1e-9
_IRLS_RESIDUAL_CLIP = 1e-12
_IRLS_DAMPING = 0.5


@dataclass
class ApproxResult:
    """Best-approximation polynomial with its achieved error and diagnostics."""

    polynomial: PolynomialRep
    error: float
    iterations: int
    converged: bool
    diagnostics: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "polynomial": self.polynomial.to_dict(),
            "error": self.error,
            "iterations": self.iterations,
            "converged": self.converged,
            "diagnostics": {
                k: v for k, v in self.diagnostics.items() if not isinstance(v, np.ndarray)
            },
        }


def _check_degree_bound(n: int) -> int:
    if n < 1:
        raise ParameterDomainError(f"approximation index n must be >= 1, got {n}")
    return n - 1


def _sample(f, xs: np.ndarray) -> np.ndarray:
    vals = np.asarray(f(xs), dtype=float)
    if vals.shape != xs.shape:
        vals = np.broadcast_to(vals, xs.shape).astype(float)
    if not np.all(np.isfinite(vals)):
        bad = int(np.flatnonzero(~np.isfinite(vals))[0])
        raise EvaluationError(
            f"function returned a non-finite value at grid point {xs[bad]!r}",
            node=float(xs[bad]),
        )
    return vals


def best_approx_l2(
    f,
    n: int,
    spec: WeightSpec,
    norm_cfg: NormConfig = NormConfig(),
) -> ApproxResult:
    """Projection onto degrees ``< n`` against the measure ``Si(x)^(2 alpha) dx``."""
    degree = _check_degree_bound(n)
    ea, eb = spec.norm_weight_exponents()
    rule = gauss_jacobi_rule(JacobiParams(ea, eb), max(norm_cfg.quadrature_size, 2 * n))
    fvals = _sample(f, rule.nodes)
    table = jacobi_table(JacobiParams(ea, eb), degree, rule.nodes)
    coeffs = np.empty(degree + 1)
    for k in range(degree + 1):
        pk = table[k]
        coeffs[k] = rule.integrate(fvals * pk) / rule.integrate(pk * pk)
    approx_vals_at = lambda xs: np.tensordot(
        coeffs, jacobi_table(JacobiParams(ea, eb), degree, np.asarray(xs, dtype=float)), axes=(0, 0)
    )
    poly = PolynomialRep.from_function(approx_vals_at, degree)
    residual = fvals - approx_vals_at(rule.nodes)
    error = math.sqrt(max(rule.integrate(residual * residual), 0.0))
    return ApproxResult(
        polynomial=poly,
        error=error,
        iterations=1,
        converged=True,
        diagnostics={"method": "l2_projection", "rule_size": rule.size},
    )


def _initial_reference(active: np.ndarray, count: int) -> np.ndarray:
    """``count`` indices spread uniformly through the active set.

    The evaluation grid is already Chebyshev-spaced, so uniform index spacing
    is Chebyshev-angle spacing in ``x``; anything denser near the endpoints
    would stack reference points where the weight vanishes and degenerate the
    equioscillation system.
    """
    positions = np.linspace(0.0, len(active) - 1.0, count)
    idx = np.unique(np.round(positions).astype(int))
    if len(idx) < count:
        extra = np.setdiff1d(np.arange(len(active)), idx)
        idx = np.sort(np.concatenate([idx, extra[: count - len(idx)]]))
    return active[idx[:count]]


def _alternating_candidates(residual: np.ndarray, indices: np.ndarray) -> np.ndarray:
    """One max-amplitude index per sign run of the residual, skipping runs
    whose peak sits at rounding level relative to the global peak (sign noise
    where the weight vanishes would otherwise masquerade as extrema)."""
    signs = np.sign(residual[indices])
    floor = 1e-9 * float(np.max(np.abs(residual[indices])))
    candidates = []
    run_start = 0
    current = signs[0]
    for i in range(1, len(indices) + 1):
        if i == len(indices) or (signs[i] != current and signs[i] != 0.0):
            block = indices[run_start:i]
            peak = block[np.argmax(np.abs(residual[block]))]
            if abs(residual[peak]) > floor:
                candidates.append(peak)
            if i < len(indices):
                run_start = i
                current = signs[i]
        elif signs[i] == 0.0:
            signs[i] = current
    return np.asarray(candidates, dtype=int)


def best_approx_minimax(
    f,
    n: int,
    spec: WeightSpec,
    grid_size: int = DEFAULT_GRID_SIZE,
) -> ApproxResult:
    """Weighted minimax approximation by a Remez exchange on a fixed grid.

    The reference set always has ``n + 1`` points; exchanges continue until
    the reference error and the grid error agree to ``1e-8`` relative (or the
    residual is at rounding level), with at most 200 exchanges.
    """
    degree = _check_degree_bound(n)
    if grid_size < 4 * (n + 1):
        raise ParameterDomainError(f"grid size {grid_size} too small for n = {n}")
    xs = chebyshev_points(-1.0, 1.0, grid_size)
    fvals = _sample(f, xs)
    v = spec.si_values(xs) ** spec.alpha
    active = np.flatnonzero(v > 0.0)
    scale = max(1.0, float(np.max(np.abs(fvals[active] * v[active]))))
    atol = 1e-13 * scale

    refs = _initial_reference(active, n + 1)
    signs = (-1.0) ** np.arange(n + 1)
    pcoef = np.zeros(degree + 1)
    href = 0.0
    converged = False
    iterations = 0
    for iterations in range(1, _MINIMAX_MAX_EXCHANGES + 1):
        vand = _cheb.chebvander(xs[refs], degree)
        system = np.concatenate([v[refs, None] * vand, signs[:, None]], axis=1)
        solution, _, rank, _ = np.linalg.lstsq(system, v[refs] * fvals[refs], rcond=None)
        if rank < system.shape[1] and iterations > 1:
            raise ConvergenceError(f"degenerate reference system at exchange {iterations}")
        pcoef = solution[:-1]
        href = abs(solution[-1])
        residual = (fvals - _cheb.chebval(xs, pcoef)) * v
        grid_err = float(np.max(np.abs(residual[active])))
        if grid_err <= atol or abs(grid_err - href) <= _MINIMAX_REL_TOL * max(grid_err, atol):
            converged = True
            break
        candidates = _alternating_candidates(residual, active)
        if len(candidates) < n + 1:
            break
        best_window = None
        best_min = -1.0
        global_peak = active[np.argmax(np.abs(residual[active]))]
        for start in range(len(candidates) - n):
            window = candidates[start : start + n + 1]
            if window[0] <= global_peak <= window[-1] and global_peak in window:
                low = float(np.min(np.abs(residual[window])))
                if low > best_min:
                    best_min = low
                    best_window = window
        if best_window is None:
            best_window = candidates[: n + 1]
        refs = best_window

    poly = PolynomialRep(pcoef if np.any(pcoef) else np.zeros(1))
    residual = (fvals - _cheb.chebval(xs, poly.coefficients)) * v
    grid_err = float(np.max(np.abs(residual[active])))
    return ApproxResult(
        polynomial=poly,
        error=grid_err,
        iterations=iterations,
        converged=converged,
        diagnostics={
            "method": "remez_grid",
            "grid_size": grid_size,
            "reference_error": href,
            "references": [float(xs[i]) for i in refs],
            "reference_residuals": [float(residual[i]) for i in refs],
        },
    )


@lru_cache(maxsize=8)
def _clenshaw_curtis(count: int) -> tuple[np.ndarray, np.ndarray]:
    """Chebyshev-spaced nodes on [-1, 1] with Clenshaw-Curtis weights."""
    n = count - 1
    theta = np.linspace(np.pi, 0.0, count)
    nodes = np.cos(theta)
    ks = np.arange(1, n // 2 + 1)
    terms = 2.0 * np.cos(2.0 * np.outer(theta, ks)) / (4.0 * ks * ks - 1.0)
    if n % 2 == 0:
        terms[:, -1] *= 0.5
    w = (2.0 / n) * (1.0 - terms.sum(axis=1))
    w[0] *= 0.5
    w[-1] *= 0.5
    nodes.flags.writeable = False
    w.flags.writeable = False
    return nodes, w


def best_approx_lp(
    f,
    n: int,
    p: float,
    spec: WeightSpec,
    grid_size: int = DEFAULT_GRID_SIZE,
    norm_cfg: NormConfig = NormConfig(),
) -> ApproxResult:
    """IRLS solution of the weighted ``L_p`` problem on a Chebyshev-spaced grid.

    Requires ``1 < p < inf``.  Reweighting uses ``|residual|^(p-2)`` clipped
    below at ``1e-12``, damped coefficient updates with step ``1/2``, and stops
    once the relative change of the objective drops under ``1e-9`` (at most
    100 iterations).
    """
    if not 1.0 < float(p) < math.inf:
        raise ParameterDomainError(f"p must lie in (1, inf), got {p}")
    return _irls(f, n, float(p), spec, grid_size, norm_cfg)


def _irls(
    f,
    n: int,
    p: float,
    spec: WeightSpec,
    grid_size: int,
    norm_cfg: NormConfig,
) -> ApproxResult:
    degree = _check_degree_bound(n)
    xs, wq = _clenshaw_curtis(grid_size)
    fvals = _sample(f, xs)
    v = spec.si_values(xs) ** spec.alpha
    vand = _cheb.chebvander(xs, degree)
    base_weight = wq * v**p

    coeffs = np.zeros(degree + 1)
    prev_err = math.inf
    converged = False
    iterations = 0
    residual = fvals.copy()
    for iterations in range(1, _IRLS_MAX_ITER + 1):
        if iterations == 1:
            irls_w = base_weight
        else:
            irls_w = base_weight * np.maximum(np.abs(residual), _IRLS_RESIDUAL_CLIP) ** (p - 2.0)
        sqrt_w = np.sqrt(irls_w)
        solution, *_ = np.linalg.lstsq(sqrt_w[:, None] * vand, sqrt_w * fvals, rcond=None)
        if iterations == 1:
            coeffs = solution
        else:
            coeffs = coeffs + _IRLS_DAMPING * (solution - coeffs)
        residual = fvals - vand @ coeffs
        err = float(np.dot(base_weight, np.abs(residual) ** p) ** (1.0 / p))
        if abs(err - prev_err) <= _IRLS_REL_TOL * max(err, 1e-30):
            converged = True
            break
        prev_err = err

    poly = PolynomialRep(coeffs)
    norm_params = SpaceParams(p=p, alpha=spec.alpha)
    error = weighted_norm(lambda u: f(u) - poly(u), norm_params, spec, norm_cfg)
    return ApproxResult(
        polynomial=poly,
        error=error,
        iterations=iterations,
        converged=converged,
        diagnostics={"method": "irls", "grid_size": grid_size, "objective": err},
    )


def compute_E(
    f,
    n: int,
    params: SpaceParams,
    spec: WeightSpec,
    grid_size: int = DEFAULT_GRID_SIZE,
    norm_cfg: NormConfig = NormConfig(),
) -> ApproxResult:
    """Best weighted approximation error ``E_n(f)`` (degree bound ``n - 1``)."""
    if params.is_sup:
        return best_approx_minimax(f, n, spec, grid_size=grid_size)
    if params.p == 2.0:
        return best_approx_l2(f, n, spec, norm_cfg=norm_cfg)
    return _irls(f, n, float(params.p), spec, grid_size, norm_cfg)


@dataclass(frozen=True)
class DyadicLevel:
    """One dyadic level: index ``k``, ``P_{2^k}``, ``Q_k``, and ``||Q_k||``."""

    k: int
    approximant: PolynomialRep
    piece: PolynomialRep
    piece_norm: float


@dataclass
class DyadicDecomposition:
    """Dyadic pieces ``Q_0 = P_1`` and ``Q_k = P_{2^k} - P_{2^(k-1)}``."""

    levels: list[DyadicLevel]
    e_values: list[float]
    triangle_bounds: list[float]

    @property
    def piece_norms(self) -> list[float]:
        return [level.piece_norm for level in self.levels]

    def to_dict(self) -> dict:
        return {
            "levels": [
                {
                    "k": level.k,
                    "piece_norm": level.piece_norm,
                    "approximant_degree": level.approximant.degree,
                    "piece_degree": level.piece.degree,
                }
                for level in self.levels
            ],
            "e_values": self.e_values,
            "triangle_bounds": self.triangle_bounds,
        }


def dyadic_polys(
    f,
    max_level: int,
    params: SpaceParams,
    spec: WeightSpec,
    grid_size: int = DEFAULT_GRID_SIZE,
    norm_cfg: NormConfig = NormConfig(),
) -> DyadicDecomposition:
    """Near-best approximants at dyadic degrees and their difference pieces.

    Builds levels ``k = 0..max_level`` with ``1 <= max_level <= 7``.
    ``e_values[k]`` is ``||f - P_{2^k}||`` recomputed with the same norm
    discretization used for the piece norms, so the triangle bound
    ``||Q_k|| <= e_values[k-1] + e_values[k]`` holds exactly.
    """
    if not 1 <= max_level <= 7:
        raise ParameterDomainError(f"max_level must lie in 1..7, got {max_level}")
    if params.is_sup:
        consistent_cfg = NormConfig(
            quadrature_size=norm_cfg.quadrature_size, sup_grid_size=grid_size
        )
    else:
        consistent_cfg = norm_cfg
    approximants: list[PolynomialRep] = []
    e_values: list[float] = []
    for k in range(max_level + 1):
        result = compute_E(f, 2**k, params, spec, grid_size=grid_size, norm_cfg=norm_cfg)
        approximants.append(result.polynomial)
        e_values.append(
            weighted_norm(
                lambda u, poly=result.polynomial: np.asarray(f(u), dtype=float) - poly(u),
                params,
                spec,
                consistent_cfg,
            )
        )
    levels = [
        DyadicLevel(
            k=0,
            approximant=approximants[0],
            piece=approximants[0],
            piece_norm=weighted_norm(approximants[0], params, spec, consistent_cfg),
        )
    ]
    triangle_bounds = [levels[0].piece_norm]
    for k in range(1, max_level + 1):
        q = approximants[k] - approximants[k - 1]
        levels.append(
            DyadicLevel(
                k=k,
                approximant=approximants[k],
                piece=q,
                piece_norm=weighted_norm(q, params, spec, consistent_cfg),
            )
        )
        triangle_bounds.append(e_values[k - 1] + e_values[k])
    return DyadicDecomposition(
        levels=levels,
        e_values=e_values,
        triangle_bounds=triangle_bounds,
    )
