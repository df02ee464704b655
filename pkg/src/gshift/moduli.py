"""Modulus of smoothness built on iterated shift differences.

``modulus`` maximizes the weighted norm of the order-``r`` generalized
difference over step tuples ``0 <= t_1 <= ... <= t_r <= delta``.  The
objective is invariant under permuting the steps and even in each step
(``tau`` depends on a step only through ``cos t``), so the search space is
restricted to sorted nonnegative tuples without loss.  A coarse lattice pass
is followed by two local refinement passes that halve the per-axis spacing,
and repeated step prefixes share their materialized inner interpolants.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Sequence

import numpy as np

from .errors import DomainError, ParameterDomainError
from .shift import DifferenceEvaluator, ShiftKernelConfig, clamped_domain
from .spaces import NormConfig, SpaceParams, weighted_norm

__all__ = ["MODULUS_NORM_CONFIG", "ModulusResult", "modulus", "modulus_curve"]

#: Default norm discretization for modulus searches.  The sup grid is kept
#: lighter than the standalone norm default because each search evaluates the
#: norm dozens of times.
MODULUS_NORM_CONFIG = NormConfig(quadrature_size=256, sup_grid_size=1025)

_REFINEMENT_PASSES = 2


@dataclass(frozen=True)
class ModulusResult:
    """Value and argmax of one modulus search, with search diagnostics."""

    value: float
    argmax: tuple[float, ...]
    r: int
    delta: float
    equal_step_value: float
    evaluations: int
    levels: tuple[dict, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "argmax": list(self.argmax),
            "r": self.r,
            "delta": self.delta,
            "equal_step_value": self.equal_step_value,
            "evaluations": self.evaluations,
            "levels": [dict(level) for level in self.levels],
        }


def _lattice_sizes(r: int) -> tuple[int, int]:
    """(level-0 points per axis, refinement points per axis) for order ``r``."""
    if r <= 2:
        return 9, 5
    if r == 3:
        return 5, 3
    return 3, 3


class _Objective:
    """Caches ``||Delta_{t} f||`` per sorted step tuple."""

    def __init__(self, cfg: ShiftKernelConfig, f, params: SpaceParams, norm_cfg: NormConfig):
        self.evaluator = DifferenceEvaluator(cfg, f)
        self.params = params
        self.spec = cfg.weight
        self.norm_cfg = norm_cfg
        self.domain = clamped_domain()
        self.cache: dict[tuple[float, ...], float] = {}

    def __call__(self, steps: tuple[float, ...]) -> float:
        key = tuple(sorted(float(t) for t in steps))
        found = self.cache.get(key)
        if found is not None:
            return found
        if any(t == 0.0 for t in key):
            value = 0.0
        else:
            value = weighted_norm(
                lambda xs: self.evaluator.values(key, xs),
                self.params,
                self.spec,
                self.norm_cfg,
                self.domain,
            )
        self.cache[key] = value
        return value

    @property
    def evaluations(self) -> int:
        return len(self.cache)


def _best_tuple(objective: _Objective, candidates: set[tuple[float, ...]]):
    best_key: tuple[float, ...] | None = None
    best_val = -math.inf
    for key in sorted(candidates):
        val = objective(key)
        if val > best_val:
            best_val = val
            best_key = key
    assert best_key is not None
    return best_key, best_val


def modulus(
    cfg: ShiftKernelConfig,
    f,
    r: int,
    delta: float,
    params: SpaceParams,
    norm_cfg: NormConfig = MODULUS_NORM_CONFIG,
    warm_start: Sequence[float] | None = None,
) -> ModulusResult:
    """Modulus of smoothness of order ``r`` at step bound ``delta``.

    ``delta`` must lie in ``[0, pi)``.  ``warm_start`` (for example the
    argmax at a smaller ``delta``) is added to the level-0 candidates, which
    makes chained searches monotone in ``delta`` by construction.
    """
    if not isinstance(r, int) or r < 1:
        raise ParameterDomainError(f"difference order must be a positive integer, got {r!r}")
    if not 0.0 <= delta < math.pi:
        raise DomainError(f"delta must lie in [0, pi), got {delta!r}")
    if delta == 0.0:
        zero = (0.0,) * r
        return ModulusResult(
            value=0.0,
            argmax=zero,
            r=r,
            delta=0.0,
            equal_step_value=0.0,
            evaluations=0,
            levels=(),
        )

    g0, g_ref = _lattice_sizes(r)
    objective = _Objective(cfg, f, params, norm_cfg)
    axis0 = np.linspace(0.0, delta, g0)

    candidates: set[tuple[float, ...]] = {
        key for key in combinations_with_replacement(axis0.tolist(), r)
    }
    if warm_start is not None:
        warm = tuple(sorted(float(t) for t in warm_start))
        if len(warm) != r:
            raise ParameterDomainError(
                f"warm start must have {r} steps, got {len(warm)}"
            )
        if warm[0] < 0.0 or warm[-1] > delta:
            raise DomainError("warm start steps must lie in [0, delta]")
        candidates.add(warm)

    levels: list[dict] = []
    best_key, best_val = _best_tuple(objective, candidates)
    spacing = delta / (g0 - 1)
    levels.append({"spacing": spacing, "best_value": best_val, "candidates": len(candidates)})

    for _ in range(_REFINEMENT_PASSES):
        spacing /= 2.0
        half = (g_ref - 1) // 2
        axes = []
        for center in best_key:
            offsets = spacing * np.arange(-half, half + 1)
            axes.append(np.unique(np.clip(center + offsets, 0.0, delta)).tolist())
        refined = {tuple(sorted(combo)) for combo in product(*axes)}
        refined.add(best_key)
        best_key, best_val = _best_tuple(objective, refined)
        levels.append(
            {"spacing": spacing, "best_value": best_val, "candidates": len(refined)}
        )

    equal_step = max(objective((float(h),) * r) for h in axis0)
    return ModulusResult(
        value=best_val,
        argmax=best_key,
        r=r,
        delta=delta,
        equal_step_value=equal_step,
        evaluations=objective.evaluations,
        levels=tuple(levels),
    )


def modulus_curve(
    cfg: ShiftKernelConfig,
    f,
    r: int,
    deltas: Sequence[float],
    params: SpaceParams,
    norm_cfg: NormConfig = MODULUS_NORM_CONFIG,
) -> list[ModulusResult]:
    """Moduli at increasing ``deltas``, chaining argmaxes as warm starts.

    The warm start guarantees the returned values are nondecreasing: each
    search sees the previous argmax among its candidates, so it can only do
    at least as well.
    """
    deltas = [float(d) for d in deltas]
    if any(b <= a for a, b in zip(deltas, deltas[1:])):
        raise DomainError("deltas must be strictly increasing")
    results: list[ModulusResult] = []
    warm: tuple[float, ...] | None = None
    for delta in deltas:
        result = modulus(cfg, f, r, delta, params, norm_cfg=norm_cfg, warm_start=warm)
        results.append(result)
        if result.value > 0.0:
            warm = result.argmax
    return results
