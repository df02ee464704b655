"""Weight functions, weighted L_p norms, and parameter admissibility tables."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

import numpy as np

from .errors import DomainError, EvaluationError, ParameterDomainError
from .jacobi import JacobiParams, gauss_jacobi_rule

__all__ = [
    "SiKind",
    "WeightSpec",
    "SpaceParams",
    "NormConfig",
    "Theorem",
    "Admissibility",
    "weight_value",
    "co_value",
    "weighted_norm",
    "norm_grid",
    "chebyshev_points",
    "validate_parameters",
]


class SiKind(Enum):
    """The two candidate readings of the base weight factor ``Si(u)``."""

    ONE_MINUS_U = "one_minus_u"
    ONE_MINUS_U_SQUARED = "one_minus_u_squared"


class Theorem(Enum):
    JACKSON = "jackson"
    DIRECT = "direct"
    INVERSE = "inverse"
    COINCIDENCE = "coincidence"


@dataclass(frozen=True)
class WeightSpec:
    """Base factor choice plus the norm exponent ``alpha`` of ``Si(x)^alpha``."""

    si: SiKind = SiKind.ONE_MINUS_U_SQUARED
    alpha: float = 1.0

    def __post_init__(self):
        if not math.isfinite(self.alpha) or self.alpha < 0.0:
            raise ParameterDomainError(f"alpha must be finite and >= 0, got {self.alpha}")

    def si_values(self, u) -> np.ndarray:
        """Vectorized ``Si(u)`` without the domain check (internal fast path)."""
        u = np.asarray(u, dtype=float)
        if self.si is SiKind.ONE_MINUS_U:
            return 1.0 - u
        return 1.0 - u * u

    def si_squared_exponents(self) -> tuple[float, float]:
        """Exponents ``(a, b)`` with ``Si(x)^2 = (1-x)^a (1+x)^b``."""
        if self.si is SiKind.ONE_MINUS_U:
            return (2.0, 0.0)
        return (2.0, 2.0)

    def norm_weight_exponents(self) -> tuple[float, float]:
        """Exponents of ``Si(x)^(2*alpha)``, the squared norm weight."""
        if self.si is SiKind.ONE_MINUS_U:
            return (2.0 * self.alpha, 0.0)
        return (2.0 * self.alpha, 2.0 * self.alpha)


def weight_value(spec: WeightSpec, u):
    """``Si(u)`` for ``u`` in ``[-1, 1]``; raises ``DomainError`` outside."""
    arr = np.asarray(u, dtype=float)
    if np.any(np.abs(arr) > 1.0):
        raise DomainError(f"weight argument outside [-1, 1]: {np.max(np.abs(arr))!r}")
    out = spec.si_values(arr)
    return float(out) if np.ndim(u) == 0 else out


def co_value(t) -> float | np.ndarray:
    """Damping factor ``cos(t/2)^4``; equals ``((1 + cos t) / 2)^2``."""
    out = np.cos(np.asarray(t, dtype=float) / 2.0) ** 4
    return float(out) if np.ndim(t) == 0 else out


@dataclass(frozen=True)
class SpaceParams:
    """Integrability index ``p`` (``1 <= p <= inf``) of the weighted space."""

    p: float
    alpha: float = 1.0

    def __post_init__(self):
        if not (self.p >= 1.0):
            raise ParameterDomainError(f"p must satisfy p >= 1, got {self.p}")
        if not math.isfinite(self.alpha) or self.alpha < 0.0:
            raise ParameterDomainError(f"alpha must be finite and >= 0, got {self.alpha}")

    @property
    def is_sup(self) -> bool:
        return math.isinf(self.p)


@dataclass(frozen=True)
class NormConfig:
    """Discretization sizes for norm evaluation."""

    quadrature_size: int = 256
    sup_grid_size: int = 4097

    def __post_init__(self):
        if self.quadrature_size < 2:
            raise ParameterDomainError("quadrature_size must be >= 2")
        if self.sup_grid_size < 2:
            raise ParameterDomainError("sup_grid_size must be >= 2")


def chebyshev_points(lo: float, hi: float, count: int) -> np.ndarray:
    """Chebyshev-spaced points on ``[lo, hi]``, endpoints included, ascending."""
    mid = 0.5 * (hi + lo)
    half = 0.5 * (hi - lo)
    return mid + half * np.cos(np.linspace(np.pi, 0.0, count))


def norm_grid(params: SpaceParams, cfg: NormConfig, domain: tuple[float, float] = (-1.0, 1.0)):
    """Evaluation nodes and weights backing :func:`weighted_norm`.

    For ``p = inf`` the weights are ``None`` and the nodes form a
    Chebyshev-spaced max grid; otherwise they are a Gauss-Legendre rule
    mapped onto ``domain``.
    """
    lo, hi = domain
    if not (-1.0 <= lo < hi <= 1.0):
        raise ParameterDomainError(f"invalid norm domain {domain}")
    if params.is_sup:
        return chebyshev_points(lo, hi, cfg.sup_grid_size), None
    rule = gauss_jacobi_rule(JacobiParams(0.0, 0.0), cfg.quadrature_size)
    half = 0.5 * (hi - lo)
    nodes = 0.5 * (hi + lo) + half * rule.nodes
    return nodes, rule.weights * half


def weighted_norm(
    f: Callable[[np.ndarray], np.ndarray],
    params: SpaceParams,
    spec: WeightSpec,
    cfg: NormConfig = NormConfig(),
    domain: tuple[float, float] = (-1.0, 1.0),
) -> float:
    """Weighted norm ``|| f * Si^alpha ||_p`` over ``domain``.

    ``p < inf`` integrates ``|f * Si^alpha|^p`` by Gauss-Legendre quadrature of
    ``cfg.quadrature_size`` points; ``p = inf`` takes the max over a
    Chebyshev-spaced grid of ``cfg.sup_grid_size`` points.  The exponent
    ``alpha`` comes from ``spec``; ``params`` contributes ``p`` (a consistent
    configuration keeps ``params.alpha == spec.alpha``).
    """
    nodes, weights = norm_grid(params, cfg, domain)
    values = np.asarray(f(nodes), dtype=float)
    if values.shape != nodes.shape:
        values = np.broadcast_to(values, nodes.shape).astype(float)
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise EvaluationError(
            f"function returned a non-finite value at node {nodes[bad]!r}",
            node=float(nodes[bad]),
        )
    si = spec.si_values(nodes)
    weighted = np.abs(values) * si**spec.alpha
    if params.is_sup:
        return float(np.max(weighted))
    return float(np.dot(weights, weighted**params.p) ** (1.0 / params.p))


@dataclass(frozen=True)
class Admissibility:
    """Verdict of the parameter tables, with human-readable reasons."""

    admissible: bool
    theorem: Theorem
    reasons: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        return {
            "admissible": self.admissible,
            "theorem": self.theorem.value,
            "reasons": list(self.reasons),
        }


def _alpha_window_strict(p: float, alpha: float) -> tuple[bool, str]:
    lo = 1.0 - 1.0 / (2.0 * p)
    hi = 1.5 - 1.0 / (2.0 * p)
    ok = lo < alpha < hi
    return ok, f"requires {lo!r} < alpha < {hi!r} for p = {p!r}"


def validate_parameters(
    params: SpaceParams,
    theorem: Theorem,
    r: int | None = None,
    lam: float | None = None,
) -> Admissibility:
    """Check ``(p, alpha)`` (and ``r``, ``lambda`` where relevant) against the
    admissibility tables of the four verified statements."""
    p, alpha = params.p, params.alpha
    reasons: list[str] = []

    if math.isinf(p):
        if not (1.0 <= alpha < 1.5):
            reasons.append(f"p = inf requires 1 <= alpha < 3/2, got alpha = {alpha!r}")
    elif theorem is Theorem.JACKSON and p == 1.0:
        if not (0.5 < alpha <= 1.0):
            reasons.append(f"p = 1 requires 1/2 < alpha <= 1, got alpha = {alpha!r}")
    else:
        ok, msg = _alpha_window_strict(p, alpha)
        if not ok:
            reasons.append(f"alpha = {alpha!r} inadmissible: {msg}")

    if theorem in (Theorem.DIRECT, Theorem.COINCIDENCE):
        if r is None or lam is None:
            reasons.append("direct/coincidence checks require both r and lambda")
        else:
            if r < 1:
                reasons.append(f"smoothness order r must be >= 1, got {r}")
            if not (0.0 < lam < 2.0 * r):
                reasons.append(f"lambda must satisfy 0 < lambda < 2r = {2 * (r or 0)}, got {lam!r}")
    elif theorem is Theorem.INVERSE:
        if lam is not None and not (lam > 0.0):
            reasons.append(f"lambda must be positive, got {lam!r}")
        if r is not None and r < 1:
            reasons.append(f"smoothness order r must be >= 1, got {r}")

    return Admissibility(admissible=not reasons, theorem=theorem, reasons=tuple(reasons))
