"""Generalized shift operator, its powers, differences, and kernel validation.

The operator acts on functions on ``[-1, 1]`` through the kernel

    tau_y(f, x) = 4 / (pi * Si(x) * (1 + y)^2)
                  * int_{-1}^{1} B_y(x, z, R) f(R) dz / sqrt(1 - z^2)

with ``R = x*y - sqrt(1-x^2)*sqrt(1-y^2)*z`` and

    B_y(x, z, R) = 2*(sqrt(1-x^2)*y + x*z*sqrt(1-y^2)
                      + sqrt(1-x^2)*(1-y)*Si(z))^2 - Si(R).

At ``y = 1`` the operator reduces to the identity exactly; with the
``ONE_MINUS_U_SQUARED`` base factor it reproduces constants exactly and acts
diagonally on one Jacobi family with multipliers from another (see
``experiments.discover_diagonalizing_basis``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from numpy.polynomial import chebyshev as _cheb

from .errors import (
    DegenerateInputError,
    DomainError,
    EvaluationError,
    ParameterDomainError,
    SingularArgumentError,
)
from .jacobi import JacobiParams, eval_jacobi, fourier_jacobi_coefficient, gauss_jacobi_rule
from .spaces import NormConfig, SiKind, SpaceParams, WeightSpec, co_value, weighted_norm

__all__ = [
    "ShiftKernelConfig",
    "DifferenceQuery",
    "KernelValidationReport",
    "NORM_CLAMP",
    "INTERP_CLAMP",
    "INTERP_DEGREE",
    "kernel_B",
    "apply_shift",
    "shift_values",
    "shift_power",
    "generalized_difference",
    "difference_values",
    "difference_via_inclusion_exclusion",
    "boundedness_ratio",
    "validate_kernel",
    "clamped_domain",
    "DifferenceEvaluator",
    "ChebInterpolant",
]

# Norms that involve the operator are evaluated on this clamped interval to
# stay away from the 1/Si(x) prefactor singularity.
NORM_CLAMP = 1e-4
# Inner functions of operator powers/differences are materialized as Chebyshev
# interpolants of this degree on the slightly clamped interval below.
INTERP_DEGREE = 128
INTERP_CLAMP = 1e-6


def clamped_domain(margin: float = NORM_CLAMP) -> tuple[float, float]:
    return (-1.0 + margin, 1.0 - margin)


@dataclass(frozen=True)
class ShiftKernelConfig:
    """Weight interpretation and quadrature size for the operator."""

    weight: WeightSpec = WeightSpec()
    quadrature_size: int = 256
    enforce_normalization: bool = False

    def __post_init__(self):
        if self.quadrature_size < 8:
            raise ParameterDomainError(
                f"kernel quadrature size must be >= 8, got {self.quadrature_size}"
            )


@dataclass(frozen=True)
class DifferenceQuery:
    """Steps ``(t_1, ..., t_r)`` of an order-``r`` generalized difference."""

    steps: tuple[float, ...]

    def __post_init__(self):
        steps = tuple(float(t) for t in self.steps)
        object.__setattr__(self, "steps", steps)
        if len(steps) == 0:
            raise ParameterDomainError("difference order must be >= 1")
        if any(abs(t) > math.pi for t in steps):
            raise ParameterDomainError(f"steps must satisfy |t| <= pi, got {steps}")

    @property
    def order(self) -> int:
        return len(self.steps)


@lru_cache(maxsize=64)
def _chebgauss(m: int) -> tuple[np.ndarray, float]:
    """Chebyshev-Gauss nodes for the dz/sqrt(1-z^2) measure and common weight pi/m."""
    k = np.arange(m, dtype=float)
    nodes = np.cos((2.0 * k + 1.0) * np.pi / (2.0 * m))
    nodes.flags.writeable = False
    return nodes, np.pi / m


def _check_xy(y: float, x: np.ndarray) -> None:
    if np.any(np.abs(x) >= 1.0):
        raise SingularArgumentError("x must lie strictly inside (-1, 1)")
    if y <= -1.0 or y > 1.0:
        raise SingularArgumentError(f"shift parameter y must lie in (-1, 1], got {y!r}")


def kernel_B(cfg: ShiftKernelConfig, y: float, x, z):
    """Kernel pair ``(R, B)`` at shift ``y``, base point ``x``, and variable ``z``."""
    xs = np.asarray(x, dtype=float)
    zs = np.asarray(z, dtype=float)
    _check_xy(float(y), xs)
    if np.any(np.abs(zs) > 1.0):
        raise DomainError("kernel variable z must lie in [-1, 1]")
    si = cfg.weight.si_values
    s = np.sqrt(1.0 - xs * xs)
    u = math.sqrt(max(1.0 - y * y, 0.0))
    R = xs * y - s * u * zs
    A = s * y + xs * zs * u + s * (1.0 - y) * si(zs)
    B = 2.0 * A * A - si(R)
    if np.ndim(x) == 0 and np.ndim(z) == 0:
        return float(R), float(B)
    return R, B


def shift_values(cfg: ShiftKernelConfig, f, y: float, xs: np.ndarray) -> np.ndarray:
    """Vectorized ``tau_y(f, xs)`` for an array of base points."""
    xs = np.asarray(xs, dtype=float)
    y = float(y)
    _check_xy(y, xs)
    z, w = _chebgauss(cfg.quadrature_size)
    si = cfg.weight.si_values
    s = np.sqrt(1.0 - xs * xs)
    u = math.sqrt(max(1.0 - y * y, 0.0))
    R = xs[..., None] * y - s[..., None] * (u * z)
    A = s[..., None] * y + xs[..., None] * (z * u) + s[..., None] * ((1.0 - y) * si(z))
    B = 2.0 * A * A - si(R)
    fvals = np.asarray(f(np.clip(R, -1.0, 1.0)), dtype=float)
    if not np.all(np.isfinite(fvals)):
        flat = np.flatnonzero(~np.isfinite(np.ravel(fvals)))[0]
        raise EvaluationError(
            "function returned a non-finite value inside the shift integral",
            node=float(np.ravel(R)[flat]),
        )
    raw = (B * fvals).sum(axis=-1) * w
    if cfg.enforce_normalization:
        mass = B.sum(axis=-1) * w
        return raw / mass
    return 4.0 * raw / (np.pi * si(xs) * (1.0 + y) ** 2)


def apply_shift(cfg: ShiftKernelConfig, f, y: float, x) -> float | np.ndarray:
    """Generalized shift ``tau_y(f, x)``; ``x`` may be a scalar or an array."""
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    out = shift_values(cfg, f, y, xs)
    return float(out[0]) if np.ndim(x) == 0 else out


class ChebInterpolant:
    """Chebyshev interpolant on a symmetric subinterval, clamped outside it."""

    __slots__ = ("coefficients", "lo", "hi", "_mid", "_half")

    def __init__(self, coefficients: np.ndarray, lo: float, hi: float):
        self.coefficients = np.asarray(coefficients, dtype=float)
        self.lo = lo
        self.hi = hi
        self._mid = 0.5 * (hi + lo)
        self._half = 0.5 * (hi - lo)

    @classmethod
    def fit(cls, f, degree: int = INTERP_DEGREE, margin: float = INTERP_CLAMP) -> "ChebInterpolant":
        lo, hi = -1.0 + margin, 1.0 - margin
        mid, half = 0.5 * (hi + lo), 0.5 * (hi - lo)
        coeffs = _cheb.chebinterpolate(
            lambda t: np.asarray(f(mid + half * t), dtype=float), degree
        )
        return cls(coeffs, lo, hi)

    def __call__(self, x):
        t = (np.asarray(x, dtype=float) - self._mid) / self._half
        return _cheb.chebval(np.clip(t, -1.0, 1.0), self.coefficients)


def shift_power(cfg: ShiftKernelConfig, f, ys: Sequence[float], x) -> float | np.ndarray:
    """Iterated shift ``tau_{y_r} ... tau_{y_1} f`` at ``x``.

    Every inner stage is materialized as a clamped Chebyshev interpolant
    before the next shift is applied.
    """
    ys = [float(y) for y in ys]
    if len(ys) == 0:
        raise ParameterDomainError("shift_power needs at least one shift parameter")
    g = f
    for y in ys[:-1]:
        g = ChebInterpolant.fit(lambda u, g=g, y=y: shift_values(cfg, g, y, u))
    return apply_shift(cfg, g, ys[-1], x)


class DifferenceEvaluator:
    """Evaluates generalized differences of one function by nesting the shift
    quadrature exactly, so no stage is ever replaced by an interpolant.

    Materializing an intermediate difference loses accuracy: the kernel's
    endpoint singularities leave every shifted image with square-root features
    that polynomial interpolation resolves only algebraically, which is too
    slow once the difference itself is small.  Exact nesting keeps the only
    error source the quadrature rule at each level, at the cost of
    ``len(xs) * m**r`` inner function evaluations.
    """

    #: Largest point block expanded against the quadrature rule at once; keeps
    #: the intermediate ``(block, m)`` tensors around 64 MB for m = 256.
    CHUNK = 32768

    #: Inner evaluation points are nudged this far inside (-1, 1) so that a
    #: quadrature node that rounds onto an endpoint cannot hit the weight zero.
    ENDPOINT_MARGIN = 1e-9

    def __init__(self, cfg: ShiftKernelConfig, f):
        self.cfg = cfg
        self.f = f

    def values(self, steps: Sequence[float], xs: np.ndarray) -> np.ndarray:
        """Difference values ``Delta_{t_1..t_r}(f, xs)`` on an array of points."""
        steps = tuple(float(t) for t in steps)
        if not steps:
            raise ParameterDomainError("a generalized difference needs at least one step")
        return self._delta(steps, np.asarray(xs, dtype=float))

    def _delta(self, steps: tuple[float, ...], pts: np.ndarray) -> np.ndarray:
        rest = steps[:-1]
        g = (lambda u: self._chunked(rest, u)) if rest else self.f
        y = math.cos(steps[-1])
        return shift_values(self.cfg, g, y, pts) - np.asarray(g(pts), dtype=float)

    def _chunked(self, steps: tuple[float, ...], pts) -> np.ndarray:
        lo = -1.0 + self.ENDPOINT_MARGIN
        flat = np.clip(np.ravel(np.asarray(pts, dtype=float)), lo, -lo)
        out = np.empty_like(flat)
        for start in range(0, flat.size, self.CHUNK):
            block = flat[start : start + self.CHUNK]
            out[start : start + self.CHUNK] = self._delta(steps, block)
        return out.reshape(np.shape(pts))


def difference_values(cfg: ShiftKernelConfig, f, query: DifferenceQuery, xs) -> np.ndarray:
    """Vectorized generalized difference at the points ``xs``."""
    for t in query.steps:
        if abs(t) >= math.pi:
            raise SingularArgumentError(f"difference steps must satisfy |t| < pi, got {t!r}")
    return DifferenceEvaluator(cfg, f).values(query.steps, np.asarray(xs, dtype=float))


def generalized_difference(cfg: ShiftKernelConfig, f, query: DifferenceQuery, x) -> float:
    """Generalized difference of order ``len(query.steps)`` at a single point."""
    out = difference_values(cfg, f, query, np.atleast_1d(np.asarray(x, dtype=float)))
    return float(out[0]) if np.ndim(x) == 0 else out


def difference_via_inclusion_exclusion(
    cfg: ShiftKernelConfig, f, query: DifferenceQuery, x
) -> float | np.ndarray:
    """Same difference, expanded over step subsets instead of recursively.

    The sign of a subset of size ``k`` is ``(-1)^(r-k)`` (and the empty subset
    contributes ``(-1)^r f``), which makes the expansion agree with the
    recursive product of ``(tau - identity)`` factors for every order.
    """
    from itertools import combinations

    for t in query.steps:
        if abs(t) >= math.pi:
            raise SingularArgumentError(f"difference steps must satisfy |t| < pi, got {t!r}")
    r = query.order
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    total = ((-1.0) ** r) * np.asarray(f(xs), dtype=float)
    for k in range(1, r + 1):
        sign = (-1.0) ** (r - k)
        for combo in combinations(range(r), k):
            ys = [math.cos(query.steps[i]) for i in combo]
            total = total + sign * np.asarray(shift_power(cfg, f, ys, xs), dtype=float)
    return float(total[0]) if np.ndim(x) == 0 else total


def boundedness_ratio(
    cfg: ShiftKernelConfig,
    f,
    t: float,
    params: SpaceParams,
    norm_cfg: NormConfig = NormConfig(),
) -> float:
    """Damped operator-norm ratio ``co(t) * ||tau_t f|| / ||f||``.

    Norms are taken over the clamped interval to avoid the prefactor
    singularity at the endpoints.
    """
    domain = clamped_domain()
    denom = weighted_norm(f, params, cfg.weight, norm_cfg, domain=domain)
    if denom <= 0.0:
        raise DegenerateInputError("boundedness ratio of the zero function is undefined")
    y = math.cos(float(t))
    numer = weighted_norm(
        lambda xs: shift_values(cfg, f, y, xs), params, cfg.weight, norm_cfg, domain=domain
    )
    return float(co_value(t)) * numer / denom


@dataclass
class KernelValidationReport:
    """Per-interpretation residuals of the structural kernel identities."""

    entries: list[dict]
    accepted: str | None
    x_grid_size: int
    y_grid_size: int

    def to_dict(self) -> dict:
        return {
            "entries": self.entries,
            "accepted": self.accepted,
            "x_grid_size": self.x_grid_size,
            "y_grid_size": self.y_grid_size,
        }


def _empirical_multipliers(
    cfg: ShiftKernelConfig, basis: JacobiParams, nmax: int, ys: np.ndarray, quad: int
) -> np.ndarray:
    """Multipliers m_n(y) = a_n(tau_y P_n) / a_n(P_n) of the candidate basis."""
    ea, eb = cfg.weight.si_squared_exponents()
    rule = gauss_jacobi_rule(JacobiParams(ea, eb), quad)
    mult = np.empty((nmax + 1, len(ys)))
    for n in range(nmax + 1):
        pn = lambda u, n=n: eval_jacobi(basis, n, u)
        pn_nodes = pn(rule.nodes)
        h_n = rule.integrate(pn_nodes * pn_nodes)
        for j, y in enumerate(ys):
            shifted = shift_values(cfg, pn, float(y), rule.nodes)
            mult[n, j] = rule.integrate(shifted * pn_nodes) / h_n
    return mult


def validate_kernel(
    cfg: ShiftKernelConfig,
    x_grid: np.ndarray,
    y_grid: np.ndarray,
    basis: JacobiParams | None = None,
    test_functions: Sequence[Callable] | None = None,
    nmax: int = 8,
    tolerance: float = 1e-6,
) -> KernelValidationReport:
    """Probe the structural identities of the kernel for both base factors.

    For each ``Si`` interpretation the report records the raw normalization
    residual ``max |tau_y(1, x) - 1|`` (with enforcement off), the identity
    residual ``max |tau_1(f, x) - f(x)|`` over the test functions, and -- when
    a candidate diagonal basis is supplied -- the multiplier-consistency
    residual ``max |a_n(tau_y f) - a_n(f) m_n(y)|`` where ``m_n`` comes from
    the action on the basis polynomials themselves.  The first interpretation
    whose normalization residual passes ``tolerance`` is accepted.
    """
    x_grid = np.asarray(x_grid, dtype=float)
    y_grid = np.asarray(y_grid, dtype=float)
    if test_functions is None:
        test_functions = [
            lambda u: np.ones_like(u),
            lambda u: u,
            lambda u: u * u,
            lambda u: np.exp(u),
        ]
    entries: list[dict] = []
    accepted = None
    for kind in (SiKind.ONE_MINUS_U_SQUARED, SiKind.ONE_MINUS_U):
        probe_cfg = ShiftKernelConfig(
            weight=WeightSpec(si=kind, alpha=cfg.weight.alpha),
            quadrature_size=cfg.quadrature_size,
            enforce_normalization=False,
        )
        enforced_cfg = ShiftKernelConfig(
            weight=probe_cfg.weight,
            quadrature_size=probe_cfg.quadrature_size,
            enforce_normalization=True,
        )
        ones = lambda u: np.ones_like(np.asarray(u, dtype=float))
        res4 = 0.0
        res4_enforced = 0.0
        for y in y_grid:
            vals = shift_values(probe_cfg, ones, float(y), x_grid)
            res4 = max(res4, float(np.max(np.abs(vals - 1.0))))
            vals_enf = shift_values(enforced_cfg, ones, float(y), x_grid)
            res4_enforced = max(res4_enforced, float(np.max(np.abs(vals_enf - 1.0))))
        res2 = 0.0
        for fn in test_functions:
            vals = shift_values(probe_cfg, fn, 1.0, x_grid)
            res2 = max(res2, float(np.max(np.abs(vals - np.asarray(fn(x_grid), dtype=float)))))
        res5 = None
        if basis is not None:
            quad = max(cfg.quadrature_size, 128)
            mult = _empirical_multipliers(probe_cfg, basis, nmax, y_grid, quad)
            ea, eb = probe_cfg.weight.si_squared_exponents()
            rule = gauss_jacobi_rule(JacobiParams(ea, eb), quad)
            basis_table = [eval_jacobi(basis, n, rule.nodes) for n in range(nmax + 1)]
            res5 = 0.0
            for fn in test_functions:
                coeff = np.array(
                    [
                        fourier_jacobi_coefficient(fn, n, basis, probe_cfg.weight, quad)
                        for n in range(nmax + 1)
                    ]
                )
                for j, y in enumerate(y_grid):
                    shifted_vals = shift_values(probe_cfg, fn, float(y), rule.nodes)
                    for n in range(nmax + 1):
                        lhs = rule.integrate(shifted_vals * basis_table[n])
                        res5 = max(res5, abs(lhs - coeff[n] * mult[n, j]))
        verdict = res4 <= tolerance
        entries.append(
            {
                "interpretation": kind.value,
                "normalization_residual": res4,
                "enforced_normalization_residual": res4_enforced,
                "identity_residual": res2,
                "multiplier_residual": res5,
                "verdict": bool(verdict),
            }
        )
        if verdict and accepted is None:
            accepted = kind.value
    return KernelValidationReport(
        entries=entries,
        accepted=accepted,
        x_grid_size=len(x_grid),
        y_grid_size=len(y_grid),
    )
