"""Jacobi polynomials, Gauss-Jacobi quadrature, and Fourier-Jacobi coefficients.

Conventions used throughout the package:

* polynomials are normalized so that ``eval_jacobi(params, n, 1.0) == 1.0``;
* Gauss rules integrate against the weight ``(1-x)^a (1+x)^b`` on ``[-1, 1]``;
* general polynomials are stored as Chebyshev coefficient vectors.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev as _cheb

from .errors import ConvergenceError, EvaluationError, ParameterDomainError

__all__ = [
    "JacobiParams",
    "QuadratureRule",
    "PolynomialRep",
    "eval_jacobi",
    "jacobi_table",
    "gauss_jacobi_rule",
    "fourier_jacobi_coefficient",
]

_NEWTON_TOL = 1e-14
_NEWTON_MAX_ITER = 100


@dataclass(frozen=True)
class JacobiParams:
    """Exponent pair ``(a, b)`` of the weight ``(1-x)^a (1+x)^b``."""

    a: float
    b: float

    def __post_init__(self):
        if not (math.isfinite(self.a) and math.isfinite(self.b)):
            raise ParameterDomainError("Jacobi exponents must be finite")
        if self.a <= -1.0 or self.b <= -1.0:
            raise ParameterDomainError(
                f"Jacobi exponents must exceed -1, got a={self.a}, b={self.b}"
            )

    def weight_mass(self) -> float:
        """Total mass ``int_-1^1 (1-x)^a (1+x)^b dx = 2^(a+b+1) B(a+1, b+1)``."""
        a, b = self.a, self.b
        return math.exp(
            (a + b + 1.0) * math.log(2.0)
            + math.lgamma(a + 1.0)
            + math.lgamma(b + 1.0)
            - math.lgamma(a + b + 2.0)
        )

    def si_squared_exponents(self) -> tuple[float, float]:
        """This pair itself, so a ``JacobiParams`` can serve directly as the
        measure argument of :func:`fourier_jacobi_coefficient` (coefficients
        taken against the family's own orthogonality weight)."""
        return (self.a, self.b)


def _recurrence_pass(a: float, b: float, n: int, x: np.ndarray) -> np.ndarray:
    """Standard-normalization Jacobi value P_n^(a,b)(x) by three-term recurrence."""
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev
    p = (a + 1.0) + (a + b + 2.0) * (x - 1.0) / 2.0
    for k in range(2, n + 1):
        s = 2.0 * k + a + b
        c1 = 2.0 * k * (k + a + b) * (s - 2.0)
        c2 = (s - 1.0) * (a * a - b * b)
        c3 = (s - 1.0) * s * (s - 2.0)
        c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s
        p, p_prev = ((c2 + c3 * x) * p - c4 * p_prev) / c1, p
    return p


def eval_jacobi(params: JacobiParams, n: int, x):
    """Evaluate the degree-``n`` Jacobi polynomial normalized to 1 at ``x = 1``.

    Parameters
    ----------
    params : JacobiParams
        Weight exponents of the family.
    n : int
        Polynomial degree, ``n >= 0``.
    x : float or ndarray
        Evaluation points in ``[-1, 1]`` (evaluation outside is permitted but
        the normalization is only meaningful on the interval).
    """
    if n < 0:
        raise ParameterDomainError(f"degree must be nonnegative, got {n}")
    xs = np.asarray(x, dtype=float)
    value = _recurrence_pass(params.a, params.b, n, xs)
    at_one = _recurrence_pass(params.a, params.b, n, np.asarray(1.0))
    out = value / at_one
    return float(out) if np.isscalar(x) or np.ndim(x) == 0 else out


def jacobi_table(params: JacobiParams, nmax: int, x) -> np.ndarray:
    """Normalized values of degrees ``0..nmax`` at ``x``; shape ``(nmax+1,) + x.shape``."""
    if nmax < 0:
        raise ParameterDomainError(f"nmax must be nonnegative, got {nmax}")
    a, b = params.a, params.b
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    table = np.empty((nmax + 1,) + xs.shape, dtype=float)
    ones = np.empty(nmax + 1)
    table[0] = 1.0
    ones[0] = 1.0
    if nmax >= 1:
        table[1] = (a + 1.0) + (a + b + 2.0) * (xs - 1.0) / 2.0
        ones[1] = a + 1.0
    for k in range(2, nmax + 1):
        s = 2.0 * k + a + b
        c1 = 2.0 * k * (k + a + b) * (s - 2.0)
        c2 = (s - 1.0) * (a * a - b * b)
        c3 = (s - 1.0) * s * (s - 2.0)
        c4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * s
        table[k] = ((c2 + c3 * xs) * table[k - 1] - c4 * table[k - 2]) / c1
        ones[k] = ((c2 + c3) * ones[k - 1] - c4 * ones[k - 2]) / c1
    table /= ones.reshape((-1,) + (1,) * xs.ndim)
    return table


def _orthonormal_coefficients(a: float, b: float, m: int):
    """Recurrence coefficients (alpha_k, beta_k) of the monic Jacobi family.

    beta_0 is the total weight mass; the orthonormal recurrence is
    sqrt(beta_{k+1}) p_{k+1} = (x - alpha_k) p_k - sqrt(beta_k) p_{k-1}.
    """
    alphas = np.empty(m)
    betas = np.empty(m + 1)
    betas[0] = JacobiParams(a, b).weight_mass()
    for k in range(m):
        if k == 0:
            alphas[0] = (b - a) / (a + b + 2.0)
        else:
            s = 2.0 * k + a + b
            alphas[k] = (b * b - a * a) / (s * (s + 2.0))
    for k in range(1, m + 1):
        if k == 1:
            betas[1] = 4.0 * (a + 1.0) * (b + 1.0) / ((a + b + 2.0) ** 2 * (a + b + 3.0))
        else:
            s = 2.0 * k + a + b
            betas[k] = (
                4.0 * k * (k + a) * (k + b) * (k + a + b) / (s * s * (s * s - 1.0))
            )
    return alphas, betas


def _orthonormal_eval(alphas, betas, m: int, x: np.ndarray, derivative: bool = False):
    """Value (and optionally derivative) of the degree-m orthonormal polynomial."""
    p_prev = np.zeros_like(x)
    p = np.full_like(x, 1.0 / math.sqrt(betas[0]))
    d_prev = np.zeros_like(x)
    d = np.zeros_like(x)
    for k in range(m):
        root_next = math.sqrt(betas[k + 1])
        root_here = math.sqrt(betas[k]) if k >= 1 else 0.0
        p_new = ((x - alphas[k]) * p - root_here * p_prev) / root_next
        if derivative:
            d_new = ((x - alphas[k]) * d + p - root_here * d_prev) / root_next
            d_prev, d = d, d_new
        p_prev, p = p, p_new
    if derivative:
        return p, d
    return p


def _orthonormal_table(alphas, betas, m: int, x: np.ndarray) -> np.ndarray:
    """Orthonormal values of degrees 0..m-1 at x, shape (m, len(x))."""
    table = np.empty((m, len(x)))
    table[0] = 1.0 / math.sqrt(betas[0])
    if m >= 2:
        table[1] = (x - alphas[0]) * table[0] / math.sqrt(betas[1])
    for k in range(1, m - 1):
        table[k + 1] = (
            (x - alphas[k]) * table[k] - math.sqrt(betas[k]) * table[k - 1]
        ) / math.sqrt(betas[k + 1])
    return table


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss rule exact for polynomials of degree ``2*size - 1`` against its weight."""

    params: JacobiParams
    nodes: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        if self.nodes.ndim != 1 or self.nodes.shape != self.weights.shape:
            raise ParameterDomainError("nodes and weights must be 1-D and congruent")
        if np.any(np.diff(self.nodes) <= 0.0):
            raise ParameterDomainError("nodes must be strictly increasing")
        if np.any(np.abs(self.nodes) >= 1.0):
            raise ParameterDomainError("nodes must lie strictly inside (-1, 1)")
        if np.any(self.weights <= 0.0):
            raise ParameterDomainError("weights must be positive")

    @property
    def size(self) -> int:
        return len(self.nodes)

    def integrate(self, values: np.ndarray) -> float:
        """Weighted sum of values sampled at the nodes."""
        return float(np.dot(self.weights, values))


def _newton_nodes(alphas, betas, m: int) -> np.ndarray:
    guesses = np.cos(np.pi * (2.0 * np.arange(m, dtype=float) + 1.0) / (2.0 * m))
    x = guesses.copy()
    active = np.ones(m, dtype=bool)
    for _ in range(_NEWTON_MAX_ITER):
        p, d = _orthonormal_eval(alphas, betas, m, x[active], derivative=True)
        step = p / d
        x[active] -= step
        still = np.abs(step) > _NEWTON_TOL
        if not still.any():
            active = np.zeros(m, dtype=bool)
            break
        idx = np.flatnonzero(active)
        active = np.zeros(m, dtype=bool)
        active[idx[still]] = True
    x.sort()
    return x


def _bisection_nodes(alphas, betas, m: int) -> np.ndarray:
    """Deterministic fallback: bracket all roots on a dense grid, then bisect."""
    grid = np.cos(np.linspace(np.pi, 0.0, max(8 * m, 4096)))
    vals = _orthonormal_eval(alphas, betas, m, grid)
    signs = np.sign(vals)
    flips = np.flatnonzero(signs[:-1] * signs[1:] < 0.0)
    if len(flips) != m:
        raise ConvergenceError(
            f"Gauss-Jacobi node search found {len(flips)} of {m} roots",
            residual=float(np.min(np.abs(vals))),
        )
    lo = grid[flips].copy()
    hi = grid[flips + 1].copy()
    flo = vals[flips].copy()
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        fm = _orthonormal_eval(alphas, betas, m, mid)
        left = flo * fm > 0.0
        lo = np.where(left, mid, lo)
        flo = np.where(left, fm, flo)
        hi = np.where(left, hi, mid)
    x = 0.5 * (lo + hi)
    for _ in range(3):
        p, d = _orthonormal_eval(alphas, betas, m, x, derivative=True)
        x = x - p / d
    return np.sort(x)


@lru_cache(maxsize=256)
def _cached_rule(a: float, b: float, m: int) -> QuadratureRule:
    alphas, betas = _orthonormal_coefficients(a, b, m)
    x = _newton_nodes(alphas, betas, m)
    gaps_ok = bool(np.all(np.diff(x) > 1e-13)) if m > 1 else True
    inside = bool(np.all(np.abs(x) < 1.0))
    if not (gaps_ok and inside):
        x = _bisection_nodes(alphas, betas, m)
    table = _orthonormal_table(alphas, betas, m, x)
    weights = 1.0 / np.sum(table * table, axis=0)
    rule = QuadratureRule(JacobiParams(a, b), x, weights)
    rule.nodes.flags.writeable = False
    rule.weights.flags.writeable = False
    return rule


def gauss_jacobi_rule(params: JacobiParams, size: int) -> QuadratureRule:
    """Gauss-Jacobi rule with ``size`` nodes for the weight ``(1-x)^a (1+x)^b``.

    Nodes are found by Newton iteration from Chebyshev initial guesses
    (tolerance 1e-14, at most 100 iterations), with a bracketed-bisection
    fallback if the iteration produces collided or exterior roots.  Weights
    come from the Christoffel function of the orthonormal recurrence.
    """
    if size < 1:
        raise ParameterDomainError(f"rule size must be >= 1, got {size}")
    return _cached_rule(float(params.a), float(params.b), int(size))


def fourier_jacobi_coefficient(
    f: Callable[[np.ndarray], np.ndarray],
    n: int,
    basis: JacobiParams,
    weight,
    quadrature_size: int = 256,
) -> float:
    """Coefficient ``int_-1^1 f(x) P_n(x) Si(x)^2 dx`` of ``f`` against the basis.

    ``weight`` supplies the squared base factor ``Si(x)^2`` through its
    ``si_squared_exponents()`` method; the Gauss rule for that weight makes the
    quadrature exact whenever ``f`` is a polynomial of moderate degree.
    """
    ea, eb = weight.si_squared_exponents()
    rule = gauss_jacobi_rule(JacobiParams(ea, eb), quadrature_size)
    fvals = np.asarray(f(rule.nodes), dtype=float)
    if not np.all(np.isfinite(fvals)):
        bad = int(np.flatnonzero(~np.isfinite(fvals))[0])
        raise EvaluationError(
            f"function returned a non-finite value at node {rule.nodes[bad]!r}",
            node=float(rule.nodes[bad]),
        )
    pvals = eval_jacobi(basis, n, rule.nodes)
    return rule.integrate(fvals * pvals)


@dataclass
class PolynomialRep:
    """Polynomial stored as Chebyshev (first kind) coefficients on ``[-1, 1]``."""

    coefficients: np.ndarray

    def __post_init__(self):
        coeffs = np.atleast_1d(np.asarray(self.coefficients, dtype=float))
        if coeffs.ndim != 1 or len(coeffs) == 0:
            raise ParameterDomainError("coefficient vector must be 1-D and nonempty")
        if not np.all(np.isfinite(coeffs)):
            raise ParameterDomainError("coefficients must be finite")
        trimmed = _cheb.chebtrim(coeffs, tol=0.0)
        self.coefficients = trimmed if len(trimmed) else np.zeros(1)

    @property
    def degree(self) -> int:
        return len(self.coefficients) - 1

    def __call__(self, x):
        return _cheb.chebval(np.asarray(x, dtype=float), self.coefficients)

    def __add__(self, other: "PolynomialRep") -> "PolynomialRep":
        return PolynomialRep(_cheb.chebadd(self.coefficients, other.coefficients))

    def __sub__(self, other: "PolynomialRep") -> "PolynomialRep":
        return PolynomialRep(_cheb.chebsub(self.coefficients, other.coefficients))

    def scaled(self, c: float) -> "PolynomialRep":
        return PolynomialRep(self.coefficients * float(c))

    @classmethod
    def zero(cls) -> "PolynomialRep":
        return cls(np.zeros(1))

    @classmethod
    def from_function(cls, f, degree: int) -> "PolynomialRep":
        """Interpolant of ``f`` at the ``degree + 1`` Chebyshev points of ``[-1, 1]``."""
        if degree < 0:
            raise ParameterDomainError(f"degree must be nonnegative, got {degree}")
        coeffs = _cheb.chebinterpolate(lambda t: np.asarray(f(t), dtype=float), degree)
        return cls(coeffs)

    def to_dict(self) -> dict:
        return {"basis": "chebyshev", "coefficients": [float(c) for c in self.coefficients]}

    @classmethod
    def from_dict(cls, payload: dict) -> "PolynomialRep":
        if payload.get("basis") != "chebyshev":
            raise ParameterDomainError("unsupported polynomial basis in payload")
        return cls(np.asarray(payload["coefficients"], dtype=float))
