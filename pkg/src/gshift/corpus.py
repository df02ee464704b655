"""Fixed, versioned corpus of test functions on ``[-1, 1]``.

Every entry is referenced by a stable string id so experiment reports stay
reproducible across runs and releases.  Parameterized families are spelled
``name:args`` (for example ``abspow:0.5`` or ``polycoef:1,0,2``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev as _cheb
from numpy.polynomial import polynomial as _poly

from .errors import ParameterDomainError
from .jacobi import JacobiParams, eval_jacobi

__all__ = ["CORPUS_VERSION", "CorpusFunction", "default_corpus", "get_function", "list_functions"]

#: Bump when the id set or any member definition changes.
CORPUS_VERSION = "1.0"

_EIGEN_PARAMS = JacobiParams(2.0, 2.0)
_CUBIC_KINK = -0.2


@dataclass(frozen=True)
class CorpusFunction:
    """One corpus member: id, human description, smoothness kind, callable."""

    id: str
    description: str
    kind: str
    fn: Callable[[np.ndarray], np.ndarray]

    def __call__(self, x):
        return self.fn(x)


def _chebyshev(k: int) -> Callable:
    coeffs = np.zeros(k + 1)
    coeffs[k] = 1.0
    return lambda x, c=coeffs: _cheb.chebval(np.asarray(x, dtype=float), c)


def _eigenpoly(n: int) -> Callable:
    return lambda x, n=n: eval_jacobi(_EIGEN_PARAMS, n, x)


def _abs_power(center: float, power: float) -> Callable:
    return lambda x, c=center, s=power: np.abs(np.asarray(x, dtype=float) - c) ** s


def _piecewise_cubic(x) -> np.ndarray:
    """C^1 but not C^2: the second derivative jumps at the interior kink."""
    u = np.asarray(x, dtype=float) - _CUBIC_KINK
    left = -0.3 * u**3
    right = u**2 + 0.5 * u**3
    return np.where(u < 0.0, left, right)


def _exp(x) -> np.ndarray:
    return np.exp(np.asarray(x, dtype=float))


def _parse_float(raw: str, context: str) -> float:
    try:
        return float(raw)
    except ValueError:
        raise ParameterDomainError(f"bad numeric argument {raw!r} in {context!r}") from None


def _fixed_entries() -> list[CorpusFunction]:
    entries: list[CorpusFunction] = []
    for k in range(9):
        entries.append(
            CorpusFunction(
                id=f"poly:{k}",
                description=f"Chebyshev polynomial T_{k}",
                kind="polynomial",
                fn=_chebyshev(k),
            )
        )
    for n in (2, 5, 8):
        entries.append(
            CorpusFunction(
                id=f"eig:{n}",
                description=f"degree-{n} shift eigenpolynomial (value 1 at x = 1)",
                kind="polynomial",
                fn=_eigenpoly(n),
            )
        )
    for s in ("0.5", "1.0", "1.5"):
        entries.append(
            CorpusFunction(
                id=f"abspow:{s}",
                description=f"|x - 1/4|^{s}",
                kind="kink",
                fn=_abs_power(0.25, float(s)),
            )
        )
    entries.append(
        CorpusFunction(id="exp", description="exp(x)", kind="analytic", fn=_exp)
    )
    entries.append(
        CorpusFunction(
            id="cubic_c1",
            description=f"piecewise cubic, C^1 but not C^2 at x = {_CUBIC_KINK}",
            kind="piecewise",
            fn=_piecewise_cubic,
        )
    )
    return entries


_FIXED = {entry.id: entry for entry in _fixed_entries()}


def default_corpus() -> list[CorpusFunction]:
    """The fixed corpus, in its canonical order."""
    return list(_FIXED.values())


def list_functions() -> list[dict]:
    """Id, description, and kind of every fixed corpus member."""
    return [
        {"id": entry.id, "description": entry.description, "kind": entry.kind}
        for entry in default_corpus()
    ]


def get_function(function_id: str) -> CorpusFunction:
    """Resolve an id to a corpus member.

    Beyond the fixed ids this accepts the parameterized families
    ``absshift:<center>`` (``|x - center|``), ``abspow:<power>``
    (``|x - 1/4|^power`` with ``power > 0``), and
    ``polycoef:<c0>,<c1>,...`` (monomial coefficients, low degree first).
    """
    found = _FIXED.get(function_id)
    if found is not None:
        return found
    name, sep, args = function_id.partition(":")
    if not sep:
        raise ParameterDomainError(f"unknown corpus function id {function_id!r}")
    if name == "absshift":
        center = _parse_float(args, function_id)
        if not -1.0 <= center <= 1.0:
            raise ParameterDomainError(f"absshift center must lie in [-1, 1], got {center}")
        return CorpusFunction(
            id=function_id,
            description=f"|x - {center}|",
            kind="kink",
            fn=_abs_power(center, 1.0),
        )
    if name == "abspow":
        power = _parse_float(args, function_id)
        if power <= 0.0:
            raise ParameterDomainError(f"abspow exponent must be positive, got {power}")
        return CorpusFunction(
            id=function_id,
            description=f"|x - 1/4|^{power}",
            kind="kink",
            fn=_abs_power(0.25, power),
        )
    if name == "polycoef":
        parts = [part for part in args.split(",") if part != ""]
        if not parts:
            raise ParameterDomainError(f"polycoef needs at least one coefficient: {function_id!r}")
        coeffs = np.array([_parse_float(part, function_id) for part in parts])
        return CorpusFunction(
            id=function_id,
            description=f"polynomial with monomial coefficients {coeffs.tolist()}",
            kind="polynomial",
            fn=lambda x, c=coeffs: _poly.polyval(np.asarray(x, dtype=float), c),
        )
    if name == "eig":
        try:
            degree = int(args)
        except ValueError:
            raise ParameterDomainError(f"bad eigenpolynomial degree in {function_id!r}") from None
        if degree < 0:
            raise ParameterDomainError(f"eigenpolynomial degree must be >= 0, got {degree}")
        return CorpusFunction(
            id=function_id,
            description=f"degree-{degree} shift eigenpolynomial (value 1 at x = 1)",
            kind="polynomial",
            fn=_eigenpoly(degree),
        )
    raise ParameterDomainError(f"unknown corpus function id {function_id!r}")
