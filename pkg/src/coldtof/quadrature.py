"""Adaptive quadrature used by every integral in the package.

Backed by QUADPACK's QAGS (21/10-point Gauss-Kronrod pairs with epsilon
extrapolation) through :func:`scipy.integrate.quad`. Failure to converge is
turned into :class:`IntegrationError` instead of a warning.
"""

from __future__ import annotations

from collections.abc import Callable, Iterable

import numpy as np
from scipy import integrate as _sp

from .core import IntegrationError

DEFAULT_RTOL = 1e-11
DEFAULT_ATOL = 1e-14
MAX_SUBINTERVALS = 1000


def integrate(
    f: Callable[[float], float],
    a: float,
    b: float,
    tol_rel: float = DEFAULT_RTOL,
    tol_abs: float = DEFAULT_ATOL,
    points: Iterable[float] | None = None,
) -> float:
    """Integrate ``f`` over [a, b].

    Stops once the Gauss-Kronrod error estimate is below
    ``max(tol_abs, tol_rel * |result|)``. ``points`` are interior
    breakpoints where the integrand has narrow structure; pass them whenever
    a peak is much narrower than [a, b], otherwise the first Kronrod sweep can
    step over it.
    """
    if not a < b:
        raise ValueError(f"need a < b, got a={a!r}, b={b!r}")
    pts = None
    if points is not None:
        pts = sorted({float(p) for p in points if a < p < b})
        pts = pts or None
    # a fourth element (the QUADPACK message) is only returned when ier > 0
    value, abserr, _info, *rest = _sp.quad(
        f, a, b, epsabs=tol_abs, epsrel=tol_rel, points=pts,
        limit=MAX_SUBINTERVALS, full_output=1,
    )
    if not np.isfinite(value):
        raise IntegrationError(f"non-finite integral over [{a}, {b}]")
    if rest:
        bound = max(tol_abs, tol_rel * abs(value))
        # QUADPACK also flags round-off limited runs whose estimate is still fine
        if abserr > bound:
            raise IntegrationError(
                f"quadrature over [{a}, {b}] did not converge: {rest[0]!s} "
                f"(estimate {value!r}, error {abserr:.3g} > {bound:.3g})"
            )
    return float(value)
