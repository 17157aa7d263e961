"""Row identifiability constraints and the pseudo-Huber smoothed median.

Coefficient rows are only identified up to an additive constant, so a row
functional ``g`` with the equivariance property ``g(x + a) = g(x) + a`` is
used to pick a unique representative: subtracting ``g(row)`` from a row
makes ``g`` vanish on it.  Two constraint kinds are supported:

* ``Reference(index)`` pins one category's coefficient to zero,
* ``PseudoHuber(delta)`` zeroes a smooth, robust location estimate of the
  row that interpolates between the median (small ``delta``) and the mean
  (large ``delta``).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import ConvergenceError, InvalidInputError

DEFAULT_PSEUDO_HUBER_DELTA = 0.1


@dataclass(frozen=True)
class PseudoHuber:
    """Constrain a row to have pseudo-Huber smoothed median zero."""

    delta: float = DEFAULT_PSEUDO_HUBER_DELTA

    def __post_init__(self):
        if not (np.isfinite(self.delta) and self.delta > 0):
            raise InvalidInputError(f"PseudoHuber delta must be positive, got {self.delta}")


@dataclass(frozen=True)
class Reference:
    """Constrain a row by pinning the coefficient of one category to zero."""

    index: int

    def __post_init__(self):
        if self.index < 0:
            raise InvalidInputError(f"Reference category index must be >= 0, got {self.index}")


ConstraintSpec = Union[PseudoHuber, Reference]


def _check_row(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size < 1:
        raise InvalidInputError(f"expected a nonempty 1-d array, got shape {x.shape}")
    if not np.all(np.isfinite(x)):
        raise InvalidInputError("row contains non-finite entries")
    return x


def _irls_weights(x: np.ndarray, center: float, delta: float) -> np.ndarray:
    return 1.0 / np.sqrt(1.0 + ((x - center) / delta) ** 2)


def pseudo_huber_center(
    x: np.ndarray,
    delta: float = DEFAULT_PSEUDO_HUBER_DELTA,
    tol: float = 1e-10,
    max_iter: int = 1000,
) -> float:
    """Minimizer of ``sum_j delta^2 * sqrt(1 + ((x_j - c)/delta)^2)`` over ``c``.

    Iteratively reweighted least squares: each step replaces ``c`` with the
    weighted mean of ``x`` under weights ``w_j = (1 + ((x_j - c)/delta)^2)^-1/2``,
    starting from the sample median.  The objective is strictly convex in
    ``c``, so the fixed point is the unique global minimizer.

    Parameters
    ----------
    x
        Row values (finite).
    delta
        Smoothing parameter; small values approach the median, large values
        the mean.
    tol
        Stop when successive iterates differ by less than this.
    max_iter
        Iteration cap; exceeding it raises ``ConvergenceError`` carrying the
        last iterate.
    """
    x = _check_row(x)
    if not (np.isfinite(delta) and delta > 0):
        raise InvalidInputError(f"delta must be positive, got {delta}")
    if not (np.isfinite(tol) and tol > 0):
        raise InvalidInputError(f"tol must be positive, got {tol}")

    c = float(np.median(x))
    for _ in range(max_iter):
        w = _irls_weights(x, c, delta)
        c_next = float(np.sum(w * x) / np.sum(w))
        if abs(c_next - c) < tol:
            return c_next
        c = c_next
    raise ConvergenceError(
        f"pseudo-Huber center did not converge within {max_iter} iterations",
        last_iterate=c,
    )


def pseudo_huber_gradient(
    x: np.ndarray,
    delta: float = DEFAULT_PSEUDO_HUBER_DELTA,
    center: float | None = None,
) -> np.ndarray:
    """Exact gradient of the pseudo-Huber center with respect to the row.

    By implicit differentiation of the stationarity condition, the entries
    are ``w_j^3 / sum(w^3)`` with the weights evaluated at the converged
    center.  They are positive and sum to one.

    Parameters
    ----------
    center
        Converged center for ``(x, delta)``; computed if omitted.
    """
    x = _check_row(x)
    if center is None:
        center = pseudo_huber_center(x, delta)
    w3 = _irls_weights(x, center, delta) ** 3
    return w3 / np.sum(w3)


def evaluate_constraint(spec: ConstraintSpec, row: np.ndarray) -> tuple[float, np.ndarray]:
    """Evaluate ``g(row)`` and its gradient for a constraint kind.

    Returns
    -------
    value, gradient
        ``Reference(j)`` gives ``(row[j], e_j)``; ``PseudoHuber(delta)``
        gives the smoothed median and its exact gradient.
    """
    row = _check_row(row)
    if isinstance(spec, Reference):
        if spec.index >= row.size:
            raise InvalidInputError(
                f"Reference index {spec.index} out of range for row of length {row.size}"
            )
        grad = np.zeros(row.size)
        grad[spec.index] = 1.0
        return float(row[spec.index]), grad
    if isinstance(spec, PseudoHuber):
        center = pseudo_huber_center(row, spec.delta)
        return center, pseudo_huber_gradient(row, spec.delta, center=center)
    raise InvalidInputError(f"unknown constraint spec: {spec!r}")


def constraint_value(spec: ConstraintSpec, row: np.ndarray) -> float:
    """``g(row)`` without the gradient (cheaper for Reference rows)."""
    row = _check_row(row)
    if isinstance(spec, Reference):
        if spec.index >= row.size:
            raise InvalidInputError(
                f"Reference index {spec.index} out of range for row of length {row.size}"
            )
        return float(row[spec.index])
    if isinstance(spec, PseudoHuber):
        return pseudo_huber_center(row, spec.delta)
    raise InvalidInputError(f"unknown constraint spec: {spec!r}")


def center_beta(beta: np.ndarray, spec: ConstraintSpec) -> np.ndarray:
    """Center rows 1..p-1 of a coefficient matrix so ``g`` vanishes on each.

    Row 0 (the intercept) absorbs the category detection effects and is
    never centered.  Idempotent by the equivariance of ``g``.
    """
    beta = np.asarray(beta, dtype=float)
    out = beta.copy()
    for k in range(1, beta.shape[0]):
        out[k] = beta[k] - constraint_value(spec, beta[k])
    return out


def parse_constraint(text: str) -> ConstraintSpec:
    """Parse a constraint string: ``pseudo-huber:<delta>`` or ``reference:<index>``.

    The bare forms ``pseudo-huber`` and ``reference`` use delta 0.1 and
    category 0 respectively.
    """
    name, _, arg = text.strip().partition(":")
    name = name.strip().lower()
    if name in ("pseudo-huber", "pseudohuber", "ph"):
        delta = float(arg) if arg else DEFAULT_PSEUDO_HUBER_DELTA
        return PseudoHuber(delta=delta)
    if name in ("reference", "ref"):
        index = int(arg) if arg else 0
        return Reference(index=index)
    raise InvalidInputError(
        f"unrecognized constraint {text!r}; expected 'pseudo-huber:<delta>' or 'reference:<index>'"
    )
