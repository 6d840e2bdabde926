"""Closed-form bound layer: the delta transform, product combination of
one-dimensional bounds, telescoping coefficients, the cubic root alpha and
Minkowski-dimension bounds for (n, d)-Besicovitch sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = [
    "IDENTITY_TOL",
    "BoundError",
    "DeltaValue",
    "AlphaRoot",
    "delta_of",
    "beta_from_delta",
    "combine_product",
    "telescoping_coefficients",
    "telescoping_coefficients_expanded",
    "alpha_root",
    "minkowski_bound",
    "minkowski_bound_alpha",
    "bound_table",
]

IDENTITY_TOL = 1e-12


class BoundError(ValueError):
    pass


@dataclass(frozen=True)
class DeltaValue:
    d: int
    beta: float
    delta: float


@dataclass(frozen=True)
class AlphaRoot:
    value: float
    residual: float


def delta_of(beta: float, d: int = 1) -> DeltaValue:
    """delta = (beta/d) / (beta/d - 1); has a pole at beta = d."""
    if d < 1:
        raise BoundError("d must be a positive integer")
    if not beta > d:
        raise BoundError(f"delta is defined only for beta > d (got beta={beta}, d={d})")
    s = beta / d
    return DeltaValue(d, beta, s / (s - 1))


def beta_from_delta(delta: float, d: int = 1) -> float:
    """Inverse of :func:`delta_of`: beta = d * delta / (delta - 1)."""
    if not delta > 1:
        raise BoundError(f"delta must exceed 1 (got {delta})")
    return d * delta / (delta - 1)


def _check_unit_range(betas):
    for i, b in enumerate(betas):
        if not 1 < b <= 2:
            raise BoundError(f"beta_{i + 1} = {b} lies outside (1, 2]")


def combine_product(betas) -> float:
    """Upper bound for beta(R_1 x ... x R_d) from upper bounds beta(R_i).

    The delta values multiply, so the output is the beta in dimension d whose
    delta equals prod_i beta_i / (beta_i - 1).
    """
    betas = [float(b) for b in betas]
    if not betas:
        raise BoundError("need at least one factor")
    _check_unit_range(betas)
    q = math.prod(delta_of(b, 1).delta for b in betas)
    return beta_from_delta(q, len(betas))


def telescoping_coefficients(betas) -> list[float]:
    """Coefficient of H(Y_1..Y_i), i = 1..d, after regrouping the weighted
    chain-rule sum.

    For i < d it is (beta_{i+1} - beta_i + 1) / (delta_1..delta_{i-1} beta_i beta_{i+1})
    with delta_j = beta_j / (beta_j - 1); the last one is 1 / (delta_1..delta_{d-1} beta_d).
    """
    betas = [float(b) for b in betas]
    _check_unit_range(betas)
    d = len(betas)
    out = []
    prefix = 1.0
    for i in range(d):
        b = betas[i]
        if i + 1 < d:
            nb = betas[i + 1]
            out.append((nb - b + 1) / (prefix * b * nb))
        else:
            out.append(1.0 / (prefix * b))
        prefix *= b / (b - 1)
    return out


def telescoping_coefficients_expanded(betas) -> list[float]:
    # Independent route: weights c_i = 1/(delta_1..delta_{i-1} beta_i) on
    # H(Y_i | Y_<i) = H(Y_<=i) - H(Y_<i), collected term by term.
    betas = [float(b) for b in betas]
    d = len(betas)
    c = []
    prefix = 1.0
    for b in betas:
        c.append(1.0 / (prefix * b))
        prefix *= b / (b - 1)
    coef = [0.0] * (d + 1)
    for i in range(1, d + 1):
        coef[i] += c[i - 1]
        coef[i - 1] -= c[i - 1]
    return coef[1:]


def alpha_root(iterations: int = 50) -> AlphaRoot:
    """Root of a^3 - 4a + 2 in (1, 2) by fixed-length bisection."""
    f = lambda a: a * a * a - 4 * a + 2
    lo, hi = 1.0, 2.0
    for _ in range(iterations):
        mid = 0.5 * (lo + hi)
        if f(mid) < 0:
            lo = mid
        else:
            hi = mid
    a = 0.5 * (lo + hi)
    return AlphaRoot(a, abs(f(a)))


def _check_nd(n, d):
    if not (isinstance(n, int) and isinstance(d, int)) or d < 1 or n < d:
        raise BoundError(f"need integers n >= d >= 1, got n={n!r}, d={d!r}")


def minkowski_bound(n: int, d: int, beta: float) -> float:
    """Lower bound (d / beta) * n on the Minkowski dimension of an (n, d)-Besicovitch set."""
    _check_nd(n, d)
    if beta < d:
        raise BoundError(f"beta must be at least d (got beta={beta}, d={d})")
    return d / beta * n


def minkowski_bound_alpha(n: int, d: int, alpha: float | None = None) -> float:
    """n * (q^d - 1) / q^d with q = alpha / (alpha - 1)."""
    _check_nd(n, d)
    a = alpha_root().value if alpha is None else alpha
    qd = (a / (a - 1)) ** d
    return n * (qd - 1) / qd


def bound_table(beta: float, d_max: int) -> list[dict]:
    """Rows d = 1..d_max of the d-fold product bound started from ``beta``."""
    _check_unit_range([beta])
    if d_max < 1:
        raise BoundError("d_max must be >= 1")
    delta = delta_of(beta, 1).delta
    rows = []
    for d in range(1, d_max + 1):
        qd = delta**d
        rows.append(
            {
                "d": d,
                "beta_in": beta,
                "delta": delta,
                "beta_out": d * qd / (qd - 1),
                "mink_factor": (qd - 1) / qd,
                "note": "outside the product range (d = 1)" if d == 1 else "",
            }
        )
    return rows
