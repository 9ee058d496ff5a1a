"""Scalar special functions with rigorous (or budgeted) error bounds.

All results are :class:`BoundedValue` records. ``zeta`` and
``dirichlet_beta`` sum their defining series directly; ``theta3`` sums the
Gaussian series; ``mellin_theta`` integrates ``t**(n-1) * (theta3**2 - 1)``
numerically with the ``1/Gamma(n)`` normalisation.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .quadrature import integrate
from .summation import compensated_total

MIN_TOL = 1e-13

# theta3 saturation: stop once the remaining tail is below this fraction of the sum
_THETA_REL = 2.0 ** -60


@dataclass(frozen=True)
class BoundedValue:
    value: float
    error_bound: float
    terms_used: int

    def __post_init__(self):
        if not (self.error_bound >= 0 and math.isfinite(self.error_bound)):
            raise ValueError(f"error_bound must be finite and >= 0, got {self.error_bound}")
        if self.terms_used < 1:
            raise ValueError("terms_used must be >= 1")

    @property
    def interval(self) -> tuple[float, float]:
        return self.value - self.error_bound, self.value + self.error_bound


def _check_tol(tol: float) -> None:
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    if tol < MIN_TOL:
        raise DomainError(f"tolerance {tol:g} is below the attainable floor {MIN_TOL:g}")


def _power_tail(m: int, s: float) -> tuple[float, float]:
    """Bracket ``sum_{j>m} j**-s`` between its two integral comparisons."""
    hi = m ** (1.0 - s) / (s - 1.0)
    lo = (m + 1) ** (1.0 - s) / (s - 1.0)
    return lo, hi


def zeta(s: float, tol: float = 1e-12) -> BoundedValue:
    """Riemann zeta at real ``s > 1`` by direct summation.

    The discarded tail ``sum_{j>M} j**-s`` lies between the integrals of
    ``x**-s`` over ``[M+1, inf)`` and ``[M, inf)``. The midpoint of that
    bracket is added to the partial sum and its half-width is the error
    bound, so ``M`` grows like ``tol**(-1/s)`` rather than ``tol**(-1/(s-1))``.

    >>> round(zeta(2.0, 1e-10).value, 10)
    1.6449340668
    """
    if not s > 1:
        raise DomainError(f"zeta series diverges for s <= 1 (got s={s})")
    _check_tol(tol)
    # half-width ~ M**-s / 2; start from that estimate and walk to the minimal M
    m = max(1, int(math.ceil((2.0 * tol) ** (-1.0 / s))))
    while m > 1:
        lo, hi = _power_tail(m - 1, s)
        if 0.5 * (hi - lo) > tol:
            break
        m -= 1
    while True:
        lo, hi = _power_tail(m, s)
        if 0.5 * (hi - lo) <= tol:
            break
        m += 1
    j = np.arange(m, 0, -1, dtype=float)
    partial = compensated_total(j ** -s)
    return BoundedValue(partial + 0.5 * (lo + hi), 0.5 * (hi - lo), m)


def dirichlet_beta(s: float, tol: float = 1e-12) -> BoundedValue:
    """Dirichlet beta ``sum_{m>=0} (-1)**m (2m+1)**-s`` for real ``s > 0``.

    With ``M`` terms summed, the limit lies between ``S_M`` and ``S_{M+1}``.
    The returned value is their midpoint and the bound is half the first
    omitted term.
    """
    if not s > 0:
        raise DomainError(f"beta series needs s > 0 (got s={s})")
    _check_tol(tol)
    m = max(1, int(math.ceil(0.5 * ((2.0 * tol) ** (-1.0 / s) - 1.0))))
    while m > 1 and 0.5 * (2 * m - 1) ** -s <= tol:
        m -= 1
    while 0.5 * (2 * m + 1) ** -s > tol:
        m += 1
    idx = np.arange(m - 1, -1, -1)
    terms = np.where(idx % 2 == 0, 1.0, -1.0) * (2.0 * idx + 1.0) ** -s
    partial = compensated_total(terms)
    omitted = (-1.0) ** m * (2 * m + 1) ** -s
    return BoundedValue(partial + 0.5 * omitted, 0.5 * abs(omitted), m)


def gamma_positive_integer(n: int) -> float:
    """``Gamma(n) = (n-1)!`` as a float; raises if it is not representable."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise DomainError(f"gamma_positive_integer needs an integer n >= 1 (got {n!r})")
    try:
        return float(math.factorial(int(n) - 1))
    except OverflowError:
        raise DomainError(f"Gamma({n}) = {n - 1}! overflows binary64") from None


def _theta3_terms(t: float, tol: float) -> int:
    """Smallest J with the geometric tail bound from index J below ``tol``."""
    j = max(1, int(math.sqrt(max(0.0, -math.log(tol) / t))))
    while j > 1 and _theta3_tail(t, j - 1) <= tol:
        j -= 1
    while _theta3_tail(t, j) > tol:
        j += 1
    return j


def _theta3_tail(t: float, j: int) -> float:
    # 2 * sum_{i>=j} exp(-i^2 t) <= 2 exp(-j^2 t) / (1 - exp(-(2j+1) t))
    return 2.0 * math.exp(-j * j * t) / -math.expm1(-(2 * j + 1) * t)


def theta3(t: float, tol: float = 1e-15) -> BoundedValue:
    """``theta3(q) = sum_{n in Z} q**(n*n)`` at ``q = exp(-t)``, for ``t > 0``.

    Terms ``j = 1 .. J-1`` are summed; the tail from ``J`` on is bounded by a
    geometric series because ``(J+i)**2 - J**2 >= (2J+1) i``.
    """
    if not t > 0:
        raise DomainError(f"theta3 needs t > 0 (got t={t})")
    if not tol > 0:
        raise DomainError(f"tolerance must be positive, got {tol}")
    j = _theta3_terms(t, tol)
    idx = np.arange(j - 1, 0, -1, dtype=float)
    s = compensated_total(np.exp(-idx * idx * t)) if j > 1 else 0.0
    return BoundedValue(1.0 + 2.0 * s, _theta3_tail(t, j), j)


def theta3_squared_minus_one(t: np.ndarray) -> np.ndarray:
    """Vectorised ``theta3(exp(-t))**2 - 1`` summed to binary64 saturation."""
    t = np.asarray(t, dtype=float)
    out = np.empty_like(t)
    for i, ti in enumerate(t.ravel()):
        # theta3^2 - 1 ~ 4 e^-t, so the stop is relative to the first term
        j = max(2, _theta3_terms(ti, _THETA_REL * math.exp(-ti)))
        idx = np.arange(j - 1, 0, -1, dtype=float)
        s = float(np.sum(np.exp(-idx * idx * ti)))
        out.flat[i] = 4.0 * s + 4.0 * s * s
    return out


def _mellin_tail_cut(n: int, budget: float) -> float:
    """Cut T >= 2 with 5 e^{-T} sum_{k<n} T^k/k! <= budget (normalised tail)."""

    def tail(tt):
        return 5.0 * math.exp(-tt) * sum(tt ** k / math.factorial(k) for k in range(n))

    cut = 2.0
    while tail(cut) > budget:
        cut += 1.0
    return cut


def theta3_small_t_bound(t: float) -> float:
    """Bound on ``|theta3(e^-t) - sqrt(pi/t)|`` from the Euler-Maclaurin remainder.

    For ``f(x) = exp(-t x^2)`` summed over all integers the boundary terms
    vanish, and the order-4 remainder is at most
    ``(2 zeta(4) / (2 pi)^4) * integral |f^(4)| = (1/720) * t^(3/2) *
    integral |16u^4 - 48u^2 + 12| e^(-u^2) du``. The last integral is at most
    ``48 sqrt(pi)`` by the triangle inequality.
    """
    return math.sqrt(math.pi) / 15.0 * t ** 1.5


def mellin_theta(n: int, tol: float = 1e-10) -> BoundedValue:
    """``(1/Gamma(n)) * integral_0^inf t**(n-1) (theta3(e^-t)**2 - 1) dt``.

    The half-line is split as ``[0, d] + [d, 1] + [1, T] + [T, inf)``:

    * on ``[0, d]``, ``theta3 = sqrt(pi/t) + e`` with ``|e| <= a t^(3/2)``
      (:func:`theta3_small_t_bound`), so the integrand equals
      ``t^(n-1) (pi/t - 1)`` up to ``t^(n-1) (2 sqrt(pi) a t + a^2 t^3)``;
      the first part is integrated exactly and ``d`` is chosen so that the
      second costs at most ``tol/4``;
    * the two finite panels are integrated adaptively to ``tol/4`` each;
    * for ``t >= 2``, ``theta3**2 - 1 <= 5 e^-t``, and ``T`` is chosen so the
      discarded mass is below ``tol/4``.

    The returned bound adds the small-t bound, both quadrature estimates and
    the tail bound.
    """
    if isinstance(n, bool) or int(n) != n:
        raise DomainError(f"mellin_theta needs an integer order (got {n!r})")
    n = int(n)
    if n < 2:
        raise DomainError(f"the Mellin integral diverges at t = 0 for n = {n} < 2")
    _check_tol(tol)
    gam = gamma_positive_integer(n)
    a = theta3_small_t_bound(1.0)

    def near_err(d):
        return (2.0 * math.sqrt(math.pi) * a * d ** (n + 1) / (n + 1)
                + a * a * d ** (n + 3) / (n + 3)) / gam

    d = min(0.5, (0.25 * tol * gam * (n + 1) / (2.0 * math.sqrt(math.pi) * a)) ** (1.0 / (n + 1)))
    while near_err(d) > 0.25 * tol:
        d *= 0.9
    near_zero = (math.pi * d ** (n - 1) / (n - 1) - d ** n / n) / gam

    cut = _mellin_tail_cut(n, 0.25 * tol)
    tail_err = 5.0 * math.exp(-cut) * sum(cut ** k / math.factorial(k) for k in range(n))

    def integrand(t):
        return t ** (n - 1) * theta3_squared_minus_one(t) / gam

    lower = integrate(integrand, d, 1.0, 0.25 * tol)
    upper = integrate(integrand, 1.0, cut, 0.25 * tol)
    value = near_zero + lower.value + upper.value
    err = near_err(d) + lower.error_estimate + upper.error_estimate + tail_err
    return BoundedValue(value, err, lower.evaluations + upper.evaluations)
