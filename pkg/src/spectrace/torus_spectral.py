"""Traces of inverse-Laplacian powers on the circle and the flat square torus.

Every operator here is diagonal in the Fourier basis ``e^{ik theta}/sqrt(2 pi)``
(circle) or ``e^{i(k theta_1 + m theta_2)}/(2 pi)`` (torus), so it is fully
described by an :class:`EigenRule`. The constant mode lies in the kernel of the
inverse Laplacian and is sent to zero.

An operator diagonal in an orthonormal basis is trace class exactly when its
eigenvalue series converges absolutely, and then the trace is that sum. The
functions below either produce the value with an error bound or a certificate
that the absolute series diverges.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from .errors import DomainError, NonConvergenceError
from .lattice import (
    Mode2D,
    SumOutcome,
    _inverse_power_shell,
    _map_shells,
    accumulate,
    lattice_sum_closed,
    lattice_sum_direct,
    lattice_tail_bound,
    radius_for_tail,
    shell_coords,
)
from .special_fn import _check_tol, _power_tail, zeta
from .summation import CompensatedSum, compensated_total

INV_LAPLACE_S1 = "inv_laplace_s1"
INV_LAPLACE_T2 = "inv_laplace_t2"
P_POWER_T2 = "p_power_t2"

TRACE_CLASS = "TraceClass"
NOT_TRACE_CLASS = "NotTraceClass"
UNDETERMINED = "Undetermined"

MAX_S1_TERMS = 10**6
MAX_P_RADIUS = 6000
GROWTH_RADII = (100, 1000, 10000)

_MINUS_I_POWERS = (1, -1j, -1, 1j)


@dataclass(frozen=True)
class EigenRule:
    """Fourier-mode eigenvalues of ``D^-n`` (circle, torus) or ``P^n`` (torus)."""

    kind: str
    power: int

    def __post_init__(self):
        if self.kind not in (INV_LAPLACE_S1, INV_LAPLACE_T2, P_POWER_T2):
            raise DomainError(f"unknown eigenvalue rule {self.kind!r}")
        if int(self.power) != self.power or self.power < 1:
            raise DomainError(f"power must be an integer >= 1 (got {self.power!r})")

    @property
    def dim(self) -> int:
        return 1 if self.kind == INV_LAPLACE_S1 else 2

    def eval(self, mode) -> complex:
        """Eigenvalue at ``mode`` from exact integer arithmetic, rounded once."""
        n = self.power
        if self.dim == 1:
            if not isinstance(mode, (int, np.integer)):
                raise DomainError(f"{self.kind} takes an integer mode, got {mode!r}")
            k = int(mode)
            if k == 0:
                return 0j
            return complex(float(Fraction((-1) ** n, k ** (2 * n))))
        try:
            k, m = (int(x) for x in mode)
        except (TypeError, ValueError):
            raise DomainError(f"{self.kind} takes a (k, m) mode, got {mode!r}") from None
        if k == 0 and m == 0:
            return 0j
        q = k * k + m * m
        if self.kind == INV_LAPLACE_T2:
            return complex(float(Fraction((-1) ** n, q ** n)))
        mag = float(Fraction((k + m) ** n, q ** n))
        return complex(_MINUS_I_POWERS[n % 4]) * mag

    def values(self, k, m=None) -> np.ndarray:
        """Vectorised eigenvalues in binary64 (ratio formed before the power)."""
        n = self.power
        k = np.asarray(k, dtype=float)
        if self.dim == 1:
            with np.errstate(divide="ignore"):
                out = (-1.0) ** n / k ** (2 * n)
            return np.where(k == 0, 0.0, out).astype(complex)
        m = np.asarray(m, dtype=float)
        q = k * k + m * m
        safe = np.where(q == 0, 1.0, q)
        if self.kind == INV_LAPLACE_T2:
            out = (-1.0) ** n * safe ** -float(n)
        else:
            out = _MINUS_I_POWERS[n % 4] * ((k + m) / safe) ** n
        return np.where(q == 0, 0.0, out).astype(complex)


def _int_power(x: np.ndarray, n: int) -> np.ndarray:
    """``x**n`` by repeated squaring (numpy's float power is far slower)."""
    out = None
    base = x
    while n:
        if n & 1:
            out = base if out is None else out * base
        n >>= 1
        if n:
            base = base * base
    return out


def eigenrule_eval(rule: EigenRule, mode) -> complex:
    return rule.eval(mode)


@dataclass(frozen=True)
class DivergenceCertificate:
    """Dyadic witness that ``sum (k+m)^2/(k^2+m^2)^2`` is unbounded.

    ``attained`` is the partial sum over every nonzero lattice point in the
    sup-norm square of ``radius = 2^(N+1) - 1``; that square contains the
    blocks ``[2^j, 2^(j+1)-1]^2`` for ``j = 1..N``. ``block_sums[j-1]`` is the
    contribution of block ``j`` alone, and ``block_total`` their sum.
    """

    target: int
    radius: int
    attained: float
    block_sums: tuple[float, ...]
    block_total: float

    @property
    def valid(self) -> bool:
        return self.attained >= self.target and self.radius == 2 ** (self.target + 1) - 1

    @property
    def blocks_reach_one(self) -> bool:
        return all(b >= 1.0 for b in self.block_sums)

    def to_record(self) -> dict[str, Any]:
        return {
            "kind": "dyadic",
            "target": self.target,
            "radius": self.radius,
            "attained": self.attained,
            "block_sums": list(self.block_sums),
            "block_total": self.block_total,
            "valid": self.valid,
        }


@dataclass(frozen=True)
class GrowthCertificate:
    """Partial absolute sums at increasing radii plus a proven lower bound.

    ``lower_bounds[i]`` is a rigorous lower bound on ``partial_sums[i]`` that
    tends to infinity with the radius; ``slope`` is a least-squares fit of the
    partial sums against ``fit`` (``"log"`` or ``"linear"`` in R).
    """

    radii: tuple[int, ...]
    partial_sums: tuple[float, ...]
    lower_bounds: tuple[float, ...]
    fit: str
    slope: float
    bound_formula: str

    @property
    def valid(self) -> bool:
        increasing = all(b > a for a, b in zip(self.partial_sums, self.partial_sums[1:]))
        dominated = all(s >= lb for s, lb in zip(self.partial_sums, self.lower_bounds))
        return increasing and dominated

    def to_record(self) -> dict[str, Any]:
        return {
            "kind": "growth",
            "radii": list(self.radii),
            "partial_sums": list(self.partial_sums),
            "lower_bounds": list(self.lower_bounds),
            "fit": self.fit,
            "slope": self.slope,
            "bound_formula": self.bound_formula,
            "valid": self.valid,
        }


@dataclass
class TraceClassification:
    operator: str
    power: int
    status: str
    value: complex | None = None
    error_bound: float | None = None
    terms: int = 0
    radius: int | None = None
    certificate: DivergenceCertificate | GrowthCertificate | None = None
    extension: bool = False
    reason: str | None = None
    checks: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.status == TRACE_CLASS:
            if self.error_bound is None or not math.isfinite(self.error_bound):
                raise ValueError("a trace-class result needs a finite error bound")
        elif self.status == NOT_TRACE_CLASS:
            if self.certificate is None or not self.certificate.valid:
                raise ValueError("a not-trace-class result needs a valid certificate")
        elif self.status != UNDETERMINED:
            raise ValueError(f"unknown status {self.status!r}")

    def to_record(self) -> dict[str, Any]:
        rec: dict[str, Any] = {
            "operator": self.operator,
            "power": self.power,
            "status": self.status,
            "terms": self.terms,
            "radius": self.radius,
            "extension_flag": self.extension,
        }
        if self.value is not None:
            rec["value"] = {"re": self.value.real, "im": self.value.imag}
            rec["error_bound"] = self.error_bound
        if self.certificate is not None:
            rec["certificate"] = self.certificate.to_record()
        if self.reason:
            rec["reason"] = self.reason
        if self.checks:
            rec["checks"] = self.checks
        return rec


# --- circle -----------------------------------------------------------------

def direct_trace_s1(n: int, cutoff: int) -> SumOutcome:
    """Sum the eigenvalues of ``D^-n`` on the circle over ``0 < |k| <= cutoff``.

    The value includes the midpoint of the integral bracket for the two
    discarded tails; ``tail_bound`` adds the two half-widths, a bound on the
    distance to the full series.
    """
    if cutoff < 1:
        raise DomainError("cutoff must be >= 1")
    rule = EigenRule(INV_LAPLACE_S1, n)
    k = np.arange(cutoff, 0, -1)
    pos = rule.values(k).real
    neg = rule.values(-k).real
    # interleave +k and -k, smallest terms first
    terms = np.empty(2 * cutoff)
    terms[0::2] = pos
    terms[1::2] = neg
    partial = compensated_total(terms)
    lo, hi = _power_tail(cutoff, 2.0 * n)
    sign = (-1.0) ** n
    value = partial + sign * (lo + hi)
    abs_sum = float(np.sum(np.abs(terms))) + (lo + hi)
    return SumOutcome(complex(value), abs_sum, hi - lo, 2 * cutoff, cutoff)


def _s1_cutoff(n: int, tol: float) -> int:
    k = 1
    while True:
        lo, hi = _power_tail(k, 2.0 * n)
        if hi - lo <= tol or k >= MAX_S1_TERMS:
            return k
        k = max(k + 1, int(k * 1.25))


def trace_inv_laplacian_s1(n: int, tol: float = 1e-10) -> TraceClassification:
    """``Tr(D^-n) = 2 (-1)^n zeta(2n)`` on the circle, cross-checked by direct summation."""
    rule = EigenRule(INV_LAPLACE_S1, n)
    _check_tol(tol)
    z = zeta(2.0 * n, 0.5 * tol)
    value = 2.0 * (-1) ** n * z.value
    bound = 2.0 * z.error_bound
    direct = direct_trace_s1(n, _s1_cutoff(n, tol))
    gap = abs(direct.value.real - value)
    return TraceClassification(
        operator=rule.kind,
        power=n,
        status=TRACE_CLASS,
        value=complex(value),
        error_bound=bound,
        terms=z.terms_used,
        checks={
            "direct_value": direct.value.real,
            "direct_bound": direct.tail_bound,
            "direct_cutoff": direct.radius,
            "agrees": bool(gap <= bound + direct.tail_bound + 4e-16 * abs(value)),
        },
    )


# --- torus, inverse Laplacian -----------------------------------------------

def _inverse_power_growth(radii=GROWTH_RADII) -> GrowthCertificate:
    shells = _map_shells(lambda r: _inverse_power_shell(r, 1.0), max(radii), 1)
    acc = CompensatedSum()
    partial = []
    harmonic = CompensatedSum()
    lower = []
    want = set(radii)
    for r, s in enumerate(shells.tolist(), start=1):
        acc.add(s)
        harmonic.add(4.0 / r)
        if r in want:
            partial.append(acc.value)
            lower.append(harmonic.value)
    slope = float(np.polyfit(np.log(radii), partial, 1)[0])
    return GrowthCertificate(
        radii=tuple(radii),
        partial_sums=tuple(partial),
        lower_bounds=tuple(lower),
        fit="log",
        slope=slope,
        bound_formula="shell r has 8r points with k^2+m^2 <= 2r^2, so S(R) >= 4 H_R",
    )


def trace_inv_laplacian_t2(n: int, tol: float = 1e-10, crosscheck_radius: int | None = None) -> TraceClassification:
    """``Tr(D^-n) = 4 (-1)^n zeta(n) beta(n)`` on the torus for ``n >= 2``.

    For ``n = 1`` the eigenvalue series diverges logarithmically and a
    :class:`GrowthCertificate` is returned instead.
    """
    rule = EigenRule(INV_LAPLACE_T2, n)
    _check_tol(tol)
    if n == 1:
        cert = _inverse_power_growth()
        return TraceClassification(
            operator=rule.kind,
            power=n,
            status=NOT_TRACE_CLASS,
            certificate=cert,
            terms=4 * cert.radii[-1] * (cert.radii[-1] + 1),
            radius=cert.radii[-1],
            reason="the lattice sum converges only for n >= 2",
        )
    closed = lattice_sum_closed(n, tol)
    value = (-1) ** n * closed.value
    if crosscheck_radius is None:
        crosscheck_radius = min(radius_for_tail(n, max(tol, 1e-8)), 5000)
    direct = lattice_sum_direct(n, crosscheck_radius)
    slack = closed.error_bound + 1e-13 * closed.value
    agrees = direct.value.real - slack <= closed.value <= direct.value.real + direct.tail_bound + slack
    return TraceClassification(
        operator=rule.kind,
        power=n,
        status=TRACE_CLASS,
        value=complex(value),
        error_bound=closed.error_bound,
        terms=closed.terms_used,
        checks={
            "direct_value": (-1) ** n * direct.value.real,
            "direct_tail_bound": direct.tail_bound,
            "direct_radius": direct.radius,
            "agrees": bool(agrees),
        },
    )


# --- torus, P^n = (d* D^-1)^n ------------------------------------------------

def p_power_tail_bound(n: int, radius: int) -> float:
    """Tail bound for ``sum |(k+m)^n/(k^2+m^2)^n|`` beyond sup-radius ``radius``.

    ``(k+m)^2 <= 2(k^2+m^2)`` gives ``|term| <= 2^(n/2) (k^2+m^2)^(-n/2)``,
    which reuses the lattice tail with exponent ``n/2`` (needs ``n >= 3``).
    """
    if n < 3:
        raise DomainError("the P^n tail bound needs n >= 3")
    return 2.0 ** (0.5 * n) * lattice_tail_bound(0.5 * n, radius)


def p_power_direct(n: int, radius: int, threads: int = 1) -> SumOutcome:
    """Sum the eigenvalues of ``P^n`` over the shells ``1..radius``."""
    rule = EigenRule(P_POWER_T2, n)
    if radius < 1:
        raise DomainError("radius must be >= 1")

    unit = complex(_MINUS_I_POWERS[n % 4])

    # every eigenvalue is (-i)^n times a real ratio power, so sum the reals
    def shell(r):
        k, m = shell_coords(r)
        k = k.astype(float)
        m = m.astype(float)
        v = _int_power((k + m) / (k * k + m * m), n)
        total = float(np.sum(v))
        return total, (total if n % 2 == 0 else float(np.sum(np.abs(v))))

    parts = _map_shells(shell, radius, threads)
    real_total = accumulate(parts[:, 0])
    abs_sum = accumulate(parts[:, 1])
    tail = p_power_tail_bound(n, radius) if n >= 3 else math.inf
    return SumOutcome(unit * real_total, abs_sum, tail, 4 * radius * (radius + 1), radius,
                      shell_sums=unit * parts[:, 0])


def _p1_growth(radii=GROWTH_RADII) -> GrowthCertificate:
    def shell(r):
        # |k+m| is invariant under (k,m) -> (-k,-m) and (k,m) -> (m,k): the shell
        # is twice its right edge (r, m), -r < m <= r, plus twice its top edge,
        # whose values are the right edge's at m in [-r, r)
        m = np.arange(-r + 1, r, dtype=float)
        g = np.abs(r + m) / (r * r + m * m)
        return 2.0 * (2.0 * float(np.sum(g)) + 2.0 * r / (2.0 * r * r))

    shells = _map_shells(shell, max(radii), 1)
    acc = CompensatedSum()
    partial = []
    want = set(radii)
    for r, s in enumerate(shells.tolist(), start=1):
        acc.add(s)
        if r in want:
            partial.append(acc.value)
    slope = float(np.polyfit(np.asarray(radii, dtype=float), partial, 1)[0])
    return GrowthCertificate(
        radii=tuple(radii),
        partial_sums=tuple(partial),
        lower_bounds=tuple(float(r) for r in radii),
        fit="linear",
        slope=slope,
        bound_formula="points (r, m), (-r, -m) with 0 <= m <= r give |k+m| >= r over k^2+m^2 <= 2r^2, "
        "so every shell adds >= 1 and S(R) >= R",
    )


def block_sum(j: int) -> float:
    """``sum (k+m)^2/(k^2+m^2)^2`` over ``2^j <= k, m <= 2^(j+1) - 1``."""
    a = np.arange(2 ** j, 2 ** (j + 1), dtype=float)
    k = a[:, None]
    m = a[None, :]
    return float(np.sum(((k + m) / (k * k + m * m)) ** 2))


def p2_divergence_certificate(target: int) -> DivergenceCertificate:
    """Partial sums of the ``P^2`` eigenvalue moduli pass ``target``.

    The sup-norm square of radius ``2^(N+1) - 1`` is summed in shell order;
    the dyadic blocks inside it are also summed on their own.
    """
    if isinstance(target, bool) or int(target) != target or not 1 <= target <= 12:
        raise DomainError(f"target must be an integer in [1, 12] (got {target!r})")
    radius = 2 ** (target + 1) - 1

    def shell(r):
        k, m = shell_coords(r)
        k = k.astype(float)
        m = m.astype(float)
        return float(np.sum(((k + m) / (k * k + m * m)) ** 2))

    attained = accumulate(_map_shells(shell, radius, 1))
    blocks = tuple(block_sum(j) for j in range(1, target + 1))
    return DivergenceCertificate(
        target=int(target),
        radius=radius,
        attained=attained,
        block_sums=blocks,
        block_total=compensated_total(blocks),
    )


def trace_p_power_t2(n: int, tol: float = 1e-6, max_radius: int = MAX_P_RADIUS,
                     target: int = 5) -> TraceClassification:
    """Classify ``P^n`` on the torus and compute its trace when it exists.

    * even ``n > 2``: direct shell summation with the ``2^(n/2)`` tail bound;
    * ``n = 2``: not trace class, dyadic certificate for ``target``;
    * ``n = 1``: not trace class, linear-growth certificate (extension);
    * odd ``n >= 3``: trace 0, since the series converges absolutely and
      ``(k,m) -> (-k,-m)`` flips the sign of every eigenvalue (extension).
    """
    rule = EigenRule(P_POWER_T2, n)
    _check_tol(tol)
    if n == 1:
        cert = _p1_growth()
        return TraceClassification(
            operator=rule.kind, power=n, status=NOT_TRACE_CLASS, certificate=cert,
            terms=4 * cert.radii[-1] * (cert.radii[-1] + 1), radius=cert.radii[-1],
            extension=True, reason="eigenvalue moduli decay like 1/r on shells of 8r points",
        )
    if n == 2:
        cert = p2_divergence_certificate(target)
        return TraceClassification(
            operator=rule.kind, power=n, status=NOT_TRACE_CLASS, certificate=cert,
            terms=4 * cert.radius * (cert.radius + 1), radius=cert.radius,
        )
    radius = 1
    while p_power_tail_bound(n, radius) > tol:
        radius *= 2
        if radius > 4 * max_radius:
            break
    lo, hi = max(1, radius // 2), radius
    while lo < hi:
        mid = (lo + hi) // 2
        if p_power_tail_bound(n, mid) <= tol:
            hi = mid
        else:
            lo = mid + 1
    radius = lo
    if n % 2 == 1:
        probe = p_power_direct(n, min(radius, 200))
        return TraceClassification(
            operator=rule.kind, power=n, status=TRACE_CLASS, value=0j, error_bound=0.0,
            terms=probe.terms, radius=probe.radius, extension=True,
            checks={
                "symmetric_partial_sum": {"re": probe.value.real, "im": probe.value.imag},
                "abs_sum": probe.abs_sum,
                "abs_tail_bound": probe.tail_bound,
            },
        )
    if radius > max_radius:
        raise NonConvergenceError(
            f"P^{n} needs sup-radius {radius} > {max_radius} to reach tol={tol:g}"
        )
    direct = p_power_direct(n, radius)
    return TraceClassification(
        operator=rule.kind, power=n, status=TRACE_CLASS, value=direct.value,
        error_bound=direct.tail_bound, terms=direct.terms, radius=radius,
        checks={"abs_sum": direct.abs_sum},
    )


# --- the binomial bounds behind absolute convergence of P^n -------------------

def binomial_bound_violations(kmax: int = 100, max_power: int = 10) -> dict[str, int]:
    """Count failures of the two monomial bounds over ``1 <= k, m <= kmax``.

    For even ``n`` and even ``j``: ``k^(n-j) m^j <= (k^2+m^2)^(n/2)``.
    For odd ``j``: ``|k^(n-j) m^j| <= k^(n-j+1) m^(j-1) + k^(n-j-1) m^(j+1)
    <= (k^2+m^2)^(n/2)``. Checked in exact integer arithmetic.
    """
    even = odd = checked = 0
    for n in range(2, max_power + 1, 2):
        for k in range(1, kmax + 1):
            for m in range(1, kmax + 1):
                cap = (k * k + m * m) ** (n // 2)
                for j in range(0, n + 1):
                    checked += 1
                    mono = k ** (n - j) * m ** j
                    if j % 2 == 0:
                        even += mono > cap
                    else:
                        mid = k ** (n - j + 1) * m ** (j - 1) + k ** (n - j - 1) * m ** (j + 1)
                        odd += (mono > mid) or (mid > cap)
    return {"checked": checked, "even_violations": even, "odd_violations": odd}
