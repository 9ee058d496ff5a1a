"""Sums over Z^2 minus the origin, organised by sup-norm shells.

Shell ``r`` is the set of ``8r`` lattice points with ``max(|k|, |m|) = r``.
Walking shells in order gives a deterministic enumeration of the punctured
lattice and, because each shell point has ``k^2 + m^2 >= r^2``, a clean
integral tail bound for ``sum (k^2 + m^2)^-n``.
"""
from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .errors import DomainError
from .special_fn import BoundedValue, dirichlet_beta, zeta
from .summation import CompensatedSum

# shells per work unit; fixed so the reduction does not depend on thread count
_CHUNK = 256


class Mode2D(NamedTuple):
    k: int
    m: int


@dataclass(frozen=True)
class SumOutcome:
    """A truncated series: partial value, sum of moduli and a tail bound."""

    value: complex
    abs_sum: float
    tail_bound: float
    terms: int
    radius: int
    shell_sums: np.ndarray | None = None

    def brackets(self, x: float) -> bool:
        """Whether ``x`` lies in ``[value, value + tail_bound]`` (positive series)."""
        return self.value.real <= x <= self.value.real + self.tail_bound


def shell_coords(r: int) -> tuple[np.ndarray, np.ndarray]:
    """Coordinates of shell ``r`` as two int64 arrays, counterclockwise.

    Starts at ``(r, -r+1)``, runs up the right edge to ``(r, r)``, along the
    top to ``(-r, r)``, down the left edge to ``(-r, -r)`` and along the
    bottom to ``(r, -r)``. Each corner appears once.
    """
    if r < 1:
        raise DomainError(f"shell radius must be >= 1 (got {r})")
    up = np.arange(-r + 1, r + 1, dtype=np.int64)
    full = np.full(2 * r, r, dtype=np.int64)
    k = np.concatenate([full, -up, -full, up])
    m = np.concatenate([up, full, -up, -full])
    return k, m


def shell_modes(r: int) -> list[Mode2D]:
    k, m = shell_coords(r)
    return [Mode2D(int(a), int(b)) for a, b in zip(k, m)]


def _inverse_power_shell(r: int, n: float) -> float:
    # every shell is four quarter-turn copies of its right edge (r, m), -r < m <= r
    m = np.arange(1, r, dtype=float)
    rr = float(r) * r
    inner = 2.0 * float(np.sum((rr + m * m) ** -n)) if r > 1 else 0.0
    return 4.0 * (inner + rr ** -n + (2.0 * rr) ** -n)


def lattice_tail_bound(n: float, radius: int) -> float:
    """Bound on ``sum_{max(|k|,|m|) > R} (k^2 + m^2)^-n`` for ``n > 1``.

    Shell ``r`` holds ``8r`` points with ``k^2 + m^2 >= r^2``, so the tail is
    at most ``sum_{r>R} 8 r^(1-2n) <= 4 R^(2-2n) / (n-1)``.
    """
    return 4.0 * radius ** (2.0 - 2.0 * n) / (n - 1.0)


def radius_for_tail(n: float, tol: float) -> int:
    """Smallest ``R`` whose :func:`lattice_tail_bound` is at most ``tol``."""
    if n <= 1 or tol <= 0:
        raise DomainError("radius_for_tail needs n > 1 and tol > 0")
    r = max(1, int(math.floor((4.0 / ((n - 1.0) * tol)) ** (1.0 / (2.0 * n - 2.0)))))
    while lattice_tail_bound(n, r) > tol:
        r += 1
    while r > 1 and lattice_tail_bound(n, r - 1) <= tol:
        r -= 1
    return r


def _map_shells(fn: Callable[[int], float], radius: int, threads: int) -> np.ndarray:
    chunks = [range(lo, min(lo + _CHUNK, radius + 1)) for lo in range(1, radius + 1, _CHUNK)]

    def work(rs):
        return [fn(r) for r in rs]

    if threads > 1 and len(chunks) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, chunks))
    else:
        parts = [work(c) for c in chunks]
    return np.array([x for part in parts for x in part])


def accumulate(shell_sums, reverse: bool = False) -> float:
    acc = CompensatedSum()
    seq = np.asarray(shell_sums, dtype=float).tolist()
    acc.extend(reversed(seq) if reverse else seq)
    return acc.value


def lattice_sum_direct(n: float, radius: int, threads: int = 1) -> SumOutcome:
    """``sum (k^2 + m^2)^-n`` over the shells ``1..radius``.

    Shell totals are reduced in shell order with Neumaier compensation. The
    per-shell values are kept in ``shell_sums`` for plotting. ``threads`` only
    changes how shells are scheduled; the result is bitwise the same.
    """
    if not n >= 2:
        raise DomainError(f"the lattice sum is handled for n >= 2 (got n={n})")
    if radius < 1:
        raise DomainError("radius must be >= 1")
    shells = _map_shells(lambda r: _inverse_power_shell(r, n), radius, threads)
    total = accumulate(shells)
    return SumOutcome(
        value=complex(total),
        abs_sum=total,
        tail_bound=lattice_tail_bound(n, radius),
        terms=4 * radius * (radius + 1),
        radius=radius,
        shell_sums=shells,
    )


def lattice_sum_closed(n: int, tol: float = 1e-11) -> BoundedValue:
    """``4 zeta(n) beta(n)`` with the product error propagated."""
    if isinstance(n, bool) or int(n) != n or n < 2:
        raise DomainError(f"closed form needs an integer n >= 2 (got {n!r})")
    if not tol > 0:
        raise DomainError("tol must be positive")
    part = max(tol / 16.0, 1e-13)
    z = zeta(n, part)
    b = dirichlet_beta(n, part)
    err = 4.0 * (z.error_bound * (abs(b.value) + b.error_bound) + b.error_bound * abs(z.value))
    return BoundedValue(4.0 * z.value * b.value, err, z.terms_used + b.terms_used)


def shell_csv(outcome: SumOutcome, n: float) -> str:
    """Per-shell table with columns ``r, shell_sum, cumulative, tail_bound``."""
    if outcome.shell_sums is None:
        raise ValueError("outcome carries no per-shell data")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["r", "shell_sum", "cumulative", "tail_bound"])
    acc = CompensatedSum()
    for r, s in enumerate(outcome.shell_sums.tolist(), start=1):
        acc.add(s)
        w.writerow([r, f"{s:.17g}", f"{acc.value:.17g}", f"{lattice_tail_bound(n, r):.17g}"])
    return buf.getvalue()
