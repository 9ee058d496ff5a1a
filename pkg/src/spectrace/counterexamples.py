"""Finite truncations of l^2 operators whose diagonal sums misbehave.

* identity: the diagonal sum grows without bound;
* alternating ``T(a)_n = (-1)^n a_n``: partial sums oscillate between -1 and 0;
* left shift ``L(a_1, a_2, ...) = (a_2, a_3, ...)``: the diagonal sum is 0 in
  the standard basis but -1 in the orthonormal basis

      psi_n = (phi_1 + ... + phi_n - n phi_{n+1}) / sqrt(n (n+1)),

  so L has no basis-independent trace.

All vectors are finitely supported, so the truncations act exactly.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .summation import compensated_cumsum

IDENTITY = "identity"
ALTERNATING = "alternating"
LEFT_SHIFT_STANDARD = "left-shift-standard"
LEFT_SHIFT_PSI = "left-shift-psi"
EXAMPLES = (IDENTITY, ALTERNATING, LEFT_SHIFT_STANDARD, LEFT_SHIFT_PSI)


@dataclass(frozen=True)
class PsiVector:
    """``psi_index`` through its first ``index + 1`` coordinates (the rest are 0)."""

    index: int
    coefficients: np.ndarray

    def padded(self, length: int) -> np.ndarray:
        out = np.zeros(length)
        out[: self.coefficients.size] = self.coefficients
        return out


def psi_vector(n: int) -> PsiVector:
    if n < 1:
        raise DomainError("psi_n is defined for n >= 1")
    c = np.full(n + 1, 1.0 / math.sqrt(n * (n + 1.0)))
    c[n] = -n / math.sqrt(n * (n + 1.0))
    return PsiVector(n, c)


def left_shift(x) -> np.ndarray:
    """Apply L to a truncated sequence; the output keeps the input length."""
    x = np.asarray(x)
    out = np.zeros_like(x)
    out[:-1] = x[1:]
    return out


def alternating(x) -> np.ndarray:
    x = np.asarray(x)
    signs = np.where(np.arange(1, x.size + 1) % 2 == 0, 1.0, -1.0)
    return signs * x


def standard_vector(j: int, length: int) -> np.ndarray:
    e = np.zeros(length)
    e[j - 1] = 1.0
    return e


def diag_terms(example: str, count: int) -> np.ndarray:
    """``<b_j, A b_j>`` for ``j = 1..count``, each by an explicit apply-and-dot."""
    if example not in EXAMPLES:
        raise DomainError(f"unknown example {example!r}; choose from {EXAMPLES}")
    if count < 1:
        raise DomainError("count must be >= 1")
    length = count + 2
    out = np.empty(count)
    for j in range(1, count + 1):
        if example == LEFT_SHIFT_PSI:
            psi = psi_vector(j).coefficients
            # psi_j has support 1..j+1, so a local shift is exact
            out[j - 1] = float(np.dot(psi[:-1], psi[1:]))
            continue
        e = standard_vector(j, length)
        if example == IDENTITY:
            image = e
        elif example == ALTERNATING:
            image = alternating(e)
        else:
            image = left_shift(e)
        out[j - 1] = float(np.dot(e, image))
    return out


def diag_partial_sums(example: str, count: int) -> np.ndarray:
    """First ``count`` partial sums of ``sum_j <b_j, A b_j>``."""
    return compensated_cumsum(diag_terms(example, count))


def partial_sums_csv(example: str, count: int) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["j", "partial_sum"])
    for j, s in enumerate(diag_partial_sums(example, count).tolist(), start=1):
        w.writerow([j, f"{s:.17g}"])
    return buf.getvalue()
