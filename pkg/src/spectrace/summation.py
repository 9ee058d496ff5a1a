"""Compensated (Neumaier) accumulation.

Every long series in the package is reduced through :class:`CompensatedSum`
in a fixed order, so results are reproducible bit-for-bit.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np


class CompensatedSum:
    """Running sum carrying a second word for the rounding error of each add.

    >>> acc = CompensatedSum()
    >>> for x in (1e16, 1.0, -1e16):
    ...     acc.add(x)
    >>> acc.value
    1.0
    """

    __slots__ = ("_s", "_c")

    def __init__(self, start: float = 0.0):
        self._s = float(start)
        self._c = 0.0

    def add(self, x: float) -> None:
        x = float(x)
        t = self._s + x
        if abs(self._s) >= abs(x):
            self._c += (self._s - t) + x
        else:
            self._c += (x - t) + self._s
        self._s = t

    def extend(self, xs: Iterable[float]) -> None:
        for x in xs:
            self.add(x)

    @property
    def value(self) -> float:
        return self._s + self._c


def compensated_cumsum(terms) -> np.ndarray:
    """Prefix sums of ``terms`` with Neumaier compensation at every step."""
    terms = np.asarray(terms, dtype=float)
    out = np.empty_like(terms)
    acc = CompensatedSum()
    for i, x in enumerate(terms.tolist()):
        acc.add(x)
        out[i] = acc.value
    return out


def compensated_total(terms) -> float:
    acc = CompensatedSum()
    acc.extend(np.asarray(terms, dtype=float).tolist())
    return acc.value
