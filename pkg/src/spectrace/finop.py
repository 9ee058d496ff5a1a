"""Dense operators on C^d: adjoint, PSD square root, |A|, traces, canonical form.

Operators are plain ``(d, d)`` complex numpy arrays; orthonormal bases are
unitary matrices whose columns are the basis vectors. Nothing here mutates
its arguments.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, NonConvergenceError

log = logging.getLogger(__name__)

SERIES_CAP = 10_000
NEWTON_CAP = 200


def as_operator(a) -> np.ndarray:
    """Validate and convert ``a`` to a square, finite complex matrix."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] < 1:
        raise DomainError(f"operator must be a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("operator entries must be finite")
    return a


def opnorm(a) -> float:
    """Operator (spectral) norm."""
    return float(np.linalg.norm(np.asarray(a), 2))


def adjoint(a) -> np.ndarray:
    return as_operator(a).conj().T.copy()


def inner(w, v) -> complex:
    """``<w, v>``, conjugate-linear in the first slot."""
    return complex(np.vdot(w, v))


def is_psd(a, tol: float = 1e-10) -> bool:
    """Hermitian within ``tol`` and no eigenvalue below ``-tol * ||A||``."""
    a = as_operator(a)
    scale = max(1.0, float(np.linalg.norm(a)))
    if np.linalg.norm(a - a.conj().T) > tol * scale:
        return False
    herm = 0.5 * (a + a.conj().T)
    lam = np.linalg.eigvalsh(herm)
    return bool(lam[0] >= -tol * max(abs(lam[0]), abs(lam[-1])))


def sqrt_series_coefficients(count: int) -> np.ndarray:
    """Taylor coefficients ``c_0 .. c_{count-1}`` of ``sqrt(1 - z)``."""
    c = np.empty(count)
    c[0] = 1.0
    for j in range(1, count):
        c[j] = c[j - 1] * (j - 1.5) / j
    return c


def _sqrt_series(x: np.ndarray, tol: float) -> np.ndarray | None:
    """``I + sum c_j X**j``, stopped once the remaining tail is below ``tol/4``.

    The tail is estimated as ``||term|| / (1 - rho)`` with ``rho`` the observed
    ratio of consecutive term norms. Returns None when that cannot happen
    within ``SERIES_CAP`` terms (judged from the decay over the last 200 terms).
    """
    d = x.shape[0]
    acc = np.eye(d, dtype=complex)
    power = np.eye(d, dtype=complex)
    c = 1.0
    last = None
    checkpoint = None
    for j in range(1, SERIES_CAP + 1):
        c *= (j - 1.5) / j
        power = power @ x
        term = c * power
        acc += term
        size = float(np.linalg.norm(term))
        if size == 0.0:
            return acc
        if last is not None and last > 0:
            rho = min(size / last, 1.0 - 1e-12)
            if size / (1.0 - rho) < 0.25 * tol:
                return acc
        last = size
        if j % 200 == 0:
            if checkpoint is not None:
                rate = (size / checkpoint) ** (1.0 / 200)
                if rate >= 1.0:
                    return None
                need = j + math.log(0.25 * tol * (1.0 - rate) / size) / math.log(rate)
                if need > SERIES_CAP:
                    return None
            checkpoint = size
    return None


def _sqrt_newton_schulz(y: np.ndarray, tol: float) -> np.ndarray:
    """Coupled, inverse-free Newton-Schulz iteration for ``sqrt(Y)``, ``0 <= Y <= I``.

    An eigenvalue ``lam`` reaches its square root after roughly
    ``log(1/lam)/log(9/4)`` steps; eigenvalues below ``tol**2`` contribute at
    most ``tol`` however far they got, which fixes the minimum step count.

    On (numerically) singular input ``Z`` grows like ``1.5**k`` on the null
    space and rounding noise eventually takes over, so the iterate with the
    smallest residual ``||Y_k^2 - Y||`` is kept and returned once the residual
    has grown well past it.
    """
    d = y.shape[0]
    eye = np.eye(d, dtype=complex)
    target = y
    z = eye.copy()
    min_steps = int(math.ceil(2.0 * math.log(1.0 / tol) / math.log(2.25))) + 2
    best, best_res = y, math.inf
    for k in range(1, NEWTON_CAP + 1):
        t = 0.5 * (3.0 * eye - z @ y)
        y_new = y @ t
        z = t @ z
        step = float(np.linalg.norm(y_new - y))
        y = y_new
        res = float(np.linalg.norm(y @ y - target))
        if not math.isfinite(res) or (best_res <= tol and res > 1e3 * best_res):
            return best
        if res < best_res:
            best, best_res = y, res
        if k >= min_steps and step <= 1e-3 * tol:
            return y
    if best_res <= tol:
        return best
    raise NonConvergenceError(f"Newton-Schulz square root did not settle in {NEWTON_CAP} steps")


def sqrt_psd(a, tol: float = 1e-10, method: str = "auto") -> np.ndarray:
    """The unique PSD ``B`` with ``B @ B = A``.

    ``method="series"`` scales ``A`` by its Frobenius norm and sums the
    binomial series ``I + sum_j c_j (I - A)**j`` of ``sqrt(1 - z)``; it raises
    :class:`NonConvergenceError` if the terms do not drop below ``tol/4``
    within ``SERIES_CAP`` terms or the residual ``||B^2 - A||`` misses
    ``tol * max(1, ||A||)``. The series converges like ``(1 - lam_min/||A||_F)**j``,
    so near-singular inputs are out of its reach.

    ``method="newton"`` runs the coupled Newton-Schulz iteration, which
    handles singular and badly conditioned inputs.

    ``method="auto"`` tries the series first and falls back to Newton-Schulz
    when the series cannot meet ``tol``.
    """
    if method not in ("auto", "series", "newton"):
        raise ValueError(f"unknown method {method!r}")
    a = as_operator(a)
    if not is_psd(a, max(tol, 1e-12)):
        raise DomainError("sqrt_psd needs a positive-semidefinite operator")
    a = 0.5 * (a + a.conj().T)
    d = a.shape[0]
    scale = float(np.linalg.norm(a))
    if scale == 0.0:
        return np.zeros((d, d), dtype=complex)
    target = tol * max(1.0, opnorm(a))
    scaled = a / scale

    b = None
    if method in ("auto", "series"):
        bs = _sqrt_series(np.eye(d) - scaled, tol * max(1.0, opnorm(a)) / (3.0 * scale))
        if bs is not None:
            b = math.sqrt(scale) * bs
            if opnorm(b @ b - a) > target:
                b = None
        if b is None:
            if method == "series":
                raise NonConvergenceError(
                    f"binomial series for sqrt did not reach tol={tol:g} within "
                    f"{SERIES_CAP} terms; the input is too badly conditioned"
                )
            log.debug("sqrt_psd: series missed tol=%g, switching to Newton-Schulz", tol)
    if b is None:
        b = math.sqrt(scale) * _sqrt_newton_schulz(scaled, tol)
        if opnorm(b @ b - a) > target:
            raise NonConvergenceError("square root residual exceeds tolerance")
    return 0.5 * (b + b.conj().T)


def abs_op(a, tol: float = 1e-10, method: str = "auto") -> np.ndarray:
    """``|A| = sqrt(A* A)``."""
    a = as_operator(a)
    return sqrt_psd(a.conj().T @ a, tol, method=method)


def trace_diag(a, basis=None) -> complex:
    """``sum_n <phi_n, A phi_n>`` over the columns of ``basis`` (standard basis if None)."""
    a = as_operator(a)
    if basis is None:
        return complex(np.trace(a))
    basis = np.asarray(basis, dtype=complex)
    if basis.shape != a.shape:
        raise DomainError(f"basis shape {basis.shape} does not match operator {a.shape}")
    return complex(np.einsum("in,in->", basis.conj(), a @ basis))


@dataclass(frozen=True)
class CanonicalDecomposition:
    """``A = sum_n mu_n <alpha_n, .> beta_n`` with ``mu`` descending and positive.

    ``alpha`` and ``beta`` hold the vectors as columns.
    """

    mu: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray

    @property
    def rank(self) -> int:
        return int(self.mu.size)

    def reconstruct(self, dim: int | None = None) -> np.ndarray:
        d = self.alpha.shape[0] if dim is None else dim
        out = np.zeros((d, d), dtype=complex)
        for mu, al, be in zip(self.mu, self.alpha.T, self.beta.T):
            out += mu * np.outer(be, al.conj())
        return out


def canonical_and_trace_norm(a) -> tuple[CanonicalDecomposition, float]:
    """Singular-value form of ``A`` and its trace norm ``sum mu_n``.

    Singular values below ``1e-12 * ||A||`` are dropped.
    """
    a = as_operator(a)
    u, s, vh = np.linalg.svd(a)
    cutoff = 1e-12 * (s[0] if s.size else 0.0)
    keep = s > cutoff if s[0] > 0 else np.zeros_like(s, dtype=bool)
    dec = CanonicalDecomposition(mu=s[keep], alpha=vh.conj().T[:, keep], beta=u[:, keep])
    return dec, float(np.sum(dec.mu))


def lidskii_check(a, tol: float = 1e-8) -> bool:
    """Whether the diagonal sum matches the eigenvalue sum within ``tol * max(1, ||A||)``."""
    a = as_operator(a)
    try:
        lam = np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NonConvergenceError(f"eigenvalue solver failed: {exc}") from exc
    gap = abs(trace_diag(a) - complex(np.sum(lam)))
    return bool(gap <= tol * max(1.0, opnorm(a)))


def random_orthonormal_basis(dim: int, seed: int) -> np.ndarray:
    """Seeded Haar-random unitary; its columns form an orthonormal basis."""
    if dim < 1:
        raise DomainError("dim must be >= 1")
    rng = np.random.default_rng(seed)
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    phases = np.diagonal(r) / np.abs(np.diagonal(r))
    return q * phases


def random_operator(dim: int, seed: int) -> np.ndarray:
    """Seeded complex Gaussian matrix (entries of unit variance)."""
    rng = np.random.default_rng(seed)
    return (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / math.sqrt(2)


def gram_error(basis) -> float:
    basis = np.asarray(basis)
    return float(np.max(np.abs(basis.conj().T @ basis - np.eye(basis.shape[1]))))
