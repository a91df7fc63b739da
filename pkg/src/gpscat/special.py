"""Hermite functions, log-factorials and Gauss-Hermite quadrature.

Everything here works on plain floats or numpy arrays. Hermite functions are
evaluated with the normalized three-term recurrence so that photon numbers in
the hundreds stay finite; the raw ``2**n * n!`` normalization never appears.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import roots_hermite

from .errors import NonConverged

PI_M14 = math.pi ** -0.25

_EXACT_LOGFACT_MAX = 10_000


@lru_cache(maxsize=1)
def _log_factorial_table() -> np.ndarray:
    table = np.zeros(_EXACT_LOGFACT_MAX + 1)
    np.cumsum(np.log(np.arange(1, _EXACT_LOGFACT_MAX + 1, dtype=float)), out=table[1:])
    return table


def log_factorial(n):
    """Natural log of ``n!``.

    Accumulates ``sum(log k)`` exactly for ``n <= 10**4`` and falls back to
    ``lgamma`` beyond that. Accepts integers or integer arrays.
    """
    arr = np.asarray(n)
    if np.any(arr < 0):
        raise ValueError("log_factorial needs n >= 0")
    if arr.ndim == 0:
        k = int(arr)
        if k <= _EXACT_LOGFACT_MAX:
            return float(_log_factorial_table()[k])
        return math.lgamma(k + 1.0)
    arr = arr.astype(np.int64)
    out = np.empty(arr.shape, dtype=float)
    small = arr <= _EXACT_LOGFACT_MAX
    out[small] = _log_factorial_table()[arr[small]]
    if np.any(~small):
        out[~small] = [math.lgamma(k + 1.0) for k in arr[~small]]
    return out


def log_central_binomial(n: int) -> float:
    """log of (2n)! / (n!)**2."""
    return log_factorial(2 * n) - 2.0 * log_factorial(n)


def log_double_factorial_ratio(n: int) -> float:
    """log of (2n-1)!! / (2n)!!, i.e. of (2n)! / (4**n (n!)**2)."""
    return log_central_binomial(n) - 2.0 * n * math.log(2.0)


def hermite_phys(n: int, x):
    """Physicists' Hermite polynomial ``H_n(x)`` by upward recurrence.

    Overflows for large ``n * |x|``; use :func:`eval_phi` when the Gaussian
    factor is wanted anyway.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    x = np.asarray(x, dtype=float)
    h_prev = np.ones_like(x)
    if n == 0:
        return h_prev if h_prev.ndim else float(h_prev)
    h = 2.0 * x
    for k in range(1, n):
        h_prev, h = h, 2.0 * x * h - 2.0 * k * h_prev
    return h if h.ndim else float(h)


def _phi_recurrence(n: int, x: np.ndarray, seed: np.ndarray) -> np.ndarray:
    # phi_{k+1} = x sqrt(2/(k+1)) phi_k - sqrt(k/(k+1)) phi_{k-1}
    prev = seed
    if n == 0:
        return prev
    cur = math.sqrt(2.0) * x * seed
    for k in range(1, n):
        prev, cur = cur, math.sqrt(2.0 / (k + 1)) * x * cur - math.sqrt(k / (k + 1)) * prev
    return cur


def eval_phi(n: int, x):
    """Fock-state position wavefunction (Hermite function) ``phi_n(x)``.

    Examples:
        >>> round(eval_phi(0, 0.0), 4)
        0.7511
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    x = np.asarray(x, dtype=float)
    out = _phi_recurrence(n, x, PI_M14 * np.exp(-0.5 * x * x))
    return out if out.ndim else float(out)


def hermite_poly_normalized(n: int, x):
    """``phi_n(x) * exp(x**2 / 2)``: the orthonormal Hermite polynomial.

    This is the weight-free part used by Gauss-Hermite rules.
    """
    x = np.asarray(x, dtype=float)
    out = _phi_recurrence(n, x, np.full_like(x, PI_M14))
    return out if out.ndim else float(out)


def log_abs_phi(n: int, x) -> np.ndarray:
    """log |phi_n(x)| without under- or overflow for large n or |x|."""
    x = np.asarray(x, dtype=float)
    log_scale = np.zeros_like(x)
    prev = np.ones_like(x)
    cur = math.sqrt(2.0) * x if n else prev
    for k in range(1, n):
        prev, cur = cur, math.sqrt(2.0 / (k + 1)) * x * cur - math.sqrt(k / (k + 1)) * prev
        big = np.abs(cur) > 1e100
        if np.any(big):
            cur = np.where(big, cur * 1e-100, cur)
            prev = np.where(big, prev * 1e-100, prev)
            log_scale = log_scale + np.where(big, 100.0 * math.log(10.0), 0.0)
    with np.errstate(divide="ignore"):
        return np.log(np.abs(cur)) + log_scale - 0.5 * x * x + math.log(PI_M14)


def eval_phi_all(nmax: int, x) -> np.ndarray:
    """Stack ``phi_0 .. phi_nmax`` along a new leading axis."""
    x = np.asarray(x, dtype=float)
    out = np.empty((nmax + 1,) + x.shape)
    out[0] = PI_M14 * np.exp(-0.5 * x * x)
    if nmax >= 1:
        out[1] = math.sqrt(2.0) * x * out[0]
    for k in range(1, nmax):
        out[k + 1] = math.sqrt(2.0 / (k + 1)) * x * out[k] - math.sqrt(k / (k + 1)) * out[k - 1]
    return out


def vacuum_convolution(n: int, x):
    """Closed form of ``(phi_0 * phi_n)(x) = x**n exp(-x**2/4) / sqrt(2**n n!)``.

    Evaluated through logarithms for ``n > 20``.
    """
    if n < 0:
        raise ValueError("n must be non-negative")
    x = np.asarray(x, dtype=float)
    if n <= 20:
        out = x**n * np.exp(-0.25 * x * x) / math.sqrt(2.0**n * math.factorial(n))
    else:
        with np.errstate(divide="ignore"):
            log_mag = n * np.log(np.abs(x)) - 0.25 * x * x - 0.5 * (n * math.log(2.0) + log_factorial(n))
        sign = np.where(x < 0, (-1.0) ** n, 1.0)
        out = sign * np.exp(log_mag)
    return out if out.ndim else float(out)


def hermite_gauss_integral(n: int, x):
    """``integral H_n(y) exp(-(y - x)**2) dy = sqrt(pi) (2x)**n``."""
    x = np.asarray(x, dtype=float)
    out = math.sqrt(math.pi) * (2.0 * x) ** n
    return out if out.ndim else float(out)


# --------------------------------------------------------------------------
# Quadrature
# --------------------------------------------------------------------------

MAX_NODES = 2048


@lru_cache(maxsize=64)
def _hermite_rule(m: int) -> tuple[np.ndarray, np.ndarray]:
    """Gauss-Hermite nodes and weights with ``exp(t**2)`` folded in.

    The folded weight is ``1 / (m phi_{m-1}(t)**2)``, which stays O(1) where
    the bare weights underflow.
    """
    t, _ = roots_hermite(m)
    w = np.exp(-math.log(m) - 2.0 * log_abs_phi(m - 1, t))
    t.setflags(write=False)
    w.setflags(write=False)
    return t, w


@dataclass(frozen=True)
class QuadratureGrid:
    """Gauss-Hermite rule over the real line, centered and scaled.

    Nodes are ``center + t / scale`` for the standard ``m``-point rule; weights
    already include the inverse Gaussian factor, so ``sum(w * f(x))``
    approximates ``integral f(x) dx`` directly. Exact when ``f`` is a
    polynomial of degree ``<= 2m - 1`` times ``exp(-scale**2 (x - center)**2)``.
    """

    m: int
    center: float = 0.0
    scale: float = 1.0
    tol: float = 1e-10
    scheme: str = "gauss-hermite"

    def __post_init__(self):
        if not 1 <= self.m <= MAX_NODES:
            raise ValueError(f"node count must be in [1, {MAX_NODES}], got {self.m}")
        if not self.scale > 0:
            raise ValueError("scale must be positive")

    @property
    def nodes(self) -> np.ndarray:
        return self.center + _hermite_rule(self.m)[0] / self.scale

    @property
    def weights(self) -> np.ndarray:
        return _hermite_rule(self.m)[1] / self.scale

    @property
    def half_width(self) -> float:
        return float(_hermite_rule(self.m)[0][-1] / self.scale)

    def refined(self) -> QuadratureGrid:
        return QuadratureGrid(min(2 * self.m, MAX_NODES), self.center, self.scale, self.tol, self.scheme)

    def apply(self, values) -> complex | float:
        """Weighted sum of integrand values already evaluated at ``nodes``."""
        return np.tensordot(np.asarray(values), self.weights, axes=([-1], [0]))


def hermite_grid(
    degree: int,
    decay: float = 1.0,
    center: float = 0.0,
    half_width: float | None = None,
    tol: float = 1e-10,
) -> QuadratureGrid:
    """Grid for integrands ~ polynomial(degree) * exp(-decay * (x - center)**2).

    With ``half_width`` the node count is also raised until the outermost node
    reaches that distance from the center.
    """
    scale = math.sqrt(decay)
    m = max(degree // 2 + 2, 8)
    if half_width is not None:
        m = max(m, int(math.ceil((half_width * scale) ** 2 / 2.0)) + 1)
    return QuadratureGrid(min(m, MAX_NODES), center, scale, tol)


def support_half_width(n: int, s_min: float = 1.0) -> float:
    """Region covering ``phi_n`` squeezed by ``s_min``: max(8, 2 sqrt(2n+1)/s_min)."""
    return max(8.0, 2.0 * math.sqrt(2 * n + 1) / s_min)


def integrate(f, grid: QuadratureGrid, check: bool = True, tol: float | None = None):
    """Integrate ``f`` over the real line on ``grid``.

    With ``check`` the rule is repeated at twice the node count; a change
    larger than ``tol`` (default ``grid.tol``, absolute, relative once the
    value exceeds one) raises :class:`NonConverged`. The coarse-grid value is
    returned so that the result depends only on ``grid``.
    """
    value = grid.apply(f(grid.nodes))
    if not check:
        return _scalar(value)
    tol = grid.tol if tol is None else tol
    fine = grid.refined()
    if fine.m == grid.m:
        return _scalar(value)
    value_fine = fine.apply(f(fine.nodes))
    err = np.max(np.abs(value_fine - value))
    if not np.isfinite(err) or err > tol * max(1.0, float(np.max(np.abs(value_fine)))):
        raise NonConverged(
            f"quadrature moved by {err:.3e} when doubling {grid.m} -> {fine.m} nodes (tol {tol:.1e})"
        )
    return _scalar(value)


def _scalar(v):
    v = np.asarray(v)
    if v.ndim:
        return v
    return complex(v) if np.iscomplexobj(v) else float(v)


def convolve_at(f, g, x, grid: QuadratureGrid):
    """``(f * g)(x) = integral f(y) g(x - y) dy`` evaluated pointwise on ``grid``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    y = grid.nodes
    vals = f(y)[None, :] * g(x[:, None] - y[None, :])
    return vals @ grid.weights
