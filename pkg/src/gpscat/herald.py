"""Heralded single-mode states from photon counting on mode 1 of a Gaussian pair.

Two routes are provided. The closed forms hold only at sigma_11 = 1 and are
evaluated through logarithms so that large photon numbers do not overflow.
The general route works for any positive-definite sigma and reduces the
heralding integral to

    Psi_n(x2) = |sigma|**(1/4) phi_0(sqrt(|sigma|/s11) x2) I_n(-s12/s11 x2)
    I_n(x)    = integral phi_0(sqrt(s11) (x - y)) phi_n(y) dy

with I_n computed by a Gauss-Hermite rule centered on the Gaussian factor.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import special
from .errors import ConditionViolated, DomainError, NearConditionWarning, ZeroProbability
from .gaussian import SigmaMatrix, output_squeezing
from .special import QuadratureGrid, hermite_grid, integrate

GPS_TOL = 1e-9
NEAR_GPS_TOL = 1e-6
PROB_FLOOR = 1e-300
OSCILLATION_THRESHOLD = 0.05


def is_gps(sigma: SigmaMatrix, tol: float = GPS_TOL) -> bool:
    return abs(sigma.s11 - 1.0) < tol


def _require_gps(sigma: SigmaMatrix) -> None:
    if not is_gps(sigma):
        raise ConditionViolated(
            f"closed form needs sigma_11 = 1 (|s11 - 1| < {GPS_TOL:g}), got s11 = {sigma.s11!r}"
        )


def _warn_near_gps(sigma: SigmaMatrix) -> None:
    d = abs(sigma.s11 - 1.0)
    if GPS_TOL <= d < NEAR_GPS_TOL:
        warnings.warn(
            f"sigma_11 = {sigma.s11!r} is close to 1 but outside the closed-form tolerance",
            NearConditionWarning,
            stacklevel=3,
        )


# --------------------------------------------------------------------------
# sigma_11 = 1 closed forms
# --------------------------------------------------------------------------


def closed_decay(sigma: SigmaMatrix) -> float:
    """beta in Psi_n ~ x**n exp(-beta x**2); beta = (|sigma| + s22) / 4."""
    return 0.25 * (sigma.det + sigma.s22)


def _log_closed_prefactor(sigma: SigmaMatrix, n: int) -> float:
    # log of (|sigma|/pi)**(1/4) |s12|**n / sqrt(2**n n!)
    with np.errstate(divide="ignore"):
        log_s12 = math.log(abs(sigma.s12)) if sigma.s12 != 0 else -math.inf
    return (
        0.25 * math.log(sigma.det / math.pi)
        + (n * log_s12 if n else 0.0)
        - 0.5 * (n * math.log(2.0) + special.log_factorial(n))
    )


def _closed_log_and_sign(sigma: SigmaMatrix, n: int, x) -> tuple[np.ndarray, np.ndarray]:
    x = np.asarray(x, dtype=float)
    beta = closed_decay(sigma)
    with np.errstate(divide="ignore"):
        log_x = n * np.log(np.abs(x)) if n else np.zeros_like(x)
    log_mag = _log_closed_prefactor(sigma, n) + log_x - beta * x * x
    sign = np.sign(-sigma.s12) ** n * np.where(x < 0, (-1.0) ** n, 1.0)
    return log_mag, sign


def herald_wavefunction_closed(sigma: SigmaMatrix, n: int, x2):
    """Unnormalized heralded amplitude at sigma_11 = 1.

    (|sigma|/pi)**(1/4) (-s12)**n / sqrt(2**n n!) x**n exp(-(|sigma|+s22) x**2 / 4)
    """
    _require_gps(sigma)
    if n < 0:
        raise ValueError("n must be non-negative")
    log_mag, sign = _closed_log_and_sign(sigma, n, x2)
    out = sign * np.exp(log_mag)
    return out if out.ndim else float(out)


def log_prob_closed(sigma: SigmaMatrix, n: int) -> float:
    _require_gps(sigma)
    if n < 0:
        raise ValueError("n must be non-negative")
    if n > 0 and sigma.s12 == 0:
        return -math.inf
    return (
        0.5 * math.log(sigma.det)
        + special.log_central_binomial(n)
        + (2 * n * math.log(abs(sigma.s12)) if n else 0.0)
        - n * math.log(8.0)
        - (n + 0.5) * math.log(0.5 * (sigma.det + sigma.s22))
    )


def prob_closed(sigma: SigmaMatrix, n: int) -> float:
    """Success probability P(n) at sigma_11 = 1.

    P(n) = sqrt|sigma| (2n)! s12**(2n) / (8**n (n!)**2) ((|sigma| + s22)/2)**(-n-1/2)
    """
    return math.exp(log_prob_closed(sigma, n))


# --------------------------------------------------------------------------
# General sigma_11
# --------------------------------------------------------------------------


def _bare_rule(m: int) -> tuple[np.ndarray, np.ndarray]:
    t, w_folded = special._hermite_rule(m)
    return t, w_folded * np.exp(-t * t)


def i_function(s11: float, n: int, x, nodes: int | None = None):
    """I_n(x) = integral phi_0(sqrt(s11) (x - y)) phi_n(y) dy.

    The Gaussian part of the integrand is completed to
    exp(-(1 + s11)/2 (y - c)**2) with c = s11 x / (1 + s11); what remains is
    the orthonormal Hermite polynomial of degree n, so a rule with
    ``n // 2 + 1`` nodes is already exact.
    """
    if s11 <= 0:
        raise DomainError("s11 must be positive")
    x = np.asarray(x, dtype=float)
    m = nodes if nodes is not None else n // 2 + 4
    t, w = _bare_rule(m)
    scale = math.sqrt(0.5 * (1.0 + s11))
    c = s11 * x / (1.0 + s11)
    k = 0.5 * s11 * x * x / (1.0 + s11)
    y = c[..., None] + t / scale
    poly = special.hermite_poly_normalized(n, y)
    out = special.PI_M14 * np.exp(-k) * (poly @ w) / scale
    return out if out.ndim else float(out)


def general_decay(sigma: SigmaMatrix) -> float:
    """gamma in |Psi_n| ~ poly * exp(-gamma x**2) for arbitrary sigma."""
    a = sigma.s11
    return 0.5 * sigma.det / a + sigma.s12**2 / (2.0 * a * (1.0 + a))


def herald_wavefunction_general(sigma: SigmaMatrix, n: int, x2, nodes: int | None = None):
    """Unnormalized heralded amplitude for any positive-definite sigma."""
    if n < 0:
        raise ValueError("n must be non-negative")
    x2 = np.asarray(x2, dtype=float)
    a = sigma.s11
    envelope = sigma.det**0.25 * special.eval_phi(0, math.sqrt(sigma.det / a) * x2)
    out = envelope * i_function(a, n, -sigma.s12 / a * x2, nodes=nodes)
    return out if np.ndim(out) else float(out)


def prob_general(sigma: SigmaMatrix, n: int, tol: float = 1e-12) -> float:
    """P(n) as the quadrature norm of the general-route wavefunction."""
    _warn_near_gps(sigma)
    grid = hermite_grid(2 * n, 2.0 * general_decay(sigma), tol=tol)
    return integrate(lambda x: herald_wavefunction_general(sigma, n, x) ** 2, grid)


def extra_convolution_check(sigma: SigmaMatrix, n: int, points: int = 81) -> float:
    """Max residual between I_n for s11 < 1 and the Gaussian-smoothed I_n at s11 = 1.

    For 0 < s11 < 1, I_n^(s11) = g * I_n^(1) with
    g(x) = exp(-s11 x**2 / (2 (1 - s11))) / sqrt(2 pi (1 - s11)), and
    I_n^(1) is the closed-form vacuum convolution. The right-hand side is
    integrated on a rule fitted to the product of both Gaussians, which keeps
    it accurate as g narrows toward a delta.
    """
    a = sigma.s11
    if not 0.0 < a < 1.0:
        raise DomainError(f"extra convolution needs 0 < s11 < 1, got {a}")
    b = a / (2.0 * (1.0 - a))
    half = 2.0 * math.sqrt(2 * n + 1) + 4.0
    xs = np.linspace(-half, half, points)
    direct = i_function(a, n, xs)
    norm_g = 1.0 / math.sqrt(2.0 * math.pi * (1.0 - a))
    m = n // 2 + 4
    t, w = _bare_rule(m)
    prec = b + 0.25
    scale = math.sqrt(prec)
    smoothed = np.empty_like(xs)
    for i, x in enumerate(xs):
        z0 = x / (4.0 * b + 1.0)
        z = z0 + t / scale
        # exp(-b z^2 - (x-z)^2/4) = exp(-prec (z-z0)^2) * exp(-rest)
        rest = b * z0 * z0 + 0.25 * (x - z0) ** 2
        poly = special.vacuum_convolution(n, x - z) * np.exp(0.25 * (x - z) ** 2)
        smoothed[i] = norm_g * math.exp(-rest) * (poly @ w) / scale
    return float(np.max(np.abs(direct - smoothed)))


# --------------------------------------------------------------------------
# Normalized outcome
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class HeraldOutcome:
    """Result of detecting ``n`` photons in mode 1.

    ``r_c`` is set only at sigma_11 = 1, where the state approximates a
    squeezed cat with amplitude sqrt(n) and squeezing r_c.
    """

    n: int
    prob: float
    log_prob: float
    sigma: SigmaMatrix
    r_c: float | None
    closed: bool

    @property
    def decay(self) -> float:
        return closed_decay(self.sigma) if self.closed else general_decay(self.sigma)

    def psi(self, x):
        """Normalized position wavefunction psi_n(x2)."""
        if self.closed:
            log_mag, sign = _closed_log_and_sign(self.sigma, self.n, x)
            out = sign * np.exp(log_mag - 0.5 * self.log_prob)
            return out if out.ndim else float(out)
        return herald_wavefunction_general(self.sigma, self.n, x) / math.sqrt(self.prob)

    __call__ = psi

    def psi_p(self, p):
        return p_domain_wavefunction(self, p)

    def grid(self, extra_degree: int = 0) -> QuadratureGrid:
        """Rule that integrates |psi|**2 times a polynomial of ``extra_degree``."""
        return hermite_grid(2 * self.n + extra_degree, 2.0 * self.decay)

    def support(self, rel: float = 1e-8) -> float:
        """Half-width outside which |psi| < rel * peak (envelope estimate)."""
        g = self.decay
        peak = math.sqrt(self.n / (2.0 * g)) if self.n else 0.0
        return peak + math.sqrt(-math.log(rel) / g) + math.sqrt(max(self.n, 1) / g)


def herald(sigma: SigmaMatrix, n: int) -> HeraldOutcome:
    """Herald on n photons: normalized state, P(n) and r_c when defined."""
    if n < 0:
        raise ValueError("n must be non-negative")
    closed = is_gps(sigma)
    if closed:
        log_p = log_prob_closed(sigma, n)
        prob = math.exp(log_p)
        r_c = output_squeezing(sigma)
    else:
        prob = prob_general(sigma, n)
        log_p = math.log(prob) if prob > 0 else -math.inf
        r_c = None
    if not log_p > math.log(PROB_FLOOR):
        raise ZeroProbability(f"P({n}) = {prob:.3e} is below the floor {PROB_FLOOR:g}")
    return HeraldOutcome(n=n, prob=prob, log_prob=log_p, sigma=sigma, r_c=r_c, closed=closed)


def p_domain_wavefunction(outcome: HeraldOutcome, p2, tol: float = 1e-10):
    """Fourier transform of psi_n with kernel exp(-i p x) / sqrt(2 pi), by quadrature."""
    p2 = np.asarray(p2, dtype=float)
    g = outcome.decay
    p_max = float(np.max(np.abs(p2))) if p2.size else 0.0
    # exp(-i p x) on a rule of width 1/sqrt(g) needs ~ p^2 / g extra degree
    grid = hermite_grid(outcome.n + int(2.0 * p_max * p_max / g) + 40, g, tol=tol)
    flat = np.atleast_1d(p2).ravel()

    def f(nodes):
        k = np.exp(-1j * np.outer(flat, nodes)) / math.sqrt(2.0 * math.pi)
        return k * np.asarray(outcome.psi(nodes))[None, :]

    out = np.asarray(integrate(f, grid, tol=tol))
    out = out.reshape(p2.shape)
    return out if out.ndim else complex(out)


def p_domain_closed(outcome: HeraldOutcome, p2):
    """Analytic Fourier transform of the sigma_11 = 1 state.

    For psi = c x**n exp(-beta x**2) the transform is
    c/sqrt(2 pi) sqrt(pi/beta) (-i)**n (2 sqrt(beta))**-n H_n(u) exp(-u**2),
    u = p / (2 sqrt(beta)).
    """
    if not outcome.closed:
        raise ConditionViolated("analytic transform exists only at sigma_11 = 1")
    n = outcome.n
    beta = closed_decay(outcome.sigma)
    p2 = np.asarray(p2, dtype=float)
    u = p2 / (2.0 * math.sqrt(beta))
    sign = np.sign(-outcome.sigma.s12) ** n
    log_c = _log_closed_prefactor(outcome.sigma, n) - 0.5 * outcome.log_prob
    log_amp = (
        log_c
        - 0.5 * math.log(2.0 * math.pi)
        + 0.5 * math.log(math.pi / beta)
        - n * math.log(2.0 * math.sqrt(beta))
        + 0.25 * math.log(math.pi)
        + 0.5 * (n * math.log(2.0) + special.log_factorial(n))
    )
    shape = special.eval_phi(n, u) * np.exp(-0.5 * u * u)
    out = sign * (-1j) ** n * math.exp(log_amp) * shape
    return out if np.ndim(out) else complex(out)


def oscillation_metric(values) -> float:
    """Largest interior local maximum of |psi| relative to the global peak.

    Interior means strictly between the outermost two local maxima. Zero when
    there are fewer than three local maxima.
    """
    a = np.abs(np.asarray(values, dtype=float))
    is_max = (a[1:-1] > a[:-2]) & (a[1:-1] >= a[2:])
    idx = np.nonzero(is_max)[0] + 1
    if idx.size < 3:
        return 0.0
    return float(a[idx[1:-1]].max() / a.max())


def outcome_oscillation(outcome: HeraldOutcome, points: int = 4001) -> float:
    half = outcome.support(1e-6)
    x = np.linspace(-half, half, points)
    return oscillation_metric(outcome.psi(x))
