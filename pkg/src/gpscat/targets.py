"""Reference squeezed cat states and wavefunction fidelity."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize_scalar

from . import special
from .errors import DegenerateState
from .special import QuadratureGrid, integrate

SMALL_ALPHA = 1e-4


@dataclass(frozen=True)
class CatTarget:
    """S(r) |Cat_{alpha,k}> with real alpha > 0; only k mod 2 matters."""

    alpha: float
    k: int
    r: float = 0.0

    def __post_init__(self):
        if not self.alpha >= 0 or not math.isfinite(self.alpha):
            raise ValueError(f"alpha must be a non-negative real, got {self.alpha}")
        if self.alpha == 0 and self.odd:
            raise DegenerateState("odd cat with alpha = 0 has zero norm")

    @property
    def odd(self) -> bool:
        return self.k % 2 == 1

    @property
    def s(self) -> float:
        return math.exp(self.r)

    @property
    def norm_const(self) -> float:
        """N_{alpha,k} = sqrt(2 (1 + (-1)**k exp(-2 alpha**2)))."""
        if self.odd:
            return math.sqrt(-2.0 * math.expm1(-2.0 * self.alpha**2))
        return math.sqrt(2.0 * (1.0 + math.exp(-2.0 * self.alpha**2)))

    def __call__(self, x):
        return cat_wavefunction_x(self, x)


def _cat_x(alpha, odd: bool, s, x):
    """Normalized squeezed cat in x; broadcasts over alpha, s and x.

    The two displaced Gaussians are combined as
    2 exp(-s^2 (x^2 + a^2)/2) {cosh, sinh}(s^2 a x), a = sqrt(2) alpha / s,
    and divided by sqrt((sqrt(pi)/s) N^2) with N^2 written through expm1.
    """
    alpha = np.asarray(alpha, dtype=float)
    s = np.asarray(s, dtype=float)
    x = np.asarray(x, dtype=float)
    a = math.sqrt(2.0) * alpha / s
    s2 = s * s
    log_env = -0.5 * s2 * (x * x + a * a) + 0.5 * np.log(s) - 0.25 * math.log(math.pi)
    arg = s2 * a * x
    # cosh/sinh(arg) * exp(-|arg|) stays bounded; put exp(|arg|) into the log
    log_env = log_env + np.abs(arg)
    if odd:
        small = alpha < SMALL_ALPHA
        n2 = -2.0 * np.expm1(-2.0 * alpha * alpha)
        bulk = np.sign(arg) * -np.expm1(-2.0 * np.abs(arg)) / np.sqrt(np.where(small, 1.0, n2))
        # alpha -> 0: 2 sinh(z) / N with z = sqrt(2) s alpha x, rewritten without cancellation as
        # sqrt(2) s x * [(1 - exp(-2|z|)) / (2|z|)] / sqrt(-expm1(-2 alpha^2) / (2 alpha^2))
        a2 = np.where(small & (alpha > 0), 2.0 * alpha * alpha, 1.0)
        q = np.where(alpha > 0, -np.expm1(-a2) / a2, 1.0)
        z2 = 2.0 * np.abs(arg)
        shc = np.where(z2 > 0, -np.expm1(-z2) / np.where(z2 > 0, z2, 1.0), 1.0)
        limit = math.sqrt(2.0) * s * x * shc / np.sqrt(q)
        val = np.where(small, limit, bulk)
    else:
        n2 = 2.0 * (1.0 + np.exp(-2.0 * alpha * alpha))
        val = (1.0 + np.exp(-2.0 * np.abs(arg))) / np.sqrt(n2)
    return val * np.exp(log_env)


def cat_wavefunction_x(t: CatTarget, x):
    """Normalized <x|S(r)|Cat_{alpha,k}>, real."""
    out = _cat_x(t.alpha, t.odd, t.s, x)
    return out if np.ndim(out) else float(out)


def cat_wavefunction_p(t: CatTarget, p):
    """Normalized <p|S(r)|Cat_{alpha,k}> with the exp(-i p x)/sqrt(2 pi) kernel.

    (exp(-i theta) + (-1)**k exp(i theta)) exp(-p**2 / (2 s**2)), theta = sqrt(2) alpha p / s.
    """
    p = np.asarray(p, dtype=float)
    s = t.s
    theta = math.sqrt(2.0) * t.alpha * p / s
    env = np.exp(-0.5 * (p / s) ** 2)
    # |.|^2 integrates to sqrt(pi) s N^2
    norm = math.sqrt(math.sqrt(math.pi) * s) * t.norm_const
    if t.odd:
        if t.alpha < SMALL_ALPHA:
            # sin(theta) / N without cancellation; exact as alpha -> 0
            q = -math.expm1(-2.0 * t.alpha**2) / (2.0 * t.alpha**2) if t.alpha > 0 else 1.0
            out = -1j * math.sqrt(2.0) * (p / s) * np.sinc(theta / math.pi) * env / math.sqrt(
                math.sqrt(math.pi) * s * q)
        else:
            out = -2j * np.sin(theta) * env / norm
    else:
        out = 2.0 * np.cos(theta) * env / norm + 0j
    out = np.asarray(out, dtype=complex)
    return out if out.ndim else complex(out)


def approx_target_wavefunction(n: int, s: float, x):
    """Normalized x**n exp(-s**2 x**2 / 4)."""
    if n < 0 or not s > 0:
        raise ValueError("need n >= 0 and s > 0")
    x = np.asarray(x, dtype=float)
    q = 0.5 * s * s
    # integral x^{2n} exp(-q x^2) = Gamma(n + 1/2) / q^{n + 1/2}
    log_c = 0.5 * ((n + 0.5) * math.log(q) - math.lgamma(n + 0.5))
    with np.errstate(divide="ignore"):
        log_x = n * np.log(np.abs(x)) if n else np.zeros_like(x)
    sign = np.where(x < 0, (-1.0) ** n, 1.0)
    out = sign * np.exp(log_c + log_x - 0.25 * s * s * x * x)
    return out if out.ndim else float(out)


def default_grid(m: int = 200, scale: float = 1.0) -> QuadratureGrid:
    return QuadratureGrid(m, 0.0, scale, tol=1e-10)


def overlap(psi_a, psi_b, grid: QuadratureGrid | None = None, check: bool = True):
    """integral conj(psi_a) psi_b dx."""
    grid = grid or default_grid()
    return integrate(lambda x: np.conj(psi_a(x)) * psi_b(x), grid, check=check)


def fidelity(psi_a, psi_b, grid: QuadratureGrid | None = None, check: bool = True) -> float:
    """|<psi_a|psi_b>|**2 for normalized wavefunctions given as callables of x."""
    return float(abs(overlap(psi_a, psi_b, grid, check)) ** 2)


@dataclass(frozen=True)
class CatFit:
    alpha: float
    r: float
    fidelity: float


def _fit_surface(psi_vals, grid, alphas, rs, odd):
    x = grid.nodes
    w = grid.weights * psi_vals
    A, Rr = np.meshgrid(alphas, rs, indexing="ij")
    cats = _cat_x(A[..., None], odd, np.exp(Rr)[..., None], x)
    return (cats @ w) ** 2


def best_cat_fit(
    psi,
    n_hint: int,
    r_center: float = 0.0,
    grid: QuadratureGrid | None = None,
    points: int = 61,
) -> CatFit:
    """Squeezed cat maximizing fidelity with a real normalized ``psi``.

    Scans alpha in [0.5, 1.5] sqrt(n_hint) and r in r_center +- 0.5 on a
    ``points`` x ``points`` grid, then refines alpha and r alternately by
    bounded scalar search. Parity is taken from ``n_hint``. The grid contains
    (sqrt(n_hint), r_center), and refinements are kept only if they improve.
    """
    grid = grid or default_grid()
    odd = n_hint % 2 == 1
    root = math.sqrt(max(n_hint, 1))
    alphas = np.linspace(0.5 * root, 1.5 * root, points)
    rs = np.linspace(r_center - 0.5, r_center + 0.5, points)
    psi_vals = np.asarray(psi(grid.nodes), dtype=float)
    surf = _fit_surface(psi_vals, grid, alphas, rs, odd)
    i, j = np.unravel_index(np.argmax(surf), surf.shape)
    best = CatFit(float(alphas[i]), float(rs[j]), float(surf[i, j]))
    da, dr = alphas[1] - alphas[0], rs[1] - rs[0]

    def f(alpha, r):
        return float(_fit_surface(psi_vals, grid, np.array([alpha]), np.array([r]), odd)[0, 0])

    for _ in range(3):
        res = minimize_scalar(lambda a: -f(a, best.r), bounds=(best.alpha - da, best.alpha + da), method="bounded",
                              options={"xatol": 1e-8})
        if -res.fun > best.fidelity and res.x > 0:
            best = CatFit(float(res.x), best.r, float(-res.fun))
        res = minimize_scalar(lambda r: -f(best.alpha, r), bounds=(best.r - dr, best.r + dr), method="bounded",
                              options={"xatol": 1e-8})
        if -res.fun > best.fidelity:
            best = CatFit(best.alpha, float(res.x), float(-res.fun))
    return best


def fn_rule(n: int) -> float:
    """Quoted fidelity between the approximate target and S(r)|Cat_{sqrt n, n}>: 1 - 0.03/n."""
    return 1.0 - 0.03 / n


def approx_target_fidelity(n: int, s: float = 1.0, grid: QuadratureGrid | None = None) -> float:
    """Fidelity of x**n exp(-s**2 x**2/4) with S(ln s)|Cat_{sqrt n, n}>."""
    cat = CatTarget(math.sqrt(n), n, math.log(s))
    grid = grid or special.hermite_grid(n + 120, 0.75 * s * s)
    return fidelity(lambda x: approx_target_wavefunction(n, s, x), cat, grid)
