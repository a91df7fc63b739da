"""Brute-force cross-check in a truncated Fock space.

Two squeezed vacua are expanded in photon number, mixed by a beam splitter
built block by block (each block holds a fixed total photon number), and
mode 1 is projected on |n>. Nothing here uses the Gaussian closed forms.

Sign conventions are pinned to the wavefunction picture used elsewhere in the
package: S(r)|0> has position wavefunction exp(r/2) phi_0(exp(r) x), and the
beam splitter maps the quadrature vector x -> M x with
M = [[sqrt R, -sqrt T], [sqrt T, sqrt R]], the matrix behind ``build_sigma``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import expm

from . import special
from .errors import TruncationError, ZeroProbability

TAIL_LIMIT = 1e-6
PROB_FLOOR = 1e-300


@dataclass(frozen=True)
class FockState:
    """Amplitudes over a truncated one- or two-mode Fock basis.

    ``amps[n]`` (one mode) or ``amps[n1, n2]`` (two modes). ``tail`` is the
    probability mass known to be missing because of truncation.
    """

    amps: np.ndarray
    tail: float = 0.0

    @property
    def modes(self) -> int:
        return self.amps.ndim

    @property
    def cutoff(self) -> int:
        """Largest photon number represented per mode."""
        return self.amps.shape[0] - 1

    @property
    def norm2(self) -> float:
        return float(np.sum(np.abs(self.amps) ** 2))

    def photon_distribution(self) -> np.ndarray:
        p = np.abs(self.amps) ** 2
        return p if self.modes == 1 else p.sum(axis=1)

    def mean_photon(self) -> float:
        p = self.photon_distribution()
        return float(np.arange(p.size) @ p)


def squeezed_vacuum_amplitudes(r: float, nmax: int) -> np.ndarray:
    """c_2m = (-tanh r)**m sqrt((2m)!) / (2**m m! sqrt(cosh r)); odd entries zero."""
    c = np.zeros(nmax + 1)
    m = np.arange(nmax // 2 + 1)
    t = math.tanh(r)
    log_mag = (
        -0.5 * math.log(math.cosh(r))
        + 0.5 * special.log_factorial(2 * m)
        - m * math.log(2.0)
        - special.log_factorial(m)
    )
    if t == 0:
        c[0] = 1.0
        return c
    c[2 * m] = (-np.sign(t)) ** m * np.exp(log_mag + m * math.log(abs(t)))
    return c


def squeezed_vacuum_fock(r: float, nmax: int, tail_limit: float = TAIL_LIMIT) -> FockState:
    """S(r)|0> truncated at ``nmax`` photons."""
    c = squeezed_vacuum_amplitudes(r, nmax)
    tail = max(0.0, 1.0 - float(c @ c))
    if tail > tail_limit:
        raise TruncationError(f"squeezed vacuum r={r} loses {tail:.3e} beyond {nmax} photons")
    return FockState(c, tail)


def squeezed_vacuum_tail(r: float, nmax: int) -> float:
    c = squeezed_vacuum_amplitudes(r, nmax)
    return max(0.0, 1.0 - float(c @ c))


def auto_nmax(r: float, tol: float = 1e-12, cap: int = 200, step: int = 20) -> int:
    """Smallest multiple of ``step`` (at least 40) whose squeezed-vacuum tail is below ``tol``."""
    nmax = 40
    while nmax < cap and squeezed_vacuum_tail(r, nmax) > tol:
        nmax += step
    return min(nmax, cap)


def product_state(a: FockState, b: FockState) -> FockState:
    """Two-mode product of single-mode states with a common cutoff."""
    if a.modes != 1 or b.modes != 1:
        raise ValueError("product_state takes single-mode states")
    n = max(a.cutoff, b.cutoff) + 1
    ca = np.zeros(n, dtype=np.result_type(a.amps, b.amps))
    cb = np.zeros_like(ca)
    ca[: a.amps.size] = a.amps
    cb[: b.amps.size] = b.amps
    tail = 1.0 - (1.0 - a.tail) * (1.0 - b.tail)
    return FockState(np.outer(ca, cb), tail)


def fock_basis_state(n: int, cutoff: int) -> FockState:
    c = np.zeros(cutoff + 1)
    c[n] = 1.0
    return FockState(c)


@lru_cache(maxsize=4096)
def _bs_block(theta: float, total: int) -> np.ndarray:
    # generator theta (a1^dag a2 - a1 a2^dag) on |k, total-k>, k = 0..total
    k = np.arange(total)
    off = np.sqrt((k + 1.0) * (total - k))
    gen = np.zeros((total + 1, total + 1))
    gen[k + 1, k] = off
    gen[k, k + 1] = -off
    u = expm(theta * gen)
    u.setflags(write=False)
    return u


class BeamSplitterUnitary:
    """exp(theta (a1^dag a2 - a1 a2^dag)) with cos(theta) = sqrt(R), one block per total photon number.

    theta is taken negative so that quadratures transform with
    M = [[sqrt R, -sqrt T], [sqrt T, sqrt R]].
    """

    def __init__(self, reflectance: float, nmax: int):
        if not 0.0 <= reflectance <= 1.0:
            raise ValueError("reflectance must lie in [0, 1]")
        self.reflectance = reflectance
        self.nmax = nmax
        self.theta = -math.acos(math.sqrt(reflectance))

    def block(self, total: int) -> np.ndarray:
        return _bs_block(self.theta, total)

    def unitarity_residual(self, total: int) -> float:
        u = self.block(total)
        return float(np.max(np.abs(u.T @ u - np.eye(total + 1))))

    def apply(self, state: FockState) -> FockState:
        """Image of a two-mode state; output cutoff is twice the input cutoff."""
        if state.modes != 2:
            raise ValueError("beam splitter acts on two-mode states")
        c = state.amps
        n_in = c.shape[0] - 1
        out = np.zeros((2 * n_in + 1, 2 * n_in + 1), dtype=c.dtype)
        for total in range(2 * n_in + 1):
            k = np.arange(max(0, total - n_in), min(total, n_in) + 1)
            v = c[k, total - k]
            if not np.any(v):
                continue
            vin = np.zeros(total + 1, dtype=c.dtype)
            vin[k] = v
            vout = self.block(total) @ vin
            kk = np.arange(total + 1)
            out[kk, total - kk] = vout
        return FockState(out, state.tail)


def beam_splitter_unitary(reflectance: float, nmax: int) -> BeamSplitterUnitary:
    return BeamSplitterUnitary(reflectance, nmax)


def gps_fock_state(r1: float, r2: float, reflectance: float, nmax: int,
                   tail_limit: float = TAIL_LIMIT) -> FockState:
    """S(r1)|0> (x) S(r2)|0> after the beam splitter."""
    pair = product_state(squeezed_vacuum_fock(r1, nmax, tail_limit), squeezed_vacuum_fock(r2, nmax, tail_limit))
    return beam_splitter_unitary(reflectance, nmax).apply(pair)


def herald_fock(state2: FockState, n: int) -> tuple[float, FockState]:
    """Project mode 1 on |n>; return P(n) and the normalized mode-2 state."""
    if state2.modes != 2:
        raise ValueError("herald_fock needs a two-mode state")
    if n > state2.cutoff:
        raise ValueError(f"n = {n} exceeds the cutoff {state2.cutoff}")
    row = state2.amps[n]
    prob = float(np.sum(np.abs(row) ** 2))
    if prob < PROB_FLOOR:
        raise ZeroProbability(f"P({n}) = {prob:.3e}")
    return prob, FockState(row / math.sqrt(prob), state2.tail)


def herald_distribution(state2: FockState) -> np.ndarray:
    return np.sum(np.abs(state2.amps) ** 2, axis=1)


def fock_to_wavefunction(state: FockState, x):
    """sum_m c_m phi_m(x) for a single-mode state."""
    if state.modes != 1:
        raise ValueError("single-mode state required")
    x = np.asarray(x, dtype=float)
    phis = special.eval_phi_all(state.cutoff, x)
    out = np.tensordot(state.amps, phis, axes=(0, 0))
    return out if np.ndim(out) else out.item()


def _quadrature_op(cutoff: int) -> np.ndarray:
    a = np.diag(np.sqrt(np.arange(1, cutoff + 1, dtype=float)), 1)
    return (a + a.T) / math.sqrt(2.0)


def x_second_moments(state2: FockState) -> np.ndarray:
    """Matrix of <x_i x_j> for a real two-mode state (vacuum variance 1/2)."""
    c = state2.amps
    X = _quadrature_op(state2.cutoff)
    x1c = X @ c
    x2c = c @ X.T
    m11 = np.vdot(x1c, x1c).real
    m22 = np.vdot(x2c, x2c).real
    m12 = np.vdot(x1c, x2c).real
    return np.array([[m11, m12], [m12, m22]])


@lru_cache(maxsize=512)
def _conventional_distribution(r1: float, reflectance: float, nmax: int) -> np.ndarray:
    pair = product_state(squeezed_vacuum_fock(r1, nmax), fock_basis_state(0, nmax))
    dist = herald_distribution(beam_splitter_unitary(reflectance, nmax).apply(pair))
    dist.setflags(write=False)
    return dist


def conventional_ps_probability(r1: float, reflectance: float, n: int, nmax: int | None = None) -> float:
    """P(n) for a squeezed vacuum tapped by a beam splitter into a detector (r2 = 0)."""
    if nmax is None:
        nmax = auto_nmax(r1)
    if n > nmax:
        raise ValueError("n exceeds the truncation")
    return float(_conventional_distribution(float(r1), float(reflectance), int(nmax))[n])
