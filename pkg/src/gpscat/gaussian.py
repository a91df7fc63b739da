"""Two-mode Gaussian states built from two squeezers and a beam splitter.

The central object is the wavefunction-exponent matrix ``sigma`` of

    G(x1, x2) = |sigma|**(1/4) / sqrt(pi) * exp(-x^T sigma x / 2)

with vacuum corresponding to the identity. Its inverse is twice the
x-quadrature covariance matrix (vacuum variance 1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import NoSolution

MAX_ABS_R = 5.0
DB_PER_NEPER = 20.0 / math.log(10.0)


def db_to_r(level_db: float) -> float:
    """Squeezing parameter for a level in dB, with dB = 10 log10(exp(2r))."""
    if level_db < 0:
        raise ValueError("squeezing level in dB must be non-negative")
    return level_db / DB_PER_NEPER


def r_to_db(r: float) -> float:
    return r * DB_PER_NEPER


@dataclass(frozen=True)
class SqueezerPair:
    """Squeezing parameters of the two input squeezed vacua.

    ``r > 0`` squeezes the x quadrature.
    """

    r1: float
    r2: float

    def __post_init__(self):
        for name in ("r1", "r2"):
            r = getattr(self, name)
            if not math.isfinite(r):
                raise ValueError(f"{name} must be finite, got {r}")
            if abs(r) > MAX_ABS_R:
                raise ValueError(f"|{name}| = {abs(r)} exceeds sanity bound {MAX_ABS_R}")

    @classmethod
    def opposite(cls, r: float) -> SqueezerPair:
        """(r, -r): equal squeezing in orthogonal quadratures."""
        return cls(r, -r)

    @classmethod
    def from_db(cls, level_db: float) -> SqueezerPair:
        return cls.opposite(db_to_r(level_db))

    @property
    def s1(self) -> float:
        return math.exp(self.r1)

    @property
    def s2(self) -> float:
        return math.exp(self.r2)


@dataclass(frozen=True)
class BeamSplitter:
    reflectance: float

    def __post_init__(self):
        if not 0.0 <= self.reflectance <= 1.0:
            raise ValueError(f"reflectance must lie in [0, 1], got {self.reflectance}")

    @property
    def R(self) -> float:
        return self.reflectance

    @property
    def T(self) -> float:
        return 1.0 - self.reflectance

    def matrix(self) -> np.ndarray:
        """Orthogonal map acting on the quadrature vector, x -> M x."""
        r, t = math.sqrt(self.R), math.sqrt(self.T)
        return np.array([[r, t], [-t, r]])


@dataclass(frozen=True)
class SigmaMatrix:
    """Real symmetric positive-definite 2x2 matrix (s21 = s12)."""

    s11: float
    s12: float
    s22: float

    def __post_init__(self):
        if not (self.s11 > 0 and self.det > 0):
            raise ValueError(f"sigma is not positive definite: {self}")

    @classmethod
    def from_array(cls, a) -> SigmaMatrix:
        a = np.asarray(a, dtype=float)
        return cls(float(a[0, 0]), 0.5 * float(a[0, 1] + a[1, 0]), float(a[1, 1]))

    @classmethod
    def identity(cls) -> SigmaMatrix:
        return cls(1.0, 0.0, 1.0)

    @property
    def det(self) -> float:
        return self.s11 * self.s22 - self.s12 * self.s12

    @property
    def trace(self) -> float:
        return self.s11 + self.s22

    def as_array(self) -> np.ndarray:
        return np.array([[self.s11, self.s12], [self.s12, self.s22]])

    def inverse(self) -> SigmaMatrix:
        d = self.det
        return SigmaMatrix(self.s22 / d, -self.s12 / d, self.s11 / d)


@dataclass(frozen=True)
class GaussianStateSpec:
    """Zero-displacement two-mode Gaussian state described by ``sigma``."""

    sigma: SigmaMatrix
    mu: tuple[float, float] = field(default=(0.0, 0.0))
    nu: tuple[float, float] = field(default=(0.0, 0.0))

    def __post_init__(self):
        if any(self.mu) or any(self.nu):
            raise ValueError("only zero displacement is supported")

    def amplitude(self, x1, x2):
        """G(x1, x2) on broadcast arrays."""
        s = self.sigma
        x1 = np.asarray(x1, dtype=float)
        x2 = np.asarray(x2, dtype=float)
        q = s.s11 * x1 * x1 + 2.0 * s.s12 * x1 * x2 + s.s22 * x2 * x2
        return s.det**0.25 / math.sqrt(math.pi) * np.exp(-0.5 * q)


def build_sigma(sq: SqueezerPair, bs: BeamSplitter) -> SigmaMatrix:
    """sigma of the squeezed pair after the beam splitter."""
    a, b = math.exp(2 * sq.r1), math.exp(2 * sq.r2)
    R, T = bs.R, bs.T
    return SigmaMatrix(R * a + T * b, math.sqrt(R * T) * (a - b), T * a + R * b)


def build_sigma_inverse(sq: SqueezerPair, bs: BeamSplitter) -> SigmaMatrix:
    """sigma**-1, i.e. the beam-splitter image of diag(exp(-2 r1), exp(-2 r2)).

    The off-diagonal sign is the one that makes this the exact inverse of
    :func:`build_sigma`; both come from the same orthogonal mixing matrix.
    """
    a, b = math.exp(-2 * sq.r1), math.exp(-2 * sq.r2)
    R, T = bs.R, bs.T
    return SigmaMatrix(R * a + T * b, math.sqrt(R * T) * (a - b), T * a + R * b)


def reflectance_for_sigma11(sq: SqueezerPair, s11: float) -> BeamSplitter:
    """Reflectance placing sigma_11 at ``s11``.

    sigma_11 is linear in R, so the solution is unique when it exists.
    Raises NoSolution if it would fall outside [0, 1].
    """
    # expm1 keeps a - b resolvable when both squeezers are tiny.
    a, b = math.expm1(2 * sq.r1), math.expm1(2 * sq.r2)
    if a == b:
        raise NoSolution("equal squeezing: sigma_11 does not depend on R")
    R = ((s11 - 1.0) - b) / (a - b)
    if not 0.0 <= R <= 1.0:
        raise NoSolution(f"sigma_11 = {s11} needs R = {R:.6g}, outside [0, 1]")
    return BeamSplitter(R)


def solve_reflectance(sq: SqueezerPair) -> BeamSplitter:
    """Reflectance meeting the GPS condition sigma_11 = 1 with sigma_12 != 0.

    A solution exists if and only if r1 * r2 < 0.
    """
    if not ((sq.r1 > 0 > sq.r2) or (sq.r2 > 0 > sq.r1)):
        raise NoSolution(f"GPS condition needs r1*r2 < 0, got r1={sq.r1}, r2={sq.r2}")
    return reflectance_for_sigma11(sq, 1.0)


def gps_sigma(r: float) -> SigmaMatrix:
    """sigma at the GPS point for inputs (r, -r)."""
    sq = SqueezerPair.opposite(r)
    return build_sigma(sq, solve_reflectance(sq))


def output_squeezing(sigma: SigmaMatrix) -> float:
    """r_c with exp(2 r_c) = |sigma| + sigma_22."""
    return 0.5 * math.log(sigma.det + sigma.s22)


def output_squeezing_from_inputs(sq: SqueezerPair) -> float:
    """r_c at sigma_11 = 1 written in the input squeezing parameters."""
    e2 = math.exp(2 * (sq.r1 + sq.r2)) + math.exp(2 * sq.r1) + math.exp(2 * sq.r2) - 1.0
    return 0.5 * math.log(e2)


def p_domain_sigma(sigma: SigmaMatrix) -> SigmaMatrix:
    """Exponent matrix of the state in the (p1, p2) representation.

    Its inverse is sigma with the off-diagonal sign flipped.
    """
    return SigmaMatrix(sigma.s11, -sigma.s12, sigma.s22).inverse()
