"""Success probabilities of three cat-state heralding methods and squeezing sweeps.

* GPS: inputs (r, -r), reflectance solving sigma_11 = 1, closed-form P(n).
* Homodyne conditioning: Fock state from a two-mode squeezer then homodyne
  selection, with probability (1 - tanh^2 r) tanh^(2n) r / (10 n).
* Conventional photon subtraction: squeezed vacuum tapped with R = 0.05,
  computed by brute force in the Fock basis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .errors import GPSError
from .gaussian import SqueezerPair, build_sigma, db_to_r, output_squeezing, solve_reflectance
from .herald import prob_closed

CONVENTIONAL_R = 0.05
DEFAULT_FREP = 100e6
METHODS = ("gps", "homodyne", "conventional")


@dataclass(frozen=True)
class MethodResult:
    method: str
    n: int
    r: float
    probability: float
    f_rep: float = DEFAULT_FREP
    meta: dict = field(default_factory=dict, compare=False)

    @property
    def rate(self) -> float:
        """Heralding events per second at repetition rate ``f_rep``."""
        return self.probability * self.f_rep


def gps_success(r: float, n: int, f_rep: float = DEFAULT_FREP) -> MethodResult:
    """GPS with inputs (r, -r) at the sigma_11 = 1 reflectance.

    r = 0 is accepted as the vacuum limit: P(0) = 1 and P(n >= 1) = 0.
    """
    if r < 0:
        raise ValueError("r must be non-negative")
    if r == 0:
        return MethodResult("gps", n, r, 1.0 if n == 0 else 0.0, f_rep, {"limit": "vacuum"})
    sq = SqueezerPair.opposite(r)
    bs = solve_reflectance(sq)
    sigma = build_sigma(sq, bs)
    meta = {"R": bs.R, "r_c": output_squeezing(sigma), "s12": sigma.s12}
    return MethodResult("gps", n, r, prob_closed(sigma, n), f_rep, meta)


def homodyne_probability(r: float, n: int) -> float:
    t2 = math.tanh(r) ** 2
    return (1.0 - t2) * t2**n / (10.0 * n)


def homodyne_method_success(r: float, n: int, f_rep: float = DEFAULT_FREP) -> MethodResult:
    """Fock-state heralding followed by homodyne conditioning (quoted fidelity ~0.99)."""
    if n < 1:
        raise ValueError("homodyne conditioning needs n >= 1")
    if r < 0:
        raise ValueError("r must be non-negative")
    return MethodResult("homodyne", n, r, homodyne_probability(r, n), f_rep, {"fidelity": 0.99})


def conventional_ps_success(
    r: float,
    n: int,
    f_rep: float = DEFAULT_FREP,
    reflectance: float = CONVENTIONAL_R,
    nmax: int | None = None,
) -> MethodResult:
    """Photon subtraction from one squeezed vacuum with a weak tap."""
    if nmax is None:
        nmax = oracle.auto_nmax(r)
    p = oracle.conventional_ps_probability(r, reflectance, n, nmax)
    tail = oracle.squeezed_vacuum_tail(r, nmax)
    return MethodResult("conventional", n, r, p, f_rep, {"R": reflectance, "nmax": nmax, "tail": tail})


_DISPATCH = {
    "gps": gps_success,
    "homodyne": homodyne_method_success,
    "conventional": conventional_ps_success,
}


def success(method: str, r: float, n: int, f_rep: float = DEFAULT_FREP) -> MethodResult:
    try:
        fn = _DISPATCH[method]
    except KeyError:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}") from None
    return fn(r, n, f_rep)


@dataclass(frozen=True)
class SweepSpec:
    """Input squeezing axis (dB), photon numbers and methods for a sweep."""

    levels_db: tuple[float, ...]
    ns: tuple[int, ...] = (5, 10, 20)
    methods: tuple[str, ...] = METHODS
    f_rep: float = DEFAULT_FREP

    def __post_init__(self):
        levels = np.asarray(self.levels_db, dtype=float)
        if levels.size == 0 or np.any(np.diff(levels) <= 0):
            raise ValueError("levels_db must be non-empty and strictly increasing")
        if np.any(levels < 0):
            raise ValueError("squeezing levels must be non-negative")
        if not self.f_rep > 0:
            raise ValueError("f_rep must be positive")
        for m in self.methods:
            if m not in METHODS:
                raise ValueError(f"unknown method {m!r}")

    @classmethod
    def from_range(cls, lo: float, hi: float, step: float, **kw) -> SweepSpec:
        """Inclusive grid lo, lo+step, ..., rounded to suppress float drift."""
        count = int(math.floor((hi - lo) / step + 1e-9)) + 1
        levels = tuple(round(lo + i * step, 12) for i in range(count))
        return cls(levels, **kw)


@dataclass(frozen=True)
class SweepPoint:
    level_db: float
    r: float
    result: MethodResult | None
    method: str
    n: int
    error: str | None = None

    @property
    def probability(self) -> float:
        return self.result.probability if self.result is not None else math.nan


def default_sweep_spec(**kw) -> SweepSpec:
    return SweepSpec.from_range(0.5, 22.0, 0.1, **kw)


def sweep(spec: SweepSpec) -> list[SweepPoint]:
    """Evaluate every (level, method, n) point in axis order.

    Failures (e.g. Fock truncation at high squeezing) are recorded on the
    point instead of aborting the sweep.
    """
    out = []
    for level in spec.levels_db:
        r = db_to_r(level)
        for method in spec.methods:
            for n in spec.ns:
                try:
                    res = success(method, r, n, spec.f_rep)
                    out.append(SweepPoint(level, r, res, method, n))
                except GPSError as exc:
                    out.append(SweepPoint(level, r, None, method, n, f"{type(exc).__name__}: {exc}"))
    return out


def curve(points: list[SweepPoint], method: str, n: int) -> tuple[np.ndarray, np.ndarray]:
    sel = [p for p in points if p.method == method and p.n == n]
    return np.array([p.level_db for p in sel]), np.array([p.probability for p in sel])


def interior_maxima(values) -> int:
    """Number of strict local maxima, counting the plateau-free interior only."""
    v = np.asarray(values, dtype=float)
    return int(np.sum((v[1:-1] > v[:-2]) & (v[1:-1] > v[2:])))


def peak_level(points: list[SweepPoint], method: str, n: int) -> float:
    x, y = curve(points, method, n)
    return float(x[np.nanargmax(y)])
