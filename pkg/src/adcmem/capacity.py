"""Entropies, coherent information and capacity maximisation over the input."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import spectra
from .channels import DampingParams, _check_uses
from .errors import DomainError
from .spectra import Spectrum

SCAN_POINTS = 512
GOLDEN_WIDTH = 1e-10
TIE_TOL = 1e-12
_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0


@dataclass(frozen=True)
class CapacityResult:
    p_star: float
    q_value: float
    uses: int
    evaluations: int = 0
    bracket_width: float = 0.0
    r2_star: Optional[float] = None
    raw_max: float = 0.0

    @property
    def q_per_use(self) -> float:
        return self.q_value / self.uses


@dataclass(frozen=True)
class OscillatorMemory:
    tau: float
    tau_d: float

    def __post_init__(self):
        if not self.tau >= 0.0:
            raise DomainError(f"tau={self.tau} must be >= 0")
        if not self.tau_d > 0.0:
            raise DomainError(f"tau_d={self.tau_d} must be > 0")


def entropy_of_values(values, mults) -> np.ndarray:
    """-sum m * v log2 v along the last axis, with 0 log 0 = 0."""
    v = np.clip(np.asarray(values, dtype=float), 0.0, None)
    m = np.asarray(mults, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(v > 0.0, v * np.log2(np.where(v > 0.0, v, 1.0)), 0.0)
    return -np.sum(m * terms, axis=-1)


def von_neumann_entropy(s: Spectrum) -> float:
    return float(entropy_of_values(s.values, s.multiplicities))


def coherent_information(output: Spectrum, environment: Spectrum) -> float:
    return von_neumann_entropy(output) - von_neumann_entropy(environment)


# vectorised I_c(p) for each model; each takes an array of p


def two_use_ic(params: DampingParams) -> Callable[[np.ndarray], np.ndarray]:
    def f(p):
        out, m = spectra.two_use_output_values(params.chi, params.mu, p)
        env, _ = spectra.two_use_environment_values(params.chi, params.mu, p)
        return entropy_of_values(out, m) - entropy_of_values(env, m)
    return f


def memoryless_ic(n: int, chi: float) -> Callable[[np.ndarray], np.ndarray]:
    def f(p):
        out, env, m = spectra.n_use_memoryless_values(n, chi, p)
        return entropy_of_values(out, m) - entropy_of_values(env, m)
    return f


def perfect_memory_ic(n: int, chi: float) -> Callable[[np.ndarray], np.ndarray]:
    def f(p):
        out, om, env, em = spectra.n_use_perfect_memory_values(n, chi, p)
        return entropy_of_values(out, om) - entropy_of_values(env, em)
    return f


def coherent_ic(params: DampingParams) -> Callable[[np.ndarray, np.ndarray], np.ndarray]:
    def f(p, r2):
        out, env, m = spectra.coherent_input_values(params.chi, params.mu, p, r2)
        return entropy_of_values(out, m) - entropy_of_values(env, m)
    return f


def first_argmax(values: np.ndarray, tol: float = TIE_TOL) -> int:
    """Index of the first value within ``tol`` of the maximum."""
    values = np.asarray(values)
    return int(np.flatnonzero(values >= values.max() - tol)[0])


def maximize_over_p(f, uses: int, scan_points: int = SCAN_POINTS,
                    width: float = GOLDEN_WIDTH) -> CapacityResult:
    """Coarse scan on [0, 1], then golden-section refinement around the best point.

    A negative maximum is reported as ``q_value = 0``; ``p_star`` still
    names the argmax and ``raw_max`` keeps the unclamped value.
    """
    grid = np.linspace(0.0, 1.0, scan_points)
    vals = f(grid)
    evals = scan_points
    i = first_argmax(vals)
    lo = grid[max(i - 1, 0)]
    hi = grid[min(i + 1, scan_points - 1)]

    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1, f2 = f(np.array([x1, x2]))
    evals += 2
    while hi - lo > width:
        # ties move toward smaller p, matching first_argmax
        if f1 >= f2:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = float(f(np.array([x1]))[0])
        else:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = float(f(np.array([x2]))[0])
        evals += 1

    p_star = 0.5 * (lo + hi)
    best = float(f(np.array([p_star]))[0])
    evals += 1
    if vals[i] > best + TIE_TOL:
        # the refined point can only lose to the scan point through rounding
        p_star, best = float(grid[i]), float(vals[i])
    return CapacityResult(p_star=float(p_star), q_value=max(best, 0.0), uses=uses,
                          evaluations=evals, bracket_width=float(hi - lo), raw_max=best)


def capacity_two_use(params: DampingParams) -> CapacityResult:
    return maximize_over_p(two_use_ic(params), uses=2)


MEMORY_KINDS = ("none", "perfect")


def capacity_n_use(n: int, chi: float, memory: str = "none") -> CapacityResult:
    if memory == "none":
        _check_uses(n, 1)
        f = memoryless_ic(n, chi)
    elif memory == "perfect":
        _check_uses(n, 2)
        f = perfect_memory_ic(n, chi)
    else:
        raise DomainError(f"memory must be one of {MEMORY_KINDS}, got {memory!r}")
    return maximize_over_p(f, uses=n)


def n_use_ic_at(n: int, chi: float, memory: str, p: float) -> float:
    f = memoryless_ic(n, chi) if memory == "none" else perfect_memory_ic(n, chi)
    if memory == "perfect":
        _check_uses(n, 2)
    return float(f(np.array([p]))[0])


def two_use_ic_at(params: DampingParams, p: float) -> float:
    return float(two_use_ic(params)(np.array([p]))[0])


def capacity_coherent_surface(params: DampingParams, p_grid: int, r2_grid: int) -> list[tuple]:
    """Rows ``(p, r2, I_c)``; r2 spans [0, p(1-p)] linearly in each p row."""
    if p_grid < 2 or r2_grid < 2:
        raise DomainError("surface grids need at least 2 points per axis")
    f = coherent_ic(params)
    ps = np.linspace(0.0, 1.0, p_grid)
    frac = np.linspace(0.0, 1.0, r2_grid)
    rows = []
    for p in ps:
        r2 = frac * p * (1.0 - p)
        r2[-1] = p * (1.0 - p)
        ic = f(np.full_like(r2, p), r2)
        rows.extend((float(p), float(r), float(v)) for r, v in zip(r2, ic))
    return rows


def memory_from_oscillator(osc: OscillatorMemory) -> float:
    return osc.tau_d / (osc.tau + osc.tau_d)
