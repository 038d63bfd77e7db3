"""Closed-form eigenvalue spectra of channel and environment outputs.

Each public function returns :class:`Spectrum` objects. The ``*_values``
helpers evaluate the same formulas on numpy arrays of ``p`` and return
``(values, multiplicities)`` with values along the last axis; the
optimizers use them to scan many occupations at once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channels import DampingParams, _check_uses, check_chi
from .errors import ConsistencyError, DomainError

NEG_TOL = 1e-12
SUM_TOL = 1e-10


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues with multiplicities. Dust in [-1e-12, 0) is clipped to 0."""

    values: tuple
    multiplicities: tuple

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=float).ravel()
        mults = tuple(int(m) for m in self.multiplicities)
        if len(mults) != vals.size or any(m < 1 for m in mults):
            raise ConsistencyError("multiplicities must be positive, one per value")
        if vals.size and vals.min() < -NEG_TOL:
            raise ConsistencyError(f"eigenvalue {vals.min():.3g} below -{NEG_TOL}")
        vals = np.where(vals < 0.0, 0.0, vals)
        total = float(np.dot(vals, mults))
        if abs(total - 1.0) > SUM_TOL:
            raise ConsistencyError(f"spectrum sums to {total:.15g}")
        object.__setattr__(self, "values", tuple(float(v) for v in vals))
        object.__setattr__(self, "multiplicities", mults)

    @classmethod
    def from_eigenvalues(cls, eigenvalues) -> "Spectrum":
        vals = np.asarray(eigenvalues, dtype=float).ravel()
        return cls(tuple(vals), (1,) * vals.size)

    def expanded(self) -> np.ndarray:
        """All eigenvalues with repetition, sorted descending."""
        out = np.repeat(np.asarray(self.values), self.multiplicities)
        return np.sort(out)[::-1]

    @property
    def size(self) -> int:
        return sum(self.multiplicities)


def spectrum_distance(a: Spectrum, b: Spectrum) -> float:
    """Max difference between two spectra, sorted and zero-padded to equal length."""
    x, y = a.expanded(), b.expanded()
    n = max(x.size, y.size)
    x = np.pad(x, (0, n - x.size))
    y = np.pad(y, (0, n - y.size))
    return float(np.max(np.abs(x - y)))


def _check_p(p):
    arr = np.asarray(p, dtype=float)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise DomainError("occupation p outside [0, 1]")
    return arr


def _trig(chi):
    check_chi(chi)
    return math.cos(chi) ** 2, math.sin(chi) ** 2


TWO_USE_MULTS = (1, 2, 1)


def two_use_output_values(chi, mu, p):
    c2, s2 = _trig(chi)
    p = _check_p(p)
    l1 = p * p * c2 * (c2 + mu * s2)
    l2 = p * c2 * (1 - p * c2) + mu * p * s2 * (1 - p * (1 + c2))
    l4 = (1 - p * c2) ** 2 + mu * p * s2 * (p * c2 - 2 * (1 - p))
    return np.stack([l1, l2, l4], axis=-1), TWO_USE_MULTS


def two_use_environment_values(chi, mu, p):
    c2, s2 = _trig(chi)
    p = _check_p(p)
    t1 = p * p * s2 * (s2 + mu * c2)
    t2 = (1 - mu) * p * s2 * (1 - p * s2)
    t4 = (1 - p * s2) ** 2 + mu * p * s2 * (2 - p * (1 + s2))
    return np.stack([t1, t2, t4], axis=-1), TWO_USE_MULTS


def _spectrum(values, mults) -> Spectrum:
    return Spectrum(tuple(np.asarray(values, dtype=float)), mults)


def two_use_output_spectrum(params: DampingParams, p: float) -> Spectrum:
    return _spectrum(*two_use_output_values(params.chi, params.mu, p))


def two_use_environment_spectrum(params: DampingParams, p: float) -> Spectrum:
    return _spectrum(*two_use_environment_values(params.chi, params.mu, p))


def _binomial_mults(n: int) -> tuple:
    return tuple(math.comb(n, x) for x in range(n + 1))


def n_use_memoryless_values(n: int, chi, p):
    """gamma_X = (p cos^2)^(n-X) (1 - p cos^2)^X, X = 0..n, and the sin^2 analogue.

    Returns ``(output_values, environment_values, multiplicities)``.
    """
    n = _check_uses(n, 1)
    c2, s2 = _trig(chi)
    p = _check_p(p)[..., None]
    x = np.arange(n + 1)
    out = (p * c2) ** (n - x) * (1 - p * c2) ** x
    env = (p * s2) ** (n - x) * (1 - p * s2) ** x
    return out, env, _binomial_mults(n)


def n_use_memoryless_spectra(n: int, chi: float, p: float) -> tuple[Spectrum, Spectrum]:
    out, env, mults = n_use_memoryless_values(n, chi, p)
    return _spectrum(out, mults), _spectrum(env, mults)


def n_use_perfect_memory_values(n: int, chi, p):
    """Returns ``(output_values, output_mults, environment_values, environment_mults)``."""
    n = _check_uses(n, 2)
    c2, s2 = _trig(chi)
    p = _check_p(p)[..., None]
    y = np.arange(1, n)
    pn = p ** n
    out = np.concatenate([pn * c2, (1 - p) ** n + pn * s2, p ** (n - y) * (1 - p) ** y], axis=-1)
    out_mults = (1, 1) + tuple(math.comb(n, k) for k in range(1, n))
    env = np.concatenate([pn * s2, 1 - pn * s2], axis=-1)
    return out, out_mults, env, (1, 1)


def n_use_perfect_memory_spectra(n: int, chi: float, p: float) -> tuple[Spectrum, Spectrum]:
    out, om, env, em = n_use_perfect_memory_values(n, chi, p)
    return _spectrum(out, om), _spectrum(env, em)


def coherence_gamma(p, r2):
    """Gamma = sqrt((1-2p)^2 + 4 r2) and Lambda = p(1-p) - r2 of a coherent qubit input."""
    p = _check_p(p)
    r2 = np.asarray(r2, dtype=float)
    lam = p * (1 - p) - r2
    slack = 1e-14 * np.maximum(1.0, p * (1 - p))
    if np.any(r2 < 0.0) or np.any(lam < -slack):
        raise DomainError("coherence r2 must lie in [0, p(1-p)]")
    lam = np.maximum(lam, 0.0)
    gamma = np.sqrt((1 - 2 * p) ** 2 + 4 * r2)
    return gamma, lam


def coherent_input_values(chi, mu, p, r2):
    """Output and environment eigenvalues for the diagonalised coherent input.

    Returns ``(output_values, environment_values, multiplicities)``.
    """
    c2, s2 = _trig(chi)
    g, lam = coherence_gamma(p, r2)
    c4, s4 = c2 * c2, s2 * s2
    u = 1 - g
    v1 = 0.25 * u ** 2 * c2 * (c2 + mu * s2)
    v2 = 0.5 * c2 * (u * s2 + 2 * lam * c2) + mu * (lam * (1 - c4) - 0.5 * u * c2 * s2)
    # mu multiplies both trailing terms; without that grouping v4 is not normalised
    v4 = 0.5 * (1 + s4 + g * (1 - s4) - 2 * lam * c4
                + mu * (u * c2 * s2 - 2 * lam * s2 * (2 + c2)))
    e1 = 0.25 * u ** 2 * s2 * (s2 + mu * c2)
    e2 = 0.25 * (1 - mu) * s2 * (4 * lam + u ** 2 * c2)
    e4 = 0.25 * (4 * g + u ** 2 * (1 + c4) + 8 * lam * c2
                 + mu * (4 * lam * (s2 - 2 * c2) + 2 * u * (1 + c2) - u ** 2 * (1 + c4)))
    return (np.stack([v1, v2, v4], axis=-1), np.stack([e1, e2, e4], axis=-1), TWO_USE_MULTS)


def coherent_input_spectra(params: DampingParams, p: float, r2: float) -> tuple[Spectrum, Spectrum]:
    out, env, mults = coherent_input_values(params.chi, params.mu, p, r2)
    return _spectrum(out, mults), _spectrum(env, mults)


def diagonalised_occupation(p: float, r2: float) -> float:
    """Damped-level occupation (1 - Gamma)/2 of the diagonalised coherent input."""
    g, _ = coherence_gamma(p, r2)
    return float(0.5 * (1 - g))
