"""Brute-force cross-checks of the closed-form results.

Everything here works from dense matrices: channels are applied operator by
operator and spectra come from the Jacobi eigensolver, never from the
closed forms they are compared against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import capacity, channels, spectra
from .capacity import CapacityResult, first_argmax
from .channels import DampingParams, KrausSet
from .errors import SizeError
from .linalg import density, eig_hermitian, expm, kron_all
from .spectra import Spectrum, spectrum_distance

EIG_FLOOR = 1e-13


@dataclass(frozen=True)
class OracleReport:
    check_name: str
    max_abs_error: float
    grid_points: int
    threshold: float

    @property
    def passed(self) -> bool:
        return bool(self.max_abs_error <= self.threshold)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.check_name}: max_abs_error={self.max_abs_error:.3e} "
                f"threshold={self.threshold:.0e} points={self.grid_points}")


def _spectrum_of(matrix) -> Spectrum:
    w = eig_hermitian(matrix)[0]
    w = w[w >= EIG_FLOOR]
    return Spectrum.from_eigenvalues(w)


def spectrum_via_diagonalization(k: KrausSet, rho) -> Spectrum:
    return _spectrum_of(channels.apply(k, rho).matrix)


def environment_spectrum_via_diagonalization(k: KrausSet, rho) -> Spectrum:
    return _spectrum_of(channels.environment_output(k, rho).matrix)


def _entropy_bits(matrix) -> float:
    w = eig_hermitian(matrix)[0]
    return float(capacity.entropy_of_values(w, np.ones_like(w)))


def entropy_exchange_via_purification(k: KrausSet, rho) -> float:
    """Entropy of (channel x identity) applied to a purification of ``rho``."""
    rho = density(rho)
    d = rho.dim
    if d > 64:
        raise SizeError("purification needs rho.dim <= 64")
    lam, vecs = eig_hermitian(rho.matrix)
    # |Psi> = sum_i sqrt(lam_i) |v_i>_S |i>_R as a d x d amplitude matrix
    psi = vecs * np.sqrt(np.clip(lam, 0.0, None))[None, :]
    joint = np.zeros((d * d, d * d), dtype=np.complex128)
    for w, a in zip(k.weights, k.operators):
        v = (a @ psi).reshape(-1)
        joint += w * np.outer(v, v.conj())
    return _entropy_bits(joint)


def entropy_exchange_via_environment(k: KrausSet, rho) -> float:
    return _entropy_bits(channels.environment_output(k, rho).matrix)


LOWERING = np.array([[0.0, 0.0], [1.0, 0.0]], dtype=np.complex128)


def collective_liouvillian(n: int, rate: float = 1.0) -> np.ndarray:
    """Column-stacked superoperator of the Lindbladian with jump operator sigma^(x)n."""
    j = kron_all([LOWERING] * n)
    jdj = j.conj().T @ j
    ident = np.eye(j.shape[0])
    # vec(A X B) = (B^T kron A) vec(X) for column stacking
    return -0.5 * rate * (np.kron(ident, jdj) + np.kron(jdj.T, ident)
                          - 2.0 * np.kron(j.conj(), j))


def _vec(x: np.ndarray) -> np.ndarray:
    return x.reshape(-1, order="F")


def _unvec(v: np.ndarray, d: int) -> np.ndarray:
    return v.reshape(d, d, order="F")


def _kraus_action(ops, x):
    return sum(a @ x @ a.conj().T for a in ops)


def lindblad_propagator_check(n: int, chi: float, threshold: float = 1e-8) -> OracleReport:
    """Compare exp(L t) with the collective Kraus map on every matrix unit |i><j|."""
    if not 2 <= n <= 5:
        raise SizeError("lindblad_propagator_check supports 2 <= n <= 5")
    channels.check_chi(chi)
    if chi >= math.pi / 2:
        raise SizeError("chi = pi/2 needs infinite time; use chi < pi/2")
    rate = 1.0
    t = -2.0 * math.log(math.cos(chi)) / rate
    prop = expm(collective_liouvillian(n, rate), t)
    ops = channels.n_use_perfect_memory_kraus(n, chi).operators
    d = 2 ** n
    worst = 0.0
    for i in range(d):
        for j in range(d):
            unit = np.zeros((d, d), dtype=np.complex128)
            unit[i, j] = 1.0
            via_prop = _unvec(prop @ _vec(unit), d)
            via_kraus = _kraus_action(ops, unit)
            worst = max(worst, float(np.max(np.abs(via_prop - via_kraus))))
    return OracleReport(f"lindblad n={n} chi={chi:g}", worst, d * d, threshold)


def grid_search_capacity(params: DampingParams, points: int = 100_000) -> CapacityResult:
    if points < 100:
        raise SizeError("grid search needs at least 100 points")
    grid = np.linspace(0.0, 1.0, points)
    vals = capacity.two_use_ic(params)(grid)
    i = first_argmax(vals)
    best = float(vals[i])
    return CapacityResult(p_star=float(grid[i]), q_value=max(best, 0.0), uses=2,
                          evaluations=points, bracket_width=1.0 / (points - 1), raw_max=best)


# --- verification suite --------------------------------------------------

def _unit_grid(n):
    return np.linspace(0.0, 1.0, n)


CHI_GRID = np.linspace(0.0, math.pi / 2, 21)
MU_GRID = _unit_grid(11)
P_GRID = _unit_grid(11)


def check_two_use_spectra(threshold: float = 1e-10) -> OracleReport:
    worst, count = 0.0, 0
    for chi in CHI_GRID:
        for mu in MU_GRID:
            params = DampingParams(float(chi), float(mu))
            k = channels.two_use_kraus(params)
            for p in P_GRID:
                rho = channels.product_state(float(p), 2)
                out = spectra.two_use_output_spectrum(params, float(p))
                env = spectra.two_use_environment_spectrum(params, float(p))
                worst = max(worst,
                            spectrum_distance(out, spectrum_via_diagonalization(k, rho)),
                            spectrum_distance(env, environment_spectrum_via_diagonalization(k, rho)))
                count += 1
    return OracleReport("two-use spectra vs dense", worst, count, threshold)


def check_coherent_spectra(threshold: float = 1e-10) -> OracleReport:
    """Coherent inputs: the channel acts on the diagonalised input state."""
    worst, count = 0.0, 0
    for chi in np.linspace(0.0, math.pi / 2, 11):
        for mu in _unit_grid(6):
            params = DampingParams(float(chi), float(mu))
            k = channels.two_use_kraus(params)
            for p in _unit_grid(11):
                for frac in _unit_grid(6):
                    p, r2 = float(p), float(frac * p * (1 - p))
                    q = spectra.diagonalised_occupation(p, r2)
                    rho = channels.product_state(q, 2)
                    out, env = spectra.coherent_input_spectra(params, p, r2)
                    worst = max(worst,
                                spectrum_distance(out, spectrum_via_diagonalization(k, rho)),
                                spectrum_distance(env, environment_spectrum_via_diagonalization(k, rho)))
                    count += 1
    return OracleReport("coherent-input spectra vs dense", worst, count, threshold)


def check_n_use_spectra(ns=(2, 3, 4, 5, 6), threshold: float = 1e-10) -> OracleReport:
    worst, count = 0.0, 0
    chis = np.linspace(0.0, math.pi / 2, 5)
    ps = _unit_grid(5)
    for n in ns:
        for chi in chis:
            chi = float(chi)
            free = channels.n_use_memoryless_kraus(n, chi)
            perfect = channels.n_use_perfect_memory_kraus(n, chi)
            for p in ps:
                p = float(p)
                rho = channels.product_state(p, n)
                out, env = spectra.n_use_memoryless_spectra(n, chi, p)
                worst = max(worst,
                            spectrum_distance(out, spectrum_via_diagonalization(free, rho)),
                            spectrum_distance(env, environment_spectrum_via_diagonalization(free, rho)))
                out, env = spectra.n_use_perfect_memory_spectra(n, chi, p)
                worst = max(worst,
                            spectrum_distance(out, spectrum_via_diagonalization(perfect, rho)),
                            spectrum_distance(env, environment_spectrum_via_diagonalization(perfect, rho)))
                count += 2
    return OracleReport("n-use spectra vs dense", worst, count, threshold)


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = d if rank is None else rank
    g = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    m = g @ g.conj().T
    return m / np.trace(m).real


def random_kraus(d: int, count: int, rng: np.random.Generator) -> KrausSet:
    """Random channel from an isometry: stacked operators with orthonormal columns."""
    g = rng.normal(size=(d * count, d)) + 1j * rng.normal(size=(d * count, d))
    q, _ = np.linalg.qr(g)
    return KrausSet.single([q[i * d:(i + 1) * d, :] for i in range(count)])


def random_channel(rng: np.random.Generator) -> KrausSet:
    """One of the package's channels (flattened to its complementary form) or a random one."""
    kind = int(rng.integers(6))
    chi = float(rng.uniform(0.0, math.pi / 2))
    if kind == 0:
        return channels.single_use_kraus(chi)
    if kind == 1:
        mu = float(rng.uniform())
        return channels.two_use_kraus(DampingParams(chi, mu)).stinespring()
    if kind == 2:
        return channels.n_use_perfect_memory_kraus(int(rng.integers(2, 4)), chi)
    if kind == 3:
        return channels.n_use_memoryless_kraus(2, chi)
    d = int(rng.choice([2, 3, 4]))
    return random_kraus(d, int(rng.integers(1, 5)), rng)


def check_purification_identity(pairs: int = 200, seed: int = 7,
                                threshold: float = 1e-9) -> OracleReport:
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(pairs):
        k = random_channel(rng)
        rank = int(rng.integers(1, k.dim + 1))
        rho = random_density(k.dim, rng, rank)
        a = entropy_exchange_via_purification(k, rho)
        b = entropy_exchange_via_environment(k, rho)
        worst = max(worst, abs(a - b))
    return OracleReport("entropy exchange: purification vs conjugate channel", worst, pairs, threshold)


def check_lindblad(ns=(2, 3, 4), chis=(0.25, 0.5, 1.0, 1.5), threshold: float = 1e-8) -> OracleReport:
    reports = [lindblad_propagator_check(n, c, threshold) for n in ns for c in chis]
    return OracleReport("lindblad propagator vs collective Kraus",
                        max(r.max_abs_error for r in reports),
                        sum(r.grid_points for r in reports), threshold)


def check_optimizer_bound(points: int = 100_000, threshold: float = 2e-5) -> OracleReport:
    worst, count = 0.0, 0
    for chi in np.linspace(0.1, 1.5, 5):
        for mu in _unit_grid(5):
            params = DampingParams(float(chi), float(mu))
            refined = capacity.capacity_two_use(params)
            grid = grid_search_capacity(params, points)
            worst = max(worst, abs(refined.p_star - grid.p_star))
            count += 1
    return OracleReport("optimizer p_star vs 1e5-point grid", worst, count, threshold)


def check_perfect_memory_identity(threshold: float = 1e-12) -> OracleReport:
    worst, count = 0.0, 0
    for chi in CHI_GRID:
        for p in P_GRID:
            chi, p = float(chi), float(p)
            params = DampingParams(chi, 1.0)
            out, env = spectra.n_use_perfect_memory_spectra(2, chi, p)
            worst = max(worst,
                        spectrum_distance(spectra.two_use_output_spectrum(params, p), out),
                        spectrum_distance(spectra.two_use_environment_spectrum(params, p), env))
            count += 1
    return OracleReport("two-use mu=1 vs perfect memory n=2", worst, count, threshold)


def check_normalization(threshold: float = 1e-10) -> OracleReport:
    """Sum-to-one of every closed-form spectrum on the grid (negativity is enforced by Spectrum)."""
    worst, count = 0.0, 0

    def track(*specs):
        nonlocal worst, count
        for s in specs:
            worst = max(worst, abs(float(np.dot(s.values, s.multiplicities)) - 1.0))
            count += 1

    for chi in CHI_GRID:
        for mu in MU_GRID:
            params = DampingParams(float(chi), float(mu))
            for p in P_GRID:
                p = float(p)
                track(spectra.two_use_output_spectrum(params, p),
                      spectra.two_use_environment_spectrum(params, p))
                for frac in _unit_grid(6):
                    track(*spectra.coherent_input_spectra(params, p, float(frac * p * (1 - p))))
        for n in range(2, 7):
            for p in P_GRID:
                track(*spectra.n_use_memoryless_spectra(n, float(chi), float(p)),
                      *spectra.n_use_perfect_memory_spectra(n, float(chi), float(p)))
    return OracleReport("spectrum normalisation", worst, count, threshold)


def run_all() -> list[OracleReport]:
    return [
        check_two_use_spectra(),
        check_coherent_spectra(),
        check_n_use_spectra(),
        check_normalization(),
        check_purification_identity(),
        check_lindblad(),
        check_optimizer_bound(),
        check_perfect_memory_identity(),
    ]
