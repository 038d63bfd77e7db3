"""Small dense complex linear algebra.

Matrices are plain ``numpy`` complex128 arrays. Only what the channel
models and the brute-force checks need lives here: Kronecker products,
a cyclic Jacobi eigensolver for Hermitian matrices and a Taylor
scaling-and-squaring matrix exponential.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ContractError, NumericError, SizeError

MAX_DIM = 4096
EXPM_MAX_DIM = 1024
EXPM_MAX_NORM = 50.0

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100
TAYLOR_DEGREE = 16


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=np.complex128)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractError(f"expected a square matrix, got shape {a.shape}")
    if not 1 <= a.shape[0] <= MAX_DIM:
        raise SizeError(f"matrix dimension {a.shape[0]} outside [1, {MAX_DIM}]")
    return a


def hermiticity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m - m.conj().T)))


def kron(a, b) -> np.ndarray:
    """Kronecker product with the standard row-major index layout."""
    a = as_matrix(a)
    b = as_matrix(b)
    dim = a.shape[0] * b.shape[0]
    if dim > MAX_DIM:
        raise SizeError(f"kron result dimension {dim} exceeds {MAX_DIM}")
    return np.kron(a, b)


def kron_all(mats) -> np.ndarray:
    mats = list(mats)
    out = as_matrix(mats[0])
    for m in mats[1:]:
        out = kron(out, m)
    return out


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def eig_hermitian(m, tol: float = JACOBI_TOL,
                  max_sweeps: int = JACOBI_MAX_SWEEPS) -> tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a Hermitian matrix with cyclic complex Jacobi rotations.

    Returns ``(w, v)`` with real eigenvalues ``w`` sorted in descending order
    and the unitary ``v`` whose columns are the matching eigenvectors, so
    that ``v @ diag(w) @ v.conj().T`` reconstructs ``m``.

    Raises:
        ContractError: ``m`` deviates from hermiticity by more than 1e-10.
        NumericError: the off-diagonal norm is still above ``tol`` after
            ``max_sweeps`` sweeps.
    """
    a = as_matrix(m).copy()
    if hermiticity_error(a) > 1e-10:
        raise ContractError("eig_hermitian requires a Hermitian matrix")
    a = 0.5 * (a + a.conj().T)
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    scale = max(1.0, float(np.sqrt(np.sum(np.abs(a) ** 2))))

    converged = _off_norm(a) <= tol * scale
    sweeps = 0
    while not converged:
        if sweeps >= max_sweeps:
            raise NumericError(f"Jacobi did not converge in {max_sweeps} sweeps")
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                app = a[p, p].real
                aqq = a[q, q].real
                # phase makes the pair block real; then a real symmetric rotation
                phase = apq / mag
                theta = (aqq - app) / (2.0 * mag)
                if theta == 0.0:
                    t = 1.0
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                rot = np.array([[c, s], [-s * phase.conjugate(), c * phase.conjugate()]],
                               dtype=np.complex128)
                idx = [p, q]
                a[:, idx] = a[:, idx] @ rot
                a[idx, :] = rot.conj().T @ a[idx, :]
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                v[:, idx] = v[:, idx] @ rot
        sweeps += 1
        converged = _off_norm(a) <= tol * scale

    w = np.diag(a).real.copy()
    order = np.argsort(-w, kind="stable")
    return w[order], v[:, order]


def eigvals_hermitian(m) -> np.ndarray:
    return eig_hermitian(m)[0]


def expm(m, t: float = 1.0) -> np.ndarray:
    """``exp(m * t)`` by scaling and squaring of a degree-16 Taylor polynomial."""
    a = as_matrix(m)
    if a.shape[0] > EXPM_MAX_DIM:
        raise SizeError(f"expm supports dimension <= {EXPM_MAX_DIM}")
    x = a * t
    norm = float(np.max(np.sum(np.abs(x), axis=1))) if x.size else 0.0
    if not math.isfinite(norm) or norm > EXPM_MAX_NORM:
        raise NumericError(f"expm argument norm {norm:.3g} exceeds {EXPM_MAX_NORM}")
    squarings = 0
    if norm > 0.5:
        squarings = int(math.ceil(math.log2(norm / 0.5)))
    x = x / (2.0 ** squarings)

    n = x.shape[0]
    result = np.eye(n, dtype=np.complex128)
    term = np.eye(n, dtype=np.complex128)
    for k in range(1, TAYLOR_DEGREE + 1):
        term = term @ x / k
        result = result + term
    for _ in range(squarings):
        result = result @ result
    return result


@dataclass(frozen=True)
class DensityOperator:
    """Hermitian, positive semidefinite, unit-trace matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        m = as_matrix(self.matrix)
        if hermiticity_error(m) > 1e-12:
            raise ContractError("density operator must be Hermitian")
        tr = complex(np.trace(m))
        if abs(tr - 1.0) > 1e-12:
            raise ContractError(f"density operator trace {tr.real:.15g} != 1")
        lo = float(np.linalg.eigvalsh(m)[0]) if m.shape[0] > 1 else float(m[0, 0].real)
        if lo < -1e-10:
            raise ContractError(f"density operator has eigenvalue {lo:.3g} < 0")
        m = m.copy()
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def density(m) -> DensityOperator:
    return m if isinstance(m, DensityOperator) else DensityOperator(np.asarray(m))
