"""Kraus models of the amplitude-damping channel with Markov memory.

Basis convention: the damped ("excited") level is the *first* basis vector
of each qubit, so ``A0 = diag(cos chi, 1)`` and ``A1`` carries ``sin chi``
at row 1, column 0. Input occupations ``p`` refer to that damped level.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ConsistencyError, ContractError, DomainError, SizeError
from .linalg import DensityOperator, as_matrix, density, kron, kron_all

COMPLETENESS_TOL = 1e-12
MAX_USES = 12


@dataclass(frozen=True)
class DampingParams:
    chi: float
    mu: float = 0.0

    def __post_init__(self):
        check_chi(self.chi)
        if not 0.0 <= self.mu <= 1.0:
            raise DomainError(f"memory parameter mu={self.mu} outside [0, 1]")


def check_chi(chi: float) -> float:
    if not (0.0 <= chi <= math.pi / 2):
        raise DomainError(f"damping parameter chi={chi} outside [0, pi/2]")
    return chi


@dataclass(frozen=True)
class KrausGroup:
    """Kraus operators sharing one mixture weight.

    ``env_labels[k]`` names the environment basis vector that records
    operator ``k``. Two groups may reuse a label; their contributions to
    the environment state then add on the same basis vector.
    """

    operators: tuple
    weight: float = 1.0
    env_labels: tuple | None = None

    def __post_init__(self):
        ops = tuple(as_matrix(a) for a in self.operators)
        if not ops:
            raise ContractError("a Kraus group needs at least one operator")
        if len({a.shape for a in ops}) != 1:
            raise ContractError("Kraus operators must share one dimension")
        labels = self.env_labels
        if labels is None:
            labels = tuple(range(len(ops)))
        labels = tuple(int(x) for x in labels)
        if len(labels) != len(ops) or len(set(labels)) != len(labels) or min(labels) < 0:
            raise ContractError("env_labels must be distinct non-negative ints, one per operator")
        if not 0.0 <= self.weight <= 1.0:
            raise ContractError(f"group weight {self.weight} outside [0, 1]")
        object.__setattr__(self, "operators", ops)
        object.__setattr__(self, "env_labels", labels)


@dataclass(frozen=True)
class KrausSet:
    groups: tuple

    def __post_init__(self):
        groups = tuple(self.groups)
        if not groups:
            raise ContractError("empty Kraus set")
        if len({g.operators[0].shape for g in groups}) != 1:
            raise ContractError("all Kraus groups must act on the same space")
        object.__setattr__(self, "groups", groups)
        err = self.completeness_error()
        if err > COMPLETENESS_TOL:
            raise ContractError(f"weighted completeness violated by {err:.3g}")

    @classmethod
    def single(cls, operators, env_labels=None) -> "KrausSet":
        return cls((KrausGroup(tuple(operators), 1.0, env_labels),))

    @property
    def dim(self) -> int:
        return self.groups[0].operators[0].shape[0]

    @property
    def operators(self) -> list:
        return [a for g in self.groups for a in g.operators]

    @property
    def weights(self) -> list:
        return [g.weight for g in self.groups for _ in g.operators]

    @property
    def env_dim(self) -> int:
        return 1 + max(max(g.env_labels) for g in self.groups)

    def completeness_error(self) -> float:
        total = sum(g.weight * sum(a.conj().T @ a for a in g.operators) for g in self.groups)
        return float(np.max(np.abs(total - np.eye(self.dim))))

    def stinespring(self) -> "KrausSet":
        """Flatten to one unweighted group: operators sqrt(w)*A, distinct labels.

        The environment output of the flattened set is the exact complementary
        channel, with cross terms between all operators.
        """
        ops = [math.sqrt(w) * a for a, w in zip(self.operators, self.weights) if w > 0]
        return KrausSet.single(ops)


def single_use_kraus(chi: float) -> KrausSet:
    check_chi(chi)
    c, s = math.cos(chi), math.sin(chi)
    a0 = np.array([[c, 0.0], [0.0, 1.0]], dtype=np.complex128)
    a1 = np.array([[0.0, 0.0], [s, 0.0]], dtype=np.complex128)
    return KrausSet.single([a0, a1])


def correlated_kraus(n: int, chi: float) -> tuple[np.ndarray, np.ndarray]:
    """Collective damping on n qubits: only the all-damped state decays, to all-ground."""
    d = 2 ** n
    c, s = math.cos(chi), math.sin(chi)
    a0 = np.eye(d, dtype=np.complex128)
    a0[0, 0] = c
    a1 = np.zeros((d, d), dtype=np.complex128)
    a1[d - 1, 0] = s
    return a0, a1


def two_use_kraus(params: DampingParams) -> KrausSet:
    """Two uses: uncorrelated products with weight 1-mu, collective damping with weight mu.

    The correlated operators A^c_00 and A^c_11 are recorded on the same
    environment vectors |e_00>, |e_11> as the uncorrelated A_0(x)A_0 and
    A_1(x)A_1, so the environment is four-dimensional.
    """
    a = single_use_kraus(params.chi).operators
    uncorrelated = [kron(a[i], a[j]) for i in range(2) for j in range(2)]
    groups = [KrausGroup(tuple(uncorrelated), 1.0 - params.mu, (0, 1, 2, 3))]
    groups.append(KrausGroup(correlated_kraus(2, params.chi), params.mu, (0, 3)))
    return KrausSet(tuple(groups))


def _check_uses(n: int, lo: int) -> int:
    if not isinstance(n, (int, np.integer)) or not lo <= n <= MAX_USES:
        raise SizeError(f"number of uses n={n} outside [{lo}, {MAX_USES}]")
    return int(n)


def n_use_perfect_memory_kraus(n: int, chi: float) -> KrausSet:
    _check_uses(n, 2)
    check_chi(chi)
    return KrausSet.single(correlated_kraus(n, chi))


def n_use_memoryless_kraus(n: int, chi: float) -> KrausSet:
    """All 2**n Kronecker products of the single-use operators."""
    _check_uses(n, 1)
    a = single_use_kraus(chi).operators
    ops = [kron_all([a[i] for i in idx]) for idx in itertools.product(range(2), repeat=n)]
    return KrausSet.single(ops)


def identity_kraus(dim: int) -> KrausSet:
    return KrausSet.single([np.eye(dim, dtype=np.complex128)])


def qubit_state(p: float, r: complex = 0.0) -> np.ndarray:
    """Single-qubit state with damped-level occupation p and coherence r."""
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"occupation p={p} outside [0, 1]")
    if abs(r) ** 2 > p * (1.0 - p) + 1e-15:
        raise DomainError("|r|^2 exceeds p(1-p)")
    return np.array([[p, r], [np.conj(r), 1.0 - p]], dtype=np.complex128)


def product_state(p: float, n: int) -> DensityOperator:
    """n copies of the diagonal qubit state diag(p, 1-p)."""
    return DensityOperator(kron_all([qubit_state(p)] * n))


def _check_dims(k: KrausSet, rho: DensityOperator):
    if rho.dim != k.dim:
        raise ContractError(f"state dimension {rho.dim} does not match channel dimension {k.dim}")


def apply(k: KrausSet, rho) -> DensityOperator:
    rho = density(rho)
    _check_dims(k, rho)
    out = np.zeros_like(rho.matrix)
    for g in k.groups:
        if g.weight == 0.0:
            continue
        ops = np.stack(g.operators)
        out = out + g.weight * np.sum(ops @ rho.matrix @ ops.conj().transpose(0, 2, 1), axis=0)
    tr = complex(np.trace(out))
    if abs(tr - 1.0) > 1e-10:
        raise ConsistencyError(f"channel output trace {tr.real:.15g} != 1")
    out = 0.5 * (out + out.conj().T)
    return DensityOperator(out)


def environment_output(k: KrausSet, rho) -> DensityOperator:
    """State of the environment after the interaction.

    Entry (a, b) collects ``w * Tr(A_i rho A_j^dagger)`` over operator pairs
    of the same group whose labels are a and b. Pairs from different groups
    do not interfere.
    """
    rho = density(rho)
    _check_dims(k, rho)
    env = np.zeros((k.env_dim, k.env_dim), dtype=np.complex128)
    for g in k.groups:
        if g.weight == 0.0:
            continue
        ops = np.stack(g.operators)
        left = ops @ rho.matrix
        gram = np.einsum("iab,jab->ij", left, ops.conj())
        idx = np.array(g.env_labels)
        env[np.ix_(idx, idx)] += g.weight * gram
    env = 0.5 * (env + env.conj().T)
    tr = complex(np.trace(env))
    if abs(tr - 1.0) > 1e-10:
        raise ConsistencyError(f"environment trace {tr.real:.15g} != 1")
    return DensityOperator(env)
