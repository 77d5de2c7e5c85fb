"""Density matrices, tensor/partial-trace plumbing, and entropy functionals.

Everything is dense numpy at desk scale (total dimension capped at 4096).
Subsystem indices are 1-based throughout, and partial_trace takes the set
of subsystems to KEEP rather than the set to discard.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

import numpy as np

__all__ = [
    "DensityMatrix",
    "EntropyFunctional",
    "ENTROPY_FUNCTIONALS",
    "get_functional",
    "tensor",
    "partial_trace",
    "commutator",
    "double_commutator",
    "random_density",
    "entropy",
    "bloch_vector",
    "PAULI",
]

_HERM_TOL = 1e-12
_TRACE_TOL = 1e-10
_PSD_TOL = -1e-9
_SIZE_CAP = 4096

PAULI = {
    "x": np.array([[0, 1], [1, 0]], dtype=complex),
    "y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "z": np.array([[1, 0], [0, -1]], dtype=complex),
}


class DensityMatrix:
    """Hermitian, PSD, trace-one complex matrix.

    Validation happens at construction: Hermiticity within 1e-12, trace
    within 1e-10 of one, and minimum eigenvalue >= -1e-9 (slack for the
    numerically rounded outputs of the combination maps).
    """

    __slots__ = ("mat", "dim")

    def __init__(self, mat, check: bool = True):
        M = np.asarray(mat, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError("density matrix must be square")
        self.mat = M
        self.dim = M.shape[0]
        if check:
            herm = np.abs(M - M.conj().T).max()
            if herm > _HERM_TOL:
                raise ValueError(f"not Hermitian (residual {herm:.3e})")
            tr = M.trace()
            if abs(tr - 1) > _TRACE_TOL:
                raise ValueError(f"trace is {tr:.12g}, not 1")
            lo = np.linalg.eigvalsh(M)[0]
            if lo < _PSD_TOL:
                raise ValueError(f"negative eigenvalue {lo:.3e}")

    @classmethod
    def pure(cls, psi) -> "DensityMatrix":
        v = np.asarray(psi, dtype=complex)
        v = v / np.linalg.norm(v)
        return cls(np.outer(v, v.conj()), check=False)

    @classmethod
    def maximally_mixed(cls, d: int) -> "DensityMatrix":
        return cls(np.eye(d, dtype=complex) / d, check=False)

    @classmethod
    def from_probs(cls, p) -> "DensityMatrix":
        p = np.asarray(p, dtype=float)
        if (p < 0).any() or abs(p.sum() - 1) > _TRACE_TOL:
            raise ValueError("probabilities must be nonnegative and sum to 1")
        return cls(np.diag(p.astype(complex)), check=False)

    @classmethod
    def from_bloch(cls, x: float, y: float, z: float) -> "DensityMatrix":
        if x * x + y * y + z * z > 1 + 1e-12:
            raise ValueError("Bloch vector must lie in the unit ball")
        M = 0.5 * (np.eye(2) + x * PAULI["x"] + y * PAULI["y"] + z * PAULI["z"])
        return cls(M, check=False)

    def eigenvalues(self) -> np.ndarray:
        """Ascending eigenvalues, clamped to [0, 1]."""
        return np.clip(np.linalg.eigvalsh(self.mat), 0.0, 1.0)

    def purity(self) -> float:
        return float(np.real(np.trace(self.mat @ self.mat)))

    def to_json(self) -> list:
        return [[[float(v.real), float(v.imag)] for v in row] for row in self.mat]

    @classmethod
    def from_json(cls, rows) -> "DensityMatrix":
        M = np.array([[re + 1j * im for re, im in row] for row in rows], dtype=complex)
        return cls(M)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim})"


def _as_matrix(rho) -> np.ndarray:
    return rho.mat if isinstance(rho, DensityMatrix) else np.asarray(rho, dtype=complex)


def tensor(rho_list: Sequence[DensityMatrix]) -> DensityMatrix:
    """Kronecker product of states; total dimension capped at 4096."""
    total = int(np.prod([_as_matrix(r).shape[0] for r in rho_list]))
    if total > _SIZE_CAP:
        raise ValueError(f"total dimension {total} exceeds cap {_SIZE_CAP}")
    out = np.eye(1, dtype=complex)
    for r in rho_list:
        out = np.kron(out, _as_matrix(r))
    return DensityMatrix(out, check=False)


def partial_trace(M, keep: Iterable[int], d: int, n: int | None = None) -> np.ndarray:
    """Trace out all subsystems not in ``keep`` (1-based indices).

    ``M`` is any d^n x d^n matrix over n qudits of local dimension d;
    returns a plain matrix over the kept factors, in their original
    order.  Trace-preserving by construction.
    """
    M = _as_matrix(M)
    if n is None:
        n = round(np.log(M.shape[0]) / np.log(d)) if d > 1 else 1
    if M.shape != (d**n, d**n):
        raise ValueError("matrix size does not match d^n")
    keep = sorted(set(keep))
    if not keep or any(k < 1 or k > n for k in keep):
        raise ValueError(f"keep set must be nonempty subsystem indices in 1..{n}")
    T = M.reshape((d,) * (2 * n))
    # contract row/column axes of every discarded subsystem
    removed = 0
    for sub in range(n, 0, -1):
        if sub in keep:
            continue
        ax = sub - 1
        T = np.trace(T, axis1=ax, axis2=ax + (n - removed))
        removed += 1
    m = d ** len(keep)
    return T.reshape(m, m)


def commutator(A, B) -> np.ndarray:
    A, B = _as_matrix(A), _as_matrix(B)
    if A.shape != B.shape:
        raise ValueError("dimension mismatch")
    return A @ B - B @ A


def double_commutator(A, B, C) -> np.ndarray:
    """[A, [B, C]]."""
    return commutator(A, commutator(B, C))


def _rng_from(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_density(d: int, rank: int | None = None, seed=None) -> DensityMatrix:
    """Random density matrix G G^dag / Tr(...) with complex Gaussian G of shape d x rank."""
    if rank is None:
        rank = d
    if not 1 <= rank <= d:
        raise ValueError("rank must satisfy 1 <= rank <= d")
    rng = _rng_from(seed)
    G = rng.normal(size=(d, rank)) + 1j * rng.normal(size=(d, rank))
    M = G @ G.conj().T
    return DensityMatrix(M / np.real(np.trace(M)), check=False)


@dataclass(frozen=True)
class EntropyFunctional:
    """A symmetric functional of the spectrum.

    ``concave_max_dim`` bounds the dimensions on which concavity is
    promised (and property-tested); None means every dimension.  The
    collision functional is concave only for d <= 2, so its guard is 2.
    """

    name: str
    evaluator: Callable[[np.ndarray], float]
    concave_max_dim: int | None = None

    def __call__(self, eigenvalues: np.ndarray) -> float:
        return self.evaluator(eigenvalues)


def _von_neumann(lam: np.ndarray) -> float:
    nz = lam[lam > 0]
    return float(-(nz * np.log(nz)).sum())


def _renyi_half(lam: np.ndarray) -> float:
    return float(2.0 * np.log(np.sqrt(lam).sum()))


def _renyi_two(lam: np.ndarray) -> float:
    return float(-np.log((lam**2).sum()))


def _neg_purity(lam: np.ndarray) -> float:
    return float(-(lam**2).sum())


ENTROPY_FUNCTIONALS = {
    "von-neumann": EntropyFunctional("von-neumann", _von_neumann),
    "renyi-0.5": EntropyFunctional("renyi-0.5", _renyi_half),
    "renyi-2": EntropyFunctional("renyi-2", _renyi_two, concave_max_dim=2),
    "neg-purity": EntropyFunctional("neg-purity", _neg_purity),
}


def get_functional(name: str) -> EntropyFunctional:
    try:
        return ENTROPY_FUNCTIONALS[name]
    except KeyError:
        raise KeyError(f"unknown entropy functional {name!r}; "
                       f"choose from {sorted(ENTROPY_FUNCTIONALS)}") from None


def entropy(f: EntropyFunctional, rho: DensityMatrix) -> float:
    """Apply ``f`` to the (clamped) spectrum of ``rho``."""
    return f(rho.eigenvalues())


def bloch_vector(rho: DensityMatrix) -> tuple[float, float, float]:
    """(x, y, z) with rho = (I + x sx + y sy + z sz)/2; qubits only."""
    M = _as_matrix(rho)
    if M.shape != (2, 2):
        raise ValueError("Bloch vector is defined for d = 2 only")
    return tuple(float(np.real(np.trace(M @ PAULI[ax]))) for ax in ("x", "y", "z"))
