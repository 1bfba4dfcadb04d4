"""Dense pure states and subsystem density matrices for N qudits.

Basis tuples (a_1, ..., a_N) with a_i in {0, ..., n-1} are stored at the
big-endian flat index sum_i a_i * n**(N-i), so site 1 is the most
significant digit and a ket reads left to right.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import ZeroStateError

EPS_NORM = 1e-9
EPS_HERM = 1e-9
EPS_PURE = 1e-9
EPS_ZERO = 1e-12


def encode(digits: Sequence[int], local_dim: int) -> int:
    """Flat index of a basis tuple under the big-endian codec."""
    flat = 0
    for d in digits:
        if not 0 <= d < local_dim:
            raise ValueError(f"digit {d} out of range for local dimension {local_dim}")
        flat = flat * local_dim + d
    return flat


def decode(flat: int, num_sites: int, local_dim: int) -> tuple[int, ...]:
    """Basis tuple stored at a flat index."""
    if not 0 <= flat < local_dim**num_sites:
        raise ValueError(f"flat index {flat} out of range")
    digits = [0] * num_sites
    for p in range(num_sites - 1, -1, -1):
        flat, digits[p] = divmod(flat, local_dim)
    return tuple(digits)


@lru_cache(maxsize=None)
def digit_table(num_sites: int, local_dim: int) -> np.ndarray:
    """Read-only (n**N, N) array; row f holds the digits of flat index f."""
    flat = np.arange(local_dim**num_sites, dtype=np.int64)
    table = np.empty((flat.size, num_sites), dtype=np.int64)
    for p in range(num_sites - 1, -1, -1):
        flat, table[:, p] = np.divmod(flat, local_dim)
    table.flags.writeable = False
    return table


@dataclass(frozen=True, eq=False)
class StateVector:
    """Pure state on ``num_sites`` constituents of local dimension ``local_dim``."""

    num_sites: int
    local_dim: int
    amplitudes: np.ndarray

    def __post_init__(self):
        if self.num_sites < 1:
            raise ValueError("num_sites must be positive")
        if self.local_dim < 2:
            raise ValueError("local_dim must be at least 2")
        amp = np.array(self.amplitudes, dtype=np.complex128)
        expected = self.local_dim**self.num_sites
        if amp.shape != (expected,):
            raise ValueError(
                f"expected {expected} amplitudes for {self.num_sites} sites of "
                f"dimension {self.local_dim}, got shape {amp.shape}"
            )
        amp.flags.writeable = False
        object.__setattr__(self, "amplitudes", amp)

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def is_normalized(self, tol: float = EPS_NORM) -> bool:
        return abs(self.norm() - 1.0) < tol

    def as_tensor(self) -> np.ndarray:
        """View of the amplitudes with one axis per site."""
        return self.amplitudes.reshape((self.local_dim,) * self.num_sites)

    def density(self) -> "DensityMatrix":
        """Projector |psi><psi| on all sites."""
        entries = np.outer(self.amplitudes, self.amplitudes.conj())
        return DensityMatrix(tuple(range(1, self.num_sites + 1)), self.local_dim, entries)


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian operator on an ordered subset of constituent sites.

    Rows and columns are indexed by the big-endian codec restricted to
    ``sites``, in the order the labels appear in ``sites``.
    """

    sites: tuple[int, ...]
    local_dim: int
    entries: np.ndarray

    def __post_init__(self):
        sites = tuple(int(s) for s in self.sites)
        if not sites:
            raise ValueError("density matrix needs at least one site")
        if len(set(sites)) != len(sites) or min(sites) < 1:
            raise ValueError(f"site labels must be distinct positive integers, got {sites}")
        if self.local_dim < 2:
            raise ValueError("local_dim must be at least 2")
        ent = np.array(self.entries, dtype=np.complex128)
        dim = self.local_dim ** len(sites)
        if ent.shape != (dim, dim):
            raise ValueError(f"expected a {dim}x{dim} matrix, got shape {ent.shape}")
        ent.flags.writeable = False
        object.__setattr__(self, "sites", sites)
        object.__setattr__(self, "entries", ent)

    @property
    def num_sites(self) -> int:
        return len(self.sites)

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    def trace(self) -> complex:
        return complex(np.trace(self.entries))

    def is_hermitian(self, tol: float = EPS_HERM) -> bool:
        return bool(np.max(np.abs(self.entries - self.entries.conj().T)) < tol)

    def min_eigenvalue(self) -> float:
        """Smallest eigenvalue, for on-demand positivity checks."""
        return float(np.linalg.eigvalsh(self.entries)[0])


def inner(phi: StateVector, psi: StateVector) -> complex:
    """Inner product <phi|psi>, conjugate linear in the first argument."""
    if (phi.num_sites, phi.local_dim) != (psi.num_sites, psi.local_dim):
        raise ValueError("states live on different spaces")
    return complex(np.vdot(phi.amplitudes, psi.amplitudes))


def normalize(psi: StateVector, tol: float = EPS_ZERO) -> StateVector:
    """Unit-norm state with the same direction; rejects the zero vector."""
    n = psi.norm()
    if n <= tol:
        raise ZeroStateError(f"cannot normalize a zero state (norm {n:.3e})")
    return StateVector(psi.num_sites, psi.local_dim, psi.amplitudes / n)


def partial_trace(state: StateVector | DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix on ``keep``, tracing out the complement.

    Output site order follows the input's site order restricted to ``keep``.
    A StateVector input stands for its projector |psi><psi|.
    """
    keep_set = set(int(k) for k in keep)
    if not keep_set:
        raise ValueError("keep must be a nonempty set of site labels")

    if isinstance(state, StateVector):
        all_sites = tuple(range(1, state.num_sites + 1))
        if not keep_set.issubset(all_sites):
            raise ValueError(f"keep {sorted(keep_set)} is not a subset of sites {all_sites}")
        kept = tuple(s for s in all_sites if s in keep_set)
        kept_pos = [s - 1 for s in kept]
        rest_pos = [s - 1 for s in all_sites if s not in keep_set]
        n = state.local_dim
        mat = state.as_tensor().transpose(kept_pos + rest_pos)
        mat = mat.reshape(n ** len(kept_pos), n ** len(rest_pos))
        return DensityMatrix(kept, n, mat @ mat.conj().T)

    if not keep_set.issubset(state.sites):
        raise ValueError(f"keep {sorted(keep_set)} is not a subset of sites {state.sites}")
    kept = tuple(s for s in state.sites if s in keep_set)
    if kept == state.sites:
        return state
    k = state.num_sites
    n = state.local_dim
    kept_pos = [i for i, s in enumerate(state.sites) if s in keep_set]
    rest_pos = [i for i, s in enumerate(state.sites) if s not in keep_set]
    tensor = state.entries.reshape((n,) * (2 * k))
    perm = kept_pos + rest_pos + [k + p for p in kept_pos] + [k + p for p in rest_pos]
    dk, dr = n ** len(kept_pos), n ** len(rest_pos)
    tensor = tensor.transpose(perm).reshape(dk, dr, dk, dr)
    return DensityMatrix(kept, n, np.einsum("arbr->ab", tensor))


def purity(rho: DensityMatrix, tol: float = EPS_NORM) -> float:
    """Tr(rho^2); equals 1 exactly when rho is pure."""
    tr = rho.trace()
    if abs(tr - 1.0) > tol:
        raise ValueError(f"density matrix trace {tr:.6g} deviates from 1 beyond {tol:.1e}")
    if not rho.is_hermitian():
        raise ValueError("density matrix is not Hermitian within tolerance")
    return float(np.real(np.einsum("ij,ji->", rho.entries, rho.entries)))


def assemble_product(
    blocks: Sequence[tuple[Sequence[int], np.ndarray]],
    num_sites: int,
    local_dim: int,
) -> StateVector:
    """Tensor product of block states scattered onto their site labels.

    Each block is (site labels, amplitudes over those sites); labels of all
    blocks must partition {1..num_sites} but may interleave.
    """
    tensor = np.array(1.0 + 0.0j)
    order: list[int] = []
    for labels, amps in blocks:
        labels = [int(s) for s in labels]
        amps = np.asarray(amps, dtype=np.complex128)
        tensor = np.tensordot(tensor, amps.reshape((local_dim,) * len(labels)), axes=0)
        order.extend(labels)
    if sorted(order) != list(range(1, num_sites + 1)):
        raise ValueError(f"block labels {sorted(order)} do not cover 1..{num_sites}")
    axes = [order.index(s) for s in range(1, num_sites + 1)]
    return StateVector(num_sites, local_dim, tensor.transpose(axes).reshape(-1))


def permute_density_sites(rho: DensityMatrix, target_sites: Sequence[int]) -> DensityMatrix:
    """Same operator with rows/columns reindexed to a new site order."""
    target = tuple(int(s) for s in target_sites)
    if sorted(target) != sorted(rho.sites):
        raise ValueError(f"target sites {target} do not match {rho.sites}")
    if target == rho.sites:
        return rho
    k, n = rho.num_sites, rho.local_dim
    pos = [rho.sites.index(s) for s in target]
    tensor = rho.entries.reshape((n,) * (2 * k))
    tensor = tensor.transpose(pos + [k + p for p in pos])
    return DensityMatrix(target, n, tensor.reshape(n**k, n**k))


def tensor_density(factors: Sequence[DensityMatrix]) -> DensityMatrix:
    """Kronecker product of density matrices; site lists are concatenated."""
    if not factors:
        raise ValueError("need at least one factor")
    sites: tuple[int, ...] = ()
    entries = np.array([[1.0 + 0.0j]])
    n = factors[0].local_dim
    for f in factors:
        if f.local_dim != n:
            raise ValueError("mixed local dimensions in tensor product")
        sites = sites + f.sites
        entries = np.kron(entries, f.entries)
    return DensityMatrix(sites, n, entries)
