"""Finest product decomposition of a pure state and its separability class.

A subset S of sites factors out of psi exactly when the reduced state on S
is pure, i.e. Tr(rho_S^2) = 1. The minimal factoring subset containing a
given site is unique (two factoring decompositions intersect to a finer
one), so collecting minimal blocks over all sites yields the finest
factoring partition and the maximal block count M(psi).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import FactorizationError
from .partitions import Partition, complement_mask, labels_from_mask, mask_size
from .states import EPS_PURE, StateVector, assemble_product, inner, partial_trace, purity

FULLY_SEPARABLE = "fully_separable"
GLOBALLY_ENTANGLED = "globally_entangled"
PARTIALLY_ENTANGLED = "partially_entangled"


@dataclass(frozen=True)
class FactorizationResult:
    """Finest factoring partition with extracted block states.

    Block states are phase-fixed (first significant amplitude real
    positive); the residual overall phase is kept in ``global_phase`` and
    belongs to the first block, so that
    global_phase * (tensor product of block states) reconstructs the input.
    """

    num_sites: int
    local_dim: int
    finest: Partition
    blocks: tuple[tuple[int, StateVector], ...]  # (mask, state), by smallest label
    global_phase: complex
    residual: float

    @property
    def M(self) -> int:
        return len(self.blocks)

    @property
    def entanglement_class(self) -> str:
        if self.M == self.num_sites:
            return FULLY_SEPARABLE
        if self.M == 1:
            return GLOBALLY_ENTANGLED
        return PARTIALLY_ENTANGLED

    def block_state_of(self, label: int) -> StateVector:
        mask = self.finest.block_of(label)
        for block_mask, state in self.blocks:
            if block_mask == mask:
                return state
        raise AssertionError("factorization blocks out of sync with partition")

    def reconstruct(self) -> StateVector:
        """Tensor product of the block states, including the overall phase."""
        parts = [(labels_from_mask(mask), state.amplitudes) for mask, state in self.blocks]
        product = assemble_product(parts, self.num_sites, self.local_dim)
        return StateVector(self.num_sites, self.local_dim, self.global_phase * product.amplitudes)


def _subset_purity(psi: StateVector, mask: int, cache: dict | None) -> float:
    """Purity of the reduced state on ``mask``, evaluated on the smaller side."""
    if cache is not None and mask in cache:
        return cache[mask]
    comp = complement_mask(mask, psi.num_sites)
    side = mask if mask_size(mask) <= mask_size(comp) else comp
    value = purity(partial_trace(psi, labels_from_mask(side)))
    if cache is not None:
        cache[mask] = value
        cache[comp] = value  # Schmidt symmetry of pure-state bipartitions
    return value


def is_factoring_subset(
    psi: StateVector, subset: int, tol: float = EPS_PURE, cache: dict | None = None
) -> bool:
    """True when the sites in ``subset`` split off as a tensor factor."""
    if subset == 0:
        raise ValueError("the empty subset cannot factor")
    full = (1 << psi.num_sites) - 1
    if subset & ~full:
        raise ValueError(f"subset {subset:#x} has bits beyond {psi.num_sites} sites")
    if subset == full:
        return True
    return _subset_purity(psi, subset, cache) > 1.0 - tol


def _subsets_containing(label: int, num_sites: int):
    """Subsets containing ``label`` by increasing size, then mask value."""
    others = [l for l in range(1, num_sites + 1) if l != label]
    bit = 1 << (label - 1)
    for size in range(num_sites):
        masks = []
        for combo in itertools.combinations(others, size):
            mask = bit
            for l in combo:
                mask |= 1 << (l - 1)
            masks.append(mask)
        yield from sorted(masks)


def minimal_factoring_block(
    psi: StateVector, label: int, tol: float = EPS_PURE, cache: dict | None = None
) -> int:
    """Smallest factoring subset containing ``label`` (the whole set at worst)."""
    if not 1 <= label <= psi.num_sites:
        raise ValueError(f"label {label} out of range 1..{psi.num_sites}")
    for mask in _subsets_containing(label, psi.num_sites):
        if is_factoring_subset(psi, mask, tol=tol, cache=cache):
            return mask
    raise AssertionError("the full set always factors")


def _extract_block_state(psi: StateVector, mask: int, tol: float) -> tuple[StateVector, float]:
    """Dominant eigenvector of the reduced matrix, phase-fixed, plus its error."""
    rho = partial_trace(psi, labels_from_mask(mask))
    eigenvalues, vectors = np.linalg.eigh(rho.entries)
    vec = vectors[:, -1]
    vec = vec / np.linalg.norm(vec)
    error = float(np.linalg.norm(rho.entries - np.outer(vec, vec.conj())))
    floor = np.sqrt(tol)
    significant = np.flatnonzero(np.abs(vec) > floor)
    pivot = significant[0] if significant.size else int(np.argmax(np.abs(vec)))
    phase = vec[pivot] / abs(vec[pivot])
    vec = vec * phase.conjugate()
    return StateVector(mask_size(mask), psi.local_dim, vec), error


def finest_factorization(psi: StateVector, tol: float = EPS_PURE) -> FactorizationResult:
    """Finest factoring partition, block states and M(psi).

    Singleton blocks are peeled first and subset purities are memoized, so
    the exponential sweep only pays for sites that sit in larger blocks.
    """
    n_sites = psi.num_sites
    cache: dict[int, float] = {}
    block_masks: list[int] = []
    covered = 0
    for label in range(1, n_sites + 1):
        bit = 1 << (label - 1)
        if n_sites > 1 and is_factoring_subset(psi, bit, tol=tol, cache=cache):
            block_masks.append(bit)
            covered |= bit
    for label in range(1, n_sites + 1):
        bit = 1 << (label - 1)
        if covered & bit:
            continue  # minimal blocks are unique, so members share one block
        mask = minimal_factoring_block(psi, label, tol=tol, cache=cache)
        block_masks.append(mask)
        covered |= mask
    finest = Partition(n_sites, tuple(block_masks))

    blocks = []
    errors = []
    if finest.blocks == ((1 << n_sites) - 1,):
        blocks.append(((1 << n_sites) - 1, psi))
        errors.append(0.0)
    else:
        for mask in finest.blocks:
            state, error = _extract_block_state(psi, mask, tol)
            blocks.append((mask, state))
            errors.append(error)

    parts = [(labels_from_mask(mask), state.amplitudes) for mask, state in blocks]
    product = assemble_product(parts, n_sites, psi.local_dim)
    overlap = inner(product, psi)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0 + 0.0j
    reconstruction_error = float(np.linalg.norm(phase * product.amplitudes - psi.amplitudes))
    residual = max([reconstruction_error, *errors])
    if residual > 10.0 * tol and residual > 1e-12:
        raise FactorizationError(
            f"reconstruction residual {residual:.3e} exceeds 10*tol; "
            "the state sits too close to a product boundary for this tolerance"
        )
    return FactorizationResult(n_sites, psi.local_dim, finest, tuple(blocks), complex(phase), residual)


def separates(result: FactorizationResult, i: int, j: int) -> bool:
    """True when sites i and j belong to different blocks of the finest partition."""
    return result.finest.block_of(i) != result.finest.block_of(j)
