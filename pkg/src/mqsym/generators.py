"""Canonical and seeded random state constructors.

All generators return normalized states and are deterministic functions of
their parameters and seed; no global RNG state is touched.
"""

from __future__ import annotations

import itertools
import math
from typing import Sequence

import numpy as np

from .permutations import symmetrize
from .states import DensityMatrix, StateVector, assemble_product, encode, normalize


def _rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def basis_state(digits: Sequence[int], local_dim: int) -> StateVector:
    """Product basis state |a_1 ... a_N>."""
    amp = np.zeros(local_dim ** len(digits), dtype=np.complex128)
    amp[encode(digits, local_dim)] = 1.0
    return StateVector(len(digits), local_dim, amp)


def ghz(num_sites: int, local_dim: int = 2) -> StateVector:
    """(|0...0> + |1...1> + ... + |n-1 ... n-1>) / sqrt(n)."""
    if num_sites < 2:
        raise ValueError("ghz needs at least two sites")
    amp = np.zeros(local_dim**num_sites, dtype=np.complex128)
    for a in range(local_dim):
        amp[encode([a] * num_sites, local_dim)] = 1.0
    return StateVector(num_sites, local_dim, amp / np.sqrt(local_dim))


def dicke(num_sites: int, excitations: int) -> StateVector:
    """Equal-weight superposition of all qubit tuples with k ones."""
    if num_sites < 2:
        raise ValueError("dicke needs at least two sites")
    if not 0 <= excitations <= num_sites:
        raise ValueError(f"excitations must lie in 0..{num_sites}")
    amp = np.zeros(2**num_sites, dtype=np.complex128)
    weight = 1.0 / np.sqrt(math.comb(num_sites, excitations))
    for ones in itertools.combinations(range(num_sites), excitations):
        digits = [0] * num_sites
        for p in ones:
            digits[p] = 1
        amp[encode(digits, 2)] = weight
    return StateVector(num_sites, 2, amp)


def w_state(num_sites: int) -> StateVector:
    """Single-excitation Dicke state."""
    return dicke(num_sites, 1)


def _parity(order: Sequence[int]) -> int:
    sign = 1
    seen = [False] * len(order)
    for start in range(len(order)):
        if seen[start]:
            continue
        length = 0
        pos = start
        while not seen[pos]:
            seen[pos] = True
            pos = order[pos]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def slater(num_sites: int, local_dim: int, levels: Sequence[int]) -> StateVector:
    """Normalized antisymmetrized product of distinct single-site levels."""
    levels = [int(l) for l in levels]
    if local_dim < num_sites:
        raise ValueError(
            f"no antisymmetric state exists for {num_sites} sites of dimension {local_dim}"
        )
    if len(levels) != num_sites:
        raise ValueError(f"need {num_sites} levels, got {len(levels)}")
    if len(set(levels)) != len(levels):
        raise ValueError("levels must be distinct; antisymmetrization would vanish")
    if min(levels) < 0 or max(levels) >= local_dim:
        raise ValueError(f"levels must lie in 0..{local_dim - 1}")
    amp = np.zeros(local_dim**num_sites, dtype=np.complex128)
    weight = 1.0 / np.sqrt(math.factorial(num_sites))
    for order in itertools.permutations(range(num_sites)):
        digits = [levels[order[i]] for i in range(num_sites)]
        amp[encode(digits, local_dim)] += _parity(order) * weight
    return StateVector(num_sites, local_dim, amp)


def random_state(num_sites: int, local_dim: int, seed) -> StateVector:
    """Haar-random pure state (normalized complex Gaussian amplitudes)."""
    rng = _rng(seed)
    dim = local_dim**num_sites
    amp = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    return normalize(StateVector(num_sites, local_dim, amp))


def random_product(num_sites: int, local_dim: int, seed) -> StateVector:
    """Tensor product of independent random single-site unit vectors."""
    rng = _rng(seed)
    factors = []
    for site in range(1, num_sites + 1):
        v = rng.standard_normal(local_dim) + 1j * rng.standard_normal(local_dim)
        factors.append(((site,), v / np.linalg.norm(v)))
    return assemble_product(factors, num_sites, local_dim)


def random_symmetric(num_sites: int, local_dim: int, seed) -> StateVector:
    """Normalized projection of a random state onto the symmetric subspace.

    Draws again from the same stream in the unlikely event the projection
    is too small to normalize stably.
    """
    rng = _rng(seed)
    while True:
        psi = symmetrize(random_state(num_sites, local_dim, rng))
        if psi.norm() >= 1e-6:
            return normalize(psi)


def random_local_unitary(local_dim: int, seed) -> np.ndarray:
    """Haar-distributed unitary via QR of a complex Gaussian matrix."""
    rng = _rng(seed)
    z = rng.standard_normal((local_dim, local_dim)) + 1j * rng.standard_normal(
        (local_dim, local_dim)
    )
    q, r = np.linalg.qr(z)
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def equipollent_product(num_sites: int, local_dim: int, unitary: np.ndarray) -> StateVector:
    """Product state with the same U|0> in every constituent."""
    u = np.asarray(unitary, dtype=np.complex128)
    if u.shape != (local_dim, local_dim):
        raise ValueError(f"expected a {local_dim}x{local_dim} unitary")
    column = u[:, 0]
    factors = [((site,), column) for site in range(1, num_sites + 1)]
    return assemble_product(factors, num_sites, local_dim)


def random_density_matrix(local_dim: int, seed, site: int = 1) -> DensityMatrix:
    """Random full-rank single-site density matrix (normalized G G^dagger)."""
    rng = _rng(seed)
    g = rng.standard_normal((local_dim, local_dim)) + 1j * rng.standard_normal(
        (local_dim, local_dim)
    )
    rho = g @ g.conj().T
    return DensityMatrix((site,), local_dim, rho / np.trace(rho))
