"""Symmetric-group action on states, exchange classification, symmetrizer.

The action convention: for a permutation s, the output coefficient at
basis tuple b equals the input coefficient at the tuple a with
a_j = b at position s^-1(j). Under this convention
apply_permutation(s, apply_permutation(t, psi)) equals
apply_permutation(t.compose(s) ... ) -- see Permutation.compose.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .states import EPS_NORM, StateVector, digit_table

SYMMETRIC = "symmetric"
ANTISYMMETRIC = "antisymmetric"
NO_EXCHANGE_CLASS = "none"

EQUIPOLLENT_STRICT = "strict"
EQUIPOLLENT_PHASE = "up_to_phase"
NOT_EQUIPOLLENT = "not_equipollent"


@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..N}; images[i-1] is the image of label i."""

    images: tuple[int, ...]

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ValueError(f"{images} is not a permutation of 1..{len(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, num_sites: int) -> "Permutation":
        return cls(tuple(range(1, num_sites + 1)))

    @classmethod
    def transposition(cls, i: int, j: int, num_sites: int) -> "Permutation":
        if i == j:
            raise ValueError("transposition needs two distinct labels")
        images = list(range(1, num_sites + 1))
        images[i - 1], images[j - 1] = j, i
        return cls(tuple(images))

    @property
    def size(self) -> int:
        return len(self.images)

    def __call__(self, label: int) -> int:
        return self.images[label - 1]

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for i, img in enumerate(self.images, start=1):
            inv[img - 1] = i
        return Permutation(tuple(inv))

    def compose(self, other: "Permutation") -> "Permutation":
        """(self o other)(i) = self(other(i))."""
        if self.size != other.size:
            raise ValueError("permutations act on different label sets")
        return Permutation(tuple(self.images[other.images[i] - 1] for i in range(self.size)))

    def fixed_mask(self) -> int:
        """Bitmask of labels the permutation leaves in place."""
        mask = 0
        for i, img in enumerate(self.images, start=1):
            if img == i:
                mask |= 1 << (i - 1)
        return mask

    def orbit_masks(self) -> tuple[int, ...]:
        """Cycles on the moved labels, as bitmasks, ordered by smallest member."""
        seen = set()
        orbits = []
        for start in range(1, self.size + 1):
            if start in seen or self.images[start - 1] == start:
                continue
            mask = 0
            label = start
            while label not in seen:
                seen.add(label)
                mask |= 1 << (label - 1)
                label = self.images[label - 1]
            orbits.append(mask)
        return tuple(sorted(orbits, key=lambda m: m & -m))


def transposition_pairs(num_sites: int) -> list[tuple[int, int]]:
    """All C(N,2) unordered pairs (i, j) with i < j."""
    return [(i, j) for i in range(1, num_sites + 1) for j in range(i + 1, num_sites + 1)]


def apply_permutation(perm: Permutation, psi: StateVector) -> StateVector:
    """Relabel the tensor factors of ``psi`` by ``perm``.

    The output amplitude at tuple b is the input amplitude at the tuple a
    with a_j = b at position perm^-1(j); as a transpose, axis k of the
    output corresponds to axis perm(k+1)-1 of the input tensor.
    """
    if perm.size != psi.num_sites:
        raise ValueError(f"permutation of {perm.size} labels on a {psi.num_sites}-site state")
    axes = [perm.images[k] - 1 for k in range(perm.size)]
    out = psi.as_tensor().transpose(axes).reshape(-1)
    return StateVector(psi.num_sites, psi.local_dim, out)


@dataclass(frozen=True)
class TranspositionVerdict:
    pair: tuple[int, int]
    eigenvalue: int | None  # +1, -1, or None when not an eigenstate
    residual: float


@dataclass(frozen=True)
class SymmetryReport:
    exchange_class: str
    transpositions: tuple[TranspositionVerdict, ...]

    def to_dict(self) -> dict:
        return {
            "class": self.exchange_class,
            "transpositions": [
                {"pair": list(v.pair), "lambda": v.eigenvalue, "residual": v.residual}
                for v in self.transpositions
            ],
        }


def classify_exchange(psi: StateVector, tol: float = EPS_NORM) -> SymmetryReport:
    """Test every transposition and report the exchange-symmetry class.

    The eigenvalue is snapped to +/-1 only when the residual
    ||pi psi - lambda psi|| stays below ``tol``; otherwise the pair is
    reported as not an eigenstate.
    """
    if not psi.is_normalized(tol=max(tol, EPS_NORM)):
        raise ValueError("classify_exchange expects a normalized state")
    verdicts = []
    for i, j in transposition_pairs(psi.num_sites):
        swapped = apply_permutation(Permutation.transposition(i, j, psi.num_sites), psi)
        r_plus = float(np.linalg.norm(swapped.amplitudes - psi.amplitudes))
        r_minus = float(np.linalg.norm(swapped.amplitudes + psi.amplitudes))
        lam, residual = (1, r_plus) if r_plus <= r_minus else (-1, r_minus)
        if residual >= tol:
            lam = None
        verdicts.append(TranspositionVerdict((i, j), lam, residual))
    if all(v.eigenvalue == 1 for v in verdicts):
        cls = SYMMETRIC
    elif verdicts and all(v.eigenvalue == -1 for v in verdicts):
        cls = ANTISYMMETRIC
    else:
        cls = NO_EXCHANGE_CLASS
    return SymmetryReport(cls, tuple(verdicts))


@lru_cache(maxsize=None)
def _rearrangement_orbits(num_sites: int, local_dim: int) -> tuple[np.ndarray, np.ndarray]:
    """Orbit id per flat index under digit rearrangement, plus orbit sizes."""
    digits = digit_table(num_sites, local_dim)
    _, orbit_ids = np.unique(np.sort(digits, axis=1), axis=0, return_inverse=True)
    orbit_ids = orbit_ids.reshape(-1)
    sizes = np.bincount(orbit_ids)
    return orbit_ids, sizes


def symmetrize(psi: StateVector) -> StateVector:
    """Projection onto the symmetric subspace, (1/N!) sum over all permutations.

    Evaluated orbit-wise: the output amplitude at a basis tuple is the mean
    of the input over all distinct rearrangements of that tuple, which
    avoids the N! loop. The result may be the zero vector.
    """
    orbit_ids, sizes = _rearrangement_orbits(psi.num_sites, psi.local_dim)
    amp = psi.amplitudes
    sums = np.bincount(orbit_ids, weights=amp.real) + 1j * np.bincount(orbit_ids, weights=amp.imag)
    return StateVector(psi.num_sites, psi.local_dim, (sums / sizes)[orbit_ids])


def symmetrize_direct(psi: StateVector) -> StateVector:
    """Symmetrizer via the explicit N!-term loop; cross-check for small N."""
    total = np.zeros_like(psi.amplitudes)
    count = 0
    for images in itertools.permutations(range(1, psi.num_sites + 1)):
        total = total + apply_permutation(Permutation(images), psi).amplitudes
        count += 1
    return StateVector(psi.num_sites, psi.local_dim, total / count)


def project_perp(psi: StateVector) -> StateVector:
    """Component orthogonal to the symmetric subspace, psi - T psi.

    symmetrize(psi) + project_perp(psi) recovers psi entrywise to
    rounding (one subtraction and one addition per amplitude).
    """
    sym = symmetrize(psi)
    return StateVector(psi.num_sites, psi.local_dim, psi.amplitudes - sym.amplitudes)


@dataclass(frozen=True)
class EquipollenceVerdict:
    status: str
    gamma: complex | None  # unimodular phase with c = gamma * d, when one exists
    deviation: float

    def to_dict(self) -> dict:
        gamma = None
        if self.gamma is not None:
            gamma = {"re": self.gamma.real, "im": self.gamma.imag}
        return {"status": self.status, "gamma": gamma, "deviation": self.deviation}


def equipollent(c: np.ndarray, d: np.ndarray, tol: float = EPS_NORM) -> EquipollenceVerdict:
    """Decide whether coefficient vectors coincide up to one common phase.

    The phase is read off the first index where both entries exceed
    sqrt(tol) in magnitude; the verdict is strict when that phase is 1
    within ``tol``.
    """
    c = np.asarray(c, dtype=np.complex128).reshape(-1)
    d = np.asarray(d, dtype=np.complex128).reshape(-1)
    if c.shape != d.shape:
        raise ValueError("coefficient vectors have different lengths")
    if np.linalg.norm(c) == 0.0 or np.linalg.norm(d) == 0.0:
        raise ValueError("equipollence is undefined for the zero vector")
    floor = np.sqrt(tol)
    candidates = np.flatnonzero((np.abs(c) > floor) & (np.abs(d) > floor))
    if candidates.size == 0:
        return EquipollenceVerdict(NOT_EQUIPOLLENT, None, float(np.max(np.abs(c - d))))
    gamma = complex(c[candidates[0]] / d[candidates[0]])
    deviation = float(np.max(np.abs(c - gamma * d)))
    if deviation > tol or abs(abs(gamma) - 1.0) > tol:
        return EquipollenceVerdict(NOT_EQUIPOLLENT, None, deviation)
    if abs(gamma - 1.0) <= tol:
        return EquipollenceVerdict(EQUIPOLLENT_STRICT, gamma, deviation)
    return EquipollenceVerdict(EQUIPOLLENT_PHASE, gamma, deviation)


def apply_collective_unitary(
    unitary: np.ndarray, psi: StateVector, tol: float = EPS_NORM
) -> StateVector:
    """Apply the same single-site unitary to every constituent."""
    u = np.asarray(unitary, dtype=np.complex128)
    n = psi.local_dim
    if u.shape != (n, n):
        raise ValueError(f"expected a {n}x{n} matrix, got shape {u.shape}")
    if np.max(np.abs(u.conj().T @ u - np.eye(n))) > tol:
        raise ValueError("matrix is not unitary within tolerance")
    tensor = psi.as_tensor()
    for axis in range(psi.num_sites):
        tensor = np.moveaxis(np.tensordot(u, tensor, axes=(1, axis)), 0, axis)
    return StateVector(psi.num_sites, psi.local_dim, tensor.reshape(-1))
