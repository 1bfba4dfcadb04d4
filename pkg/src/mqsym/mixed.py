"""Direct separability of mixed states with respect to a partition.

A density matrix is directly separable w.r.t. a partition when it equals
the tensor product of its own block marginals. Direct separability with
respect to two partitions propagates to their meet; ``check_lemma3``
verifies that propagation on concrete inputs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .partitions import Partition, labels_from_mask
from .states import DensityMatrix, partial_trace, permute_density_sites, tensor_density

LEMMA3_HOLDS = "holds"
LEMMA3_PREMISE_FAILED = "premise_failed"
LEMMA3_VIOLATED = "violated"


@dataclass(frozen=True)
class DirectSeparabilityVerdict:
    partition: Partition
    is_direct: bool
    deviation: float  # Frobenius distance between rho and its marginal product

    def to_dict(self) -> dict:
        return {
            "partition": self.partition.as_labels(),
            "is_direct": self.is_direct,
            "deviation": self.deviation,
        }


def marginal_product(rho: DensityMatrix, partition: Partition) -> DensityMatrix:
    """Tensor product of block marginals, reindexed to rho's site order.

    Marginals are assembled in canonical block order (ascending smallest
    label, sites ascending inside each block) and then permuted.
    """
    marginals = [partial_trace(rho, labels_from_mask(mask)) for mask in partition.blocks]
    return permute_density_sites(tensor_density(marginals), rho.sites)


def is_directly_separable(
    rho: DensityMatrix, partition: Partition, tol: float = 1e-10
) -> DirectSeparabilityVerdict:
    """Compare rho against the product of its block marginals."""
    if sorted(rho.sites) != list(range(1, partition.num_sites + 1)):
        raise ValueError("partition does not cover the sites of the density matrix")
    if abs(rho.trace() - 1.0) > 1e-6:
        raise ValueError(f"density matrix trace {rho.trace():.6g} is not 1")
    if len(partition) == 1:
        return DirectSeparabilityVerdict(partition, True, 0.0)
    product = marginal_product(rho, partition)
    deviation = float(np.linalg.norm(rho.entries - product.entries))
    return DirectSeparabilityVerdict(partition, deviation < tol, deviation)


@dataclass(frozen=True)
class MeetSeparabilityVerdict:
    status: str  # holds | premise_failed | violated
    premise_a: DirectSeparabilityVerdict
    premise_b: DirectSeparabilityVerdict
    conclusion: DirectSeparabilityVerdict | None

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "premise_a": self.premise_a.to_dict(),
            "premise_b": self.premise_b.to_dict(),
            "conclusion": self.conclusion.to_dict() if self.conclusion else None,
        }


def check_lemma3(
    rho: DensityMatrix, part_a: Partition, part_b: Partition, tol: float = 1e-10
) -> MeetSeparabilityVerdict:
    """Direct separability w.r.t. two partitions implies it for their meet.

    Premise failures are reported as such, distinct from a violated
    conclusion; all three deviations are returned either way.
    """
    premise_a = is_directly_separable(rho, part_a, tol)
    premise_b = is_directly_separable(rho, part_b, tol)
    if not (premise_a.is_direct and premise_b.is_direct):
        return MeetSeparabilityVerdict(LEMMA3_PREMISE_FAILED, premise_a, premise_b, None)
    conclusion = is_directly_separable(rho, part_a.meet(part_b), tol)
    status = LEMMA3_HOLDS if conclusion.is_direct else LEMMA3_VIOLATED
    return MeetSeparabilityVerdict(status, premise_a, premise_b, conclusion)
