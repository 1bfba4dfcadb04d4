"""Set partitions of the site labels {1..N}, stored as bitmask blocks.

Label i occupies bit i-1, so masks stay below 2**N. Blocks are kept in
canonical order (ascending smallest member), which makes partition
equality a plain structural comparison.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import PartitionError


def mask_from_labels(labels: Iterable[int], num_sites: int) -> int:
    mask = 0
    for label in labels:
        if not 1 <= label <= num_sites:
            raise ValueError(f"label {label} out of range 1..{num_sites}")
        mask |= 1 << (label - 1)
    return mask


def labels_from_mask(mask: int) -> tuple[int, ...]:
    labels = []
    label = 1
    while mask:
        if mask & 1:
            labels.append(label)
        mask >>= 1
        label += 1
    return tuple(labels)


def mask_size(mask: int) -> int:
    return mask.bit_count()


def complement_mask(mask: int, num_sites: int) -> int:
    """Labels not in ``mask``; the two unite to {1..N} and never overlap."""
    full = (1 << num_sites) - 1
    if mask & ~full:
        raise ValueError(f"mask {mask:#x} has bits beyond {num_sites} sites")
    return full & ~mask


@dataclass(frozen=True)
class Partition:
    """Pairwise disjoint nonempty blocks covering {1..num_sites}."""

    num_sites: int
    blocks: tuple[int, ...]

    def __post_init__(self):
        full = (1 << self.num_sites) - 1
        seen = 0
        for block in self.blocks:
            if block == 0:
                raise PartitionError("empty block")
            if block & ~full:
                raise PartitionError(f"block {labels_from_mask(block)} exceeds {self.num_sites} sites")
            if block & seen:
                raise PartitionError(f"block {labels_from_mask(block)} overlaps another block")
            seen |= block
        if seen != full:
            missing = labels_from_mask(full & ~seen)
            raise PartitionError(f"labels {missing} are not covered")
        ordered = tuple(sorted(self.blocks, key=lambda b: b & -b))
        object.__setattr__(self, "blocks", ordered)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int] | int], num_sites: int) -> "Partition":
        """Validate label sets (or masks) as a partition of {1..num_sites}."""
        masks = []
        for block in blocks:
            if isinstance(block, int):
                masks.append(block)
            else:
                masks.append(mask_from_labels(block, num_sites))
        return cls(num_sites, tuple(masks))

    @classmethod
    def singletons(cls, num_sites: int) -> "Partition":
        return cls(num_sites, tuple(1 << i for i in range(num_sites)))

    @classmethod
    def whole(cls, num_sites: int) -> "Partition":
        return cls(num_sites, ((1 << num_sites) - 1,))

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, label: int) -> int:
        if not 1 <= label <= self.num_sites:
            raise ValueError(f"label {label} out of range 1..{self.num_sites}")
        bit = 1 << (label - 1)
        for block in self.blocks:
            if block & bit:
                return block
        raise AssertionError("partition invariant violated")

    def meet(self, other: "Partition") -> "Partition":
        """Partition of all nonempty pairwise block intersections."""
        if self.num_sites != other.num_sites:
            raise ValueError("partitions are over different label sets")
        blocks = []
        for a in self.blocks:
            for b in other.blocks:
                c = a & b
                if c:
                    blocks.append(c)
        return Partition(self.num_sites, tuple(blocks))

    def refines(self, other: "Partition") -> bool:
        """True when every block here sits inside one block of ``other``."""
        if self.num_sites != other.num_sites:
            raise ValueError("partitions are over different label sets")
        return all(any(a & ~b == 0 for b in other.blocks) for a in self.blocks)

    def as_labels(self) -> list[list[int]]:
        """Sorted arrays of sorted arrays, the JSON/CLI representation."""
        return [list(labels_from_mask(b)) for b in self.blocks]
