"""Entanglement structure and exchange symmetry of pure multipartite states.

The package decides how a pure state on N constituents of local dimension
n factors into tensor blocks (finest decomposition, maximal block count,
separability class), classifies its behaviour under constituent exchange
(symmetric, antisymmetric or neither), and ships randomized verification
suites for the structural claims connecting the two.
"""

__version__ = "0.1.0"

from .errors import (
    DimensionLimitError,
    FactorizationError,
    ParseError,
    PartitionError,
    ZeroStateError,
)
from .factorization import (
    FULLY_SEPARABLE,
    GLOBALLY_ENTANGLED,
    PARTIALLY_ENTANGLED,
    FactorizationResult,
    finest_factorization,
    is_factoring_subset,
    minimal_factoring_block,
    separates,
)
from .partitions import Partition, complement_mask, labels_from_mask, mask_from_labels
from .permutations import (
    ANTISYMMETRIC,
    NO_EXCHANGE_CLASS,
    SYMMETRIC,
    EquipollenceVerdict,
    Permutation,
    SymmetryReport,
    apply_collective_unitary,
    apply_permutation,
    classify_exchange,
    equipollent,
    project_perp,
    symmetrize,
    symmetrize_direct,
)
from .states import (
    DensityMatrix,
    StateVector,
    decode,
    encode,
    inner,
    normalize,
    partial_trace,
    purity,
)

__all__ = [
    "__version__",
    "ANTISYMMETRIC",
    "DensityMatrix",
    "DimensionLimitError",
    "EquipollenceVerdict",
    "FULLY_SEPARABLE",
    "FactorizationError",
    "FactorizationResult",
    "GLOBALLY_ENTANGLED",
    "NO_EXCHANGE_CLASS",
    "PARTIALLY_ENTANGLED",
    "ParseError",
    "Partition",
    "PartitionError",
    "Permutation",
    "StateVector",
    "SYMMETRIC",
    "SymmetryReport",
    "ZeroStateError",
    "apply_collective_unitary",
    "apply_permutation",
    "classify_exchange",
    "complement_mask",
    "decode",
    "encode",
    "equipollent",
    "finest_factorization",
    "inner",
    "is_factoring_subset",
    "labels_from_mask",
    "mask_from_labels",
    "minimal_factoring_block",
    "normalize",
    "partial_trace",
    "project_perp",
    "purity",
    "separates",
    "symmetrize",
    "symmetrize_direct",
]
