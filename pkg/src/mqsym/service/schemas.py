"""Pydantic request and response models for the analysis service.

Wire formats mirror the mqstate-v1 / mqdm-v1 documents, so a state file
can be posted as a request body verbatim.
"""

from __future__ import annotations

from typing import Literal, Optional

from pydantic import BaseModel, ConfigDict, Field

from .. import __version__
from ..factorization import FactorizationResult
from ..io import density_to_document, state_digest, state_to_document
from ..permutations import EquipollenceVerdict, SymmetryReport
from ..states import DensityMatrix, StateVector


class AmplitudeEntry(BaseModel):
    index: list[int]
    re: float = 0.0
    im: float = 0.0


class StateDocument(BaseModel):
    format: Literal["mqstate-v1"]
    local_dim: int
    num_sites: int
    amplitudes: list[AmplitudeEntry] = []


class DensityEntry(BaseModel):
    row: list[int]
    col: list[int]
    re: float = 0.0
    im: float = 0.0


class DensityDocument(BaseModel):
    format: Literal["mqdm-v1"]
    local_dim: int
    sites: list[int]
    entries: list[DensityEntry] = []


class ComplexNumber(BaseModel):
    re: float
    im: float

    @classmethod
    def from_value(cls, value: complex) -> "ComplexNumber":
        return cls(re=value.real, im=value.imag)


class ClassifyRequest(BaseModel):
    state: StateDocument
    tol: Optional[float] = None


class SymmetrizeRequest(BaseModel):
    state: StateDocument
    normalize: bool = False


class ReduceRequest(BaseModel):
    state: StateDocument
    keep: list[int]


class GenRequest(BaseModel):
    kind: Literal[
        "ghz", "w", "dicke", "slater", "random", "product", "symmetric", "equipollent"
    ]
    num_sites: int = Field(ge=1)
    local_dim: int = Field(default=2, ge=2)
    excitations: Optional[int] = None  # dicke
    levels: Optional[list[int]] = None  # slater
    seed: int = 0


class VerifyRequest(BaseModel):
    suite: str
    trials: int = Field(default=100, ge=0)
    num_sites: int = Field(default=4, ge=1)
    local_dim: int = Field(default=2, ge=2)
    seed: int = 0
    tol: Optional[float] = None


class TranspositionEntry(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    pair: list[int]
    eigenvalue: Optional[int] = Field(default=None, alias="lambda")
    residual: float


class SymmetryModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    exchange_class: str = Field(alias="class")
    transpositions: list[TranspositionEntry]

    @classmethod
    def from_report(cls, report: SymmetryReport) -> "SymmetryModel":
        return cls(
            exchange_class=report.exchange_class,
            transpositions=[
                TranspositionEntry(pair=list(v.pair), eigenvalue=v.eigenvalue,
                                   residual=v.residual)
                for v in report.transpositions
            ],
        )


class BlockModel(BaseModel):
    sites: list[int]
    state: StateDocument


class FactorizationModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    M: int
    entanglement_class: str = Field(alias="class")
    finest: list[list[int]]
    blocks: list[BlockModel]
    global_phase: ComplexNumber
    residual: float

    @classmethod
    def from_result(cls, result: FactorizationResult) -> "FactorizationModel":
        from ..partitions import labels_from_mask

        return cls(
            M=result.M,
            entanglement_class=result.entanglement_class,
            finest=result.finest.as_labels(),
            blocks=[
                BlockModel(
                    sites=list(labels_from_mask(mask)),
                    state=StateDocument.model_validate(state_to_document(state)),
                )
                for mask, state in result.blocks
            ],
            global_phase=ComplexNumber.from_value(result.global_phase),
            residual=result.residual,
        )


class EquipollenceEntry(BaseModel):
    pair: list[int]
    status: str
    gamma: Optional[ComplexNumber] = None
    deviation: float

    @classmethod
    def from_verdict(cls, pair: tuple[int, int],
                     verdict: EquipollenceVerdict) -> "EquipollenceEntry":
        gamma = None if verdict.gamma is None else ComplexNumber.from_value(verdict.gamma)
        return cls(pair=list(pair), status=verdict.status, gamma=gamma,
                   deviation=verdict.deviation)


class Report(BaseModel):
    """Full analysis of one pure state; field order is stable for diffing."""

    model_config = ConfigDict(populate_by_name=True)

    input_digest: str
    norm: float
    symmetry: SymmetryModel
    factorization: FactorizationModel
    equipollence: Optional[list[EquipollenceEntry]] = None
    version: str = __version__


class SymmetrizeResponse(BaseModel):
    state: StateDocument
    norm: float


class ReduceResponse(BaseModel):
    density: DensityDocument


class GenResponse(BaseModel):
    state: StateDocument


class VerifyResponse(BaseModel):
    claim: str
    trials: int
    skipped: int
    failures: int
    passed: bool
    max_residual: float
    metrics: dict[str, float]
    counterexamples: list[dict]


class HealthResponse(BaseModel):
    status: str
    version: str


def state_document(psi: StateVector) -> StateDocument:
    return StateDocument.model_validate(state_to_document(psi))


def density_document(rho: DensityMatrix) -> DensityDocument:
    return DensityDocument.model_validate(density_to_document(rho))


def digest_of(psi: StateVector) -> str:
    return state_digest(psi)
