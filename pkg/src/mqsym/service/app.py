"""FastAPI application exposing the analysis operations.

Domain errors surface as HTTP 400 with a machine-readable ``code`` that
thin clients map onto exit codes:

    parse_error           malformed state/density document
    dimension_overflow    Hilbert space beyond the dense ceiling
    zero_state            zero vector where a state is required
    invalid_input         any other violated precondition
"""

from __future__ import annotations

from fastapi import FastAPI
from fastapi.responses import JSONResponse

from .. import __version__
from ..errors import DimensionLimitError, FactorizationError, ParseError, ZeroStateError
from ..factorization import finest_factorization
from ..generators import (
    dicke,
    equipollent_product,
    ghz,
    random_local_unitary,
    random_product,
    random_state,
    random_symmetric,
    slater,
    w_state,
)
from ..io import density_from_document, state_from_document
from ..permutations import classify_exchange, equipollent, symmetrize
from ..states import EPS_NORM, EPS_PURE, StateVector, normalize, partial_trace
from ..verifier import run_suite
from . import schemas


def _error_payload(code: str, message: str) -> dict:
    return {"detail": {"code": code, "message": message}}


_ERROR_CODES = [
    (ParseError, "parse_error"),
    (DimensionLimitError, "dimension_overflow"),
    (ZeroStateError, "zero_state"),
    (FactorizationError, "invalid_input"),
    (ValueError, "invalid_input"),
]


def build_report(psi: StateVector, tol: float | None) -> schemas.Report:
    """Symmetry class, finest factorization and block equipollence."""
    exchange_tol = tol if tol is not None else EPS_NORM
    purity_tol = tol if tol is not None else EPS_PURE
    normalized = normalize(psi)
    symmetry = classify_exchange(normalized, tol=exchange_tol)
    fact = finest_factorization(normalized, tol=purity_tol)
    equip = None
    if fact.M == psi.num_sites and psi.num_sites > 1:
        states = [state for _, state in fact.blocks]
        equip = [
            schemas.EquipollenceEntry.from_verdict(
                (a + 1, b + 1),
                equipollent(states[a].amplitudes, states[b].amplitudes),
            )
            for a in range(len(states))
            for b in range(a + 1, len(states))
        ]
    return schemas.Report(
        input_digest=schemas.digest_of(psi),
        norm=psi.norm(),
        symmetry=schemas.SymmetryModel.from_report(symmetry),
        factorization=schemas.FactorizationModel.from_result(fact),
        equipollence=equip,
    )


def _generate(request: schemas.GenRequest) -> StateVector:
    kind, n, dim = request.kind, request.num_sites, request.local_dim
    if kind == "ghz":
        return ghz(n, dim)
    if kind == "w":
        return w_state(n)
    if kind == "dicke":
        if request.excitations is None:
            raise ValueError("dicke needs 'excitations'")
        return dicke(n, request.excitations)
    if kind == "slater":
        if request.levels is None:
            raise ValueError("slater needs 'levels'")
        return slater(n, dim, request.levels)
    if kind == "random":
        return random_state(n, dim, request.seed)
    if kind == "product":
        return random_product(n, dim, request.seed)
    if kind == "symmetric":
        return random_symmetric(n, dim, request.seed)
    if kind == "equipollent":
        return equipollent_product(n, dim, random_local_unitary(dim, request.seed))
    raise ValueError(f"unknown generator kind {kind!r}")


def create_app() -> FastAPI:
    app = FastAPI(
        title="mqsym",
        version=__version__,
        description="Entanglement structure and exchange symmetry of pure multipartite states",
    )

    for exc_type, code in _ERROR_CODES:
        def handler(request, exc, code=code):
            return JSONResponse(status_code=400, content=_error_payload(code, str(exc)))

        app.add_exception_handler(exc_type, handler)

    @app.get("/health", response_model=schemas.HealthResponse)
    def health():
        return schemas.HealthResponse(status="ok", version=__version__)

    @app.post("/classify", response_model=schemas.Report)
    def classify(request: schemas.ClassifyRequest):
        psi = state_from_document(request.state.model_dump())
        return build_report(psi, request.tol)

    @app.post("/factorize", response_model=schemas.Report)
    def factorize(request: schemas.ClassifyRequest):
        psi = state_from_document(request.state.model_dump())
        return build_report(psi, request.tol)

    @app.post("/symmetrize", response_model=schemas.SymmetrizeResponse)
    def symmetrize_endpoint(request: schemas.SymmetrizeRequest):
        psi = state_from_document(request.state.model_dump())
        projected = symmetrize(psi)
        if request.normalize:
            projected = normalize(projected)
        return schemas.SymmetrizeResponse(
            state=schemas.state_document(projected), norm=projected.norm()
        )

    @app.post("/reduce", response_model=schemas.ReduceResponse)
    def reduce_endpoint(request: schemas.ReduceRequest):
        psi = state_from_document(request.state.model_dump())
        rho = partial_trace(psi, request.keep)
        return schemas.ReduceResponse(density=schemas.density_document(rho))

    @app.post("/gen", response_model=schemas.GenResponse)
    def gen(request: schemas.GenRequest):
        return schemas.GenResponse(state=schemas.state_document(_generate(request)))

    @app.post("/verify", response_model=schemas.VerifyResponse)
    def verify(request: schemas.VerifyRequest):
        verdict = run_suite(
            request.suite,
            request.trials,
            request.num_sites,
            request.local_dim,
            request.seed,
            tol=request.tol,
        )
        return schemas.VerifyResponse(**verdict.to_dict())

    return app


app = create_app()
