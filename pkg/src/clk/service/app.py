"""FastAPI application: each endpoint wraps one library entry point.

Package errors become structured HTTP errors: ``parse`` and ``domain``
errors are 400 with a body ``{"detail": {"kind", "message", "position"?}}``,
``internal`` errors are 500 with the same body shape.  Request validation
failures keep FastAPI's standard 422 response.
"""
from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .. import __version__, invariant
from ..errors import ClkError
from . import models


def create_app() -> FastAPI:
    app = FastAPI(title="clk", version=__version__, docs_url=None, redoc_url=None)

    @app.exception_handler(ClkError)
    async def clk_error_handler(request: Request, exc: ClkError) -> JSONResponse:
        detail: dict = {"kind": exc.kind, "message": exc.message}
        position = getattr(exc, "position", None)
        if position is not None:
            detail["position"] = position
        status = 500 if exc.kind == "internal" else 400
        return JSONResponse(status_code=status, content={"detail": detail})

    @app.get("/health", response_model=models.HealthResponse)
    def health() -> dict:
        return {"status": "ok", "version": __version__}

    @app.post("/invariant", response_model=models.InvariantResponse)
    def invariant_endpoint(req: models.InvariantRequest) -> dict:
        rep = invariant.compute(
            req.knot,
            samples=req.samples,
            seed=req.seed,
            freeness_pairs=req.pairs,
            zn=req.zn,
        )
        return invariant.report_to_dict(rep)

    @app.post("/sweep", response_model=models.InvariantResponse)
    def sweep_endpoint(req: models.SweepRequest) -> dict:
        atom = invariant.single_atom(req.knot)
        cp, delta, _ = invariant.atom_data(atom)
        rep = invariant.sweep(cp, delta, samples=req.samples, seed=req.seed)
        return invariant.report_to_dict(rep)

    @app.post("/bad-set", response_model=models.BadSetResponse)
    def bad_set_endpoint(req: models.KnotRequest) -> dict:
        return invariant.bad_set_report(req.knot)

    @app.post("/charpoly", response_model=models.CharPolyResponse)
    def charpoly_endpoint(req: models.KnotRequest) -> dict:
        return invariant.charpoly_report(req.knot)

    @app.post("/alexander", response_model=models.AlexanderResponse)
    def alexander_endpoint(req: models.KnotRequest) -> dict:
        return invariant.alexander_report(req.knot)

    @app.post(
        "/monodromy",
        response_model=models.MonodromyResponse,
        response_model_exclude_none=True,
    )
    def monodromy_endpoint(req: models.MonodromyRequest) -> dict:
        center = complex(*req.center) if req.center is not None else None
        return invariant.monodromy_report(
            req.knot,
            center=center,
            radius=req.radius,
            steps=req.steps,
            orientation=1 if req.orientation == "ccw" else -1,
            include_paths=req.include_paths,
        )

    @app.post("/verify-cstar", response_model=models.VerifyCstarResponse)
    def verify_cstar_endpoint(req: models.VerifyCstarRequest) -> dict:
        return invariant.verify_cstar_report(
            req.knot, tau_text=req.tau, n=req.n, pairs=req.pairs, seed=req.seed
        )

    @app.post("/corpus", response_model=models.CorpusResponse)
    def corpus_endpoint(req: models.CorpusRequest) -> dict:
        return invariant.run_corpus(
            entries=req.entries,
            samples=req.samples,
            seed=req.seed,
            freeness_pairs=req.pairs,
        )

    return app
