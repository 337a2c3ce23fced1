"""Pydantic request/response contracts for the HTTP service.

Response models mirror the stable report schema exactly; field order in the
models is the serialization order.  Exact rationals travel as 4-integer
quadruples [re_num, re_den, im_num, im_den]; complex floats as [re, im].
"""
from __future__ import annotations

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

Quad = tuple[int, int, int, int]
Pair = tuple[float, float]


class _Request(BaseModel):
    model_config = ConfigDict(extra="forbid")


# ---------------------------------------------------------------------------
# Requests
# ---------------------------------------------------------------------------


class InvariantRequest(_Request):
    knot: str
    samples: int = Field(default=50, ge=2)
    seed: int = 0
    pairs: int = Field(default=100, ge=0)
    zn: int = Field(default=5, ge=2)


class SweepRequest(_Request):
    knot: str
    samples: int = Field(default=50, ge=2)
    seed: int = 0


class KnotRequest(_Request):
    knot: str


class MonodromyRequest(_Request):
    knot: str
    center: Pair | None = None
    radius: float | None = Field(default=None, gt=0)
    steps: int = Field(default=256, ge=16)
    orientation: Literal["ccw", "cw"] = "ccw"
    include_paths: bool = True


class VerifyCstarRequest(_Request):
    knot: str
    tau: str | None = None
    n: int = Field(default=5, ge=2)
    pairs: int = Field(default=20, ge=1)
    seed: int = 0


class CorpusRequest(_Request):
    entries: list[str] | None = None
    samples: int = Field(default=50, ge=2)
    seed: int = 0
    pairs: int = Field(default=100, ge=0)


# ---------------------------------------------------------------------------
# Responses
# ---------------------------------------------------------------------------


class HealthResponse(BaseModel):
    status: str
    version: str


class BadSetEntryModel(BaseModel):
    poly: list[Quad]
    provenance: str
    roots: list[Pair]


class WeightedPointModel(BaseModel):
    y: Pair
    mult: int
    excluded: bool


class SliceModel(BaseModel):
    tau: Quad
    chi_b: int
    generic: bool
    points: list[WeightedPointModel]


class DecompositionModel(BaseModel):
    atoms: list[int]
    type_ii_chi: int


class InvariantResponse(BaseModel):
    knot: str
    chi_cl: int
    bad_set: list[BadSetEntryModel]
    slices: list[SliceModel]
    decomposition: DecompositionModel | None


class BadSetResponse(BaseModel):
    knot: str
    bad_set: list[BadSetEntryModel]


class CharPolyResponse(BaseModel):
    knot: str
    p: int
    q: int
    x_degree: int
    y_degree: int
    generic_y_degree: int
    terms: list[tuple[int, int, int, int]]
    abelian_factors_removed: int
    pretty: str


class AlexanderResponse(BaseModel):
    knot: str
    p: int
    q: int
    delta: list[int]
    pretty: str
    bad_traces: BadSetEntryModel


class LoopModel(BaseModel):
    center: Pair
    radius: float
    steps: int
    orientation: Literal["ccw", "cw"]
    base_roots: list[Pair]
    sigma: list[int]
    permutation: list[list[int]]
    eigenvalues: list[Pair]
    min_separation: float
    thetas: list[float] | None = None
    paths: list[list[Pair]] | None = None


class MonodromyResponse(BaseModel):
    knot: str
    rank: int
    loops: list[LoopModel]


class VerifyCstarResponse(BaseModel):
    knot: str
    tau: Quad
    zeta: Pair
    lattice_step: Pair
    n: int
    pairs: int
    free: bool
    min_separation: float
    max_closure_error: float


class AdditivityRow(BaseModel):
    knot: str
    parts: list[int]
    type_ii_chi: int
    chi_cl: int
    ok: bool


class CorpusResponse(BaseModel):
    entries: list[InvariantResponse]
    additivity: list[AdditivityRow]
