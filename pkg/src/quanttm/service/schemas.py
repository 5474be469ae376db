"""Pydantic request/response models for the HTTP API.

Domain payloads (project documents, estimate records) are validated by the
core parsers, which produce precise entity paths; the models here shape the
envelopes around them.
"""

from __future__ import annotations

from typing import Any, Optional

from pydantic import BaseModel, Field


class MoneyOut(BaseModel):
    amount_minor: int
    currency: str


class ErrorBody(BaseModel):
    status: int
    code: str
    message: str
    path: Optional[str] = None


class ClassifyRequest(BaseModel):
    name: str = Field(min_length=1)


class ClassifyResponse(BaseModel):
    name: str
    principles: list[str]


class FactorOut(BaseModel):
    id: str
    name: str
    tangibility: str
    applicable_principles: list[str]
    loss_kind: str
    builtin: bool


class FactorListResponse(BaseModel):
    factors: list[FactorOut]


class ContributionOut(BaseModel):
    effect_id: str
    amount: MoneyOut


class QuantifiedOut(BaseModel):
    threat_id: str
    threat: str
    q: MoneyOut
    duration_hours: Any  # number of hours or the string "inf"
    contributions: list[ContributionOut]
    reference: Optional[MoneyOut] = None
    reference_diverges: Optional[bool] = None


class ImpactRankEntry(BaseModel):
    rank: int
    threat_id: str
    threat: str
    q: MoneyOut


class EmergencyRankEntry(BaseModel):
    rank: int
    threat_id: str
    threat: str
    mtpd_hours: Optional[float] = None


class RosiRequest(BaseModel):
    annual_cost: float | str = Field(description="Yearly control cost in major units")
    mitigation_rate: float = Field(default=1.0, ge=0.0, le=1.0)
    threat_ids: list[str] = Field(min_length=1)
    name: str = "ad-hoc control"


class RosiResponse(BaseModel):
    control: str
    mitigated_impact: MoneyOut
    control_cost: MoneyOut
    absolute_return: MoneyOut
    cost_effective: bool


class PlotSeriesOut(BaseModel):
    kind: str
    name: str
    labels: list[str]
    values: list[float]
    currency: str


class ProjectEnvelope(BaseModel):
    revision: str
    project: dict


class RevisionResponse(BaseModel):
    revision: str
    warnings: list[str] = []


class CatalogResponse(BaseModel):
    catalog: dict
    keyword_table: dict
