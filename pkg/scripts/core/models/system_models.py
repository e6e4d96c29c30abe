from typing import Any
from typing import Literal

from pydantic import BaseModel
from pydantic import Field


class ChannelSpec(BaseModel):
    channel: str
    polarity: Literal[1, -1] = 1


class ObjectSpec(BaseModel):
    carrier: str
    boundary: list[ChannelSpec] = []
    # non-null edge id -> one flow per boundary channel; omitted edges carry zeros
    labels: dict[str, list[int]] = {}


class LegSpec(BaseModel):
    """Images of head vertices and non-null head edges; YAML lists stand for product ids."""

    vertices: dict[str, Any] = {}
    edges: dict[str, Any] = {}


class AccountSpec(BaseModel):
    dom: str = "I"
    cod: str = "I"
    head: str
    left: LegSpec = Field(default_factory=LegSpec)
    right: LegSpec = Field(default_factory=LegSpec)
    valuation: dict[str, int] = {}


class SystemFile(BaseModel):
    graphs: dict[str, str] = {}
    objects: dict[str, ObjectSpec] = {}
    accounts: dict[str, AccountSpec] = {}
    # a name -> expression map, or a block of "expr NAME = ..." declarations
    expressions: dict[str, str] | str = {}
