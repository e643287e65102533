"""Pydantic schemas for JSON input/output and verification reports."""

from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, field_validator


# ============ Graph Schemas ============

class GraphSchema(BaseModel):
    n: int = Field(..., ge=0)
    edges: List[Tuple[int, int]] = Field(default_factory=list)
    name: Optional[str] = None


class SeparationSchema(BaseModel):
    A: List[int]
    B: List[int]

    @field_validator("A", "B")
    @classmethod
    def sort_side(cls, v: List[int]) -> List[int]:
        return sorted(set(v))


class CornersSchema(BaseModel):
    separations: Dict[str, SeparationSchema]
    centre: List[int]
    links: Dict[str, List[int]]
    interiors: Dict[str, List[int]]


# ============ Profile Schemas ============

class ProfileSchema(BaseModel):
    bound: int = Field(..., ge=0)
    oriented: List[SeparationSchema]
    provenance: str = "generic"
    block: Optional[List[int]] = None


class AxiomReport(BaseModel):
    """Flags computed by exhaustive quantification over a profile."""

    bound: int
    consistent: bool
    p2: bool
    principal: bool
    k_profile: bool
    robust: Dict[int, bool]
    witnesses: List[str] = Field(default_factory=list)

    @property
    def is_robust(self) -> bool:
        return all(self.robust.values())

    @property
    def all_passed(self) -> bool:
        return self.consistent and self.p2 and self.principal and self.k_profile and self.is_robust


# ============ Decomposition Schemas ============

class TDNodeSchema(BaseModel):
    id: int = Field(..., ge=0)
    part: List[int]


class TDEdgeSchema(BaseModel):
    u: int = Field(..., ge=0)
    v: int = Field(..., ge=0)
    adhesion: List[int] = Field(default_factory=list)


class TreeDecompositionSchema(BaseModel):
    nodes: List[TDNodeSchema]
    edges: List[TDEdgeSchema] = Field(default_factory=list)


class Violation(BaseModel):
    axiom: str
    witness: str


class TDReport(BaseModel):
    nodes: int
    violations: List[Violation] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms(self) -> List[str]:
        return sorted({v.axiom for v in self.violations})


class TorsoSchema(BaseModel):
    part: List[int]
    adhesion_sets: List[List[int]]
    graph: GraphSchema
    relabel: List[int]


class RefinementSubtree(BaseModel):
    coarse_node: int
    fine_nodes: List[int]


class RefinementWitnessSchema(BaseModel):
    subtrees: List[RefinementSubtree]


class TotdNodeSchema(BaseModel):
    model_config = ConfigDict(protected_namespaces=())

    level: int
    rule: str
    graph: GraphSchema
    td: TreeDecompositionSchema
    profile_ids: List[int]
    td_node: Optional[int] = None
    torso: Optional[TorsoSchema] = None
    children: List["TotdNodeSchema"] = Field(default_factory=list)


TotdNodeSchema.model_rebuild()


# ============ Report Schemas ============

class PairWitness(BaseModel):
    first: int
    second: int
    order: int
    level: Optional[int] = None
    separation: Optional[SeparationSchema] = None


class TotdReport(BaseModel):
    witnesses: List[PairWitness] = Field(default_factory=list)
    missing_pairs: List[Tuple[int, int]] = Field(default_factory=list)
    property_violations: List[str] = Field(default_factory=list)
    automorphisms_checked: int = 0
    automorphism_violations: List[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not (self.missing_pairs or self.property_violations or self.automorphism_violations)


class CanonicityReport(BaseModel):
    kind: str
    automorphisms: int
    invariant: bool
    witness: Optional[str] = None


class OracleReport(BaseModel):
    suite: str
    graph: Optional[str] = None
    checked: int = 0
    violations: List[str] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


class DistinguishingReport(BaseModel):
    profiles: int
    undistinguished: List[Tuple[int, int]] = Field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.undistinguished


# ============ Run Configuration ============

class RunConfig(BaseModel):
    """One validated command-line invocation."""

    command: str
    input: Optional[str] = None
    k: Optional[int] = Field(None, ge=0)
    profile_source: Optional[str] = None
    output_format: str = "json"
    max_vertices: int = Field(16, ge=1, le=24)
    max_order: Optional[int] = Field(None, ge=0)
    seed: int = 0

    @field_validator("output_format")
    @classmethod
    def validate_format(cls, v: str) -> str:
        if v not in {"json", "dot", "text"}:
            raise ValueError(f"unknown output format {v!r}")
        return v
