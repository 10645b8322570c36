"""
Pydantic models for construction targets, recipes and the HTTP API
"""
from typing import Annotated, Literal, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from src.diamond import quarter_indices, quarter_representative
from src.errors import OutOfRange


class ResidueTarget(BaseModel):
    """Quarter-diamond of residues mod m, the construction goal"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Dimension")
    m: int = Field(..., ge=2, description="Modulus")
    residues: dict[tuple[int, int], int] = Field(default_factory=dict, description="Residue per quarter index")

    @model_validator(mode="before")
    @classmethod
    def complete_quarter(cls, data):
        # omitted entries default to 0, and (0,0) to 1
        if isinstance(data, dict) and isinstance(data.get("n"), int) and data["n"] >= 0:
            given = dict(data.get("residues") or {})
            full = {pq: int(pq == (0, 0)) for pq in quarter_indices(data["n"])}
            full.update(given)
            data = {**data, "residues": full}
        return data

    @model_validator(mode="after")
    def check_residues(self):
        expected = set(quarter_indices(self.n))
        extra = set(self.residues) - expected
        if extra:
            raise ValueError(f"indices outside the quarter 0 <= p <= q, p+q <= n: {sorted(extra)}")
        for (p, q), r in self.residues.items():
            if not 0 <= r < self.m:
                raise ValueError(f"residue {r} at ({p},{q}) outside 0..{self.m - 1}")
        if self.residues[(0, 0)] != 1:
            raise ValueError("residue at (0,0) must be 1")
        return self

    def residue(self, p: int, q: int) -> int:
        return self.residues[quarter_representative(self.n, p, q)]

    def outer(self) -> list[int]:
        """Targets h^{1,0}, ..., h^{n,0}"""
        return [self.residue(p, 0) for p in range(1, self.n + 1)]

    def primitive(self, p: int, q: int) -> int:
        """Target l^{p,q} mod m"""
        return (self.residue(p, q) - self.residue(p - 1, q - 1)) % self.m

    def grid(self) -> list[list[int]]:
        return [[self.residue(p, q) for q in range(self.n + 1)] for p in range(self.n + 1)]


class CurveStep(BaseModel):
    """Level-1 curve of genus g with a line bundle of degree d"""
    model_config = ConfigDict(frozen=True)
    kind: Literal["curve"] = "curve"
    genus: int = Field(..., ge=0)
    degree: int = Field(..., ge=1)


class TowerLevelStep(BaseModel):
    """Hypersurface in (previous level) x E x E"""
    model_config = ConfigDict(frozen=True)
    kind: Literal["tower"] = "tower"
    elliptic_degree: int = Field(..., ge=3)
    e: int = Field(..., ge=1)


class BlowupPointStep(BaseModel):
    model_config = ConfigDict(frozen=True)
    kind: Literal["blowup-point"] = "blowup-point"


class BlowupProjStep(BaseModel):
    """Blow-up along a linear P^s inside an exceptional divisor"""
    model_config = ConfigDict(frozen=True)
    kind: Literal["blowup-proj"] = "blowup-proj"
    s: int = Field(..., ge=0)


class BlowupBundleStep(BaseModel):
    """Blow-up along B_d, a P^{r-1}-bundle over Y_d in P^{s-r+1}"""
    model_config = ConfigDict(frozen=True)
    kind: Literal["blowup-bundle"] = "blowup-bundle"
    r: int = Field(..., ge=1)
    s: int = Field(..., ge=1)
    d: int = Field(..., ge=1)

    @model_validator(mode="after")
    def check_order(self):
        if self.r > self.s:
            raise ValueError(f"bundle needs r <= s, got r={self.r}, s={self.s}")
        return self


RecipeStep = Annotated[
    Union[CurveStep, TowerLevelStep, BlowupPointStep, BlowupProjStep, BlowupBundleStep],
    Field(discriminator="kind"),
]

BLOWUP_KINDS = ("blowup-point", "blowup-proj", "blowup-bundle")


class Recipe(BaseModel):
    """Construction sequence: one curve, tower levels, then blow-ups"""
    model_config = ConfigDict(frozen=True)

    n: int = Field(..., ge=1, description="Dimension")
    m: int = Field(..., ge=2, description="Modulus")
    steps: tuple[RecipeStep, ...] = Field(default=(), description="Ordered steps")


class ResidueEntry(BaseModel):
    p: int = Field(..., ge=0)
    q: int = Field(..., ge=0)
    value: int = Field(..., description="Residue")


class TargetRequest(BaseModel):
    """Model for construct request"""
    dim: int = Field(..., ge=1, description="Dimension")
    mod: int = Field(..., ge=2, description="Modulus")
    residues: list[ResidueEntry] = Field([], description="Quarter residues; omitted entries are 0")

    @field_validator("residues")
    @classmethod
    def no_duplicates(cls, v):
        seen = [(r.p, r.q) for r in v]
        if len(seen) != len(set(seen)):
            raise ValueError("duplicate (p,q) entry")
        return v

    def to_target(self) -> ResidueTarget:
        """Map each entry to its quarter representative; out-of-range entries are left for validation"""
        residues = {}
        for r in self.residues:
            in_range = r.p <= self.dim and r.q <= self.dim
            key = quarter_representative(self.dim, r.p, r.q) if in_range else (r.p, r.q)
            if key in residues:
                raise OutOfRange(f"duplicate entry {key} from ({r.p},{r.q})")
            residues[key] = r.value
        return ResidueTarget(n=self.dim, m=self.mod, residues=residues)


class ConstructResponse(BaseModel):
    verified: bool = Field(..., description="All congruences hold")
    recipe: str = Field(..., description="Recipe in text format")
    diamond: str = Field(..., description="Diamond in text format")


class EvalRequest(BaseModel):
    recipe: str = Field(..., description="Recipe in text format")


class DiamondResponse(BaseModel):
    diamond: str = Field(..., description="Diamond in text format")


class PowerEntry(BaseModel):
    p: int = Field(..., ge=0)
    q: int = Field(..., ge=0)
    exponent: int = Field(1, ge=1)


class TermEntry(BaseModel):
    coefficient: str = Field(..., description="Integer or rational a/b")
    powers: list[PowerEntry] = Field([], description="Variable powers")


class RefuteRequest(BaseModel):
    dim: int = Field(..., ge=1, description="Dimension")
    inner: bool = Field(False, description="Restrict to inner Hodge numbers")
    terms: list[TermEntry] = Field(..., description="Monomials")


class WitnessEntry(BaseModel):
    p: int
    q: int
    value: int


class RefuteResponse(BaseModel):
    modulus: int = Field(..., description="Modulus not dividing f(z)")
    witness: list[WitnessEntry] = Field(..., description="Point z")
    witness_value: str = Field(..., description="f(z)")
    diamond_value: str = Field(..., description="f at the constructed diamond")
    recipe: str = Field(..., description="Recipe in text format")


class ErrorResponse(BaseModel):
    """Model for errors"""
    detail: str = Field(..., description="Error description")

