from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..config import DEFAULT_KMAX, FAMILY_RETRIES, LOG_LEVEL


def flags(*names: str) -> dict:
    """Command-line spellings of a field, used when building the parser."""
    return {"flags": list(names)}


# Options shared by every command
class GlobalOptions(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_n: Optional[int] = Field(None, ge=1, description="Vertex limit for products and exact searches")
    max_k: Optional[int] = Field(None, ge=0, description="Dimension ceiling for exact searches")
    log_level: str = Field(LOG_LEVEL, description="Log level (DEBUG, INFO, WARNING, ERROR)")

    @field_validator("log_level")
    @classmethod
    def known_level(cls, value: str) -> str:
        level = value.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value!r}")
        return level


# Graph commands
class GenRequest(BaseModel):
    """Request model for the gen command."""

    kind: Optional[Literal["complete", "path", "cycle", "star", "hypercube", "hamming", "crown"]] = Field(
        None, description="Generator kind")
    q: Optional[int] = Field(None, description="Clique or alphabet size")
    n: Optional[int] = Field(None, description="Vertex or leaf count")
    d: Optional[int] = Field(None, description="Dimension")
    expr: Optional[str] = Field(None, description="Product expression, e.g. strong(C4,P3)")
    output: Optional[str] = Field(None, description="Output file (stdout when omitted)",
                                  json_schema_extra=flags("-o", "--output"))

    @model_validator(mode="after")
    def one_source(self):
        if (self.kind is None) == (self.expr is None):
            raise ValueError("give exactly one of --kind and --expr")
        return self


class VerifyRequest(BaseModel):
    """Request model for the verify command."""

    graph: str = Field(..., description="Graph file", json_schema_extra=flags("-g", "--graph"))
    rep: str = Field(..., description="Representation file", json_schema_extra=flags("-r", "--rep"))


# Construction commands
class ConstructRequest(BaseModel):
    """Request model for the construct command."""

    thm: Literal["1", "2", "3", "4", "6", "7", "8", "9", "obs7"] = Field(..., description="Construction to run")
    factors: Optional[List[str]] = Field(None, description="Factor expressions (--thm 1, 2, 3, 7, 9)")
    factor_reps: Optional[List[str]] = Field(None, description="Representation file per factor")
    q: Optional[int] = Field(None, description="Alphabet size (--thm 6)")
    d: Optional[int] = Field(None, description="Dimension (--thm 4, 6)")
    qs: Optional[List[int]] = Field(None, description="Clique sizes (--thm 8)")
    n: Optional[int] = Field(None, description="Leaf count (--thm obs7)")
    mode: Literal["box", "cube"] = Field("box", description="Representation kind")
    seed: int = Field(0, description="Seed for randomised stages")
    retries: int = Field(FAMILY_RETRIES, ge=1, description="Random retries for set families")
    hypercube_source: Literal["auto", "oracle", "thm4", "star"] = Field(
        "auto", description="Where the hypercube representation comes from")
    output: str = Field(..., description="Certificate directory", json_schema_extra=flags("-o", "--output"))

    @model_validator(mode="after")
    def required_inputs(self):
        needed = {
            "1": ("factors",), "2": ("factors",), "3": ("factors",), "7": ("factors",), "9": ("factors",),
            "4": ("d",), "6": ("q", "d"), "8": ("qs",), "obs7": ("n",),
        }[self.thm]
        missing = [name for name in needed if getattr(self, name) is None]
        if missing:
            raise ValueError(f"construction {self.thm} needs --{', --'.join(m.replace('_', '-') for m in missing)}")
        if self.factor_reps is not None and len(self.factor_reps) != len(self.factors or []):
            raise ValueError("give one --factor-reps file per factor")
        return self


# Oracle commands
class ExactRequest(BaseModel):
    """Request model for the exact command."""

    param: Literal["boxicity", "cubicity", "chromatic", "pdim"] = Field(..., description="Parameter to compute")
    graph: Optional[str] = Field(None, description="Graph file", json_schema_extra=flags("-g", "--graph"))
    expr: Optional[str] = Field(None, description="Product expression instead of a graph file")
    poset: Optional[str] = Field(None, description="Poset file (pdim)", json_schema_extra=flags("-p", "--poset"))
    kmax: Optional[int] = Field(None, ge=0, description=f"Dimension ceiling (default {DEFAULT_KMAX})")
    output: Optional[str] = Field(None, description="Write the witness to this file",
                                  json_schema_extra=flags("-o", "--output"))

    @model_validator(mode="after")
    def matching_input(self):
        if self.param == "pdim":
            if self.poset is None:
                raise ValueError("pdim needs --poset")
        elif (self.graph is None) == (self.expr is None):
            raise ValueError("give exactly one of --graph and --expr")
        return self


# Bound commands
class BoundRequest(BaseModel):
    """Request model for the bound command."""

    expr: str = Field(..., description="Product expression, e.g. cartesian(K3,K3)")
    param: Literal["boxicity", "cubicity"] = Field("boxicity", description="Parameter to bound")


class TableRequest(BaseModel):
    """Request model for the table command."""

    seed: str = Field(..., description="Seed graph expression, e.g. K2")
    kind: Literal["strong", "cartesian", "direct"] = Field(..., description="Power kind")
    param: Literal["boxicity", "cubicity"] = Field("boxicity", description="Parameter to bound")
    dmax: int = Field(..., ge=1, description="Largest exponent")
    output: Optional[str] = Field(None, description="Output file (stdout when omitted)",
                                  json_schema_extra=flags("-o", "--output"))


# Family commands
class FamilyRequest(BaseModel):
    """Request model for the family command."""

    n: Optional[int] = Field(None, ge=1, le=64, description="Universe size (default ceil(10 log q))")
    q: Optional[int] = Field(None, ge=1, description="Number of sets")
    seed: int = Field(0, description="Base seed")
    retries: int = Field(FAMILY_RETRIES, ge=1, description="Random attempts before the exhaustive fallback")
    check: Optional[str] = Field(None, description="Check an existing family file instead of building one")
    output: Optional[str] = Field(None, description="Output file (stdout when omitted)",
                                  json_schema_extra=flags("-o", "--output"))

    @model_validator(mode="after")
    def build_or_check(self):
        if self.check is None and self.q is None:
            raise ValueError("give --q to build a family or --check to verify one")
        return self
