"""Pydantic request/response models and JSON <-> core-object conversion.

Wire formats:
  field      {"p": 2, "vars": ["t", "u"]}
  form       {"p": 2, "vars": [...], "degree": n, "coeffs": {"1,2": "<ratfunc>"}}
  symbols    {"p": 2, "vars": [...], "terms": [{"coeff": 1, "entries": ["t", "t+u"]}]}
  ring       {"family": "truncated" | "modpk" | "square_zero_2vars", "p": 2, "n": 3}
  group      {"invariant_factors": [2, 4], "free_rank": 0}
  witt       components are residues (e = 1) or [c0, c1] pairs (e = 2)
"""

from __future__ import annotations

from typing import Literal, Optional, Union

from pydantic import BaseModel, Field, field_validator

from ..arith import FunctionField
from ..forms import DiffForm
from ..milnor import MilnorSymbolSum

SCHEMA_VERSION = 1


class FieldSpec(BaseModel):
    p: int
    vars: list[str] = Field(min_length=1, max_length=4)

    def to_field(self) -> FunctionField:
        return FunctionField(self.p, tuple(self.vars))


class FormPayload(BaseModel):
    p: int
    vars: list[str]
    degree: int
    coeffs: dict[str, str] = Field(default_factory=dict)

    @field_validator("degree")
    @classmethod
    def _degree_ok(cls, v):
        if v < 0:
            raise ValueError("degree must be >= 0")
        return v

    def to_form(self, field: Optional[FunctionField] = None) -> DiffForm:
        fld = field if field is not None else FunctionField(self.p, tuple(self.vars))
        if (fld.p, fld.vars) != (self.p, tuple(self.vars)):
            raise ValueError(
                f"form is over F_{self.p}({','.join(self.vars)}) but the request "
                f"field is F_{fld.p}({','.join(fld.vars)})"
            )
        coeffs = {}
        for key, text in self.coeffs.items():
            s = tuple(int(k) for k in key.split(",") if k.strip()) if key else ()
            coeffs[s] = fld.parse(text)
        return DiffForm(fld, self.degree, coeffs)

    @classmethod
    def from_form(cls, form: DiffForm) -> "FormPayload":
        fld = form.field
        coeffs = {
            ",".join(str(i) for i in s): fld.ratfunc_str(x)
            for s, x in sorted(form.coeffs.items())
        }
        return cls(p=fld.p, vars=list(fld.vars), degree=form.degree, coeffs=coeffs)


class SymbolTerm(BaseModel):
    coeff: int = 1
    entries: list[str]


class SymbolPayload(BaseModel):
    p: int
    vars: list[str]
    terms: list[SymbolTerm] = Field(default_factory=list)

    def to_symbols(self, field: Optional[FunctionField] = None) -> MilnorSymbolSum:
        fld = field if field is not None else FunctionField(self.p, tuple(self.vars))
        if not self.terms:
            raise ValueError("empty symbol sum has no degree")
        degree = len(self.terms[0].entries)
        terms = []
        for term in self.terms:
            terms.append((term.coeff, tuple(fld.parse(e) for e in term.entries)))
        return MilnorSymbolSum(fld, degree, terms)

    @classmethod
    def from_symbols(cls, sigma: MilnorSymbolSum) -> "SymbolPayload":
        fld = sigma.field
        return cls(
            p=fld.p,
            vars=list(fld.vars),
            terms=[
                SymbolTerm(coeff=c, entries=[fld.ratfunc_str(x) for x in entries])
                for c, entries in sigma.terms
            ],
        )


class RingDescriptor(BaseModel):
    family: Literal["truncated", "modpk", "square_zero_2vars"]
    p: int
    n: int


class GroupPayload(BaseModel):
    invariant_factors: list[int]
    free_rank: int = 0


# -- requests / responses ----------------------------------------------------


class OmegaRequest(BaseModel):
    ring: RingDescriptor
    n: int = 1
    k_max: int = 3


class OmegaResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    group: GroupPayload
    oracle_match: Optional[bool] = None  # standard-presentation oracle, n = 1 only


class NfRequest(BaseModel):
    field: FieldSpec
    form: FormPayload


class NfResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    normal_form: FormPayload
    witness: FormPayload


class NuCheckRequest(BaseModel):
    field: FieldSpec
    form: FormPayload


class NuCheckResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    in_nu: bool
    as_class: FormPayload = Field(serialization_alias="class")


class DsymRequest(BaseModel):
    symbols: SymbolPayload


class DsymResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    form: FormPayload


class TraceEntry(BaseModel):
    s: list[int]
    route: str
    c: Optional[str] = None
    note: str = ""


class DecomposeRequest(BaseModel):
    field: FieldSpec
    form: FormPayload


class DecomposeResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    symbols: SymbolPayload
    residual: FormPayload
    verified: bool
    trace: list[TraceEntry] = Field(default_factory=list)


WittComponent = Union[int, list[int]]


class WittRequest(BaseModel):
    p: int
    i: int
    e: int = 1
    op: Literal["add", "mul", "sub", "frobenius", "verschiebung"]
    a: list[WittComponent]
    b: Optional[list[WittComponent]] = None


class WittResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    result: list[WittComponent]


class HsymRequest(BaseModel):
    q: int
    i: int = 1
    n: int = 1


class HsymResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    group: GroupPayload
    oracle_match: Optional[bool] = None  # enumeration oracle, n = 1 only


class NuBasisRequest(BaseModel):
    field: FieldSpec
    degree: int = 1
    degree_bound: int
    max_den_factors: int = 1


class NuBasisResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    dimension: int
    basis: list[FormPayload]


class SolveASRequest(BaseModel):
    field: FieldSpec
    g: str
    degree_bound: int


class SolveASResponse(BaseModel):
    schema_version: int = SCHEMA_VERSION
    solution: Optional[str] = None


class ErrorBody(BaseModel):
    schema_version: int = SCHEMA_VERSION
    error: str
    message: str


class CommandResult(BaseModel):
    """CLI envelope: status error implies a nonzero process exit code."""

    schema_version: int = SCHEMA_VERSION
    status: Literal["ok", "error"]
    payload: dict
    diagnostics: list[str] = Field(default_factory=list)
