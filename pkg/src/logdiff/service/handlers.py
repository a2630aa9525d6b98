"""Request-model to response-model handlers shared by the HTTP service and
the CLI.  Domain failures raise DomainError; malformed payloads raise
pydantic/ValueError and are the caller's usage errors."""

from __future__ import annotations

from .. import arith, forms, milnor, presentation, truncation, witt
from . import schemas


class DomainError(Exception):
    """A well-formed request whose mathematics refuses: carries a code."""

    def __init__(self, code, message):
        super().__init__(message)
        self.code = code


_DOMAIN_EXCEPTIONS = (
    milnor.NotInNu,
    milnor.PreconditionFailed,
    milnor.UnsupportedInstance,
    milnor.ZeroEntry,
    witt.OutOfSupportedRange,
    witt.MismatchedParameters,
    presentation.NotLocal,
    forms.ZeroArgument,
    forms.DegreeOverflow,
    forms.ZeroTheta,
    forms.NotAutomorphism,
    arith.DivisionByZero,
    arith.ZeroPolynomial,
)


def _domain(fn):
    def wrapped(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except _DOMAIN_EXCEPTIONS as exc:
            raise DomainError(type(exc).__name__, str(exc)) from exc
        except milnor.InternalAssertionFailed as exc:
            raise DomainError("InternalAssertionFailed", str(exc)) from exc

    wrapped.__name__ = fn.__name__
    wrapped.__doc__ = fn.__doc__
    return wrapped


@_domain
def handle_omega(req: schemas.OmegaRequest) -> schemas.OmegaResponse:
    ring = presentation.FiniteLocalRing.from_descriptor(req.ring.model_dump())
    group = presentation.omega_n_symbolic(ring, req.n, req.k_max)
    oracle_match = None
    if req.n == 1:
        oracle_match = group == presentation.omega1_standard(ring)
    return schemas.OmegaResponse(
        group=schemas.GroupPayload(**group.to_json()), oracle_match=oracle_match
    )


@_domain
def handle_nf(req: schemas.NfRequest) -> schemas.NfResponse:
    fld = req.field.to_field()
    form = req.form.to_form(fld)
    nf, witness = forms.normal_form_with_witness(form)
    return schemas.NfResponse(
        normal_form=schemas.FormPayload.from_form(nf),
        witness=schemas.FormPayload.from_form(witness),
    )


@_domain
def handle_nu_check(req: schemas.NuCheckRequest) -> schemas.NuCheckResponse:
    fld = req.field.to_field()
    form = req.form.to_form(fld)
    cls = forms.artin_schreier_class(form)
    return schemas.NuCheckResponse(
        in_nu=cls.is_zero, as_class=schemas.FormPayload.from_form(cls)
    )


@_domain
def handle_dsym(req: schemas.DsymRequest) -> schemas.DsymResponse:
    sigma = req.symbols.to_symbols()
    return schemas.DsymResponse(form=schemas.FormPayload.from_form(milnor.d_k(sigma)))


@_domain
def handle_decompose(req: schemas.DecomposeRequest) -> schemas.DecomposeResponse:
    fld = req.field.to_field()
    form = req.form.to_form(fld)
    result = milnor.kato_decompose(form)
    # never report a decomposition whose re-verification fails
    if milnor.d_k(result.symbols) + result.residual != form:
        raise milnor.InternalAssertionFailed("decomposition re-verification failed")
    return schemas.DecomposeResponse(
        symbols=schemas.SymbolPayload.from_symbols(result.symbols),
        residual=schemas.FormPayload.from_form(result.residual),
        verified=True,
        trace=[
            schemas.TraceEntry(s=list(st.s), route=st.route, c=st.c, note=st.note)
            for st in result.trace
        ],
    )


def _decode_component(gf, c):
    if isinstance(c, int):
        return gf.from_int(c)
    comp = tuple(int(x) % gf.p for x in c)
    if len(comp) != gf.e:
        raise ValueError("component has wrong extension length")
    return comp


def _encode_component(gf, c):
    if gf.e == 1:
        return c[0]
    return list(c)


@_domain
def handle_witt(req: schemas.WittRequest) -> schemas.WittResponse:
    ring = witt.WittRing(req.p, req.e, req.i)
    gf = ring.gf
    a = ring.vector(tuple(_decode_component(gf, c) for c in req.a))
    if req.op in ("add", "mul", "sub"):
        if req.b is None:
            raise ValueError(f"operation {req.op} needs a second operand")
        b = ring.vector(tuple(_decode_component(gf, c) for c in req.b))
        out = {"add": a + b, "mul": a * b, "sub": a - b}[req.op]
    elif req.op == "frobenius":
        out = witt.witt_frobenius(a)
    else:
        out = witt.witt_verschiebung(a)
    return schemas.WittResponse(result=[_encode_component(gf, c) for c in out.comps])


@_domain
def handle_hsym(req: schemas.HsymRequest) -> schemas.HsymResponse:
    group = witt.hsym_group(req.q, req.i, req.n)
    oracle_match = None
    if req.n == 1:
        oracle_match = group == witt.artin_schreier_witt_cokernel(req.q, req.i)
    return schemas.HsymResponse(
        group=schemas.GroupPayload(**group.to_json()), oracle_match=oracle_match
    )


@_domain
def handle_nu_basis(req: schemas.NuBasisRequest) -> schemas.NuBasisResponse:
    fld = req.field.to_field()
    spec = truncation.TruncationSpec(req.degree_bound, req.max_den_factors)
    basis = truncation.nu_basis_bounded(fld, req.degree, spec)
    return schemas.NuBasisResponse(
        dimension=len(basis), basis=[schemas.FormPayload.from_form(b) for b in basis]
    )


@_domain
def handle_solve_as(req: schemas.SolveASRequest) -> schemas.SolveASResponse:
    fld = req.field.to_field()
    g = fld.parse(req.g)
    spec = truncation.TruncationSpec(req.degree_bound)
    sol = truncation.solve_artin_schreier_bounded(fld, g, spec)
    return schemas.SolveASResponse(
        solution=None if sol is None else fld.ratfunc_str(sol)
    )


HANDLERS = {
    "omega": (schemas.OmegaRequest, handle_omega),
    "nf": (schemas.NfRequest, handle_nf),
    "nu-check": (schemas.NuCheckRequest, handle_nu_check),
    "dsym": (schemas.DsymRequest, handle_dsym),
    "decompose": (schemas.DecomposeRequest, handle_decompose),
    "witt": (schemas.WittRequest, handle_witt),
    "hsym": (schemas.HsymRequest, handle_hsym),
    "nu-basis": (schemas.NuBasisRequest, handle_nu_basis),
    "solve-as": (schemas.SolveASRequest, handle_solve_as),
}
