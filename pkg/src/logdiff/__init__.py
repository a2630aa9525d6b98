"""Exact computational algebra for characteristic-p function fields:
differentials in the dlog basis, Cartier/Artin-Schreier operators, the
logarithmic kernel and its Milnor-symbol decomposition, Witt-vector symbol
groups, and Smith-normal-form presentations of differential modules."""

from .arith import (
    DivisionByZero,
    FunctionField,
    MultiPoly,
    ParseError,
    PrimeField,
    RatFunc,
    ZeroPolynomial,
    factor_univariate,
    frobenius,
    irreducible_polys,
    pth_root,
    ratfunc_arith,
    theta_decompose,
)
from .forms import (
    DegreeOverflow,
    DiffForm,
    NotAutomorphism,
    ThetaComponent,
    ZeroArgument,
    ZeroTheta,
    apply_endomorphism,
    artin_schreier_class,
    contracting_homotopy,
    dlog,
    ext_d,
    inverse_cartier,
    lt_s_membership,
    normal_form_mod_exact,
    normal_form_with_witness,
    nu_membership,
    omega,
    theta_split,
    wedge,
    zero_form,
)
from .milnor import (
    DecompositionResult,
    InternalAssertionFailed,
    MilnorSymbolSum,
    NotInNu,
    PreconditionFailed,
    UnsupportedInstance,
    ZeroEntry,
    d_k,
    dlog_inverse_n1,
    dlog_wedge_search,
    kato_decompose,
    lemma_c_pick,
    proposition_step,
    verify_in_nu,
)
from .presentation import (
    FinAbGroup,
    FiniteLocalRing,
    GroupPresentation,
    NotLocal,
    group_from_presentation,
    omega1_standard,
    omega1_symbolic,
    omega_n_symbolic,
    smith_normal_form,
)
from .truncation import (
    TruncationSpec,
    nu_basis_bounded,
    solve_artin_schreier_bounded,
)
from .witt import (
    GaloisField,
    MismatchedParameters,
    OutOfSupportedRange,
    WittRing,
    WittVector,
    artin_schreier_witt_cokernel,
    ghost_components,
    hsym_group,
    witt_add,
    witt_frobenius,
    witt_mul,
    witt_verschiebung,
)

__version__ = "0.1.0"
