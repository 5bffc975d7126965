"""Finite racks and quandles: construction, covering extensions by constant
cocycles, congruence classification, identity transfer to covers, and
simple-connectedness via coset enumeration in the adjoint group."""

from . import adjoint, analysis, cli, congruence, core, cover, permgroup, terms
from ._kernels import backend
from .adjoint import (
    INDETERMINATE,
    Presentation,
    adj0_order,
    adjoint_presentation,
    is_simply_connected,
    same_dis_covers,
    todd_coxeter,
)
from .analysis import (
    LevelExceeded,
    Levels,
    StructureReport,
    central_cover_criterion,
    is_abelian_cover,
    is_central,
    is_connected,
    is_faithful,
    is_homogeneous,
    is_medial,
    is_normal_extension,
    is_principal,
    is_strongly_abelian,
    levels,
    nilpotency,
    normal_extension_oracle,
    report,
    search_cover,
    strongly_abelian_oracle,
)
from .congruence import (
    all_congruences,
    cN,
    cayley_kernel,
    congruence_generated,
    ip,
    is_congruence,
    is_uniform,
    orbit_congruence,
    orbit_partition,
    quotient,
    sg,
    sigma,
)
from .core import (
    CosetQuandleSpec,
    GroupTable,
    LeftQuasigroup,
    affine,
    automorphisms,
    coset_cover_pair,
    coset_quandle,
    cyclic_rack,
    direct_product,
    fixture,
    from_table,
    is_isomorphic,
    isomorphisms,
    loads_table,
    permutation_rack,
    projection_quandle,
    table_from_json,
    table_to_json,
)
from .cover import (
    ConstantCocycle,
    CoverStructure,
    abelian_cocycle_space,
    are_cohomologous,
    cocycle_from_json,
    cocycle_to_json,
    extend,
    extract_cocycle,
    is_covering_hom,
    is_quandle_cocycle,
    is_rack_cocycle,
    isomorphic_as_covers,
)
from .errors import (
    BadShape,
    BlocksNotPreserved,
    CapExceeded,
    CriterionNotApplicable,
    FiberMismatch,
    NotACongruence,
    NotAutomorphism,
    NotConnected,
    NotHomomorphism,
    NotLeftQuasigroup,
    NotNormal,
    NotSurjective,
    NotUnderCayley,
    NotUniform,
    PreconditionFailed,
    RackError,
    RightmostMismatch,
    SubgroupNotFixed,
    TermSyntaxError,
    UnboundVariable,
    UnknownIdentity,
)
from .partition import Partition
from .permgroup import (
    PermGroup,
    Permutation,
    block_stabilizer,
    dis,
    dis_rel,
    induced_action,
    kernel_subgroup,
    lmlt,
    translations,
)
from .terms import (
    Identity,
    LDiv,
    Mul,
    ThetaExpr,
    Var,
    builtin,
    counterexample,
    eval_term,
    eval_theta,
    holds,
    is_inner,
    parse,
    parse_identity,
    sat_in_cover,
    theta_expr,
    variables,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
