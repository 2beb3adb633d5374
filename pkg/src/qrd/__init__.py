"""Fusion rings, length functions and rapid-decay certification tools."""

__version__ = "0.1.0"

from .fusion import (
    BUILTIN_ROOT_DATA,
    CompactLieDual,
    FamilyError,
    BudgetError,
    FreeGroupDual,
    FusionRing,
    OrthogonalFree,
    RootData,
    SUq2Dual,
    UnitaryFree,
    au_compose,
    au_factorization,
    enumerate_irreps,
    make_ring,
    su2_root_data,
    su3_root_data,
    weyl_dimension,
)
from .lengths import (
    GrowthProfile,
    LengthSpec,
    TripleSet,
    classify_growth,
    dominate_epsilon,
    growth_profile,
    length_table,
    triple_set,
    validate_length,
    weight_length_table,
    word_length_table,
)
from .grouporacle import FreeGroupModel, haagerup_check, measured_rd_constant
from .tlrep import TLRealization
from .transform import (
    BlockElement,
    banach_submult_check,
    conv_block,
    derivation_norm_check,
    fourier_block_norm,
    laff_inequality_check,
    necessary_condition_ratio,
    sobolev_norm,
    tech_ao_grid,
    tech_ao_ratio,
)
