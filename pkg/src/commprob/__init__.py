"""Exact higher commuting probabilities and higher class numbers of finite groups."""

from .catalog import (
    CatalogSpec,
    build,
    build_heisenberg,
    build_jordan_semidirect,
    parse_spec,
    small_catalog,
)
from .engine import (
    LoopGroupoidCount,
    ProbResult,
    commuting_probability,
    commuting_tuple_count,
    higher_class_number,
    kappa2_class_formula,
    kappa3_pairs_formula,
    loop_groupoid_simple_count,
    orbit_count_direct,
)
from .errors import (
    AbelianInput,
    BudgetExceeded,
    CheckFailed,
    ClosureExceedsCap,
    CommProbError,
    DomainError,
    HypothesisNotMet,
    InvalidParameters,
    NotAGroup,
    NotClass2ExponentP,
    NotNormal,
)
from .formulas import (
    BoundReport,
    CyclicIndexData,
    GapReport,
    PrimeIndexReport,
    check_sharp_bound,
    cyclic_index_comm_count,
    cyclic_index_probability,
    deficit_lower_bound,
    dihedral_probability,
    expcentral_bound,
    find_cyclic_index_data,
    gap_p3,
    metacyclic_probability,
    one_step_bound,
    order_pq_probability,
    pgroup_ladder,
    pgroup_window,
    prime_index_equivalences,
    recover_alpha,
    sharp_bound,
    two_block_bounds,
    universal_bound,
)
from .groups import (
    ConjugacyData,
    FiniteGroup,
    SubgroupView,
    direct_product,
    from_cayley_table,
    from_permutation_generators,
    load_group_file,
)
from .symplectic import (
    AsymptoticReport,
    FqField,
    SeriesData,
    asymptotic_check,
    heisenberg_probability,
    identify_heisenberg,
    isotropic_subspace_count,
    isotropic_tuples_closed,
    isotropic_tuples_enumerate,
    isotropic_tuples_recursive,
    low_rank_closed,
    max_abelian_constants,
    rank1_identify,
    series_data,
)
from .tensor import (
    CommutatorTensor,
    HeisenbergTypeReport,
    SymplecticReductionReport,
    extract_tensor,
    full_contraction_check,
    full_contraction_group_check,
    heisenberg_type_report,
    isotropic_count_tensor,
    isotropic_span_count,
    p2_rank_distribution,
    verify_symplectic_reduction,
)

__version__ = "0.1.0"
