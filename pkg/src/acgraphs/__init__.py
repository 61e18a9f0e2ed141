"""Andrews-Curtis graphs of finite groups.

Exhaustive component computation for (relativised) AC-graphs, structural
checks (N-Frattini subgroup, semisimple decomposition, normal rank), and the
product replacement sampler.
"""
__version__ = "0.1.0"

from .group import (  # noqa: E402
    Automorphism,
    FiniteGroup,
    Homomorphism,
    OperatorSet,
    abelianization,
    build_abelian,
    build_from_permutations,
    build_from_table,
    commutator_subgroup,
    d_normal,
    direct_product,
    normal_closure,
    quotient,
    subgroup_closure,
)
from .acgraph import (  # noqa: E402
    Certificate,
    ComponentTable,
    MoveAlphabet,
    MoveSpec,
    apply_move,
    components,
    enumerate_nk,
    equivalent,
    is_n_generating,
    neighbors,
)

__all__ = [
    "Automorphism", "Certificate", "ComponentTable", "FiniteGroup", "Homomorphism", "MoveAlphabet", "MoveSpec",
    "OperatorSet", "abelianization", "apply_move", "build_abelian", "build_from_permutations", "build_from_table",
    "commutator_subgroup", "components", "d_normal", "direct_product", "enumerate_nk", "equivalent",
    "is_n_generating", "neighbors", "normal_closure", "quotient", "subgroup_closure",
]
