"""Exact constructions and deciders for fixed-point and selection
properties of finite posets and lattices under the bi-domination order."""

from .convexity import (
    ConvexSet,
    CPoset,
    Pregap,
    bidom_compare,
    bidom_leq,
    cbar_retraction,
    convex_envelope,
    enumerate_convex_poset,
    fixpointfree_from_gap,
    phi_embedding_check,
    pregap,
    separators,
    special_pregap,
)
from .core import (
    Cones,
    LexSum,
    MonotoneMap,
    Poset,
    canonical_form,
    cones,
    direct_product,
    dual,
    lexicographic_sum,
    max_antichain,
    poset_from_covers,
    width,
)
from .deciders import (
    MultiMap,
    Verdict,
    decide_cfpp,
    decide_fpp,
    decide_fpp_cposet,
    decide_rfpp,
    dismantle,
    irreducibles,
    retract_search,
)
from .errors import OrdfixError
from .lattices import (
    CLLattice,
    Congruence,
    KPair,
    Lattice,
    as_lattice,
    boolean_embedding_search,
    congruences,
    convex_sublattices,
    embedding_from_sequences,
    find_embedding_sequences,
    ideals_filters,
    initial_segments,
    k_pairs,
    quotient,
    tarski_fixpoint,
)
from .selection import (
    SelectionMap,
    chain_selection,
    decide_csp,
    lexsum_selection,
    min_selection,
    transfer_selection,
    verify_selection,
    weaving_selection,
)
from .suites import SUITES, SuiteReport, verify_suite
from .zoo import (
    NamedExample,
    enumerate_lattices,
    enumerate_posets,
    generate,
    random_structures,
)

__version__ = "0.1.0"
