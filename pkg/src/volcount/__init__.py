"""Certified counting of closed manifolds assembled from glued blocks.

The pipeline: exact arithmetic over Q and Q(sqrt(2)), local invariants of
diagonal quadratic forms, six-member form families with pairwise
non-commensurability certificates, index-k subgroup enumeration in the rank-2
free group, decorated Schreier graphs with a common-cover decision, and
graph-of-spaces assembly with a volume-budget counting bound.
"""

from .assembler import (
    BuildingBlock,
    CountReport,
    ManifoldDescriptor,
    Parcel,
    TraceResult,
    assemble,
    commensurability_verdict,
    count_lower_bound,
    default_parcel,
    descriptor_from_json,
    descriptor_to_json,
    emit_descriptors,
    trace_word,
    volume_bound,
)
from .decorated_graphs import (
    DecoratedGraph,
    check_cover,
    fiber_product,
    from_subgroup,
    graph_from_text,
    graph_to_text,
    has_common_decorated_cover,
    is_isomorphic,
)
from .exact_arith import (
    QSqrt2,
    SQRT2,
    factor_int,
    is_prime,
    legendre_symbol,
    padic_valuation,
    sqrt_mod,
    squarefree_part,
)
from .form_families import (
    NonCommensurabilityCertificate,
    QuadraticForm,
    make_q,
    make_r,
    noncommensurability_certificate,
    search_primes_anisotropic,
    search_primes_isotropic,
)
from .free_groups import (
    SubgroupTable,
    Word,
    distinguishing_word,
    enumerate_subgroups,
    hall_count,
)
from .local_invariants import (
    DYADIC,
    REAL,
    Place,
    hasse_witt,
    hilbert,
    locally_equivalent,
    odd_place,
)

__version__ = "0.1.0"
