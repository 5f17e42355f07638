"""Trades on the Boolean lattice: algebra, enumeration up to equivalence,
constructions and the Reed-Muller bridge."""

from .anf import ANF, KasamiClass, anf_from_set, degree, kasami_classify, set_from_anf
from .canon import (
    CanonicalForm,
    Transform,
    are_equivalent,
    aut_size,
    automorphisms,
    canonical_form,
    canonical_key,
    group_order,
    orbit_size,
)
from .construct import (
    ParityLegSpan,
    known_simple_spectrum,
    merge_simple,
    minimal_trade,
    spectrum_trade,
    vol3_template,
    vol6_template,
)
from .core import (
    SignedTrade,
    Unitrade,
    block,
    foundation,
    from_tuple_string,
    has_parallel_elements,
    is_degenerate,
    is_trade,
    is_unitrade,
    odd_support,
    product_expand,
    projection,
    reduce,
    restrict,
    shift,
    stats,
    to_tuple_string,
    volume,
)
from .enumeration import (
    ClassTable,
    Enumerator,
    LevelSpec,
    double_count_check,
    enumerate_level,
    parity_audit,
    table_report,
)
from .gf2span import Gf2Basis, affine_rank, affine_span, compress, span_complement
from .split import split_unitrade

__version__ = "0.1.0"
