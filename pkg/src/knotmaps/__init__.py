"""knotmaps: knot and link diagrams as rooted 4-regular planar maps.

The package provides exact counting and exhaustive enumeration of rooted
link shadows, uniform random generation through blossom trees with
rejection filtering to knot classes, tangle composition and attachment
surgery, Reidemeister simplification with HOMFLY-polynomial knot
classification, and a CLI for running the sampling experiments.
"""

from .diagram import (
    BLANK,
    NEGATIVE,
    POSITIVE,
    AutomorphismCount,
    CanonicalCode,
    Crossing,
    Diagram,
    automorphism_count,
    build_diagram,
    canonical_code,
    dual,
    faces,
    is_knot,
    is_prime,
    is_reduced,
    is_two_leg_prime,
    link_components,
    mirror,
    with_root,
)
from .kdt import parse, parse_records, serialize, serialize_records
from .maps import PlanarMap
from .tangles import (
    Tangle,
    build_tangle,
    close_two_leg,
    compose_mu,
    connect_sum,
    cyclic_compose,
    delete_crossing_to_tangle,
    remove_edge_to_tangle,
    strand_colors,
    two_leg_form,
)

__version__ = "0.1.0"
