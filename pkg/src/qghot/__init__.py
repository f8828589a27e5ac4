"""qghot: spectra and hot spots of the standard Laplacian on metric graphs."""

__version__ = "0.1.0"

from .graphs import (  # noqa: F401
    DiscreteGraph,
    Edge,
    GraphPoint,
    MetricGraph,
    Subgraph,
    betti,
    boundary,
    bridges,
    build_graph,
    doubly_connected_part,
    load_graph,
    save_graph,
    suppress_degree_two,
    surgery,
)
from .geometry import diameter, distance  # noqa: F401
from .spectral import (  # noqa: F401
    EdgeTrace,
    EigenFunction,
    EigenPair,
    eigenbasis,
    eigenvalue_list,
    eigenvalues,
    mu2_pair,
    rayleigh_quotient,
    secular_matrix,
)
from .fem import fem_solve  # noqa: F401
from .hotspots import (  # noqa: F401
    HotspotReport,
    combine,
    extrema_distance_ratio,
    extrema_single,
    hotspot_sets,
    star_diameter_check,
    verify_location,
    verify_no_disconnect,
)
from .catalog import (  # noqa: F401
    build_example,
    krpamm_tree,
    limit_compare,
    standard_corpus,
    straighten_maxima,
    placement_limit_families,
    topology_placement,
)
