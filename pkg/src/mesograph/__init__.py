"""Community-structure analysis toolkit.

Generate or load a host graph, simulate crawling strategies against it,
detect communities with label propagation or local modularity ascent,
abstract the community meta-network, and measure mesoscopic statistics.
"""

__version__ = "0.1.0"

from .community import (
    DetectionRun,
    FncaConfig,
    LpaConfig,
    detect_fnca,
    detect_lpa,
    drop_singletons,
    modularity,
    run_fnca,
    run_lpa,
    split_contiguous,
)
from .compare import (
    SimilarityReport,
    SizeDistribution,
    binary_jaccard,
    kl_divergence,
    match_structures,
    similarity_heatmap,
    size_divergence_report,
)
from .graph import (
    CommunityStructure,
    Graph,
    anonymize,
    anonymize_ids,
    build_graph,
    load_community_structure,
    load_edge_list,
    write_community_structure,
    write_edge_list,
)
from .metanet import (
    MetaNetwork,
    build_meta_network,
    export_meta_network,
    load_meta_network,
    strength,
    summarize_meta_network,
)
from .powerlaw import PowerLawFit, fit_power_law, sample_discrete_power_law
from .sampling import (
    BfsSampleSpec,
    SampleResult,
    UniformSampleSpec,
    sample_bfs,
    sample_summary,
    sample_uniform,
)
from .stats import (
    ClusteringReport,
    DensityMap,
    HopPlot,
    OutlierReport,
    clustering,
    degree_distribution,
    detect_outliers,
    edge_density_map,
    hop_plot,
    link_fraction,
    shortest_path_distribution,
    size_distribution,
    weight_strength_distributions,
)
from .synth import (
    PlantedPartitionSpec,
    ScaleFreeSpec,
    generate_planted_partition,
    generate_scale_free,
)
