"""Homomorphism distortion distances and embeddings for vertex-attributed graphs."""

from .distortion import (
    DistortionEmbedding,
    SampledEmbedding,
    SampledEmbeddingConfig,
    distinguish,
    distortion_to_pattern,
    embed,
    embed_dataset,
    hom_count_vector,
    normalize,
    pairwise_distance,
    sampled_embed,
)
from .errors import (
    BudgetExceeded,
    ChecksumMismatch,
    ConfigMismatch,
    Graph6Error,
    GuardExceeded,
    HomdistError,
    NormalizationError,
)
from .features import (
    AttributedFamily,
    FeatureConfig,
    attribute_family,
    compute_features,
    resolve_config,
    rwpe,
    spe,
)
from .graphs import (
    AttributedGraph,
    Graph,
    Permutation,
    apply_permutation,
    parse_graph6,
    write_graph6,
)
from .hom_engine import (
    CostMatrix,
    HomSample,
    cost_matrix,
    count_homs_cycle,
    count_homs_tree,
    min_bottleneck_hom,
    sample_homs,
    sample_pattern,
    substream,
)
from .oracle import (
    Homomorphism,
    are_isomorphic_bruteforce,
    distortion_bidirectional_bruteforce,
    enumerate_homs_bruteforce,
)
from .patterns import PatternFamily, gen_cycles, gen_trees, gen_trees_range

__version__ = "0.1.0"
