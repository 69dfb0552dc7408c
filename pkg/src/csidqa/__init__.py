"""Quality metrics for channel-state-information datasets.

Measures how similar two CSI datasets are (mean distance, MMD, 1-NN
two-sample accuracy, exact Wasserstein distance), how diverse one dataset
is (histogram entropy, mean pairwise distance, kernel log-determinant,
compressed-size of the mean feature), and uses similarity rankings to pick
augmentation candidates. A geometric multipath generator produces
controlled synthetic corpora.
"""

from .dataset import (ChannelSample, CsidFormatError, Dataset, normalize_max_abs,
                      read_dataset, split_dataset, write_dataset)
from .distances import (DistanceKind, DistanceMatrix, dist_ecs, dist_ecs_matrix,
                        dist_euclidean, dist_gmc, distance_matrix)
from .diversity import (DPP, Compression, DistanceBased, DiversityMeasure, Entropy,
                        dataset_diversity, diversity_compression, diversity_distance,
                        diversity_dpp, diversity_entropy)
from .features import (DegenerateInputError, FeatureBundle, FeatureKind, extract_aps,
                       extract_doppler, extract_features, extract_pdp, hoyer_sparsity)
from .jpeg import encode_grayscale_jpeg
from .similarity import (MMD, NNCA, MeanDistance, SimilarityMeasure, TransportPlan,
                         Wasserstein, dataset_difference, mean_distance,
                         median_heuristic_bandwidth, mmd, nnca, wasserstein)
from .synth import (PathRanges, PathSet, SynthConfig, delay_window_corpus, draw_paths,
                    generate_dataset, generate_sample, random_ranges_pool,
                    range_grid_corpus, render_sample, rms_delay_spread, wide_ranges)
from .transport import solve_uniform_transport
from .workflow import (AggregationRule, Max, Min, QualityReport, SelectionResult,
                       WeightedAverage, aggregate, augment_select, diversity_report,
                       equal_weights, normalize_scores, replay_diversity_report,
                       replay_similarity_report, similarity_report, threshold_select)

__version__ = "0.1.0"
