from .dtm import DocTermMatrix, build_dtm, cluster_terms, tfidf_matrix
from .lda import LdaConfig, LdaModel, lda_fit
from .kmeans import KMeansModel, kmeans_fit, wcss_of
from .density import (
    NOISE,
    DensityTopicModel,
    density_topics,
    k_distance_knee,
    random_projection,
    scaled_min_cluster_size,
)
from .temporal import TemporalTopicMatrix, temporal_weights

__all__ = [
    "DocTermMatrix", "build_dtm", "cluster_terms", "tfidf_matrix",
    "LdaConfig", "LdaModel", "lda_fit",
    "KMeansModel", "kmeans_fit", "wcss_of",
    "NOISE", "DensityTopicModel", "density_topics", "k_distance_knee",
    "random_projection", "scaled_min_cluster_size",
    "TemporalTopicMatrix", "temporal_weights",
]
