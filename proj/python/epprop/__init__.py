# Copyright 2026 The epprop Authors
# SPDX-License-Identifier: Apache-2.0

"""Embedding propagation and label propagation for few-shot episodes."""

from ._epprop import (
    UNLABELED,
    EmbeddingSet,
    Episode,
    Error,
    EvalConfig,
    EvalReport,
    GraphConfig,
    adjacency,
    ci95,
    compactness_metrics,
    evaluate,
    gaussian_clusters,
    interpolation_curve,
    label_propagation_scores,
    load_embeddings,
    normalized_laplacian,
    pairwise_sq_distances,
    predict,
    propagate,
    propagator,
    prototypical_scores,
    run_episode,
    sample_episode,
    save_embeddings,
    softmax,
    ssl_predict,
    two_moons,
)

__version__ = "0.1.0"
