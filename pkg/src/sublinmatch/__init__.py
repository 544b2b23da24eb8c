"""Sublinear-probe matching oracles and a dynamic matching-size maintainer."""

from .config import DESK, PAPER, Preset, get_preset
from .graph import DynamicGraph, EdgePermutation, Membership, QueryGraph, UpdateStream
from .exact import (gmm_reference, max_matching_exact, static_approx_matching,
                    count_disjoint_short_aug_paths)
from .lca import build_gmm_oracle, build_induced_lowdeg_oracle
from .induced import preprocess, InducedMatchOracle
from .boost import augment
from .near_optimal import near_optimal_oracle, estimate_size
from .dynamic import DynamicMatcher, Baseline

__all__ = [
    "DESK", "PAPER", "Preset", "get_preset",
    "DynamicGraph", "EdgePermutation", "Membership", "QueryGraph", "UpdateStream",
    "gmm_reference", "max_matching_exact", "static_approx_matching",
    "count_disjoint_short_aug_paths",
    "build_gmm_oracle", "build_induced_lowdeg_oracle",
    "preprocess", "InducedMatchOracle", "augment",
    "near_optimal_oracle", "estimate_size",
    "DynamicMatcher", "Baseline",
]
