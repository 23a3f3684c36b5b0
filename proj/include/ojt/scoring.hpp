#pragma once

#include "ojt/classifier.hpp"
#include "ojt/dataset.hpp"
#include "ojt/types.hpp"

#include <span>
#include <vector>

namespace ojt {

/// Per-round question-selection scores. For each candidate Q:
///   target_sum[i]     = Σ over targets p of lookahead_uncertainty(p, Q)
///   query_lookahead[i] = lookahead_uncertainty(q, Q)   (empty without q)
struct RoundScores {
    std::vector<double> target_sum;
    std::vector<double> query_lookahead;
};

enum class ScoringEngine { Reference, Parallel };

ScoringEngine engine_from_name(const std::string& name);

/// Literal implementation: one assume/uncertainty/retract round trip per
/// (target, candidate, label). Kept as the testing reference.
RoundScores round_scores_reference(LabeledStore& store,
                                   std::span<const FeaturePoint> candidates,
                                   std::span<const FeaturePoint> targets,
                                   const FeaturePoint* current_query);

/// Fast path: per-target caches of the k nearest committed entries plus an
/// optional precomputed distance matrix; OpenMP over candidates. Each
/// candidate writes only its own slot in a fixed summation order, so results
/// do not depend on the thread count. Requires an empty assumption stack.
RoundScores round_scores_parallel(const LabeledStore& store,
                                  std::span<const FeaturePoint> candidates,
                                  std::span<const FeaturePoint> targets,
                                  const FeaturePoint* current_query,
                                  const DistanceMatrix* distances = nullptr);

RoundScores round_scores(LabeledStore& store,
                         std::span<const FeaturePoint> candidates,
                         std::span<const FeaturePoint> targets,
                         const FeaturePoint* current_query,
                         ScoringEngine engine,
                         const DistanceMatrix* distances = nullptr);

} // namespace ojt
