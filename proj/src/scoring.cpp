#include "ojt/scoring.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ojt {

ScoringEngine engine_from_name(const std::string& name) {
    if (name == "reference" || name == "serial") return ScoringEngine::Reference;
    if (name == "parallel" || name == "fast") return ScoringEngine::Parallel;
    throw InputError("unknown scoring engine: " + name);
}

RoundScores round_scores_reference(LabeledStore& store,
                                   std::span<const FeaturePoint> candidates,
                                   std::span<const FeaturePoint> targets,
                                   const FeaturePoint* current_query) {
    RoundScores scores;
    scores.target_sum.resize(candidates.size(), 0.0);
    if (current_query) scores.query_lookahead.resize(candidates.size(), 0.0);
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        double sum = 0.0;
        for (const auto& target : targets)
            sum += store.lookahead_uncertainty(target, candidates[i]);
        scores.target_sum[i] = sum;
        if (current_query)
            scores.query_lookahead[i] = store.lookahead_uncertainty(*current_query, candidates[i]);
    }
    return scores;
}

namespace {

// Top-k committed neighbors of one probe point, in (distance, entry index)
// order, plus the probe's store-only posterior and uncertainty.
struct NeighborCache {
    std::vector<double> dists;
    std::vector<Label> labels;
    bool full = false;   // store has at least k entries
    double kth = std::numeric_limits<double>::infinity();
    std::vector<double> posterior;
    double uncertainty = 0.0;
};

double point_distance(const FeaturePoint& a, const FeaturePoint& b,
                      const DistanceMatrix* distances) {
    if (distances && a.id < distances->size() && b.id < distances->size())
        return distances->at(a.id, b.id);
    return euclidean_distance(a, b);
}

NeighborCache build_cache(const LabeledStore& store, const FeaturePoint& probe,
                          const DistanceMatrix* distances) {
    const auto& entries = store.committed();
    const std::size_t keep = std::min<std::size_t>(store.k(), entries.size());
    NeighborCache cache;
    cache.dists.reserve(keep + 1);
    cache.labels.reserve(keep + 1);

    for (std::size_t index = 0; index < entries.size(); ++index) {
        const double d = point_distance(probe, entries[index].first, distances);
        // Entries arrive in ascending index order, so insertion by strict
        // distance keeps ties on the earlier entry, matching posterior().
        if (cache.dists.size() == keep && d >= cache.dists.back()) continue;
        auto pos = std::upper_bound(cache.dists.begin(), cache.dists.end(), d,
                                    [](double a, double b) { return a < b; });
        const auto offset = pos - cache.dists.begin();
        cache.dists.insert(pos, d);
        cache.labels.insert(cache.labels.begin() + offset, entries[index].second);
        if (cache.dists.size() > keep) {
            cache.dists.pop_back();
            cache.labels.pop_back();
        }
    }
    cache.full = entries.size() >= static_cast<std::size_t>(store.k());
    if (cache.full && !cache.dists.empty()) cache.kth = cache.dists.back();

    const int L = store.num_categories();
    if (cache.dists.empty()) {
        cache.posterior.assign(L, 1.0 / L);
    } else {
        std::vector<double> votes(L, 0.0);
        double weight_sum = 0.0;
        for (std::size_t i = 0; i < cache.dists.size(); ++i) {
            const double w = 1.0 / (cache.dists[i] + store.epsilon());
            votes[cache.labels[i]] += w;
            weight_sum += w;
        }
        for (auto& v : votes) v /= weight_sum;
        if (store.smoothing() > 0.0) {
            const double nearest = cache.dists.front();
            const double lambda = nearest / (nearest + store.smoothing());
            const double uniform = 1.0 / L;
            for (auto& v : votes) v = (1.0 - lambda) * v + lambda * uniform;
        }
        cache.posterior = std::move(votes);
    }
    double max = 0.0;
    for (const double v : cache.posterior) max = std::max(max, v);
    cache.uncertainty = 1.0 - max;
    return cache;
}

// lookahead_uncertainty(target, candidate) from the target's cache: merge the
// candidate into the cached top-k (it sorts after equal-distance committed
// entries, like a stack entry) and marginalize over the candidate posterior.
double pair_lookahead(const LabeledStore& store, const NeighborCache& target_cache,
                      double dist_to_candidate, const std::vector<double>& candidate_posterior) {
    const int L = store.num_categories();

    if (target_cache.full && dist_to_candidate >= target_cache.kth) {
        // The hypothetical point cannot enter the neighborhood.
        double expected = 0.0;
        for (int c = 0; c < L; ++c)
            expected += candidate_posterior[c] * target_cache.uncertainty;
        return expected;
    }

    const std::size_t n = target_cache.dists.size();
    std::size_t insert_at = n;
    while (insert_at > 0 && target_cache.dists[insert_at - 1] > dist_to_candidate) --insert_at;
    const std::size_t merged =
        std::min<std::size_t>(store.k(), n + 1); // committed top-k plus the candidate

    const double nearest = insert_at == 0 ? dist_to_candidate : target_cache.dists[0];
    const double lambda =
        store.smoothing() > 0.0 ? nearest / (nearest + store.smoothing()) : 0.0;
    const double uniform = 1.0 / L;

    double expected = 0.0;
    std::vector<double> votes(L);
    for (int assumed = 0; assumed < L; ++assumed) {
        std::fill(votes.begin(), votes.end(), 0.0);
        double weight_sum = 0.0;
        for (std::size_t j = 0; j < merged; ++j) {
            double d;
            Label label;
            if (j < insert_at) {
                d = target_cache.dists[j];
                label = target_cache.labels[j];
            } else if (j == insert_at) {
                d = dist_to_candidate;
                label = static_cast<Label>(assumed);
            } else {
                d = target_cache.dists[j - 1];
                label = target_cache.labels[j - 1];
            }
            const double w = 1.0 / (d + store.epsilon());
            votes[label] += w;
            weight_sum += w;
        }
        double max = 0.0;
        for (const double v : votes)
            max = std::max(max, (1.0 - lambda) * (v / weight_sum) + lambda * uniform);
        expected += candidate_posterior[assumed] * (1.0 - max);
    }
    return expected;
}

} // namespace

RoundScores round_scores_parallel(const LabeledStore& store,
                                  std::span<const FeaturePoint> candidates,
                                  std::span<const FeaturePoint> targets,
                                  const FeaturePoint* current_query,
                                  const DistanceMatrix* distances) {
    if (store.assumed_size() != 0)
        throw ProtocolError("round_scores_parallel: assumption stack must be empty");

    std::vector<NeighborCache> target_caches(targets.size());
    for (std::size_t i = 0; i < targets.size(); ++i)
        target_caches[i] = build_cache(store, targets[i], distances);

    const bool same_span =
        candidates.data() == targets.data() && candidates.size() == targets.size();
    std::vector<NeighborCache> own_candidate_caches;
    if (!same_span) {
        own_candidate_caches.resize(candidates.size());
        for (std::size_t i = 0; i < candidates.size(); ++i)
            own_candidate_caches[i] = build_cache(store, candidates[i], distances);
    }
    const std::vector<NeighborCache>& candidate_caches =
        same_span ? target_caches : own_candidate_caches;

    NeighborCache query_cache;
    if (current_query) query_cache = build_cache(store, *current_query, distances);

    RoundScores scores;
    scores.target_sum.resize(candidates.size(), 0.0);
    if (current_query) scores.query_lookahead.resize(candidates.size(), 0.0);

    const auto m = static_cast<std::ptrdiff_t>(candidates.size());
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        const auto& candidate = candidates[i];
        const auto& cand_posterior = candidate_caches[i].posterior;
        double sum = 0.0;
        for (std::size_t p = 0; p < targets.size(); ++p) {
            const double d = point_distance(targets[p], candidate, distances);
            sum += pair_lookahead(store, target_caches[p], d, cand_posterior);
        }
        scores.target_sum[i] = sum;
        if (current_query) {
            const double d = point_distance(*current_query, candidate, distances);
            scores.query_lookahead[i] = pair_lookahead(store, query_cache, d, cand_posterior);
        }
    }
    return scores;
}

RoundScores round_scores(LabeledStore& store,
                         std::span<const FeaturePoint> candidates,
                         std::span<const FeaturePoint> targets,
                         const FeaturePoint* current_query,
                         ScoringEngine engine,
                         const DistanceMatrix* distances) {
    if (engine == ScoringEngine::Reference)
        return round_scores_reference(store, candidates, targets, current_query);
    return round_scores_parallel(store, candidates, targets, current_query, distances);
}

} // namespace ojt
