// Independent reimplementations used as test oracles. These deliberately
// avoid the assumption stack, the neighbor caches and the recursion under
// test: full sorts, fresh vectors, explicit two-branch expansions.
#pragma once

#include "ojt/classifier.hpp"
#include "ojt/rng.hpp"
#include "ojt/types.hpp"

#include <algorithm>
#include <vector>

namespace ojt::testing {

/// Brute-force posterior: sort every labeled point by (distance, insertion
/// index), take the first k, weight 1/(d+eps), then blend toward uniform by
/// d_nearest/(d_nearest + smoothing).
inline std::vector<double> brute_posterior(
    const std::vector<std::pair<FeaturePoint, Label>>& labeled, int num_categories, int k,
    double epsilon, const FeaturePoint& x, double smoothing = kDefaultSmoothing) {
    if (labeled.empty())
        return std::vector<double>(num_categories, 1.0 / num_categories);
    struct Entry {
        double dist;
        std::size_t index;
        Label label;
    };
    std::vector<Entry> entries;
    entries.reserve(labeled.size());
    for (std::size_t i = 0; i < labeled.size(); ++i)
        entries.push_back({euclidean_distance(x, labeled[i].first), i, labeled[i].second});
    std::stable_sort(entries.begin(), entries.end(),
                     [](const Entry& a, const Entry& b) { return a.dist < b.dist; });
    const std::size_t keep = std::min<std::size_t>(k, entries.size());
    std::vector<double> votes(num_categories, 0.0);
    double weight_sum = 0.0;
    for (std::size_t i = 0; i < keep; ++i) {
        const double w = 1.0 / (entries[i].dist + epsilon);
        votes[entries[i].label] += w;
        weight_sum += w;
    }
    for (auto& v : votes) v /= weight_sum;
    if (smoothing > 0.0) {
        const double lambda = entries[0].dist / (entries[0].dist + smoothing);
        const double uniform = 1.0 / num_categories;
        for (auto& v : votes) v = (1.0 - lambda) * v + lambda * uniform;
    }
    return votes;
}

inline double brute_uncertainty(const std::vector<std::pair<FeaturePoint, Label>>& labeled,
                                int num_categories, int k, double epsilon,
                                const FeaturePoint& x) {
    const auto p = brute_posterior(labeled, num_categories, k, epsilon, x);
    return 1.0 - *std::max_element(p.begin(), p.end());
}

/// Two-branch lookahead expansion straight from the definition: for every
/// label of the candidate, append it to a copy of the labeled set and
/// weight the target's uncertainty by the candidate's current posterior.
inline double brute_lookahead(const std::vector<std::pair<FeaturePoint, Label>>& labeled,
                              int num_categories, int k, double epsilon,
                              const FeaturePoint& target, const FeaturePoint& candidate) {
    const auto weights = brute_posterior(labeled, num_categories, k, epsilon, candidate);
    double expected = 0.0;
    for (Label c = 0; c < num_categories; ++c) {
        auto with_candidate = labeled;
        with_candidate.emplace_back(candidate, c);
        expected += weights[c] *
                    brute_uncertainty(with_candidate, num_categories, k, epsilon, target);
    }
    return expected;
}

inline FeaturePoint make_point(PointId id, std::vector<double> features) {
    FeaturePoint p;
    p.id = id;
    p.features = std::move(features);
    return p;
}

inline std::vector<FeaturePoint> random_points(Rng& rng, std::size_t n, std::size_t dims,
                                               PointId first_id = 0) {
    std::vector<FeaturePoint> points(n);
    for (std::size_t i = 0; i < n; ++i) {
        points[i].id = first_id + static_cast<PointId>(i);
        points[i].features.resize(dims);
        for (auto& f : points[i].features) f = rng.uniform01();
    }
    return points;
}

} // namespace ojt::testing
