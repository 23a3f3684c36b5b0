#include "ojt/enumeration_oracle.hpp"

#include <algorithm>

namespace ojt {

namespace {

using Beliefs = std::vector<std::pair<FeaturePoint, Label>>;

LabeledStore build_store(const LabeledStore& base, const Beliefs& beliefs) {
    LabeledStore store(base.num_categories(), base.dimension(), base.k(), base.epsilon(),
                       base.smoothing());
    for (const auto& [p, label] : base.committed()) store.commit(p, label);
    for (const auto& [p, label] : beliefs) store.commit(p, label);
    return store;
}

double state_value(const LabeledStore& base, const std::vector<FeaturePoint>& candidates,
                   const FeaturePoint* query, const std::vector<FeaturePoint>& remaining,
                   int budget, const Beliefs& beliefs);

// Uniform next query from the remaining set.
double future_value(const LabeledStore& base, const std::vector<FeaturePoint>& candidates,
                    const std::vector<FeaturePoint>& remaining, int budget,
                    const Beliefs& beliefs) {
    if (remaining.empty()) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < remaining.size(); ++i) {
        std::vector<FeaturePoint> rest;
        rest.reserve(remaining.size() - 1);
        for (std::size_t j = 0; j < remaining.size(); ++j)
            if (j != i) rest.push_back(remaining[j]);
        sum += state_value(base, candidates, &remaining[i], rest, budget, beliefs);
    }
    return sum / static_cast<double>(remaining.size());
}

double state_value(const LabeledStore& base, const std::vector<FeaturePoint>& candidates,
                   const FeaturePoint* query, const std::vector<FeaturePoint>& remaining,
                   int budget, const Beliefs& beliefs) {
    if (!query && remaining.empty()) return 0.0;

    const LabeledStore store = build_store(base, beliefs);
    const double query_unc = query ? store.uncertainty(*query) : 0.0;

    double best = query_unc + future_value(base, candidates, remaining, budget, beliefs);
    if (budget > 0) {
        for (const auto& question : candidates) {
            const auto weights = store.posterior(question);
            double value = 0.0;
            for (Label c = 0; c < store.num_categories(); ++c) {
                Beliefs next = beliefs;
                next.emplace_back(question, c);
                const LabeledStore conditioned = build_store(base, next);
                const double unc = query ? conditioned.uncertainty(*query) : 0.0;
                value += weights[c] *
                         (unc + future_value(base, candidates, remaining, budget - 1, next));
            }
            best = std::min(best, value);
        }
    }
    return best;
}

} // namespace

double oracle_min_expected_wrong(const LabeledStore& committed_base,
                                 const std::optional<FeaturePoint>& query,
                                 const std::vector<FeaturePoint>& remaining,
                                 int questions_remaining,
                                 const std::vector<FeaturePoint>& candidates) {
    return state_value(committed_base, candidates, query ? &*query : nullptr, remaining,
                       questions_remaining, {});
}

} // namespace ojt
