#include "ojt/classifier.hpp"

#include <algorithm>
#include <cmath>

namespace ojt {

double euclidean_distance(const FeaturePoint& a, const FeaturePoint& b) {
    double sum = 0.0;
    const std::size_t n = a.features.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double d = a.features[i] - b.features[i];
        sum += d * d;
    }
    return std::sqrt(sum);
}

LabeledStore::LabeledStore(int num_categories, std::size_t dimension, int k, double epsilon,
                           double smoothing)
    : num_categories_(num_categories), dimension_(dimension), k_(k), epsilon_(epsilon),
      smoothing_(smoothing) {
    if (num_categories < 1) throw InputError("LabeledStore: need at least one category");
    if (k < 1) throw InputError("LabeledStore: k must be positive");
    if (!(epsilon > 0.0)) throw InputError("LabeledStore: epsilon must be positive");
    if (smoothing < 0.0) throw InputError("LabeledStore: smoothing must be nonnegative");
}

void LabeledStore::check_dimension(const FeaturePoint& x) const {
    if (x.features.size() != dimension_)
        throw InputError("point dimension " + std::to_string(x.features.size()) +
                         " does not match store dimension " + std::to_string(dimension_));
}

void LabeledStore::check_label(Label label) const {
    if (label < 0 || label >= num_categories_)
        throw InputError("label " + std::to_string(label) + " outside category table");
}

void LabeledStore::commit(const FeaturePoint& p, Label label) {
    check_dimension(p);
    check_label(label);
    entries_.emplace_back(p, label);
}

void LabeledStore::assume(const FeaturePoint& p, Label label) {
    check_dimension(p);
    check_label(label);
    stack_.emplace_back(p, label);
}

void LabeledStore::retract(const FeaturePoint& p) {
    for (auto it = stack_.rbegin(); it != stack_.rend(); ++it) {
        if (same_point(it->first, p)) {
            stack_.erase(std::next(it).base());
            return;
        }
    }
    throw ProtocolError("retract: point id " + std::to_string(p.id) +
                        " has no assumption on the stack");
}

std::vector<double> LabeledStore::posterior(const FeaturePoint& x) const {
    check_dimension(x);
    const std::size_t total = entries_.size() + stack_.size();
    if (total == 0)
        return std::vector<double>(num_categories_, 1.0 / num_categories_);

    // k nearest by (distance, insertion index); assumed entries come after
    // committed ones. Bounded insertion keeps this O(n·k).
    const std::size_t keep = std::min<std::size_t>(k_, total);
    struct Neighbor {
        double dist;
        std::size_t index;
        Label label;
    };
    std::vector<Neighbor> best;
    best.reserve(keep + 1);
    auto offer = [&](double dist, std::size_t index, Label label) {
        if (best.size() == keep &&
            (dist > best.back().dist || (dist == best.back().dist && index > best.back().index)))
            return;
        Neighbor n{dist, index, label};
        auto pos = std::upper_bound(best.begin(), best.end(), n, [](const Neighbor& a, const Neighbor& b) {
            return a.dist < b.dist || (a.dist == b.dist && a.index < b.index);
        });
        best.insert(pos, n);
        if (best.size() > keep) best.pop_back();
    };
    std::size_t index = 0;
    for (const auto& [p, label] : entries_) offer(euclidean_distance(x, p), index++, label);
    for (const auto& [p, label] : stack_) offer(euclidean_distance(x, p), index++, label);

    std::vector<double> votes(num_categories_, 0.0);
    double weight_sum = 0.0;
    for (const auto& n : best) {
        const double w = 1.0 / (n.dist + epsilon_);
        votes[n.label] += w;
        weight_sum += w;
    }
    for (auto& v : votes) v /= weight_sum;
    if (smoothing_ > 0.0) {
        const double nearest = best.front().dist;
        const double lambda = nearest / (nearest + smoothing_);
        const double uniform = 1.0 / num_categories_;
        for (auto& v : votes) v = (1.0 - lambda) * v + lambda * uniform;
    }
    return votes;
}

Label LabeledStore::guess(const FeaturePoint& x) const {
    const auto p = posterior(x);
    Label best = 0;
    for (Label c = 1; c < num_categories_; ++c)
        if (p[c] > p[best]) best = c;
    return best;
}

double LabeledStore::uncertainty(const FeaturePoint& x) const {
    const auto p = posterior(x);
    double max = 0.0;
    for (const double v : p) max = std::max(max, v);
    return 1.0 - max;
}

double LabeledStore::lookahead_uncertainty(const FeaturePoint& target,
                                           const FeaturePoint& candidate) {
    const auto weights = posterior(candidate);
    double expected = 0.0;
    for (Label c = 0; c < num_categories_; ++c) {
        assume(candidate, c);
        expected += weights[c] * uncertainty(target);
        retract(candidate);
    }
    return expected;
}

} // namespace ojt
