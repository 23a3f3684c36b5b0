#pragma once

#include "ojt/types.hpp"

#include <cstddef>
#include <vector>

namespace ojt {

/// Default distance scale for the uniform blend below.
inline constexpr double kDefaultSmoothing = 0.5;

/// Incremental nearest-neighbor classifier over labeled points.
///
/// Committed entries hold trainer facts; the assumption stack holds
/// hypothetical labels pushed by assume() and popped by retract(). Assumed
/// entries participate in every posterior computation exactly like committed
/// ones, and popping the stack restores all outputs bit-exactly.
///
/// Votes: the k nearest points by Euclidean distance, each weighted
/// 1/(d + epsilon). The vote distribution is then blended toward uniform by
/// lambda = d_nearest/(d_nearest + smoothing), so confidence decays with the
/// distance to the nearest labeled point. The blend vanishes at distance 0,
/// never moves the argmax, and an empty store yields the uniform posterior.
/// A single-label store would otherwise be exactly certain everywhere.
///
/// Single-owner; not safe for concurrent mutation.
class LabeledStore {
public:
    LabeledStore(int num_categories, std::size_t dimension,
                 int k = 5, double epsilon = 1e-9, double smoothing = kDefaultSmoothing);

    int num_categories() const { return num_categories_; }
    std::size_t dimension() const { return dimension_; }
    int k() const { return k_; }
    double epsilon() const { return epsilon_; }
    double smoothing() const { return smoothing_; }

    std::size_t committed_size() const { return entries_.size(); }
    std::size_t assumed_size() const { return stack_.size(); }
    std::size_t size() const { return entries_.size() + stack_.size(); }

    /// Append a trainer fact permanently.
    void commit(const FeaturePoint& p, Label label);

    /// Push a hypothetical label. May be called repeatedly (also for the
    /// same point; retract pops the most recent match).
    void assume(const FeaturePoint& p, Label label);

    /// Pop the most recent assumption for `p`. ProtocolError when none.
    void retract(const FeaturePoint& p);

    /// w-normalized category weights for x; uniform when the store is empty.
    std::vector<double> posterior(const FeaturePoint& x) const;

    /// argmax of posterior; ties toward the smallest category index.
    Label guess(const FeaturePoint& x) const;

    /// 1 - max posterior: the probability x would be misclassified.
    double uncertainty(const FeaturePoint& x) const;

    /// Expected uncertainty of `target` if `candidate`'s label became known,
    /// marginalized over candidate's current posterior (its true label is
    /// unknown at question time). The store is restored exactly.
    double lookahead_uncertainty(const FeaturePoint& target,
                                 const FeaturePoint& candidate);

    /// Committed entries in insertion order (read-only view for kernels).
    const std::vector<std::pair<FeaturePoint, Label>>& committed() const { return entries_; }

private:
    void check_dimension(const FeaturePoint& x) const;
    void check_label(Label label) const;

    int num_categories_;
    std::size_t dimension_;
    int k_;
    double epsilon_;
    double smoothing_;
    std::vector<std::pair<FeaturePoint, Label>> entries_;
    std::vector<std::pair<FeaturePoint, Label>> stack_;
};

double euclidean_distance(const FeaturePoint& a, const FeaturePoint& b);

} // namespace ojt
