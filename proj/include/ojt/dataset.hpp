#pragma once

#include "ojt/types.hpp"

#include <cstddef>
#include <iosfwd>
#include <string>
#include <unordered_map>
#include <vector>

namespace ojt {

/// A loaded record dataset: points, ground-truth labels, label names and the
/// per-feature ranges observed at load time. Immutable once built.
struct Dataset {
    std::vector<FeaturePoint> points;
    std::vector<Label> labels;
    std::vector<std::string> category_names;
    std::vector<double> feature_mins;
    std::vector<double> feature_maxs;

    std::size_t size() const { return points.size(); }
    std::size_t dimension() const { return points.empty() ? 0 : points[0].features.size(); }
    int num_categories() const { return static_cast<int>(category_names.size()); }
};

/// Where the label lives in each row: the last column (default) or a
/// zero-based column index.
struct LabelColumn {
    static LabelColumn last() { return LabelColumn{true, 0}; }
    static LabelColumn at(std::size_t index) { return LabelColumn{false, index}; }
    bool use_last = true;
    std::size_t index = 0;
};

Dataset load_records(const std::string& path,
                     LabelColumn label_column = LabelColumn::last(),
                     char delimiter = ',');

/// Same parser over an already-open stream (used by tests and datagen).
Dataset parse_records(std::istream& in, const std::string& origin,
                      LabelColumn label_column = LabelColumn::last(),
                      char delimiter = ',');

/// Per-feature min-max rescaling to [0,1]; constant features map to 0.0.
Dataset normalize(const Dataset& dataset);

/// Answers C(p) for every point handed out by a Split.
class LabelOracle {
public:
    LabelOracle() = default;

    void add(PointId id, Label label) { truth_[id] = label; }

    Label label(const FeaturePoint& p) const {
        auto it = truth_.find(p.id);
        if (it == truth_.end())
            throw InputError("oracle cannot label point id " + std::to_string(p.id));
        return it->second;
    }

    bool covers(PointId id) const { return truth_.count(id) != 0; }

private:
    std::unordered_map<PointId, Label> truth_;
};

/// One experiment split: the unlabeled sample set S, the labeled query pool T
/// and an oracle covering S ∪ T.
struct Split {
    std::vector<FeaturePoint> sample_set;                    // S, labels hidden
    std::vector<std::pair<FeaturePoint, Label>> query_pool;  // T
    LabelOracle oracle;
};

/// Seeded shuffle; first `sample_size` points become S, next `pool_size`
/// become T. Throws InputError when the dataset is too small.
Split split(const Dataset& dataset, std::uint64_t seed,
            std::size_t sample_size, std::size_t pool_size);

/// Default experiment split rule: |T| = pool_size (150 unless overridden),
/// S = all remaining records.
Split split_rest_vs_pool(const Dataset& dataset, std::uint64_t seed,
                         std::size_t pool_size = 150);

/// Pairwise Euclidean distances between all dataset points, indexed by id.
/// Shared read-only across runs; the scoring fast path uses it.
class DistanceMatrix {
public:
    explicit DistanceMatrix(const Dataset& dataset);

    double at(PointId a, PointId b) const { return d_[a * n_ + b]; }
    std::size_t size() const { return n_; }

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

} // namespace ojt
