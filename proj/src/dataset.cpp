#include "ojt/dataset.hpp"

#include "ojt/classifier.hpp"
#include "ojt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

namespace ojt {

namespace {

std::vector<std::string> split_fields(const std::string& line, char delimiter) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, delimiter)) fields.push_back(field);
    if (!line.empty() && line.back() == delimiter) fields.emplace_back();
    return fields;
}

std::string trimmed(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

double parse_feature(const std::string& field, const std::string& origin, std::size_t row) {
    const std::string t = trimmed(field);
    if (t.empty())
        throw InputError(origin + ": row " + std::to_string(row) + ": empty feature field");
    std::size_t consumed = 0;
    double value = 0.0;
    try {
        value = std::stod(t, &consumed);
    } catch (const std::exception&) {
        throw InputError(origin + ": row " + std::to_string(row) +
                         ": non-numeric feature '" + t + "'");
    }
    if (consumed != t.size() || !std::isfinite(value))
        throw InputError(origin + ": row " + std::to_string(row) +
                         ": non-numeric feature '" + t + "'");
    return value;
}

} // namespace

Dataset parse_records(std::istream& in, const std::string& origin,
                      LabelColumn label_column, char delimiter) {
    Dataset ds;
    std::string line;
    std::size_t row = 0;
    std::size_t expected_width = 0;
    while (std::getline(in, line)) {
        ++row;
        if (trimmed(line).empty()) continue;
        const auto fields = split_fields(line, delimiter);
        if (expected_width == 0) {
            expected_width = fields.size();
            if (expected_width < 2)
                throw InputError(origin + ": row " + std::to_string(row) +
                                 ": needs at least one feature and a label");
        } else if (fields.size() != expected_width) {
            throw InputError(origin + ": row " + std::to_string(row) + ": ragged row (" +
                             std::to_string(fields.size()) + " fields, expected " +
                             std::to_string(expected_width) + ")");
        }

        const std::size_t label_index =
            label_column.use_last ? expected_width - 1 : label_column.index;
        if (label_index >= expected_width)
            throw InputError(origin + ": label column out of range");

        FeaturePoint p;
        p.id = static_cast<PointId>(ds.points.size());
        p.features.reserve(expected_width - 1);
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i == label_index) continue;
            p.features.push_back(parse_feature(fields[i], origin, row));
        }

        const std::string label_name = trimmed(fields[label_index]);
        if (label_name.empty())
            throw InputError(origin + ": row " + std::to_string(row) + ": empty label");
        auto it = std::find(ds.category_names.begin(), ds.category_names.end(), label_name);
        Label label;
        if (it == ds.category_names.end()) {
            label = static_cast<Label>(ds.category_names.size());
            ds.category_names.push_back(label_name);
        } else {
            label = static_cast<Label>(it - ds.category_names.begin());
        }
        ds.points.push_back(std::move(p));
        ds.labels.push_back(label);
    }
    if (ds.points.empty()) throw InputError(origin + ": empty file");

    const std::size_t dim = ds.points[0].features.size();
    ds.feature_mins.assign(dim, std::numeric_limits<double>::infinity());
    ds.feature_maxs.assign(dim, -std::numeric_limits<double>::infinity());
    for (const auto& p : ds.points) {
        for (std::size_t j = 0; j < dim; ++j) {
            ds.feature_mins[j] = std::min(ds.feature_mins[j], p.features[j]);
            ds.feature_maxs[j] = std::max(ds.feature_maxs[j], p.features[j]);
        }
    }
    return ds;
}

Dataset load_records(const std::string& path, LabelColumn label_column, char delimiter) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open dataset file: " + path);
    return parse_records(in, path, label_column, delimiter);
}

Dataset normalize(const Dataset& dataset) {
    if (dataset.points.empty()) throw InputError("normalize: empty dataset");
    Dataset out = dataset;
    const std::size_t dim = dataset.dimension();
    for (auto& p : out.points) {
        for (std::size_t j = 0; j < dim; ++j) {
            const double lo = dataset.feature_mins[j];
            const double hi = dataset.feature_maxs[j];
            p.features[j] = (hi > lo) ? (p.features[j] - lo) / (hi - lo) : 0.0;
        }
    }
    for (std::size_t j = 0; j < dim; ++j) {
        out.feature_mins[j] = std::numeric_limits<double>::infinity();
        out.feature_maxs[j] = -std::numeric_limits<double>::infinity();
        for (const auto& p : out.points) {
            out.feature_mins[j] = std::min(out.feature_mins[j], p.features[j]);
            out.feature_maxs[j] = std::max(out.feature_maxs[j], p.features[j]);
        }
    }
    return out;
}

Split split(const Dataset& dataset, std::uint64_t seed,
            std::size_t sample_size, std::size_t pool_size) {
    if (sample_size + pool_size > dataset.size())
        throw InputError("split: sample_size + pool_size exceeds dataset size");

    std::vector<std::size_t> order(dataset.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    Rng rng(seed);
    rng.shuffle(order);

    Split s;
    s.sample_set.reserve(sample_size);
    s.query_pool.reserve(pool_size);
    for (std::size_t i = 0; i < sample_size; ++i) {
        const auto idx = order[i];
        s.sample_set.push_back(dataset.points[idx]);
        s.oracle.add(dataset.points[idx].id, dataset.labels[idx]);
    }
    for (std::size_t i = sample_size; i < sample_size + pool_size; ++i) {
        const auto idx = order[i];
        s.query_pool.emplace_back(dataset.points[idx], dataset.labels[idx]);
        s.oracle.add(dataset.points[idx].id, dataset.labels[idx]);
    }
    return s;
}

Split split_rest_vs_pool(const Dataset& dataset, std::uint64_t seed, std::size_t pool_size) {
    if (pool_size > dataset.size())
        throw InputError("split: pool_size exceeds dataset size");
    return split(dataset, seed, dataset.size() - pool_size, pool_size);
}

DistanceMatrix::DistanceMatrix(const Dataset& dataset) : n_(dataset.size()) {
    d_.assign(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = i + 1; j < n_; ++j) {
            const double d = euclidean_distance(dataset.points[i], dataset.points[j]);
            d_[i * n_ + j] = d;
            d_[j * n_ + i] = d;
        }
    }
}

} // namespace ojt
