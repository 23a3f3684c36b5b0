#pragma once

#include "ojt/dataset.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace ojt {

/// Deterministic Gaussian-cluster generator for record-format datasets.
/// Each class owns `clusters_per_class` cluster centers placed inside the
/// informative subspace; the remaining dimensions are uniform noise shared
/// by all classes. Difficulty is steered by `cluster_spread` relative to
/// `center_span`.
struct SynthProfile {
    std::string name;
    std::vector<std::string> label_names;
    std::vector<int> class_counts;
    int dims = 2;
    int informative_dims = 2;
    int clusters_per_class = 1;
    double center_span = 1.0;   // centers drawn uniformly in [0, span]^m
    double cluster_spread = 0.1;
    double noise_lo = 0.0;
    double noise_hi = 1.0;
    std::uint64_t seed = 1;
};

/// Stand-ins matching the shape of the UCI sets the experiments name.
SynthProfile ionosphere_profile();
SynthProfile segmentation_profile();
SynthProfile pima_profile();
std::vector<SynthProfile> builtin_profiles();

Dataset generate_synthetic(const SynthProfile& profile);

/// Emits delimiter-separated rows (features then label name), parseable by
/// load_records.
void write_records(std::ostream& out, const Dataset& dataset, char delimiter = ',');

} // namespace ojt
