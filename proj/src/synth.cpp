#include "ojt/synth.hpp"

#include "ojt/rng.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>

namespace ojt {

SynthProfile ionosphere_profile() {
    SynthProfile p;
    p.name = "ionosphere";
    p.label_names = {"g", "b"};
    p.class_counts = {225, 126};
    p.dims = 34;
    p.informative_dims = 34;
    p.clusters_per_class = 13;
    p.center_span = 1.0;
    p.cluster_spread = 0.015;
    p.seed = 0x10f0u;
    return p;
}

SynthProfile segmentation_profile() {
    SynthProfile p;
    p.name = "segmentation";
    p.label_names = {"brickface", "sky", "foliage", "cement", "window", "path", "grass"};
    p.class_counts = std::vector<int>(7, 330);
    p.dims = 19;
    p.informative_dims = 19;
    p.clusters_per_class = 4;
    p.center_span = 1.0;
    p.cluster_spread = 0.02;
    p.seed = 0x5e6u;
    return p;
}

SynthProfile pima_profile() {
    SynthProfile p;
    p.name = "pima";
    p.label_names = {"neg", "pos"};
    p.class_counts = {500, 268};
    p.dims = 8;
    p.informative_dims = 8;
    p.clusters_per_class = 6;
    p.center_span = 1.0;
    p.cluster_spread = 0.22;
    p.seed = 0x91a0u;
    return p;
}

std::vector<SynthProfile> builtin_profiles() {
    return {ionosphere_profile(), segmentation_profile(), pima_profile()};
}

Dataset generate_synthetic(const SynthProfile& profile) {
    if (profile.class_counts.empty()) throw InputError("synth: no classes");
    if (profile.informative_dims > profile.dims)
        throw InputError("synth: informative_dims exceeds dims");

    Rng rng(profile.seed);
    const int num_classes = static_cast<int>(profile.class_counts.size());
    const int m = profile.informative_dims;

    // Cluster centers live in the informative subspace.
    std::vector<std::vector<double>> centers;
    centers.reserve(static_cast<std::size_t>(num_classes) * profile.clusters_per_class);
    for (int c = 0; c < num_classes; ++c) {
        for (int j = 0; j < profile.clusters_per_class; ++j) {
            std::vector<double> center(m);
            for (int d = 0; d < m; ++d) center[d] = profile.center_span * rng.uniform01();
            centers.push_back(std::move(center));
        }
    }

    Dataset ds;
    for (int c = 0; c < num_classes; ++c) {
        ds.category_names.push_back(
            static_cast<std::size_t>(c) < profile.label_names.size()
                ? profile.label_names[c]
                : "c" + std::to_string(c));
    }

    for (int c = 0; c < num_classes; ++c) {
        for (int i = 0; i < profile.class_counts[c]; ++i) {
            const auto cluster = static_cast<std::size_t>(
                c * profile.clusters_per_class +
                static_cast<int>(rng.bounded(static_cast<std::uint64_t>(profile.clusters_per_class))));
            FeaturePoint p;
            p.id = static_cast<PointId>(ds.points.size());
            p.features.resize(profile.dims);
            for (int d = 0; d < profile.dims; ++d) {
                if (d < m)
                    p.features[d] = centers[cluster][d] + profile.cluster_spread * rng.normal();
                else
                    p.features[d] = profile.noise_lo +
                                    (profile.noise_hi - profile.noise_lo) * rng.uniform01();
            }
            ds.points.push_back(std::move(p));
            ds.labels.push_back(c);
        }
    }

    const std::size_t dim = ds.dimension();
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

void write_records(std::ostream& out, const Dataset& dataset, char delimiter) {
    for (std::size_t i = 0; i < dataset.points.size(); ++i) {
        const auto& p = dataset.points[i];
        for (const double v : p.features) {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.9g", v);
            out << buf << delimiter;
        }
        out << dataset.category_names[static_cast<std::size_t>(dataset.labels[i])] << '\n';
    }
}

} // namespace ojt
