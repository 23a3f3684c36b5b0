#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace ojt {

using Label = int;
using PointId = std::uint32_t;

/// Malformed input: bad files, dimension mismatches, out-of-range indices.
struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// An agent or caller broke the interaction contract (budget overrun,
/// question outside the allowed set, retract without a matching assume).
struct ProtocolError : std::logic_error {
    using std::logic_error::logic_error;
};

/// Request outside a declared tractability or regime bound.
struct RefusalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One unlabeled instance. `id` indexes the originating dataset row and is
/// the identity used for tie-breaking, dedup and distance-matrix lookups.
struct FeaturePoint {
    PointId id = 0;
    std::vector<double> features;
};

inline bool same_point(const FeaturePoint& a, const FeaturePoint& b) {
    return a.id == b.id;
}

/// Trainer reply: a point together with its true label.
struct Fact {
    FeaturePoint point;
    Label label = 0;
};

enum class QuerySampling { WithoutReplacement, WithReplacement };

/// Protocol mode and budgets for one episode.
struct SystemConfig {
    bool synchronous = true;
    bool intervention = true;
    int k_q = 1;                       // query limit (episode length)
    int k_Q = 0;                       // question budget
    QuerySampling query_sampling = QuerySampling::WithoutReplacement;
    double trainer_availability = 1.0; // async only; sync systems require 1.0
    std::uint64_t seed = 0;
};

/// Returns the violations found, empty when the config is usable.
/// `pool_size` enables the replacement-vs-empty-pool check when known.
std::vector<std::string> validate_config(const SystemConfig& config,
                                         std::optional<std::size_t> pool_size = std::nullopt);

} // namespace ojt
