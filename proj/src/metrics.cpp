#include "ojt/metrics.hpp"

#include "ojt/protocol.hpp"

#include <istream>
#include <sstream>

namespace ojt {

MetricKind metric_from_name(const std::string& name) {
    if (name == "budget") return MetricKind::Budget;
    if (name == "utility") return MetricKind::Utility;
    throw InputError("unknown metric: " + name);
}

std::string metric_name(MetricKind kind) {
    return kind == MetricKind::Budget ? "budget" : "utility";
}

std::unordered_map<PointId, double> parse_cost_table(std::istream& in,
                                                     const std::string& origin) {
    std::unordered_map<PointId, double> table;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        std::uint64_t id = 0;
        double cost = 0.0;
        if (!(ss >> id >> cost) || cost < 0.0)
            throw InputError(origin + ": row " + std::to_string(row) +
                             ": expected 'point_id nonnegative_cost'");
        table[static_cast<PointId>(id)] = cost;
    }
    return table;
}

double BudgetMetric::assess(const RoundContext& round) {
    // Null-query rounds accumulate nothing.
    if (round.query && round.guess && round.truth && *round.guess != *round.truth) ++c_;
    return value();
}

double UtilityMetric::assess(const RoundContext& round) {
    if (round.question) total_ += costs_.question_cost(*round.question);
    if (round.query && round.guess && round.truth && *round.guess != *round.truth)
        total_ += costs_.wrong_cost(*round.query);
    return total_;
}

std::unique_ptr<Metric> make_metric(MetricKind kind, int k_q, const CostModel& costs) {
    if (kind == MetricKind::Budget) return std::make_unique<BudgetMetric>(k_q);
    return std::make_unique<UtilityMetric>(costs);
}

double overall_error(const LabeledStore& store,
                     const std::vector<std::pair<FeaturePoint, Label>>& query_pool) {
    if (query_pool.empty()) throw InputError("overall_error: empty query pool");
    int wrong = 0;
    for (const auto& [point, label] : query_pool)
        if (store.guess(point) != label) ++wrong;
    return static_cast<double>(wrong) / static_cast<double>(query_pool.size());
}

double miss_rate(const std::vector<EpisodeTrace>& traces, int index) {
    if (traces.empty()) throw InputError("miss_rate: no traces");
    int missed = 0;
    for (const auto& trace : traces) {
        if (index < 1 || static_cast<std::size_t>(index) > trace.records.size())
            throw InputError("miss_rate: round index " + std::to_string(index) +
                             " out of range");
        const auto& rec = trace.records[static_cast<std::size_t>(index) - 1];
        if (rec.correct && !*rec.correct) ++missed;
    }
    return static_cast<double>(missed) / static_cast<double>(traces.size());
}

} // namespace ojt
