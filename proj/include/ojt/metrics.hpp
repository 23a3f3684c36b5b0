#pragma once

#include "ojt/classifier.hpp"
#include "ojt/types.hpp"

#include <iosfwd>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

namespace ojt {

/// Per-point question/wrong-answer costs with constant-function shorthand.
struct CostModel {
    double question_cost_default = 1.0;
    double wrong_cost_default = 1.0;
    std::unordered_map<PointId, double> question_cost_overrides;
    std::unordered_map<PointId, double> wrong_cost_overrides;

    static CostModel constants(double question, double wrong) {
        CostModel m;
        m.question_cost_default = question;
        m.wrong_cost_default = wrong;
        return m;
    }

    double question_cost(const FeaturePoint& p) const {
        auto it = question_cost_overrides.find(p.id);
        return it == question_cost_overrides.end() ? question_cost_default : it->second;
    }
    double wrong_cost(const FeaturePoint& p) const {
        auto it = wrong_cost_overrides.find(p.id);
        return it == wrong_cost_overrides.end() ? wrong_cost_default : it->second;
    }
};

/// Two-column text table: point id, cost. '#' lines are comments.
std::unordered_map<PointId, double> parse_cost_table(std::istream& in,
                                                     const std::string& origin);

enum class MetricKind { Budget, Utility };

MetricKind metric_from_name(const std::string& name);
std::string metric_name(MetricKind kind);

/// Everything the Assess step hands to a metric for one round.
struct RoundContext {
    int t = 0;
    std::optional<FeaturePoint> query;
    std::optional<FeaturePoint> question;
    std::optional<Fact> fact;
    std::optional<Label> guess;
    std::optional<Label> truth;
};

/// Per-episode accumulator invoked once per Assess step.
class Metric {
public:
    virtual ~Metric() = default;
    virtual double assess(const RoundContext& round) = 0;
    virtual double value() const = 0;
};

/// Cumulative error rate c/k_q; c counts wrong answers on answered queries.
class BudgetMetric final : public Metric {
public:
    explicit BudgetMetric(int k_q) : k_q_(k_q) {}

    double assess(const RoundContext& round) override;
    double value() const override { return static_cast<double>(c_) / k_q_; }
    int wrong_count() const { return c_; }

private:
    int k_q_;
    int c_ = 0;
};

/// Cumulative cost: question cost per question asked plus wrong cost per
/// misclassified query. Null-query rounds skip only the wrong-answer term.
class UtilityMetric final : public Metric {
public:
    explicit UtilityMetric(CostModel costs) : costs_(std::move(costs)) {}

    double assess(const RoundContext& round) override;
    double value() const override { return total_; }

private:
    CostModel costs_;
    double total_ = 0.0;
};

std::unique_ptr<Metric> make_metric(MetricKind kind, int k_q, const CostModel& costs);

/// Fraction of the query pool misclassified by the final classifier.
double overall_error(const LabeledStore& store,
                     const std::vector<std::pair<FeaturePoint, Label>>& query_pool);

} // namespace ojt
