#pragma once

#include "ojt/classifier.hpp"
#include "ojt/dataset.hpp"
#include "ojt/protocol.hpp"
#include "ojt/scoring.hpp"
#include "ojt/types.hpp"

#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

namespace ojt {

enum class Strategy { OJT, Active, AlwaysAsk, Passive, IdealBruteForce };

Strategy strategy_from_name(const std::string& name);
std::string strategy_name(Strategy strategy);

/// Everything an agent is given before the first round: S, the system
/// config, classifier parameters and the metric it is evaluated by.
struct AgentSetup {
    std::vector<FeaturePoint> sample_set; // S
    SystemConfig config;
    int num_categories = 2;
    std::size_t dimension = 0;
    int knn_k = 5;
    double epsilon = 1e-9;
    double smoothing = kDefaultSmoothing;
    ScoringEngine engine = ScoringEngine::Parallel;
    const DistanceMatrix* distances = nullptr;
    MetricKind metric = MetricKind::Budget;
    CostModel costs;
    /// Ideal agent only: the full query pool T (contents, not labels).
    std::vector<FeaturePoint> pool;
    /// OJT only: drop the current-query lookahead term. This is the
    /// discard-q construction used by the Theorem 1 equivalence check.
    bool use_query_term = true;
};

/// Shared bookkeeping: the labeled store, S, the seen-query set V (deduped
/// by id), per-round counters and the S ∪ V candidate list kept sorted by id.
class AgentBase : public Agent {
public:
    explicit AgentBase(AgentSetup setup);

    void observe_query(const std::optional<FeaturePoint>& query, int t) override;
    Label answer(const FeaturePoint& query) override;
    void receive_fact(const Fact& fact, bool unsolicited) override;
    const LabeledStore& store() const override { return store_; }

    int questions_remaining() const { return questions_remaining_; }
    int queries_remaining() const { return queries_remaining_; }
    const std::vector<FeaturePoint>& candidates() const { return candidates_; }

protected:
    void spend_question();
    RoundScores score_candidates(const FeaturePoint* current_query);
    bool label_known(PointId id) const { return known_ids_.count(id) != 0; }

    AgentSetup setup_;
    LabeledStore store_;
    std::vector<FeaturePoint> candidates_; // S ∪ V, ascending id
    std::vector<PointId> seen_ids_;        // V
    std::unordered_set<PointId> known_ids_; // answered facts; re-asking is a no-op
    std::optional<FeaturePoint> current_query_;
    int questions_remaining_ = 0;
    int queries_remaining_ = 0;
};

/// Tractable agent: argmin over Q ∈ S ∪ V of
///   lookahead(q, Q) + max(0, (q_rem - Q_rem)) / |R| * Σ_{p∈R} lookahead(p, Q)
/// with R = S ∪ V. Ties go to the smallest point id.
class OjtAgent final : public AgentBase {
public:
    using AgentBase::AgentBase;

    std::optional<FeaturePoint> ask() override;

    /// Exposed for tests: selection for an explicit current query.
    std::optional<FeaturePoint> select_question(const std::optional<FeaturePoint>& query);
};

/// Adapted active learner: argmin of the averaged lookahead sum alone;
/// selection never references the current query. Asks every round until
/// the budget is spent.
class ActiveAgent final : public AgentBase {
public:
    using AgentBase::AgentBase;

    std::optional<FeaturePoint> ask() override;

    std::optional<FeaturePoint> select_question();
};

/// Asks the first k_Q queries as they arrive, then behaves passively.
class AlwaysAskAgent final : public AgentBase {
public:
    using AgentBase::AgentBase;

    std::optional<FeaturePoint> ask() override;
};

/// Never asks.
class PassiveAgent final : public AgentBase {
public:
    using AgentBase::AgentBase;

    std::optional<FeaturePoint> ask() override { return std::nullopt; }
};

/// Brute-force expected-wrong recursion over the known remaining pool.
/// Only viable on toy instances; the recursion refuses beyond its bounds.
class IdealAgent final : public AgentBase {
public:
    explicit IdealAgent(AgentSetup setup);

    std::optional<FeaturePoint> ask() override;

private:
    std::vector<FeaturePoint> question_candidates_; // S ∪ T, ascending id
};

std::unique_ptr<AgentBase> make_agent(Strategy strategy, AgentSetup setup);

} // namespace ojt
