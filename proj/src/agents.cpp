#include "ojt/agents.hpp"

#include "ojt/ideal.hpp"

#include <algorithm>

namespace ojt {

Strategy strategy_from_name(const std::string& name) {
    if (name == "ojt") return Strategy::OJT;
    if (name == "active") return Strategy::Active;
    if (name == "always-ask") return Strategy::AlwaysAsk;
    if (name == "passive") return Strategy::Passive;
    if (name == "ideal") return Strategy::IdealBruteForce;
    throw InputError("unknown strategy: " + name);
}

std::string strategy_name(Strategy strategy) {
    switch (strategy) {
        case Strategy::OJT: return "ojt";
        case Strategy::Active: return "active";
        case Strategy::AlwaysAsk: return "always-ask";
        case Strategy::Passive: return "passive";
        case Strategy::IdealBruteForce: return "ideal";
    }
    return "?";
}

namespace {

bool id_less(const FeaturePoint& a, const FeaturePoint& b) { return a.id < b.id; }

void insert_unique_by_id(std::vector<FeaturePoint>& sorted, const FeaturePoint& p) {
    auto pos = std::lower_bound(sorted.begin(), sorted.end(), p, id_less);
    if (pos != sorted.end() && pos->id == p.id) return;
    sorted.insert(pos, p);
}

} // namespace

AgentBase::AgentBase(AgentSetup setup)
    : setup_(std::move(setup)),
      store_(setup_.num_categories, setup_.dimension, setup_.knn_k, setup_.epsilon,
             setup_.smoothing),
      questions_remaining_(setup_.config.k_Q),
      queries_remaining_(setup_.config.k_q) {
    candidates_.reserve(setup_.sample_set.size() + setup_.config.k_q);
    for (const auto& p : setup_.sample_set) insert_unique_by_id(candidates_, p);
}

void AgentBase::observe_query(const std::optional<FeaturePoint>& query, int t) {
    queries_remaining_ = setup_.config.k_q - t + 1;
    current_query_ = query;
    if (query) {
        seen_ids_.push_back(query->id);
        insert_unique_by_id(candidates_, *query);
    }
}

Label AgentBase::answer(const FeaturePoint& query) { return store_.guess(query); }

void AgentBase::receive_fact(const Fact& fact, bool) {
    store_.commit(fact.point, fact.label);
    known_ids_.insert(fact.point.id);
}

void AgentBase::spend_question() {
    if (questions_remaining_ <= 0)
        throw ProtocolError("agent spent a question with no budget left");
    --questions_remaining_;
}

RoundScores AgentBase::score_candidates(const FeaturePoint* current_query) {
    return round_scores(store_, candidates_, candidates_, current_query, setup_.engine,
                        setup_.distances);
}

std::optional<FeaturePoint> OjtAgent::select_question(const std::optional<FeaturePoint>& query) {
    if (questions_remaining_ <= 0 || candidates_.empty()) return std::nullopt;

    const bool with_query_term = setup_.use_query_term && query.has_value();
    const auto scores = score_candidates(with_query_term ? &*query : nullptr);

    const double surplus = std::max(0, queries_remaining_ - questions_remaining_);
    const double weight = surplus / static_cast<double>(candidates_.size());

    // A question whose label is already committed returns no information;
    // it also scores exactly at the no-change baseline, which would make it
    // a perpetual argmin. Skip known points while fresh ones exist.
    std::optional<std::size_t> best;
    double best_score = 0.0;
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
        if (label_known(candidates_[i].id)) continue;
        // Without the query term the ranking reduces to the raw lookahead
        // sums; comparing them undivided keeps the ordering identical to the
        // active learner's (Theorem 1 equivalence).
        const double score = with_query_term
                                 ? scores.query_lookahead[i] + weight * scores.target_sum[i]
                                 : scores.target_sum[i];
        if (!best || score < best_score) {
            best = i;
            best_score = score;
        }
    }
    if (!best) return candidates_.front();
    return candidates_[*best];
}

std::optional<FeaturePoint> OjtAgent::ask() {
    auto question = select_question(current_query_);
    if (question) spend_question();
    return question;
}

std::optional<FeaturePoint> ActiveAgent::select_question() {
    if (questions_remaining_ <= 0 || candidates_.empty()) return std::nullopt;
    const auto scores = score_candidates(nullptr);
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < candidates_.size(); ++i) {
        if (label_known(candidates_[i].id)) continue;
        if (!best || scores.target_sum[i] < scores.target_sum[*best]) best = i;
    }
    if (!best) return candidates_.front();
    return candidates_[*best];
}

std::optional<FeaturePoint> ActiveAgent::ask() {
    auto question = select_question();
    if (question) spend_question();
    return question;
}

std::optional<FeaturePoint> AlwaysAskAgent::ask() {
    if (questions_remaining_ <= 0 || !current_query_) return std::nullopt;
    spend_question();
    return current_query_;
}

IdealAgent::IdealAgent(AgentSetup setup) : AgentBase(std::move(setup)) {
    for (const auto& p : setup_.sample_set) insert_unique_by_id(question_candidates_, p);
    for (const auto& p : setup_.pool) insert_unique_by_id(question_candidates_, p);
}

std::optional<FeaturePoint> IdealAgent::ask() {
    if (questions_remaining_ <= 0) return std::nullopt;

    std::vector<FeaturePoint> remaining;
    remaining.reserve(setup_.pool.size());
    for (const auto& p : setup_.pool) {
        if (std::find(seen_ids_.begin(), seen_ids_.end(), p.id) == seen_ids_.end())
            remaining.push_back(p);
    }
    std::sort(remaining.begin(), remaining.end(), id_less);

    const auto result = ideal_expected_wrong(store_, current_query_, remaining,
                                             questions_remaining_, question_candidates_);
    if (result.question) spend_question();
    return result.question;
}

std::unique_ptr<AgentBase> make_agent(Strategy strategy, AgentSetup setup) {
    switch (strategy) {
        case Strategy::OJT: return std::make_unique<OjtAgent>(std::move(setup));
        case Strategy::Active: return std::make_unique<ActiveAgent>(std::move(setup));
        case Strategy::AlwaysAsk: return std::make_unique<AlwaysAskAgent>(std::move(setup));
        case Strategy::Passive: return std::make_unique<PassiveAgent>(std::move(setup));
        case Strategy::IdealBruteForce: return std::make_unique<IdealAgent>(std::move(setup));
    }
    throw InputError("unknown strategy");
}

} // namespace ojt
