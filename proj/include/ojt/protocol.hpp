#pragma once

#include "ojt/classifier.hpp"
#include "ojt/dataset.hpp"
#include "ojt/metrics.hpp"
#include "ojt/rng.hpp"
#include "ojt/types.hpp"

#include <array>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

namespace ojt {

enum class Step { Query, Question, Fact, Answer, Assess };

const char* step_name(Step step);

/// The five steps in the order the configured system executes them.
/// With intervention the question/fact exchange precedes the answer.
std::array<Step, 5> step_order(const SystemConfig& config);

/// One loop iteration. metric_value is the accumulator right after Assess.
struct RoundRecord {
    int t = 0;
    std::optional<FeaturePoint> query;
    std::optional<FeaturePoint> question;
    std::optional<Fact> fact;
    bool unsolicited_fact = false;
    std::optional<Label> guess;
    std::optional<bool> correct;
    double metric_value = 0.0;
};

struct EpisodeTrace {
    std::vector<RoundRecord> records;
    SystemConfig config;
    int final_wrong_count = 0;

    int questions_asked() const;
};

/// Columns: t query_id question_id fact_id fact_label guess correct
/// metric_value; empty fields rendered as "-".
void write_trace(std::ostream& out, const EpisodeTrace& trace);

/// Across-run miss rate: fraction of traces whose round-`index` record
/// (1-based) was answered incorrectly.
double miss_rate(const std::vector<EpisodeTrace>& traces, int index);

/// Source of queries for one episode. Owns its randomness so that two
/// streams built from the same seed yield the same sequence.
class QueryStream {
public:
    virtual ~QueryStream() = default;
    /// Next query; nullopt either for an async null slot or exhaustion.
    virtual std::optional<FeaturePoint> next() = 0;
};

/// Draws from a fixed pool, with or without replacement, optionally
/// yielding null slots with probability null_query_probability (async).
class PoolStream final : public QueryStream {
public:
    PoolStream(std::vector<FeaturePoint> pool, QuerySampling sampling,
               std::uint64_t seed, double null_query_probability = 0.0);

    std::optional<FeaturePoint> next() override;

private:
    std::vector<FeaturePoint> pool_;
    QuerySampling sampling_;
    Rng rng_;
    double null_probability_;
    std::size_t cursor_ = 0;
};

/// Replays an explicit sequence (permutation enumeration, tests).
class FixedOrderStream final : public QueryStream {
public:
    explicit FixedOrderStream(std::vector<std::optional<FeaturePoint>> sequence)
        : sequence_(std::move(sequence)) {}

    std::optional<FeaturePoint> next() override {
        if (cursor_ >= sequence_.size()) return std::nullopt;
        return sequence_[cursor_++];
    }

private:
    std::vector<std::optional<FeaturePoint>> sequence_;
    std::size_t cursor_ = 0;
};

/// The simulated trainer: answers questions from ground truth and can be
/// given a hook that substitutes unsolicited facts. The hook is consulted
/// first in every Fact step; when it returns a fact, that fact is delivered
/// (flagged unsolicited) instead of an answer to the agent's question.
class TrainerOracle {
public:
    using UnsolicitedHook = std::function<std::optional<Fact>(int t, Rng& rng)>;

    explicit TrainerOracle(const LabelOracle& truth) : truth_(&truth) {}

    Label label(const FeaturePoint& p) const { return truth_->label(p); }

    void set_unsolicited_hook(UnsolicitedHook hook) { hook_ = std::move(hook); }
    std::optional<Fact> unsolicited(int t, Rng& rng) const {
        return hook_ ? hook_(t, rng) : std::nullopt;
    }

private:
    const LabelOracle* truth_;
    UnsolicitedHook hook_;
};

/// What an agent must implement to run inside the loop. One agent serves
/// one episode; the harness builds agents fresh per run.
class Agent {
public:
    virtual ~Agent() = default;

    /// Query step: the round began and `query` (possibly null) arrived.
    virtual void observe_query(const std::optional<FeaturePoint>& query, int t) = 0;

    /// Question step: a point from the allowed set, or nullopt to stay quiet.
    virtual std::optional<FeaturePoint> ask() = 0;

    /// Answer step: G_t(q).
    virtual Label answer(const FeaturePoint& query) = 0;

    /// Fact step (when a fact is forthcoming).
    virtual void receive_fact(const Fact& fact, bool unsolicited) = 0;

    virtual const LabeledStore& store() const = 0;
};

struct EpisodeOptions {
    /// Extra ids questions may come from, on top of S ∪ V (ideal agent's T).
    std::vector<PointId> extra_question_domain;
};

/// Runs exactly k_q rounds following step_order(config). Throws
/// ProtocolError when the agent oversteps (budget, question domain) and
/// InputError when a synchronous stream runs dry.
EpisodeTrace run_episode(Agent& agent,
                         const std::vector<FeaturePoint>& sample_set,
                         const TrainerOracle& trainer,
                         QueryStream& queries,
                         const SystemConfig& config,
                         Metric& metric,
                         const EpisodeOptions& options = {});

} // namespace ojt
