#include "ojt/protocol.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <unordered_set>

namespace ojt {

const char* step_name(Step step) {
    switch (step) {
        case Step::Query: return "Query";
        case Step::Question: return "Question";
        case Step::Fact: return "Fact";
        case Step::Answer: return "Answer";
        case Step::Assess: return "Assess";
    }
    return "?";
}

std::array<Step, 5> step_order(const SystemConfig& config) {
    if (config.intervention)
        return {Step::Query, Step::Question, Step::Fact, Step::Answer, Step::Assess};
    return {Step::Query, Step::Answer, Step::Question, Step::Fact, Step::Assess};
}

std::vector<std::string> validate_config(const SystemConfig& config,
                                         std::optional<std::size_t> pool_size) {
    std::vector<std::string> violations;
    if (config.synchronous && config.trainer_availability < 1.0)
        violations.push_back("synchronous system requires trainer_availability = 1.0");
    if (config.k_q <= 0)
        violations.push_back("k_q must be positive (the episode would be empty)");
    if (config.k_Q < 0)
        violations.push_back("k_Q must be nonnegative");
    if (config.trainer_availability < 0.0 || config.trainer_availability > 1.0)
        violations.push_back("trainer_availability must lie in [0,1]");
    if (pool_size && config.query_sampling == QuerySampling::WithReplacement && *pool_size < 1)
        violations.push_back("with-replacement sampling needs a nonempty query pool");
    return violations;
}

int EpisodeTrace::questions_asked() const {
    int n = 0;
    for (const auto& r : records)
        if (r.question) ++n;
    return n;
}

PoolStream::PoolStream(std::vector<FeaturePoint> pool, QuerySampling sampling,
                       std::uint64_t seed, double null_query_probability)
    : pool_(std::move(pool)), sampling_(sampling), rng_(seed),
      null_probability_(null_query_probability) {
    if (sampling_ == QuerySampling::WithoutReplacement) rng_.shuffle(pool_);
}

std::optional<FeaturePoint> PoolStream::next() {
    if (null_probability_ > 0.0 && rng_.bernoulli(null_probability_)) return std::nullopt;
    if (sampling_ == QuerySampling::WithReplacement) {
        if (pool_.empty()) return std::nullopt;
        return pool_[rng_.bounded(pool_.size())];
    }
    if (cursor_ >= pool_.size()) return std::nullopt;
    return pool_[cursor_++];
}

EpisodeTrace run_episode(Agent& agent,
                         const std::vector<FeaturePoint>& sample_set,
                         const TrainerOracle& trainer,
                         QueryStream& queries,
                         const SystemConfig& config,
                         Metric& metric,
                         const EpisodeOptions& options) {
    {
        const auto violations = validate_config(config);
        if (!violations.empty())
            throw InputError("run_episode: invalid config: " + violations.front());
    }

    std::unordered_set<PointId> allowed;
    for (const auto& p : sample_set) allowed.insert(p.id);
    for (const PointId id : options.extra_question_domain) allowed.insert(id);

    Rng rng(config.seed);
    const auto order = step_order(config);

    EpisodeTrace trace;
    trace.config = config;
    trace.records.reserve(static_cast<std::size_t>(config.k_q));
    int questions_asked = 0;

    for (int t = 1; t <= config.k_q; ++t) {
        RoundRecord rec;
        rec.t = t;
        // The trainer either is or is not around this round; one draw per
        // round keeps replays aligned whether or not a question gets asked.
        const bool trainer_available =
            config.synchronous || rng.bernoulli(config.trainer_availability);

        for (const Step step : order) {
            switch (step) {
                case Step::Query: {
                    rec.query = queries.next();
                    if (!rec.query && config.synchronous)
                        throw InputError("run_episode: query stream exhausted at round " +
                                         std::to_string(t) + " in synchronous mode");
                    if (rec.query) allowed.insert(rec.query->id); // V includes current query
                    agent.observe_query(rec.query, t);
                    break;
                }
                case Step::Question: {
                    rec.question = agent.ask();
                    if (rec.question) {
                        if (questions_asked >= config.k_Q)
                            throw ProtocolError("agent asked at round " + std::to_string(t) +
                                                " with exhausted question budget");
                        if (!allowed.count(rec.question->id))
                            throw ProtocolError("question id " + std::to_string(rec.question->id) +
                                                " outside S ∪ V");
                        ++questions_asked;
                    }
                    break;
                }
                case Step::Fact: {
                    if (auto substituted = trainer.unsolicited(t, rng)) {
                        rec.fact = std::move(substituted);
                        rec.unsolicited_fact = true;
                        agent.receive_fact(*rec.fact, true);
                    } else if (rec.question && trainer_available) {
                        rec.fact = Fact{*rec.question, trainer.label(*rec.question)};
                        agent.receive_fact(*rec.fact, false);
                    }
                    break;
                }
                case Step::Answer: {
                    if (rec.query) {
                        rec.guess = agent.answer(*rec.query);
                        rec.correct = (*rec.guess == trainer.label(*rec.query));
                    }
                    break;
                }
                case Step::Assess: {
                    RoundContext ctx;
                    ctx.t = t;
                    ctx.query = rec.query;
                    ctx.question = rec.question;
                    ctx.fact = rec.fact;
                    ctx.guess = rec.guess;
                    if (rec.query) ctx.truth = trainer.label(*rec.query);
                    rec.metric_value = metric.assess(ctx);
                    break;
                }
            }
        }
        trace.records.push_back(std::move(rec));
    }

    trace.final_wrong_count = 0;
    for (const auto& r : trace.records)
        if (r.correct && !*r.correct) ++trace.final_wrong_count;
    return trace;
}

namespace {

void put_field(std::string& row, const std::string& value) {
    if (!row.empty()) row.push_back('\t');
    row += value;
}

std::string format_metric(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", value);
    return buf;
}

} // namespace

void write_trace(std::ostream& out, const EpisodeTrace& trace) {
    out << "# t\tquery_id\tquestion_id\tfact_id\tfact_label\tguess\tcorrect\tmetric_value\n";
    for (const auto& r : trace.records) {
        std::string row;
        put_field(row, std::to_string(r.t));
        put_field(row, r.query ? std::to_string(r.query->id) : "-");
        put_field(row, r.question ? std::to_string(r.question->id) : "-");
        put_field(row, r.fact ? std::to_string(r.fact->point.id) : "-");
        put_field(row, r.fact ? std::to_string(r.fact->label) : "-");
        put_field(row, r.guess ? std::to_string(*r.guess) : "-");
        put_field(row, r.correct ? std::string(*r.correct ? "1" : "0") : "-");
        put_field(row, format_metric(r.metric_value));
        out << row << '\n';
    }
}

} // namespace ojt
