#include "ojt/harness.hpp"

#include "ojt/ideal.hpp"
#include "ojt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <sstream>
#include <unordered_map>

namespace ojt {

namespace {

std::size_t effective_sample_size(const SplitRule& rule, std::size_t dataset_size) {
    if (rule.sample_size) return *rule.sample_size;
    if (rule.pool_size > dataset_size)
        throw InputError("split rule: pool_size exceeds dataset size");
    return dataset_size - rule.pool_size;
}

AgentSetup base_setup(const ExperimentSpec& spec, const Split& sp,
                      const DistanceMatrix& distances, const SystemConfig& config,
                      std::size_t dimension, int num_categories) {
    AgentSetup setup;
    setup.sample_set = sp.sample_set;
    setup.config = config;
    setup.num_categories = num_categories;
    setup.dimension = dimension;
    setup.knn_k = spec.params.knn_k;
    setup.epsilon = spec.params.epsilon;
    setup.smoothing = spec.params.smoothing;
    setup.engine = spec.params.engine;
    setup.distances = &distances;
    setup.metric = spec.metric;
    setup.costs = spec.costs;
    return setup;
}

} // namespace

RunOutput run_single(const ExperimentSpec& spec, const Dataset& normalized,
                     const DistanceMatrix& distances, int run_index) {
    const std::uint64_t run_seed = derive_seed(spec.config.seed, static_cast<std::uint64_t>(run_index));
    const std::size_t sample_size = effective_sample_size(spec.split_rule, normalized.size());
    const Split sp = split(normalized, derive_seed(run_seed, 0), sample_size,
                           spec.split_rule.pool_size);

    std::vector<FeaturePoint> pool_points;
    pool_points.reserve(sp.query_pool.size());
    for (const auto& [p, label] : sp.query_pool) pool_points.push_back(p);

    const std::uint64_t stream_seed = derive_seed(run_seed, 1);
    SystemConfig config = spec.config;
    config.seed = derive_seed(run_seed, 2);

    TrainerOracle trainer(sp.oracle);

    RunOutput out;
    out.traces.reserve(spec.strategies.size());
    out.overall_errors.reserve(spec.strategies.size());
    for (const Strategy strategy : spec.strategies) {
        // Every strategy inside a run sees the same split and query order.
        PoolStream stream(pool_points, config.query_sampling, stream_seed,
                          config.synchronous ? 0.0 : spec.null_query_probability);
        AgentSetup setup = base_setup(spec, sp, distances, config, normalized.dimension(),
                                      normalized.num_categories());
        EpisodeOptions options;
        if (strategy == Strategy::IdealBruteForce) {
            setup.pool = pool_points;
            for (const auto& p : pool_points) options.extra_question_domain.push_back(p.id);
        }
        auto agent = make_agent(strategy, std::move(setup));
        auto metric = make_metric(spec.metric, config.k_q, spec.costs);
        out.traces.push_back(run_episode(*agent, sp.sample_set, trainer, stream, config,
                                         *metric, options));
        out.overall_errors.push_back(overall_error(agent->store(), sp.query_pool));
    }
    return out;
}

AggregateResult run_experiment(const ExperimentSpec& spec) {
    if (spec.runs < 1) throw InputError("run_experiment: runs must be >= 1");
    if (spec.strategies.empty()) throw InputError("run_experiment: no strategies");
    {
        const auto violations = validate_config(spec.config, spec.split_rule.pool_size);
        if (!violations.empty())
            throw InputError("run_experiment: invalid config: " + violations.front());
    }

    const Dataset normalized = normalize(spec.dataset);
    const DistanceMatrix distances(normalized);

    std::vector<RunOutput> outputs(static_cast<std::size_t>(spec.runs));
    std::string failure;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < spec.runs; ++i) {
        try {
            outputs[static_cast<std::size_t>(i)] = run_single(spec, normalized, distances, i);
        } catch (const std::exception& e) {
#pragma omp critical
            if (failure.empty())
                failure = "run " + std::to_string(i) + ": " + e.what();
        }
    }
    if (!failure.empty()) throw InputError("run_experiment: " + failure);

    AggregateResult result;
    result.runs = spec.runs;
    result.k_q = spec.config.k_q;
    const auto k_q = static_cast<std::size_t>(spec.config.k_q);
    const double n = static_cast<double>(spec.runs);

    for (std::size_t s = 0; s < spec.strategies.size(); ++s) {
        StrategyAggregate agg;
        agg.strategy = spec.strategies[s];
        agg.mean_cumulative.assign(k_q, 0.0);
        agg.miss_rate.assign(k_q, 0.0);

        std::vector<double> finals, overalls;
        finals.reserve(outputs.size());
        overalls.reserve(outputs.size());
        for (const auto& run : outputs) {
            const auto& trace = run.traces[s];
            for (std::size_t t = 0; t < k_q; ++t) {
                agg.mean_cumulative[t] += trace.records[t].metric_value;
                const auto& correct = trace.records[t].correct;
                if (correct && !*correct) agg.miss_rate[t] += 1.0;
            }
            finals.push_back(trace.records.back().metric_value);
            overalls.push_back(run.overall_errors[s]);
        }
        for (auto& v : agg.mean_cumulative) v /= n;
        for (auto& v : agg.miss_rate) v /= n;

        auto mean_of = [n](const std::vector<double>& v) {
            return std::accumulate(v.begin(), v.end(), 0.0) / n;
        };
        auto stderr_of = [n](const std::vector<double>& v, double mean) {
            if (v.size() < 2) return 0.0;
            double ss = 0.0;
            for (const double x : v) ss += (x - mean) * (x - mean);
            return std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
        };
        agg.mean_final_cumulative = mean_of(finals);
        agg.final_cumulative_stderr = stderr_of(finals, agg.mean_final_cumulative);
        agg.mean_overall = mean_of(overalls);
        agg.overall_stderr = stderr_of(overalls, agg.mean_overall);
        result.per_strategy.push_back(std::move(agg));
    }
    return result;
}

Theorem1Report theorem1_check(const ExperimentSpec& spec) {
    if (spec.config.intervention)
        throw RefusalError("theorem1_check: requires a no-intervention system");
    if (!spec.config.synchronous)
        throw RefusalError("theorem1_check: requires a synchronous system");
    if (spec.config.query_sampling != QuerySampling::WithReplacement)
        throw RefusalError("theorem1_check: requires with-replacement queries");

    const Dataset normalized = normalize(spec.dataset);
    const DistanceMatrix distances(normalized);
    const std::size_t sample_size = effective_sample_size(spec.split_rule, normalized.size());

    Theorem1Report report;
    report.seeds_tested = spec.runs;
    for (int i = 0; i < spec.runs; ++i) {
        const std::uint64_t run_seed = derive_seed(spec.config.seed, static_cast<std::uint64_t>(i));
        const Split sp = split(normalized, derive_seed(run_seed, 0), sample_size,
                               spec.split_rule.pool_size);
        std::vector<FeaturePoint> pool_points;
        for (const auto& [p, label] : sp.query_pool) pool_points.push_back(p);

        SystemConfig config = spec.config;
        config.seed = derive_seed(run_seed, 2);
        const std::uint64_t stream_seed = derive_seed(run_seed, 1);
        TrainerOracle trainer(sp.oracle);

        auto run_one = [&](Strategy strategy, bool use_query_term) {
            PoolStream stream(pool_points, config.query_sampling, stream_seed, 0.0);
            AgentSetup setup = base_setup(spec, sp, distances, config, normalized.dimension(),
                                          normalized.num_categories());
            setup.use_query_term = use_query_term;
            auto agent = make_agent(strategy, std::move(setup));
            auto metric = make_metric(spec.metric, config.k_q, spec.costs);
            return run_episode(*agent, sp.sample_set, trainer, stream, config, *metric);
        };

        // The proof's construction: the OJT agent discards the query, which
        // removes exactly the current-query term from its selection rule.
        const EpisodeTrace ojt_trace = run_one(Strategy::OJT, false);
        const EpisodeTrace active_trace = run_one(Strategy::Active, true);

        for (int t = 0; t < spec.config.k_q; ++t) {
            const auto& a = ojt_trace.records[static_cast<std::size_t>(t)];
            const auto& b = active_trace.records[static_cast<std::size_t>(t)];
            const bool questions_match =
                a.question.has_value() == b.question.has_value() &&
                (!a.question || a.question->id == b.question->id);
            const bool guesses_match = a.guess == b.guess;
            if (!questions_match || !guesses_match) {
                report.passed = false;
                std::ostringstream msg;
                msg << "seed " << i << " round " << (t + 1) << ": "
                    << (questions_match ? "guess" : "question") << " streams diverge";
                report.detail = msg.str();
                return report;
            }
        }
    }
    report.passed = true;
    report.detail = "question and guess streams identical across " +
                    std::to_string(spec.runs) + " seeds";
    return report;
}

// ---------------------------------------------------------------------------
// Theorem 2: exact ideal-agent pair on a toy instance.
// ---------------------------------------------------------------------------

namespace {

// Belief states are partial labelings of P = S ∪ T, encoded base (L+1).
// Planning marginalizes unknown labels over the posterior; evaluation walks
// the true-label dynamics under the planned policy. Everything is an exact
// expectation over i.i.d. uniform queries from T.
class IdealPairDp {
public:
    IdealPairDp(const ToyInstance& toy, int k_Q, int k_q, const RunParams& params)
        : k_Q_(k_Q), k_q_(k_q) {
        const Dataset& ds = toy.dataset;
        num_categories_ = ds.num_categories();
        std::vector<PointId> ids = toy.sample_ids;
        ids.insert(ids.end(), toy.pool_ids.begin(), toy.pool_ids.end());
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        if (ids.size() > 8)
            throw RefusalError("theorem2_check: instance has more than 8 distinct points");
        if (k_q > 8) throw RefusalError("theorem2_check: k_q exceeds bound 8");
        if (k_Q > kIdealMaxQuestions)
            throw RefusalError("theorem2_check: k_Q exceeds bound 3");
        if (toy.pool_ids.size() > kIdealMaxRemaining)
            throw RefusalError("theorem2_check: |T| exceeds bound 6");

        for (const PointId id : ids) {
            index_of_[id] = points_.size();
            points_.push_back(ds.points[id]);
            truth_.push_back(ds.labels[id]);
        }
        for (const PointId id : toy.pool_ids) pool_.push_back(index_of_[id]);

        base_ = static_cast<std::uint64_t>(num_categories_ + 1);
        pow_.assign(points_.size() + 1, 1);
        for (std::size_t i = 1; i < pow_.size(); ++i) pow_[i] = pow_[i - 1] * base_;

        store_template_ = std::make_unique<LabeledStore>(num_categories_, ds.dimension(),
                                                         params.knn_k, params.epsilon,
                                                         params.smoothing);
    }

    double expected_error(bool intervention) {
        return eval(intervention, 0, k_Q_, k_q_) / static_cast<double>(k_q_);
    }

private:
    // digit i of `code`: 0 = unknown, otherwise 1 + label of point i.
    LabeledStore store_for(std::uint64_t code) const {
        LabeledStore store = *store_template_;
        for (std::size_t i = 0; i < points_.size(); ++i) {
            const auto digit = (code / pow_[i]) % base_;
            if (digit != 0) store.commit(points_[i], static_cast<Label>(digit - 1));
        }
        return store;
    }

    std::uint64_t with_label(std::uint64_t code, std::size_t point, Label label) const {
        const auto digit = (code / pow_[point]) % base_;
        return code + (static_cast<std::uint64_t>(label) + 1 - digit) * pow_[point];
    }

    std::uint64_t key(std::uint64_t code, int budget, int rounds) const {
        return (code * 16 + static_cast<std::uint64_t>(budget)) * 16 +
               static_cast<std::uint64_t>(rounds);
    }

    // Minimal expected future misclassifications under the agent's beliefs.
    double plan(bool intervention, std::uint64_t code, int budget, int rounds) {
        if (rounds == 0) return 0.0;
        auto& memo = intervention ? plan_with_ : plan_without_;
        const auto k = key(code, budget, rounds);
        if (auto it = memo.find(k); it != memo.end()) return it->second;

        const LabeledStore store = store_for(code);
        double total = 0.0;
        for (const std::size_t q : pool_)
            total += plan_round(intervention, store, code, budget, rounds, q).first;
        const double value = total / static_cast<double>(pool_.size());
        memo.emplace(k, value);
        return value;
    }

    // One round's best (value, action): action -1 = no question, else the
    // candidate's point index. Candidates are every point of P.
    std::pair<double, int> plan_round(bool intervention, const LabeledStore& store,
                                      std::uint64_t code, int budget, int rounds,
                                      std::size_t q) {
        const double unc_q = store.uncertainty(points_[q]);
        double best = unc_q + plan(intervention, code, budget, rounds - 1);
        int action = -1;
        if (budget > 0) {
            for (std::size_t c = 0; c < points_.size(); ++c) {
                const auto weights = store.posterior(points_[c]);
                double value = 0.0;
                for (Label l = 0; l < num_categories_; ++l) {
                    if (weights[l] == 0.0) continue;
                    const auto next = with_label(code, c, l);
                    if (intervention) {
                        const LabeledStore conditioned = store_for(next);
                        value += weights[l] * (conditioned.uncertainty(points_[q]) +
                                               plan(intervention, next, budget - 1, rounds - 1));
                    } else {
                        value += weights[l] * plan(intervention, next, budget - 1, rounds - 1);
                    }
                }
                if (!intervention) value += unc_q;
                if (value < best) {
                    best = value;
                    action = static_cast<int>(c);
                }
            }
        }
        return {best, action};
    }

    // Exact expected wrong count under true-label dynamics.
    double eval(bool intervention, std::uint64_t known_mask, int budget, int rounds) {
        if (rounds == 0) return 0.0;
        auto& memo = intervention ? eval_with_ : eval_without_;
        const std::uint64_t k = (known_mask * 16 + static_cast<std::uint64_t>(budget)) * 16 +
                                static_cast<std::uint64_t>(rounds);
        if (auto it = memo.find(k); it != memo.end()) return it->second;

        const std::uint64_t code = code_of(known_mask);
        const LabeledStore store = store_for(code);
        double total = 0.0;
        for (const std::size_t q : pool_) {
            const auto [value, action] = plan_round(intervention, store, code, budget, rounds, q);
            (void)value;
            if (action < 0) {
                const double err = store.guess(points_[q]) != truth_[q] ? 1.0 : 0.0;
                total += err + eval(intervention, known_mask, budget, rounds - 1);
            } else {
                const auto asked = static_cast<std::size_t>(action);
                const std::uint64_t next_mask = known_mask | (1ull << asked);
                double err;
                if (intervention) {
                    const LabeledStore conditioned = store_for(code_of(next_mask));
                    err = conditioned.guess(points_[q]) != truth_[q] ? 1.0 : 0.0;
                } else {
                    err = store.guess(points_[q]) != truth_[q] ? 1.0 : 0.0;
                }
                total += err + eval(intervention, next_mask, budget - 1, rounds - 1);
            }
        }
        const double value = total / static_cast<double>(pool_.size());
        memo.emplace(k, value);
        return value;
    }

    std::uint64_t code_of(std::uint64_t known_mask) const {
        std::uint64_t code = 0;
        for (std::size_t i = 0; i < points_.size(); ++i)
            if (known_mask & (1ull << i)) code += (static_cast<std::uint64_t>(truth_[i]) + 1) * pow_[i];
        return code;
    }

    int k_Q_, k_q_;
    int num_categories_ = 2;
    std::vector<FeaturePoint> points_; // P, ascending id
    std::vector<Label> truth_;
    std::vector<std::size_t> pool_;    // indexes into points_
    std::unordered_map<PointId, std::size_t> index_of_;
    std::uint64_t base_ = 3;
    std::vector<std::uint64_t> pow_;
    std::unique_ptr<LabeledStore> store_template_;
    std::unordered_map<std::uint64_t, double> plan_with_, plan_without_;
    std::unordered_map<std::uint64_t, double> eval_with_, eval_without_;
};

} // namespace

Theorem2Report theorem2_check(const ToyInstance& toy, int k_Q,
                              const std::vector<int>& k_q_list, const RunParams& params) {
    Theorem2Report report;
    report.passed = true;
    report.gap_nonincreasing = true;
    double previous_gap = 0.0;
    bool first = true;
    for (const int k_q : k_q_list) {
        if (k_q < 1) throw InputError("theorem2_check: k_q must be positive");
        IdealPairDp dp(toy, k_Q, k_q, params);
        Theorem2Row row;
        row.k_q = k_q;
        row.e_with = dp.expected_error(true);
        row.e_without = dp.expected_error(false);
        row.gap = row.e_without - row.e_with;
        row.bound = static_cast<double>(k_Q) / static_cast<double>(k_q);
        row.within = row.gap >= 0.0 && row.gap <= row.bound;
        if (!row.within) report.passed = false;
        if (!first && row.gap > previous_gap) report.gap_nonincreasing = false;
        previous_gap = row.gap;
        first = false;
        report.rows.push_back(row);
    }
    if (!report.gap_nonincreasing) report.passed = false;
    return report;
}

// ---------------------------------------------------------------------------
// Toy instances and permutation-averaged episodes.
// ---------------------------------------------------------------------------

std::vector<FeaturePoint> toy_points(const ToyInstance& toy, const std::vector<PointId>& ids) {
    std::vector<FeaturePoint> points;
    points.reserve(ids.size());
    for (const PointId id : ids) points.push_back(toy.dataset.points[id]);
    return points;
}

LabelOracle toy_oracle(const ToyInstance& toy) {
    LabelOracle oracle;
    for (std::size_t i = 0; i < toy.dataset.size(); ++i)
        oracle.add(toy.dataset.points[i].id, toy.dataset.labels[i]);
    return oracle;
}

namespace {

ToyInstance make_toy(std::string name,
                     const std::vector<std::pair<std::vector<double>, Label>>& rows,
                     std::vector<PointId> sample_ids, std::vector<PointId> pool_ids,
                     int num_categories) {
    ToyInstance toy;
    toy.name = std::move(name);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        FeaturePoint p;
        p.id = static_cast<PointId>(i);
        p.features = rows[i].first;
        toy.dataset.points.push_back(std::move(p));
        toy.dataset.labels.push_back(rows[i].second);
    }
    for (int c = 0; c < num_categories; ++c)
        toy.dataset.category_names.push_back("c" + std::to_string(c));
    const std::size_t dim = rows.empty() ? 0 : rows[0].first.size();
    toy.dataset.feature_mins.assign(dim, 0.0);
    toy.dataset.feature_maxs.assign(dim, 1.0);
    toy.sample_ids = std::move(sample_ids);
    toy.pool_ids = std::move(pool_ids);
    return toy;
}

} // namespace

std::vector<ToyInstance> bundled_toy_instances() {
    std::vector<ToyInstance> toys;
    // Two well-separated 1-D clusters; T straddles them.
    toys.push_back(make_toy("separated-pair",
                            {{{0.10}, 0}, {{0.90}, 1}, {{0.20}, 0}, {{0.80}, 1}},
                            {0, 1}, {2, 3}, 2));
    // Four pool points in two tight same-label pairs; one question per side
    // covers its pair.
    toys.push_back(make_toy("quartet",
                            {{{0.15}, 0}, {{0.85}, 1}, {{0.10}, 0}, {{0.20}, 0},
                             {{0.80}, 1}, {{0.90}, 1}},
                            {0, 1}, {2, 3, 4, 5}, 2));
    // 2-D, interleaved corners, harder boundary.
    toys.push_back(make_toy("corners",
                            {{{0.10, 0.10}, 0}, {{0.90, 0.90}, 0}, {{0.10, 0.90}, 1},
                             {{0.90, 0.10}, 1}, {{0.20, 0.25}, 0}, {{0.80, 0.20}, 1}},
                            {0, 1, 2, 3}, {4, 5}, 2));
    // Asymmetric: one side of the line is denser.
    toys.push_back(make_toy("dense-side",
                            {{{0.30}, 0}, {{0.35}, 0}, {{0.40}, 0}, {{0.75}, 1}, {{0.85}, 1}},
                            {0, 3}, {1, 2, 4}, 2));
    return toys;
}

double permutation_averaged_error(const ToyInstance& toy, Strategy strategy, int k_Q,
                                  const RunParams& params) {
    const auto pool = toy_points(toy, toy.pool_ids);
    const auto sample = toy_points(toy, toy.sample_ids);
    const LabelOracle oracle = toy_oracle(toy);
    const TrainerOracle trainer(oracle);

    SystemConfig config;
    config.synchronous = true;
    config.intervention = true;
    config.k_q = static_cast<int>(pool.size());
    config.k_Q = k_Q;
    config.seed = 7;

    std::vector<std::size_t> order(pool.size());
    std::iota(order.begin(), order.end(), 0);

    double total = 0.0;
    std::size_t count = 0;
    do {
        std::vector<std::optional<FeaturePoint>> sequence;
        sequence.reserve(pool.size());
        for (const std::size_t i : order) sequence.push_back(pool[i]);
        FixedOrderStream stream(std::move(sequence));

        AgentSetup setup;
        setup.sample_set = sample;
        setup.config = config;
        setup.num_categories = toy.dataset.num_categories();
        setup.dimension = toy.dataset.dimension();
        setup.knn_k = params.knn_k;
        setup.epsilon = params.epsilon;
        setup.smoothing = params.smoothing;
        setup.engine = params.engine;
        EpisodeOptions options;
        if (strategy == Strategy::IdealBruteForce) {
            setup.pool = pool;
            for (const auto& p : pool) options.extra_question_domain.push_back(p.id);
        }
        auto agent = make_agent(strategy, std::move(setup));
        BudgetMetric metric(config.k_q);
        const EpisodeTrace trace =
            run_episode(*agent, sample, trainer, stream, config, metric, options);
        total += trace.records.back().metric_value;
        ++count;
    } while (std::next_permutation(order.begin(), order.end()));
    return total / static_cast<double>(count);
}

// ---------------------------------------------------------------------------
// Emission.
// ---------------------------------------------------------------------------

namespace {

std::string percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.1f", fraction * 100.0);
    return buf;
}

} // namespace

void write_summary_table(std::ostream& out, const ExperimentSpec& spec,
                         const AggregateResult& result) {
    out << "# dataset\tmetric\tk_q\tstrategy\tcumulative\toverall\truns\n";
    for (const auto& agg : result.per_strategy) {
        out << spec.dataset_name << '\t' << metric_name(spec.metric) << '\t' << result.k_q
            << '\t' << strategy_name(agg.strategy) << '\t';
        if (spec.metric == MetricKind::Budget)
            out << percent(agg.mean_final_cumulative);
        else {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "%.1f", agg.mean_final_cumulative);
            out << buf;
        }
        out << '\t' << percent(agg.mean_overall) << '\t' << result.runs << '\n';
    }
}

void write_series_files(const std::string& directory, const std::string& prefix,
                        const AggregateResult& result) {
    std::filesystem::create_directories(directory);
    for (const auto& agg : result.per_strategy) {
        const std::string stem =
            directory + "/" + prefix + "_" + strategy_name(agg.strategy);
        {
            std::ofstream out(stem + "_cumulative.dat");
            if (!out) throw InputError("cannot write " + stem + "_cumulative.dat");
            for (std::size_t t = 0; t < agg.mean_cumulative.size(); ++t) {
                char buf[48];
                std::snprintf(buf, sizeof(buf), "%zu %.9g\n", t + 1, agg.mean_cumulative[t]);
                out << buf;
            }
        }
        {
            std::ofstream out(stem + "_missrate.dat");
            if (!out) throw InputError("cannot write " + stem + "_missrate.dat");
            for (std::size_t t = 0; t < agg.miss_rate.size(); ++t) {
                char buf[48];
                std::snprintf(buf, sizeof(buf), "%zu %.9g\n", t + 1, agg.miss_rate[t]);
                out << buf;
            }
        }
    }
}

} // namespace ojt
