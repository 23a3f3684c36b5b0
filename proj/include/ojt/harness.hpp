#pragma once

#include "ojt/agents.hpp"
#include "ojt/dataset.hpp"
#include "ojt/metrics.hpp"
#include "ojt/protocol.hpp"
#include "ojt/types.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace ojt {

struct SplitRule {
    /// nullopt: S = everything not in the pool.
    std::optional<std::size_t> sample_size;
    std::size_t pool_size = 150;
};

struct RunParams {
    int knn_k = 5;
    double epsilon = 1e-9;
    double smoothing = kDefaultSmoothing;
    ScoringEngine engine = ScoringEngine::Parallel;
};

struct ExperimentSpec {
    std::string dataset_name;
    Dataset dataset; // already loaded; run_experiment normalizes
    SplitRule split_rule;
    SystemConfig config; // config.seed is the base seed
    std::vector<Strategy> strategies;
    MetricKind metric = MetricKind::Budget;
    CostModel costs;
    int runs = 1;
    RunParams params;
    double null_query_probability = 0.0; // async streams only
};

struct StrategyAggregate {
    Strategy strategy = Strategy::OJT;
    std::vector<double> mean_cumulative; // length k_q (metric series mean)
    std::vector<double> miss_rate;       // length k_q
    double mean_final_cumulative = 0.0;
    double final_cumulative_stderr = 0.0;
    double mean_overall = 0.0;
    double overall_stderr = 0.0;
};

struct AggregateResult {
    std::vector<StrategyAggregate> per_strategy;
    int runs = 0;
    int k_q = 0;
};

/// Seeded multi-run execution. Run i draws its seed from
/// derive_seed(base, i); all strategies within a run share the split and
/// the query order. Runs execute in parallel; aggregation is an ordered
/// fold, so the result is byte-identical regardless of thread count.
AggregateResult run_experiment(const ExperimentSpec& spec);

/// Per-run detail used by tests and the acceptance suite.
struct RunOutput {
    std::vector<EpisodeTrace> traces;   // one per strategy, spec order
    std::vector<double> overall_errors; // final-classifier pool error
};
RunOutput run_single(const ExperimentSpec& spec, const Dataset& normalized,
                     const DistanceMatrix& distances, int run_index);

struct Theorem1Report {
    bool passed = false;
    int seeds_tested = 0;
    std::string detail;
};

/// Constructive Theorem 1 equivalence: in a synchronous, no-intervention,
/// with-replacement system, the discard-q OJT agent and the active learner
/// produce bit-identical question and guess streams for every tested seed.
/// Refuses specs outside the theorem's regime.
Theorem1Report theorem1_check(const ExperimentSpec& spec);

/// A tiny fully-specified instance: S and T drawn from a hand-built dataset.
struct ToyInstance {
    std::string name;
    Dataset dataset; // already normalized coordinates
    std::vector<PointId> sample_ids; // S
    std::vector<PointId> pool_ids;   // T
};

std::vector<FeaturePoint> toy_points(const ToyInstance& toy, const std::vector<PointId>& ids);
LabelOracle toy_oracle(const ToyInstance& toy);

/// Instances shipped for the ideal-agent and theorem drivers.
std::vector<ToyInstance> bundled_toy_instances();

struct Theorem2Row {
    int k_q = 0;
    double e_with = 0.0;    // e_A, intervention
    double e_without = 0.0; // e_B
    double gap = 0.0;
    double bound = 0.0; // k_Q/k_q
    bool within = false;
};

struct Theorem2Report {
    std::vector<Theorem2Row> rows;
    bool gap_nonincreasing = false;
    bool passed = false;
};

/// Exact ideal-agent pair on a toy instance: queries are i.i.d. uniform
/// with-replacement draws from T (R := T); planning marginalizes unknown
/// labels over the classifier posterior; evaluation takes the exact
/// expectation over all query sequences with true-label facts.
Theorem2Report theorem2_check(const ToyInstance& toy, int k_Q,
                              const std::vector<int>& k_q_list,
                              const RunParams& params = {});

/// Average final cumulative error of `strategy` over all |T|! query orders
/// of the toy pool (k_q = |T|, synchronous, intervention).
double permutation_averaged_error(const ToyInstance& toy, Strategy strategy,
                                  int k_Q, const RunParams& params = {});

/// Table-1-shaped summary: dataset, metric, k_q, then cumulative/overall
/// percentages per strategy.
void write_summary_table(std::ostream& out, const ExperimentSpec& spec,
                         const AggregateResult& result);

/// Two-column series files (round index, value) per strategy:
/// <prefix>_<strategy>_cumulative.dat and <prefix>_<strategy>_missrate.dat.
void write_series_files(const std::string& directory, const std::string& prefix,
                        const AggregateResult& result);

} // namespace ojt
