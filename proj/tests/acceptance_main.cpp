// Acceptance suite: runs every gate criterion at its pinned tolerance and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fail.

#include "ojt/agents.hpp"
#include "ojt/classifier.hpp"
#include "ojt/dataset.hpp"
#include "ojt/enumeration_oracle.hpp"
#include "ojt/harness.hpp"
#include "ojt/ideal.hpp"
#include "ojt/metrics.hpp"
#include "ojt/protocol.hpp"
#include "ojt/rng.hpp"
#include "ojt/synth.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace ojt;

namespace {

using clock_type = std::chrono::steady_clock;

struct CriterionResult {
    CriterionResult(int id_, std::string title_) : id(id_), title(std::move(title_)) {}
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

std::string locate_dataset(const std::string& name) {
    namespace fs = std::filesystem;
    std::vector<std::string> candidates;
    if (const char* dir = std::getenv("OJT_DATA_DIR")) {
        candidates.push_back(std::string(dir) + "/" + name + ".data");
        candidates.push_back(std::string(dir) + "/" + name + ".synth.data");
    }
    candidates.push_back("data/" + name + ".data");
    candidates.push_back("data/" + name + ".synth.data");
    for (const auto& c : candidates)
        if (fs::exists(c)) return c;
    throw InputError("no dataset file for '" + name + "'; run ojt-datagen or set OJT_DATA_DIR");
}

ExperimentSpec ionosphere_spec(int k_q, std::vector<Strategy> strategies) {
    ExperimentSpec spec;
    spec.dataset_name = "ionosphere";
    spec.dataset = load_records(locate_dataset("ionosphere"));
    spec.split_rule.pool_size = 150;
    spec.config.synchronous = true;
    spec.config.intervention = true;
    spec.config.k_q = k_q;
    spec.config.k_Q = 20;
    spec.config.seed = 1;
    spec.strategies = std::move(strategies);
    spec.runs = 100;
    return spec;
}

// Shared by criteria 1-3: the Table-1 experiment with per-run traces kept.
struct Table1Runs {
    std::vector<RunOutput> runs;
    double mean_cum_ojt = 0.0, mean_cum_active = 0.0, mean_cum_always = 0.0;
    double seconds = 0.0;
};

Table1Runs table1_experiment() {
    const auto start = clock_type::now();
    ExperimentSpec spec =
        ionosphere_spec(50, {Strategy::OJT, Strategy::Active, Strategy::AlwaysAsk});
    const Dataset normalized = normalize(spec.dataset);
    const DistanceMatrix distances(normalized);

    Table1Runs out;
    out.runs.resize(static_cast<std::size_t>(spec.runs));
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < spec.runs; ++i)
        out.runs[static_cast<std::size_t>(i)] = run_single(spec, normalized, distances, i);

    double sums[3] = {0.0, 0.0, 0.0};
    for (const auto& run : out.runs)
        for (int s = 0; s < 3; ++s)
            sums[s] += run.traces[static_cast<std::size_t>(s)].records.back().metric_value;
    out.mean_cum_ojt = 100.0 * sums[0] / spec.runs;
    out.mean_cum_active = 100.0 * sums[1] / spec.runs;
    out.mean_cum_always = 100.0 * sums[2] / spec.runs;
    out.seconds = std::chrono::duration<double>(clock_type::now() - start).count();
    return out;
}

CriterionResult criterion1(const Table1Runs& table) {
    CriterionResult r(1, "Table 1 qualitative reproduction (ionosphere, k_Q=20, k_q=50, 100 runs)");
    r.seconds = table.seconds;
    const double ojt = table.mean_cum_ojt;
    const double active = table.mean_cum_active;
    const double always = table.mean_cum_always;

    const bool ordering = ojt < always && always < active;
    const bool near_ojt = std::abs(ojt - 11.0) <= 4.0;
    const bool near_active = std::abs(active - 19.2) <= 4.0;
    const bool near_always = std::abs(always - 13.7) <= 4.0;
    const bool in_time = table.seconds <= 300.0;

    r.passed = ordering && near_ojt && near_active && near_always && in_time;
    char buf[256];
    std::snprintf(buf, sizeof(buf),
                  "ojt=%.1f (target 11.0±4.0) always-ask=%.1f (13.7±4.0) active=%.1f "
                  "(19.2±4.0), ordering %s, %.0fs",
                  ojt, always, active, ordering ? "ojt<always-ask<active" : "VIOLATED",
                  table.seconds);
    r.detail = buf;
    return r;
}

CriterionResult criterion2(const Table1Runs& table) {
    const auto start = clock_type::now();
    CriterionResult r(2, "Theorem 2 echo: OJT-vs-Active gap shrinks from k_q=50 to k_q=100");

    ExperimentSpec spec = ionosphere_spec(100, {Strategy::OJT, Strategy::Active});
    const AggregateResult agg = run_experiment(spec);
    const double gap50 = (table.mean_cum_active - table.mean_cum_ojt) / 100.0;
    const double gap100 =
        agg.per_strategy[1].mean_final_cumulative - agg.per_strategy[0].mean_final_cumulative;

    r.passed = gap100 < gap50;
    r.seconds = std::chrono::duration<double>(clock_type::now() - start).count();
    char buf[160];
    std::snprintf(buf, sizeof(buf), "gap(k_q=50)=%.1fpt gap(k_q=100)=%.1fpt, %.0fs",
                  100.0 * gap50, 100.0 * gap100, r.seconds);
    r.detail = buf;
    return r;
}

CriterionResult criterion3(const Table1Runs& table) {
    CriterionResult r(3, "Always-ask exactness: zero cumulative error through min(k_Q,k_q)");
    int violations = 0;
    for (const auto& run : table.runs) {
        const auto& trace = run.traces[2]; // always-ask
        for (int t = 0; t < 20; ++t) {
            const auto& rec = trace.records[static_cast<std::size_t>(t)];
            if (!rec.correct || !*rec.correct || rec.metric_value != 0.0) ++violations;
        }
    }
    r.passed = violations == 0;
    r.detail = std::to_string(table.runs.size()) + " runs x 20 rounds, " +
               std::to_string(violations) + " violations (zero tolerance)";
    return r;
}

CriterionResult criterion4() {
    const auto start = clock_type::now();
    CriterionResult r(4, "Theorem 1 constructive equivalence across 20 seeds");

    SynthProfile blobs;
    blobs.name = "blobs";
    blobs.label_names = {"a", "b"};
    blobs.class_counts = {30, 30};
    blobs.dims = 4;
    blobs.informative_dims = 4;
    blobs.cluster_spread = 0.15;
    blobs.seed = 11;

    ExperimentSpec spec;
    spec.dataset_name = "blobs";
    spec.dataset = generate_synthetic(blobs);
    spec.split_rule.pool_size = 20;
    spec.config.synchronous = true;
    spec.config.intervention = false;
    spec.config.query_sampling = QuerySampling::WithReplacement;
    spec.config.k_q = 40;
    spec.config.k_Q = 8;
    spec.config.seed = 1;
    spec.strategies = {Strategy::OJT, Strategy::Active};
    spec.runs = 20;

    const Theorem1Report report = theorem1_check(spec);
    r.passed = report.passed;
    r.seconds = std::chrono::duration<double>(clock_type::now() - start).count();
    r.detail = report.detail + " (bit-identical, zero tolerance)";
    return r;
}

CriterionResult criterion5() {
    const auto start = clock_type::now();
    CriterionResult r(5, "Theorem 2 bound on toy instances (k_Q<=2, k_q<=8, |R|<=4)");
    const std::vector<int> k_q_list = {2, 4, 8};
    int checked = 0;
    bool all_ok = true;
    std::string failure;
    for (const auto& toy : bundled_toy_instances()) {
        if (toy.pool_ids.size() > 4) continue;
        for (int k_Q = 0; k_Q <= 2; ++k_Q) {
            const Theorem2Report report = theorem2_check(toy, k_Q, k_q_list);
            ++checked;
            bool ok = report.passed;
            if (k_Q == 0) {
                for (const auto& row : report.rows) ok = ok && row.gap == 0.0;
            }
            if (!ok && failure.empty())
                failure = toy.name + " k_Q=" + std::to_string(k_Q);
            all_ok = all_ok && ok;
        }
    }
    r.passed = all_ok && checked > 0;
    r.seconds = std::chrono::duration<double>(clock_type::now() - start).count();
    std::ostringstream detail;
    detail << checked << " (instance,k_Q) pairs over k_q in {2,4,8}";
    if (!failure.empty()) detail << ", first failure: " << failure;
    detail << " (zero tolerance)";
    r.detail = detail.str();
    return r;
}

CriterionResult criterion6() {
    const auto start = clock_type::now();
    CriterionResult r(6, "Ideal-agent optimality against the enumeration oracle");
    double max_dev = 0.0;
    bool optimal = true;
    std::string failure;

    for (const auto& toy : bundled_toy_instances()) {
        const auto pool = toy_points(toy, toy.pool_ids);
        const auto sample = toy_points(toy, toy.sample_ids);
        std::vector<FeaturePoint> candidates = sample;
        candidates.insert(candidates.end(), pool.begin(), pool.end());

        for (int budget = 0; budget <= 2; ++budget) {
            for (std::size_t qi = 0; qi < pool.size(); ++qi) {
                std::vector<FeaturePoint> remaining;
                for (std::size_t j = 0; j < pool.size(); ++j)
                    if (j != qi) remaining.push_back(pool[j]);
                LabeledStore store(toy.dataset.num_categories(), toy.dataset.dimension());
                const auto result =
                    ideal_expected_wrong(store, pool[qi], remaining, budget, candidates);
                const double oracle = oracle_min_expected_wrong(store, pool[qi], remaining,
                                                                budget, candidates);
                max_dev = std::max(max_dev, std::abs(result.penalty - oracle));
            }
        }

        for (int k_Q = 1; k_Q <= 2; ++k_Q) {
            const double ideal =
                permutation_averaged_error(toy, Strategy::IdealBruteForce, k_Q);
            for (const Strategy other : {Strategy::OJT, Strategy::Active,
                                         Strategy::AlwaysAsk, Strategy::Passive}) {
                const double error = permutation_averaged_error(toy, other, k_Q);
                if (ideal > error + 1e-9) {
                    optimal = false;
                    if (failure.empty())
                        failure = toy.name + ": ideal " + std::to_string(ideal) + " > " +
                                  strategy_name(other) + " " + std::to_string(error);
                }
            }
        }
    }
    r.seconds = std::chrono::duration<double>(clock_type::now() - start).count();
    r.passed = max_dev < 1e-9 && optimal && r.seconds <= 60.0;
    char buf[224];
    std::snprintf(buf, sizeof(buf), "max recursion-vs-oracle deviation %.3g (<1e-9), %s%s, %.1fs",
                  max_dev, optimal ? "no strategy beats ideal" : failure.c_str(),
                  r.seconds <= 60.0 ? "" : ", OVER TIME", r.seconds);
    r.detail = buf;
    return r;
}

CriterionResult criterion7() {
    const auto start = clock_type::now();
    CriterionResult r(7, "Classifier property suite over randomized cases");
    Rng rng(20250808);
    int cases = 0;
    int normalization_bad = 0, restore_bad = 0, lookahead_bad = 0, self_bad = 0;

    for (int trial = 0; trial < 1000; ++trial) {
        const int L = 2 + static_cast<int>(rng.bounded(3));
        const int k = 1 + static_cast<int>(rng.bounded(6));
        const std::size_t dims = 2 + rng.bounded(3);
        const std::size_t n = rng.bounded(12);
        LabeledStore store(L, dims, k, 1e-9);
        std::vector<std::pair<FeaturePoint, Label>> labeled;
        for (std::size_t i = 0; i < n; ++i) {
            FeaturePoint p;
            p.id = static_cast<PointId>(i);
            p.features.resize(dims);
            for (auto& f : p.features) f = rng.uniform01();
            const auto label = static_cast<Label>(rng.bounded(static_cast<std::uint64_t>(L)));
            labeled.emplace_back(p, label);
            store.commit(p, label);
        }
        FeaturePoint target, candidate;
        target.id = 500;
        candidate.id = 501;
        target.features.resize(dims);
        candidate.features.resize(dims);
        for (auto& f : target.features) f = rng.uniform01();
        for (auto& f : candidate.features) f = rng.uniform01();

        // Posterior normalization.
        const auto post = store.posterior(target);
        double sum = 0.0;
        for (const double v : post) sum += v;
        if (std::abs(sum - 1.0) > 1e-12) ++normalization_bad;

        // Assume/retract restores outputs bit-exactly.
        const auto before = store.posterior(target);
        store.assume(candidate, static_cast<Label>(rng.bounded(static_cast<std::uint64_t>(L))));
        store.assume(target, 0);
        store.retract(target);
        store.retract(candidate);
        if (store.posterior(target) != before) ++restore_bad;

        // Lookahead equals the explicit per-label expansion.
        const auto weights = store.posterior(candidate);
        double explicit_sum = 0.0;
        for (Label c = 0; c < L; ++c) {
            store.assume(candidate, c);
            explicit_sum += weights[c] * store.uncertainty(target);
            store.retract(candidate);
        }
        if (std::abs(store.lookahead_uncertainty(target, candidate) - explicit_sum) > 1e-12)
            ++lookahead_bad;

        // Self-lookahead collapses.
        if (store.lookahead_uncertainty(target, target) >= 1e-6) ++self_bad;
        ++cases;
    }
    r.seconds = std::chrono::duration<double>(clock_type::now() - start).count();
    r.passed = normalization_bad == 0 && restore_bad == 0 && lookahead_bad == 0 &&
               self_bad == 0 && cases >= 1000;
    char buf[224];
    std::snprintf(buf, sizeof(buf),
                  "%d cases: normalization %d bad, restore %d bad, lookahead %d bad, "
                  "self-lookahead %d bad",
                  cases, normalization_bad, restore_bad, lookahead_bad, self_bad);
    r.detail = buf;
    return r;
}

CriterionResult criterion8() {
    const auto start = clock_type::now();
    CriterionResult r(8, "Determinism: identical compare flags give byte-identical outputs");

    auto compare_once = [&](int threads) {
#ifdef _OPENMP
        omp_set_num_threads(threads);
#else
        (void)threads;
#endif
        ExperimentSpec spec =
            ionosphere_spec(25, {Strategy::OJT, Strategy::Active, Strategy::AlwaysAsk});
        spec.runs = 16;
        const AggregateResult agg = run_experiment(spec);
        std::ostringstream out;
        write_summary_table(out, spec, agg);
        for (const auto& s : agg.per_strategy) {
            for (const double v : s.mean_cumulative) {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.17g\n", v);
                out << buf;
            }
            for (const double v : s.miss_rate) {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.17g\n", v);
                out << buf;
            }
        }
        return out.str();
    };

    const std::string serial = compare_once(1);
    const std::string parallel = compare_once(4);
    const std::string repeat = compare_once(4);
#ifdef _OPENMP
    omp_set_num_threads(omp_get_num_procs());
#endif
    r.passed = serial == parallel && parallel == repeat;
    r.seconds = std::chrono::duration<double>(clock_type::now() - start).count();
    r.detail = std::string("1-thread vs 4-thread vs repeat: ") +
               (r.passed ? "byte-identical" : "MISMATCH");
    return r;
}

} // namespace

int main() {
    std::vector<CriterionResult> results;
    try {
        const Table1Runs table = table1_experiment();
        results.push_back(criterion1(table));
        results.push_back(criterion2(table));
        results.push_back(criterion3(table));
        results.push_back(criterion4());
        results.push_back(criterion5());
        results.push_back(criterion6());
        results.push_back(criterion7());
        results.push_back(criterion8());
    } catch (const std::exception& e) {
        std::printf("FATAL: %s\n", e.what());
        return 1;
    }

    int failed = 0;
    for (const auto& r : results) {
        std::printf("[%s] criterion %d: %s - %s\n", r.passed ? "PASS" : "FAIL", r.id,
                    r.title.c_str(), r.detail.c_str());
        if (!r.passed) ++failed;
    }
    std::printf("%d/%zu criteria passed\n", static_cast<int>(results.size()) - failed,
                results.size());
    return failed == 0 ? 0 : 1;
}
