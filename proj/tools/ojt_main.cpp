#include "ojt/agents.hpp"
#include "ojt/dataset.hpp"
#include "ojt/enumeration_oracle.hpp"
#include "ojt/harness.hpp"
#include "ojt/ideal.hpp"
#include "ojt/metrics.hpp"
#include "ojt/protocol.hpp"
#include "ojt/synth.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace ojt;

std::string resolve_dataset_path(const std::string& value) {
    namespace fs = std::filesystem;
    std::vector<std::string> tried;
    auto try_path = [&](const std::string& p) -> std::optional<std::string> {
        if (!p.empty() && fs::exists(p) && fs::is_regular_file(p)) return p;
        tried.push_back(p);
        return std::nullopt;
    };

    if (auto p = try_path(value)) return *p;
    if (const char* dir = std::getenv("OJT_DATA_DIR")) {
        const std::string prefix = std::string(dir) + "/";
        if (auto p = try_path(prefix + value)) return *p;
        if (auto p = try_path(prefix + value + ".data")) return *p;
        if (auto p = try_path(prefix + value + ".synth.data")) return *p;
    }
    if (auto p = try_path("data/" + value)) return *p;
    if (auto p = try_path("data/" + value + ".data")) return *p;
    if (auto p = try_path("data/" + value + ".synth.data")) return *p;

    std::string msg = "dataset not found: " + value + " (tried";
    for (const auto& t : tried) msg += " " + t;
    msg += "); set OJT_DATA_DIR or pass a path";
    throw InputError(msg);
}

struct CommonFlags {
    std::string dataset;
    int k_q = 50;
    int k_Q = 20;
    std::vector<std::string> strategies = {"ojt", "active", "always-ask"};
    int runs = 100;
    std::uint64_t seed = 1;
    std::string metric = "budget";
    bool async_mode = false;
    bool no_intervention = false;
    double availability = 1.0;
    double null_query_prob = 0.0;
    std::string sampling = "without";
    std::string out_dir = "out";
    int pool_size = 150;
    int sample_size = -1; // -1: everything not in the pool
    int knn_k = 5;
    double epsilon = 1e-9;
    double smoothing = kDefaultSmoothing;
    std::string engine = "parallel";
    double question_cost = 1.0;
    double wrong_cost = 1.0;
    std::string question_cost_table;
    std::string wrong_cost_table;
    std::string config_file;
};

void add_common_options(CLI::App* cmd, CommonFlags& f, bool dataset_required) {
    auto* ds = cmd->add_option("--dataset", f.dataset,
                               "dataset name or path (OJT_DATA_DIR is searched)");
    if (dataset_required) ds->required();
    cmd->add_option("--kq", f.k_q, "query limit k_q")->check(CLI::Range(1, 1000000));
    cmd->add_option("--kQ", f.k_Q, "question budget k_Q")->check(CLI::Range(0, 1000000));
    cmd->add_option("--strategy", f.strategies,
                    "strategies: ojt active always-ask passive ideal");
    cmd->add_option("--runs", f.runs, "number of seeded runs")->check(CLI::Range(1, 1000000));
    cmd->add_option("--seed", f.seed, "base seed");
    cmd->add_option("--metric", f.metric, "budget or utility")
        ->check(CLI::IsMember({"budget", "utility"}));
    cmd->add_flag("--async", f.async_mode, "asynchronous system (null queries/facts allowed)");
    cmd->add_flag("--no-intervention", f.no_intervention,
                  "answer before the question/fact exchange");
    cmd->add_option("--availability", f.availability,
                    "async trainer availability probability")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--null-query-prob", f.null_query_prob,
                    "async probability of an empty query slot")
        ->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--sampling", f.sampling, "query sampling: without or with (replacement)")
        ->check(CLI::IsMember({"without", "with"}));
    cmd->add_option("--out", f.out_dir, "output directory");
    cmd->add_option("--pool-size", f.pool_size, "|T|, the query pool size")
        ->check(CLI::Range(1, 10000000));
    cmd->add_option("--sample-size", f.sample_size, "|S|; -1 uses every non-pool record")
        ->check(CLI::Range(-1, 10000000));
    cmd->add_option("--knn-k", f.knn_k, "classifier neighbor count")->check(CLI::Range(1, 1000));
    cmd->add_option("--epsilon", f.epsilon, "inverse-distance weighting epsilon")
        ->check(CLI::Range(1e-300, 1.0));
    cmd->add_option("--smoothing", f.smoothing,
                    "distance scale of the uniform posterior blend")
        ->check(CLI::Range(0.0, 100.0));
    cmd->add_option("--engine", f.engine, "scoring engine: parallel or reference")
        ->check(CLI::IsMember({"parallel", "reference", "fast", "serial"}));
    cmd->add_option("--question-cost", f.question_cost, "utility metric C_Q constant")
        ->check(CLI::Range(0.0, 1e12));
    cmd->add_option("--wrong-cost", f.wrong_cost, "utility metric C_w constant")
        ->check(CLI::Range(0.0, 1e12));
    cmd->add_option("--question-cost-table", f.question_cost_table,
                    "per-point C_Q overrides: text rows of 'point_id cost'")
        ->check(CLI::ExistingFile);
    cmd->add_option("--wrong-cost-table", f.wrong_cost_table,
                    "per-point C_w overrides: text rows of 'point_id cost'")
        ->check(CLI::ExistingFile);
    // The file itself is expanded into argv before parsing (see
    // expand_config_args); this option only documents the flag.
    cmd->add_option("--config", f.config_file,
                    "key=value file supplying any of these flags; explicit flags win");
}

ExperimentSpec build_spec(const CommonFlags& f) {
    ExperimentSpec spec;
    spec.dataset_name = f.dataset;
    const std::string path = resolve_dataset_path(f.dataset);
    spec.dataset = load_records(path);
    spec.split_rule.pool_size = static_cast<std::size_t>(f.pool_size);
    if (f.sample_size >= 0) spec.split_rule.sample_size = static_cast<std::size_t>(f.sample_size);

    spec.config.synchronous = !f.async_mode;
    spec.config.intervention = !f.no_intervention;
    spec.config.k_q = f.k_q;
    spec.config.k_Q = f.k_Q;
    spec.config.query_sampling =
        f.sampling == "with" ? QuerySampling::WithReplacement : QuerySampling::WithoutReplacement;
    spec.config.trainer_availability = f.async_mode ? f.availability : 1.0;
    spec.config.seed = f.seed;

    for (const auto& name : f.strategies) spec.strategies.push_back(strategy_from_name(name));
    spec.metric = metric_from_name(f.metric);
    spec.costs = CostModel::constants(f.question_cost, f.wrong_cost);
    if (!f.question_cost_table.empty()) {
        std::ifstream in(f.question_cost_table);
        spec.costs.question_cost_overrides = parse_cost_table(in, f.question_cost_table);
    }
    if (!f.wrong_cost_table.empty()) {
        std::ifstream in(f.wrong_cost_table);
        spec.costs.wrong_cost_overrides = parse_cost_table(in, f.wrong_cost_table);
    }
    spec.runs = f.runs;
    spec.params.knn_k = f.knn_k;
    spec.params.epsilon = f.epsilon;
    spec.params.smoothing = f.smoothing;
    spec.params.engine = engine_from_name(f.engine);
    spec.null_query_probability = f.null_query_prob;
    return spec;
}

int check_config(const ExperimentSpec& spec) {
    const auto violations = validate_config(spec.config, spec.split_rule.pool_size);
    if (!violations.empty()) {
        for (const auto& v : violations) std::cerr << "config error: " << v << "\n";
        return 2;
    }
    return 0;
}

int cmd_run(const CommonFlags& f) {
    ExperimentSpec spec = build_spec(f);
    if (spec.strategies.size() != 1) {
        std::cerr << "run: exactly one --strategy expected\n";
        return 2;
    }
    if (int rc = check_config(spec)) return rc;

    const Dataset normalized = normalize(spec.dataset);
    const DistanceMatrix distances(normalized);
    const RunOutput out = run_single(spec, normalized, distances, 0);

    std::filesystem::create_directories(f.out_dir);
    const std::string trace_path = f.out_dir + "/trace.txt";
    std::ofstream trace_file(trace_path);
    if (!trace_file) throw InputError("cannot write " + trace_path);
    write_trace(trace_file, out.traces[0]);

    const auto& trace = out.traces[0];
    std::cout << "strategy " << strategy_name(spec.strategies[0]) << ": final "
              << metric_name(spec.metric) << " value "
              << trace.records.back().metric_value << ", overall error "
              << out.overall_errors[0] << ", questions asked " << trace.questions_asked()
              << "\n"
              << "trace written to " << trace_path << "\n";
    return 0;
}

int cmd_compare(const CommonFlags& f) {
    ExperimentSpec spec = build_spec(f);
    if (int rc = check_config(spec)) return rc;

    const AggregateResult result = run_experiment(spec);
    write_summary_table(std::cout, spec, result);

    std::filesystem::create_directories(f.out_dir);
    const std::string table_path = f.out_dir + "/summary.txt";
    std::ofstream table_file(table_path);
    if (!table_file) throw InputError("cannot write " + table_path);
    write_summary_table(table_file, spec, result);
    return 0;
}

int cmd_plotdata(const CommonFlags& f) {
    ExperimentSpec spec = build_spec(f);
    if (int rc = check_config(spec)) return rc;

    const AggregateResult result = run_experiment(spec);
    const std::string prefix = spec.dataset_name + "_kq" + std::to_string(spec.config.k_q);
    write_series_files(f.out_dir, prefix, result);
    std::cout << "series written under " << f.out_dir << "/" << prefix << "_*\n";
    return 0;
}

int cmd_theorem_check(const CommonFlags& f, int which, int t2_kQ, std::vector<int> t2_kq_list) {
    bool all_passed = true;

    if (which == 1 || which == 0) {
        CommonFlags tf = f;
        tf.no_intervention = true;
        tf.async_mode = false;
        tf.sampling = "with";

        ExperimentSpec spec;
        if (!f.dataset.empty()) {
            spec = build_spec(tf);
        } else {
            // Tiny built-in synthetic set keeps the check self-contained.
            SynthProfile blobs;
            blobs.name = "blobs";
            blobs.label_names = {"a", "b"};
            blobs.class_counts = {30, 30};
            blobs.dims = 4;
            blobs.informative_dims = 4;
            blobs.clusters_per_class = 1;
            blobs.cluster_spread = 0.15;
            blobs.seed = 11;
            spec.dataset_name = "blobs";
            spec.dataset = generate_synthetic(blobs);
            spec.split_rule.pool_size = 20;
            spec.config.k_q = tf.k_q;
            spec.config.k_Q = tf.k_Q;
            spec.config.seed = tf.seed;
            spec.strategies = {Strategy::OJT, Strategy::Active};
            spec.runs = tf.runs;
            spec.params.knn_k = tf.knn_k;
            spec.params.epsilon = tf.epsilon;
            spec.params.smoothing = tf.smoothing;
            spec.params.engine = engine_from_name(tf.engine);
            spec.config.intervention = false;
            spec.config.synchronous = true;
            spec.config.query_sampling = QuerySampling::WithReplacement;
        }
        const Theorem1Report report = theorem1_check(spec);
        std::cout << (report.passed ? "PASS" : "FAIL") << " theorem 1: " << report.detail
                  << "\n";
        all_passed = all_passed && report.passed;
    }

    if (which == 2 || which == 0) {
        for (const auto& toy : bundled_toy_instances()) {
            if (toy.pool_ids.size() > 4) continue;
            RunParams params;
            params.knn_k = f.knn_k;
            params.epsilon = f.epsilon;
            params.smoothing = f.smoothing;
            const Theorem2Report report = theorem2_check(toy, t2_kQ, t2_kq_list, params);
            std::cout << (report.passed ? "PASS" : "FAIL") << " theorem 2 on " << toy.name
                      << ":";
            for (const auto& row : report.rows) {
                char buf[96];
                std::snprintf(buf, sizeof(buf), " kq=%d gap=%.6f bound=%.6f", row.k_q,
                              row.gap, row.bound);
                std::cout << buf;
            }
            std::cout << (report.gap_nonincreasing ? " (gap nonincreasing)" : " (gap increased)")
                      << "\n";
            all_passed = all_passed && report.passed;
        }
    }
    return all_passed ? 0 : 1;
}

int cmd_ideal_verify(const CommonFlags& f) {
    double worst = 0.0;
    bool all_ok = true;
    for (const auto& toy : bundled_toy_instances()) {
        const auto pool = toy_points(toy, toy.pool_ids);
        const auto sample = toy_points(toy, toy.sample_ids);
        std::vector<FeaturePoint> candidates = sample;
        candidates.insert(candidates.end(), pool.begin(), pool.end());

        double max_dev = 0.0;
        for (int budget = 0; budget <= 2; ++budget) {
            for (std::size_t qi = 0; qi < pool.size(); ++qi) {
                std::vector<FeaturePoint> remaining;
                for (std::size_t j = 0; j < pool.size(); ++j)
                    if (j != qi) remaining.push_back(pool[j]);

                LabeledStore store(toy.dataset.num_categories(), toy.dataset.dimension(),
                                   f.knn_k, f.epsilon, f.smoothing);
                const auto result = ideal_expected_wrong(store, pool[qi], remaining, budget,
                                                         candidates);
                const double oracle = oracle_min_expected_wrong(store, pool[qi], remaining,
                                                                budget, candidates);
                max_dev = std::max(max_dev, std::abs(result.penalty - oracle));
            }
        }
        const bool ok = max_dev < 1e-9;
        all_ok = all_ok && ok;
        worst = std::max(worst, max_dev);
        char buf[128];
        std::snprintf(buf, sizeof(buf), "%s ideal-verify %s: max deviation %.3g",
                      ok ? "PASS" : "FAIL", toy.name.c_str(), max_dev);
        std::cout << buf << "\n";
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "worst deviation across instances: %.3g", worst);
    std::cout << buf << "\n";
    return all_ok ? 0 : 1;
}

std::string trimmed_line(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Expands "--config FILE" into the flags the file supplies. A key=value line
// becomes "--key value" ("true"/"1" values become bare flags); keys the user
// already passed explicitly are skipped, so the command line always wins.
std::vector<std::string> expand_config_args(const std::vector<std::string>& args) {
    std::string config_path;
    std::vector<std::string> out;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) {
            config_path = args[++i];
        } else if (args[i].rfind("--config=", 0) == 0) {
            config_path = args[i].substr(9);
        } else {
            out.push_back(args[i]);
        }
    }
    if (config_path.empty()) return out;

    std::ifstream in(config_path);
    if (!in) throw InputError("cannot open config file: " + config_path);
    auto have_flag = [&](const std::string& flag) {
        for (const auto& a : out)
            if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
        return false;
    };
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        const std::string t = trimmed_line(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos || eq == 0)
            throw InputError(config_path + ": row " + std::to_string(row) +
                             ": expected key=value");
        const std::string key = trimmed_line(t.substr(0, eq));
        const std::string value = trimmed_line(t.substr(eq + 1));
        const std::string flag = "--" + key;
        if (have_flag(flag)) continue;
        if (value == "true") {
            out.push_back(flag);
        } else if (value == "false") {
            // absent flag keeps its default
        } else {
            out.push_back(flag);
            out.push_back(value);
        }
    }
    return out;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"on-the-job-training simulator and benchmark harness"};
    app.require_subcommand(1);

    CommonFlags run_flags, compare_flags, plot_flags, theorem_flags, ideal_flags;
    run_flags.strategies = {"ojt"};
    run_flags.runs = 1;

    auto* run_cmd = app.add_subcommand("run", "run one episode and write its trace");
    add_common_options(run_cmd, run_flags, true);

    auto* compare_cmd =
        app.add_subcommand("compare", "run the strategy matrix and print the summary table");
    add_common_options(compare_cmd, compare_flags, true);

    auto* plot_cmd =
        app.add_subcommand("plotdata", "emit cumulative-error and miss-rate series files");
    add_common_options(plot_cmd, plot_flags, true);

    auto* theorem_cmd = app.add_subcommand("theorem-check", "drive the theorem 1/2 checks");
    add_common_options(theorem_cmd, theorem_flags, false);
    int which_theorem = 0;
    int t2_kQ = 1;
    std::vector<int> t2_kq_list = {2, 4, 8};
    theorem_cmd->add_option("--theorem", which_theorem, "1, 2, or 0 for both")
        ->check(CLI::Range(0, 2));
    theorem_cmd->add_option("--t2-kQ", t2_kQ, "theorem 2 question budget")
        ->check(CLI::Range(0, 3));
    theorem_cmd->add_option("--t2-kq", t2_kq_list, "theorem 2 k_q list");
    theorem_flags.runs = 20;
    theorem_flags.k_q = 30;
    theorem_flags.k_Q = 5;

    auto* ideal_cmd = app.add_subcommand(
        "ideal-verify", "compare the expected-wrong recursion against the enumeration oracle");
    add_common_options(ideal_cmd, ideal_flags, false);

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = expand_config_args(args);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const auto& a : args) cargs.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (run_cmd->parsed()) return cmd_run(run_flags);
        if (compare_cmd->parsed()) return cmd_compare(compare_flags);
        if (plot_cmd->parsed()) return cmd_plotdata(plot_flags);
        if (theorem_cmd->parsed())
            return cmd_theorem_check(theorem_flags, which_theorem, t2_kQ, t2_kq_list);
        if (ideal_cmd->parsed()) return cmd_ideal_verify(ideal_flags);
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const RefusalError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
