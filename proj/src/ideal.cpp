#include "ojt/ideal.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace ojt {

namespace {

void check_bounds(std::size_t remaining, int questions_remaining, const char* who) {
    if (remaining > kIdealMaxRemaining)
        throw RefusalError(std::string(who) + ": |R| = " + std::to_string(remaining) +
                           " exceeds the tractability bound " +
                           std::to_string(kIdealMaxRemaining));
    if (questions_remaining > kIdealMaxQuestions)
        throw RefusalError(std::string(who) + ": Q_rem = " + std::to_string(questions_remaining) +
                           " exceeds the tractability bound " +
                           std::to_string(kIdealMaxQuestions));
}

} // namespace

IdealResult ideal_expected_wrong(LabeledStore& store,
                                 const std::optional<FeaturePoint>& query,
                                 std::span<const FeaturePoint> remaining,
                                 int questions_remaining,
                                 std::span<const FeaturePoint> candidates) {
    check_bounds(remaining.size(), questions_remaining, "ideal_expected_wrong");
    if (!query && remaining.empty()) return {0.0, std::nullopt};

    const double query_unc = query ? store.uncertainty(*query) : 0.0;

    // Baseline: ask nothing, keep the budget.
    IdealResult result;
    result.penalty = query_unc + avg_penalty(store, remaining, questions_remaining, candidates);
    if (questions_remaining == 0) return result;

    for (const auto& question : candidates) {
        const auto weights = store.posterior(question);
        double penalty = 0.0;
        for (Label c = 0; c < store.num_categories(); ++c) {
            // The assumption stays in force through the recursive average.
            store.assume(question, c);
            const double conditioned_unc = query ? store.uncertainty(*query) : 0.0;
            penalty += weights[c] * (conditioned_unc +
                                     avg_penalty(store, remaining, questions_remaining - 1,
                                                 candidates));
            store.retract(question);
        }
        if (penalty < result.penalty) {
            result.penalty = penalty;
            result.question = question;
        }
    }
    return result;
}

double avg_penalty(LabeledStore& store,
                   std::span<const FeaturePoint> remaining,
                   int questions_remaining,
                   std::span<const FeaturePoint> candidates) {
    check_bounds(remaining.size(), questions_remaining, "avg_penalty");
    if (remaining.empty()) return 0.0;

    // Literal form: every ordering of R, first element becomes the query.
    std::vector<std::size_t> order(remaining.size());
    std::iota(order.begin(), order.end(), 0);

    double total = 0.0;
    std::size_t count = 0;
    std::vector<FeaturePoint> rest(remaining.size() - 1);
    do {
        for (std::size_t i = 1; i < order.size(); ++i) rest[i - 1] = remaining[order[i]];
        total += ideal_expected_wrong(store, remaining[order[0]], rest, questions_remaining,
                                      candidates)
                     .penalty;
        ++count;
    } while (std::next_permutation(order.begin(), order.end()));
    return total / static_cast<double>(count);
}

} // namespace ojt
