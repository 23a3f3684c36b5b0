#pragma once

#include "ojt/classifier.hpp"
#include "ojt/types.hpp"

#include <optional>
#include <span>

namespace ojt {

/// Hard tractability bounds; calls beyond them raise RefusalError.
inline constexpr std::size_t kIdealMaxRemaining = 6;
inline constexpr int kIdealMaxQuestions = 3;

struct IdealResult {
    double penalty = 0.0;
    std::optional<FeaturePoint> question;
};

/// Expected number of future misclassifications, minimized over this
/// round's question choice. The no-question branch keeps the budget; each
/// candidate is evaluated label-marginalized under the candidate's current
/// posterior, with the assumption held through the recursive average.
/// `remaining` is the not-yet-seen pool R; `candidates` ranges over S ∪ T.
/// The store's assumption stack is used and restored exactly.
IdealResult ideal_expected_wrong(LabeledStore& store,
                                 const std::optional<FeaturePoint>& query,
                                 std::span<const FeaturePoint> remaining,
                                 int questions_remaining,
                                 std::span<const FeaturePoint> candidates);

/// Average of ideal_expected_wrong(first, rest, questions_remaining) over
/// all |R|! orderings of `remaining`; 0 for the empty set.
double avg_penalty(LabeledStore& store,
                   std::span<const FeaturePoint> remaining,
                   int questions_remaining,
                   std::span<const FeaturePoint> candidates);

} // namespace ojt
