#pragma once

#include "ojt/classifier.hpp"
#include "ojt/types.hpp"

#include <optional>
#include <vector>

namespace ojt {

/// Independent cross-check for the expected-wrong recursion. Backward
/// induction over explicit belief states: every posterior is computed from
/// a freshly committed store (no assumption stack), remaining queries are
/// averaged as a set (no permutation enumeration), and no code is shared
/// with ideal_expected_wrong. Exhausts the adaptive question-policy space
/// by minimizing at every reachable decision state.
double oracle_min_expected_wrong(const LabeledStore& committed_base,
                                 const std::optional<FeaturePoint>& query,
                                 const std::vector<FeaturePoint>& remaining,
                                 int questions_remaining,
                                 const std::vector<FeaturePoint>& candidates);

} // namespace ojt
