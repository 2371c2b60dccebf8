#pragma once

#include <optional>
#include <span>

namespace molbench::harness {

/// Area under the ROC curve via the Mann-Whitney rank-sum statistic with
/// average ranks for tied scores, i.e. P(pos > neg) + 0.5 * P(tie).
/// Labels are 0/1. Returns nullopt when only one class is present.
std::optional<double> auroc(std::span<const double> scores, std::span<const int> labels);

}  // namespace molbench::harness
