#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ehrgraph {

// Per-task label frequencies over sample answers.
struct LabelCounts {
    std::string task_id;
    std::unordered_map<std::string, std::uint64_t> counts;
    std::uint64_t total = 0;
};

// counts[y] = number of answers containing y; total = number of answers.
LabelCounts count_labels(std::span<const std::vector<std::string>> answers,
                         std::string task_id);

void merge_counts(LabelCounts& into, const LabelCounts& from);

// Mean reciprocal frequency of the answer's labels: (1/N) * sum(1/count(y)).
// For single-label answers this reduces to 1/count. Throws if a label is
// missing from the counts (stale counts).
double sample_weight(const std::vector<std::string>& answer, const LabelCounts& counts);

// Without-replacement draw of n indices with probability proportional to
// weight, via exponential ranks (key = -ln(u)/w, keep the n smallest).
// Deterministic under seed; returned in selection order.
std::vector<std::size_t> weighted_sample(std::span<const double> weights, std::size_t n,
                                         std::uint64_t seed);

// Disjoint patient-level partition; |test| = round(fraction * total).
// Returns (train_ids, test_ids), each sorted.
std::pair<std::vector<std::string>, std::vector<std::string>> patient_split(
    std::vector<std::string> subject_ids, double test_fraction, std::uint64_t seed);

}  // namespace ehrgraph
