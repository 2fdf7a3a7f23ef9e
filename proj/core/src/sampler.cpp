#include "ehrgraph/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <unordered_set>

#include "ehrgraph/rng.hpp"

namespace ehrgraph {

LabelCounts count_labels(std::span<const std::vector<std::string>> answers,
                         std::string task_id) {
    LabelCounts counts;
    counts.task_id = std::move(task_id);
    std::unordered_set<std::string> seen;
    for (const auto& answer : answers) {
        ++counts.total;
        seen.clear();
        for (const auto& label : answer) {
            if (seen.insert(label).second) ++counts.counts[label];
        }
    }
    return counts;
}

void merge_counts(LabelCounts& into, const LabelCounts& from) {
    into.total += from.total;
    for (const auto& [label, n] : from.counts) into.counts[label] += n;
}

double sample_weight(const std::vector<std::string>& answer, const LabelCounts& counts) {
    if (answer.empty()) throw std::invalid_argument("sample_weight: empty answer");
    double sum = 0.0;
    for (const auto& label : answer) {
        auto it = counts.counts.find(label);
        if (it == counts.counts.end() || it->second == 0) {
            throw std::invalid_argument("sample_weight: label '" + label +
                                        "' missing from counts (stale counts?)");
        }
        sum += 1.0 / static_cast<double>(it->second);
    }
    return sum / static_cast<double>(answer.size());
}

std::vector<std::size_t> weighted_sample(std::span<const double> weights, std::size_t n,
                                         std::uint64_t seed) {
    if (n > weights.size()) {
        throw std::invalid_argument("weighted_sample: n exceeds population");
    }
    bool any_positive = false;
    for (double w : weights) {
        if (w < 0.0 || !std::isfinite(w)) {
            throw std::invalid_argument("weighted_sample: weights must be finite and >= 0");
        }
        any_positive |= w > 0.0;
    }
    if (!any_positive && n > 0) {
        throw std::invalid_argument("weighted_sample: all weights are zero");
    }

    Rng rng(seed);
    std::vector<std::pair<double, std::size_t>> keyed(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double u = rng.next_unit();
        const double key = weights[i] > 0.0 ? -std::log(u) / weights[i]
                                            : std::numeric_limits<double>::infinity();
        keyed[i] = {key, i};
    }
    if (n < keyed.size()) {
        std::nth_element(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(n),
                         keyed.end());
        keyed.resize(n);
    }
    std::sort(keyed.begin(), keyed.end());
    std::vector<std::size_t> selected(keyed.size());
    for (std::size_t i = 0; i < keyed.size(); ++i) selected[i] = keyed[i].second;
    return selected;
}

std::pair<std::vector<std::string>, std::vector<std::string>> patient_split(
    std::vector<std::string> subject_ids, double test_fraction, std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw std::invalid_argument("patient_split: test_fraction must be in (0, 1)");
    }
    {
        std::unordered_set<std::string> unique(subject_ids.begin(), subject_ids.end());
        if (unique.size() != subject_ids.size()) {
            throw std::invalid_argument("patient_split: subject ids must be distinct");
        }
    }
    Rng rng(seed);
    rng.shuffle(subject_ids);
    const auto n_test = static_cast<std::size_t>(
        std::llround(test_fraction * static_cast<double>(subject_ids.size())));
    std::vector<std::string> test_ids(subject_ids.begin(),
                                      subject_ids.begin() + static_cast<std::ptrdiff_t>(n_test));
    std::vector<std::string> train_ids(subject_ids.begin() + static_cast<std::ptrdiff_t>(n_test),
                                       subject_ids.end());
    std::sort(train_ids.begin(), train_ids.end());
    std::sort(test_ids.begin(), test_ids.end());
    return {std::move(train_ids), std::move(test_ids)};
}

}  // namespace ehrgraph
