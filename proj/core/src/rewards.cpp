#include "ehrgraph/rewards.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "ehrgraph/rng.hpp"
#include "text_util.hpp"

namespace ehrgraph {
namespace {

std::vector<std::string> trimmed_set(const std::vector<std::string>& values) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto& v : values) {
        std::string t(text::trim(v));
        if (t.empty()) continue;
        if (seen.insert(t).second) out.push_back(std::move(t));
    }
    return out;
}

}  // namespace

PrfScores entity_f1(const std::vector<std::string>& predicted,
                    const std::vector<std::string>& truth) {
    const auto gold = trimmed_set(truth);
    if (gold.empty()) throw std::invalid_argument("entity_f1: empty truth set");
    const auto pred = trimmed_set(predicted);

    const std::unordered_set<std::string> gold_set(gold.begin(), gold.end());
    std::size_t hits = 0;
    for (const auto& p : pred) {
        if (gold_set.contains(p)) ++hits;
    }
    PrfScores scores;
    scores.precision =
        pred.empty() ? 0.0 : static_cast<double>(hits) / static_cast<double>(pred.size());
    scores.recall = static_cast<double>(hits) / static_cast<double>(gold.size());
    scores.f1 = scores.precision + scores.recall > 0.0
                    ? 2.0 * scores.precision * scores.recall /
                          (scores.precision + scores.recall)
                    : 0.0;
    return scores;
}

double yes_probability(double yes_logit, double no_logit) {
    if (!std::isfinite(yes_logit) || !std::isfinite(no_logit)) {
        throw std::invalid_argument("yes_probability: logits must be finite");
    }
    const double m = std::max(yes_logit, no_logit);
    const double ey = std::exp(yes_logit - m);
    const double en = std::exp(no_logit - m);
    return ey / (ey + en);
}

double auroc(std::span<const double> scores, std::span<const int> labels) {
    if (scores.size() != labels.size()) {
        throw std::invalid_argument("auroc: scores/labels size mismatch");
    }
    std::size_t n_pos = 0, n_neg = 0;
    for (const int label : labels) (label != 0 ? n_pos : n_neg) += 1;
    if (n_pos == 0) throw std::invalid_argument("auroc: no positive labels");
    if (n_neg == 0) throw std::invalid_argument("auroc: no negative labels");

    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Average ranks over tied scores, then the Mann-Whitney identity.
    double rank_sum_pos = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        std::size_t j = i;
        while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
        const double mean_rank = 0.5 * static_cast<double>(i + 1 + j);  // 1-based average
        for (std::size_t k = i; k < j; ++k) {
            if (labels[order[k]] != 0) rank_sum_pos += mean_rank;
        }
        i = j;
    }
    const double np = static_cast<double>(n_pos);
    const double u = rank_sum_pos - np * (np + 1.0) / 2.0;
    return u / (np * static_cast<double>(n_neg));
}

int format_reward(std::string_view raw_text) {
    constexpr std::string_view kOpen = "<think>";
    constexpr std::string_view kClose = "</think>";
    const std::size_t open = raw_text.find(kOpen);
    const std::size_t close = raw_text.find(kClose);
    if (open == std::string_view::npos || close == std::string_view::npos || close < open) {
        return 0;
    }
    if (raw_text.find(kOpen, open + kOpen.size()) != std::string_view::npos) return 0;
    if (raw_text.find(kClose, close + kClose.size()) != std::string_view::npos) return 0;

    const std::string interior =
        text::lower(raw_text.substr(open + kOpen.size(), close - open - kOpen.size()));
    const std::size_t extraction = interior.find("## extraction");
    const std::size_t reasoning = interior.find("## reasoning");
    if (extraction == std::string::npos || reasoning == std::string::npos ||
        reasoning < extraction) {
        return 0;
    }
    return text::trim(raw_text.substr(close + kClose.size())).empty() ? 0 : 1;
}

namespace {

double exact_match(const std::vector<std::string>& predicted,
                   const std::vector<std::string>& truth) {
    const auto pred = trimmed_set(predicted);
    const auto gold = trimmed_set(truth);
    if (pred.size() != gold.size()) return 0.0;
    const std::unordered_set<std::string> gold_set(gold.begin(), gold.end());
    for (const auto& p : pred) {
        if (!gold_set.contains(p)) return 0.0;
    }
    return 1.0;
}

}  // namespace

double accuracy_reward(const std::vector<std::string>& predicted,
                       const std::vector<std::string>& truth, TaskKind kind,
                       RewardAssignment assignment) {
    const bool graded = assignment == RewardAssignment::prose
                            ? kind == TaskKind::decision
                            : kind == TaskKind::risk;
    if (graded) return entity_f1(predicted, truth).f1;
    return exact_match(predicted, truth);
}

double total_reward(std::string_view raw_text, const std::vector<std::string>& predicted,
                    const std::vector<std::string>& truth, TaskKind kind,
                    const RewardConfig& cfg) {
    return cfg.lambda_fmt * format_reward(raw_text) +
           cfg.lambda_acc * accuracy_reward(predicted, truth, kind, cfg.assignment);
}

std::vector<std::string> parse_predicted_entities(std::string_view raw_text) {
    constexpr std::string_view kClose = "</think>";
    const std::size_t close = raw_text.rfind(kClose);
    const std::string_view tail =
        close == std::string_view::npos ? raw_text : raw_text.substr(close + kClose.size());
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (const auto line : text::split_lines(tail)) {
        std::string item = text::strip_list_marker(line);
        if (item.empty()) continue;
        if (seen.insert(item).second) out.push_back(std::move(item));
    }
    return out;
}

namespace {

double mean(std::span<const double> values) {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

double bootstrap_std_of_mean(std::span<const double> values, std::size_t rounds,
                             std::uint64_t seed) {
    if (values.size() < 2 || rounds < 2) return 0.0;
    Rng rng(seed);
    std::vector<double> means(rounds);
    for (std::size_t b = 0; b < rounds; ++b) {
        double sum = 0.0;
        for (std::size_t i = 0; i < values.size(); ++i) {
            sum += values[rng.next_below(values.size())];
        }
        means[b] = sum / static_cast<double>(values.size());
    }
    const double m = mean(means);
    double var = 0.0;
    for (const double x : means) var += (x - m) * (x - m);
    return std::sqrt(var / static_cast<double>(rounds - 1));
}

}  // namespace

EvalReport build_report(std::span<const ModelOutput> outputs, std::span<const GoldSample> gold,
                        const RewardConfig& rewards, std::size_t bootstrap_rounds,
                        std::uint64_t bootstrap_seed) {
    std::unordered_map<std::string, const GoldSample*> gold_by_id;
    for (const auto& g : gold) gold_by_id.emplace(g.sample_id, &g);

    std::vector<std::string> unmatched;
    for (const auto& output : outputs) {
        if (!gold_by_id.contains(output.sample_id)) unmatched.push_back(output.sample_id);
    }
    if (!unmatched.empty()) {
        std::string message = "model outputs with no gold sample:";
        for (const auto& id : unmatched) message += " " + id;
        throw std::invalid_argument(message);
    }

    struct TaskBucket {
        TaskKind kind = TaskKind::decision;
        std::vector<double> precision, recall, f1;
        std::vector<double> scores;
        std::vector<int> labels;
        std::vector<double> fmt, acc, total;
    };
    std::unordered_map<std::string, TaskBucket> buckets;

    for (const auto& output : outputs) {
        const GoldSample& g = *gold_by_id.at(output.sample_id);
        TaskBucket& bucket = buckets[g.task_id];
        bucket.kind = g.kind;
        if (g.kind == TaskKind::decision) {
            const PrfScores prf = entity_f1(output.predicted_entities, g.answer);
            bucket.precision.push_back(prf.precision);
            bucket.recall.push_back(prf.recall);
            bucket.f1.push_back(prf.f1);
        } else {
            double score;
            if (output.yes_logit && output.no_logit) {
                score = yes_probability(*output.yes_logit, *output.no_logit);
            } else {
                // token fallback when the inference client exposes no logits
                score = !output.predicted_entities.empty() &&
                                text::trim(output.predicted_entities.front()) == "yes"
                            ? 1.0
                            : 0.0;
            }
            bucket.scores.push_back(score);
            bucket.labels.push_back(!g.answer.empty() && g.answer.front() == "yes" ? 1 : 0);
        }
        bucket.fmt.push_back(format_reward(output.raw_text));
        bucket.acc.push_back(
            accuracy_reward(output.predicted_entities, g.answer, g.kind, rewards.assignment));
        bucket.total.push_back(
            total_reward(output.raw_text, output.predicted_entities, g.answer, g.kind, rewards));
    }

    EvalReport report;
    std::vector<std::string> task_ids;
    task_ids.reserve(buckets.size());
    for (const auto& [task_id, bucket] : buckets) task_ids.push_back(task_id);
    std::sort(task_ids.begin(), task_ids.end());

    for (const auto& task_id : task_ids) {
        const TaskBucket& bucket = buckets.at(task_id);
        TaskReport entry;
        entry.task_id = task_id;
        entry.kind = bucket.kind;
        entry.reward_fmt_mean = mean(bucket.fmt);
        entry.reward_acc_mean = mean(bucket.acc);
        entry.reward_total_mean = mean(bucket.total);
        if (bucket.kind == TaskKind::decision) {
            entry.sample_count = bucket.f1.size();
            entry.precision_mean = mean(bucket.precision);
            entry.recall_mean = mean(bucket.recall);
            entry.f1_mean = mean(bucket.f1);
            entry.f1_std = bootstrap_std_of_mean(bucket.f1, bootstrap_rounds,
                                                 derive_seed(bootstrap_seed, task_id));
        } else {
            entry.sample_count = bucket.scores.size();
            bool has_pos = false, has_neg = false;
            for (const int label : bucket.labels) (label != 0 ? has_pos : has_neg) = true;
            entry.auroc = has_pos && has_neg
                              ? auroc(bucket.scores, bucket.labels)
                              : std::numeric_limits<double>::quiet_NaN();
        }
        report.tasks.push_back(std::move(entry));
    }
    return report;
}

}  // namespace ehrgraph
