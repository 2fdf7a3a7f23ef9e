#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ehrgraph/task.hpp"

namespace ehrgraph {

struct PrfScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Multi-label precision/recall/F1 with exact string matching (surrounding
// whitespace trimmed, no case folding). Empty predictions score zero; an
// empty truth set is a malformed gold and throws.
PrfScores entity_f1(const std::vector<std::string>& predicted,
                    const std::vector<std::string>& truth);

// Softmax over the two logits, computed stably; throws on non-finite input.
double yes_probability(double yes_logit, double no_logit);

// Probability that a random positive outranks a random negative, ties
// counting one half (rank form of the ROC integral). Throws when either
// class is missing, naming it.
double auroc(std::span<const double> scores, std::span<const int> labels);

// 1 iff the text holds exactly one <think>...</think> block whose interior
// shows the Extraction then Reasoning stage headers in order, with final
// answer content after the block.
int format_reward(std::string_view raw_text);

enum class RewardAssignment {
    prose,     // risk -> exact match, decision -> F1
    equation,  // swapped, for reproduction studies
};

double accuracy_reward(const std::vector<std::string>& predicted,
                       const std::vector<std::string>& truth, TaskKind kind,
                       RewardAssignment assignment = RewardAssignment::prose);

struct RewardConfig {
    double lambda_fmt = 1.0;
    double lambda_acc = 1.0;
    RewardAssignment assignment = RewardAssignment::prose;
};

double total_reward(std::string_view raw_text, const std::vector<std::string>& predicted,
                    const std::vector<std::string>& truth, TaskKind kind,
                    const RewardConfig& cfg = {});

// One scored model response.
struct ModelOutput {
    std::string sample_id;
    std::string raw_text;
    std::vector<std::string> predicted_entities;  // parsed from raw_text
    std::optional<double> yes_logit;
    std::optional<double> no_logit;
};

// Entity lines after the optional think block, list markers stripped.
std::vector<std::string> parse_predicted_entities(std::string_view raw_text);

struct GoldSample {
    std::string sample_id;
    std::string task_id;
    TaskKind kind = TaskKind::decision;
    std::vector<std::string> answer;
};

struct TaskReport {
    std::string task_id;
    TaskKind kind = TaskKind::decision;
    std::size_t sample_count = 0;
    double precision_mean = 0.0;
    double recall_mean = 0.0;
    double f1_mean = 0.0;
    double f1_std = 0.0;   // bootstrap std of the mean
    double auroc = 0.0;    // risk tasks
    double reward_fmt_mean = 0.0;
    double reward_acc_mean = 0.0;
    double reward_total_mean = 0.0;
};

struct EvalReport {
    std::vector<TaskReport> tasks;
};

// Per-task aggregation: F1 (decision) with a fixed-seed bootstrap std, AUROC
// over yes-probabilities (risk), and mean rewards. Throws when an output's
// sample_id has no gold counterpart, listing the ids.
EvalReport build_report(std::span<const ModelOutput> outputs,
                        std::span<const GoldSample> gold, const RewardConfig& rewards,
                        std::size_t bootstrap_rounds = 1000,
                        std::uint64_t bootstrap_seed = 17);

}  // namespace ehrgraph
