#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ehrgraph/event.hpp"
#include "ehrgraph/normalize.hpp"

namespace ehrgraph {

enum class TaskKind { decision, risk };

std::string_view to_string(TaskKind kind);
std::optional<TaskKind> task_kind_from_string(std::string_view text);

// One analysis task. Decision tasks predict the entity set of the next event
// of target_category; risk tasks forecast whether such an event occurs
// within the horizon.
struct TaskSpec {
    std::string task_id;
    TaskKind kind = TaskKind::decision;
    std::string target_category;
    std::int64_t horizon_seconds = 0;       // risk only, > 0
    std::string instruction;                // shared verbatim by all samples of the task
    std::string item_column;                // decision only
    std::vector<std::string> label_space;   // decision only
};

struct TaskRegistry {
    std::vector<TaskSpec> tasks;

    const TaskSpec* find(std::string_view task_id) const;
    static TaskRegistry load(const std::filesystem::path& file);
};

struct TaskSample {
    std::string sample_id;
    std::string subject_id;
    std::string task_id;
    TaskKind kind = TaskKind::decision;
    Timestamp prediction_time;
    std::vector<ClinicalEvent> window;   // every timestamp <= prediction_time
    std::vector<std::string> answer;     // deduplicated, first-appearance order
};

struct CandidatePool {
    std::string sample_id;
    std::vector<std::string> candidates;
};

struct WindowFilter {
    std::int64_t max_span_seconds = 24 * kSecondsPerHour;
    std::size_t min_events = 10;
    std::size_t max_events = 100;
};

enum class WindowVerdict { keep, too_few, too_many };

std::string_view to_string(WindowVerdict verdict);

// Sample whose target is events[index_k + 1]; the prediction time is the
// timestamp of events[index_k], so the target stays invisible even when it
// shares that timestamp. Returns nullopt (with a warning) when the target
// has no usable item column or yields an empty answer.
std::optional<TaskSample> build_decision_sample(const PatientTimeline& timeline,
                                                const TaskSpec& spec, std::size_t index_k,
                                                std::vector<WarningRecord>& warnings,
                                                const MaskConfig& mask = {});

// Label is "yes" iff a target-category event exists strictly inside
// (prediction_time, prediction_time + horizon).
TaskSample build_risk_sample(const PatientTimeline& timeline, const TaskSpec& spec,
                             Timestamp prediction_time);

// Truncates the window to the trailing max_span, then enforces the event
// count bounds. Header events always stay.
WindowVerdict apply_window_filters(TaskSample& sample, const WindowFilter& filter);

// Whole label space when it fits; otherwise the answer plus a uniform
// without-replacement draw from the rest, deterministically shuffled.
CandidatePool make_candidate_pool(const TaskSpec& spec, const std::vector<std::string>& answer,
                                  std::size_t pool_size, std::uint64_t seed,
                                  std::string sample_id = {});

// Newline-joined answer entities; split_answer is its inverse.
std::string format_answer(const std::vector<std::string>& answer);
std::vector<std::string> split_answer(std::string_view answer_text);

// Every valid sample for every registry task over one timeline, already
// window-filtered and pharmacy-masked.
std::vector<TaskSample> enumerate_samples(const PatientTimeline& timeline,
                                          const TaskRegistry& registry,
                                          const WindowFilter& filter,
                                          std::vector<WarningRecord>& warnings,
                                          const MaskConfig& mask = {});

}  // namespace ehrgraph
