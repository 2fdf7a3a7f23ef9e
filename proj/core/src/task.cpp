#include "ehrgraph/task.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "ehrgraph/rng.hpp"

namespace ehrgraph {

using nlohmann::json;

std::string_view to_string(TaskKind kind) {
    return kind == TaskKind::decision ? "decision" : "risk";
}

std::optional<TaskKind> task_kind_from_string(std::string_view text) {
    if (text == "decision") return TaskKind::decision;
    if (text == "risk") return TaskKind::risk;
    return std::nullopt;
}

std::string_view to_string(WindowVerdict verdict) {
    switch (verdict) {
        case WindowVerdict::keep: return "keep";
        case WindowVerdict::too_few: return "too_few";
        case WindowVerdict::too_many: return "too_many";
    }
    return "keep";
}

const TaskSpec* TaskRegistry::find(std::string_view task_id) const {
    for (const auto& task : tasks) {
        if (task.task_id == task_id) return &task;
    }
    return nullptr;
}

TaskRegistry TaskRegistry::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open task registry: " + file.string());
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw std::runtime_error("task registry " + file.string() + ": " + e.what());
    }

    TaskRegistry registry;
    std::unordered_set<std::string> seen_ids;
    for (const auto& entry : doc.at("tasks")) {
        TaskSpec spec;
        spec.task_id = entry.at("task_id").get<std::string>();
        const auto kind = task_kind_from_string(entry.at("kind").get<std::string>());
        if (!kind) {
            throw std::runtime_error("task " + spec.task_id + ": unknown kind");
        }
        spec.kind = *kind;
        spec.target_category = entry.at("target_category").get<std::string>();
        spec.instruction = entry.at("instruction").get<std::string>();
        if (entry.contains("horizon_hours")) {
            spec.horizon_seconds = entry["horizon_hours"].get<std::int64_t>() * kSecondsPerHour;
        } else if (entry.contains("horizon_seconds")) {
            spec.horizon_seconds = entry["horizon_seconds"].get<std::int64_t>();
        }
        if (entry.contains("item_column")) {
            spec.item_column = entry["item_column"].get<std::string>();
        }
        if (entry.contains("label_space")) {
            spec.label_space = entry["label_space"].get<std::vector<std::string>>();
        }

        if (spec.instruction.empty()) {
            throw std::runtime_error("task " + spec.task_id + ": empty instruction");
        }
        if (spec.kind == TaskKind::risk && spec.horizon_seconds <= 0) {
            throw std::runtime_error("task " + spec.task_id + ": risk task needs a horizon");
        }
        if (spec.kind == TaskKind::decision &&
            (spec.item_column.empty() || spec.label_space.empty())) {
            throw std::runtime_error("task " + spec.task_id +
                                     ": decision task needs item_column and label_space");
        }
        if (!seen_ids.insert(spec.task_id).second) {
            throw std::runtime_error("duplicate task_id: " + spec.task_id);
        }
        registry.tasks.push_back(std::move(spec));
    }
    return registry;
}

namespace {

std::vector<ClinicalEvent> collect_window(const PatientTimeline& timeline,
                                          std::size_t last_index) {
    std::vector<ClinicalEvent> window;
    window.reserve(last_index + 1);
    for (std::size_t i = 0; i <= last_index && i < timeline.events.size(); ++i) {
        if (!timeline.events[i].excluded) window.push_back(timeline.events[i]);
    }
    return window;
}

std::vector<std::string> dedupe_keep_order(std::vector<std::string> values) {
    std::vector<std::string> out;
    std::unordered_set<std::string> seen;
    for (auto& v : values) {
        if (v.empty()) continue;
        if (seen.insert(v).second) out.push_back(std::move(v));
    }
    return out;
}

}  // namespace

std::optional<TaskSample> build_decision_sample(const PatientTimeline& timeline,
                                                const TaskSpec& spec, std::size_t index_k,
                                                std::vector<WarningRecord>& warnings,
                                                const MaskConfig& mask) {
    const auto& events = timeline.events;
    if (index_k + 1 >= events.size()) return std::nullopt;
    const ClinicalEvent& target = events[index_k + 1];
    const ClinicalEvent& anchor = events[index_k];
    if (target.category != spec.target_category || target.excluded) return std::nullopt;
    if (anchor.excluded || !anchor.timestamp.has_value()) return std::nullopt;

    const int item_idx = target.column_index(spec.item_column);
    if (item_idx < 0) {
        warnings.push_back({timeline.subject_id,
                            "sample skipped: " + spec.task_id + " target lacks column '" +
                                spec.item_column + "'"});
        return std::nullopt;
    }

    std::vector<std::string> raw_items;
    raw_items.reserve(target.rows.size());
    for (const auto& row : target.rows) {
        if (static_cast<std::size_t>(item_idx) < row.size()) {
            raw_items.push_back(row[static_cast<std::size_t>(item_idx)]);
        }
    }
    std::vector<std::string> answer = dedupe_keep_order(std::move(raw_items));
    if (answer.empty()) {
        warnings.push_back({timeline.subject_id,
                            "sample skipped: " + spec.task_id + " target has no entities"});
        return std::nullopt;
    }

    TaskSample sample;
    sample.subject_id = timeline.subject_id;
    sample.task_id = spec.task_id;
    sample.kind = TaskKind::decision;
    sample.prediction_time = *anchor.timestamp;
    sample.answer = std::move(answer);
    sample.window =
        mask_pharmacy_leakage(collect_window(timeline, index_k), spec.target_category, mask);
    sample.sample_id =
        spec.task_id + "/" + timeline.subject_id + "/" + std::to_string(index_k);
    return sample;
}

TaskSample build_risk_sample(const PatientTimeline& timeline, const TaskSpec& spec,
                             Timestamp prediction_time) {
    TaskSample sample;
    sample.subject_id = timeline.subject_id;
    sample.task_id = spec.task_id;
    sample.kind = TaskKind::risk;
    sample.prediction_time = prediction_time;
    sample.sample_id = spec.task_id + "/" + timeline.subject_id + "/" +
                       std::to_string(prediction_time.seconds);

    bool positive = false;
    for (const auto& event : timeline.events) {
        if (event.excluded || !event.timestamp.has_value()) {
            if (!event.excluded && event.is_header()) sample.window.push_back(event);
            continue;
        }
        if (*event.timestamp <= prediction_time) {
            sample.window.push_back(event);
        } else if (event.category == spec.target_category &&
                   event.timestamp->seconds - prediction_time.seconds < spec.horizon_seconds) {
            positive = true;
        }
    }
    sample.answer = {positive ? "yes" : "no"};
    return sample;
}

WindowVerdict apply_window_filters(TaskSample& sample, const WindowFilter& filter) {
    std::vector<ClinicalEvent> kept;
    kept.reserve(sample.window.size());
    for (auto& event : sample.window) {
        if (event.timestamp.has_value() &&
            sample.prediction_time.seconds - event.timestamp->seconds >
                filter.max_span_seconds) {
            continue;
        }
        kept.push_back(std::move(event));
    }
    sample.window = std::move(kept);
    if (sample.window.size() < filter.min_events) return WindowVerdict::too_few;
    if (sample.window.size() > filter.max_events) return WindowVerdict::too_many;
    return WindowVerdict::keep;
}

CandidatePool make_candidate_pool(const TaskSpec& spec, const std::vector<std::string>& answer,
                                  std::size_t pool_size, std::uint64_t seed,
                                  std::string sample_id) {
    if (answer.size() > pool_size) {
        throw std::invalid_argument("task " + spec.task_id + ": answer larger than pool");
    }
    std::unordered_set<std::string> space(spec.label_space.begin(), spec.label_space.end());
    for (const auto& item : answer) {
        if (!space.contains(item)) {
            throw std::invalid_argument("task " + spec.task_id + ": answer entity '" + item +
                                        "' outside label space");
        }
    }

    CandidatePool pool;
    pool.sample_id = std::move(sample_id);
    if (spec.label_space.size() <= pool_size) {
        pool.candidates = spec.label_space;
    } else {
        std::unordered_set<std::string> in_answer(answer.begin(), answer.end());
        std::vector<std::string> rest;
        rest.reserve(spec.label_space.size());
        for (const auto& label : spec.label_space) {
            if (!in_answer.contains(label)) rest.push_back(label);
        }
        Rng pick(derive_seed(seed, "pool-select"));
        pick.shuffle(rest);
        pool.candidates = answer;
        pool.candidates.insert(pool.candidates.end(), rest.begin(),
                               rest.begin() + static_cast<std::ptrdiff_t>(pool_size - answer.size()));
    }
    Rng order(derive_seed(seed, "pool-shuffle"));
    order.shuffle(pool.candidates);
    return pool;
}

std::string format_answer(const std::vector<std::string>& answer) {
    std::string out;
    for (std::size_t i = 0; i < answer.size(); ++i) {
        if (i > 0) out += "\n";
        out += answer[i];
    }
    return out;
}

std::vector<std::string> split_answer(std::string_view answer_text) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= answer_text.size()) {
        std::size_t end = answer_text.find('\n', start);
        if (end == std::string_view::npos) end = answer_text.size();
        if (end > start) out.emplace_back(answer_text.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

std::vector<TaskSample> enumerate_samples(const PatientTimeline& timeline,
                                          const TaskRegistry& registry,
                                          const WindowFilter& filter,
                                          std::vector<WarningRecord>& warnings,
                                          const MaskConfig& mask) {
    std::vector<TaskSample> samples;
    for (const auto& spec : registry.tasks) {
        if (spec.kind == TaskKind::decision) {
            for (std::size_t k = 0; k + 1 < timeline.events.size(); ++k) {
                if (timeline.events[k + 1].category != spec.target_category) continue;
                auto sample = build_decision_sample(timeline, spec, k, warnings, mask);
                if (!sample) continue;
                if (apply_window_filters(*sample, filter) == WindowVerdict::keep) {
                    samples.push_back(std::move(*sample));
                }
            }
        } else {
            std::vector<Timestamp> times;
            for (const auto& event : timeline.events) {
                if (!event.excluded && event.timestamp.has_value()) {
                    times.push_back(*event.timestamp);
                }
            }
            std::sort(times.begin(), times.end());
            times.erase(std::unique(times.begin(), times.end()), times.end());
            for (const Timestamp t : times) {
                TaskSample sample = build_risk_sample(timeline, spec, t);
                if (apply_window_filters(sample, filter) == WindowVerdict::keep) {
                    samples.push_back(std::move(sample));
                }
            }
        }
    }
    return samples;
}

}  // namespace ehrgraph
