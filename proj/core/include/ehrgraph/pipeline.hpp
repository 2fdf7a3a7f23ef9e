#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ehrgraph/normalize.hpp"
#include "ehrgraph/rewards.hpp"
#include "ehrgraph/synthesis.hpp"
#include "ehrgraph/task.hpp"

namespace ehrgraph {

// One persisted sample: the exact JSONL row shape written by build-samples
// and consumed downstream.
struct SampleRecord {
    std::string sample_id;
    std::string subject_id;
    std::string task_id;
    TaskKind kind = TaskKind::decision;
    Timestamp prediction_time;
    std::string input_text;
    std::string answer_text;
    std::vector<std::string> candidates;  // empty when absent
};

std::vector<SampleRecord> load_samples(const std::filesystem::path& file);
void save_samples(std::span<const SampleRecord> samples, const std::filesystem::path& file);

// Whole-pipeline configuration, one JSON file. Relative paths resolve
// against the config file's directory so a corpus directory is relocatable.
struct PipelineConfig {
    std::filesystem::path base_dir;
    std::uint64_t seed = 17;
    int jobs = 4;
    std::filesystem::path workspace = "work";
    std::filesystem::path registry;

    std::filesystem::path raw_dir;                       // ingest
    std::filesystem::path icd_to_ccs;                    // normalize
    std::filesystem::path ndc_to_atc;
    EnrichConfig enrich;
    MaskConfig mask;
    WindowFilter window;                                 // build-samples

    double test_fraction = 0.2;                          // sample
    std::size_t train_per_task = 0;                      // 0 = keep all
    std::size_t test_per_task = 0;
    std::size_t pool_size = 100;
    std::size_t grpo_per_task = 500;                     // RL budget, recorded only

    std::filesystem::path lexicon;                       // lift
    std::uint64_t lift_min_count = 5;
    double lift_min_lift = 5.0;
    std::vector<std::string> freetext_columns;
    double jaccard_threshold = 0.7;

    std::filesystem::path graph;                         // think-graph
    std::size_t max_depth = 3;

    EndpointConfig endpoint;                             // synthesize
    std::string endpoint_url_env;                        // overrides endpoint.url when set
    double retention_threshold = 0.7;
    std::filesystem::path template_path;                 // empty = built-in template
    int concurrency = 8;

    RewardConfig rewards;                                // evaluate
    std::filesystem::path eval_outputs;
    std::size_t bootstrap_rounds = 1000;

    static PipelineConfig load(const std::filesystem::path& file);
    std::filesystem::path resolve(const std::filesystem::path& p) const;
    std::filesystem::path work(const std::filesystem::path& p) const;
};

struct StageOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
    std::optional<std::size_t> max_depth;
    std::optional<RewardAssignment> reward_assignment;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitMissingInput = 2;
inline constexpr int kExitBadConfig = 3;

std::span<const std::string_view> stage_names();

// Runs one pipeline stage. Missing upstream artifacts exit 2, config
// problems exit 3, runtime failures exit 1. A stage whose manifest still
// matches its inputs, config and seed is a no-op.
int run_stage(std::string_view stage, const std::filesystem::path& config_path,
              const StageOverrides& overrides = {});

struct ValidationIssue {
    std::string sample_id;
    std::string kind;    // "schema" | "leakage" | "instruction" | "candidates"
    std::string detail;
};

struct ValidationReport {
    std::size_t records = 0;
    std::unordered_map<std::string, std::size_t> per_task;
    std::vector<ValidationIssue> issues;

    bool clean() const { return issues.empty(); }
};

// Schema check, future-event leakage scan, per-task instruction identity,
// candidate coverage. Violations are report entries, not errors.
ValidationReport validate_corpus(const std::filesystem::path& samples_file,
                                 const TaskRegistry* registry = nullptr);

// Deterministic desk-scale corpus: raw event tables, code maps, a concept
// lexicon, a knowledge graph wired so a known slice of entity/label pairs is
// connectable, a task registry and a ready-to-run pipeline config.
void gen_synthetic_corpus(const std::filesystem::path& out_dir, std::size_t n_patients,
                          std::uint64_t seed);

// Deterministic imperfect model outputs for a gold sample file; lets the
// evaluate stage run without any model in the loop.
void gen_mock_outputs(const std::filesystem::path& gold_samples,
                      const std::filesystem::path& out_file, std::uint64_t seed);

}  // namespace ehrgraph
