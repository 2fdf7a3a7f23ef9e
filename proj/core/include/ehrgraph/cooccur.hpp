#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ehrgraph {

struct StringPairHash {
    std::size_t operator()(const std::pair<std::string, std::string>& p) const {
        const std::hash<std::string> h;
        return h(p.first) * 0x9e3779b97f4a7c15ULL + h(p.second);
    }
};

// Per-task co-occurrence tables between observable context entities and
// answer entities. All counting is per-sample set semantics: one sample
// contributes at most 1 to any cell.
struct CooccurrenceStats {
    std::string task_id;
    std::unordered_map<std::string, std::uint64_t> ctx_counts;
    std::unordered_map<std::string, std::uint64_t> label_counts;
    std::unordered_map<std::pair<std::string, std::string>, std::uint64_t, StringPairHash>
        joint_counts;
    std::uint64_t total = 0;
};

// One sample's contribution: its deduplicated context entity set and its
// answer entities.
struct SampleEntities {
    std::vector<std::string> context;
    std::vector<std::string> labels;
};

CooccurrenceStats accumulate(std::span<const SampleEntities> samples, std::string task_id);

// Field-wise additive merge; accumulate(A ++ B) == merge(acc(A), acc(B)).
void merge_stats(CooccurrenceStats& into, const CooccurrenceStats& from);

// joint * total / (ctx * label), evaluated as one double expression over
// exact integer counts. Zero joint gives 0; a zero marginal is an error.
double lift(const std::string& context_entity, const std::string& label_entity,
            const CooccurrenceStats& stats);

struct LiftPair {
    std::string context_entity;
    std::string label_entity;
    double lift = 0.0;
};

struct LiftPairSet {
    std::string task_id;
    std::vector<LiftPair> pairs;  // sorted by (context, label)
};

// Exactly the pairs with ctx_count > min_count, label_count > min_count and
// lift > min_lift; all three comparisons strict.
LiftPairSet filter_pairs(const CooccurrenceStats& stats, std::uint64_t min_count = 5,
                         double min_lift = 5.0);

// Subset of the task's filtered pairs whose context entity occurs in this
// sample's context and whose label occurs in its answer, by descending lift.
std::vector<LiftPair> pairs_for_sample(const std::vector<std::string>& context_entities,
                                       const std::vector<std::string>& answer,
                                       const LiftPairSet& filtered);

// TSV persistence: marginals as (entity TAB count), joints as
// (ctx TAB label TAB count), pairs as (ctx TAB label TAB lift).
void save_stats(const CooccurrenceStats& stats, const std::filesystem::path& dir);
CooccurrenceStats load_stats(const std::filesystem::path& dir, std::string task_id);
void save_pairs(const LiftPairSet& pairs, const std::filesystem::path& file);
LiftPairSet load_pairs(const std::filesystem::path& file, std::string task_id);

}  // namespace ehrgraph
