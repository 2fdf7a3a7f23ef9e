#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ehrgraph/time.hpp"

namespace ehrgraph {

// One clinical event: a category (table name), an optional timestamp, and a
// small table of rows that all share the same ordered column set. Header
// events (demographics) carry no timestamp and sort before everything else.
struct ClinicalEvent {
    std::string category;
    std::optional<Timestamp> timestamp;
    bool day_only = false;  // timestamp came from a date-only string
    bool excluded = false;  // enrichment could not anchor this event in time
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    bool is_header() const { return !timestamp.has_value(); }

    // Index of a column by exact name, or -1.
    int column_index(std::string_view name) const;

    // Value of `column` in `row`, or nullopt when the column is absent.
    std::optional<std::string_view> value(std::string_view column, std::size_t row = 0) const;
};

struct PatientTimeline {
    std::string subject_id;
    std::vector<ClinicalEvent> events;
};

enum class CodeMapKind { icd_to_ccs, ndc_to_atc };

// Total lookup from a source code to its coarser category name.
struct CodeMap {
    CodeMapKind kind = CodeMapKind::icd_to_ccs;
    std::unordered_map<std::string, std::string> entries;

    std::optional<std::string_view> lookup(std::string_view code) const;
};

// Two-column TSV (source_code TAB target_name), UTF-8, no header.
CodeMap load_code_map(const std::filesystem::path& file, CodeMapKind kind);

// Non-fatal finding surfaced to the caller instead of a global log.
struct WarningRecord {
    std::string subject_id;
    std::string message;
};

}  // namespace ehrgraph
