#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ehrgraph/event.hpp"

namespace ehrgraph {

// Optional pretty names for event categories ("poe" -> "Provider Order
// Entry"). Anything absent falls back to underscore-token capitalization.
using DisplayMap = std::unordered_map<std::string, std::string>;

// "curr_service" -> "Curr_Service"; map overrides win.
std::string display_name(std::string_view raw, const DisplayMap& overrides = {});

// Renders one event as markdown: a "## Name [time]" title ("#" and "[None]"
// for untimestamped header events), bullet lines for single-record events
// and a pipe table otherwise. Missing table cells render as "nan"; missing
// bullet values are omitted.
std::string render_event(const ClinicalEvent& event, const DisplayMap& overrides = {});

// Events separated by exactly one blank line. Deterministic.
std::string render_window(std::span<const ClinicalEvent> events,
                          const DisplayMap& overrides = {});

// window + blank line + instruction. The instruction must be non-empty.
std::string render_sample_input(std::string_view window_text, std::string_view instruction);

// Minimal inverse used by corpus validation and round-trip tests. Keys come
// back in display casing.
struct ParsedEvent {
    std::string display_name;
    std::optional<Timestamp> timestamp;
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;
};

std::vector<ParsedEvent> parse_rendered_window(std::string_view text);

}  // namespace ehrgraph
