#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ehrgraph/graph.hpp"

namespace ehrgraph {

// Built-in prompt template with {context}, {medical_knowledge},
// {ground_truth} and {task} placeholders. Overridable via config.
extern const std::string_view kDefaultSynthesisTemplate;

struct SynthesisPrompt {
    std::string sample_id;
    std::string text;
};

// Human-readable one-line form of each relation path:
// "entity --relation--> concept --relation--> entity". Intermediate nodes
// print their preferred lexicon term when one exists.
std::string render_paths(std::span<const RelationPath> paths, const ConceptLexicon* lexicon);

// Fills the template. Returns nullopt when the thinking graph is empty
// (the sample is not eligible for synthesis). Throws when the template
// lacks a placeholder.
std::optional<SynthesisPrompt> assemble_prompt(std::string_view sample_id,
                                               std::string_view context, std::string_view task,
                                               std::string_view ground_truth,
                                               const ThinkingGraph& graph,
                                               const ConceptLexicon* lexicon,
                                               std::string_view template_text);

// All four prompt sections present exactly once, as whole lines, in order.
bool prompt_sections_valid(std::string_view prompt_text);

struct EndpointConfig {
    std::string url;  // e.g. http://127.0.0.1:8080/v1/chat/completions
    std::string model = "gpt-4o";
    double temperature = 0.0;
    int max_attempts = 5;
    int initial_backoff_ms = 100;
    int timeout_seconds = 120;
    std::string auth_env;  // environment variable holding the bearer token
};

// POSTs a chat-completion request and returns the assistant message text.
// Connection failures, 429 and 5xx are retried with exponential backoff up
// to max_attempts; anything else throws immediately with the response body.
std::string request_completion(const std::string& prompt, const EndpointConfig& cfg);

class ReasoningParseError : public std::runtime_error {
public:
    ReasoningParseError(std::string header, const std::string& message)
        : std::runtime_error(message), header_(std::move(header)) {}
    const std::string& header() const { return header_; }

private:
    std::string header_;
};

struct ReasoningRecord {
    std::string sample_id;
    std::string extraction;
    std::string reasoning;
    std::vector<std::string> final_results;  // deduplicated, list markers stripped
    std::string raw;
};

// Splits the response on the "## Extraction", "## Reasoning" and
// "## Final Results" headers (case-insensitive, leading whitespace ok).
// Throws ReasoningParseError naming the first missing/violated header.
ReasoningRecord parse_reasoning(std::string_view sample_id, std::string_view raw);

struct RetentionVerdict {
    std::size_t inferable_count = 0;
    std::size_t original_count = 0;
    double ratio = 0.0;
    bool accepted = false;
};

// Accepted iff every final result is a ground-truth entity (exact string
// match after trimming) and the recovered fraction reaches the threshold.
RetentionVerdict validate_retention(const ReasoningRecord& record,
                                    const std::vector<std::string>& ground_truth,
                                    double threshold = 0.7);

struct TrainingRecord {
    std::string sample_id;
    std::string input;
    std::string answer;  // <think> block followed by the final entity lines
};

TrainingRecord emit_training_record(std::string_view sample_id, std::string_view input_text,
                                    const ReasoningRecord& record);

}  // namespace ehrgraph
