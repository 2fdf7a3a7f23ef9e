#include "ehrgraph/synthesis.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <thread>
#include <unordered_set>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "ehrgraph/task.hpp"
#include "text_util.hpp"

namespace ehrgraph {

using nlohmann::json;

const std::string_view kDefaultSynthesisTemplate = R"(========================================
# Patient EHR Context #
{context}

========================================
# Retrieved Medical Knowledge #
{medical_knowledge}

========================================
# Ground Truth #
{ground_truth}

========================================
# Task #
{task}
========================================

# Data Description
- "# Patient EHR Context #" holds every recorded event from the patient's observable history.
- "# Retrieved Medical Knowledge #" holds relations linking context entities to the answer entities.
- "# Ground Truth #" holds the correct answers for this task; listed predictions must match them exactly.
- "# Task #" states what must be solved using the patient context alone.

# Instructions
Write a logically rigorous clinical reasoning process that derives the answers in "# Ground Truth #" from the content of "# Patient EHR Context #" and "# Task #".

# Requirements
The reasoning process must consist of three stages: Extraction, Reasoning, and Final Results.

## Extraction
- Extract each piece of key information from the patient context, guided by the retrieved relations.
- Skip information that does not help the reasoning.
- Name the source event and its time for every extracted item:
    **Event Name [Event Time]**: the information taken from that event and how it bears on the answer.

## Reasoning
- Connect the extracted information to each answer entity step by step, naming the clinical knowledge each step relies on.
- Omit answer entities that cannot be inferred from the context. Do not use the words "maybe", "possible" or "though".
- Every step must build forward from the context; never reason backwards from the answer.

## Final Results
- List only the answer entities that were correctly inferred during the Reasoning stage, one per line.
- Every listed entity must reproduce its "# Ground Truth #" string exactly.

# Important Notes!!!
- For each retrieved relation that is relevant, locate where its first entity appears inside the patient context and annotate it during Extraction.
- Work through how each answer entity is inferred, carefully, during Reasoning.
- Keep all use of "# Ground Truth #" and "# Retrieved Medical Knowledge #" implicit; never write anything revealing that you can see them.

# Output Format
## Extraction
[YOUR OUTPUT]

## Reasoning
[YOUR OUTPUT]

## Final Results
[YOUR OUTPUT]
)";

std::string render_paths(std::span<const RelationPath> paths, const ConceptLexicon* lexicon) {
    auto display = [&](const std::string& concept_id) {
        if (lexicon != nullptr) {
            if (auto term = lexicon->preferred_term(concept_id)) return *term;
        }
        return concept_id;
    };
    std::string out;
    for (std::size_t p = 0; p < paths.size(); ++p) {
        const RelationPath& path = paths[p];
        if (p > 0) out += "\n";
        if (path.hops.empty()) {
            out += path.source_entity + " --same_concept--> " + path.target_entity;
            continue;
        }
        out += path.source_entity;
        for (std::size_t i = 0; i < path.hops.size(); ++i) {
            const bool last = i + 1 == path.hops.size();
            out += " --" + path.hops[i].relation + "--> ";
            out += last ? path.target_entity : display(path.hops[i].tail);
        }
    }
    return out;
}

namespace {

void substitute(std::string& text, std::string_view placeholder, std::string_view value) {
    const std::size_t pos = text.find(placeholder);
    if (pos == std::string::npos) {
        throw std::invalid_argument("synthesis template lacks placeholder: " +
                                    std::string(placeholder));
    }
    text.replace(pos, placeholder.size(), value);
}

}  // namespace

std::optional<SynthesisPrompt> assemble_prompt(std::string_view sample_id,
                                               std::string_view context, std::string_view task,
                                               std::string_view ground_truth,
                                               const ThinkingGraph& graph,
                                               const ConceptLexicon* lexicon,
                                               std::string_view template_text) {
    if (graph.paths.empty()) return std::nullopt;
    SynthesisPrompt prompt;
    prompt.sample_id = std::string(sample_id);
    prompt.text = std::string(template_text);
    substitute(prompt.text, "{context}", context);
    substitute(prompt.text, "{medical_knowledge}", render_paths(graph.paths, lexicon));
    substitute(prompt.text, "{ground_truth}", ground_truth);
    substitute(prompt.text, "{task}", task);
    return prompt;
}

bool prompt_sections_valid(std::string_view prompt_text) {
    static constexpr std::string_view kSections[] = {
        "# Patient EHR Context #",
        "# Retrieved Medical Knowledge #",
        "# Ground Truth #",
        "# Task #",
    };
    std::size_t last_pos = 0;
    for (const auto section : kSections) {
        std::size_t count = 0;
        std::size_t found = std::string_view::npos;
        for (const auto line : text::split_lines(prompt_text)) {
            if (text::trim(line) == section) {
                ++count;
                found = static_cast<std::size_t>(line.data() - prompt_text.data());
            }
        }
        if (count != 1 || found < last_pos) return false;
        last_pos = found;
    }
    return true;
}

std::string request_completion(const std::string& prompt, const EndpointConfig& cfg) {
    // Split "scheme://host[:port]/path".
    const std::size_t scheme_end = cfg.url.find("://");
    if (scheme_end == std::string::npos) {
        throw std::invalid_argument("endpoint url must include a scheme: " + cfg.url);
    }
    const std::size_t path_start = cfg.url.find('/', scheme_end + 3);
    const std::string base =
        path_start == std::string::npos ? cfg.url : cfg.url.substr(0, path_start);
    const std::string path =
        path_start == std::string::npos ? std::string("/") : cfg.url.substr(path_start);

    json body{
        {"model", cfg.model},
        {"messages", json::array({json{{"role", "user"}, {"content", prompt}}})},
        {"temperature", cfg.temperature},
    };
    httplib::Headers headers;
    if (!cfg.auth_env.empty()) {
        if (const char* token = std::getenv(cfg.auth_env.c_str())) {
            headers.emplace("Authorization", std::string("Bearer ") + token);
        }
    }

    std::string last_error;
    for (int attempt = 0; attempt < std::max(1, cfg.max_attempts); ++attempt) {
        if (attempt > 0) {
            const auto backoff =
                std::chrono::milliseconds(cfg.initial_backoff_ms) * (1 << (attempt - 1));
            std::this_thread::sleep_for(backoff);
        }
        httplib::Client client(base);
        client.set_connection_timeout(cfg.timeout_seconds, 0);
        client.set_read_timeout(cfg.timeout_seconds, 0);
        auto res = client.Post(path, headers, body.dump(), "application/json");
        if (!res) {
            last_error = "connection failed: " + httplib::to_string(res.error());
            continue;
        }
        if (res->status == 200) {
            try {
                const json reply = json::parse(res->body);
                return reply.at("choices").at(0).at("message").at("content").get<std::string>();
            } catch (const json::exception& e) {
                throw std::runtime_error(std::string("malformed completion response: ") +
                                         e.what());
            }
        }
        if (res->status == 429 || res->status >= 500) {
            last_error = "HTTP " + std::to_string(res->status);
            continue;
        }
        throw std::runtime_error("completion endpoint rejected request (HTTP " +
                                 std::to_string(res->status) + "): " + res->body);
    }
    throw std::runtime_error("completion request failed after " +
                             std::to_string(std::max(1, cfg.max_attempts)) +
                             " attempts: " + last_error);
}

namespace {

bool is_header_line(std::string_view line, std::string_view header) {
    std::string_view body = text::trim(line);
    if (!body.starts_with("##")) return false;
    body.remove_prefix(2);
    body = text::trim(body);
    while (!body.empty() && (body.back() == ':' || body.back() == '#')) {
        body.remove_suffix(1);
        body = text::trim(body);
    }
    return text::lower(body) == text::lower(header);
}

}  // namespace

ReasoningRecord parse_reasoning(std::string_view sample_id, std::string_view raw) {
    if (raw.find("<think>") != std::string_view::npos ||
        raw.find("</think>") != std::string_view::npos) {
        throw ReasoningParseError("Extraction", "response contains think tags");
    }

    static constexpr std::string_view kHeaders[] = {"Extraction", "Reasoning", "Final Results"};
    const auto lines = text::split_lines(raw);
    std::size_t marks[3];
    std::size_t cursor = 0;
    for (std::size_t h = 0; h < 3; ++h) {
        bool found = false;
        for (std::size_t i = cursor; i < lines.size(); ++i) {
            if (is_header_line(lines[i], kHeaders[h])) {
                marks[h] = i;
                cursor = i + 1;
                found = true;
                break;
            }
        }
        if (!found) {
            throw ReasoningParseError(std::string(kHeaders[h]),
                                      "missing or out-of-order header: ## " +
                                          std::string(kHeaders[h]));
        }
    }

    auto section_text = [&](std::size_t from, std::size_t to) {
        std::string out;
        for (std::size_t i = from; i < to; ++i) {
            if (!out.empty()) out += "\n";
            out += std::string(lines[i]);
        }
        return std::string(text::trim(out));
    };

    ReasoningRecord record;
    record.sample_id = std::string(sample_id);
    record.raw = std::string(raw);
    record.extraction = section_text(marks[0] + 1, marks[1]);
    record.reasoning = section_text(marks[1] + 1, marks[2]);
    const std::string final_block = section_text(marks[2] + 1, lines.size());

    if (record.extraction.empty()) {
        throw ReasoningParseError("Extraction", "empty Extraction section");
    }
    if (record.reasoning.empty()) {
        throw ReasoningParseError("Reasoning", "empty Reasoning section");
    }
    std::unordered_set<std::string> seen;
    for (const auto line : text::split_lines(final_block)) {
        std::string item = text::strip_list_marker(line);
        if (item.empty()) continue;
        if (seen.insert(item).second) record.final_results.push_back(std::move(item));
    }
    if (record.final_results.empty()) {
        throw ReasoningParseError("Final Results", "empty Final Results section");
    }
    return record;
}

RetentionVerdict validate_retention(const ReasoningRecord& record,
                                    const std::vector<std::string>& ground_truth,
                                    double threshold) {
    std::unordered_set<std::string> truth;
    for (const auto& item : ground_truth) truth.insert(std::string(text::trim(item)));

    RetentionVerdict verdict;
    verdict.original_count = truth.size();
    bool hallucinated = false;
    std::unordered_set<std::string> matched;
    for (const auto& item : record.final_results) {
        const std::string trimmed(text::trim(item));
        if (truth.contains(trimmed)) {
            matched.insert(trimmed);
        } else {
            hallucinated = true;
        }
    }
    verdict.inferable_count = matched.size();
    verdict.ratio = verdict.original_count == 0
                        ? 0.0
                        : static_cast<double>(verdict.inferable_count) /
                              static_cast<double>(verdict.original_count);
    verdict.accepted = !hallucinated && verdict.ratio >= threshold;
    return verdict;
}

TrainingRecord emit_training_record(std::string_view sample_id, std::string_view input_text,
                                    const ReasoningRecord& record) {
    TrainingRecord out;
    out.sample_id = std::string(sample_id);
    out.input = std::string(input_text);
    out.answer = "<think>\n## Extraction\n" + record.extraction + "\n\n## Reasoning\n" +
                 record.reasoning + "\n</think>\n" + format_answer(record.final_results);
    return out;
}

}  // namespace ehrgraph
