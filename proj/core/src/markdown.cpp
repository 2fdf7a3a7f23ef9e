#include "ehrgraph/markdown.hpp"

#include <stdexcept>

#include "text_util.hpp"

namespace ehrgraph {
namespace {

// Flatten control characters so one record can never span rendered lines or
// introduce tabs, then drop trailing blanks.
std::string sanitize(std::string_view value, bool table_cell) {
    std::string out;
    out.reserve(value.size());
    for (char c : value) {
        if (c == '\t' || c == '\n') {
            out.push_back(' ');
        } else if (c == '\r') {
            continue;
        } else if (c == '|' && table_cell) {
            out.push_back('/');
        } else {
            out.push_back(c);
        }
    }
    return std::string(text::trim(out));
}

std::string title_line(const ClinicalEvent& event, const DisplayMap& overrides) {
    std::string line = event.is_header() ? "# " : "## ";
    line += display_name(event.category, overrides);
    line += " [";
    line += event.timestamp.has_value() ? format_timestamp(*event.timestamp) : "None";
    line += "]";
    return line;
}

}  // namespace

std::string display_name(std::string_view raw, const DisplayMap& overrides) {
    if (auto it = overrides.find(std::string(raw)); it != overrides.end()) {
        return it->second;
    }
    std::string out(raw);
    bool at_token_start = true;
    for (char& c : out) {
        if (c == '_') {
            at_token_start = true;
        } else if (at_token_start) {
            if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
            at_token_start = false;
        }
    }
    return out;
}

std::string render_event(const ClinicalEvent& event, const DisplayMap& overrides) {
    std::string out = title_line(event, overrides);
    if (event.rows.empty()) return out;

    if (event.rows.size() == 1) {
        const auto& row = event.rows[0];
        for (std::size_t i = 0; i < event.columns.size() && i < row.size(); ++i) {
            const std::string value = sanitize(row[i], /*table_cell=*/false);
            if (value.empty()) continue;  // absent values are omitted from bullets
            out += "\n- " + display_name(event.columns[i], overrides) + ": " + value;
        }
        return out;
    }

    out += "\n|";
    for (const auto& column : event.columns) {
        out += " " + display_name(column, overrides) + " |";
    }
    out += "\n|";
    for (std::size_t i = 0; i < event.columns.size(); ++i) {
        out += " ------ |";
    }
    for (const auto& row : event.rows) {
        out += "\n|";
        for (std::size_t i = 0; i < event.columns.size(); ++i) {
            std::string value =
                i < row.size() ? sanitize(row[i], /*table_cell=*/true) : std::string();
            if (value.empty()) value = "nan";  // absent cells keep the table rectangular
            out += " " + value + " |";
        }
    }
    return out;
}

std::string render_window(std::span<const ClinicalEvent> events, const DisplayMap& overrides) {
    std::string out;
    for (std::size_t i = 0; i < events.size(); ++i) {
        if (i > 0) out += "\n\n";
        out += render_event(events[i], overrides);
    }
    return out;
}

std::string render_sample_input(std::string_view window_text, std::string_view instruction) {
    if (instruction.empty()) {
        throw std::invalid_argument("sample instruction must be non-empty");
    }
    std::string out(window_text);
    out += "\n\n";
    out += instruction;
    return out;
}

std::vector<ParsedEvent> parse_rendered_window(std::string_view textv) {
    std::vector<ParsedEvent> events;
    std::vector<std::string> pending_table;

    auto flush_table = [&]() {
        if (pending_table.empty()) return;
        if (events.empty()) {
            pending_table.clear();
            return;
        }
        auto cells = [](std::string_view line) {
            std::vector<std::string> out;
            std::string_view body = text::trim(line);
            if (body.size() >= 2 && body.front() == '|' && body.back() == '|') {
                body = body.substr(1, body.size() - 2);
            }
            for (const auto& cell : text::split(body, '|')) {
                out.emplace_back(text::trim(cell));
            }
            return out;
        };
        ParsedEvent& event = events.back();
        event.columns = cells(pending_table[0]);
        for (std::size_t i = 1; i < pending_table.size(); ++i) {
            auto row = cells(pending_table[i]);
            const bool separator =
                !row.empty() && row[0].find_first_not_of('-') == std::string::npos;
            if (i == 1 && separator) continue;
            event.rows.push_back(std::move(row));
        }
        pending_table.clear();
    };

    for (std::string_view line : text::split_lines(textv)) {
        const std::string_view trimmed = text::trim(line);
        if (trimmed.starts_with("# ") || trimmed.starts_with("## ")) {
            flush_table();
            const std::size_t name_start = trimmed.find(' ') + 1;
            const std::size_t bracket = trimmed.rfind(" [");
            if (bracket == std::string_view::npos || !trimmed.ends_with(']')) continue;
            ParsedEvent event;
            event.display_name = std::string(trimmed.substr(name_start, bracket - name_start));
            const std::string_view stamp =
                trimmed.substr(bracket + 2, trimmed.size() - bracket - 3);
            if (stamp != "None") {
                if (auto parsed = parse_timestamp(stamp)) event.timestamp = parsed->value;
            }
            events.push_back(std::move(event));
        } else if (trimmed.starts_with("- ") && !events.empty()) {
            flush_table();
            const std::string_view body = trimmed.substr(2);
            const std::size_t sep = body.find(": ");
            if (sep == std::string_view::npos) continue;
            ParsedEvent& event = events.back();
            event.columns.emplace_back(body.substr(0, sep));
            if (event.rows.empty()) event.rows.emplace_back();
            event.rows[0].emplace_back(body.substr(sep + 2));
        } else if (trimmed.starts_with('|')) {
            pending_table.emplace_back(trimmed);
        } else if (trimmed.empty()) {
            flush_table();
        }
    }
    flush_table();
    return events;
}

}  // namespace ehrgraph
