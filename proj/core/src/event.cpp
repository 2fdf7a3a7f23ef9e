#include "ehrgraph/event.hpp"

#include <fstream>
#include <stdexcept>

namespace ehrgraph {

int ClinicalEvent::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i] == name) return static_cast<int>(i);
    }
    return -1;
}

std::optional<std::string_view> ClinicalEvent::value(std::string_view column,
                                                     std::size_t row) const {
    const int idx = column_index(column);
    if (idx < 0 || row >= rows.size()) return std::nullopt;
    return std::string_view(rows[row][static_cast<std::size_t>(idx)]);
}

std::optional<std::string_view> CodeMap::lookup(std::string_view code) const {
    auto it = entries.find(std::string(code));
    if (it == entries.end()) return std::nullopt;
    return std::string_view(it->second);
}

CodeMap load_code_map(const std::filesystem::path& file, CodeMapKind kind) {
    std::ifstream in(file);
    if (!in) {
        throw std::runtime_error("cannot open code map: " + file.string());
    }
    CodeMap map;
    map.kind = kind;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size()) {
            throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                                     ": expected <code>\\t<name>");
        }
        map.entries.emplace(line.substr(0, tab), line.substr(tab + 1));
    }
    return map;
}

}  // namespace ehrgraph
