#pragma once

// JSON (de)serialization helpers shared by the pipeline stages.

#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "ehrgraph/event.hpp"

namespace ehrgraph::jsonl {

using nlohmann::json;

inline json event_to_json(const ClinicalEvent& event) {
    json j{
        {"category", event.category},
        {"columns", event.columns},
        {"rows", event.rows},
    };
    if (event.timestamp.has_value()) {
        j["time"] = format_timestamp(*event.timestamp);
    } else {
        j["time"] = nullptr;
    }
    if (event.day_only) j["day_only"] = true;
    if (event.excluded) j["excluded"] = true;
    return j;
}

inline ClinicalEvent event_from_json(const json& j) {
    ClinicalEvent event;
    event.category = j.at("category").get<std::string>();
    event.columns = j.at("columns").get<std::vector<std::string>>();
    event.rows = j.at("rows").get<std::vector<std::vector<std::string>>>();
    if (j.contains("time") && !j["time"].is_null()) {
        const auto text = j["time"].get<std::string>();
        const auto parsed = parse_timestamp(text);
        if (!parsed) throw std::runtime_error("bad timestamp in record: " + text);
        event.timestamp = parsed->value;
    }
    event.day_only = j.value("day_only", false);
    event.excluded = j.value("excluded", false);
    return event;
}

inline void for_each_line(const std::filesystem::path& file,
                          const std::function<void(const json&, std::size_t)>& fn) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw std::runtime_error(file.string() + ":" + std::to_string(line_no) + ": " +
                                     e.what());
        }
        fn(j, line_no);
    }
}

class Writer {
public:
    explicit Writer(const std::filesystem::path& file) : out_(file) {
        if (!out_) throw std::runtime_error("cannot write " + file.string());
    }
    void write(const json& j) { out_ << j.dump() << '\n'; }

private:
    std::ofstream out_;
};

}  // namespace ehrgraph::jsonl
