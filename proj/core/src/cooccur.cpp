#include "ehrgraph/cooccur.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "text_util.hpp"

namespace ehrgraph {
namespace {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("to_chars failed");
    return std::string(buf, ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::runtime_error("bad float in TSV: " + std::string(s));
    }
    return v;
}

std::uint64_t parse_count(std::string_view s) {
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
        throw std::runtime_error("bad count in TSV: " + std::string(s));
    }
    return v;
}

void write_marginal(const std::unordered_map<std::string, std::uint64_t>& counts,
                    const std::filesystem::path& file) {
    std::vector<std::pair<std::string, std::uint64_t>> rows(counts.begin(), counts.end());
    std::sort(rows.begin(), rows.end());
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    for (const auto& [entity, n] : rows) out << entity << '\t' << n << '\n';
}

void read_marginal(std::unordered_map<std::string, std::uint64_t>& counts,
                   const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = text::split(line, '\t');
        if (fields.size() != 2) throw std::runtime_error("bad row in " + file.string());
        counts[fields[0]] = parse_count(fields[1]);
    }
}

}  // namespace

CooccurrenceStats accumulate(std::span<const SampleEntities> samples, std::string task_id) {
    CooccurrenceStats stats;
    stats.task_id = std::move(task_id);
    std::unordered_set<std::string> ctx_set;
    std::unordered_set<std::string> label_set;
    for (const auto& sample : samples) {
        ++stats.total;
        ctx_set.clear();
        label_set.clear();
        for (const auto& e : sample.context) ctx_set.insert(e);
        for (const auto& y : sample.labels) label_set.insert(y);
        for (const auto& e : ctx_set) ++stats.ctx_counts[e];
        for (const auto& y : label_set) ++stats.label_counts[y];
        for (const auto& e : ctx_set) {
            for (const auto& y : label_set) ++stats.joint_counts[{e, y}];
        }
    }
    return stats;
}

void merge_stats(CooccurrenceStats& into, const CooccurrenceStats& from) {
    into.total += from.total;
    for (const auto& [e, n] : from.ctx_counts) into.ctx_counts[e] += n;
    for (const auto& [y, n] : from.label_counts) into.label_counts[y] += n;
    for (const auto& [pair, n] : from.joint_counts) into.joint_counts[pair] += n;
}

double lift(const std::string& context_entity, const std::string& label_entity,
            const CooccurrenceStats& stats) {
    const auto ctx_it = stats.ctx_counts.find(context_entity);
    const auto label_it = stats.label_counts.find(label_entity);
    const std::uint64_t ctx = ctx_it == stats.ctx_counts.end() ? 0 : ctx_it->second;
    const std::uint64_t label = label_it == stats.label_counts.end() ? 0 : label_it->second;
    if (ctx == 0 || label == 0) {
        throw std::invalid_argument("lift: zero marginal count for (" + context_entity + ", " +
                                    label_entity + ")");
    }
    const auto joint_it = stats.joint_counts.find({context_entity, label_entity});
    const std::uint64_t joint = joint_it == stats.joint_counts.end() ? 0 : joint_it->second;
    return static_cast<double>(joint) * static_cast<double>(stats.total) /
           (static_cast<double>(ctx) * static_cast<double>(label));
}

LiftPairSet filter_pairs(const CooccurrenceStats& stats, std::uint64_t min_count,
                         double min_lift) {
    LiftPairSet out;
    out.task_id = stats.task_id;
    for (const auto& [pair, joint] : stats.joint_counts) {
        if (joint == 0) continue;
        const std::uint64_t ctx = stats.ctx_counts.at(pair.first);
        const std::uint64_t label = stats.label_counts.at(pair.second);
        if (ctx <= min_count || label <= min_count) continue;
        const double value = lift(pair.first, pair.second, stats);
        if (value > min_lift) {
            out.pairs.push_back({pair.first, pair.second, value});
        }
    }
    std::sort(out.pairs.begin(), out.pairs.end(), [](const LiftPair& a, const LiftPair& b) {
        return std::tie(a.context_entity, a.label_entity) <
               std::tie(b.context_entity, b.label_entity);
    });
    return out;
}

std::vector<LiftPair> pairs_for_sample(const std::vector<std::string>& context_entities,
                                       const std::vector<std::string>& answer,
                                       const LiftPairSet& filtered) {
    const std::unordered_set<std::string> ctx(context_entities.begin(), context_entities.end());
    const std::unordered_set<std::string> labels(answer.begin(), answer.end());
    std::vector<LiftPair> out;
    for (const auto& pair : filtered.pairs) {
        if (ctx.contains(pair.context_entity) && labels.contains(pair.label_entity)) {
            out.push_back(pair);
        }
    }
    std::sort(out.begin(), out.end(), [](const LiftPair& a, const LiftPair& b) {
        if (a.lift != b.lift) return a.lift > b.lift;
        return std::tie(a.context_entity, a.label_entity) <
               std::tie(b.context_entity, b.label_entity);
    });
    return out;
}

void save_stats(const CooccurrenceStats& stats, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    write_marginal(stats.ctx_counts, dir / "ctx.tsv");
    write_marginal(stats.label_counts, dir / "label.tsv");

    std::vector<std::pair<std::pair<std::string, std::string>, std::uint64_t>> joints(
        stats.joint_counts.begin(), stats.joint_counts.end());
    std::sort(joints.begin(), joints.end());
    std::ofstream joint_out(dir / "joint.tsv");
    if (!joint_out) throw std::runtime_error("cannot write " + (dir / "joint.tsv").string());
    for (const auto& [pair, n] : joints) {
        joint_out << pair.first << '\t' << pair.second << '\t' << n << '\n';
    }
    std::ofstream total_out(dir / "total.tsv");
    total_out << stats.total << '\n';
}

CooccurrenceStats load_stats(const std::filesystem::path& dir, std::string task_id) {
    CooccurrenceStats stats;
    stats.task_id = std::move(task_id);
    read_marginal(stats.ctx_counts, dir / "ctx.tsv");
    read_marginal(stats.label_counts, dir / "label.tsv");
    std::ifstream joint_in(dir / "joint.tsv");
    if (!joint_in) throw std::runtime_error("cannot open " + (dir / "joint.tsv").string());
    std::string line;
    while (std::getline(joint_in, line)) {
        if (line.empty()) continue;
        const auto fields = text::split(line, '\t');
        if (fields.size() != 3) throw std::runtime_error("bad joint row: " + line);
        stats.joint_counts[{fields[0], fields[1]}] = parse_count(fields[2]);
    }
    std::ifstream total_in(dir / "total.tsv");
    if (!total_in) throw std::runtime_error("cannot open " + (dir / "total.tsv").string());
    total_in >> stats.total;
    return stats;
}

void save_pairs(const LiftPairSet& pairs, const std::filesystem::path& file) {
    std::ofstream out(file);
    if (!out) throw std::runtime_error("cannot write " + file.string());
    for (const auto& pair : pairs.pairs) {
        out << pair.context_entity << '\t' << pair.label_entity << '\t'
            << format_double(pair.lift) << '\n';
    }
}

LiftPairSet load_pairs(const std::filesystem::path& file, std::string task_id) {
    LiftPairSet out;
    out.task_id = std::move(task_id);
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open " + file.string());
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = text::split(line, '\t');
        if (fields.size() != 3) throw std::runtime_error("bad pair row: " + line);
        out.pairs.push_back({fields[0], fields[1], parse_double(fields[2])});
    }
    return out;
}

}  // namespace ehrgraph
