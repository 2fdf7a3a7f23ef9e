#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "ehrgraph/cooccur.hpp"
#include "ehrgraph/lexicon.hpp"

namespace ehrgraph {

// Directed multigraph over concept ids with named relations. Concepts and
// relations are interned; adjacency is kept in both directions and sorted by
// (relation name, neighbor name) so searches are deterministic.
class KnowledgeGraph {
public:
    // TSV rows: concept_id TAB relation TAB concept_id. No header.
    static KnowledgeGraph load(const std::filesystem::path& file);

    void add_triple(std::string_view subject, std::string_view relation,
                    std::string_view object);
    // Sorts and deduplicates adjacency; called automatically by searches.
    void finalize();

    bool contains(std::string_view concept_id) const;
    std::size_t node_count() const { return names_.size(); }
    std::size_t edge_count() const { return edge_count_; }

    struct Arc {
        std::int32_t relation = 0;
        std::int32_t node = 0;
    };

    const std::string& node_name(std::int32_t id) const { return names_[static_cast<std::size_t>(id)]; }
    const std::string& relation_name(std::int32_t id) const { return relation_names_[static_cast<std::size_t>(id)]; }
    std::int32_t node_id(std::string_view concept_id) const;  // -1 when absent
    std::span<const Arc> out_arcs(std::int32_t node) const;
    std::span<const Arc> in_arcs(std::int32_t node) const;

private:
    std::int32_t intern_node(std::string_view name);
    std::int32_t intern_relation(std::string_view name);

    std::vector<std::string> names_;
    std::vector<std::string> relation_names_;
    std::unordered_map<std::string, std::int32_t> node_ids_;
    std::unordered_map<std::string, std::int32_t> relation_ids_;
    std::vector<std::vector<Arc>> forward_;
    std::vector<std::vector<Arc>> backward_;
    std::size_t edge_count_ = 0;
    bool sorted_ = true;
};

struct PathHop {
    std::string head;
    std::string relation;
    std::string tail;

    friend bool operator==(const PathHop&, const PathHop&) = default;
};

// A chained relation path between two surface entities. Zero hops means the
// endpoints share a concept.
struct RelationPath {
    std::string source_entity;
    std::string target_entity;
    std::vector<PathHop> hops;

    std::size_t length() const { return hops.size(); }
};

bool hops_chain(const RelationPath& path);

// Minimum-hop path of length <= max_depth found by alternating frontier
// expansion from both endpoints; nullopt when none exists. Among equal-length
// paths the hop sequence minimal under (relation name, node name) ordering is
// returned. Throws when either concept is absent from the graph, which is a
// different condition than "no path".
std::optional<RelationPath> bidir_search(const KnowledgeGraph& graph,
                                         std::string_view src_concept,
                                         std::string_view dst_concept, std::size_t max_depth);

struct ThinkingGraph {
    std::string sample_id;
    std::vector<RelationPath> paths;
    std::size_t dropped_pairs = 0;  // unlinkable endpoint or no path in range
};

// Links both entities of every lift pair to concepts and searches for a
// path; pairs that cannot be linked or connected are dropped (counted).
ThinkingGraph build_thinking_graph(std::string sample_id, std::span<const LiftPair> pairs,
                                   const ConceptLexicon& lexicon, const KnowledgeGraph& graph,
                                   std::size_t max_depth, double link_threshold = 0.7);

}  // namespace ehrgraph
