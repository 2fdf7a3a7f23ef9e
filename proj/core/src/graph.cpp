#include "ehrgraph/graph.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "text_util.hpp"

namespace ehrgraph {

KnowledgeGraph KnowledgeGraph::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open graph: " + file.string());
    KnowledgeGraph graph;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = text::split(line, '\t');
        if (fields.size() != 3 || fields[0].empty() || fields[1].empty() || fields[2].empty()) {
            throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                                     ": expected <cui>\\t<relation>\\t<cui>");
        }
        graph.add_triple(fields[0], fields[1], fields[2]);
    }
    graph.finalize();
    return graph;
}

std::int32_t KnowledgeGraph::intern_node(std::string_view name) {
    const auto it = node_ids_.find(std::string(name));
    if (it != node_ids_.end()) return it->second;
    const auto id = static_cast<std::int32_t>(names_.size());
    names_.emplace_back(name);
    node_ids_.emplace(names_.back(), id);
    forward_.emplace_back();
    backward_.emplace_back();
    return id;
}

std::int32_t KnowledgeGraph::intern_relation(std::string_view name) {
    const auto it = relation_ids_.find(std::string(name));
    if (it != relation_ids_.end()) return it->second;
    const auto id = static_cast<std::int32_t>(relation_names_.size());
    relation_names_.emplace_back(name);
    relation_ids_.emplace(relation_names_.back(), id);
    return id;
}

void KnowledgeGraph::add_triple(std::string_view subject, std::string_view relation,
                                std::string_view object) {
    const std::int32_t s = intern_node(subject);
    const std::int32_t r = intern_relation(relation);
    const std::int32_t o = intern_node(object);
    forward_[static_cast<std::size_t>(s)].push_back({r, o});
    backward_[static_cast<std::size_t>(o)].push_back({r, s});
    sorted_ = false;
}

void KnowledgeGraph::finalize() {
    // Canonical arc order is by names, not intern ids, so the same triple set
    // always searches identically regardless of file order.
    auto arc_less = [this](const Arc& a, const Arc& b) {
        const int rel = relation_names_[static_cast<std::size_t>(a.relation)].compare(
            relation_names_[static_cast<std::size_t>(b.relation)]);
        if (rel != 0) return rel < 0;
        return names_[static_cast<std::size_t>(a.node)] <
               names_[static_cast<std::size_t>(b.node)];
    };
    auto arc_eq = [](const Arc& a, const Arc& b) {
        return a.relation == b.relation && a.node == b.node;
    };
    edge_count_ = 0;
    for (auto* side : {&forward_, &backward_}) {
        for (auto& arcs : *side) {
            std::sort(arcs.begin(), arcs.end(), arc_less);
            arcs.erase(std::unique(arcs.begin(), arcs.end(), arc_eq), arcs.end());
        }
    }
    for (const auto& arcs : forward_) edge_count_ += arcs.size();
    sorted_ = true;
}

bool KnowledgeGraph::contains(std::string_view concept_id) const {
    return node_ids_.contains(std::string(concept_id));
}

std::int32_t KnowledgeGraph::node_id(std::string_view concept_id) const {
    const auto it = node_ids_.find(std::string(concept_id));
    return it == node_ids_.end() ? -1 : it->second;
}

std::span<const KnowledgeGraph::Arc> KnowledgeGraph::out_arcs(std::int32_t node) const {
    return forward_[static_cast<std::size_t>(node)];
}

std::span<const KnowledgeGraph::Arc> KnowledgeGraph::in_arcs(std::int32_t node) const {
    return backward_[static_cast<std::size_t>(node)];
}

bool hops_chain(const RelationPath& path) {
    for (std::size_t i = 1; i < path.hops.size(); ++i) {
        if (path.hops[i].head != path.hops[i - 1].tail) return false;
    }
    return true;
}

namespace {

constexpr std::int16_t kUnvisited = -1;

// BFS distance map from `start`, capped at max_depth.
std::vector<std::int16_t> bfs_distances(const KnowledgeGraph& graph, std::int32_t start,
                                        std::size_t max_depth, bool forward) {
    std::vector<std::int16_t> dist(graph.node_count(), kUnvisited);
    std::vector<std::int32_t> frontier{start};
    dist[static_cast<std::size_t>(start)] = 0;
    std::int16_t level = 0;
    while (!frontier.empty() && static_cast<std::size_t>(level) < max_depth) {
        ++level;
        std::vector<std::int32_t> next;
        for (const std::int32_t u : frontier) {
            const auto arcs = forward ? graph.out_arcs(u) : graph.in_arcs(u);
            for (const auto& arc : arcs) {
                auto& d = dist[static_cast<std::size_t>(arc.node)];
                if (d == kUnvisited) {
                    d = level;
                    next.push_back(arc.node);
                }
            }
        }
        frontier = std::move(next);
    }
    return dist;
}

}  // namespace

std::optional<RelationPath> bidir_search(const KnowledgeGraph& graph,
                                         std::string_view src_concept,
                                         std::string_view dst_concept, std::size_t max_depth) {
    const std::int32_t src = graph.node_id(src_concept);
    const std::int32_t dst = graph.node_id(dst_concept);
    if (src < 0) {
        throw std::invalid_argument("concept not in graph: " + std::string(src_concept));
    }
    if (dst < 0) {
        throw std::invalid_argument("concept not in graph: " + std::string(dst_concept));
    }

    RelationPath path;
    path.source_entity = std::string(src_concept);
    path.target_entity = std::string(dst_concept);
    if (src == dst) return path;  // zero hops: endpoints share a concept

    // Alternating level expansion from both ends; stop as soon as the level
    // budget can no longer beat the best meeting point.
    std::vector<std::int16_t> dist_f(graph.node_count(), kUnvisited);
    std::vector<std::int16_t> dist_b(graph.node_count(), kUnvisited);
    dist_f[static_cast<std::size_t>(src)] = 0;
    dist_b[static_cast<std::size_t>(dst)] = 0;
    std::vector<std::int32_t> frontier_f{src};
    std::vector<std::int32_t> frontier_b{dst};
    std::size_t depth_f = 0, depth_b = 0;
    std::size_t best = std::numeric_limits<std::size_t>::max();

    while (!frontier_f.empty() && !frontier_b.empty() && depth_f + depth_b < max_depth &&
           depth_f + depth_b < best) {
        const bool expand_forward = frontier_f.size() <= frontier_b.size();
        auto& frontier = expand_forward ? frontier_f : frontier_b;
        auto& dist = expand_forward ? dist_f : dist_b;
        const auto& other = expand_forward ? dist_b : dist_f;
        const auto level =
            static_cast<std::int16_t>((expand_forward ? depth_f : depth_b) + 1);

        std::vector<std::int32_t> next;
        for (const std::int32_t u : frontier) {
            const auto arcs = expand_forward ? graph.out_arcs(u) : graph.in_arcs(u);
            for (const auto& arc : arcs) {
                auto& d = dist[static_cast<std::size_t>(arc.node)];
                if (d != kUnvisited) continue;
                d = level;
                next.push_back(arc.node);
                const auto od = other[static_cast<std::size_t>(arc.node)];
                if (od != kUnvisited) {
                    best = std::min(best, static_cast<std::size_t>(level) +
                                              static_cast<std::size_t>(od));
                }
            }
        }
        frontier = std::move(next);
        (expand_forward ? depth_f : depth_b) = static_cast<std::size_t>(level);
    }

    if (best > max_depth) return std::nullopt;
    const std::size_t hops = best;

    // Reconstruct the minimal hop sequence: adjacency is pre-sorted by
    // (relation name, node name), so the first shortest-path arc wins.
    const auto full_b = bfs_distances(graph, dst, hops, /*forward=*/false);
    std::int32_t current = src;
    for (std::size_t step = 0; step < hops; ++step) {
        const auto remaining = static_cast<std::int16_t>(hops - step - 1);
        bool advanced = false;
        for (const auto& arc : graph.out_arcs(current)) {
            if (full_b[static_cast<std::size_t>(arc.node)] == remaining) {
                path.hops.push_back({graph.node_name(current), graph.relation_name(arc.relation),
                                     graph.node_name(arc.node)});
                current = arc.node;
                advanced = true;
                break;
            }
        }
        if (!advanced) {
            throw std::logic_error("path reconstruction lost the trail");
        }
    }
    return path;
}

ThinkingGraph build_thinking_graph(std::string sample_id, std::span<const LiftPair> pairs,
                                   const ConceptLexicon& lexicon, const KnowledgeGraph& graph,
                                   std::size_t max_depth, double link_threshold) {
    ThinkingGraph out;
    out.sample_id = std::move(sample_id);
    for (const auto& pair : pairs) {
        const auto src = link_concept(pair.context_entity, lexicon, link_threshold);
        const auto dst = link_concept(pair.label_entity, lexicon, link_threshold);
        if (!src || !dst || !graph.contains(*src) || !graph.contains(*dst)) {
            ++out.dropped_pairs;
            continue;
        }
        auto path = bidir_search(graph, *src, *dst, max_depth);
        if (!path) {
            ++out.dropped_pairs;
            continue;
        }
        path->source_entity = pair.context_entity;
        path->target_entity = pair.label_entity;
        out.paths.push_back(std::move(*path));
    }
    return out;
}

}  // namespace ehrgraph
