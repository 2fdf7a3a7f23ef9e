#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace ehrgraph {

// Lowercased, punctuation stripped, whitespace collapsed.
std::string normalize_term(std::string_view term);

// Normalized tokens, sorted and deduplicated (set form).
std::vector<std::string> token_set(std::string_view term);

// |A n B| / |A u B| over the two token sets.
double token_jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b);

// Term dictionary mapping surface strings (many) to concept ids (one each),
// with a token inverted index for approximate lookup.
class ConceptLexicon {
public:
    // TSV rows: concept_id TAB term. UTF-8, no header.
    static ConceptLexicon load(const std::filesystem::path& file);

    void add(std::string concept_id, std::string term);
    std::size_t size() const { return entries_.size(); }

    // Exact lookup on the normalized term.
    std::optional<std::string> exact_concept(std::string_view term) const;

    struct Entry;
    const Entry* exact_entry(std::string_view term) const;

    // First term registered for a concept; used for readable path rendering.
    std::optional<std::string> preferred_term(std::string_view concept_id) const;

    struct Match {
        std::string term;
        std::string concept_id;
        double score = 0.0;
    };

    // Best approximate match with token-set Jaccard >= threshold. Ties break
    // toward the lexicographically smallest concept id, then term.
    std::optional<Match> best_match(std::string_view term, double threshold) const;

    std::size_t max_term_tokens() const { return max_term_tokens_; }

    struct Entry {
        std::string term;
        std::string normalized;
        std::vector<std::string> tokens;  // sorted set
        std::string concept_id;
    };
    const std::vector<Entry>& entries() const { return entries_; }

private:
    std::optional<Match> best_match_tokens(const std::vector<std::string>& tokens,
                                           double threshold) const;

    std::vector<Entry> entries_;
    std::unordered_map<std::string, std::size_t> by_normalized_;   // first entry wins
    std::unordered_map<std::string, std::string> preferred_;       // concept -> first term
    std::unordered_map<std::string, std::vector<std::size_t>> token_index_;
    std::size_t max_term_tokens_ = 0;
};

// Greedy longest-match scan over the text's normalized tokens, emitting the
// lexicon term of every span that matches exactly or with token-set Jaccard
// >= threshold. Output is deduplicated in first-appearance order.
std::vector<std::string> extract_entities(std::string_view text, const ConceptLexicon& lexicon,
                                          double threshold = 0.7);

// Exact normalized lookup first, then the best approximate match. Returns
// nullopt below threshold; callers drop pairs with unlinkable endpoints.
std::optional<std::string> link_concept(std::string_view entity, const ConceptLexicon& lexicon,
                                        double threshold = 0.7);

}  // namespace ehrgraph
