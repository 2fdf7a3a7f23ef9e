#include "ehrgraph/lexicon.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>
#include <unordered_set>

#include "text_util.hpp"

namespace ehrgraph {

std::string normalize_term(std::string_view term) {
    std::string out;
    out.reserve(term.size());
    bool pending_space = false;
    for (char c : term) {
        const bool alnum = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                           (c >= '0' && c <= '9') || static_cast<unsigned char>(c) >= 0x80;
        if (alnum) {
            if (pending_space && !out.empty()) out.push_back(' ');
            pending_space = false;
            out.push_back(c >= 'A' && c <= 'Z' ? static_cast<char>(c - 'A' + 'a') : c);
        } else {
            pending_space = true;
        }
    }
    return out;
}

std::vector<std::string> token_set(std::string_view term) {
    std::vector<std::string> tokens = text::split(normalize_term(term), ' ');
    tokens.erase(std::remove_if(tokens.begin(), tokens.end(),
                                [](const std::string& t) { return t.empty(); }),
                 tokens.end());
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    return tokens;
}

double token_jaccard(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0, i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++inter;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    const std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

ConceptLexicon ConceptLexicon::load(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw std::runtime_error("cannot open lexicon: " + file.string());
    ConceptLexicon lexicon;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            throw std::runtime_error(file.string() + ":" + std::to_string(line_no) +
                                     ": expected <concept_id>\\t<term>");
        }
        lexicon.add(line.substr(0, tab), line.substr(tab + 1));
    }
    return lexicon;
}

void ConceptLexicon::add(std::string concept_id, std::string term) {
    if (concept_id.empty()) throw std::invalid_argument("lexicon: empty concept id");
    Entry entry;
    entry.term = std::move(term);
    entry.normalized = normalize_term(entry.term);
    if (entry.normalized.empty()) {
        throw std::invalid_argument("lexicon: term '" + entry.term +
                                    "' is empty after normalization");
    }
    entry.tokens = token_set(entry.normalized);
    entry.concept_id = std::move(concept_id);

    const std::size_t index = entries_.size();
    by_normalized_.emplace(entry.normalized, index);
    preferred_.emplace(entry.concept_id, entry.term);
    for (const auto& token : entry.tokens) token_index_[token].push_back(index);
    max_term_tokens_ = std::max(max_term_tokens_, entry.tokens.size());
    entries_.push_back(std::move(entry));
}

std::optional<std::string> ConceptLexicon::exact_concept(std::string_view term) const {
    const Entry* entry = exact_entry(term);
    if (entry == nullptr) return std::nullopt;
    return entry->concept_id;
}

const ConceptLexicon::Entry* ConceptLexicon::exact_entry(std::string_view term) const {
    const auto it = by_normalized_.find(normalize_term(term));
    if (it == by_normalized_.end()) return nullptr;
    return &entries_[it->second];
}

std::optional<std::string> ConceptLexicon::preferred_term(std::string_view concept_id) const {
    const auto it = preferred_.find(std::string(concept_id));
    if (it == preferred_.end()) return std::nullopt;
    return it->second;
}

std::optional<ConceptLexicon::Match> ConceptLexicon::best_match_tokens(
    const std::vector<std::string>& tokens, double threshold) const {
    std::unordered_set<std::size_t> candidates;
    for (const auto& token : tokens) {
        const auto it = token_index_.find(token);
        if (it == token_index_.end()) continue;
        candidates.insert(it->second.begin(), it->second.end());
    }
    std::optional<Match> best;
    for (const std::size_t index : candidates) {
        const Entry& entry = entries_[index];
        const double score = token_jaccard(tokens, entry.tokens);
        if (score < threshold) continue;
        if (!best || score > best->score ||
            (score == best->score &&
             std::tie(entry.concept_id, entry.term) < std::tie(best->concept_id, best->term))) {
            best = Match{entry.term, entry.concept_id, score};
        }
    }
    return best;
}

std::optional<ConceptLexicon::Match> ConceptLexicon::best_match(std::string_view term,
                                                                double threshold) const {
    return best_match_tokens(token_set(term), threshold);
}

std::vector<std::string> extract_entities(std::string_view textv, const ConceptLexicon& lexicon,
                                          double threshold) {
    std::vector<std::string> ordered_tokens = text::split(normalize_term(textv), ' ');
    ordered_tokens.erase(std::remove_if(ordered_tokens.begin(), ordered_tokens.end(),
                                        [](const std::string& t) { return t.empty(); }),
                         ordered_tokens.end());

    std::vector<std::string> found;
    std::unordered_set<std::string> seen;
    auto emit = [&](const std::string& term) {
        if (seen.insert(term).second) found.push_back(term);
    };

    std::size_t i = 0;
    while (i < ordered_tokens.size()) {
        const std::size_t longest =
            std::min(lexicon.max_term_tokens(), ordered_tokens.size() - i);
        std::size_t advance = 0;
        for (std::size_t len = longest; len >= 1; --len) {
            std::string phrase;
            for (std::size_t k = 0; k < len; ++k) {
                if (k > 0) phrase += ' ';
                phrase += ordered_tokens[i + k];
            }
            if (const auto* entry = lexicon.exact_entry(phrase)) {
                emit(entry->term);
                advance = len;
                break;
            }
            auto match = lexicon.best_match(phrase, threshold);
            if (match) {
                emit(match->term);
                advance = len;
                break;
            }
        }
        i += advance > 0 ? advance : 1;
    }
    return found;
}

std::optional<std::string> link_concept(std::string_view entity, const ConceptLexicon& lexicon,
                                        double threshold) {
    if (auto exact = lexicon.exact_concept(entity)) return exact;
    if (auto match = lexicon.best_match(entity, threshold)) return match->concept_id;
    return std::nullopt;
}

}  // namespace ehrgraph
