#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "konnect/kg.hpp"
#include "konnect/text.hpp"

namespace konnect {

/// Minimum trigram Jaccard similarity for a name to resolve.
inline constexpr double kNameMatchThreshold = 0.6;
/// Longest token n-gram tried as a person name.
inline constexpr std::size_t kMaxNameTokens = 4;

/// Leading honorifics removed by normalize_name.
inline constexpr std::array<std::string_view, 7> kNameTitles = {"queen", "king",      "sir",  "dame",
                                                                "dr",    "president", "saint"};

/// Lowercases, folds diacritics, removes punctuation, collapses whitespace
/// and strips leading titles. Apostrophes and periods are deleted
/// ("O'Neill" -> "oneill", "Dr." -> "dr"); other punctuation separates
/// words. Titles are stripped only while another word remains, which keeps
/// the function idempotent.
inline std::string normalize_name(std::string_view raw)
{
    std::string folded;
    folded.reserve(raw.size());
    for (std::size_t pos = 0; pos < raw.size();) {
        const char32_t c = text::next_code_point(raw, pos);
        if (text::is_combining_mark(c) || text::is_apostrophe(c) || c == '.') continue;
        if (text::is_word_char(c)) text::append_folded(folded, c);
        else folded += ' ';
    }

    std::vector<std::string_view> words;
    std::string_view view(folded);
    for (std::size_t i = 0; i < view.size();) {
        while (i < view.size() && view[i] == ' ') ++i;
        std::size_t j = i;
        while (j < view.size() && view[j] != ' ') ++j;
        if (j > i) words.push_back(view.substr(i, j - i));
        i = j;
    }
    std::size_t first = 0;
    while (words.size() - first > 1 &&
           std::find(kNameTitles.begin(), kNameTitles.end(), words[first]) != kNameTitles.end())
        ++first;

    std::string out;
    for (std::size_t i = first; i < words.size(); ++i) {
        if (!out.empty()) out += ' ';
        out += words[i];
    }
    return out;
}

/// Character trigrams of a normalized key, padded with two leading blanks
/// and one trailing blank. Each trigram is packed into 63 bits.
inline std::vector<std::uint64_t> name_trigrams(std::string_view key)
{
    std::vector<char32_t> cps = {U' ', U' '};
    for (std::size_t pos = 0; pos < key.size();) cps.push_back(text::next_code_point(key, pos));
    cps.push_back(U' ');
    std::vector<std::uint64_t> out;
    for (std::size_t i = 0; i + 3 <= cps.size(); ++i)
        out.push_back((std::uint64_t(cps[i]) << 42) | (std::uint64_t(cps[i + 1]) << 21) | std::uint64_t(cps[i + 2]));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

struct NameMatch {
    EntityId entity_id;
    /// Half-open token range [span_begin, span_end) in the query.
    std::size_t span_begin = 0;
    std::size_t span_end = 0;
    double score = 0.0;

    friend bool operator==(const NameMatch&, const NameMatch&) = default;
};

/// Trigram inverted index over the normalized names (label and aliases) of
/// every person in a graph.
class NameIndex {
public:
    struct Key {
        std::string key;
        EntityId entity;
        std::int64_t mention_count;
        std::size_t trigram_count;
    };

    NameIndex() = default;

    explicit NameIndex(const KnowledgeGraph& graph, double threshold = kNameMatchThreshold) : threshold_(threshold)
    {
        for (const auto& e : graph.entities()) {
            if (!e.is_person()) continue;
            std::set<std::string> keys;
            for (const auto* name : name_sources(e)) {
                auto k = normalize_name(*name);
                if (!k.empty()) keys.insert(std::move(k));
            }
            if (keys.empty()) keys.insert(e.id.str());  // label without a single letter or digit
            for (const auto& k : keys) add_key(k, e);
        }
    }

    std::span<const Key> keys() const noexcept { return keys_; }
    double threshold() const noexcept { return threshold_; }

    /// Best person for a free-text name, or nullopt when no key reaches the
    /// threshold. Ties: higher mention_count, then smaller EntityId. The
    /// returned span covers the words of the normalized candidate.
    std::optional<NameMatch> resolve(std::string_view candidate) const
    {
        const auto norm = normalize_name(candidate);
        if (norm.empty()) return std::nullopt;
        const auto grams = name_trigrams(norm);

        std::unordered_map<std::size_t, std::size_t> shared;
        for (auto g : grams) {
            auto it = postings_.find(g);
            if (it == postings_.end()) continue;
            for (auto k : it->second) ++shared[k];
        }

        const Key* best = nullptr;
        double best_score = 0.0;
        for (const auto& [k, inter] : shared) {
            const Key& key = keys_[k];
            const double score = key.key == norm
                                     ? 1.0
                                     : double(inter) / double(grams.size() + key.trigram_count - inter);
            if (score + 1e-12 < threshold_) continue;
            if (!best || better(score, key, best_score, *best)) {
                best = &key;
                best_score = score;
            }
        }
        if (!best) return std::nullopt;
        const auto words = static_cast<std::size_t>(std::count(norm.begin(), norm.end(), ' ')) + 1;
        return NameMatch{best->entity, 0, words, best_score};
    }

private:
    static std::vector<const std::string*> name_sources(const Entity& e)
    {
        std::vector<const std::string*> out = {&e.label};
        for (const auto& a : e.aliases) out.push_back(&a);
        return out;
    }

    static bool better(double score, const Key& key, double best_score, const Key& best)
    {
        if (score != best_score) return score > best_score;
        if (key.mention_count != best.mention_count) return key.mention_count > best.mention_count;
        return key.entity < best.entity;
    }

    void add_key(const std::string& k, const Entity& e)
    {
        const auto grams = name_trigrams(k);
        const std::size_t idx = keys_.size();
        keys_.push_back({k, e.id, e.mention_count, grams.size()});
        for (auto g : grams) postings_[g].push_back(idx);
    }

    double threshold_ = kNameMatchThreshold;
    std::vector<Key> keys_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> postings_;
};

inline std::optional<NameMatch> resolve_name(const NameIndex& index, std::string_view candidate)
{
    return index.resolve(candidate);
}

inline std::string lowercase_ascii(std::string_view s)
{
    std::string out(s);
    for (auto& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    return out;
}

/// Gazetteer span matching. Every n-gram of 1..kMaxNameTokens tokens that
/// neither begins nor ends with a stopword is resolved; accepted spans are
/// then chosen greedily by score, longer span, earlier start, skipping any
/// that overlaps a span already chosen. Output is ordered by span start;
/// later matches of an already matched person are dropped.
inline std::vector<NameMatch> extract_person_spans(const NameIndex& index, std::span<const std::string> tokens,
                                                   const std::set<std::string, std::less<>>& stopwords = {})
{
    auto is_stop = [&](const std::string& tok) { return stopwords.contains(lowercase_ascii(tok)); };

    std::vector<NameMatch> candidates;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (is_stop(tokens[i])) continue;
        for (std::size_t n = 1; n <= std::min(kMaxNameTokens, tokens.size() - i); ++n) {
            if (is_stop(tokens[i + n - 1])) continue;
            std::string candidate;
            for (std::size_t k = i; k < i + n; ++k) {
                if (k > i) candidate += ' ';
                candidate += tokens[k];
            }
            if (auto m = index.resolve(candidate)) candidates.push_back(NameMatch{m->entity_id, i, i + n, m->score});
        }
    }
    std::sort(candidates.begin(), candidates.end(), [](const NameMatch& a, const NameMatch& b) {
        if (a.score != b.score) return a.score > b.score;
        const auto la = a.span_end - a.span_begin, lb = b.span_end - b.span_begin;
        if (la != lb) return la > lb;
        return a.span_begin < b.span_begin;
    });

    std::vector<NameMatch> chosen;
    std::vector<bool> used(tokens.size(), false);
    for (const auto& c : candidates) {
        if (std::any_of(used.begin() + static_cast<std::ptrdiff_t>(c.span_begin),
                        used.begin() + static_cast<std::ptrdiff_t>(c.span_end), [](bool u) { return u; }))
            continue;
        std::fill(used.begin() + static_cast<std::ptrdiff_t>(c.span_begin),
                  used.begin() + static_cast<std::ptrdiff_t>(c.span_end), true);
        chosen.push_back(c);
    }
    std::sort(chosen.begin(), chosen.end(),
              [](const NameMatch& a, const NameMatch& b) { return a.span_begin < b.span_begin; });

    std::vector<NameMatch> out;
    std::set<EntityId> seen;
    for (auto& m : chosen)
        if (seen.insert(m.entity_id).second) out.push_back(std::move(m));
    return out;
}

}  // namespace konnect
