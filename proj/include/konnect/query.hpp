#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "konnect/entity_index.hpp"
#include "konnect/errors.hpp"
#include "konnect/ingest.hpp"
#include "konnect/kg.hpp"
#include "konnect/text.hpp"

namespace konnect {

using StopwordSet = std::set<std::string, std::less<>>;

// ---------------------------------------------------------------------------
// Tokenizer

/// Splits on whitespace and punctuation, dropping both. An apostrophe
/// between two word characters stays inside the word ("O'Neill"); hyphens
/// separate. Casing is preserved.
inline std::vector<std::string> tokenize(std::string_view question)
{
    std::vector<char32_t> cps;
    for (std::size_t pos = 0; pos < question.size();) cps.push_back(text::next_code_point(question, pos));

    std::vector<std::string> out;
    std::string current;
    for (std::size_t i = 0; i < cps.size(); ++i) {
        const char32_t c = cps[i];
        const bool inner_apostrophe = text::is_apostrophe(c) && !current.empty() && i + 1 < cps.size() &&
                                      text::is_word_char(cps[i + 1]) && !text::is_apostrophe(cps[i + 1]);
        if ((text::is_word_char(c) && !text::is_apostrophe(c)) || inner_apostrophe) {
            text::append_utf8(current, c);
        } else if (!current.empty()) {
            out.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) out.push_back(std::move(current));
    return out;
}

// ---------------------------------------------------------------------------
// Intent

enum class Intent { Professional, Personal, General };

constexpr std::string_view to_string(Intent intent)
{
    switch (intent) {
    case Intent::Professional: return "professional";
    case Intent::Personal: return "personal";
    case Intent::General: return "general";
    }
    return "general";
}

/// Minimum keyword similarity for a non-general intent.
inline constexpr double kIntentThreshold = 0.55;

inline constexpr std::array<std::string_view, 7> kProfessionalKeywords = {
    "collaborate", "work", "ally", "award", "career", "team", "colleague"};
inline constexpr std::array<std::string_view, 9> kPersonalKeywords = {
    "marry", "married", "wedding", "spouse", "friend", "family", "child", "divorce", "love"};

/// Suffix-stripping stemmer: -ing, -ed, -ion, -s (with -ies/-ied -> -y),
/// then undoubling of a final consonant pair and removal of a final 'e'.
/// Stems shorter than three letters are left alone.
inline std::string stem(std::string_view word)
{
    std::string w = lowercase_ascii(word);
    auto ends = [&w](std::string_view suf) { return w.size() >= suf.size() && w.ends_with(suf); };
    auto strip = [&w](std::size_t n) { w.erase(w.size() - n); };

    bool stripped_verb = false;
    if ((ends("ies") || ends("ied")) && w.size() > 4) {
        strip(3);
        w += 'y';
    } else if (ends("ing") && w.size() >= 6) {
        strip(3);
        stripped_verb = true;
    } else if (ends("ed") && w.size() >= 5) {
        strip(2);
        stripped_verb = true;
    } else if (ends("ion") && w.size() >= 6) {
        strip(3);
    } else if (ends("s") && !ends("ss") && w.size() >= 4) {
        strip(1);
    }
    if (stripped_verb && w.size() >= 2) {
        const char a = w[w.size() - 1];
        const char b = w[w.size() - 2];
        const bool consonant = std::string_view("aeiouy").find(a) == std::string_view::npos;
        if (a == b && consonant && a != 'l' && a != 's' && a != 'z') strip(1);
    }
    if (w.size() > 3 && w.back() == 'e') strip(1);
    return w;
}

/// Word similarity source for intent classification.
class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    /// Cosine similarity, or nullopt when either word is unknown.
    virtual std::optional<double> similarity(std::string_view a, std::string_view b) const = 0;
};

/// Fixed-dimension word vectors loaded from embeddings.tsv.
class EmbeddingTable final : public EmbeddingProvider {
public:
    EmbeddingTable() = default;

    /// Throws std::invalid_argument on a dimension mismatch or empty vector.
    void add(std::string word, std::vector<double> vec)
    {
        if (vec.empty()) throw std::invalid_argument("empty vector for '" + word + "'");
        if (dimension_ != 0 && vec.size() != dimension_)
            throw std::invalid_argument("vector for '" + word + "' has dimension " + std::to_string(vec.size()) +
                                        ", expected " + std::to_string(dimension_));
        dimension_ = vec.size();
        vectors_[lowercase_ascii(word)] = std::move(vec);
    }

    std::size_t dimension() const noexcept { return dimension_; }
    std::size_t size() const noexcept { return vectors_.size(); }
    bool contains(std::string_view w) const { return vectors_.find(w) != vectors_.end(); }

    std::optional<double> similarity(std::string_view a, std::string_view b) const override
    {
        auto ia = vectors_.find(a);
        auto ib = vectors_.find(b);
        if (ia == vectors_.end() || ib == vectors_.end()) return std::nullopt;
        double dot = 0, na = 0, nb = 0;
        for (std::size_t i = 0; i < dimension_; ++i) {
            dot += ia->second[i] * ib->second[i];
            na += ia->second[i] * ia->second[i];
            nb += ib->second[i] * ib->second[i];
        }
        if (na == 0 || nb == 0) return 0.0;
        return dot / (std::sqrt(na) * std::sqrt(nb));
    }

    /// Header row, then: word, whitespace-separated components. The word may
    /// be separated from the vector by a tab or by spaces.
    static EmbeddingTable load(const std::filesystem::path& path)
    {
        const auto file = path.filename().string();
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ParseError({{file, 0, "cannot open " + path.string()}});
        EmbeddingTable table;
        std::vector<DatasetIssue> issues;
        std::string line;
        std::size_t number = 0;
        while (std::getline(in, line)) {
            if (++number == 1) continue;
            for (auto& c : line)
                if (c == '\t' || c == '\r') c = ' ';
            std::vector<std::string> parts;
            for (std::size_t i = 0; i < line.size();) {
                while (i < line.size() && line[i] == ' ') ++i;
                std::size_t j = line.find(' ', i);
                if (j == std::string::npos) j = line.size();
                if (j > i) parts.push_back(line.substr(i, j - i));
                i = j;
            }
            if (parts.empty()) continue;
            std::vector<double> vec;
            bool ok = parts.size() > 1;
            for (std::size_t i = 1; i < parts.size() && ok; ++i) {
                auto v = tsv::parse_double(parts[i]);
                if (!v) ok = false;
                else vec.push_back(*v);
            }
            if (!ok) {
                issues.push_back({file, number, "malformed vector"});
                continue;
            }
            try {
                table.add(parts[0], std::move(vec));
            } catch (const std::invalid_argument& e) {
                issues.push_back({file, number, e.what()});
            }
        }
        if (!issues.empty()) throw ParseError(std::move(issues));
        return table;
    }

private:
    std::size_t dimension_ = 0;
    std::map<std::string, std::vector<double>, std::less<>> vectors_;
};

struct IntentScores {
    double professional = 0.0;
    double personal = 0.0;
};

/// Similarity between a keyword and a (lowercased) candidate word: 1 on an
/// exact or stem match, otherwise the embedding cosine of the word (or of
/// its stem, or its stem plus "e", when the word itself has no vector), 0
/// without a provider or for unknown words.
inline double keyword_similarity(std::string_view keyword, std::string_view word, const EmbeddingProvider* provider)
{
    if (keyword == word || stem(keyword) == stem(word)) return 1.0;
    if (!provider) return 0.0;
    if (auto sim = provider->similarity(keyword, word)) return *sim;
    const auto base = stem(word);
    if (auto sim = provider->similarity(keyword, base)) return *sim;
    return provider->similarity(keyword, base + "e").value_or(0.0);
}

/// Candidate words: lowercased tokens minus stopwords minus tokens covered
/// by `excluded` spans (matched person names).
inline std::vector<std::string> intent_candidates(std::span<const std::string> tokens, const StopwordSet& stopwords,
                                                  std::span<const NameMatch> excluded = {})
{
    std::vector<std::string> out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        const bool in_span = std::any_of(excluded.begin(), excluded.end(), [i](const NameMatch& m) {
            return i >= m.span_begin && i < m.span_end;
        });
        if (in_span) continue;
        auto w = lowercase_ascii(tokens[i]);
        if (stopwords.contains(w)) continue;
        out.push_back(std::move(w));
    }
    return out;
}

inline IntentScores score_intent(std::span<const std::string> candidates, const EmbeddingProvider* provider)
{
    IntentScores s;
    for (const auto& w : candidates) {
        for (auto k : kProfessionalKeywords) s.professional = std::max(s.professional, keyword_similarity(k, w, provider));
        for (auto k : kPersonalKeywords) s.personal = std::max(s.personal, keyword_similarity(k, w, provider));
    }
    return s;
}

/// Argmax over the two relation intents when it clears `threshold`,
/// General otherwise. Professional wins ties.
inline Intent classify_intent(std::span<const std::string> tokens, const EmbeddingProvider* provider,
                              const StopwordSet& stopwords, std::span<const NameMatch> excluded = {},
                              double threshold = kIntentThreshold)
{
    const auto s = score_intent(intent_candidates(tokens, stopwords, excluded), provider);
    const double best = std::max(s.professional, s.personal);
    if (best < threshold) return Intent::General;
    return s.professional >= s.personal ? Intent::Professional : Intent::Personal;
}

// ---------------------------------------------------------------------------
// Structured query

/// Most persons a single query may name.
inline constexpr std::size_t kMaxQueryPersons = 5;

struct StructuredQuery {
    std::vector<EntityId> persons;
    Intent intent = Intent::General;
    std::string original_question;
    std::vector<NameMatch> matches;
};

class QueryError : public Error {
public:
    enum class Code { NoPersonsFound, TooManyPersons };

    QueryError(Code code, std::string message, std::size_t found = 0)
        : Error(std::move(message)), code_(code), found_(found) {}

    Code code() const noexcept { return code_; }
    /// Number of resolved persons (TooManyPersons only).
    std::size_t found() const noexcept { return found_; }

private:
    Code code_;
    std::size_t found_;
};

struct QueryOptions {
    double intent_threshold = kIntentThreshold;
    std::size_t max_persons = kMaxQueryPersons;
};

/// tokenize -> extract_person_spans -> classify_intent. Throws QueryError
/// when no person resolves or more than `max_persons` do.
inline StructuredQuery build_query(std::string_view question, const NameIndex& index,
                                   const EmbeddingProvider* provider, const StopwordSet& stopwords,
                                   const QueryOptions& options = {})
{
    const auto tokens = tokenize(question);
    auto matches = extract_person_spans(index, tokens, stopwords);
    if (matches.empty())
        throw QueryError(QueryError::Code::NoPersonsFound, "no known person is named in the question");
    if (matches.size() > options.max_persons)
        throw QueryError(QueryError::Code::TooManyPersons,
                         "the question names " + std::to_string(matches.size()) + " persons; the limit is " +
                             std::to_string(options.max_persons),
                         matches.size());

    StructuredQuery q;
    q.original_question = std::string(question);
    for (const auto& m : matches) q.persons.push_back(m.entity_id);
    q.intent = classify_intent(tokens, provider, stopwords, matches, options.intent_threshold);
    q.matches = std::move(matches);
    return q;
}

}  // namespace konnect
