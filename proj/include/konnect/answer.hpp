#pragma once

#include <chrono>
#include <future>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <vector>

#include "konnect/answer_strings.hpp"
#include "konnect/kg.hpp"
#include "konnect/query.hpp"
#include "konnect/retrieval.hpp"
#include "konnect/text.hpp"

namespace konnect {

/// Everything the template answer depends on, already resolved to labels.
struct AnswerContext {
    struct Shared {
        std::string label;
        std::vector<std::string> participants;
    };
    struct Relation {
        std::string subject;
        std::string predicate;
        std::string object;
        std::optional<PartialDate> valid_from;
        std::optional<PartialDate> valid_to;
    };

    std::string question;
    Intent intent = Intent::General;
    std::vector<std::string> persons;
    std::vector<Shared> shared;
    std::vector<Relation> relations;
    std::vector<std::size_t> event_counts;  // per person, query order
};

inline AnswerContext make_answer_context(const KnowledgeGraph& graph, const StructuredQuery& query,
                                         const RetrievalResult& result)
{
    AnswerContext ctx;
    ctx.question = query.original_question;
    ctx.intent = query.intent;
    for (const auto& p : result.persons) ctx.persons.push_back(graph.entity(p).label);
    for (const auto& s : result.shared) {
        AnswerContext::Shared item{graph.entity(s.event).label, {}};
        for (const auto& p : s.participants) item.participants.push_back(graph.entity(p).label);
        ctx.shared.push_back(std::move(item));
    }
    for (const auto& r : result.relations)
        ctx.relations.push_back({graph.entity(r.subject).label, r.predicate, graph.entity(r.object).label,
                                 r.valid_from, r.valid_to});
    for (const auto& pe : result.person_events) ctx.event_counts.push_back(pe.events.size());
    return ctx;
}

namespace answer_detail {

inline std::string fill(std::string_view pattern, std::initializer_list<std::pair<std::string_view, std::string>> vars)
{
    std::string out;
    for (std::size_t i = 0; i < pattern.size();) {
        if (pattern[i] == '{') {
            auto close = pattern.find('}', i);
            auto name = pattern.substr(i + 1, close - i - 1);
            for (const auto& [k, v] : vars)
                if (k == name) out += v;
            i = close + 1;
        } else {
            out += pattern[i++];
        }
    }
    return out;
}

/// "A", "A and B", "A, B, and C"
inline std::string join_names(const std::vector<std::string>& names)
{
    std::string out;
    for (std::size_t i = 0; i < names.size(); ++i) {
        if (i > 0) out += names.size() == 2 ? " and " : (i + 1 == names.size() ? ", and " : ", ");
        out += names[i];
    }
    return out;
}

inline std::string count_word(std::size_t n)
{
    static constexpr std::string_view words[] = {"zero", "one", "two",   "three",  "four",   "five", "six",
                                                 "seven", "eight", "nine", "ten", "eleven", "twelve"};
    return n < std::size(words) ? std::string(words[n]) : std::to_string(n);
}

inline std::string year_of(const PartialDate& d)
{
    auto s = d.to_string();
    return s.substr(0, s.find('-', 1));
}

inline std::string period(const AnswerContext::Relation& r)
{
    if (r.valid_from && r.valid_to)
        return fill(strings::kPeriodBoth, {{"from", year_of(*r.valid_from)}, {"to", year_of(*r.valid_to)}});
    if (r.valid_from) return fill(strings::kPeriodFrom, {{"from", year_of(*r.valid_from)}});
    if (r.valid_to) return fill(strings::kPeriodTo, {{"to", year_of(*r.valid_to)}});
    return "";
}

}  // namespace answer_detail

/// Deterministic chat answer built only from `ctx`.
inline std::string render_template_answer(const AnswerContext& ctx)
{
    using namespace answer_detail;
    const auto names = join_names(ctx.persons);
    std::string out;

    if (ctx.persons.size() == 1) {
        const std::size_t n = ctx.event_counts.empty() ? 0 : ctx.event_counts.front();
        return fill(strings::kSinglePerson,
                    {{"name", ctx.persons.front()},
                     {"count", count_word(n)},
                     {"noun", std::string(n == 1 ? strings::kEventSingular : strings::kEventPlural)}});
    }

    if (ctx.shared.empty()) {
        out = fill(strings::kNoOverlap, {{"names", names}});
    } else {
        out = fill(strings::kSharedCount,
                   {{"count", count_word(ctx.shared.size())},
                    {"noun", std::string(ctx.shared.size() == 1 ? strings::kEventSingular : strings::kEventPlural)},
                    {"names", names}});
        std::vector<std::string> items;
        for (const auto& s : ctx.shared) {
            std::string item = s.label;
            if (s.participants.size() != ctx.persons.size()) item += " (" + join_names(s.participants) + ")";
            items.push_back(std::move(item));
        }
        std::string events;
        for (std::size_t i = 0; i < items.size(); ++i) events += (i ? "; " : "") + items[i];
        const auto frame = ctx.intent == Intent::Professional ? strings::kFrameProfessional
                           : ctx.intent == Intent::Personal   ? strings::kFramePersonal
                                                              : strings::kFrameGeneral;
        out += ' ' + fill(frame, {{"names", names}, {"events", events}});
    }

    // Relations stated in both directions with the same period read once.
    std::vector<const AnswerContext::Relation*> relations;
    for (const auto& r : ctx.relations) {
        const bool mirrored = std::any_of(relations.begin(), relations.end(), [&r](const auto* seen) {
            return seen->subject == r.object && seen->object == r.subject && seen->predicate == r.predicate &&
                   seen->valid_from == r.valid_from && seen->valid_to == r.valid_to;
        });
        if (!mirrored) relations.push_back(&r);
    }
    if (!relations.empty()) {
        out += ' ';
        out += strings::kRelationsLead;
        for (std::size_t i = 0; i < relations.size(); ++i) {
            const auto& r = *relations[i];
            out += (i ? "; " : " ") + fill(strings::kRelation, {{"subject", r.subject},
                                                                 {"predicate", r.predicate},
                                                                 {"object", r.object},
                                                                 {"period", period(r)}});
        }
        out += '.';
    }
    if (!ctx.shared.empty()) {
        out += ' ';
        out += strings::kHedge;
    }
    return out;
}

// ---------------------------------------------------------------------------
// External text generation

/// Source of free-text answers other than the templates. Implementations
/// must not throw and should give up once `timeout` has passed.
class TextGeneratorClient {
public:
    virtual ~TextGeneratorClient() = default;
    virtual std::optional<std::string> generate(std::string_view question,
                                                std::chrono::milliseconds timeout) const noexcept = 0;
    /// False for clients that never produce an answer.
    virtual bool enabled() const noexcept { return true; }
};

class NullTextGenerator final : public TextGeneratorClient {
public:
    std::optional<std::string> generate(std::string_view, std::chrono::milliseconds) const noexcept override
    {
        return std::nullopt;
    }
    bool enabled() const noexcept override { return false; }
};

enum class AnswerSource { External, Template };

constexpr std::string_view to_string(AnswerSource s)
{
    return s == AnswerSource::External ? "external" : "template";
}

inline constexpr std::chrono::milliseconds kDefaultGeneratorTimeout{5000};

struct Answer {
    std::string text;
    AnswerSource source = AnswerSource::Template;
};

/// Asks `client` first and falls back to the template answer when it
/// returns nothing, returns blank or non-UTF-8 text, throws, or misses the
/// deadline. A late client keeps running detached; its result is dropped.
inline Answer answer(const AnswerContext& ctx, std::shared_ptr<const TextGeneratorClient> client,
                     std::chrono::milliseconds timeout = kDefaultGeneratorTimeout)
{
    if (client && client->enabled()) {
        auto promise = std::make_shared<std::promise<std::optional<std::string>>>();
        auto future = promise->get_future();
        try {
            std::thread([client, promise, question = ctx.question, timeout] {
                std::optional<std::string> result;
                try {
                    result = client->generate(question, timeout);
                } catch (...) {
                }
                promise->set_value(std::move(result));
            }).detach();
            if (future.wait_for(timeout) == std::future_status::ready) {
                auto text = future.get();
                if (text && text->find_first_not_of(" \t\r\n") != std::string::npos && text::is_valid_utf8(*text))
                    return {std::move(*text), AnswerSource::External};
            }
        } catch (...) {
            // thread creation failure: fall through to the template
        }
    }
    return {render_template_answer(ctx), AnswerSource::Template};
}

}  // namespace konnect
