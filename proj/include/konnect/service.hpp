#pragma once

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "konnect/answer.hpp"
#include "konnect/entity_index.hpp"
#include "konnect/ingest.hpp"
#include "konnect/kg.hpp"
#include "konnect/query.hpp"
#include "konnect/retrieval.hpp"

namespace konnect {

using Json = nlohmann::ordered_json;

inline constexpr std::size_t kMaxQuestionLength = 1000;  // code points

inline const std::vector<std::string>& sample_queries()
{
    static const std::vector<std::string> samples = {
        "Did Mat Hummels, Miroslav Klose, and Philipp Lahm meet?",
        "When did Pierre Curie and Marie Curie marry?",
        "Did Brad Pitt, George Clooney, and Tom Cruise all receive movie awards?",
        "Did Erwin Schrödinger meet Albert Einstein?",
    };
    return samples;
}

// ---------------------------------------------------------------------------
// Configuration

struct ServiceConfig {
    std::filesystem::path data_dir;
    std::string host = "0.0.0.0";
    int port = 8080;
    std::size_t relevance_cap = kDefaultRelevanceCap;
    double intent_threshold = kIntentThreshold;
    std::optional<std::string> generator_url;
    std::chrono::milliseconds generator_timeout = kDefaultGeneratorTimeout;
    bool clamp_to_lifespan = false;
    std::string cors_origin = "*";

    /// Throws std::invalid_argument when a field is out of range.
    void validate() const
    {
        if (port < 1 || port > 65535) throw std::invalid_argument("port must be in [1, 65535]");
        if (relevance_cap < 1) throw std::invalid_argument("relevance cap must be at least 1");
        if (!(intent_threshold >= 0.0 && intent_threshold <= 1.0))
            throw std::invalid_argument("intent threshold must be in [0, 1]");
        if (generator_timeout.count() < 1) throw std::invalid_argument("generator timeout must be positive");
    }
};

/// Environment overrides use the KONNECT_ prefix: KONNECT_DATA_DIR,
/// KONNECT_HOST, KONNECT_PORT, KONNECT_RELEVANCE_CAP,
/// KONNECT_INTENT_THRESHOLD, KONNECT_GENERATOR_URL,
/// KONNECT_GENERATOR_TIMEOUT_MS, KONNECT_CLAMP_TO_LIFESPAN,
/// KONNECT_CORS_ORIGIN.
template <typename Lookup>
ServiceConfig apply_env_overrides(ServiceConfig config, Lookup&& getenv_fn)
{
    auto get = [&](const char* name) -> std::optional<std::string> {
        const char* v = getenv_fn(name);
        if (!v) return std::nullopt;
        return std::string(v);
    };
    auto number = [](const std::string& name, const std::string& v) {
        try {
            std::size_t used = 0;
            double d = std::stod(v, &used);
            if (used != v.size()) throw std::invalid_argument(v);
            return d;
        } catch (const std::exception&) {
            throw std::invalid_argument(name + ": not a number: '" + v + "'");
        }
    };
    if (auto v = get("KONNECT_DATA_DIR")) config.data_dir = *v;
    if (auto v = get("KONNECT_HOST")) config.host = *v;
    if (auto v = get("KONNECT_PORT")) config.port = static_cast<int>(number("KONNECT_PORT", *v));
    if (auto v = get("KONNECT_RELEVANCE_CAP"))
        config.relevance_cap = static_cast<std::size_t>(number("KONNECT_RELEVANCE_CAP", *v));
    if (auto v = get("KONNECT_INTENT_THRESHOLD")) config.intent_threshold = number("KONNECT_INTENT_THRESHOLD", *v);
    if (auto v = get("KONNECT_GENERATOR_URL")) config.generator_url = v->empty() ? std::nullopt : v;
    if (auto v = get("KONNECT_GENERATOR_TIMEOUT_MS"))
        config.generator_timeout =
            std::chrono::milliseconds(static_cast<long long>(number("KONNECT_GENERATOR_TIMEOUT_MS", *v)));
    if (auto v = get("KONNECT_CLAMP_TO_LIFESPAN")) config.clamp_to_lifespan = (*v == "1" || *v == "true");
    if (auto v = get("KONNECT_CORS_ORIGIN")) config.cors_origin = *v;
    return config;
}

inline ServiceConfig apply_env_overrides(ServiceConfig config)
{
    return apply_env_overrides(std::move(config), [](const char* n) { return std::getenv(n); });
}

// ---------------------------------------------------------------------------
// JSON views

namespace json_detail {

inline Json date(const std::optional<PartialDate>& d)
{
    return d ? Json(d->to_string()) : Json(nullptr);
}

inline Json optional_string(const std::optional<std::string>& s)
{
    return s ? Json(*s) : Json(nullptr);
}

inline Json ids(const std::vector<EntityId>& v)
{
    Json out = Json::array();
    for (const auto& id : v) out.push_back(id.str());
    return out;
}

inline Json location(const std::optional<GeoPoint>& p)
{
    if (!p) return nullptr;
    return Json{{"lat", p->latitude}, {"lon", p->longitude}};
}

}  // namespace json_detail

/// Full descriptor served by GET /api/entity/{id}.
inline Json entity_descriptor(const KnowledgeGraph& graph, const Entity& e)
{
    using namespace json_detail;
    Json aliases = Json::array();
    for (const auto& a : e.aliases) aliases.push_back(a);
    Json out = {{"id", e.id.str()},
                {"kind", std::string(to_string(e.kind))},
                {"label", e.label},
                {"aliases", aliases},
                {"birth", date(e.birth)},
                {"death", date(e.death)},
                {"start", date(e.start)},
                {"end", date(e.end)},
                {"location", location(e.location)},
                {"event_class", optional_string(e.event_class)},
                {"icon", e.is_event() ? Json(std::string(to_string(graph.icon_for(e)))) : Json(nullptr)},
                {"mention_count", e.mention_count},
                {"wikipedia_url", optional_string(e.wikipedia_url)}};
    return out;
}

/// Event block referenced by the views of a query response.
inline Json event_descriptor(const KnowledgeGraph& graph, const Entity& e)
{
    using namespace json_detail;
    return Json{{"id", e.id.str()},
                {"label", e.label},
                {"start", date(e.start)},
                {"end", date(e.end)},
                {"icon", std::string(to_string(graph.icon_for(e)))},
                {"event_class", optional_string(e.event_class)},
                {"location", location(e.location)},
                {"mention_count", e.mention_count},
                {"wikipedia_url", optional_string(e.wikipedia_url)}};
}

inline Json build_response(const KnowledgeGraph& graph, const StructuredQuery& query, const RetrievalResult& r,
                           const Answer& answer)
{
    using namespace json_detail;
    Json out;
    out["question"] = query.original_question;
    out["intent"] = std::string(to_string(query.intent));
    out["answer"] = {{"text", answer.text}, {"source", std::string(to_string(answer.source))}};

    Json persons = Json::array();
    for (std::size_t i = 0; i < r.persons.size(); ++i) {
        const auto& p = graph.entity(r.persons[i]);
        persons.push_back({{"id", p.id.str()},
                           {"label", p.label},
                           {"color_index", i},
                           {"birth", date(p.birth)},
                           {"death", date(p.death)},
                           {"wikipedia_url", optional_string(p.wikipedia_url)}});
    }
    out["persons"] = persons;

    // Every event any view mentions, in first-mention order.
    std::vector<EntityId> event_order;
    std::set<EntityId> event_seen;
    auto mention = [&](const EntityId& id) {
        if (event_seen.insert(id).second) event_order.push_back(id);
    };
    for (const auto& s : r.shared) mention(s.event);
    for (const auto& pe : r.person_events)
        for (const auto& link : pe.events) mention(link.event);

    Json lanes = Json::array();
    for (std::size_t i = 0; i < r.timeline.lanes.size(); ++i) {
        const auto& lane = r.timeline.lanes[i];
        Json events = Json::array();
        for (const auto& ev : lane.events)
            events.push_back({{"event", ev.event.str()},
                              {"predicate", ev.predicate},
                              {"start", ev.start.to_string()},
                              {"end", ev.end.to_string()},
                              {"row", ev.row},
                              {"icon", std::string(to_string(ev.icon))},
                              {"participants", ids(ev.participants)}});
        lanes.push_back({{"person", lane.person.str()},
                         {"color_index", i},
                         {"lifespan", {{"start", date(lane.lifespan.start)}, {"end", date(lane.lifespan.end)}}},
                         {"row_count", lane.row_count},
                         {"events", events}});
    }
    Json omitted = Json::array();
    for (const auto& o : r.timeline.omitted) omitted.push_back({{"person", o.person.str()}, {"event", o.event.str()}});
    out["timeline"] = {{"lanes", lanes}, {"omitted", omitted}};

    Json map = Json::array();
    for (const auto& m : r.map)
        map.push_back({{"event", m.event.str()},
                       {"lat", m.location.latitude},
                       {"lon", m.location.longitude},
                       {"participants", ids(m.participants)}});
    out["map_points"] = map;

    Json nodes = Json::array();
    for (const auto& n : r.graph.nodes) nodes.push_back({{"id", n.id.str()}, {"type", std::string(to_string(n.kind))}});
    Json edges = Json::array();
    for (const auto& e : r.graph.edges) edges.push_back({{"source", e.person.str()}, {"target", e.event.str()}});
    out["graph"] = {{"nodes", nodes}, {"edges", edges}};

    Json shared = Json::array();
    for (const auto& s : r.shared)
        shared.push_back({{"event", s.event.str()}, {"label", graph.entity(s.event).label}, {"participants", ids(s.participants)}});
    out["shared_events"] = shared;

    Json relations = Json::array();
    for (const auto& rel : r.relations)
        relations.push_back({{"subject", rel.subject.str()},
                             {"predicate", rel.predicate},
                             {"object", rel.object.str()},
                             {"valid_from", date(rel.valid_from)},
                             {"valid_to", date(rel.valid_to)}});
    out["relations"] = relations;

    Json events = Json::array();
    for (const auto& id : event_order) events.push_back(event_descriptor(graph, graph.entity(id)));
    out["events"] = events;

    Json warnings = Json::array();
    if (r.persons.size() == 1)
        warnings.push_back("Only one person was recognized; name at least two persons to find shared events.");
    for (const auto& o : r.timeline.omitted)
        warnings.push_back(graph.entity(o.event).label + " has no date and is not shown on the timeline of " +
                           graph.entity(o.person).label + ".");
    out["warnings"] = warnings;
    return out;
}

// ---------------------------------------------------------------------------
// Engine

/// A loaded dataset plus everything needed to answer questions over it.
/// Immutable after construction; safe to share between request threads.
class Engine {
public:
    struct Options {
        std::size_t relevance_cap = kDefaultRelevanceCap;
        double intent_threshold = kIntentThreshold;
        bool clamp_to_lifespan = false;
        std::chrono::milliseconds generator_timeout = kDefaultGeneratorTimeout;
    };

    Engine(KnowledgeGraph graph, StopwordSet stopwords, std::optional<EmbeddingTable> embeddings, Options options,
           std::shared_ptr<const TextGeneratorClient> generator = std::make_shared<NullTextGenerator>())
        : graph_(std::move(graph)),
          index_(graph_),
          stopwords_(std::move(stopwords)),
          embeddings_(std::move(embeddings)),
          options_(options),
          generator_(generator ? std::move(generator) : std::make_shared<NullTextGenerator>())
    {
    }

    Engine(const Engine&) = delete;
    Engine& operator=(const Engine&) = delete;

    /// Loads the dataset in `config.data_dir`. Throws DatasetError.
    static std::unique_ptr<Engine> load(const ServiceConfig& config,
                                        std::shared_ptr<const TextGeneratorClient> generator = nullptr)
    {
        const auto manifest = DatasetManifest::from_directory(config.data_dir);
        auto graph = load_dataset(manifest);
        StopwordSet stopwords;
        if (manifest.stopwords_path) stopwords = load_stopwords(*manifest.stopwords_path);
        std::optional<EmbeddingTable> embeddings;
        if (manifest.embeddings_path) embeddings = EmbeddingTable::load(*manifest.embeddings_path);
        Options options{config.relevance_cap, config.intent_threshold, config.clamp_to_lifespan,
                        config.generator_timeout};
        return std::make_unique<Engine>(std::move(graph), std::move(stopwords), std::move(embeddings), options,
                                        std::move(generator));
    }

    const KnowledgeGraph& graph() const noexcept { return graph_; }
    const NameIndex& index() const noexcept { return index_; }
    const StopwordSet& stopwords() const noexcept { return stopwords_; }
    const EmbeddingProvider* embeddings() const noexcept { return embeddings_ ? &*embeddings_ : nullptr; }

    StructuredQuery parse(std::string_view question) const
    {
        return build_query(question, index_, embeddings(), stopwords_, {options_.intent_threshold, kMaxQueryPersons});
    }

    RetrievalResult retrieve(const StructuredQuery& query) const
    {
        return konnect::retrieve(graph_, query.persons, {options_.relevance_cap, options_.clamp_to_lifespan});
    }

    /// Full pipeline. Throws QueryError for unusable questions.
    Json ask(std::string_view question) const
    {
        const auto query = parse(question);
        const auto result = retrieve(query);
        const auto ctx = make_answer_context(graph_, query, result);
        const auto reply = answer(ctx, generator_, options_.generator_timeout);
        return build_response(graph_, query, result, reply);
    }

private:
    KnowledgeGraph graph_;
    NameIndex index_;
    StopwordSet stopwords_;
    std::optional<EmbeddingTable> embeddings_;
    Options options_;
    std::shared_ptr<const TextGeneratorClient> generator_;
};

// ---------------------------------------------------------------------------
// Request handling, independent of the HTTP library

struct HttpReply {
    int status = 200;
    std::string body;
    std::string content_type = "application/json";
};

inline std::string dump(const Json& j)
{
    return j.dump(-1, ' ', false, nlohmann::detail::error_handler_t::replace);
}

/// Stateless handlers over one immutable engine. Until an engine is
/// installed every endpoint answers 503.
class Service {
public:
    void set_engine(std::shared_ptr<const Engine> engine)
    {
        std::lock_guard lock(mutex_);
        engine_ = std::move(engine);
    }

    std::shared_ptr<const Engine> engine() const
    {
        std::lock_guard lock(mutex_);
        return engine_;
    }

    HttpReply health() const
    {
        auto e = engine();
        if (!e) return {503, dump(Json{{"status", "loading"}})};
        return {200, dump(Json{{"status", "ok"},
                               {"entities", e->graph().entities().size()},
                               {"triples", e->graph().triples().size()}})};
    }

    HttpReply entity(std::string_view id) const
    {
        auto e = engine();
        if (!e) return unavailable();
        const Entity* ent = e->graph().find(id);
        if (!ent) return {404, dump(Json{{"error", "not_found"}, {"id", std::string(id)}})};
        return {200, dump(entity_descriptor(e->graph(), *ent))};
    }

    HttpReply query(std::string_view body) const
    {
        auto e = engine();
        if (!e) return unavailable();
        Json request;
        try {
            request = Json::parse(body);
        } catch (const Json::parse_error&) {
            return invalid("body is not valid JSON");
        }
        if (!request.is_object() || !request.contains("question") || !request["question"].is_string())
            return invalid("body must be an object with a string field 'question'");
        const auto question = request["question"].get<std::string>();
        std::size_t length = 0;
        for (std::size_t pos = 0; pos < question.size(); ++length) text::next_code_point(question, pos);
        if (question.find_first_not_of(" \t\r\n") == std::string::npos) return invalid("question is empty");
        if (length > kMaxQuestionLength)
            return invalid("question is longer than " + std::to_string(kMaxQuestionLength) + " characters");

        try {
            return {200, dump(e->ask(question))};
        } catch (const QueryError& err) {
            if (err.code() == QueryError::Code::TooManyPersons)
                return {400, dump(Json{{"error", "too_many_persons"},
                                       {"message", err.what()},
                                       {"limit", kMaxQueryPersons},
                                       {"found", err.found()}})};
            return {400, dump(Json{{"error", "no_persons_found"},
                                   {"message", err.what()},
                                   {"sample_queries", sample_queries()}})};
        } catch (const std::exception& err) {
            std::cerr << "konnect: internal error while answering query: " << err.what() << '\n';
            return {500, dump(Json{{"error", "internal_error"}, {"message", "internal server error"}})};
        }
    }

private:
    static HttpReply unavailable() { return {503, dump(Json{{"error", "unavailable"}, {"message", "dataset is loading"}})}; }
    static HttpReply invalid(const std::string& message)
    {
        return {422, dump(Json{{"error", "invalid_request"}, {"message", message}})};
    }

    mutable std::mutex mutex_;
    std::shared_ptr<const Engine> engine_;
};

}  // namespace konnect
