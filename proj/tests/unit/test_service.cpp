#include <map>
#include <memory>
#include <set>
#include <thread>

#include <gtest/gtest.h>

#include "support/fixture.hpp"
#include "support/json_schema.hpp"

using namespace konnect;
using konnect::test::fixture_engine;

namespace {

const std::vector<std::string> kExamples = {
    "Did Mats Hummels, Miroslav Klose, and Philipp Lahm play together?",
    "When did Pierre Curie and Marie Curie marry?",
    "Did Brad Pitt, George Clooney, and Tom Cruise all receive movie awards?",
    "Did Albert Einstein and Erwin Schrödinger ever work together?",
};

const Service& loaded_service()
{
    static const auto s = [] {
        auto out = std::make_unique<Service>();
        out->set_engine(fixture_engine());
        return out;
    }();
    return *s;
}

std::string body_for(const std::string& question)
{
    return Json{{"question", question}}.dump();
}

Json ask_ok(const Service& s, const std::string& question)
{
    const auto reply = s.query(body_for(question));
    EXPECT_EQ(reply.status, 200) << question << "\n" << reply.body;
    return Json::parse(reply.body);
}

const test::SchemaValidator& schema()
{
    static const auto v = test::SchemaValidator::from_file(KONNECT_SCHEMA_PATH);
    return v;
}

std::vector<std::string> ids_in(const Json& response)
{
    std::set<std::string> out;
    for (const auto& p : response["persons"]) out.insert(p["id"].get<std::string>());
    for (const auto& e : response["events"]) out.insert(e["id"].get<std::string>());
    for (const auto& n : response["graph"]["nodes"]) out.insert(n["id"].get<std::string>());
    for (const auto& lane : response["timeline"]["lanes"])
        for (const auto& e : lane["events"]) out.insert(e["event"].get<std::string>());
    return {out.begin(), out.end()};
}

}  // namespace

TEST(Service, UnavailableBeforeEngineIsSet)
{
    Service s;
    EXPECT_EQ(s.health().status, 503);
    EXPECT_EQ(s.query(body_for(kExamples[0])).status, 503);
    EXPECT_EQ(s.entity("marie_curie").status, 503);
}

TEST(Service, HealthReportsCounts)
{
    const auto& s = loaded_service();
    const auto reply = s.health();
    EXPECT_EQ(reply.status, 200);
    const auto j = Json::parse(reply.body);
    EXPECT_EQ(j["status"], "ok");
    EXPECT_EQ(j["entities"], 34);
    EXPECT_EQ(j["triples"], 44);
    EXPECT_EQ(s.health().body, reply.body);
}

TEST(Service, FootballersResponse)
{
    const auto j = ask_ok(loaded_service(), kExamples[0]);
    EXPECT_EQ(j["intent"], "general");
    EXPECT_EQ(j["persons"].size(), 3u);
    ASSERT_EQ(j["shared_events"].size(), 2u);
    EXPECT_EQ(j["shared_events"][0]["event"], "fc_bayern_munich");
    EXPECT_EQ(j["shared_events"][1]["event"], "fifa_world_cup_2014");
    EXPECT_EQ(j["answer"]["source"], "template");
    EXPECT_EQ(j["question"], kExamples[0]);
}

TEST(Service, RejectsInvalidBodies)
{
    const auto& s = loaded_service();
    for (const std::string& body : {std::string("not json"), std::string("{}"), std::string("[]"),
                                   std::string(R"({"question": 3})"), std::string(R"({"question": ""})"),
                                   std::string(R"({"question": "   "})")}) {
        const auto reply = s.query(body);
        EXPECT_EQ(reply.status, 422) << body;
        EXPECT_EQ(Json::parse(reply.body)["error"], "invalid_request");
    }
}

TEST(Service, QuestionLengthLimitCountsCodePoints)
{
    const auto& s = loaded_service();
    EXPECT_EQ(s.query(body_for(std::string(1001, 'a'))).status, 422);
    EXPECT_NE(s.query(body_for(std::string(1000, 'a'))).status, 422);
    std::string umlauts;
    for (int i = 0; i < 1000; ++i) umlauts += "\xC3\xB6";
    EXPECT_NE(s.query(body_for(umlauts)).status, 422);
}

TEST(Service, TooManyPersons)
{
    const auto reply = loaded_service().query(body_for(
        "Did Mats Hummels, Miroslav Klose, Philipp Lahm, Marie Curie, Pierre Curie, and Brad Pitt meet?"));
    EXPECT_EQ(reply.status, 400);
    const auto j = Json::parse(reply.body);
    EXPECT_EQ(j["error"], "too_many_persons");
    EXPECT_EQ(j["limit"], 5);
    EXPECT_EQ(j["found"], 6);
}

TEST(Service, NoPersonsFoundSuggestsSamples)
{
    const auto reply = loaded_service().query(body_for("Who won the game yesterday?"));
    EXPECT_EQ(reply.status, 400);
    const auto j = Json::parse(reply.body);
    EXPECT_EQ(j["error"], "no_persons_found");
    ASSERT_FALSE(j["sample_queries"].empty());
    for (const auto& q : j["sample_queries"]) EXPECT_EQ(loaded_service().query(body_for(q)).status, 200) << q;
}

TEST(Service, EntityDescriptor)
{
    const auto& s = loaded_service();
    const auto reply = s.entity("solvay_conference_1927");
    ASSERT_EQ(reply.status, 200);
    const auto j = Json::parse(reply.body);
    EXPECT_EQ(j["label"], "Solvay Conference");
    EXPECT_EQ(j["kind"], "event");
    EXPECT_TRUE(j["wikipedia_url"].is_string());
    EXPECT_EQ(s.entity("no_such_id").status, 404);
}

TEST(Service, EveryIdInAResponseResolves)
{
    const auto& s = loaded_service();
    for (const auto& q : kExamples)
        for (const auto& id : ids_in(ask_ok(s, q))) EXPECT_EQ(s.entity(id).status, 200) << id;
}

TEST(Service, ResponsesMatchSchema)
{
    const auto& s = loaded_service();
    for (const auto& q : kExamples) {
        const auto errors = schema().validate(ask_ok(s, q));
        EXPECT_TRUE(errors.empty()) << q << "\n" << (errors.empty() ? "" : errors.front());
    }
}

TEST(Service, SchemaRejectsBrokenResponses)
{
    auto j = ask_ok(loaded_service(), kExamples[1]);
    EXPECT_TRUE(schema().validate(j).empty());
    auto missing = j;
    missing.erase("timeline");
    EXPECT_FALSE(schema().validate(missing).empty());
    auto bad_intent = j;
    bad_intent["intent"] = "romantic";
    EXPECT_FALSE(schema().validate(bad_intent).empty());
    auto bad_date = j;
    bad_date["persons"][0]["birth"] = "1867/11/07";
    EXPECT_FALSE(schema().validate(bad_date).empty());
}

TEST(Service, RandomGraphResponsesMatchSchema)
{
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        synthetic::GraphSpec spec;
        spec.seed = seed;
        Engine engine(synthetic::random_graph(spec), {}, std::nullopt, {});
        for (const char* q : {"Did Person 1 and Person 2 meet?", "Did Person 3, Person 4 and Person 5 work?",
                              "Tell me about Person 7"}) {
            const auto j = engine.ask(q);
            const auto errors = schema().validate(j);
            ASSERT_TRUE(errors.empty()) << "seed " << seed << " " << q << "\n" << errors.front();
        }
    }
}

TEST(Service, ByteIdenticalResponses)
{
    const auto& s = loaded_service();
    for (const auto& q : kExamples) {
        const auto first = s.query(body_for(q)).body;
        for (int i = 0; i < 5; ++i) ASSERT_EQ(s.query(body_for(q)).body, first);
        Service fresh;
        fresh.set_engine(Engine::load(ServiceConfig{.data_dir = test::fixture_dir()}));
        EXPECT_EQ(fresh.query(body_for(q)).body, first);
    }
}

TEST(Service, ConcurrentRequestsAgree)
{
    const auto& s = loaded_service();
    std::vector<std::string> expected;
    for (const auto& q : kExamples) expected.push_back(s.query(body_for(q)).body);
    std::vector<std::thread> threads;
    std::vector<int> mismatches(8, 0);
    for (int t = 0; t < 8; ++t)
        threads.emplace_back([&, t] {
            for (int i = 0; i < 20; ++i) {
                const auto k = static_cast<std::size_t>(t + i) % kExamples.size();
                if (s.query(body_for(kExamples[k])).body != expected[k]) ++mismatches[t];
            }
        });
    for (auto& th : threads) th.join();
    for (int m : mismatches) EXPECT_EQ(m, 0);
}

TEST(Service, ColorIndexFollowsPersonOrder)
{
    const auto j = ask_ok(loaded_service(), kExamples[2]);
    for (std::size_t i = 0; i < j["persons"].size(); ++i) {
        EXPECT_EQ(j["persons"][i]["color_index"], i);
        EXPECT_EQ(j["timeline"]["lanes"][i]["color_index"], i);
        EXPECT_EQ(j["timeline"]["lanes"][i]["person"], j["persons"][i]["id"]);
    }
}

TEST(Service, EveryReferencedEventIsDescribed)
{
    const auto& s = loaded_service();
    for (const auto& q : kExamples) {
        const auto j = ask_ok(s, q);
        std::set<std::string> described;
        for (const auto& e : j["events"]) described.insert(e["id"].get<std::string>());
        for (const auto& e : j["shared_events"]) EXPECT_TRUE(described.count(e["event"].get<std::string>()));
        for (const auto& m : j["map_points"]) EXPECT_TRUE(described.count(m["event"].get<std::string>()));
        for (const auto& o : j["timeline"]["omitted"]) EXPECT_TRUE(described.count(o["event"].get<std::string>()));
        for (const auto& lane : j["timeline"]["lanes"])
            for (const auto& e : lane["events"]) EXPECT_TRUE(described.count(e["event"].get<std::string>()));
    }
}

TEST(Service, UndatedEventProducesWarning)
{
    const auto j = ask_ok(loaded_service(), kExamples[1]);
    ASSERT_FALSE(j["timeline"]["omitted"].empty());
    bool warned = false;
    for (const auto& w : j["warnings"]) warned = warned || w.get<std::string>().find("Radium Institute") != std::string::npos;
    EXPECT_TRUE(warned);
}

TEST(Service, SinglePersonWarns)
{
    const auto j = ask_ok(loaded_service(), "Tell me about Marie Curie");
    EXPECT_EQ(j["persons"].size(), 1u);
    EXPECT_TRUE(j["shared_events"].empty());
    EXPECT_FALSE(j["warnings"].empty());
}

TEST(ServiceConfig, EnvironmentOverrides)
{
    const std::map<std::string, std::string> env = {{"KONNECT_PORT", "9090"},
                                                    {"KONNECT_RELEVANCE_CAP", "7"},
                                                    {"KONNECT_INTENT_THRESHOLD", "0.4"},
                                                    {"KONNECT_GENERATOR_URL", "http://localhost:1/gen"},
                                                    {"KONNECT_GENERATOR_TIMEOUT_MS", "250"},
                                                    {"KONNECT_CLAMP_TO_LIFESPAN", "true"},
                                                    {"KONNECT_DATA_DIR", "/data"}};
    const auto lookup = [&](const char* name) -> const char* {
        auto it = env.find(name);
        return it == env.end() ? nullptr : it->second.c_str();
    };
    const auto c = apply_env_overrides(ServiceConfig{}, lookup);
    EXPECT_EQ(c.port, 9090);
    EXPECT_EQ(c.relevance_cap, 7u);
    EXPECT_DOUBLE_EQ(c.intent_threshold, 0.4);
    EXPECT_EQ(c.generator_url, "http://localhost:1/gen");
    EXPECT_EQ(c.generator_timeout, std::chrono::milliseconds(250));
    EXPECT_TRUE(c.clamp_to_lifespan);
    EXPECT_EQ(c.data_dir, "/data");
    EXPECT_NO_THROW(c.validate());

    const auto untouched = apply_env_overrides(ServiceConfig{}, [](const char*) -> const char* { return nullptr; });
    EXPECT_EQ(untouched.port, 8080);
    EXPECT_FALSE(untouched.clamp_to_lifespan);

    EXPECT_THROW(apply_env_overrides(ServiceConfig{}, [](const char* n) -> const char* {
                     return std::string(n) == "KONNECT_PORT" ? "80x" : nullptr;
                 }),
                 std::invalid_argument);
}

TEST(ServiceConfig, ValidateRanges)
{
    ServiceConfig c;
    EXPECT_NO_THROW(c.validate());
    c.port = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.intent_threshold = 1.5;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.relevance_cap = 0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = {};
    c.generator_timeout = std::chrono::milliseconds(0);
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Engine, LoadFailsOnMissingData)
{
    EXPECT_THROW(Engine::load(ServiceConfig{.data_dir = "/nonexistent/konnect"}), DatasetError);
}
