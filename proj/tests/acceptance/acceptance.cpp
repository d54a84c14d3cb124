// Acceptance run: one PASS/FAIL line per primary criterion, on the bundled
// fixture with the Null text generator. Exits 1 when any criterion fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "support/fixture.hpp"
#include "support/json_schema.hpp"
#include "support/oracles.hpp"

using namespace konnect;
using Clock = std::chrono::steady_clock;

namespace {

/// Collects the reasons a criterion failed.
class Check {
public:
    void require(bool ok, const std::string& what)
    {
        if (!ok) failures_.push_back(what);
    }
    bool ok() const { return failures_.empty(); }
    std::string summary() const
    {
        std::string out;
        for (std::size_t i = 0; i < failures_.size() && i < 5; ++i) out += (i ? "; " : "") + failures_[i];
        if (failures_.size() > 5) out += "; ... " + std::to_string(failures_.size() - 5) + " more";
        return out;
    }

private:
    std::vector<std::string> failures_;
};

int failed = 0;

void criterion(const std::string& name, const std::function<void(Check&, std::string&)>& body)
{
    Check c;
    std::string detail;
    try {
        body(c, detail);
    } catch (const std::exception& e) {
        c.require(false, std::string("exception: ") + e.what());
    }
    if (c.ok()) std::cout << "PASS " << name << (detail.empty() ? "" : " (" + detail + ")") << '\n';
    else {
        ++failed;
        std::cout << "FAIL " << name << ": " << c.summary() << '\n';
    }
}

const Engine& engine() { return *test::fixture_engine(); }

std::vector<std::string> shared_ids(const Json& j)
{
    std::vector<std::string> out;
    for (const auto& s : j["shared_events"]) out.push_back(s["event"].get<std::string>());
    return out;
}

bool contains(const std::vector<std::string>& v, const std::string& x)
{
    return std::find(v.begin(), v.end(), x) != v.end();
}

std::string ms(Clock::duration d)
{
    std::ostringstream out;
    out << std::chrono::duration<double, std::milli>(d).count() << " ms";
    return out.str();
}

std::vector<EntityId> pick_persons(std::mt19937_64& rng, std::size_t available, std::size_t n)
{
    std::vector<EntityId> out;
    std::uniform_int_distribution<std::size_t> pick(0, available - 1);
    while (out.size() < n) {
        EntityId p("p" + std::to_string(pick(rng)));
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    }
    return out;
}

}  // namespace

int main()
{
    engine();  // load the fixture outside the timed region

    criterion("example-1 footballers share FC Bayern and the 2014 World Cup", [](Check& c, std::string& detail) {
        const auto begin = Clock::now();
        const auto j = engine().ask("Did Mat Hummels, Miroslav Klose, and Philipp Lahm meet?");
        const auto elapsed = Clock::now() - begin;
        detail = ms(elapsed);
        auto ids = shared_ids(j);
        std::sort(ids.begin(), ids.end());
        c.require(ids == std::vector<std::string>{"fc_bayern_munich", "fifa_world_cup_2014"},
                  "shared events: " + j["shared_events"].dump());
        const Json everyone = Json::array({"mats_hummels", "miroslav_klose", "philipp_lahm"});
        for (const auto& s : j["shared_events"]) c.require(s["participants"] == everyone, "participants " + s.dump());
        c.require(j["persons"].size() == 3 && j["persons"][0]["id"] == "mats_hummels", "Mat did not resolve");
        c.require(elapsed < std::chrono::milliseconds(100), "took " + ms(elapsed));
    });

    criterion("example-2 Curie marriage, shared awards and posthumous medal", [](Check& c, std::string&) {
        const auto j = engine().ask("When did Pierre Curie and Marie Curie marry?");
        bool spouse = false;
        for (const auto& r : j["relations"])
            spouse = spouse || (r["predicate"] == "spouse" && r["valid_from"].is_string() &&
                                r["valid_from"].get<std::string>().rfind("1895", 0) == 0 &&
                                r["valid_to"].is_string() && r["valid_to"].get<std::string>().rfind("1906", 0) == 0);
        c.require(spouse, "no spouse relation 1895..1906");
        const auto ids = shared_ids(j);
        for (const char* e : {"nobel_prize_physics_1903", "davy_medal_1903", "world_war_i"})
            c.require(contains(ids, e), std::string("missing shared ") + e);
        bool medal = false, lifespan = false;
        for (const auto& lane : j["timeline"]["lanes"]) {
            if (lane["person"] != "pierre_curie") continue;
            for (const auto& e : lane["events"]) medal = medal || e["event"] == "elliot_cresson_medal_1909";
            const auto end = lane["lifespan"]["end"];
            lifespan = end.is_string() && PartialDate::parse(end.get<std::string>())->year >= 1909;
        }
        c.require(medal, "Pierre's lane lacks the Elliot Cresson Medal 1909");
        c.require(lifespan, "Pierre's lifespan ends before 1909");
    });

    criterion("example-3 actors share Golden Globe Award and Academy Awards", [](Check& c, std::string&) {
        const auto j = engine().ask("Did Brad Pitt, George Clooney, and Tom Cruise all receive movie awards?");
        const auto ids = shared_ids(j);
        c.require(contains(ids, "golden_globe_award"), "missing Golden Globe Award");
        c.require(contains(ids, "academy_awards"), "missing Academy Awards");
        c.require(j["persons"].size() == 3, "expected three persons");
    });

    criterion("example-4 Einstein and Schrodinger share four events", [](Check& c, std::string&) {
        const auto j = engine().ask("Did Erwin Schrödinger meet Albert Einstein?");
        const auto ids = shared_ids(j);
        c.require(ids.size() == 4, "shared events: " + j["shared_events"].dump());
        c.require(contains(ids, "solvay_conference_1927"), "missing Solvay Conference");
        const auto text = j["answer"]["text"].get<std::string>();
        c.require(j["answer"]["source"] == "template", "answer not from template");
        c.require(text.find("four shared events") != std::string::npos, "answer: " + text);
    });

    criterion("oracle equivalence on 500 random graphs", [](Check& c, std::string& detail) {
        const auto begin = Clock::now();
        std::mt19937_64 rng(500);
        std::size_t comparisons = 0;
        for (std::uint64_t seed = 1; seed <= 500; ++seed) {
            synthetic::GraphSpec spec;
            spec.seed = seed;
            spec.persons = 5 + seed % 20;
            spec.events = 10 + seed % 50;
            spec.triples = seed % 50 == 0 ? 10000 : 50 + (seed * 37) % 2000;
            spec.relation_share = 0.2;
            const auto g = synthetic::random_graph(spec);
            const std::size_t n = 1 + seed % 5;
            const auto persons = pick_persons(rng, spec.persons, n);

            for (const auto& p : persons) {
                std::vector<std::pair<std::string, std::string>> got;
                for (const auto& l : events_of(g, p)) got.emplace_back(l.event.str(), l.predicate);
                c.require(got == test::scan_events_of(g, p), "events_of seed " + std::to_string(seed));
            }
            std::vector<std::pair<std::string, std::vector<std::string>>> shared;
            for (const auto& s : shared_events(g, persons)) {
                std::vector<std::string> who;
                for (const auto& p : s.participants) who.push_back(p.str());
                shared.emplace_back(s.event.str(), who);
            }
            c.require(shared == test::scan_shared(g, persons), "shared_events seed " + std::to_string(seed));
            std::vector<std::tuple<std::string, std::string, std::string>> rel;
            for (const auto& r : person_relations(g, persons))
                rel.emplace_back(r.subject.str(), r.predicate, r.object.str());
            c.require(rel == test::scan_relations(g, persons), "person_relations seed " + std::to_string(seed));
            comparisons += persons.size() + 2;
        }
        const auto elapsed = Clock::now() - begin;
        detail = std::to_string(comparisons) + " comparisons, " + ms(elapsed);
        c.require(elapsed < std::chrono::seconds(60), "took " + ms(elapsed));
    });

    criterion("timeline rows on 200 random interval sets", [](Check& c, std::string&) {
        std::mt19937_64 rng(200);
        for (int set = 0; set < 200; ++set) {
            const std::size_t n = std::uniform_int_distribution<std::size_t>(0, 60)(rng);
            std::vector<TimelineItem> items;
            for (std::size_t i = 0; i < n; ++i) {
                const auto start = synthetic::random_date(rng, 1850, 1900);
                const auto end = synthetic::random_date_after(rng, start, 8);
                items.push_back({"e" + std::to_string(i % 9), std::to_string(i), start.earliest_day(), end.latest_day()});
            }
            const auto rows = assign_rows(items);
            c.require(test::rows_disjoint(items, rows), "overlap in set " + std::to_string(set));
            c.require(rows == test::first_fit_rows(items), "differs from first-fit oracle in set " + std::to_string(set));
        }
    });

    criterion("intent suite keyword accuracy and anchored cases", [](Check& c, std::string& detail) {
        auto lexical = [](const std::string& q) {
            return build_query(q, engine().index(), nullptr, engine().stopwords()).intent;
        };
        std::ifstream in(std::string(KONNECT_TEST_DATA_DIR) + "/intent_questions.tsv");
        c.require(bool(in), "cannot open intent_questions.tsv");
        std::string line;
        std::getline(in, line);
        std::size_t total = 0, correct = 0;
        std::map<std::string, std::size_t> per_label;
        while (std::getline(in, line)) {
            const auto tab = line.find('\t');
            const auto question = line.substr(0, tab);
            const auto label = line.substr(tab + 1);
            ++total;
            ++per_label[label];
            if (to_string(lexical(question)) == label) ++correct;
        }
        c.require(total == 30 && per_label["professional"] == 10 && per_label["personal"] == 10 &&
                      per_label["general"] == 10,
                  "labeled set is not 10 per intent");
        const double accuracy = total ? double(correct) / double(total) : 0.0;
        detail = std::to_string(correct) + "/" + std::to_string(total);
        c.require(accuracy >= 0.9, "accuracy " + detail);
        c.require(lexical("When did Pierre Curie and Marie Curie marry?") == Intent::Personal, "marry");
        c.require(lexical("Did Marie Curie and Pierre Curie collaborate?") == Intent::Professional, "collaborate");
        c.require(lexical("Did Erwin Schrödinger meet Albert Einstein?") == Intent::General, "meet");
    });

    criterion("API responses match the schema and are byte-identical", [](Check& c, std::string& detail) {
        const auto validator = test::SchemaValidator::from_file(KONNECT_SCHEMA_PATH);
        Service service;
        service.set_engine(test::fixture_engine());
        Service fresh;
        fresh.set_engine(Engine::load(ServiceConfig{.data_dir = test::fixture_dir()}));
        std::vector<std::string> questions(sample_queries().begin(), sample_queries().end());
        for (const char* q : {"Did Mat Hummels, Miroslav Klose, and Philipp Lahm meet?",
                              "When did Pierre Curie and Marie Curie marry?",
                              "Did Brad Pitt, George Clooney, and Tom Cruise all receive movie awards?",
                              "Did Erwin Schrödinger meet Albert Einstein?", "Tell me about Marie Curie"})
            questions.push_back(q);
        std::size_t checked = 0;
        for (const auto& q : questions) {
            const auto body = Json{{"question", q}}.dump();
            const auto reply = service.query(body);
            c.require(reply.status == 200, q + " -> " + std::to_string(reply.status));
            if (reply.status != 200) continue;
            const auto errors = validator.validate(Json::parse(reply.body));
            c.require(errors.empty(), q + ": " + (errors.empty() ? "" : errors.front()));
            c.require(service.query(body).body == reply.body, q + ": repeated body differs");
            c.require(fresh.query(body).body == reply.body, q + ": body differs across engines");
            ++checked;
        }
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            synthetic::GraphSpec spec;
            spec.seed = seed;
            Engine random_engine(synthetic::random_graph(spec), {}, std::nullopt, {});
            const auto j = random_engine.ask("Did Person 1, Person 2 and Person 3 meet?");
            const auto errors = validator.validate(j);
            c.require(errors.empty(), "random graph " + std::to_string(seed) + ": " +
                                          (errors.empty() ? "" : errors.front()));
            ++checked;
        }
        detail = std::to_string(checked) + " responses";
    });

    criterion("six-person query is a structured 400", [](Check& c, std::string&) {
        Service service;
        service.set_engine(test::fixture_engine());
        const auto reply = service.query(
            Json{{"question",
                  "Did Mats Hummels, Miroslav Klose, Philipp Lahm, Marie Curie, Pierre Curie, and Brad Pitt meet?"}}
                .dump());
        c.require(reply.status == 400, "status " + std::to_string(reply.status));
        const auto j = Json::parse(reply.body);
        c.require(j.value("error", "") == "too_many_persons", "error " + j.dump());
        c.require(j.value("limit", 0) == 5 && j.value("found", 0) == 6, "limit/found " + j.dump());
    });

    return failed == 0 ? 0 : 1;
}
