#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "konnect/date.hpp"
#include "konnect/kg.hpp"

// Random graphs for property tests and scale experiments. Ids are p<N>
// (persons), e<N> (events) and o<N> (other entities).

namespace konnect::synthetic {

struct GraphSpec {
    std::size_t persons = 20;
    std::size_t events = 40;
    std::size_t others = 5;
    std::size_t triples = 200;
    std::size_t classes = 12;
    /// Share of triples linking two persons.
    double relation_share = 0.1;
    /// Share of triples with a literal object.
    double literal_share = 0.05;
    /// Share of person-event triples stored event -> person.
    double reversed_share = 0.2;
    std::uint64_t seed = 1;
};

inline PartialDate random_date(std::mt19937_64& rng, int min_year = 1800, int max_year = 2020)
{
    std::uniform_int_distribution<int> year(min_year, max_year);
    std::uniform_int_distribution<int> precision(0, 2);
    PartialDate d{year(rng), std::nullopt, std::nullopt};
    const int p = precision(rng);
    if (p >= 1) d.month = static_cast<std::uint8_t>(std::uniform_int_distribution<int>(1, 12)(rng));
    if (p == 2)
        d.day = static_cast<std::uint8_t>(
            std::uniform_int_distribution<int>(1, static_cast<int>(date_detail::days_in_month(d.year, *d.month)))(rng));
    return d;
}

/// A date no earlier than `from`, for the end of an interval.
inline PartialDate random_date_after(std::mt19937_64& rng, const PartialDate& from, int max_span_years = 10)
{
    for (;;) {
        auto d = random_date(rng, from.year, from.year + max_span_years);
        if (ordered(from, d)) return d;
    }
}

/// Random forest of `n` classes C0..C{n-1}, listed in shuffled order so
/// that parents do not always precede their children.
inline EventClassOntology random_ontology(std::size_t n, std::mt19937_64& rng)
{
    std::vector<EventClass> classes;
    std::bernoulli_distribution root(0.2), has_icon(0.3);
    std::uniform_int_distribution<int> icon(0, 6);
    for (std::size_t i = 0; i < n; ++i) {
        EventClass c{"C" + std::to_string(i), std::nullopt, std::nullopt};
        if (i > 0 && !root(rng))
            c.parent = "C" + std::to_string(std::uniform_int_distribution<std::size_t>(0, i - 1)(rng));
        if (has_icon(rng)) c.icon = static_cast<IconCategory>(icon(rng));
        classes.push_back(std::move(c));
    }
    std::shuffle(classes.begin(), classes.end(), rng);
    return EventClassOntology(std::move(classes));
}

inline KnowledgeGraph random_graph(const GraphSpec& spec)
{
    std::mt19937_64 rng(spec.seed);
    auto ontology = random_ontology(std::max<std::size_t>(spec.classes, 1), rng);
    std::bernoulli_distribution coin(0.5), mostly(0.8);
    std::uniform_int_distribution<std::int64_t> mentions(0, 20);  // narrow range: plenty of ties

    std::vector<Entity> entities;
    for (std::size_t i = 0; i < spec.persons; ++i) {
        Entity e{EntityId("p" + std::to_string(i)), EntityKind::Person, "Person " + std::to_string(i)};
        if (mostly(rng)) e.birth = random_date(rng, 1800, 1990);
        if (e.birth && coin(rng)) e.death = random_date_after(rng, *e.birth, 90);
        e.mention_count = mentions(rng);
        entities.push_back(std::move(e));
    }
    for (std::size_t i = 0; i < spec.events; ++i) {
        Entity e{EntityId("e" + std::to_string(i)), EntityKind::Event, "Event " + std::to_string(i)};
        if (mostly(rng)) e.start = random_date(rng);
        if (e.start && coin(rng)) e.end = random_date_after(rng, *e.start);
        if (coin(rng))
            e.location = GeoPoint{std::uniform_real_distribution<double>(-90, 90)(rng),
                                  std::uniform_real_distribution<double>(-180, 180)(rng)};
        if (mostly(rng)) {
            auto cls = ontology.classes();
            e.event_class = cls[std::uniform_int_distribution<std::size_t>(0, cls.size() - 1)(rng)].id;
        }
        e.mention_count = mentions(rng);
        entities.push_back(std::move(e));
    }
    for (std::size_t i = 0; i < spec.others; ++i)
        entities.push_back(Entity{EntityId("o" + std::to_string(i)), EntityKind::Other, "Other " + std::to_string(i)});

    auto pick = [&rng](const char* prefix, std::size_t n) {
        return std::string(prefix) + std::to_string(std::uniform_int_distribution<std::size_t>(0, n - 1)(rng));
    };
    static const char* predicates[] = {"participated in", "award received", "member of", "nominated for"};
    std::uniform_int_distribution<int> predicate(0, 3);
    std::uniform_real_distribution<double> unit(0, 1);

    std::vector<Triple> triples;
    if (spec.persons > 0) {
        for (std::size_t i = 0; i < spec.triples; ++i) {
            const double r = unit(rng);
            Triple t{EntityId(pick("p", spec.persons)), predicates[predicate(rng)], "", true};
            if (r < spec.literal_share) {
                t.predicate = "note";
                t.object = "literal " + std::to_string(i);
                t.object_is_entity = false;
            } else if (r < spec.literal_share + spec.relation_share) {
                t.predicate = coin(rng) ? "spouse" : "influenced";
                t.object = pick("p", spec.persons);
            } else if (spec.events > 0) {
                t.object = pick("e", spec.events);
                if (unit(rng) < spec.reversed_share) {
                    auto person = t.subject.str();
                    t.subject = EntityId(t.object);
                    t.object = std::move(person);
                }
            } else if (spec.others > 0) {
                t.object = pick("o", spec.others);
            } else {
                continue;
            }
            if (coin(rng)) {
                t.valid_from = random_date(rng, 1850, 2020);
                if (coin(rng)) t.valid_to = random_date_after(rng, *t.valid_from);
            }
            triples.push_back(std::move(t));
        }
    }
    return KnowledgeGraph(std::move(entities), std::move(triples), std::move(ontology));
}

}  // namespace konnect::synthetic
