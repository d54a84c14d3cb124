#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "konnect/date.hpp"
#include "konnect/kg.hpp"

namespace konnect {

/// Default number of events kept per person.
inline constexpr std::size_t kDefaultRelevanceCap = 50;

/// A person's connection to an event: the event, the connecting predicate
/// and the validity interval of the first triple that made it.
struct EventLink {
    EntityId event;
    std::string predicate;
    std::optional<PartialDate> valid_from;
    std::optional<PartialDate> valid_to;

    friend bool operator==(const EventLink&, const EventLink&) = default;
};

struct SharedEvent {
    EntityId event;
    std::vector<EntityId> participants;  // query order

    friend bool operator==(const SharedEvent&, const SharedEvent&) = default;
};

struct PersonRelation {
    EntityId subject;
    EntityId object;
    std::string predicate;
    std::optional<PartialDate> valid_from;
    std::optional<PartialDate> valid_to;

    friend bool operator==(const PersonRelation&, const PersonRelation&) = default;
};

/// Events of a person: every neighbor triple whose other endpoint is an
/// event, deduplicated on (event, predicate), in triple load order.
inline std::vector<EventLink> events_of(const KnowledgeGraph& graph, const EntityId& person)
{
    std::vector<EventLink> out;
    std::set<std::pair<std::string, std::string>> seen;
    for (const Triple* t : graph.neighbors(person)) {
        std::string other;
        if (t->subject == person) {
            if (!t->object_is_entity) continue;
            other = t->object;
        } else {
            other = t->subject.str();
        }
        const Entity& e = graph.entity(other);
        if (!e.is_event()) continue;
        if (!seen.emplace(other, t->predicate).second) continue;
        out.push_back({e.id, t->predicate, t->valid_from, t->valid_to});
    }
    return out;
}

namespace retrieval_detail {

inline std::vector<EntityId> unique_persons(std::span<const EntityId> persons)
{
    std::vector<EntityId> out;
    for (const auto& p : persons)
        if (std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
    return out;
}

/// (participant count desc, mention_count desc, EntityId asc)
inline void sort_by_sharing(const KnowledgeGraph& graph, std::vector<SharedEvent>& events)
{
    std::sort(events.begin(), events.end(), [&graph](const SharedEvent& a, const SharedEvent& b) {
        if (a.participants.size() != b.participants.size()) return a.participants.size() > b.participants.size();
        const auto ma = graph.entity(a.event).mention_count;
        const auto mb = graph.entity(b.event).mention_count;
        if (ma != mb) return ma > mb;
        return a.event < b.event;
    });
}

}  // namespace retrieval_detail

/// Events linked to at least two of `persons`, each with exactly those
/// persons as participants.
inline std::vector<SharedEvent> shared_events(const KnowledgeGraph& graph, std::span<const EntityId> persons)
{
    const auto unique = retrieval_detail::unique_persons(persons);
    std::map<EntityId, std::vector<EntityId>> participants;
    for (const auto& p : unique) {
        std::set<EntityId> mine;
        for (const auto& link : events_of(graph, p)) mine.insert(link.event);
        for (const auto& e : mine) participants[e].push_back(p);
    }
    std::vector<SharedEvent> out;
    for (auto& [event, people] : participants)
        if (people.size() >= 2) out.push_back({event, std::move(people)});
    retrieval_detail::sort_by_sharing(graph, out);
    return out;
}

/// Triples connecting two distinct queried persons, in load order.
inline std::vector<PersonRelation> person_relations(const KnowledgeGraph& graph, std::span<const EntityId> persons)
{
    const auto unique = retrieval_detail::unique_persons(persons);
    const std::set<EntityId> members(unique.begin(), unique.end());
    std::set<std::size_t> hits;
    for (const auto& p : unique)
        for (auto t : graph.triples_by_subject(p)) {
            const Triple& tr = graph.triples()[t];
            if (tr.object_is_entity && tr.object != tr.subject.str() && members.contains(EntityId(tr.object)))
                hits.insert(t);
        }
    std::vector<PersonRelation> out;
    for (auto t : hits) {
        const Triple& tr = graph.triples()[t];
        out.push_back({tr.subject, EntityId(tr.object), tr.predicate, tr.valid_from, tr.valid_to});
    }
    return out;
}

/// Relevance selection: sort by event mention_count (desc, then EntityId,
/// then predicate) and keep the first `cap`; links to events in `shared`
/// are kept even beyond the cap.
inline std::vector<EventLink> select_relevant(const KnowledgeGraph& graph, std::vector<EventLink> links,
                                              std::size_t cap, const std::set<EntityId>& shared = {})
{
    std::sort(links.begin(), links.end(), [&graph](const EventLink& a, const EventLink& b) {
        const auto ma = graph.entity(a.event).mention_count;
        const auto mb = graph.entity(b.event).mention_count;
        if (ma != mb) return ma > mb;
        return std::tie(a.event, a.predicate) < std::tie(b.event, b.predicate);
    });
    std::vector<EventLink> out;
    for (std::size_t i = 0; i < links.size(); ++i)
        if (i < cap || shared.contains(links[i].event)) out.push_back(std::move(links[i]));
    return out;
}

// ---------------------------------------------------------------------------
// Per-person events and lifespans

struct DateSpan {
    PartialDate start;
    PartialDate end;

    std::int64_t first_day() const { return start.earliest_day(); }
    std::int64_t last_day() const { return end.latest_day(); }
    friend bool operator==(const DateSpan&, const DateSpan&) = default;
};

/// When a person was involved with an event: the link's validity interval
/// if it has a start, otherwise the event's own dates. A missing end makes
/// a point event. nullopt when neither source has a start date.
inline std::optional<DateSpan> resolve_span(const Entity& event, const EventLink& link)
{
    if (link.valid_from) return DateSpan{*link.valid_from, link.valid_to.value_or(*link.valid_from)};
    if (event.start) return DateSpan{*event.start, event.end.value_or(*event.start)};
    return std::nullopt;
}

struct Lifespan {
    std::optional<PartialDate> start;
    std::optional<PartialDate> end;

    friend bool operator==(const Lifespan&, const Lifespan&) = default;
};

struct PersonEvents {
    EntityId person;
    std::vector<EventLink> events;
    Lifespan lifespan;
};

/// Starts at birth (or the earliest dated event when birth is unknown) and
/// ends at the later of death and the last selected event.
inline Lifespan compute_lifespan(const KnowledgeGraph& graph, const Entity& person, std::span<const EventLink> events)
{
    Lifespan life{person.birth, person.death};
    for (const auto& link : events) {
        auto span = resolve_span(graph.entity(link.event), link);
        if (!span) continue;
        if (!life.end || span->last_day() > life.end->latest_day()) life.end = span->end;
        if (!person.birth && (!life.start || span->first_day() < life.start->earliest_day())) life.start = span->start;
    }
    return life;
}

inline std::vector<PersonEvents> collect_person_events(const KnowledgeGraph& graph, std::span<const EntityId> persons,
                                                       std::span<const SharedEvent> shared,
                                                       std::size_t cap = kDefaultRelevanceCap)
{
    std::set<EntityId> shared_ids;
    for (const auto& s : shared) shared_ids.insert(s.event);
    std::vector<PersonEvents> out;
    for (const auto& p : retrieval_detail::unique_persons(persons)) {
        auto selected = select_relevant(graph, events_of(graph, p), cap, shared_ids);
        auto life = compute_lifespan(graph, graph.entity(p), selected);
        out.push_back({p, std::move(selected), std::move(life)});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Timeline

/// One interval to stack. Days are inclusive day numbers.
struct TimelineItem {
    std::string key;
    std::string tiebreak;
    std::int64_t first_day = 0;
    std::int64_t last_day = 0;
};

/// Greedy first-fit stacking. Items are visited by (first_day asc,
/// duration desc, key, tiebreak); each goes to the lowest row whose last
/// item ended strictly before it starts. Returns the row of every input
/// item, in input order.
inline std::vector<std::size_t> assign_rows(std::span<const TimelineItem> items)
{
    std::vector<std::size_t> order(items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&items](std::size_t a, std::size_t b) {
        const auto& x = items[a];
        const auto& y = items[b];
        if (x.first_day != y.first_day) return x.first_day < y.first_day;
        const auto dx = x.last_day - x.first_day;
        const auto dy = y.last_day - y.first_day;
        if (dx != dy) return dx > dy;
        return std::tie(x.key, x.tiebreak) < std::tie(y.key, y.tiebreak);
    });

    std::vector<std::int64_t> row_end;
    std::vector<std::size_t> rows(items.size());
    for (auto i : order) {
        std::size_t r = 0;
        while (r < row_end.size() && !(row_end[r] < items[i].first_day)) ++r;
        if (r == row_end.size()) row_end.push_back(items[i].last_day);
        else row_end[r] = items[i].last_day;
        rows[i] = r;
    }
    return rows;
}

struct PlacedEvent {
    EntityId event;
    std::string predicate;
    PartialDate start;
    PartialDate end;
    std::size_t row = 0;
    IconCategory icon = IconCategory::Generic;
    /// All queried persons sharing the event, or just the lane's person.
    std::vector<EntityId> participants;
};

struct TimelineLane {
    EntityId person;
    Lifespan lifespan;
    std::size_t row_count = 0;
    std::vector<PlacedEvent> events;  // stacking order
};

struct OmittedEvent {
    EntityId person;
    EntityId event;
};

struct TimelineLayout {
    std::vector<TimelineLane> lanes;
    /// Events without any start date, left off the timeline.
    std::vector<OmittedEvent> omitted;
};

struct LayoutOptions {
    bool clamp_to_lifespan = false;
};

namespace retrieval_detail {

inline DateSpan clamp(DateSpan span, const Entity& person)
{
    if (person.birth && span.first_day() < person.birth->earliest_day()) span.start = *person.birth;
    if (person.death && span.last_day() > person.death->latest_day()) span.end = *person.death;
    if (span.first_day() > span.last_day()) {
        // Entirely outside the lifespan: collapse onto the nearer boundary.
        if (person.death && span.first_day() > person.death->latest_day()) span.start = span.end;
        else span.end = span.start;
    }
    return span;
}

}  // namespace retrieval_detail

inline TimelineLayout layout_timeline(const KnowledgeGraph& graph, std::span<const PersonEvents> person_events,
                                      std::span<const SharedEvent> shared, const LayoutOptions& options = {})
{
    std::map<EntityId, const SharedEvent*> shared_by_id;
    for (const auto& s : shared) shared_by_id.emplace(s.event, &s);

    TimelineLayout layout;
    for (const auto& pe : person_events) {
        const Entity& person = graph.entity(pe.person);
        TimelineLane lane{pe.person, pe.lifespan, 0, {}};
        std::vector<TimelineItem> items;
        for (const auto& link : pe.events) {
            const Entity& event = graph.entity(link.event);
            auto span = resolve_span(event, link);
            if (!span) {
                layout.omitted.push_back({pe.person, link.event});
                continue;
            }
            if (options.clamp_to_lifespan) *span = retrieval_detail::clamp(*span, person);
            auto it = shared_by_id.find(link.event);
            lane.events.push_back({link.event, link.predicate, span->start, span->end, 0, graph.icon_for(event),
                                   it != shared_by_id.end() ? it->second->participants
                                                            : std::vector<EntityId>{pe.person}});
            items.push_back({link.event.str(), link.predicate, span->first_day(), span->last_day()});
        }
        const auto rows = assign_rows(items);
        for (std::size_t i = 0; i < rows.size(); ++i) {
            lane.events[i].row = rows[i];
            lane.row_count = std::max(lane.row_count, rows[i] + 1);
        }
        std::vector<std::size_t> order(lane.events.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&items](std::size_t a, std::size_t b) {
            const auto& x = items[a];
            const auto& y = items[b];
            return std::make_tuple(x.first_day, y.last_day - y.first_day, x.key, x.tiebreak) <
                   std::make_tuple(y.first_day, x.last_day - x.first_day, y.key, y.tiebreak);
        });
        std::vector<PlacedEvent> sorted;
        for (auto i : order) sorted.push_back(std::move(lane.events[i]));
        lane.events = std::move(sorted);
        layout.lanes.push_back(std::move(lane));
    }
    return layout;
}

// ---------------------------------------------------------------------------
// Map and relationship graph

struct MapPoint {
    EntityId event;
    GeoPoint location;
    std::vector<EntityId> participants;  // query order
};

/// Located and dated events among the selected ones, with every queried
/// person whose link to them has a date. Ordered like shared events.
inline std::vector<MapPoint> map_points(const KnowledgeGraph& graph, std::span<const PersonEvents> person_events)
{
    std::map<EntityId, std::vector<EntityId>> who;
    for (const auto& pe : person_events)
        for (const auto& link : pe.events) {
            const auto& event = graph.entity(link.event);
            if (!event.location || !resolve_span(event, link)) continue;
            auto& people = who[link.event];
            if (std::find(people.begin(), people.end(), pe.person) == people.end()) people.push_back(pe.person);
        }
    std::vector<SharedEvent> ranked;
    for (auto& [event, people] : who) ranked.push_back({event, std::move(people)});
    retrieval_detail::sort_by_sharing(graph, ranked);
    std::vector<MapPoint> out;
    for (auto& r : ranked) out.push_back({r.event, *graph.entity(r.event).location, std::move(r.participants)});
    return out;
}

struct GraphNode {
    EntityId id;
    EntityKind kind;
};

struct GraphEdge {
    EntityId person;
    EntityId event;
};

struct RelationGraph {
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;
};

/// Persons plus shared events; one edge per (participant, shared event).
/// Layout is left to the client.
inline RelationGraph relation_graph(std::span<const EntityId> persons, std::span<const SharedEvent> shared)
{
    RelationGraph g;
    for (const auto& p : retrieval_detail::unique_persons(persons)) g.nodes.push_back({p, EntityKind::Person});
    for (const auto& s : shared) {
        g.nodes.push_back({s.event, EntityKind::Event});
        for (const auto& p : s.participants) g.edges.push_back({p, s.event});
    }
    return g;
}

// ---------------------------------------------------------------------------

struct RetrievalOptions {
    std::size_t relevance_cap = kDefaultRelevanceCap;
    bool clamp_to_lifespan = false;
};

struct RetrievalResult {
    std::vector<EntityId> persons;
    std::vector<SharedEvent> shared;
    std::vector<PersonRelation> relations;
    std::vector<PersonEvents> person_events;
    TimelineLayout timeline;
    std::vector<MapPoint> map;
    RelationGraph graph;
};

/// Everything the views need for a set of persons. Takes persons only, so
/// the query intent cannot influence what is retrieved.
inline RetrievalResult retrieve(const KnowledgeGraph& graph, std::span<const EntityId> persons,
                                const RetrievalOptions& options = {})
{
    RetrievalResult r;
    r.persons = retrieval_detail::unique_persons(persons);
    r.shared = shared_events(graph, r.persons);
    r.relations = person_relations(graph, r.persons);
    r.person_events = collect_person_events(graph, r.persons, r.shared, options.relevance_cap);
    r.timeline = layout_timeline(graph, r.person_events, r.shared, {options.clamp_to_lifespan});
    r.map = map_points(graph, r.person_events);
    r.graph = relation_graph(r.persons, r.shared);
    return r;
}

}  // namespace konnect
