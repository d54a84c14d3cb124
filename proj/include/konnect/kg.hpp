#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iterator>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "konnect/date.hpp"
#include "konnect/errors.hpp"

namespace konnect {

// ---------------------------------------------------------------------------
// Identifiers

/// Opaque entity identifier: non-empty, no whitespace.
class EntityId {
public:
    explicit EntityId(std::string value) : value_(std::move(value))
    {
        if (!is_valid(value_)) throw std::invalid_argument("invalid entity id: '" + value_ + "'");
    }

    static bool is_valid(std::string_view s)
    {
        if (s.empty()) return false;
        return std::none_of(s.begin(), s.end(), [](unsigned char c) {
            return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
        });
    }

    const std::string& str() const noexcept { return value_; }

    friend bool operator==(const EntityId&, const EntityId&) = default;
    friend auto operator<=>(const EntityId&, const EntityId&) = default;

private:
    std::string value_;
};

// ---------------------------------------------------------------------------
// Entities and triples

enum class EntityKind { Person, Event, Other };

constexpr std::string_view to_string(EntityKind kind)
{
    switch (kind) {
    case EntityKind::Person: return "person";
    case EntityKind::Event: return "event";
    case EntityKind::Other: return "other";
    }
    return "other";
}

inline std::optional<EntityKind> parse_entity_kind(std::string_view s)
{
    if (s == "person") return EntityKind::Person;
    if (s == "event") return EntityKind::Event;
    if (s == "other") return EntityKind::Other;
    return std::nullopt;
}

struct GeoPoint {
    double latitude = 0.0;
    double longitude = 0.0;

    bool in_range() const
    {
        return latitude >= -90.0 && latitude <= 90.0 && longitude >= -180.0 && longitude <= 180.0;
    }
    friend bool operator==(const GeoPoint&, const GeoPoint&) = default;
};

struct Entity {
    EntityId id;
    EntityKind kind = EntityKind::Other;
    std::string label;
    std::vector<std::string> aliases;
    std::optional<PartialDate> birth;  // persons
    std::optional<PartialDate> death;  // persons
    std::optional<PartialDate> start;  // events
    std::optional<PartialDate> end;    // events
    std::optional<GeoPoint> location;
    std::optional<std::string> event_class;  // events
    std::int64_t mention_count = 0;
    std::optional<std::string> wikipedia_url;

    bool is_person() const noexcept { return kind == EntityKind::Person; }
    bool is_event() const noexcept { return kind == EntityKind::Event; }

    friend bool operator==(const Entity&, const Entity&) = default;
};

/// Describes every violated entity invariant; empty when the entity is valid.
inline std::vector<std::string> entity_problems(const Entity& e)
{
    std::vector<std::string> out;
    if (e.label.empty()) out.emplace_back("label is empty");
    if (e.kind != EntityKind::Person && (e.birth || e.death))
        out.emplace_back("birth/death are only allowed on persons");
    if (e.kind != EntityKind::Event && (e.start || e.end || e.event_class))
        out.emplace_back("start/end/event_class are only allowed on events");
    if (!ordered(e.birth, e.death)) out.emplace_back("birth is after death");
    if (!ordered(e.start, e.end)) out.emplace_back("start is after end");
    if (e.mention_count < 0) out.emplace_back("mention_count is negative");
    if (e.location && !e.location->in_range()) out.emplace_back("coordinates out of range");
    for (auto* d : {&e.birth, &e.death, &e.start, &e.end})
        if (*d && !(*d)->is_valid()) out.emplace_back("invalid date");
    return out;
}

/// Temporal subject-predicate-object edge. The object is either an entity id
/// or a literal string, distinguished by `object_is_entity`.
struct Triple {
    EntityId subject;
    std::string predicate;
    std::string object;
    bool object_is_entity = true;
    std::optional<PartialDate> valid_from;
    std::optional<PartialDate> valid_to;

    std::optional<EntityId> object_entity() const
    {
        if (!object_is_entity) return std::nullopt;
        return EntityId(object);
    }

    friend bool operator==(const Triple&, const Triple&) = default;
};

// ---------------------------------------------------------------------------
// Ontology

enum class IconCategory { Birth, Death, Marriage, Award, Sports, Conflict, Generic };

constexpr std::string_view to_string(IconCategory icon)
{
    switch (icon) {
    case IconCategory::Birth: return "birth";
    case IconCategory::Death: return "death";
    case IconCategory::Marriage: return "marriage";
    case IconCategory::Award: return "award";
    case IconCategory::Sports: return "sports";
    case IconCategory::Conflict: return "conflict";
    case IconCategory::Generic: return "generic";
    }
    return "generic";
}

inline std::optional<IconCategory> parse_icon(std::string_view s)
{
    for (auto icon : {IconCategory::Birth, IconCategory::Death, IconCategory::Marriage, IconCategory::Award,
                      IconCategory::Sports, IconCategory::Conflict, IconCategory::Generic})
        if (to_string(icon) == s) return icon;
    return std::nullopt;
}

struct EventClass {
    std::string id;
    std::optional<std::string> parent;
    std::optional<IconCategory> icon;

    friend bool operator==(const EventClass&, const EventClass&) = default;
};

/// Event-type forest. Subclass queries follow parent links, so the relation
/// is reflexive and transitive by construction.
class EventClassOntology {
public:
    EventClassOntology() = default;

    /// Throws IntegrityError on duplicate ids, unknown parents or cycles.
    explicit EventClassOntology(std::vector<EventClass> classes) : classes_(std::move(classes))
    {
        std::vector<DatasetIssue> issues;
        for (std::size_t i = 0; i < classes_.size(); ++i) {
            if (classes_[i].id.empty()) issues.push_back({"", 0, "empty class id"});
            else if (!index_.emplace(classes_[i].id, i).second)
                issues.push_back({"", 0, "duplicate class '" + classes_[i].id + "'"});
        }
        for (const auto& c : classes_)
            if (c.parent && !index_.contains(*c.parent))
                issues.push_back({"", 0, "class '" + c.id + "' has unknown parent '" + *c.parent + "'"});
        if (!issues.empty()) throw IntegrityError(std::move(issues));

        for (const auto& c : classes_) {
            // A chain longer than the class count must revisit a class.
            std::size_t steps = 0;
            for (auto p = c.parent; p; p = classes_[index_.at(*p)].parent) {
                if (++steps > classes_.size()) {
                    issues.push_back({"", 0, "class '" + c.id + "' is part of a parent cycle"});
                    break;
                }
            }
        }
        if (!issues.empty()) throw IntegrityError(std::move(issues));
    }

    bool contains(std::string_view id) const { return index_.find(id) != index_.end(); }
    std::span<const EventClass> classes() const noexcept { return classes_; }
    std::size_t size() const noexcept { return classes_.size(); }

    const EventClass& at(std::string_view id) const
    {
        auto it = index_.find(id);
        if (it == index_.end()) throw UnknownClass(std::string(id));
        return classes_[it->second];
    }

    bool is_subclass_of(std::string_view child, std::string_view ancestor) const
    {
        const EventClass* c = &at(child);
        at(ancestor);
        for (;;) {
            if (c->id == ancestor) return true;
            if (!c->parent) return false;
            c = &at(*c->parent);
        }
    }

    /// Icon of the nearest ancestor-or-self with an explicit mapping.
    IconCategory icon_for(std::string_view event_class) const
    {
        for (const EventClass* c = &at(event_class);; c = &at(*c->parent)) {
            if (c->icon) return *c->icon;
            if (!c->parent) return IconCategory::Generic;
        }
    }

    friend bool operator==(const EventClassOntology& a, const EventClassOntology& b)
    {
        return a.classes_ == b.classes_;
    }

private:
    std::vector<EventClass> classes_;
    std::map<std::string, std::size_t, std::less<>> index_;
};

// ---------------------------------------------------------------------------
// Graph

/// Immutable knowledge graph with subject and object adjacency indexes.
/// Entities and triples keep load order; every lookup result is ordered by
/// that order.
class KnowledgeGraph {
public:
    KnowledgeGraph() = default;

    /// Validates referential integrity and entity invariants; throws
    /// IntegrityError listing every problem found.
    KnowledgeGraph(std::vector<Entity> entities, std::vector<Triple> triples, EventClassOntology ontology)
        : entities_(std::move(entities)), triples_(std::move(triples)), ontology_(std::move(ontology))
    {
        std::vector<DatasetIssue> issues;
        for (std::size_t i = 0; i < entities_.size(); ++i) {
            const auto& e = entities_[i];
            if (!index_.emplace(e.id.str(), i).second)
                issues.push_back({"", 0, "duplicate entity id '" + e.id.str() + "'"});
            for (auto& problem : entity_problems(e)) issues.push_back({"", 0, e.id.str() + ": " + problem});
            if (e.event_class && !ontology_.contains(*e.event_class))
                issues.push_back({"", 0, e.id.str() + ": unknown event class '" + *e.event_class + "'"});
        }

        by_subject_.resize(entities_.size());
        by_object_.resize(entities_.size());
        for (std::size_t t = 0; t < triples_.size(); ++t) {
            const auto& tr = triples_[t];
            auto s = index_.find(tr.subject.str());
            if (s == index_.end()) issues.push_back({"", 0, "dangling subject '" + tr.subject.str() + "'"});
            else by_subject_[s->second].push_back(t);
            if (tr.object_is_entity) {
                auto o = index_.find(tr.object);
                if (o == index_.end()) issues.push_back({"", 0, "dangling object '" + tr.object + "'"});
                else by_object_[o->second].push_back(t);
            }
            if (!ordered(tr.valid_from, tr.valid_to))
                issues.push_back({"", 0, "triple " + std::to_string(t) + ": valid_from is after valid_to"});
        }
        if (!issues.empty()) throw IntegrityError(std::move(issues));
    }

    std::span<const Entity> entities() const noexcept { return entities_; }
    std::span<const Triple> triples() const noexcept { return triples_; }
    const EventClassOntology& ontology() const noexcept { return ontology_; }

    const Entity* find(std::string_view id) const
    {
        auto it = index_.find(id);
        return it == index_.end() ? nullptr : &entities_[it->second];
    }

    const Entity& entity(std::string_view id) const
    {
        if (auto* e = find(id)) return *e;
        throw UnknownEntity(std::string(id));
    }
    const Entity& entity(const EntityId& id) const { return entity(std::string_view(id.str())); }

    bool contains(const EntityId& id) const { return find(id.str()) != nullptr; }

    /// Indexes of every triple with `id` as subject or entity object, in
    /// load order, without duplicates.
    std::vector<std::size_t> neighbor_indexes(const EntityId& id) const
    {
        const std::size_t pos = position(id);
        const auto& subj = by_subject_[pos];
        const auto& obj = by_object_[pos];
        std::vector<std::size_t> out;
        out.reserve(subj.size() + obj.size());
        std::set_union(subj.begin(), subj.end(), obj.begin(), obj.end(), std::back_inserter(out));
        return out;
    }

    std::vector<const Triple*> neighbors(const EntityId& id) const
    {
        std::vector<const Triple*> out;
        for (auto t : neighbor_indexes(id)) out.push_back(&triples_[t]);
        return out;
    }

    std::span<const std::size_t> triples_by_subject(const EntityId& id) const { return by_subject_[position(id)]; }
    std::span<const std::size_t> triples_by_object(const EntityId& id) const { return by_object_[position(id)]; }

    /// Icon for an event entity; generic for events without a class.
    IconCategory icon_for(const Entity& event) const
    {
        return event.event_class ? ontology_.icon_for(*event.event_class) : IconCategory::Generic;
    }

    friend bool operator==(const KnowledgeGraph& a, const KnowledgeGraph& b)
    {
        return a.entities_ == b.entities_ && a.triples_ == b.triples_ && a.ontology_ == b.ontology_;
    }

private:
    std::size_t position(const EntityId& id) const
    {
        auto it = index_.find(id.str());
        if (it == index_.end()) throw UnknownEntity(id.str());
        return it->second;
    }

    std::vector<Entity> entities_;
    std::vector<Triple> triples_;
    EventClassOntology ontology_;
    std::map<std::string, std::size_t, std::less<>> index_;
    std::vector<std::vector<std::size_t>> by_subject_;
    std::vector<std::vector<std::size_t>> by_object_;
};

}  // namespace konnect
