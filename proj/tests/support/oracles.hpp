#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "konnect/konnect.hpp"

namespace konnect::test {

// Brute-force oracles. Each one rescans the full triple list and shares no
// code with the indexed implementation.

/// (event, predicate) pairs linking `p` to an event, in triple order.
inline std::vector<std::pair<std::string, std::string>> scan_events_of(const KnowledgeGraph& g, const EntityId& p)
{
    std::vector<std::pair<std::string, std::string>> out;
    auto add = [&](const std::string& event, const std::string& predicate) {
        const Entity* e = g.find(event);
        if (!e || e->kind != EntityKind::Event) return;
        std::pair<std::string, std::string> item{event, predicate};
        if (std::find(out.begin(), out.end(), item) == out.end()) out.push_back(item);
    };
    for (const auto& t : g.triples()) {
        if (!t.object_is_entity) continue;
        if (t.subject == p) add(t.object, t.predicate);
        else if (t.object == p.str()) add(t.subject.str(), t.predicate);
    }
    return out;
}

/// event -> participating persons, for events linked to at least two.
inline std::map<std::string, std::set<std::string>> scan_shared_sets(const KnowledgeGraph& g,
                                                                     const std::vector<EntityId>& persons)
{
    std::map<std::string, std::set<std::string>> who;
    for (const auto& p : persons)
        for (const auto& [event, predicate] : scan_events_of(g, p)) who[event].insert(p.str());
    std::map<std::string, std::set<std::string>> out;
    for (auto& [event, people] : who)
        if (people.size() >= 2) out[event] = people;
    return out;
}

/// Shared events as (event, participants in query order), ranked by
/// participant count, then mention count, then id.
inline std::vector<std::pair<std::string, std::vector<std::string>>> scan_shared(const KnowledgeGraph& g,
                                                                                 const std::vector<EntityId>& persons)
{
    std::vector<std::pair<std::string, std::vector<std::string>>> out;
    for (const auto& [event, people] : scan_shared_sets(g, persons)) {
        std::vector<std::string> ordered;
        for (const auto& p : persons)
            if (people.count(p.str()) && std::find(ordered.begin(), ordered.end(), p.str()) == ordered.end())
                ordered.push_back(p.str());
        out.emplace_back(event, ordered);
    }
    std::sort(out.begin(), out.end(), [&](const auto& a, const auto& b) {
        if (a.second.size() != b.second.size()) return a.second.size() > b.second.size();
        const auto ma = g.entity(a.first).mention_count;
        const auto mb = g.entity(b.first).mention_count;
        if (ma != mb) return ma > mb;
        return a.first < b.first;
    });
    return out;
}

/// (subject, predicate, object) for triples between two distinct queried
/// persons, in triple order.
inline std::vector<std::tuple<std::string, std::string, std::string>> scan_relations(
    const KnowledgeGraph& g, const std::vector<EntityId>& persons)
{
    std::set<std::string> members;
    for (const auto& p : persons) members.insert(p.str());
    std::vector<std::tuple<std::string, std::string, std::string>> out;
    for (const auto& t : g.triples())
        if (t.object_is_entity && t.object != t.subject.str() && members.count(t.subject.str()) &&
            members.count(t.object))
            out.emplace_back(t.subject.str(), t.predicate, t.object);
    return out;
}

/// First-fit row assignment that checks a candidate row against every
/// interval already placed in it, not only the last one.
inline std::vector<std::size_t> first_fit_rows(const std::vector<TimelineItem>& items)
{
    std::vector<std::size_t> order(items.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = items[a];
        const auto& y = items[b];
        if (x.first_day != y.first_day) return x.first_day < y.first_day;
        const auto dx = x.last_day - x.first_day;
        const auto dy = y.last_day - y.first_day;
        if (dx != dy) return dx > dy;
        if (x.key != y.key) return x.key < y.key;
        return x.tiebreak < y.tiebreak;
    });
    std::vector<std::vector<std::size_t>> rows;
    std::vector<std::size_t> out(items.size());
    for (auto i : order) {
        std::size_t r = 0;
        for (; r < rows.size(); ++r) {
            const bool free = std::all_of(rows[r].begin(), rows[r].end(), [&](std::size_t j) {
                return items[j].last_day < items[i].first_day || items[i].last_day < items[j].first_day;
            });
            if (free) break;
        }
        if (r == rows.size()) rows.emplace_back();
        rows[r].push_back(i);
        out[i] = r;
    }
    return out;
}

/// True when no two items in the same row share a day.
inline bool rows_disjoint(const std::vector<TimelineItem>& items, const std::vector<std::size_t>& rows)
{
    for (std::size_t i = 0; i < items.size(); ++i)
        for (std::size_t j = i + 1; j < items.size(); ++j)
            if (rows[i] == rows[j] &&
                !(items[i].last_day < items[j].first_day || items[j].last_day < items[i].first_day))
                return false;
    return true;
}

}  // namespace konnect::test
