#pragma once

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "konnect/errors.hpp"
#include "konnect/kg.hpp"
#include "konnect/text.hpp"

namespace konnect {

/// Locations of the files that make up a dataset.
struct DatasetManifest {
    std::filesystem::path entities_path;
    std::filesystem::path triples_path;
    std::filesystem::path ontology_path;
    std::optional<std::filesystem::path> embeddings_path;
    std::optional<std::filesystem::path> stopwords_path;

    /// Standard layout: entities.tsv, triples.tsv, ontology.tsv and the
    /// optional embeddings.tsv / stopwords.txt when present.
    static DatasetManifest from_directory(const std::filesystem::path& dir)
    {
        DatasetManifest m{dir / "entities.tsv", dir / "triples.tsv", dir / "ontology.tsv", std::nullopt,
                          std::nullopt};
        if (std::filesystem::exists(dir / "embeddings.tsv")) m.embeddings_path = dir / "embeddings.tsv";
        if (std::filesystem::exists(dir / "stopwords.txt")) m.stopwords_path = dir / "stopwords.txt";
        return m;
    }
};

namespace tsv {

inline const std::vector<std::string>& entity_columns()
{
    static const std::vector<std::string> cols = {"id",    "kind",  "label", "aliases", "birth",
                                                  "death", "start", "end",   "lat",     "lon",
                                                  "event_class", "mention_count", "wikipedia_url"};
    return cols;
}

inline const std::vector<std::string>& triple_columns()
{
    static const std::vector<std::string> cols = {"subject", "predicate", "object", "object_is_entity",
                                                  "valid_from", "valid_to"};
    return cols;
}

inline const std::vector<std::string>& ontology_columns()
{
    static const std::vector<std::string> cols = {"class", "parent", "icon"};
    return cols;
}

struct Row {
    std::size_t line;
    std::vector<std::string> fields;
};

inline std::vector<std::string> split(std::string_view line, char sep)
{
    std::vector<std::string> out;
    std::size_t begin = 0;
    for (;;) {
        auto pos = line.find(sep, begin);
        out.emplace_back(line.substr(begin, pos - begin));
        if (pos == std::string_view::npos) break;
        begin = pos + 1;
    }
    return out;
}

/// Reads a headered TSV file. Blank lines are skipped; rows with the wrong
/// column count or invalid UTF-8 become issues.
inline std::vector<Row> read(const std::filesystem::path& path, const std::vector<std::string>& header,
                             std::vector<DatasetIssue>& issues)
{
    const std::string file = path.filename().string();
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        issues.push_back({file, 0, "cannot open " + path.string()});
        return {};
    }
    std::vector<Row> rows;
    std::string line;
    std::size_t number = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++number;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!text::is_valid_utf8(line)) {
            issues.push_back({file, number, "invalid UTF-8"});
            continue;
        }
        if (!saw_header) {
            saw_header = true;
            if (split(line, '\t') != header) issues.push_back({file, number, "unexpected header"});
            continue;
        }
        if (line.empty()) continue;
        auto fields = split(line, '\t');
        if (fields.size() != header.size()) {
            issues.push_back({file, number,
                              "expected " + std::to_string(header.size()) + " columns, found " +
                                  std::to_string(fields.size())});
            continue;
        }
        rows.push_back({number, std::move(fields)});
    }
    if (!saw_header) issues.push_back({file, 1, "missing header"});
    return rows;
}

inline std::string format_double(double v)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

inline std::optional<double> parse_double(std::string_view s)
{
    double v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace tsv

namespace ingest_detail {

struct FieldReader {
    const std::string& file;
    const tsv::Row& row;
    std::vector<DatasetIssue>& issues;
    bool ok = true;

    void fail(const std::string& reason)
    {
        issues.push_back({file, row.line, reason});
        ok = false;
    }

    std::optional<PartialDate> date(std::size_t col, const char* name)
    {
        const auto& s = row.fields[col];
        if (s.empty()) return std::nullopt;
        auto d = PartialDate::parse(s);
        if (!d) fail(std::string("malformed ") + name + " date '" + s + "'");
        return d;
    }

    std::optional<std::string> optional_string(std::size_t col)
    {
        const auto& s = row.fields[col];
        return s.empty() ? std::nullopt : std::optional<std::string>(s);
    }
};

}  // namespace ingest_detail

struct ParsedEntity {
    std::size_t line;
    Entity entity;
};

/// Parses entities.tsv rows into entities, recording issues.
inline std::vector<ParsedEntity> parse_entities(const std::vector<tsv::Row>& rows, const std::string& file,
                                                std::vector<DatasetIssue>& issues)
{
    std::vector<ParsedEntity> out;
    std::set<std::string, std::less<>> seen;
    for (const auto& row : rows) {
        ingest_detail::FieldReader r{file, row, issues};
        const auto& f = row.fields;
        if (!EntityId::is_valid(f[0])) {
            r.fail("invalid entity id '" + f[0] + "'");
            continue;
        }
        if (!seen.insert(f[0]).second) r.fail("duplicate entity id '" + f[0] + "'");
        auto kind = parse_entity_kind(f[1]);
        if (!kind) r.fail("unknown kind '" + f[1] + "'");

        Entity e{EntityId(f[0])};
        e.kind = kind.value_or(EntityKind::Other);
        e.label = f[2];
        for (auto& alias : tsv::split(f[3], '|'))
            if (!alias.empty()) e.aliases.push_back(std::move(alias));
        e.birth = r.date(4, "birth");
        e.death = r.date(5, "death");
        e.start = r.date(6, "start");
        e.end = r.date(7, "end");
        if (!f[8].empty() || !f[9].empty()) {
            auto lat = tsv::parse_double(f[8]);
            auto lon = tsv::parse_double(f[9]);
            if (!lat || !lon) r.fail("location needs both numeric lat and lon");
            else e.location = GeoPoint{*lat, *lon};
        }
        e.event_class = r.optional_string(10);
        if (!f[11].empty()) {
            std::int64_t count = 0;
            auto [ptr, ec] = std::from_chars(f[11].data(), f[11].data() + f[11].size(), count);
            if (ec != std::errc{} || ptr != f[11].data() + f[11].size()) r.fail("malformed mention_count '" + f[11] + "'");
            e.mention_count = count;
        }
        e.wikipedia_url = r.optional_string(12);
        if (r.ok)
            for (const auto& problem : entity_problems(e)) r.fail(problem);
        if (r.ok) out.push_back({row.line, std::move(e)});
    }
    return out;
}

struct ParsedTriple {
    std::size_t line;
    Triple triple;
};

inline std::vector<ParsedTriple> parse_triples(const std::vector<tsv::Row>& rows, const std::string& file,
                                               std::vector<DatasetIssue>& issues)
{
    std::vector<ParsedTriple> out;
    for (const auto& row : rows) {
        ingest_detail::FieldReader r{file, row, issues};
        const auto& f = row.fields;
        if (!EntityId::is_valid(f[0])) {
            r.fail("invalid subject id '" + f[0] + "'");
            continue;
        }
        if (f[1].empty()) r.fail("empty predicate");
        if (f[2].empty()) r.fail("empty object");
        if (f[3] != "0" && f[3] != "1") r.fail("object_is_entity must be 0 or 1");
        const bool is_entity = f[3] == "1";
        if (is_entity && !f[2].empty() && !EntityId::is_valid(f[2])) r.fail("invalid object id '" + f[2] + "'");
        Triple t{EntityId(f[0]), f[1], f[2], is_entity, r.date(4, "valid_from"), r.date(5, "valid_to")};
        if (!ordered(t.valid_from, t.valid_to)) r.fail("valid_from is after valid_to");
        if (r.ok) out.push_back({row.line, std::move(t)});
    }
    return out;
}

struct ParsedClass {
    std::size_t line;
    EventClass cls;
};

inline std::vector<ParsedClass> parse_ontology(const std::vector<tsv::Row>& rows, const std::string& file,
                                               std::vector<DatasetIssue>& issues)
{
    std::vector<ParsedClass> out;
    std::set<std::string, std::less<>> seen;
    for (const auto& row : rows) {
        ingest_detail::FieldReader r{file, row, issues};
        const auto& f = row.fields;
        if (f[0].empty()) r.fail("empty class id");
        else if (!seen.insert(f[0]).second) r.fail("duplicate class '" + f[0] + "'");
        EventClass c{f[0], r.optional_string(1), std::nullopt};
        if (!f[2].empty()) {
            c.icon = parse_icon(f[2]);
            if (!c.icon) r.fail("unknown icon '" + f[2] + "'");
        }
        if (r.ok) out.push_back({row.line, std::move(c)});
    }
    return out;
}

/// Loads and validates a dataset. Parse problems in all three files are
/// collected and thrown together as ParseError; dangling references are then
/// collected and thrown together as IntegrityError.
inline KnowledgeGraph load_dataset(const DatasetManifest& manifest)
{
    std::vector<DatasetIssue> issues;
    const auto ent_file = manifest.entities_path.filename().string();
    const auto tri_file = manifest.triples_path.filename().string();
    const auto ont_file = manifest.ontology_path.filename().string();

    auto entities = parse_entities(tsv::read(manifest.entities_path, tsv::entity_columns(), issues), ent_file, issues);
    auto triples = parse_triples(tsv::read(manifest.triples_path, tsv::triple_columns(), issues), tri_file, issues);
    auto classes = parse_ontology(tsv::read(manifest.ontology_path, tsv::ontology_columns(), issues), ont_file, issues);
    if (!issues.empty()) throw ParseError(std::move(issues));

    std::set<std::string, std::less<>> class_ids;
    for (const auto& c : classes) class_ids.insert(c.cls.id);
    for (const auto& c : classes)
        if (c.cls.parent && !class_ids.contains(*c.cls.parent))
            issues.push_back({ont_file, c.line, "unknown parent class '" + *c.cls.parent + "'"});

    std::set<std::string, std::less<>> entity_ids;
    for (const auto& [line, e] : entities) {
        entity_ids.insert(e.id.str());
        if (e.event_class && !class_ids.contains(*e.event_class))
            issues.push_back({ent_file, line, "unknown event class '" + *e.event_class + "'"});
    }
    for (const auto& t : triples) {
        if (!entity_ids.contains(t.triple.subject.str()))
            issues.push_back({tri_file, t.line, "unknown subject entity '" + t.triple.subject.str() + "'"});
        if (t.triple.object_is_entity && !entity_ids.contains(t.triple.object))
            issues.push_back({tri_file, t.line, "unknown object entity '" + t.triple.object + "'"});
    }
    if (!issues.empty()) throw IntegrityError(std::move(issues));

    std::vector<EventClass> cls;
    cls.reserve(classes.size());
    for (auto& c : classes) cls.push_back(std::move(c.cls));
    std::vector<Entity> ent;
    ent.reserve(entities.size());
    for (auto& e : entities) ent.push_back(std::move(e.entity));
    std::vector<Triple> tri;
    tri.reserve(triples.size());
    for (auto& t : triples) tri.push_back(std::move(t.triple));
    EventClassOntology ontology(std::move(cls));  // still checks for parent cycles
    return KnowledgeGraph(std::move(ent), std::move(tri), std::move(ontology));
}

/// Stopword file: one lowercase word per line; blank lines and '#' comments
/// are ignored.
inline std::set<std::string, std::less<>> load_stopwords(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError({{path.filename().string(), 0, "cannot open " + path.string()}});
    std::set<std::string, std::less<>> out;
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == ' ' || line.back() == '\t')) line.pop_back();
        auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos || line[first] == '#') continue;
        out.insert(line.substr(first));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Warnings

enum class WarningKind { PersonWithoutBirth, EventWithoutStart, EventWithoutEnd, EventWithoutLocation };

constexpr std::string_view to_string(WarningKind kind)
{
    switch (kind) {
    case WarningKind::PersonWithoutBirth: return "person_without_birth";
    case WarningKind::EventWithoutStart: return "event_without_start";
    case WarningKind::EventWithoutEnd: return "event_without_end";
    case WarningKind::EventWithoutLocation: return "event_without_location";
    }
    return "";
}

struct Warning {
    WarningKind kind;
    EntityId entity;
    std::string message;

    friend bool operator==(const Warning&, const Warning&) = default;
};

/// Non-fatal data gaps, in entity load order.
inline std::vector<Warning> validate_graph(const KnowledgeGraph& graph)
{
    std::vector<Warning> out;
    for (const auto& e : graph.entities()) {
        if (e.is_person() && !e.birth)
            out.push_back({WarningKind::PersonWithoutBirth, e.id, e.label + " has no birth date"});
        if (!e.is_event()) continue;
        if (!e.start) out.push_back({WarningKind::EventWithoutStart, e.id, e.label + " has no start date"});
        else if (!e.end) out.push_back({WarningKind::EventWithoutEnd, e.id, e.label + " has no end date"});
        if (!e.location)
            out.push_back({WarningKind::EventWithoutLocation, e.id, e.label + " has no coordinates"});
    }
    return out;
}

// ---------------------------------------------------------------------------
// Writing

/// Writes the graph back in the same three TSV formats load_dataset reads.
inline void write_dataset(const KnowledgeGraph& graph, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    auto join = [](const std::vector<std::string>& parts, char sep) {
        std::string out;
        for (std::size_t i = 0; i < parts.size(); ++i) {
            if (i) out += sep;
            out += parts[i];
        }
        return out;
    };
    auto date = [](const std::optional<PartialDate>& d) { return d ? d->to_string() : std::string(); };

    std::ofstream ent(dir / "entities.tsv", std::ios::binary);
    ent << join(tsv::entity_columns(), '\t') << '\n';
    for (const auto& e : graph.entities()) {
        std::vector<std::string> f = {e.id.str(),
                                      std::string(to_string(e.kind)),
                                      e.label,
                                      join(e.aliases, '|'),
                                      date(e.birth),
                                      date(e.death),
                                      date(e.start),
                                      date(e.end),
                                      e.location ? tsv::format_double(e.location->latitude) : "",
                                      e.location ? tsv::format_double(e.location->longitude) : "",
                                      e.event_class.value_or(""),
                                      std::to_string(e.mention_count),
                                      e.wikipedia_url.value_or("")};
        ent << join(f, '\t') << '\n';
    }

    std::ofstream tri(dir / "triples.tsv", std::ios::binary);
    tri << join(tsv::triple_columns(), '\t') << '\n';
    for (const auto& t : graph.triples())
        tri << join({t.subject.str(), t.predicate, t.object, t.object_is_entity ? "1" : "0", date(t.valid_from),
                     date(t.valid_to)},
                    '\t')
            << '\n';

    std::ofstream ont(dir / "ontology.tsv", std::ios::binary);
    ont << join(tsv::ontology_columns(), '\t') << '\n';
    for (const auto& c : graph.ontology().classes())
        ont << join({c.id, c.parent.value_or(""), c.icon ? std::string(to_string(*c.icon)) : ""}, '\t') << '\n';
}

}  // namespace konnect
