#pragma once

#include <string_view>

// Template wordings for chat answers. Bump kTemplateVersion whenever a
// string changes; golden tests pin the rendered output.

namespace konnect::strings {

inline constexpr std::string_view kTemplateVersion = "1";

// {names}
inline constexpr std::string_view kNoOverlap =
    "Unfortunately, no event was found with temporal overlap between the queried persons ({names}).";
// {count} {noun} {names}
inline constexpr std::string_view kSharedCount = "I identified {count} shared {noun} for {names}.";
inline constexpr std::string_view kEventSingular = "event";
inline constexpr std::string_view kEventPlural = "events";

// {names} {events}
inline constexpr std::string_view kFrameProfessional = "{names} worked together at: {events}.";
inline constexpr std::string_view kFramePersonal = "{names} share personal milestones including: {events}.";
inline constexpr std::string_view kFrameGeneral = "{names} are connected through: {events}.";

// {subject} {predicate} {object} {period}
inline constexpr std::string_view kRelationsLead = "Direct relations:";
inline constexpr std::string_view kRelation = "{subject} ({predicate}: {object}){period}";
inline constexpr std::string_view kPeriodBoth = " from {from} to {to}";
inline constexpr std::string_view kPeriodFrom = " since {from}";
inline constexpr std::string_view kPeriodTo = " until {to}";

inline constexpr std::string_view kHedge =
    "Note that being linked to the same event suggests, but does not prove, that they met in person.";

// {name} {count} {noun}
inline constexpr std::string_view kSinglePerson =
    "{name} is linked to {count} {noun} in the knowledge graph. Name at least two persons to look for shared "
    "events.";

}  // namespace konnect::strings
