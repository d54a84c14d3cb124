#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace konnect {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownEntity : public Error {
public:
    explicit UnknownEntity(std::string id)
        : Error("unknown entity: " + id), id_(std::move(id)) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

class UnknownClass : public Error {
public:
    explicit UnknownClass(std::string id)
        : Error("unknown event class: " + id), id_(std::move(id)) {}
    const std::string& id() const noexcept { return id_; }

private:
    std::string id_;
};

/// One problem found while loading a dataset. `line` is 1-based and counts
/// the header row; 0 means the problem is not tied to a line.
struct DatasetIssue {
    std::string file;
    std::size_t line = 0;
    std::string reason;

    std::string to_string() const
    {
        std::string out = file.empty() ? std::string("<graph>") : file;
        if (line != 0) out += ":" + std::to_string(line);
        return out + ": " + reason;
    }
};

class DatasetError : public Error {
public:
    DatasetError(const char* kind, std::vector<DatasetIssue> issues)
        : Error(summarize(kind, issues)), issues_(std::move(issues)) {}
    const std::vector<DatasetIssue>& issues() const noexcept { return issues_; }

private:
    static std::string summarize(const char* kind, const std::vector<DatasetIssue>& issues)
    {
        std::string out = kind;
        out += " (" + std::to_string(issues.size()) + " issue" + (issues.size() == 1 ? "" : "s") + ")";
        for (const auto& issue : issues) out += "\n  " + issue.to_string();
        return out;
    }

    std::vector<DatasetIssue> issues_;
};

/// Malformed rows.
class ParseError : public DatasetError {
public:
    explicit ParseError(std::vector<DatasetIssue> issues)
        : DatasetError("parse error", std::move(issues)) {}
};

/// Dangling references or violated graph invariants.
class IntegrityError : public DatasetError {
public:
    explicit IntegrityError(std::vector<DatasetIssue> issues)
        : DatasetError("integrity error", std::move(issues)) {}
};

}  // namespace konnect
