#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nafas {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnknownProgram : Error {
    explicit UnknownProgram(std::string id)
        : Error("unknown program '" + id + "'"), program_id(std::move(id)) {}
    std::string program_id;
};

struct UnknownLevel : Error {
    explicit UnknownLevel(std::string text)
        : Error("unknown level '" + text + "' (expected beginner/medium/advanced or b/m/a)"),
          token(std::move(text)) {}
    std::string token;
};

struct InvalidSpec : Error {
    explicit InvalidSpec(std::vector<std::string> problems)
        : Error(join(problems)), violations(std::move(problems)) {}
    std::vector<std::string> violations;

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out = "invalid level spec";
        for (const auto& s : v) {
            out += "; ";
            out += s;
        }
        return out;
    }
};

// Custom program file errors. ParseError covers syntax and schema problems,
// ValidationError carries the per-program violation list, DuplicateId the
// colliding id.
struct ParseError : Error {
    ParseError(std::string message, std::string where)
        : Error("parse error at " + where + ": " + message), location(std::move(where)) {}
    std::string location;
};

struct ValidationError : Error {
    ValidationError(std::string id, std::vector<std::string> problems)
        : Error(make_message(id, problems)),
          program_id(std::move(id)),
          violations(std::move(problems)) {}
    std::string program_id;
    std::vector<std::string> violations;

private:
    static std::string make_message(const std::string& id, const std::vector<std::string>& v) {
        std::string out = "invalid custom program '" + id + "'";
        for (const auto& s : v) {
            out += ": ";
            out += s;
        }
        return out;
    }
};

struct DuplicateId : Error {
    explicit DuplicateId(std::string id)
        : Error("duplicate program id '" + id + "'"), program_id(std::move(id)) {}
    std::string program_id;
};

struct UsageError : Error {
    explicit UsageError(std::string offending)
        : Error("invalid usage: '" + offending + "'"), token(std::move(offending)) {}
    std::string token;
};

struct ClockFailure : Error {
    using Error::Error;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace nafas
