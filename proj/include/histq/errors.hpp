#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace histq {

// Base class for all histq errors that describe bad user input or a
// failed engine precondition (as opposed to programming errors, which
// use std::invalid_argument / std::logic_error directly).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A structurally invalid object: non-unitary slot operator, incomplete
// frame, unnormalized state, dimension mismatch inside a Schedule, ...
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// A well-formed request the engine cannot honour: conditioning on an
// event of probability ~0, history budget exceeded, a query whose
// preconditions the schedule does not meet, ...
class EngineError : public Error {
public:
    explicit EngineError(const std::string& msg) : Error(msg) {}
};

// One parser diagnostic, positioned in the source text (1-based).
struct Diagnostic {
    int line = 0;
    int column = 0;
    std::string message;
};

// Scenario-file syntax/semantic failure; carries every diagnostic the
// parser collected so the CLI can print them all.
class ParseError : public Error {
public:
    explicit ParseError(std::vector<Diagnostic> diags)
        : Error(format(diags)), diagnostics_(std::move(diags)) {}

    const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

private:
    static std::string format(const std::vector<Diagnostic>& diags) {
        std::string out;
        for (const auto& d : diags) {
            if (!out.empty()) out += '\n';
            out += std::to_string(d.line) + ':' + std::to_string(d.column) + ": " + d.message;
        }
        return out.empty() ? std::string("parse error") : out;
    }

    std::vector<Diagnostic> diagnostics_;
};

} // namespace histq
