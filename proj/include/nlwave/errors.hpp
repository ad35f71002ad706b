#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nlwave {

// Failure classification. Every thrown error carries one of these so the CLI
// can map outcomes to stable process exit codes and the run manifest can
// record what went wrong even when a run aborts.
enum class ErrorCode {
    validation,       // bad config / bad arguments / shape mismatch
    singular_mode,    // multipoint determinant below tolerance at some mode
    no_convergence,   // fixed-point iteration failed to contract
    blowup,           // solution norm escaped (reported as a status, see below)
    io,               // filesystem / serialization failure
    numeric,          // non-finite values, quadrature failure, overflow guards
};

inline const char* to_string(ErrorCode c) {
    switch (c) {
        case ErrorCode::validation:     return "validation";
        case ErrorCode::singular_mode:  return "singular_mode";
        case ErrorCode::no_convergence: return "no_convergence";
        case ErrorCode::blowup:         return "blowup";
        case ErrorCode::io:             return "io";
        case ErrorCode::numeric:        return "numeric";
    }
    return "unknown";
}

class SolverError : public std::runtime_error {
public:
    SolverError(ErrorCode code, const std::string& msg)
        : std::runtime_error(msg), code_(code) {}
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

// Escape of an iterate or solution past the overflow guard; carries the
// window-local time at which the escape was detected so continuation can
// turn it into a blowup-time estimate.
class BlowupError : public SolverError {
public:
    BlowupError(const std::string& msg, double t_local)
        : SolverError(ErrorCode::blowup, msg), t_local_(t_local) {}
    double t_local() const noexcept { return t_local_; }

private:
    double t_local_;
};

// Config validation reports every violation at once, not just the first.
class ValidationError : public SolverError {
public:
    explicit ValidationError(std::vector<std::string> problems)
        : SolverError(ErrorCode::validation, join(problems)),
          problems_(std::move(problems)) {}
    const std::vector<std::string>& problems() const noexcept { return problems_; }

private:
    static std::string join(const std::vector<std::string>& ps) {
        std::string s = "configuration invalid:";
        for (const auto& p : ps) { s += "\n  - "; s += p; }
        return s;
    }
    std::vector<std::string> problems_;
};

}  // namespace nlwave
