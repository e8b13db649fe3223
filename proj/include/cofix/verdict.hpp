#pragma once

#include <string>

#include "cofix/errors.hpp"

namespace cofix {

/// Outcome of a check. Failing verdicts always carry the violating location
/// and the identifier of the violated condition.
struct Verdict {
    enum class Status { Pass, Fail, Error };

    Status status = Status::Pass;
    std::string location;   // node id, state, or constructor name
    std::string condition;  // violated clause identifier
    std::string detail;     // human-readable explanation
    std::string confidence; // "theorem-backed" or "bounded(H)"

    static std::string bounded(std::size_t height) {
        return "bounded(" + std::to_string(height) + ")";
    }

    static Verdict pass(std::string detail, std::string confidence = "theorem-backed") {
        return Verdict{Status::Pass, "", "", std::move(detail), std::move(confidence)};
    }

    static Verdict fail(std::string location, std::string condition, std::string detail,
                        std::string confidence = "theorem-backed") {
        if (location.empty() || condition.empty())
            throw Error("fail verdicts must name a location and a condition");
        return Verdict{Status::Fail, std::move(location), std::move(condition), std::move(detail),
                       std::move(confidence)};
    }

    static Verdict error(std::string detail) {
        return Verdict{Status::Error, "", "", std::move(detail), ""};
    }

    bool passed() const { return status == Status::Pass; }
    bool failed() const { return status == Status::Fail; }

    /// CLI contract: pass 0, fail 1, error 2.
    int exit_code() const {
        switch (status) {
        case Status::Pass: return 0;
        case Status::Fail: return 1;
        case Status::Error: return 2;
        }
        return 2;
    }

    std::string status_str() const {
        switch (status) {
        case Status::Pass: return "pass";
        case Status::Fail: return "fail";
        case Status::Error: return "error";
        }
        return "error";
    }
};

} // namespace cofix
