#pragma once

#include <stdexcept>
#include <string>

namespace shaforge {

// Base for every library error. Subclasses name the failure mode; the
// message carries the offending values and, for budget errors, the name of
// the bound to raise.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// arith
struct ZeroInput : Error { using Error::Error; };
struct FactorizationLimitExceeded : Error { using Error::Error; };

// localfield
struct PrecisionExhausted : Error { using Error::Error; };

// brauer
struct ParityViolation : Error { using Error::Error; };

// curve
struct PointNotOnCurve : Error { using Error::Error; };
struct DegenerateImage : Error { using Error::Error; };
struct SaturationFailure : Error { using Error::Error; };

// obstruction
struct NoSolution : Error { using Error::Error; };
struct AmbiguousBeyondShift : Error { using Error::Error; };
struct InconsistentCandidates : Error { using Error::Error; };

// construct
struct SearchExhausted : Error { using Error::Error; };
struct EmptyOptionSet : Error { using Error::Error; };
struct PoolExhausted : Error { using Error::Error; };
struct NoCompatibleD : Error { using Error::Error; };

// certio / cli
struct ParseError : Error { using Error::Error; };
struct VerificationFailure : Error { using Error::Error; };

}  // namespace shaforge
