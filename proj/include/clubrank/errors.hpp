#pragma once

#include <stdexcept>
#include <string>

namespace clubrank {

// Base class for everything this library throws on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input files: carries the 1-based line number when known.
class ParseError : public Error {
public:
    ParseError(const std::string& what, long line = 0)
        : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}
    long line() const { return line_; }

private:
    long line_;
};

// Input that parses but violates a documented invariant.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A rating lookup failed while building a sample.
class UnresolvedRatingError : public Error {
public:
    UnresolvedRatingError(const std::string& team, const std::string& season)
        : Error("no rating for team '" + team + "' in season " + season),
          team_(team), season_(season) {}
    const std::string& team() const { return team_; }
    const std::string& season() const { return season_; }

private:
    std::string team_;
    std::string season_;
};

// A knockout leg without its pair (and without a single-leg flag).
class PairingError : public Error {
public:
    using Error::Error;
};

// Non-finite or otherwise out-of-domain numeric input.
class DomainError : public Error {
public:
    using Error::Error;
};

// Logistic fit diverging on (quasi-)separated data.
class SeparationError : public Error {
public:
    SeparationError(const std::string& what, std::string feature)
        : Error(what), feature_(std::move(feature)) {}
    const std::string& feature() const { return feature_; }

private:
    std::string feature_;
};

// Singular information matrix (collinear design).
class RankError : public Error {
public:
    using Error::Error;
};

// A quantity that is mathematically undefined for the given input.
class UndefinedValueError : public Error {
public:
    using Error::Error;
};

// Missing association membership or malformed configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

// The draw search exhausted every branch.
class InfeasibleDrawError : public Error {
public:
    using Error::Error;
};

}  // namespace clubrank
