#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace commitplan {

// Root of every exception thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Malformed or unsupported user input (files, names, parameters).
class InputError : public Error {
public:
    using Error::Error;
};

class PddlError : public InputError {
public:
    PddlError(const std::string& msg, std::size_t line, std::size_t column)
        : InputError(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
          line_(line), column_(column) {}

    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

class UnsupportedRequirementError : public PddlError {
public:
    UnsupportedRequirementError(const std::string& requirement, std::size_t line, std::size_t column)
        : PddlError("unsupported requirement " + requirement, line, column),
          requirement_(requirement) {}

    const std::string& requirement() const { return requirement_; }

private:
    std::string requirement_;
};

class JsonSchemaError : public InputError {
public:
    JsonSchemaError(const std::string& path, const std::string& msg)
        : InputError(path + ": " + msg), path_(path) {}

    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class PlanFileError : public InputError {
public:
    PlanFileError(std::size_t line, const std::string& msg)
        : InputError("plan line " + std::to_string(line) + ": " + msg), line_(line) {}

    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

class NameCollisionError : public InputError {
public:
    using InputError::InputError;
};

// A configured size guard tripped (ground actions, commit subsets, reachable states).
class LimitExceededError : public Error {
public:
    using Error::Error;
};

class InapplicableActionError : public Error {
public:
    InapplicableActionError(std::size_t step, const std::string& action, const std::string& reason)
        : Error("step " + std::to_string(step) + " (" + action + "): " + reason),
          step_(step), action_(action), reason_(reason) {}

    std::size_t step() const { return step_; }
    const std::string& action() const { return action_; }
    const std::string& reason() const { return reason_; }

private:
    std::size_t step_;
    std::string action_;
    std::string reason_;
};

class InvalidPlanError : public Error {
public:
    using Error::Error;
};

class CorruptProvenanceError : public Error {
public:
    using Error::Error;
};

class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace commitplan
