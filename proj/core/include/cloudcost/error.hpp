#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cloudcost/diagnostic.hpp"

namespace cloudcost {

// Base of every error the library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed text: JSON syntax, pattern grammar, CSV rows. `position` is a 0-based
// byte offset into the parsed text.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " (at offset " + std::to_string(position) + ")"), position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

// Well-formed document that does not follow the declared schema.
class SchemaError : public Error {
 public:
  SchemaError(const std::string& location, const std::string& message)
      : Error(location + ": " + message), location_(location) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

// A model element refers to an id that does not exist.
class ReferenceError : public Error {
 public:
  ReferenceError(std::string id, const std::string& message) : Error(message), id_(std::move(id)) {}

  const std::string& id() const noexcept { return id_; }

 private:
  std::string id_;
};

// Semantic invariant violations collected by a validator.
class ValidationError : public Error {
 public:
  explicit ValidationError(std::vector<Diagnostic> diagnostics)
      : Error(Summarize(diagnostics)), diagnostics_(std::move(diagnostics)) {}

  const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

 private:
  static std::string Summarize(const std::vector<Diagnostic>& diagnostics) {
    for (const auto& d : diagnostics) {
      if (d.severity == Severity::error) return d.path + ": " + d.message;
    }
    return "validation failed";
  }

  std::vector<Diagnostic> diagnostics_;
};

// A priced resource has no catalog rate. Never priced at zero.
class MissingRateError : public Error {
 public:
  MissingRateError(std::string key, const std::string& context)
      : Error("missing rate " + key + (context.empty() ? "" : " for " + context)), key_(std::move(key)) {}

  const std::string& key() const noexcept { return key_; }

 private:
  std::string key_;
};

// Numeric failure while evaluating a usage schedule (overflow to inf/nan).
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// Empty or reversed simulation window.
class WindowError : public Error {
 public:
  using Error::Error;
};

// Averaging a category that has no rated items.
class EmptyCategoryError : public Error {
 public:
  using Error::Error;
};

}  // namespace cloudcost
