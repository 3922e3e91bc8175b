#pragma once

#include <stdexcept>
#include <string>

namespace opennca {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define OPENNCA_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                        \
   public:                                                           \
    using Error::Error;                                              \
    const char* kind() const noexcept override { return #Name; }     \
  };

OPENNCA_DEFINE_ERROR(DimensionError)
OPENNCA_DEFINE_ERROR(ModelError)
OPENNCA_DEFINE_ERROR(DomainError)
OPENNCA_DEFINE_ERROR(GridError)
OPENNCA_DEFINE_ERROR(ParseError)
OPENNCA_DEFINE_ERROR(StateError)
OPENNCA_DEFINE_ERROR(NumericsError)
OPENNCA_DEFINE_ERROR(IoError)

#undef OPENNCA_DEFINE_ERROR

/// Raised when the Dyson stepper produces non-finite or runaway entries.
class DivergenceError : public Error {
 public:
  DivergenceError(int step, const std::string& what)
      : Error("diverged at step " + std::to_string(step) + ": " + what), step_(step) {}
  const char* kind() const noexcept override { return "DivergenceError"; }
  int step() const noexcept { return step_; }

 private:
  int step_;
};

/// Invalid run configuration; `field` is the dotted JSON path.
class ConfigError : public Error {
 public:
  ConfigError(std::string field, std::string reason)
      : Error(field + ": " + reason), field_(std::move(field)), reason_(std::move(reason)) {}
  const char* kind() const noexcept override { return "ConfigError"; }
  const std::string& field() const noexcept { return field_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::string field_;
  std::string reason_;
};

}  // namespace opennca
