#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace hmckit {

// Raised when a position is evaluated outside the support of a target model.
class OutOfSupportError : public std::domain_error {
 public:
  explicit OutOfSupportError(const std::string& what) : std::domain_error(what) {}
};

// Raised by trajectory measurement helpers (reversibility, energy drift,
// Jacobian checks) when the integration leaves the support or produces
// non-finite values. Samplers never throw this: in a chain, divergence is a
// rejected proposal, not an error.
class TrajectoryDivergedError : public std::runtime_error {
 public:
  explicit TrajectoryDivergedError(const std::string& what) : std::runtime_error(what) {}
};

// Raised by diagnostics that need a non-constant series (autocorrelation,
// IAT) or a non-degenerate least squares fit.
class DegenerateSeriesError : public std::runtime_error {
 public:
  explicit DegenerateSeriesError(const std::string& what) : std::runtime_error(what) {}
};

// Raised by burn-in detection when no index qualifies or the series still
// trends at its end.
class NotConvergedError : public std::runtime_error {
 public:
  explicit NotConvergedError(const std::string& what) : std::runtime_error(what) {}
};

// Configuration problem in the harness. Carries the offending field name so
// the CLI can report it precisely.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error("config field '" + field + "': " + what),
        field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace hmckit
