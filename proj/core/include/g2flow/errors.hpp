#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace g2flow {

struct NotPositiveError : std::runtime_error {
  explicit NotPositiveError(const std::string& what) : std::runtime_error(what) {}
};

struct NotClosedError : std::runtime_error {
  explicit NotClosedError(const std::string& what) : std::runtime_error(what) {}
};

struct DegreeOutOfRangeError : std::invalid_argument {
  explicit DegreeOutOfRangeError(const std::string& what) : std::invalid_argument(what) {}
};

struct AxisTooSmallError : std::invalid_argument {
  explicit AxisTooSmallError(const std::string& what) : std::invalid_argument(what) {}
};

// Positivity loss during a flow step; carries the first offending site.
struct LeftPositiveConeError : std::runtime_error {
  std::size_t site;
  LeftPositiveConeError(std::size_t site_, const std::string& what)
      : std::runtime_error(what), site(site_) {}
};

struct InsufficientDataError : std::invalid_argument {
  explicit InsufficientDataError(const std::string& what) : std::invalid_argument(what) {}
};

struct NotMonotoneError : std::invalid_argument {
  explicit NotMonotoneError(const std::string& what) : std::invalid_argument(what) {}
};

struct ScaleCollapseError : std::domain_error {
  explicit ScaleCollapseError(const std::string& what) : std::domain_error(what) {}
};

struct SpecMismatchError : std::runtime_error {
  explicit SpecMismatchError(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct IoError : std::runtime_error {
  explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace g2flow
