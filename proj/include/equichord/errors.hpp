#pragma once

#include <stdexcept>
#include <string>

namespace equichord {

enum class ErrorKind {
  InvalidArgument,
  DegenerateFit,
  UnsupportedBody,
  EmptySection,
  InconsistentContainment,
  Parse,
};

const char* to_string(ErrorKind kind);

/// Base of every error raised by the library. The kind is stable and is what
/// the CLI maps to diagnostics and exit codes.
class GeometryError : public std::runtime_error {
 public:
  GeometryError(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw GeometryError(kind, what);
}

inline void require(bool cond, const std::string& what) {
  if (!cond) fail(ErrorKind::InvalidArgument, what);
}

}  // namespace equichord
