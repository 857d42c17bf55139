#pragma once

#include <stdexcept>
#include <string>

namespace corona {

enum class ErrorKind {
  geometry,
  hypothesis,
  degenerate,
  excluded_point,
  not_unimodular,
  inconsistent_input,
  construction,
  sign_violation,
  grid_too_small,
  ill_conditioned,
  interpolation,
  tolerance,
  parse,
  io,
};

inline const char* kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::geometry: return "geometry";
    case ErrorKind::hypothesis: return "hypothesis";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::excluded_point: return "excluded-point";
    case ErrorKind::not_unimodular: return "not-unimodular";
    case ErrorKind::inconsistent_input: return "inconsistent-input";
    case ErrorKind::construction: return "construction";
    case ErrorKind::sign_violation: return "sign-violation";
    case ErrorKind::grid_too_small: return "grid-too-small";
    case ErrorKind::ill_conditioned: return "ill-conditioned";
    case ErrorKind::interpolation: return "interpolation";
    case ErrorKind::tolerance: return "tolerance";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace corona
