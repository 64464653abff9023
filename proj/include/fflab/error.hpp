#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fflab {

enum class Errc {
  domain_overflow,
  domain_mismatch,
  division_by_zero,
  unsupported,
  resource_bound,
  pattern_mismatch,
  ineligible,
  infeasible_generator,
  parse,
  invalid_argument,
  io,
};

inline std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::domain_overflow: return "domain-overflow";
    case Errc::domain_mismatch: return "domain-mismatch";
    case Errc::division_by_zero: return "division-by-zero";
    case Errc::unsupported: return "unsupported-operation";
    case Errc::resource_bound: return "resource-bound";
    case Errc::pattern_mismatch: return "pattern-mismatch";
    case Errc::ineligible: return "ineligible-polynomial";
    case Errc::infeasible_generator: return "infeasible-generator";
    case Errc::parse: return "parse";
    case Errc::invalid_argument: return "invalid-argument";
    case Errc::io: return "io";
  }
  return "unknown";
}

/// Every library failure is reported through this one exception type; code()
/// gives the category.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace fflab
