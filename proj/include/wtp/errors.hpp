#ifndef WTP_ERRORS_HPP
#define WTP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace wtp {

// Bad input: malformed specs, measures off the simplex, out-of-range levels.
class ValidationError : public std::invalid_argument {
 public:
  explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

// An enumeration or point-cloud request exceeded its configured budget.
class ResourceError : public std::runtime_error {
 public:
  explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

// A sampler claiming sub-additivity was caught violating it.
class SubadditivityError : public std::runtime_error {
 public:
  explicit SubadditivityError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wtp

#endif
