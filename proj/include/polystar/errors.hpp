#ifndef POLYSTAR_ERRORS_HPP
#define POLYSTAR_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>

namespace polystar {

/// Numerical failure of an iterative procedure (bracketing, event location,
/// runaway integration). Distinct from a domain violation of the inputs.
class solver_error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs lie outside the validity region of an explicit bound. Carries the
/// name of the first violated condition so callers can report it.
class invalid_regime_error : public std::domain_error {
 public:
  invalid_regime_error(const std::string& what, std::string condition)
      : std::domain_error(what), condition_(std::move(condition)) {}

  const std::string& condition() const noexcept { return condition_; }

 private:
  std::string condition_;
};

}  // namespace polystar

#endif  // POLYSTAR_ERRORS_HPP
