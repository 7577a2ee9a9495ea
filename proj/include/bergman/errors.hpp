#pragma once

#include <stdexcept>
#include <string>

namespace bergman {

// Argument outside the documented parameter range.
class invalid_argument : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

// Point outside the domain an operation is defined on.
class domain_error : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

// Parameter combination the library deliberately does not cover.
class unsupported_case : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

// |1 - z conj(zeta)| fell below the evaluation guard.
class near_singular : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// An integral that diverges, detected by exponent bookkeeping.
class divergent_integral : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// A weight average that is infinite because some factor is not locally
// integrable at its singular point.  `factor` names the offending factor and
// `threshold` states the violated inequality.
class analytic_nonintegrable : public divergent_integral {
public:
  analytic_nonintegrable(std::string factor, std::string threshold)
    : divergent_integral("analytic non-integrability: " + factor + " violates " + threshold)
    , factor_(std::move(factor))
    , threshold_(std::move(threshold)) {}

  const std::string& factor() const noexcept { return factor_; }
  const std::string& threshold() const noexcept { return threshold_; }

private:
  std::string factor_;
  std::string threshold_;
};

}  // namespace bergman
