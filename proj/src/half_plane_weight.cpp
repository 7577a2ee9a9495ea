#include "bergman/half_plane_weight.hpp"

#include <cmath>
#include <sstream>

#include "bergman/errors.hpp"

namespace bergman {

namespace {
const std::complex<double> I{0.0, 1.0};
}

half_plane_weight::half_plane_weight(std::vector<weight_factor> factors, double multiplier)
  : factors_(std::move(factors))
  , multiplier_(multiplier) {
  if (!(multiplier_ > 0.0) || !std::isfinite(multiplier_))
    throw bergman::invalid_argument("weight multiplier must be positive and finite");
  for (const auto& f : factors_) {
    if (!std::isfinite(f.exponent)) throw bergman::invalid_argument("weight exponents must be finite");
    switch (f.base) {
      case weight_base::dist_to_i: exp_i_ += f.exponent; break;
      case weight_base::dist_to_minus_i: exp_minus_i_ += f.exponent; break;
      case weight_base::cayley_modulus:
        exp_i_ += f.exponent;
        exp_minus_i_ -= f.exponent;
        break;
    }
  }
}

double half_plane_weight::operator()(std::complex<double> z) const {
  double log_value = 0.0;
  if (exp_i_ != 0.0) log_value += exp_i_ * std::log(std::abs(I - z));
  if (exp_minus_i_ != 0.0) log_value += exp_minus_i_ * std::log(std::abs(I + z));
  return multiplier_ * std::exp(log_value);
}

double half_plane_weight::at_offset_from_i(std::complex<double> delta) const {
  double log_value = 0.0;
  if (exp_i_ != 0.0) log_value += exp_i_ * std::log(std::abs(delta));
  if (exp_minus_i_ != 0.0) log_value += exp_minus_i_ * std::log(std::abs(2.0 * I + delta));
  return multiplier_ * std::exp(log_value);
}

half_plane_weight half_plane_weight::pow(double q) const {
  auto factors = factors_;
  for (auto& f : factors) f.exponent *= q;
  return half_plane_weight(std::move(factors), std::pow(multiplier_, q));
}

half_plane_weight half_plane_weight::scaled(double c) const { return half_plane_weight(factors_, multiplier_ * c); }

std::string to_string(weight_base base) {
  switch (base) {
    case weight_base::dist_to_i: return "|i-z|";
    case weight_base::dist_to_minus_i: return "|i+z|";
    case weight_base::cayley_modulus: return "|(i-z)/(i+z)|";
  }
  return "?";
}

std::string half_plane_weight::describe() const {
  std::ostringstream os;
  os.precision(12);
  bool first = true;
  if (multiplier_ != 1.0) {
    os << multiplier_;
    first = false;
  }
  for (const auto& f : factors_) {
    if (!first) os << " * ";
    os << to_string(f.base) << "^" << f.exponent;
    first = false;
  }
  if (first) os << "1";
  return os.str();
}

}  // namespace bergman
