#pragma once

#include <complex>
#include <string>
#include <vector>

namespace bergman {

enum class weight_base {
  dist_to_i,        // |i - z|
  dist_to_minus_i,  // |i + z|
  cayley_modulus,   // |(i - z) / (i + z)|
};

struct weight_factor {
  weight_base base;
  double exponent;
};

//
// Weight on the upper half plane of the form
//
//   c * prod |i - z|^a * |i + z|^b * |(i - z)/(i + z)|^e
//
// The only possible singular point in the closed half plane is z = i; the
// factor |i + z| is >= 1 there.  All integrability questions reduce to the
// total exponent at i.
//
class half_plane_weight {
public:
  half_plane_weight() = default;
  explicit half_plane_weight(std::vector<weight_factor> factors, double multiplier = 1.0);

  static half_plane_weight unit() { return {}; }

  double operator()(std::complex<double> z) const;
  /// Value at z = i + delta, accurate for |delta| far below machine epsilon.
  double at_offset_from_i(std::complex<double> delta) const;

  /// mu^q, obtained by scaling every exponent.
  half_plane_weight pow(double q) const;
  /// c * mu.
  half_plane_weight scaled(double c) const;

  const std::vector<weight_factor>& factors() const noexcept { return factors_; }
  double multiplier() const noexcept { return multiplier_; }

  /// Total exponent of |i - z| after expanding the Cayley modulus.
  double exponent_at_i() const noexcept { return exp_i_; }
  /// Total exponent of |i + z| after expanding the Cayley modulus.
  double exponent_at_minus_i() const noexcept { return exp_minus_i_; }

  /// Human-readable factor list, e.g. "|i-z|^-1 * |(i-z)/(i+z)|^0.5".
  std::string describe() const;

private:
  std::vector<weight_factor> factors_;
  double multiplier_ = 1.0;
  double exp_i_ = 0.0;
  double exp_minus_i_ = 0.0;
};

std::string to_string(weight_base base);

}  // namespace bergman
