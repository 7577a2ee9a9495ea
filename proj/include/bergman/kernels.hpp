#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>

namespace bergman::kernels {

using complex = std::complex<double>;

/// Point of the open unit disk.
class disk_point {
public:
  explicit disk_point(complex value);
  complex value() const noexcept { return value_; }

private:
  complex value_;
};

/// Point of the Hartogs triangle |z1| < |z2| < 1.
class hartogs_point {
public:
  hartogs_point(complex z1, complex z2);
  complex z1() const noexcept { return z1_; }
  complex z2() const noexcept { return z2_; }

private:
  complex z1_;
  complex z2_;
};

/// Point of the open upper half plane.
class half_plane_point {
public:
  explicit half_plane_point(complex value);
  complex value() const noexcept { return value_; }

private:
  complex value_;
};

/// z^n for integer n by repeated squaring.
complex ipow(complex z, std::int64_t n);

/// 1 / (1 - z conj(zeta))^2.
complex disk_kernel(const disk_point& z, const disk_point& zeta);

enum class punctured_method { closed, homotopy };

/// Smallest integer t with t > -s'/2.
std::int64_t closed_form_index(double s_prime);

/// Kernel of the projection on the punctured disk with weight |z|^{s'}.
complex punctured_kernel(double s_prime, const disk_point& z, const disk_point& zeta,
                         punctured_method method = punctured_method::closed);

class nonvanishing_holomorphic {
public:
  enum class kind { identity, power_of_z_minus_one, user_supplied };

  /// g = 1.
  static nonvanishing_holomorphic one();
  /// g(z) = (z - 1)^alpha on the branch with cut [1, infinity) and
  /// arg(z - 1) in (0, 2 pi); at z = 0 this is exp(i pi alpha).
  static nonvanishing_holomorphic power_of_z_minus_one(double alpha);
  /// Any map; rejected when it vanishes or is non-finite at one of the
  /// sample points r e^{i theta}, r in {0, .25, .5, .75, .9, .99}, 32 angles.
  static nonvanishing_holomorphic user_supplied(std::function<complex(complex)> g, std::string label = "user");

  complex operator()(complex z) const;
  kind tag() const noexcept { return kind_; }
  double alpha() const noexcept { return alpha_; }
  const std::string& label() const noexcept { return label_; }

private:
  kind kind_ = kind::identity;
  double alpha_ = 0.0;
  std::function<complex(complex)> fn_;
  std::string label_;
};

/// disk_kernel(z, zeta) / (g(z) conj(g(zeta))).
complex g_weighted_kernel(const nonvanishing_holomorphic& g, const disk_point& z, const disk_point& zeta);

struct transform_method {};
struct series_method {
  int M;
};
using hartogs_method = std::variant<transform_method, series_method>;

struct series_result {
  complex value;
  /// Geometric estimate of the omitted terms from the last three partial sums.
  double tail_bound;
  std::int64_t terms;
};

/// 1 / int |z1|^{2a} |z2|^{2b+s'} dV over the Hartogs triangle.
double hartogs_series_coefficient(std::int64_t a, std::int64_t b, double s_prime);

/// Kernel of the projection on the Hartogs triangle with weight |z2|^{s'}.
complex hartogs_kernel(double s_prime, const hartogs_point& z, const hartogs_point& zeta,
                       const hartogs_method& method = transform_method{});

/// Orthonormal expansion truncated at a <= M, b <= M.
series_result hartogs_kernel_series(double s_prime, const hartogs_point& z, const hartogs_point& zeta, int M);

/// (i - z) / (i + z).
disk_point cayley(const half_plane_point& z);
/// i (1 - w) / (1 + w).
half_plane_point cayley_inverse(const disk_point& w);

}  // namespace bergman::kernels
