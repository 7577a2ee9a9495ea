#pragma once
//
// Weighted integration on the disk, the punctured disk and half-disks of the
// upper half plane.  All area measures are Lebesgue measure divided by pi, so
// the unit disk has area 1.
//

#include <complex>
#include <functional>
#include <limits>
#include <variant>
#include <vector>

#include "bergman/half_plane_weight.hpp"

namespace bergman::quadrature {

struct quadrature_spec {
  double rel_tol = 1e-10;
  double abs_tol = 1e-14;
  int max_subdivision_depth = 40;

  /// Throws invalid_argument unless tolerances are positive and depth >= 1.
  void validate() const;
  /// Same spec with rel_tol multiplied by `factor`.
  quadrature_spec tightened(double factor) const;
};

/// Default spec, with rel_tol taken from BERGMAN_LAB_RTOL when set.
quadrature_spec default_spec();

//
// 1-D integration
//

struct integration_result {
  double value;
  double error_estimate;
};

/// Globally adaptive Gauss-Kronrod (7/15) integration of f over [a, b].
integration_result integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                      const quadrature_spec& spec);

/// Integrates f over [a, b] when f behaves like (x - a)^left_power near a and
/// like (b - x)^right_power near b.  Each half is mapped by a power change of
/// variables that turns the leading power into a constant before the panels
/// are applied.  Powers must exceed -1.
integration_result integrate_power_endpoints(const std::function<double(double)>& f, double a, double b,
                                             double left_power, double right_power, const quadrature_spec& spec);

//
// moments
//

/// Integral of z^m conj(z)^m |z|^{s'} over the disk: 2 / (2m + 2 + s').
double weighted_moment(int m, double s_prime);

/// The same moment by adaptive radial quadrature.
double weighted_moment_quadrature(int m, double s_prime, const quadrature_spec& spec);

//
// radial profiles
//

/// c * r^exponent on (exp(log_lo), exp(log_hi)].  Endpoints are kept as logs
/// because super-exponentially shrinking pieces underflow in linear scale.
struct power_piece {
  double log_lo;
  double log_hi;
  double exponent;
  double coefficient;
};

class radial_profile {
public:
  /// c * r^exponent on (r_lo, r_hi].
  static radial_profile power(double exponent, double coefficient = 1.0, double r_lo = 0.0, double r_hi = 1.0);
  /// Pieces must be disjoint and contiguous; they are stored in ascending order.
  static radial_profile piecewise(std::vector<power_piece> pieces);
  /// Arbitrary profile on (0, 1]; `leading_exponent` is its power behaviour at r -> 0.
  static radial_profile generic(std::function<double(double)> f, double leading_exponent = 0.0);

  bool is_closed_form() const noexcept { return !generic_; }
  const std::vector<power_piece>& pieces() const noexcept { return pieces_; }
  double leading_exponent() const noexcept { return leading_exponent_; }

  double operator()(double r) const;

  /// |profile|^p.
  radial_profile pow(double p) const;
  /// Product with r^shift.
  radial_profile times_power(double shift) const;

private:
  std::vector<power_piece> pieces_;
  std::function<double(double)> generic_;
  double leading_exponent_ = 0.0;
};

/// 2 * int_0^1 profile(r) r^{weight_exponent + 1} dr.  Closed form on
/// piecewise-power profiles, adaptive quadrature otherwise.  Throws
/// divergent_integral when a piece touching r = 0 is not integrable.
double integrate_radial(const radial_profile& profile, double weight_exponent,
                        const quadrature_spec& spec = quadrature_spec{});

/// Natural log of integrate_radial for closed-form profiles with positive
/// coefficients, computed without leaving log space.
double log_integrate_radial(const radial_profile& profile, double weight_exponent);

/// integrate_radial by adaptive quadrature even when a closed form exists.
double integrate_radial_quadrature(const radial_profile& profile, double weight_exponent,
                                   const quadrature_spec& spec);

//
// the I_{alpha,beta} integral
//

/// int_{D*} (1 - |zeta|^2)^alpha |zeta|^beta / |1 - z conj(zeta)|^2 dA(zeta)
/// for -1 < alpha < 0, beta > -2 and 0 < |z| < 1.
double eval_I_alpha_beta(double alpha, double beta, std::complex<double> z, const quadrature_spec& spec);

/// The same integral for any integrable parameters: alpha > -1, beta > -2.
double eval_I_general(double alpha, double beta, std::complex<double> z, const quadrature_spec& spec);

//
// half disks
//

/// Disk centred on the real axis.
struct special_disk {
  double x0;
  double radius;
};

/// Disk centred in the closed upper half plane.
struct general_disk {
  std::complex<double> center;
  double radius;
};

using disk_region = std::variant<special_disk, general_disk>;

std::complex<double> center_of(const disk_region& disk);
double radius_of(const disk_region& disk);
void validate(const disk_region& disk);

/// Normalized area of D intersected with the upper half plane.
double half_disk_area(const disk_region& disk);

/// True when i lies in the closure of D intersected with the upper half plane.
bool contains_i(const disk_region& disk);

/// Normalized integral of `weight` over D intersected with the upper half
/// plane.  Throws analytic_nonintegrable when the region reaches z = i and the
/// total exponent there is <= -2.
double integrate_half_disk(const half_plane_weight& weight, const disk_region& disk, const quadrature_spec& spec);

}  // namespace bergman::quadrature
