#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

#include "bergman/quadrature.hpp"
#include "bergman/ranges.hpp"

namespace bergman::projection_lab {

using quadrature::quadrature_spec;
using quadrature::radial_profile;

/// a_j = j^{-j}.  Underflows to 0 for j >= 144; use log_sequence_a there.
double sequence_a(std::int64_t j);
/// log a_j = -j log j.
double log_sequence_a(std::int64_t j);

/// A_{n,p} = sum_{j=1}^n j (a_j^{p/j} - a_{j+1}^{p/j}).
double partial_sum_A(std::int64_t n, double p);
/// A_{n,p} for each n of an increasing list, in one pass.
std::vector<double> partial_sums_A(const std::vector<std::int64_t>& n_values, double p);

/// f(r e^{i theta}) = sum_j f_j(r) e^{i j theta}.
struct mode_function {
  std::map<int, radial_profile> modes;

  /// z^m: profile r^m in mode m, for any integer m.
  static mode_function monomial(int m);
  /// conj(z)^j
  static mode_function conj_power(int j);
  std::complex<double> operator()(std::complex<double> z) const;
};

/// sum_m c_m z^m
struct holomorphic_mode_expansion {
  std::map<int, std::complex<double>> coefficients;

  std::complex<double> operator()(std::complex<double> z) const;
  /// Same expansion as a mode function (profile c_m r^m in mode m); requires real coefficients.
  mode_function as_mode_function() const;
};

/// Projection onto holomorphic functions of L^2(D*, |z|^{s'}), computed mode by mode:
/// c_m = (2m + 2 + s') int_0^1 f_m(r) r^{m + s' + 1} dr for m > -(1 + s'/2), zero otherwise.
holomorphic_mode_expansion project_modes(double s_prime, const mode_function& f,
                                         const quadrature_spec& spec = quadrature_spec{});

/// The test function f_n: mode -(k+1), profile r^{1/j - (s+k+1)} on (a_{j+1}, a_j], j = 1..n.
mode_function blowup_test_function(double s_prime, std::int64_t n);

struct blowup_series {
  double s_prime;
  double p;
  /// (s + 2k + 2) / (s + k + 1), where the f_n norms reduce to A_{n,p}.
  double endpoint_p;
  /// s + 2k + 2 - (k + 1) p; the image z^{-(k+1)} lies in L^p iff nu > 0.
  double nu;
  bool image_in_lp;
  std::vector<std::int64_t> n_values;
  std::vector<double> norms_f;
  std::vector<double> norms_Bf;
  std::vector<double> log_norms_f;
  std::vector<double> log_norms_Bf;
  std::vector<double> ratios;
  /// Projection coefficient s A_{n,1} per n.
  std::vector<double> coefficients;
  bool endpoint_identity_checked = false;
  double endpoint_identity_max_rel_error = 0.0;
};

/// Throws std::logic_error if, at the endpoint, ||f_n||_p^p and (2/p) A_{n,p}
/// disagree by more than 1e-8 relative.
blowup_series blowup_experiment(double s_prime, double p, const std::vector<std::int64_t>& n_values,
                                const quadrature_spec& spec = quadrature_spec{});

/// h(z) = (1 - |z|^2)^delta |z|^sigma
struct schur_parameters {
  double delta;
  double sigma;
  double p;
};

/// Feasible boxes for Schur's test with the kernel |z conj(zeta)|^{-(k+1)} / |1 - z conj(zeta)|^2:
/// delta in (-min(1/p, 1/p'), 0), sigma in (max(-A/p, -A/p'), min(-B/p, -B/p')],
/// A = s + k + 1, B = k + 1.  Returns the midpoints, or nothing when the sigma box is empty.
std::optional<schur_parameters> schur_feasible(double s_prime, double p);

struct exact_schur_box {
  ranges::rational delta_lo, delta_hi;
  ranges::rational sigma_lo, sigma_hi;
};

/// The same system in exact arithmetic; nothing when infeasible.
std::optional<exact_schur_box> schur_feasible(const ranges::rational& s_prime, const ranges::rational& p);

/// Largest of T(h^q)(z) / h(z)^q over the samples and q in {p, p'}.
double schur_numeric_check(double s_prime, const schur_parameters& params,
                           const std::vector<std::complex<double>>& sample_points,
                           const quadrature_spec& spec = quadrature_spec{});

/// The same ratio at a single point and exponent q.
double schur_ratio(double s_prime, const schur_parameters& params, double q, std::complex<double> z,
                   const quadrature_spec& spec = quadrature_spec{});

}  // namespace bergman::projection_lab
