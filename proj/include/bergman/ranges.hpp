#pragma once
//
// Sharp L^p ranges for the weighted Bergman projection on the punctured disk
// and on the Hartogs triangle, two-weight ranges and their derived exponents.
//
// Every formula is evaluated either in exact rational arithmetic (when the
// inputs are rationals, or doubles that are short dyadic fractions) or in
// double precision with a 1e-12 comparison slack.
//

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace bergman::ranges {

using rational = boost::rational<std::int64_t>;

/// Comparison slack used whenever an endpoint is only known in floating point.
inline constexpr double float_slack = 1e-12;

/// Returns the exact value of `x` when it is a dyadic fraction with at most
/// 20 fractional bits (0.5, -3.5, 2, ...), nothing otherwise.
std::optional<rational> exact_dyadic(double x);

/// Parses "3", "-3.5", "0.1", "1e-3" or "4/3" into an exact rational.
std::optional<rational> parse_rational(const std::string& text);

std::string to_string(const rational& q);

//
// extended real endpoint: finite (exact or floating) or +infinity
//
class endpoint {
public:
  static endpoint infinity() { return endpoint(); }
  explicit endpoint(const rational& q) : finite_(true), value_(boost::rational_cast<double>(q)), exact_(q) {}
  explicit endpoint(double x);

  bool is_infinite() const noexcept { return !finite_; }
  bool is_exact() const noexcept { return finite_ && exact_.has_value(); }
  /// +inf for the infinite endpoint.
  double value() const noexcept;
  /// Exact value; only valid when is_exact().
  const rational& exact() const { return *exact_; }

  std::string str() const;

  friend int compare(const endpoint& a, const endpoint& b);
  friend bool operator==(const endpoint& a, const endpoint& b) { return compare(a, b) == 0; }
  friend bool operator<(const endpoint& a, const endpoint& b) { return compare(a, b) < 0; }

private:
  endpoint() = default;

  bool finite_ = false;
  double value_ = 0.0;
  std::optional<rational> exact_;
};

//
// open interval (lo, hi) of exponents p, lo >= 1, possibly empty
//
class p_range {
public:
  /// The open interval (lo, hi); flagged empty when lo >= hi.
  p_range(endpoint lo, endpoint hi);

  static p_range empty();
  /// (1, infinity)
  static p_range all();

  bool is_empty() const noexcept { return empty_; }
  const endpoint& lo() const { return lo_; }
  const endpoint& hi() const { return hi_; }

  bool contains(const rational& p) const;
  bool contains(double p) const;

  std::string str() const;

  /// Empty ranges compare equal regardless of stored endpoints.
  friend bool operator==(const p_range& a, const p_range& b);

private:
  endpoint lo_;
  endpoint hi_;
  bool empty_;
};

p_range intersect_ranges(const p_range& a, const p_range& b);

//
// s' = s + 2k with k integer and s in (0, 2].  Even integers take s = 2,
// k = s'/2 - 1: e.g. s' = 0 gives k = -1, not k = 0.
//
template <typename T>
struct exponent_decomposition {
  T s_prime;
  std::int64_t k;
  T s;
};

exponent_decomposition<rational> decompose_exponent(const rational& s_prime);
exponent_decomposition<double> decompose_exponent(double s_prime);

/// Boundedness range of the projection on the punctured disk with weight |z|^{s'}.
p_range range_disk_star(const rational& s_prime);
p_range range_disk_star(double s_prime);

/// Boundedness range of the projection on the Hartogs triangle with weight |z2|^{s'}.
p_range range_hartogs(const rational& s_prime);
p_range range_hartogs(double s_prime);

//
// two-weight range L^p(|z2|^{s'}) -> L^p(|z2|^t)
//
struct sharpness_rule {
  double s_prime;
  double s;
  double t;

  /// True when the range is the exact iff-range at this p: t - s' <= (2 - s) p.
  bool operator()(double p) const;
};

struct range_verdict {
  p_range range;
  sharpness_rule sharp_predicate;
  std::string notes;
};

/// Requires k >= -1 in the decomposition of s'; throws unsupported_case otherwise.
range_verdict range_two_weight(const rational& s_prime, const rational& t);
range_verdict range_two_weight(double s_prime, double t);

//
// n-dimensional Hartogs triangle over l balls of dimensions m_1..m_l
//
struct generalized_hartogs_spec {
  std::vector<int> ball_dims;
  std::vector<rational> weight_exponents;
};

/// Exponents 2M + s_1 + ... + s_j + 2(j-1), j = 1..n, whose punctured-disk
/// projections govern boundedness.
std::vector<rational> generalized_exponents(const generalized_hartogs_spec& spec);

p_range range_generalized(const generalized_hartogs_spec& spec);

/// Range of the |g|^2-weighted disk projection for g(z) = (z - 1)^alpha.
p_range alpha_example_range(const rational& alpha);
p_range alpha_example_range(double alpha);

/// t(eps) = p (k + 2) - 4 + eps.
double sharp_target_exponent(double p, std::int64_t k, double epsilon);

}  // namespace bergman::ranges
