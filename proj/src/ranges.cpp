#include "bergman/ranges.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "bergman/errors.hpp"

namespace bergman::ranges {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  // b > 0
  std::int64_t q = a / b;
  if ((a % b != 0) && (a < 0)) --q;
  return q;
}

std::int64_t ceil_of(double x) { return static_cast<std::int64_t>(std::ceil(x)); }

endpoint make_endpoint(const rational& q) { return endpoint(q); }
endpoint make_endpoint(double x) { return endpoint(x); }

template <typename T>
T from_int(std::int64_t v) {
  return T(v);
}

template <typename T>
void require_finite(const T&) {}

template <>
void require_finite<double>(const double& x) {
  if (!std::isfinite(x)) throw bergman::invalid_argument("exponent must be finite");
}

// With s = s' - 2k: (s + a) / (s + b) and (s + a) / b, normalized once.
rational shifted_ratio(const rational& sp, std::int64_t k, std::int64_t a, std::int64_t b) {
  const std::int64_t base = sp.numerator() - 2 * k * sp.denominator();
  return rational(base + a * sp.denominator(), base + b * sp.denominator());
}
double shifted_ratio(double sp, std::int64_t k, std::int64_t a, std::int64_t b) {
  const double s = sp - 2.0 * static_cast<double>(k);
  return (s + static_cast<double>(a)) / (s + static_cast<double>(b));
}
rational shifted_over(const rational& sp, std::int64_t k, std::int64_t a, std::int64_t b) {
  return rational(sp.numerator() + (a - 2 * k) * sp.denominator(), b * sp.denominator());
}
double shifted_over(double sp, std::int64_t k, std::int64_t a, std::int64_t b) {
  return (sp - 2.0 * static_cast<double>(k) + static_cast<double>(a)) / static_cast<double>(b);
}

std::int64_t half_ceil(const rational& q) { return -floor_div(-q.numerator(), 2 * q.denominator()); }
std::int64_t half_ceil(double x) { return ceil_of(x / 2.0); }

// Sign of q - v.
int sign_vs(const rational& q, std::int64_t v) {
  const std::int64_t d = q.numerator() - v * q.denominator();
  return (d > 0) - (d < 0);
}
int sign_vs(double x, std::int64_t v) { return (x > v) - (x < v); }

rational minus_even(const rational& q, std::int64_t k) {
  return rational(q.numerator() - 2 * k * q.denominator(), q.denominator());
}
double minus_even(double x, std::int64_t k) { return x - 2.0 * static_cast<double>(k); }

template <typename T>
exponent_decomposition<T> decompose_impl(const T& s_prime) {
  require_finite(s_prime);
  // k = ceil(s'/2) - 1 puts s = s' - 2k in (0, 2]; even s' lands on s = 2.
  const std::int64_t k = half_ceil(s_prime) - 1;
  return {s_prime, k, minus_even(s_prime, k)};
}

// Endpoints ((s + 2k + c) / (s + k + c/2), (s + 2k + c) / (k + c/2)), listed
// in ascending order by the caller.
template <typename T>
endpoint ratio_endpoint(const T& s_prime, std::int64_t k, std::int64_t c) {
  return make_endpoint(shifted_ratio(s_prime, k, 2 * k + c, k + c / 2));
}

template <typename T>
endpoint over_endpoint(const T& s_prime, std::int64_t k, std::int64_t c) {
  return make_endpoint(shifted_over(s_prime, k, 2 * k + c, k + c / 2));
}

// (2 - s, (2 - s) / (1 - s))
template <typename T>
p_range middle_case(const T& s_prime, std::int64_t k) {
  return p_range(make_endpoint(shifted_over(s_prime, k, -2, -1)), make_endpoint(shifted_ratio(s_prime, k, -2, -1)));
}

template <typename T>
p_range disk_star_impl(const T& s_prime) {
  require_finite(s_prime);
  const std::int64_t k = half_ceil(s_prime) - 1;
  if (sign_vs(s_prime, 0) > 0) return p_range(ratio_endpoint(s_prime, k, 2), over_endpoint(s_prime, k, 2));
  if (sign_vs(s_prime, -3) >= 0) return p_range::all();
  if (sign_vs(s_prime, -4) > 0) return middle_case(s_prime, k);
  if (sign_vs(s_prime, -4) == 0) return p_range::all();
  return p_range(over_endpoint(s_prime, k, 2), ratio_endpoint(s_prime, k, 2));
}

template <typename T>
p_range hartogs_impl(const T& s_prime) {
  require_finite(s_prime);
  const std::int64_t k = half_ceil(s_prime) - 1;
  if (sign_vs(s_prime, -2) > 0) return p_range(ratio_endpoint(s_prime, k, 4), over_endpoint(s_prime, k, 4));
  if (sign_vs(s_prime, -5) >= 0) return p_range::all();
  if (sign_vs(s_prime, -6) > 0) return middle_case(s_prime, k);
  if (sign_vs(s_prime, -6) == 0) return p_range::all();
  return p_range(over_endpoint(s_prime, k, 4), ratio_endpoint(s_prime, k, 4));
}

double to_double(const rational& q) { return boost::rational_cast<double>(q); }
double to_double(double x) { return x; }

std::string number_str(const rational& q) { return to_string(q); }
std::string number_str(double x) {
  std::ostringstream os;
  os.precision(17);
  os << x;
  return os.str();
}

template <typename T>
range_verdict two_weight_impl(const T& s_prime, const T& t) {
  require_finite(t);
  const auto d = decompose_impl(s_prime);
  if (d.k < -1)
    throw unsupported_case("two-weight ranges are only covered for k >= -1 (s' = " + number_str(s_prime) +
                           " has k = " + std::to_string(d.k) + ")");
  const T s = d.s;
  const T k = from_int<T>(d.k);
  const T lo = (s + T(2) * k + T(4)) / (s + k + T(2));
  const T hi = (t + T(4)) / (k + T(2));
  const auto range = intersect_ranges(p_range(make_endpoint(lo), make_endpoint(hi)), p_range::all());

  sharpness_rule rule{to_double(s_prime), to_double(s), to_double(t)};
  std::string notes = "unbounded for every t when p <= " + number_str(lo);
  if (t < s_prime) notes += "; t < s' so L^p(|z2|^t) is contained in L^p(|z2|^{s'})";
  if (range.is_empty()) notes += "; range is empty";
  return {range, rule, notes};
}

template <typename T>
p_range alpha_impl(const T& alpha) {
  if (!(alpha > T(0))) throw bergman::invalid_argument("alpha must be positive");
  const T num = T(2) * alpha + T(2);
  return p_range(make_endpoint(num / (alpha + T(2))), make_endpoint(num / alpha));
}

}  // namespace

std::optional<rational> exact_dyadic(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  constexpr int bits = 20;
  const double scaled = std::ldexp(x, bits);
  if (scaled != std::trunc(scaled) || std::fabs(scaled) >= 0x1p53) return std::nullopt;
  return rational(static_cast<std::int64_t>(scaled), std::int64_t{1} << bits);
}

std::optional<rational> parse_rational(const std::string& text) {
  std::string str = text;
  str.erase(std::remove_if(str.begin(), str.end(), [](unsigned char c) { return std::isspace(c); }), str.end());
  if (str.empty()) return std::nullopt;

  if (const auto slash = str.find('/'); slash != std::string::npos) {
    const auto num = parse_rational(str.substr(0, slash));
    const auto den = parse_rational(str.substr(slash + 1));
    if (!num || !den || den->numerator() == 0) return std::nullopt;
    return *num / *den;
  }

  std::size_t pos = 0;
  bool negative = false;
  if (str[pos] == '+' || str[pos] == '-') negative = (str[pos++] == '-');

  std::int64_t num = 0;
  std::int64_t den = 1;
  int digits = 0;
  bool seen_point = false;
  constexpr int max_digits = 17;
  for (; pos < str.size(); ++pos) {
    const char c = str[pos];
    if (c == '.') {
      if (seen_point) return std::nullopt;
      seen_point = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(c))) break;
    if (++digits > max_digits) return std::nullopt;
    num = num * 10 + (c - '0');
    if (seen_point) den *= 10;
  }
  if (digits == 0) return std::nullopt;

  int exponent = 0;
  if (pos < str.size()) {
    if (str[pos] != 'e' && str[pos] != 'E') return std::nullopt;
    try {
      std::size_t used = 0;
      exponent = std::stoi(str.substr(pos + 1), &used);
      if (pos + 1 + used != str.size()) return std::nullopt;
    } catch (const std::exception&) {
      return std::nullopt;
    }
  }
  if (std::abs(exponent) > 18) return std::nullopt;

  rational q(negative ? -num : num, den);
  std::int64_t scale = 1;
  for (int i = 0; i < std::abs(exponent); ++i) {
    if (scale > std::numeric_limits<std::int64_t>::max() / 10) return std::nullopt;
    scale *= 10;
  }
  return exponent >= 0 ? q * scale : q / scale;
}

std::string to_string(const rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

//
// endpoint
//

endpoint::endpoint(double x) : finite_(true), value_(x) {
  if (!std::isfinite(x)) {
    if (x > 0 && std::isinf(x)) {
      finite_ = false;
      value_ = 0.0;
      return;
    }
    throw bergman::invalid_argument("endpoint must be finite or +infinity");
  }
  exact_ = exact_dyadic(x);
}

double endpoint::value() const noexcept {
  return finite_ ? value_ : std::numeric_limits<double>::infinity();
}

std::string endpoint::str() const {
  if (!finite_) return "inf";
  if (exact_) return to_string(*exact_);
  return number_str(value_);
}

int compare(const endpoint& a, const endpoint& b) {
  if (a.is_infinite() || b.is_infinite()) return int(a.is_infinite()) - int(b.is_infinite());
  if (a.is_exact() && b.is_exact()) {
    const __int128 lhs = static_cast<__int128>(a.exact().numerator()) * b.exact().denominator();
    const __int128 rhs = static_cast<__int128>(b.exact().numerator()) * a.exact().denominator();
    return lhs < rhs ? -1 : (rhs < lhs ? 1 : 0);
  }
  const double x = a.value();
  const double y = b.value();
  const double scale = std::max({1.0, std::fabs(x), std::fabs(y)});
  if (std::fabs(x - y) <= float_slack * scale) return 0;
  return x < y ? -1 : 1;
}

//
// p_range
//

p_range::p_range(endpoint lo, endpoint hi) : lo_(std::move(lo)), hi_(std::move(hi)), empty_(false) {
  if (lo_.is_infinite()) throw bergman::invalid_argument("lower endpoint of a p-range cannot be infinite");
  static const endpoint one(rational(1));
  if (compare(lo_, one) < 0)
    throw bergman::invalid_argument("lower endpoint of a p-range must be >= 1, got " + lo_.str());
  empty_ = compare(lo_, hi_) >= 0;
}

p_range p_range::empty() { return p_range(endpoint(rational(1)), endpoint(rational(1))); }

p_range p_range::all() { return p_range(endpoint(rational(1)), endpoint::infinity()); }

bool p_range::contains(const rational& p) const {
  if (empty_) return false;
  const endpoint e(p);
  return compare(lo_, e) < 0 && compare(e, hi_) < 0;
}

bool p_range::contains(double p) const {
  if (empty_) return false;
  const endpoint e(p);
  return compare(lo_, e) < 0 && compare(e, hi_) < 0;
}

std::string p_range::str() const {
  if (empty_) return "empty";
  return "(" + lo_.str() + ", " + hi_.str() + ")";
}

bool operator==(const p_range& a, const p_range& b) {
  if (a.is_empty() || b.is_empty()) return a.is_empty() == b.is_empty();
  return a.lo() == b.lo() && a.hi() == b.hi();
}

p_range intersect_ranges(const p_range& a, const p_range& b) {
  if (a.is_empty() || b.is_empty()) return p_range::empty();
  const endpoint& lo = compare(a.lo(), b.lo()) >= 0 ? a.lo() : b.lo();
  const endpoint& hi = compare(a.hi(), b.hi()) <= 0 ? a.hi() : b.hi();
  return p_range(lo, hi);
}

//
// formulas
//

exponent_decomposition<rational> decompose_exponent(const rational& s_prime) { return decompose_impl(s_prime); }

exponent_decomposition<double> decompose_exponent(double s_prime) { return decompose_impl(s_prime); }

p_range range_disk_star(const rational& s_prime) { return disk_star_impl(s_prime); }

p_range range_disk_star(double s_prime) {
  if (const auto q = exact_dyadic(s_prime)) return disk_star_impl(*q);
  return disk_star_impl(s_prime);
}

p_range range_hartogs(const rational& s_prime) { return hartogs_impl(s_prime); }

p_range range_hartogs(double s_prime) {
  if (const auto q = exact_dyadic(s_prime)) return hartogs_impl(*q);
  return hartogs_impl(s_prime);
}

bool sharpness_rule::operator()(double p) const { return t - s_prime <= (2.0 - s) * p; }

range_verdict range_two_weight(const rational& s_prime, const rational& t) { return two_weight_impl(s_prime, t); }

range_verdict range_two_weight(double s_prime, double t) {
  const auto qs = exact_dyadic(s_prime);
  const auto qt = exact_dyadic(t);
  if (qs && qt) return two_weight_impl(*qs, *qt);
  return two_weight_impl(s_prime, t);
}

std::vector<rational> generalized_exponents(const generalized_hartogs_spec& spec) {
  if (spec.weight_exponents.empty()) throw bergman::invalid_argument("at least one weight exponent is required");
  std::int64_t total_dim = 0;
  for (int m : spec.ball_dims) {
    if (m < 1) throw bergman::invalid_argument("ball dimensions must be positive");
    total_dim += m;
  }
  std::vector<rational> exponents;
  rational partial(0);
  for (std::size_t j = 0; j < spec.weight_exponents.size(); ++j) {
    partial += spec.weight_exponents[j];
    exponents.push_back(rational(2 * total_dim) + partial + rational(2 * static_cast<std::int64_t>(j)));
  }
  return exponents;
}

p_range range_generalized(const generalized_hartogs_spec& spec) {
  p_range result = p_range::all();
  for (const auto& e : generalized_exponents(spec)) result = intersect_ranges(result, range_disk_star(e));
  return result;
}

p_range alpha_example_range(const rational& alpha) { return alpha_impl(alpha); }

p_range alpha_example_range(double alpha) {
  if (const auto q = exact_dyadic(alpha)) return alpha_impl(*q);
  return alpha_impl(alpha);
}

double sharp_target_exponent(double p, std::int64_t k, double epsilon) {
  if (!(p > 1.0)) throw bergman::invalid_argument("p must exceed 1");
  if (!(epsilon > 0.0)) throw bergman::invalid_argument("epsilon must be positive");
  return p * static_cast<double>(k + 2) - 4.0 + epsilon;
}

}  // namespace bergman::ranges
