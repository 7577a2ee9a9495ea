#include "bergman/projection_lab.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "bergman/errors.hpp"

namespace bergman::projection_lab {

namespace {

class neumaier {
public:
  void add(double x) {
    const double t = sum_ + x;
    comp_ += std::abs(sum_) >= std::abs(x) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

double A_term(std::int64_t j, double p) {
  const double jd = static_cast<double>(j);
  // a_j^{p/j} = j^{-p};  a_{j+1}^{p/j} / a_j^{p/j} = exp(-p (log1p(1/j) + log(j+1)/j))
  const double ratio_log = -p * (std::log1p(1.0 / jd) + std::log(jd + 1.0) / jd);
  return jd * std::pow(jd, -p) * -std::expm1(ratio_log);
}

void require_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw bergman::invalid_argument("A_{n,p} needs p >= 1");
}

}  // namespace

double sequence_a(std::int64_t j) {
  if (j < 1) throw bergman::invalid_argument("a_j needs j >= 1");
  if (j <= 30) return std::pow(static_cast<double>(j), -static_cast<double>(j));
  return std::exp(log_sequence_a(j));
}

double log_sequence_a(std::int64_t j) {
  if (j < 1) throw bergman::invalid_argument("a_j needs j >= 1");
  const double jd = static_cast<double>(j);
  return -jd * std::log(jd);
}

double partial_sum_A(std::int64_t n, double p) { return partial_sums_A({n}, p).front(); }

std::vector<double> partial_sums_A(const std::vector<std::int64_t>& n_values, double p) {
  require_p(p);
  std::vector<double> out;
  out.reserve(n_values.size());
  neumaier sum;
  std::int64_t j = 0;
  for (std::int64_t n : n_values) {
    if (n < 1) throw bergman::invalid_argument("A_{n,p} needs n >= 1");
    if (n < j) throw bergman::invalid_argument("n values must be nondecreasing");
    for (; j < n; ++j) sum.add(A_term(j + 1, p));
    out.push_back(sum.value());
  }
  return out;
}

mode_function mode_function::monomial(int m) {
  mode_function f;
  f.modes.emplace(m, radial_profile::power(m));
  return f;
}

mode_function mode_function::conj_power(int j) {
  mode_function f;
  f.modes.emplace(-j, radial_profile::power(j));
  return f;
}

std::complex<double> mode_function::operator()(std::complex<double> z) const {
  const double r = std::abs(z);
  const double theta = std::arg(z);
  std::complex<double> sum = 0.0;
  for (const auto& [j, profile] : modes) sum += profile(r) * std::polar(1.0, j * theta);
  return sum;
}

std::complex<double> holomorphic_mode_expansion::operator()(std::complex<double> z) const {
  std::complex<double> sum = 0.0;
  for (const auto& [m, c] : coefficients) sum += c * std::pow(z, m);
  return sum;
}

mode_function holomorphic_mode_expansion::as_mode_function() const {
  mode_function f;
  for (const auto& [m, c] : coefficients) {
    if (c.imag() != 0.0) throw bergman::invalid_argument("as_mode_function needs real coefficients");
    f.modes.emplace(m, radial_profile::power(m, c.real()));
  }
  return f;
}

holomorphic_mode_expansion project_modes(double s_prime, const mode_function& f, const quadrature_spec& spec) {
  if (!std::isfinite(s_prime)) throw bergman::invalid_argument("s' must be finite");
  holomorphic_mode_expansion out;
  for (const auto& [m, profile] : f.modes) {
    const double norm = 2.0 * m + 2.0 + s_prime;
    if (!(norm > 0.0)) continue;
    const double integral = quadrature::integrate_radial(profile, m + s_prime, spec);
    out.coefficients.emplace(m, norm / 2.0 * integral);
  }
  return out;
}

mode_function blowup_test_function(double s_prime, std::int64_t n) {
  if (n < 1) throw bergman::invalid_argument("f_n needs n >= 1");
  const auto d = ranges::decompose_exponent(s_prime);
  const double s = d.s;
  const double k = static_cast<double>(d.k);
  std::vector<quadrature::power_piece> pieces;
  pieces.reserve(static_cast<std::size_t>(n));
  for (std::int64_t j = 1; j <= n; ++j)
    pieces.push_back({log_sequence_a(j + 1), log_sequence_a(j), 1.0 / static_cast<double>(j) - (s + k + 1.0), 1.0});
  mode_function f;
  f.modes.emplace(static_cast<int>(-(d.k + 1)), radial_profile::piecewise(std::move(pieces)));
  return f;
}

blowup_series blowup_experiment(double s_prime, double p, const std::vector<std::int64_t>& n_values,
                                const quadrature_spec& spec) {
  if (!(p > 1.0) || !std::isfinite(p)) throw bergman::invalid_argument("blow-up experiment needs p > 1");
  if (n_values.empty()) throw bergman::invalid_argument("blow-up experiment needs at least one n");
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    if (n_values[i] < 1) throw bergman::invalid_argument("n values must be positive");
    if (i > 0 && n_values[i] <= n_values[i - 1])
      throw bergman::invalid_argument("n values must be strictly increasing");
  }
  const auto d = ranges::decompose_exponent(s_prime);
  const double s = d.s;
  const double k = static_cast<double>(d.k);

  blowup_series out;
  out.s_prime = s_prime;
  out.p = p;
  out.endpoint_p = (s + 2.0 * k + 2.0) / (s + k + 1.0);
  out.nu = s + 2.0 * k + 2.0 - (k + 1.0) * p;
  out.image_in_lp = out.nu > 0.0;
  out.n_values = n_values;

  const bool at_endpoint = std::abs(p - out.endpoint_p) <= 1e-12 * std::max(1.0, std::abs(p));
  const auto A1 = partial_sums_A(n_values, 1.0);
  std::vector<double> Ap;
  if (at_endpoint) Ap = partial_sums_A(n_values, p);

  const int mode = static_cast<int>(-(d.k + 1));
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    const auto f = blowup_test_function(s_prime, n_values[i]);
    const auto& profile = f.modes.at(mode);
    const double log_norm_f = quadrature::log_integrate_radial(profile.pow(p), s_prime) / p;

    const auto image = project_modes(s_prime, f, spec);
    const double coefficient = image.coefficients.at(mode).real();
    const double expected = s * A1[i];
    if (std::abs(coefficient - expected) > 1e-10 * std::abs(expected)) {
      std::ostringstream os;
      os << "projection coefficient " << coefficient << " differs from s A_{n,1} = " << expected;
      throw std::logic_error(os.str());
    }

    double log_norm_Bf = std::numeric_limits<double>::infinity();
    if (out.image_in_lp) log_norm_Bf = std::log(coefficient) + std::log(2.0 / out.nu) / p;

    if (at_endpoint) {
      const double lhs = p * log_norm_f;
      const double rhs = std::log(2.0 / p * Ap[i]);
      const double rel = std::abs(std::expm1(lhs - rhs));
      out.endpoint_identity_max_rel_error = std::max(out.endpoint_identity_max_rel_error, rel);
      if (rel > 1e-8) {
        std::ostringstream os;
        os << "endpoint norm identity fails at n = " << n_values[i] << ": relative error " << rel;
        throw std::logic_error(os.str());
      }
    }

    out.coefficients.push_back(coefficient);
    out.log_norms_f.push_back(log_norm_f);
    out.log_norms_Bf.push_back(log_norm_Bf);
    out.norms_f.push_back(std::exp(log_norm_f));
    out.norms_Bf.push_back(std::exp(log_norm_Bf));
    out.ratios.push_back(std::exp(log_norm_Bf - log_norm_f));
  }
  out.endpoint_identity_checked = at_endpoint;
  return out;
}

namespace {

template <typename T>
struct schur_box {
  T delta_lo, delta_hi, sigma_lo, sigma_hi;
  bool feasible;
};

template <typename T>
schur_box<T> schur_box_impl(const T& s, std::int64_t k, const T& p) {
  const T one(1);
  const T q = p / (p - one);
  const T A = s + T(k) + one;
  const T B = T(k) + one;
  schur_box<T> box;
  box.delta_lo = -std::min(one / p, one / q);
  box.delta_hi = T(0);
  box.sigma_lo = std::max(-A / p, -A / q);
  box.sigma_hi = std::min(-B / p, -B / q);
  box.feasible = box.sigma_lo < box.sigma_hi;
  return box;
}

}  // namespace

std::optional<schur_parameters> schur_feasible(double s_prime, double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw bergman::invalid_argument("Schur test needs p > 1");
  if (const auto sp = ranges::exact_dyadic(s_prime)) {
    if (const auto pp = ranges::exact_dyadic(p)) {
      const auto box = schur_feasible(*sp, *pp);
      if (!box) return std::nullopt;
      const auto mid = [](const ranges::rational& a, const ranges::rational& b) {
        return boost::rational_cast<double>((a + b) / ranges::rational(2));
      };
      return schur_parameters{mid(box->delta_lo, box->delta_hi), mid(box->sigma_lo, box->sigma_hi), p};
    }
  }
  const auto d = ranges::decompose_exponent(s_prime);
  const auto box = schur_box_impl<double>(d.s, d.k, p);
  if (!(box.sigma_hi - box.sigma_lo > ranges::float_slack)) return std::nullopt;
  return schur_parameters{0.5 * (box.delta_lo + box.delta_hi), 0.5 * (box.sigma_lo + box.sigma_hi), p};
}

std::optional<exact_schur_box> schur_feasible(const ranges::rational& s_prime, const ranges::rational& p) {
  if (!(p > ranges::rational(1))) throw bergman::invalid_argument("Schur test needs p > 1");
  const auto d = ranges::decompose_exponent(s_prime);
  const auto box = schur_box_impl<ranges::rational>(d.s, d.k, p);
  if (!box.feasible) return std::nullopt;
  return exact_schur_box{box.delta_lo, box.delta_hi, box.sigma_lo, box.sigma_hi};
}

double schur_ratio(double s_prime, const schur_parameters& params, double q, std::complex<double> z,
                   const quadrature_spec& spec) {
  const double az = std::abs(z);
  if (!(az > 0.0 && az < 1.0)) throw bergman::domain_error("Schur ratio needs 0 < |z| < 1");
  const auto d = ranges::decompose_exponent(s_prime);
  const double k = static_cast<double>(d.k);
  const double alpha = params.delta * q;
  const double beta = params.sigma * q + s_prime - (k + 1.0);
  if (!(alpha > -1.0)) throw divergent_integral("inner Schur integral diverges at |zeta| = 1: delta q <= -1");
  if (!(beta > -2.0))
    throw divergent_integral("inner Schur integral diverges at zeta = 0: sigma q + s + k - 1 <= -2");
  const double inner = quadrature::eval_I_general(alpha, beta, z, spec);
  // T(h^q)(z) = |z|^{-(k+1)} I_{alpha,beta}(z);  h(z)^q = (1 - |z|^2)^{delta q} |z|^{sigma q}
  const double one_minus = (1.0 - az) * (1.0 + az);
  const double log_ratio = -(k + 1.0) * std::log(az) + std::log(inner) - alpha * std::log(one_minus) -
                           params.sigma * q * std::log(az);
  return std::exp(log_ratio);
}

double schur_numeric_check(double s_prime, const schur_parameters& params,
                           const std::vector<std::complex<double>>& sample_points, const quadrature_spec& spec) {
  if (!(params.p > 1.0)) throw bergman::invalid_argument("Schur parameters need p > 1");
  if (sample_points.empty()) throw bergman::invalid_argument("Schur check needs sample points");
  const double q = params.p / (params.p - 1.0);
  double sup = 0.0;
  for (const auto& z : sample_points)
    for (double e : {params.p, q}) sup = std::max(sup, schur_ratio(s_prime, params, e, z, spec));
  return sup;
}

}  // namespace bergman::projection_lab
