#include "bergman/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <optional>
#include <queue>
#include <sstream>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "bergman/errors.hpp"

namespace bergman::quadrature {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double neg_inf = -std::numeric_limits<double>::infinity();

// Neumaier compensated sum.
class compensated_sum {
public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

using gk15 = boost::math::quadrature::gauss_kronrod<double, 15>;

struct panel {
  double a;
  double b;
  double value;
  double error;
  int depth;
  bool operator<(const panel& other) const { return error < other.error; }
};

panel evaluate_panel(const std::function<double(double)>& f, double a, double b, int depth) {
  double err = 0.0;
  const double v = gk15::integrate(f, a, b, 0, 0.0, &err);
  if (!std::isfinite(v) || !std::isfinite(err)) throw divergent_integral("integrand is not finite on the panel");
  // with max_depth = 0 the error comes back in units of the reference interval [-1, 1]
  return {a, b, v, err * 0.5 * (b - a), depth};
}

constexpr std::size_t max_panels = 20000;

integration_result adaptive_core(const std::function<double(double)>& f, double a, double b,
                                 const quadrature_spec& spec) {
  if (a == b) return {0.0, 0.0};
  if (b < a) {
    auto r = adaptive_core(f, b, a, spec);
    return {-r.value, r.error_estimate};
  }
  std::priority_queue<panel> open;
  std::vector<panel> done;
  open.push(evaluate_panel(f, a, b, 0));
  double total = open.top().value;
  double total_err = open.top().error;
  while (!open.empty()) {
    const double target = std::max(spec.abs_tol, spec.rel_tol * std::abs(total));
    if (total_err <= target || open.size() + done.size() >= max_panels) break;
    panel worst = open.top();
    open.pop();
    if (worst.depth >= spec.max_subdivision_depth) {
      done.push_back(worst);
      continue;
    }
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      done.push_back(worst);
      continue;
    }
    panel left = evaluate_panel(f, worst.a, mid, worst.depth + 1);
    panel right = evaluate_panel(f, mid, worst.b, worst.depth + 1);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    open.push(left);
    open.push(right);
  }
  compensated_sum value, err;
  for (const auto& p : done) {
    value.add(p.value);
    err.add(p.error);
  }
  while (!open.empty()) {
    value.add(open.top().value);
    err.add(open.top().error);
    open.pop();
  }
  return {value.value(), err.value()};
}

// Integrates g(x, distance to a, distance to b) over [a, b] after flattening
// (x - a)^lp and (b - x)^rp.  Distances are passed separately so integrands
// can evaluate their singular factors without cancellation.
using distance_integrand = std::function<double(double, double, double)>;

integration_result power_endpoints_core(const distance_integrand& g, double a, double b, double lp, double rp,
                                        const quadrature_spec& spec) {
  if (!(lp > -1.0) || !(rp > -1.0))
    throw divergent_integral("endpoint power must exceed -1 for integrability");
  if (a == b) return {0.0, 0.0};
  const double mid = 0.5 * (a + b);
  const double hl = mid - a;
  const double hr = b - mid;
  const double gl = 1.0 / (1.0 + lp);
  const double gr = 1.0 / (1.0 + rp);
  // x - a = hl * u^gl, u in (0, 1]
  auto left = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double d = hl * std::pow(u, gl);
    const double jac = hl * gl * std::pow(u, gl - 1.0);
    return g(a + d, d, b - a - d) * jac;
  };
  auto right = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double d = hr * std::pow(u, gr);
    const double jac = hr * gr * std::pow(u, gr - 1.0);
    return g(b - d, b - a - d, d) * jac;
  };
  const auto l = adaptive_core(left, 0.0, 1.0, spec);
  const auto r = adaptive_core(right, 0.0, 1.0, spec);
  return {l.value + r.value, l.error_estimate + r.error_estimate};
}

double piece_log_integral(const power_piece& piece, double e) {
  // log of int_{lo}^{hi} r^{e-1} dr for a piece, e = exponent + w + 2
  if (piece.log_lo == neg_inf) {
    if (!(e > 0.0)) throw divergent_integral("radial piece touching r = 0 is not integrable");
    return e * piece.log_hi - std::log(e);
  }
  const double d = piece.log_lo - piece.log_hi;
  if (e == 0.0) return std::log(-d);
  return e * piece.log_hi + std::log(-std::expm1(e * d) / e);
}

}  // namespace

void quadrature_spec::validate() const {
  if (!(rel_tol > 0.0) || !(abs_tol > 0.0))
    throw bergman::invalid_argument("quadrature tolerances must be positive");
  if (max_subdivision_depth < 1) throw bergman::invalid_argument("max_subdivision_depth must be at least 1");
}

quadrature_spec quadrature_spec::tightened(double factor) const {
  quadrature_spec out = *this;
  out.rel_tol *= factor;
  return out;
}

quadrature_spec default_spec() {
  quadrature_spec spec;
  if (const char* env = std::getenv("BERGMAN_LAB_RTOL")) {
    char* end = nullptr;
    const double v = std::strtod(env, &end);
    if (end == env || *end != '\0' || !(v > 0.0) || !std::isfinite(v))
      throw bergman::invalid_argument(std::string("BERGMAN_LAB_RTOL is not a positive number: ") + env);
    spec.rel_tol = v;
  }
  return spec;
}

integration_result integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                      const quadrature_spec& spec) {
  spec.validate();
  if (!std::isfinite(a) || !std::isfinite(b)) throw bergman::invalid_argument("integration limits must be finite");
  return adaptive_core(f, a, b, spec);
}

integration_result integrate_power_endpoints(const std::function<double(double)>& f, double a, double b,
                                             double left_power, double right_power, const quadrature_spec& spec) {
  spec.validate();
  if (!std::isfinite(a) || !std::isfinite(b) || !(a <= b))
    throw bergman::invalid_argument("integration limits must be finite with a <= b");
  return power_endpoints_core([&](double x, double, double) { return f(x); }, a, b, left_power, right_power,
                              spec);
}

double weighted_moment(int m, double s_prime) {
  const double denom = 2.0 * m + 2.0 + s_prime;
  if (!(denom > 0.0)) {
    std::ostringstream os;
    os << "moment diverges: 2m + 2 + s' = " << denom << " <= 0";
    throw divergent_integral(os.str());
  }
  return 2.0 / denom;
}

double weighted_moment_quadrature(int m, double s_prime, const quadrature_spec& spec) {
  weighted_moment(m, s_prime);
  return integrate_radial_quadrature(radial_profile::power(2.0 * m), s_prime, spec);
}

radial_profile radial_profile::power(double exponent, double coefficient, double r_lo, double r_hi) {
  if (!(r_lo >= 0.0) || !(r_lo < r_hi) || !(r_hi <= 1.0))
    throw bergman::invalid_argument("power profile needs 0 <= r_lo < r_hi <= 1");
  return piecewise({{r_lo == 0.0 ? neg_inf : std::log(r_lo), std::log(r_hi), exponent, coefficient}});
}

radial_profile radial_profile::piecewise(std::vector<power_piece> pieces) {
  if (pieces.empty()) throw bergman::invalid_argument("piecewise profile needs at least one piece");
  std::sort(pieces.begin(), pieces.end(),
            [](const power_piece& x, const power_piece& y) { return x.log_lo < y.log_lo; });
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    const auto& p = pieces[i];
    if (!(p.log_lo < p.log_hi) || !(p.log_hi <= 0.0) || !std::isfinite(p.exponent) ||
        !std::isfinite(p.coefficient))
      throw bergman::invalid_argument("invalid radial piece");
    if (i + 1 < pieces.size()) {
      const double gap = pieces[i + 1].log_lo - p.log_hi;
      if (std::abs(gap) > 1e-12 * std::max(1.0, std::abs(p.log_hi)))
        throw bergman::invalid_argument("radial pieces must be contiguous and disjoint");
    }
  }
  radial_profile out;
  out.pieces_ = std::move(pieces);
  out.leading_exponent_ = out.pieces_.front().exponent;
  return out;
}

radial_profile radial_profile::generic(std::function<double(double)> f, double leading_exponent) {
  if (!f) throw bergman::invalid_argument("generic profile needs a callable");
  radial_profile out;
  out.generic_ = std::move(f);
  out.leading_exponent_ = leading_exponent;
  return out;
}

double radial_profile::operator()(double r) const {
  if (generic_) return generic_(r);
  if (!(r > 0.0)) return 0.0;
  const double lr = std::log(r);
  for (const auto& p : pieces_)
    if (lr > p.log_lo && lr <= p.log_hi) return p.coefficient * std::exp(p.exponent * lr);
  return 0.0;
}

radial_profile radial_profile::pow(double p) const {
  radial_profile out = *this;
  if (generic_) {
    auto f = generic_;
    out.generic_ = [f, p](double r) { return std::pow(std::abs(f(r)), p); };
  } else {
    for (auto& piece : out.pieces_) {
      piece.exponent *= p;
      piece.coefficient = std::pow(std::abs(piece.coefficient), p);
    }
  }
  out.leading_exponent_ = leading_exponent_ * p;
  return out;
}

radial_profile radial_profile::times_power(double shift) const {
  radial_profile out = *this;
  if (generic_) {
    auto f = generic_;
    out.generic_ = [f, shift](double r) { return f(r) * std::pow(r, shift); };
  } else {
    for (auto& piece : out.pieces_) piece.exponent += shift;
  }
  out.leading_exponent_ = leading_exponent_ + shift;
  return out;
}

double integrate_radial(const radial_profile& profile, double weight_exponent, const quadrature_spec& spec) {
  if (!profile.is_closed_form()) return integrate_radial_quadrature(profile, weight_exponent, spec);
  compensated_sum sum;
  for (const auto& piece : profile.pieces()) {
    if (piece.coefficient == 0.0) continue;
    const double e = piece.exponent + weight_exponent + 2.0;
    sum.add(2.0 * piece.coefficient * std::exp(piece_log_integral(piece, e)));
  }
  return sum.value();
}

double log_integrate_radial(const radial_profile& profile, double weight_exponent) {
  if (!profile.is_closed_form()) throw bergman::invalid_argument("log_integrate_radial needs a closed-form profile");
  std::vector<double> logs;
  logs.reserve(profile.pieces().size());
  for (const auto& piece : profile.pieces()) {
    if (piece.coefficient < 0.0) throw bergman::invalid_argument("log_integrate_radial needs nonnegative coefficients");
    if (piece.coefficient == 0.0) continue;
    const double e = piece.exponent + weight_exponent + 2.0;
    logs.push_back(std::log(2.0 * piece.coefficient) + piece_log_integral(piece, e));
  }
  if (logs.empty()) return neg_inf;
  const double top = *std::max_element(logs.begin(), logs.end());
  compensated_sum sum;
  for (double l : logs) sum.add(std::exp(l - top));
  return top + std::log(sum.value());
}

double integrate_radial_quadrature(const radial_profile& profile, double weight_exponent,
                                   const quadrature_spec& spec) {
  spec.validate();
  if (!profile.is_closed_form()) {
    const double lp = profile.leading_exponent() + weight_exponent + 1.0;
    if (!(lp > -1.0)) throw divergent_integral("radial profile is not integrable at r = 0");
    const auto res = integrate_power_endpoints(
        [&](double r) { return profile(r) * std::pow(r, weight_exponent + 1.0); }, 0.0, 1.0, lp, 0.0, spec);
    return 2.0 * res.value;
  }
  compensated_sum sum;
  for (const auto& piece : profile.pieces()) {
    if (piece.coefficient == 0.0) continue;
    const double e = piece.exponent + weight_exponent + 2.0;
    double v = 0.0;
    if (piece.log_lo == neg_inf) {
      const double hi = std::exp(piece.log_hi);
      const double lp = e - 1.0;
      if (!(lp > -1.0)) throw divergent_integral("radial piece touching r = 0 is not integrable");
      v = integrate_power_endpoints([&](double r) { return std::pow(r, lp); }, 0.0, hi, lp, 0.0, spec).value;
    } else {
      // r = exp(u) keeps super-exponentially thin pieces resolvable
      v = adaptive_core([&](double u) { return std::exp(e * u); }, piece.log_lo, piece.log_hi, spec).value;
    }
    sum.add(2.0 * piece.coefficient * v);
  }
  return sum.value();
}

namespace {

// int_0^pi d(theta) / (1 - 2 rho cos(theta) + rho^2), by quadrature
double angular_integral(double rho, double one_minus_rho, const quadrature_spec& spec) {
  const double g2 = one_minus_rho * one_minus_rho;
  auto f = [&](double theta) {
    const double sh = std::sin(0.5 * theta);
    return 1.0 / (g2 + 4.0 * rho * sh * sh);
  };
  // the peak at theta = 0 has width ~ (1 - rho); split there
  const double w = std::min(pi, std::max(8.0 * one_minus_rho, 1e-300));
  compensated_sum sum;
  double lo = 0.0;
  for (double hi = w; lo < pi; hi = std::min(pi, hi * 8.0)) {
    sum.add(adaptive_core(f, lo, hi, spec).value);
    lo = hi;
  }
  return sum.value();
}

double eval_I_impl(double alpha, double beta, std::complex<double> z, const quadrature_spec& spec) {
  spec.validate();
  const double az = std::abs(z);
  const auto inner = spec.tightened(0.1);
  // theta measured from arg z; the integrand is even in theta
  auto g = [&](double r, double, double dist_to_one) {
    const double rho = az * r;
    const double one_minus_rho = (1.0 - az) + az * dist_to_one;
    const double one_minus_r2 = dist_to_one * (1.0 + r);
    const double ang = az == 0.0 ? pi : angular_integral(rho, one_minus_rho, inner);
    return std::pow(one_minus_r2, alpha) * std::pow(r, beta + 1.0) * ang;
  };
  const auto res = power_endpoints_core(g, 0.0, 1.0, beta + 1.0, alpha, spec);
  return 2.0 / pi * res.value;
}

}  // namespace

double eval_I_alpha_beta(double alpha, double beta, std::complex<double> z, const quadrature_spec& spec) {
  if (!(alpha > -1.0 && alpha < 0.0)) throw bergman::invalid_argument("eval_I_alpha_beta needs -1 < alpha < 0");
  if (!(beta > -2.0)) throw bergman::invalid_argument("eval_I_alpha_beta needs beta > -2");
  const double az = std::abs(z);
  if (!(az > 0.0 && az < 1.0)) throw bergman::invalid_argument("eval_I_alpha_beta needs 0 < |z| < 1");
  return eval_I_impl(alpha, beta, z, spec);
}

double eval_I_general(double alpha, double beta, std::complex<double> z, const quadrature_spec& spec) {
  if (!(alpha > -1.0) || !std::isfinite(alpha)) throw bergman::invalid_argument("eval_I_general needs alpha > -1");
  if (!(beta > -2.0) || !std::isfinite(beta)) throw bergman::invalid_argument("eval_I_general needs beta > -2");
  if (!(std::abs(z) < 1.0)) throw bergman::invalid_argument("eval_I_general needs |z| < 1");
  return eval_I_impl(alpha, beta, z, spec);
}

std::complex<double> center_of(const disk_region& disk) {
  return std::visit(
      [](const auto& d) -> std::complex<double> {
        if constexpr (std::is_same_v<std::decay_t<decltype(d)>, special_disk>)
          return {d.x0, 0.0};
        else
          return d.center;
      },
      disk);
}

double radius_of(const disk_region& disk) {
  return std::visit([](const auto& d) { return d.radius; }, disk);
}

void validate(const disk_region& disk) {
  const double r = radius_of(disk);
  const auto c = center_of(disk);
  if (!(r > 0.0) || !std::isfinite(r)) throw bergman::invalid_argument("disk radius must be positive and finite");
  if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
    throw bergman::invalid_argument("disk center must be finite");
  if (c.imag() < 0.0) throw bergman::invalid_argument("disk center must lie in the closed upper half plane");
}

double half_disk_area(const disk_region& disk) {
  validate(disk);
  const double r = radius_of(disk);
  const double h = center_of(disk).imag();
  if (h >= r) return r * r;
  const double cap = r * r * std::acos(h / r) - h * std::sqrt(r * r - h * h);
  return (pi * r * r - cap) / pi;
}

bool contains_i(const disk_region& disk) {
  validate(disk);
  return std::abs(std::complex<double>(0.0, 1.0) - center_of(disk)) <= radius_of(disk) * (1.0 + 1e-15);
}

namespace {

struct ray_segment {
  double lo;
  double hi;
};

// Part of the ray P + rho e^{i theta}, rho >= 0, inside D and the upper half plane.
std::optional<ray_segment> segment_on_ray(std::complex<double> P, std::complex<double> c, double R, double theta) {
  const std::complex<double> e = std::polar(1.0, theta);
  const std::complex<double> d = P - c;
  const double b = d.real() * e.real() + d.imag() * e.imag();
  const double q = std::norm(d) - R * R;
  const double disc = b * b - q;
  if (disc <= 0.0) return std::nullopt;
  const double sq = std::sqrt(disc);
  double hi = -b + sq;
  // stable smaller root
  double lo = (q == 0.0) ? 0.0 : q / hi;
  if (hi <= 0.0) return std::nullopt;
  lo = std::max(lo, 0.0);
  const double s = e.imag();
  if (s < 0.0) {
    hi = std::min(hi, -P.imag() / s);
  } else if (s == 0.0 && P.imag() <= 0.0) {
    return std::nullopt;
  }
  if (!(hi > lo)) return std::nullopt;
  return ray_segment{lo, hi};
}

double wrap_angle(double a) {
  while (a < 0.0) a += 2.0 * pi;
  while (a >= 2.0 * pi) a -= 2.0 * pi;
  return a;
}

}  // namespace

double integrate_half_disk(const half_plane_weight& weight, const disk_region& disk, const quadrature_spec& spec) {
  validate(disk);
  spec.validate();
  const std::complex<double> I{0.0, 1.0};
  const std::complex<double> c = center_of(disk);
  const double R = radius_of(disk);
  const double ei = weight.exponent_at_i();
  const bool touches_i = contains_i(disk);
  if (touches_i && ei <= -2.0) {
    std::ostringstream f, t;
    f << weight.describe() << " (total exponent " << ei << " of |i-z|)";
    t << "exponent of |i-z| > -2 on a region containing i";
    throw analytic_nonintegrable(f.str(), t.str());
  }

  const bool about_i = ei != 0.0;
  const std::complex<double> P = about_i ? I : c;
  const double inner_left_power = (about_i && touches_i) ? ei + 1.0 : 1.0;

  // angular breakpoints: corners of the region, tangents from P, axis directions
  std::vector<double> cuts{0.0, 0.5 * pi, pi, 1.5 * pi};
  std::vector<double> tangents;
  const double h = c.imag();
  if (h < R) {
    const double w = std::sqrt(R * R - h * h);
    for (double x : {c.real() - w, c.real() + w}) {
      const std::complex<double> corner{x, 0.0};
      if (std::abs(corner - P) > 0.0) cuts.push_back(wrap_angle(std::arg(corner - P)));
    }
  }
  const double dist = std::abs(c - P);
  if (dist >= R && dist > 0.0) {
    const double base = std::arg(c - P);
    const double half = std::asin(std::min(1.0, R / dist));
    for (double a : {base - half, base + half}) {
      tangents.push_back(wrap_angle(a));
      cuts.push_back(wrap_angle(a));
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(2.0 * pi);
  auto is_tangent = [&](double a) {
    for (double t : tangents)
      if (std::abs(t - a) < 1e-14 || std::abs(std::abs(t - a) - 2.0 * pi) < 1e-14) return true;
    return false;
  };

  const auto inner_spec = spec.tightened(0.1);
  auto radial = [&](double theta) {
    const auto seg = segment_on_ray(P, c, R, theta);
    if (!seg) return 0.0;
    const std::complex<double> e = std::polar(1.0, theta);
    auto g = [&](double rho, double, double) {
      return (about_i ? weight.at_offset_from_i(rho * e) : weight(P + rho * e)) * rho;
    };
    const double lp = seg->lo == 0.0 ? inner_left_power : 0.0;
    return power_endpoints_core(g, seg->lo, seg->hi, lp, 0.0, inner_spec).value;
  };

  compensated_sum sum;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    if (!(b - a > 1e-15)) continue;
    const double mid = 0.5 * (a + b);
    if (!segment_on_ray(P, c, R, mid)) continue;
    const double lp = is_tangent(a) ? 0.5 : 0.0;
    const double rp = is_tangent(b) ? 0.5 : 0.0;
    sum.add(power_endpoints_core([&](double t, double, double) { return radial(t); }, a, b, lp, rp, spec).value);
  }
  return sum.value() / pi;
}

}  // namespace bergman::quadrature
