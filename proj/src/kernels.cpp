#include "bergman/kernels.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bergman/errors.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/ranges.hpp"

namespace bergman::kernels {

namespace {

constexpr double singular_guard = 1e-14;
const complex I{0.0, 1.0};

bool finite(complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

}  // namespace

disk_point::disk_point(complex value) : value_(value) {
  if (!finite(value) || !(std::abs(value) < 1.0)) {
    std::ostringstream os;
    os << "point " << value << " is not in the open unit disk";
    throw bergman::domain_error(os.str());
  }
}

hartogs_point::hartogs_point(complex z1, complex z2) : z1_(z1), z2_(z2) {
  if (!finite(z1) || !finite(z2) || !(std::abs(z1) < std::abs(z2)) || !(std::abs(z2) < 1.0)) {
    std::ostringstream os;
    os << "point (" << z1 << ", " << z2 << ") is not in the Hartogs triangle";
    throw bergman::domain_error(os.str());
  }
}

half_plane_point::half_plane_point(complex value) : value_(value) {
  if (!finite(value) || !(value.imag() > 0.0)) {
    std::ostringstream os;
    os << "point " << value << " is not in the upper half plane";
    throw bergman::domain_error(os.str());
  }
}

complex ipow(complex z, std::int64_t n) {
  if (n < 0) return 1.0 / ipow(z, -n);
  complex result = 1.0;
  while (n > 0) {
    if (n & 1) result *= z;
    z *= z;
    n >>= 1;
  }
  return result;
}

namespace {

complex disk_kernel_raw(complex z, complex zeta) {
  const complex d = 1.0 - z * std::conj(zeta);
  if (std::abs(d) < singular_guard) throw near_singular("|1 - z conj(zeta)| below 1e-14");
  return 1.0 / (d * d);
}

}  // namespace

complex disk_kernel(const disk_point& z, const disk_point& zeta) { return disk_kernel_raw(z.value(), zeta.value()); }

std::int64_t closed_form_index(double s_prime) {
  if (!std::isfinite(s_prime)) throw bergman::invalid_argument("s' must be finite");
  const double h = -s_prime / 2.0;
  return static_cast<std::int64_t>(std::floor(h)) + 1;
}

namespace {

complex punctured_raw(double s_prime, complex z, complex zeta, punctured_method method) {
  if (z == 0.0 || zeta == 0.0) throw bergman::domain_error("punctured kernel is undefined at the origin");
  const complex w = z * std::conj(zeta);
  const complex b0 = disk_kernel_raw(z, zeta);
  if (method == punctured_method::closed) {
    const std::int64_t t = closed_form_index(s_prime);
    const double td = static_cast<double>(t);
    const complex wt1 = ipow(w, t - 1);
    return ((td + s_prime / 2.0) * wt1 - (td - 1.0 + s_prime / 2.0) * wt1 * w) * b0;
  }
  const auto d = ranges::decompose_exponent(s_prime);
  const complex wk = ipow(w, -d.k);
  return (d.s / 2.0) * (wk / w) * b0 + (1.0 - d.s / 2.0) * wk * b0;
}

}  // namespace

complex punctured_kernel(double s_prime, const disk_point& z, const disk_point& zeta, punctured_method method) {
  return punctured_raw(s_prime, z.value(), zeta.value(), method);
}

nonvanishing_holomorphic nonvanishing_holomorphic::one() {
  nonvanishing_holomorphic g;
  g.kind_ = kind::identity;
  g.label_ = "identity";
  return g;
}

nonvanishing_holomorphic nonvanishing_holomorphic::power_of_z_minus_one(double alpha) {
  if (!std::isfinite(alpha)) throw bergman::invalid_argument("alpha must be finite");
  nonvanishing_holomorphic g;
  g.kind_ = kind::power_of_z_minus_one;
  g.alpha_ = alpha;
  std::ostringstream os;
  os << "(z-1)^" << alpha;
  g.label_ = os.str();
  return g;
}

nonvanishing_holomorphic nonvanishing_holomorphic::user_supplied(std::function<complex(complex)> fn,
                                                                 std::string label) {
  if (!fn) throw bergman::invalid_argument("user-supplied map is empty");
  for (double r : {0.0, 0.25, 0.5, 0.75, 0.9, 0.99}) {
    for (int j = 0; j < 32; ++j) {
      const complex z = std::polar(r, 2.0 * std::numbers::pi * j / 32.0);
      const complex v = fn(z);
      if (!finite(v) || v == 0.0) {
        std::ostringstream os;
        os << "user-supplied map vanishes or is not finite at " << z;
        throw bergman::invalid_argument(os.str());
      }
    }
  }
  nonvanishing_holomorphic g;
  g.kind_ = kind::user_supplied;
  g.fn_ = std::move(fn);
  g.label_ = std::move(label);
  return g;
}

complex nonvanishing_holomorphic::operator()(complex z) const {
  switch (kind_) {
    case kind::identity: return 1.0;
    case kind::power_of_z_minus_one:
      // exp(i pi alpha) (1 - z)^alpha with the principal power of 1 - z
      return std::polar(1.0, std::numbers::pi * alpha_) * std::pow(1.0 - z, alpha_);
    case kind::user_supplied: return fn_(z);
  }
  return 1.0;
}

complex g_weighted_kernel(const nonvanishing_holomorphic& g, const disk_point& z, const disk_point& zeta) {
  const complex gz = g(z.value());
  const complex gzeta = g(zeta.value());
  if (!finite(gz) || !finite(gzeta) || gz == 0.0 || gzeta == 0.0)
    throw bergman::domain_error("g vanishes or is not finite at an evaluation point");
  return disk_kernel(z, zeta) / (gz * std::conj(gzeta));
}

double hartogs_series_coefficient(std::int64_t a, std::int64_t b, double s_prime) {
  // reciprocal of weighted_moment(a, 0) * weighted_moment(a + b + 1, s')
  const double m1 = quadrature::weighted_moment(static_cast<int>(a), 0.0);
  const double m2 = quadrature::weighted_moment(static_cast<int>(a + b + 1), s_prime);
  return 1.0 / (m1 * m2);
}

namespace {

complex hartogs_transform(double s_prime, const hartogs_point& z, const hartogs_point& zeta) {
  const complex u = z.z1() / z.z2();
  const complex v = zeta.z1() / zeta.z2();
  return disk_kernel_raw(u, v) * punctured_raw(s_prime, z.z2(), zeta.z2(), punctured_method::closed) /
         (z.z2() * std::conj(zeta.z2()));
}

struct partial {
  complex value;
  std::int64_t terms;
};

partial hartogs_partial(double s_prime, complex x, complex y, int M) {
  const complex ratio = x / y;
  complex sum = 0.0;
  std::int64_t terms = 0;
  complex ra = 1.0;
  for (std::int64_t a = 0; a <= M; ++a) {
    const std::int64_t b_min = static_cast<std::int64_t>(std::floor(-static_cast<double>(a) - 2.0 - s_prime / 2.0)) + 1;
    complex inner = 0.0;
    for (std::int64_t b = b_min; b <= M; ++b) {
      inner += (static_cast<double>(a + 1) * (2.0 * a + 2.0 * b + s_prime + 4.0) / 2.0) * ipow(y, a + b);
      ++terms;
    }
    sum += ra * inner;
    ra *= ratio;
  }
  return {sum, terms};
}

}  // namespace

series_result hartogs_kernel_series(double s_prime, const hartogs_point& z, const hartogs_point& zeta, int M) {
  if (M <= 0) throw bergman::invalid_argument("series cutoff M must be positive");
  if (!std::isfinite(s_prime)) throw bergman::invalid_argument("s' must be finite");
  const complex x = z.z1() * std::conj(zeta.z1());
  const complex y = z.z2() * std::conj(zeta.z2());
  const partial s2 = hartogs_partial(s_prime, x, y, M);
  if (M < 3) return {s2.value, std::numeric_limits<double>::infinity(), s2.terms};
  const partial s1 = hartogs_partial(s_prime, x, y, M - 1);
  const partial s0 = hartogs_partial(s_prime, x, y, M - 2);
  const double d1 = std::abs(s1.value - s0.value);
  const double d2 = std::abs(s2.value - s1.value);
  double tail = std::numeric_limits<double>::infinity();
  if (d2 == 0.0)
    tail = 0.0;
  else if (d1 > 0.0 && d2 < d1) {
    const double q = d2 / d1;
    tail = d2 * q / (1.0 - q);
  }
  return {s2.value, tail, s2.terms};
}

complex hartogs_kernel(double s_prime, const hartogs_point& z, const hartogs_point& zeta,
                       const hartogs_method& method) {
  if (!std::isfinite(s_prime)) throw bergman::invalid_argument("s' must be finite");
  if (const auto* series = std::get_if<series_method>(&method))
    return hartogs_kernel_series(s_prime, z, zeta, series->M).value;
  return hartogs_transform(s_prime, z, zeta);
}

disk_point cayley(const half_plane_point& z) { return disk_point((I - z.value()) / (I + z.value())); }

half_plane_point cayley_inverse(const disk_point& w) {
  if (w.value() == -1.0) throw bergman::domain_error("Cayley inverse is undefined at w = -1");
  return half_plane_point(I * (1.0 - w.value()) / (1.0 + w.value()));
}

}  // namespace bergman::kernels
