#include "bergman/muckenhoupt.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include "bergman/errors.hpp"

namespace bergman::muckenhoupt {

namespace {

constexpr double pi = std::numbers::pi;
const std::complex<double> I{0.0, 1.0};

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

void require_p(double p) {
  if (!(p > 1.0) || !std::isfinite(p)) throw bergman::invalid_argument("p must exceed 1");
}

double radius_key(const disk_region& d) { return quadrature::radius_of(d); }

// Rising by more than a factor 4 over three consecutive levels, read from
// the outer end inward.
bool rising_end(const std::vector<trace_entry>& trace, bool small_end) {
  if (trace.size() < 3) return false;
  const std::size_t n = trace.size();
  const double v0 = small_end ? trace[0].sup : trace[n - 1].sup;
  const double v1 = small_end ? trace[1].sup : trace[n - 2].sup;
  const double v2 = small_end ? trace[2].sup : trace[n - 3].sup;
  return v0 > v1 && v1 > v2 && v0 > 4.0 * v2;
}

double least_squares_slope(const std::vector<std::pair<double, double>>& pts) {
  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : pts) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(pts.size());
  my /= static_cast<double>(pts.size());
  double sxy = 0.0, sxx = 0.0;
  for (const auto& [x, y] : pts) {
    sxy += (x - mx) * (y - my);
    sxx += (x - mx) * (x - mx);
  }
  return sxy / sxx;
}

void finish_verdict(ap_verdict& out) {
  std::sort(out.witnesses.begin(), out.witnesses.end(),
            [](const witness& a, const witness& b) { return a.quotient > b.quotient; });
  if (out.witnesses.size() > 8) out.witnesses.resize(8);
  std::sort(out.refinement_trace.begin(), out.refinement_trace.end(),
            [](const trace_entry& a, const trace_entry& b) { return a.scale < b.scale; });
  const bool small = rising_end(out.refinement_trace, true);
  const bool large = rising_end(out.refinement_trace, false);
  if (small || large) {
    out.outcome = verdict::divergent;
    out.notes = small ? "sup grows without bound as the radius shrinks" : "sup grows without bound as the radius grows";
  } else {
    out.outcome = verdict::bounded_evidence;
    out.notes = "sup stable over the last three levels at both ends of the radius ladder";
  }
}

}  // namespace

double ap_quotient(const half_plane_weight& mu1, const half_plane_weight& mu2, double p, const disk_region& disk,
                   const quadrature_spec& spec) {
  require_p(p);
  const double area = quadrature::half_disk_area(disk);
  const half_plane_weight dual = mu2.pow(-1.0 / (p - 1.0));
  double avg1 = 0.0, avg2 = 0.0;
  try {
    avg1 = quadrature::integrate_half_disk(mu1, disk, spec) / area;
  } catch (const analytic_nonintegrable& e) {
    throw analytic_nonintegrable("mu1 = " + e.factor(), e.threshold());
  }
  try {
    avg2 = quadrature::integrate_half_disk(dual, disk, spec) / area;
  } catch (const analytic_nonintegrable& e) {
    throw analytic_nonintegrable("mu2^(-1/(p-1)) = " + e.factor(), e.threshold());
  }
  return avg1 * std::pow(avg2, p - 1.0);
}

std::string to_string(verdict v) {
  switch (v) {
    case verdict::bounded_evidence: return "bounded-evidence";
    case verdict::divergent: return "divergent";
    case verdict::analytic_nonintegrable: return "analytic-nonintegrable";
  }
  return "?";
}

std::string to_string(scan_mode m) { return m == scan_mode::special ? "special" : "general"; }

disk_family disk_family::standard() {
  disk_family f;
  f.centers = {0.0, 1.0, -1.0, 4.0, -4.0, 16.0, -16.0};
  for (int m = -10; m <= 10; ++m) f.radii.push_back(std::ldexp(1.0, m));
  return f;
}

ap_verdict ap_plus_scan(const half_plane_weight& mu1, const half_plane_weight& mu2, double p,
                        const disk_family& family, scan_mode mode, const quadrature_spec& spec,
                        const progress_callback& progress) {
  require_p(p);
  if (family.centers.empty() || family.radii.empty()) throw bergman::invalid_argument("disk family is empty");
  std::vector<double> radii = family.radii;
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());

  std::vector<disk_region> disks;
  for (double r : radii) {
    for (double x0 : family.centers) disks.push_back(special_disk{x0, r});
    if (mode == scan_mode::general) disks.push_back(general_disk{I, r});
  }

  ap_verdict out;
  std::map<double, double> sup_by_radius;
  std::vector<std::pair<double, double>> at_i;
  for (std::size_t idx = 0; idx < disks.size(); ++idx) {
    const auto& d = disks[idx];
    double q = 0.0;
    try {
      q = ap_quotient(mu1, mu2, p, d, spec);
    } catch (const analytic_nonintegrable& e) {
      out.outcome = verdict::analytic_nonintegrable;
      out.sup_quotient = std::numeric_limits<double>::infinity();
      out.witnesses.push_back({d, out.sup_quotient});
      out.notes = e.what();
      return out;
    }
    out.witnesses.push_back({d, q});
    out.sup_quotient = std::max(out.sup_quotient, q);
    auto [it, inserted] = sup_by_radius.emplace(radius_key(d), q);
    if (!inserted) it->second = std::max(it->second, q);
    if (std::holds_alternative<general_disk>(d)) at_i.emplace_back(std::log(radius_key(d)), std::log(q));
    if (progress) progress(idx + 1, disks.size());
  }
  for (const auto& [r, s] : sup_by_radius) out.refinement_trace.push_back({r, s});
  if (at_i.size() >= 3) {
    std::sort(at_i.begin(), at_i.end());
    out.log_slope = least_squares_slope({at_i.begin(), at_i.begin() + 3});
  }
  finish_verdict(out);
  return out;
}

half_plane_weight sigma_weight(double p) {
  require_p(p);
  return half_plane_weight({{weight_base::dist_to_minus_i, -2.0 * (2.0 - p)}});
}

weight_pair separation_pair(double s, std::int64_t k, double p) {
  require_p(p);
  const double kd = static_cast<double>(k);
  return {half_plane_weight({{weight_base::cayley_modulus, -(kd + 1.0) * p + s + 2.0 * kd}}),
          half_plane_weight({{weight_base::cayley_modulus, (1.0 - s - kd) * p + s + 2.0 * kd}})};
}

bool separation_conditions(double s, std::int64_t k, double p) {
  const double kd = static_cast<double>(k);
  return s + 2.0 * kd + 2.0 > (kd + 1.0) * p && p * (s + kd + 1.0) > s + 2.0 * kd + 2.0;
}

double tiling_square::side() const { return std::ldexp(1.0, k); }
double tiling_square::x_lo() const { return static_cast<double>(j) * side(); }
double tiling_square::x_hi() const { return static_cast<double>(j + 1) * side(); }
double tiling_square::y_lo() const { return side(); }
double tiling_square::y_hi() const { return 2.0 * side(); }
double tiling_square::area() const { return side() * side() / pi; }
std::complex<double> tiling_square::center() const { return {x_lo() + 0.5 * side(), 1.5 * side()}; }
bool tiling_square::contains(std::complex<double> z) const {
  return z.real() >= x_lo() && z.real() <= x_hi() && z.imag() >= y_lo() && z.imag() <= y_hi();
}

tiling_square tile_of(std::complex<double> z) {
  if (!(z.imag() > 0.0) || !std::isfinite(z.imag()) || !std::isfinite(z.real()))
    throw bergman::domain_error("tile_of needs a point of the upper half plane");
  const int k = std::ilogb(z.imag());
  const double side = std::ldexp(1.0, k);
  return {static_cast<std::int64_t>(std::floor(z.real() / side)), k};
}

step_function::step_function(int depth) : depth_(depth) {
  if (depth < 0 || depth > 12) throw bergman::invalid_argument("step function depth must be in [0, 12]");
}

void step_function::set(const tiling_square& t, double value) { set(t, std::vector<double>(cells_per_tile(), value)); }

void step_function::set(const tiling_square& t, std::vector<double> values) {
  if (values.size() != cells_per_tile()) throw bergman::invalid_argument("wrong number of subcell values");
  for (double v : values)
    if (!(v >= 0.0) || !std::isfinite(v)) throw bergman::invalid_argument("step values must be finite and nonnegative");
  cells_[t] = std::move(values);
}

double step_function::value_at(std::complex<double> z) const {
  const auto t = tile_of(z);
  const auto it = cells_.find(t);
  if (it == cells_.end()) return 0.0;
  const std::int64_t n = std::int64_t{1} << depth_;
  const double side = t.side();
  auto idx = [&](double offset) {
    return std::clamp<std::int64_t>(static_cast<std::int64_t>(std::floor(offset / side * static_cast<double>(n))), 0,
                                    n - 1);
  };
  const std::int64_t ix = idx(z.real() - t.x_lo());
  const std::int64_t iy = idx(z.imag() - t.y_lo());
  return it->second[static_cast<std::size_t>(iy * n + ix)];
}

step_function step_function::refined(int depth) const {
  if (depth < depth_) throw bergman::invalid_argument("refined() cannot coarsen");
  if (depth == depth_) return *this;
  step_function out(depth);
  const int shift = depth - depth_;
  const std::size_t n = std::size_t{1} << depth;
  const std::size_t n0 = std::size_t{1} << depth_;
  for (const auto& [t, v] : cells_) {
    std::vector<double> values(n * n);
    for (std::size_t iy = 0; iy < n; ++iy)
      for (std::size_t ix = 0; ix < n; ++ix) values[iy * n + ix] = v[(iy >> shift) * n0 + (ix >> shift)];
    out.cells_[t] = std::move(values);
  }
  return out;
}

step_function step_function::pow(double p) const {
  step_function out = *this;
  for (auto& [t, v] : out.cells_)
    for (auto& x : v) x = std::pow(x, p);
  return out;
}

double step_function::integral() const {
  neumaier sum;
  const double cells = static_cast<double>(cells_per_tile());
  for (const auto& [t, v] : cells_) {
    neumaier tile;
    for (double x : v) tile.add(x);
    sum.add(t.area() / cells * tile.value());
  }
  return sum.value();
}

step_function operator*(const step_function& f, const step_function& g) {
  const int depth = std::max(f.depth_, g.depth_);
  const step_function F = f.refined(depth);
  const step_function G = g.refined(depth);
  step_function out(depth);
  for (const auto& [t, v] : F.cells_) {
    const auto it = G.cells_.find(t);
    if (it == G.cells_.end()) continue;
    std::vector<double> values(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) values[i] = v[i] * it->second[i];
    out.cells_[t] = std::move(values);
  }
  return out;
}

step_function averaging_E(const step_function& f) {
  step_function out(0);
  for (const auto& [t, v] : f.cells()) {
    neumaier sum;
    for (double x : v) sum.add(x);
    out.set(t, sum.value() / static_cast<double>(v.size()));
  }
  return out;
}

step_function averaging_E(const step_function& f, const std::vector<tiling_square>& support) {
  const step_function all = averaging_E(f);
  step_function out(0);
  for (const auto& t : support) {
    const auto it = all.cells().find(t);
    out.set(t, it == all.cells().end() ? 0.0 : it->second.front());
  }
  return out;
}

namespace {

double square_integral(const std::function<double(std::complex<double>)>& f, const tiling_square& t,
                       const quadrature_spec& spec) {
  const auto inner_spec = spec.tightened(0.1);
  auto outer = [&](double x) {
    return quadrature::integrate_adaptive([&](double y) { return f({x, y}); }, t.y_lo(), t.y_hi(), inner_spec).value;
  };
  return quadrature::integrate_adaptive(outer, t.x_lo(), t.x_hi(), spec).value;
}

bool has_corner_at_i(const tiling_square& t) {
  return (t.x_lo() == 0.0 || t.x_hi() == 0.0) && (t.y_lo() == 1.0 || t.y_hi() == 1.0);
}

// Lebesgue integral of w over a tile with a corner at i, in polar coordinates about i.
double corner_integral(const half_plane_weight& w, const tiling_square& t, const quadrature_spec& spec) {
  const double side = t.side();
  const double sx = t.x_lo() == 0.0 ? 1.0 : -1.0;
  const double sy = t.y_lo() == 1.0 ? 1.0 : -1.0;
  const double lp = w.exponent_at_i() + 1.0;
  const auto inner_spec = spec.tightened(0.1);
  // angle phi in [0, pi/2] inside the quadrant (sx, sy)
  auto ray = [&](double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    const double rho_max = std::min(c > 0.0 ? side / c : HUGE_VAL, s > 0.0 ? side / s : HUGE_VAL);
    const std::complex<double> e{sx * c, sy * s};
    const auto integrand = [&](double rho) { return w.at_offset_from_i(rho * e) * rho; };
    return quadrature::integrate_power_endpoints(integrand, 0.0, rho_max, lp, 0.0, inner_spec).value;
  };
  return quadrature::integrate_adaptive(ray, 0.0, pi / 4.0, spec).value +
         quadrature::integrate_adaptive(ray, pi / 4.0, pi / 2.0, spec).value;
}

}  // namespace

step_function averaging_E(const std::function<double(std::complex<double>)>& f,
                          const std::vector<tiling_square>& support, const quadrature_spec& spec) {
  step_function out(0);
  for (const auto& t : support) {
    const double avg = square_integral(f, t, spec) / (t.side() * t.side());
    if (!std::isfinite(avg)) throw divergent_integral("tile average is not finite");
    out.set(t, avg);
  }
  return out;
}

step_function averaging_E(const half_plane_weight& w, const std::vector<tiling_square>& support,
                          const quadrature_spec& spec) {
  step_function out(0);
  for (const auto& t : support) {
    double integral = 0.0;
    if (w.exponent_at_i() != 0.0 && has_corner_at_i(t)) {
      if (w.exponent_at_i() <= -2.0)
        throw analytic_nonintegrable(w.describe(), "exponent of |i-z| > -2 on a tile touching i");
      integral = corner_integral(w, t, spec);
    } else {
      integral = square_integral([&](std::complex<double> z) { return w(z); }, t, spec);
    }
    out.set(t, integral / (t.side() * t.side()));
  }
  return out;
}

e_property_report check_E_properties(const step_function& f, const step_function& g, double p) {
  require_p(p);
  constexpr double tol = 1e-12;
  const int d = std::max(f.depth(), g.depth());
  const step_function F = f.refined(d);
  const step_function G = g.refined(d);
  const step_function Ef = averaging_E(F);
  const step_function Eg = averaging_E(G);
  auto rel = [](double a, double b) { return std::max({std::abs(a), std::abs(b), 1e-300}); };

  e_property_report r{};
  {
    const double lhs = (Ef.refined(d) * G).integral();
    const double rhs = (Ef * Eg).integral();
    r.a_residual = std::abs(lhs - rhs) / rel(lhs, rhs);
    r.a = r.a_residual <= tol;
  }
  {
    const double lhs = (Ef.pow(p).refined(d) * G).integral();
    const double rhs = (averaging_E(F.pow(p)).refined(d) * G).integral();
    r.b_margin = (rhs - lhs) / rel(lhs, rhs);
    r.b = r.b_margin >= -tol;
  }
  {
    const double q = p / (p - 1.0);
    const step_function Efg = averaging_E(F * G);
    const step_function Efp = averaging_E(F.pow(p));
    const step_function Egq = averaging_E(G.pow(q));
    double margin = std::numeric_limits<double>::infinity();
    for (const auto& [t, v] : Efg.cells()) {
      const double lhs = v.front();
      const double rhs = std::pow(Efp.cells().at(t).front(), 1.0 / p) * std::pow(Egq.cells().at(t).front(), 1.0 / q);
      margin = std::min(margin, (rhs - lhs) / rel(lhs, rhs));
    }
    r.c_margin = std::isfinite(margin) ? margin : 0.0;
    r.c = r.c_margin >= -tol;
  }
  return r;
}

namespace {

struct grid_point {
  std::complex<double> z;
  double weight;
  std::size_t tile;
};

struct probe_grid {
  std::vector<tiling_square> tiles;
  std::vector<grid_point> points;
};

probe_grid make_probe_grid(const probe_options& o) {
  if (!(o.truncation.x_lo < o.truncation.x_hi) || !(o.truncation.y_hi > 0.0))
    throw bergman::invalid_argument("truncation rectangle is empty");
  if (o.grid_per_tile < 1) throw bergman::invalid_argument("grid_per_tile must be positive");
  probe_grid g;
  const int g1 = o.grid_per_tile;
  for (int k = o.min_level; std::ldexp(1.0, k) < o.truncation.y_hi; ++k) {
    const double side = std::ldexp(1.0, k);
    const auto j_lo = static_cast<std::int64_t>(std::floor(o.truncation.x_lo / side));
    const auto j_hi = static_cast<std::int64_t>(std::ceil(o.truncation.x_hi / side));
    for (std::int64_t j = j_lo; j < j_hi; ++j) {
      const tiling_square t{j, k};
      const std::size_t ti = g.tiles.size();
      g.tiles.push_back(t);
      const double h = side / g1;
      for (int iy = 0; iy < g1; ++iy)
        for (int ix = 0; ix < g1; ++ix)
          g.points.push_back({{t.x_lo() + (ix + 0.5) * h, t.y_lo() + (iy + 0.5) * h}, h * h / pi, ti});
    }
  }
  return g;
}

struct source_point {
  std::complex<double> w;
  double mass;  // f(w) * cell area / pi
  double value;
  double area;
};

std::vector<source_point> sources_of(const step_function& f, int per_side) {
  std::vector<source_point> out;
  for (const auto& [t, v] : f.cells()) {
    const double h = t.side() / per_side;
    for (int iy = 0; iy < per_side; ++iy)
      for (int ix = 0; ix < per_side; ++ix) {
        const std::complex<double> w{t.x_lo() + (ix + 0.5) * h, t.y_lo() + (iy + 0.5) * h};
        const double value = f.value_at(w);
        out.push_back({w, value * h * h / pi, value, h * h / pi});
      }
  }
  return out;
}

std::vector<double> apply_absolute_kernel(const std::vector<source_point>& src, const probe_grid& grid) {
  std::vector<double> out(grid.points.size());
  for (std::size_t i = 0; i < grid.points.size(); ++i) {
    neumaier sum;
    const auto z = grid.points[i].z;
    for (const auto& s : src) sum.add(s.mass / std::norm(z - std::conj(s.w)));
    out[i] = sum.value();
  }
  return out;
}

bool touches_i(const tiling_square& t) { return t.contains(I); }

}  // namespace

probe_result two_weight_probe(const half_plane_weight& mu1, const half_plane_weight& mu2, double p,
                              const std::vector<step_function>& test_family, const probe_options& options,
                              const quadrature_spec& spec) {
  require_p(p);
  spec.validate();
  const probe_grid grid = make_probe_grid(options);
  const int per_side = std::max(options.grid_per_tile, 1);

  bool mu1_divergent = false;
  if (mu1.exponent_at_i() <= -2.0)
    for (const auto& t : grid.tiles) mu1_divergent = mu1_divergent || touches_i(t);

  std::vector<double> mu1_at(grid.points.size());
  for (std::size_t i = 0; i < grid.points.size(); ++i) mu1_at[i] = mu1(grid.points[i].z);

  probe_result out;
  for (std::size_t fi = 0; fi < test_family.size(); ++fi) {
    const auto& f = test_family[fi];
    bool divergent = mu1_divergent;
    if (mu2.exponent_at_i() <= -2.0)
      for (const auto& [t, v] : f.cells()) divergent = divergent || touches_i(t);
    if (divergent) {
      out.divergent.push_back(fi);
      continue;
    }
    const auto src = sources_of(f, per_side);
    neumaier norm_f;
    for (const auto& s : src) norm_f.add(std::pow(s.value, p) * mu2(s.w) * s.area);
    if (!(norm_f.value() > 0.0)) throw bergman::invalid_argument("test function vanishes on its support");

    const auto Bf = apply_absolute_kernel(src, grid);
    neumaier norm_Bf;
    for (std::size_t i = 0; i < grid.points.size(); ++i)
      norm_Bf.add(std::pow(Bf[i], p) * mu1_at[i] * grid.points[i].weight);
    out.ratios.push_back(std::pow(norm_Bf.value(), 1.0 / p) / std::pow(norm_f.value(), 1.0 / p));
    out.indices.push_back(fi);

    // B f <= c E B E f on the grid
    const auto BEf = apply_absolute_kernel(sources_of(averaging_E(f), per_side), grid);
    std::vector<neumaier> tile_sum(grid.tiles.size());
    std::vector<double> tile_area(grid.tiles.size(), 0.0);
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      tile_sum[grid.points[i].tile].add(BEf[i] * grid.points[i].weight);
      tile_area[grid.points[i].tile] += grid.points[i].weight;
    }
    for (std::size_t i = 0; i < grid.points.size(); ++i) {
      const std::size_t t = grid.points[i].tile;
      const double ebef = tile_sum[t].value() / tile_area[t];
      if (ebef > 0.0) out.e_domination_c = std::max(out.e_domination_c, Bf[i] / ebef);
    }
  }
  if (!out.ratios.empty()) {
    out.max_ratio = *std::max_element(out.ratios.begin(), out.ratios.end());
    std::vector<double> sorted = out.ratios;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    out.median_ratio = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  }
  return out;
}

ap_verdict averaged_pair_scan(const half_plane_weight& mu1, const half_plane_weight& mu2, double p,
                              const std::vector<std::complex<double>>& centers, const std::vector<double>& radii,
                              int min_level, const quadrature_spec& spec) {
  require_p(p);
  if (centers.empty() || radii.empty()) throw bergman::invalid_argument("averaged scan needs centres and radii");
  std::map<tiling_square, std::pair<double, double>> cache;
  auto averages = [&](const tiling_square& t) {
    auto it = cache.find(t);
    if (it != cache.end()) return it->second;
    const double e1 = averaging_E(mu1, {t}, spec).cells().at(t).front();
    const double e2 = averaging_E(mu2, {t}, spec).cells().at(t).front();
    return cache[t] = {e1, std::pow(e2, -1.0 / (p - 1.0))};
  };

  ap_verdict out;
  std::map<double, double> sup_by_radius;
  for (double R : radii) {
    if (!(R > 0.0)) throw bergman::invalid_argument("radii must be positive");
    for (const auto& c : centers) {
      if (c.imag() < 0.0) throw bergman::invalid_argument("centres must lie in the closed upper half plane");
      neumaier area, s1, s2;
      for (int k = min_level; 1.5 * std::ldexp(1.0, k) <= c.imag() + R; ++k) {
        const double side = std::ldexp(1.0, k);
        const double cy = 1.5 * side;
        if (std::abs(cy - c.imag()) > R) continue;
        const auto j_lo = static_cast<std::int64_t>(std::ceil((c.real() - R) / side - 0.5));
        const auto j_hi = static_cast<std::int64_t>(std::floor((c.real() + R) / side - 0.5));
        for (std::int64_t j = j_lo; j <= j_hi; ++j) {
          const tiling_square t{j, k};
          if (std::abs(t.center() - c) > R) continue;
          const auto [e1, e2] = averages(t);
          area.add(t.area());
          s1.add(t.area() * e1);
          s2.add(t.area() * e2);
        }
      }
      if (!(area.value() > 0.0)) continue;
      const double q = s1.value() / area.value() * std::pow(s2.value() / area.value(), p - 1.0);
      out.witnesses.push_back({general_disk{c, R}, q});
      out.sup_quotient = std::max(out.sup_quotient, q);
      auto [it, inserted] = sup_by_radius.emplace(R, q);
      if (!inserted) it->second = std::max(it->second, q);
    }
  }
  for (const auto& [r, s] : sup_by_radius) out.refinement_trace.push_back({r, s});
  finish_verdict(out);
  return out;
}

}  // namespace bergman::muckenhoupt
