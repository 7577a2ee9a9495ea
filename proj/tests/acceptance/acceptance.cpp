// Acceptance suite: one line per criterion, "PASS" or "FAIL", with the
// measured runtime against its budget.  `--criterion N` runs a single one.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bergman/errors.hpp"
#include "bergman/kernels.hpp"
#include "bergman/muckenhoupt.hpp"
#include "bergman/projection_lab.hpp"
#include "bergman/quadrature.hpp"
#include "bergman/ranges.hpp"

using namespace bergman;
using complex = std::complex<double>;
using ranges::rational;

namespace {

struct outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (detail.size() < 600) detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

double rel_err(complex a, complex b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// Independent long double partial sum: A_{n,p} = sum_j j (a_j^{p/j} - a_{j+1}^{p/j}), a_j = j^{-j}.
long double oracle_A(std::int64_t n, long double p) {
  long double sum = 0.0L;
  for (std::int64_t j = 1; j <= n; ++j) {
    const long double jj = static_cast<long double>(j);
    const long double first = std::exp(-p * std::log(jj));
    const long double second = std::exp(-p * (jj + 1.0L) / jj * std::log(jj + 1.0L));
    sum += jj * (first - second);
  }
  return sum;
}

//
// 1. moments
//
outcome criterion_1() {
  outcome o;
  const quadrature::quadrature_spec spec;
  double worst = 0.0;
  for (int m = 0; m <= 4; ++m)
    for (double sp : {-1.5, 0.0, 1.0, 2.5}) {
      if (!(2 * m + 2 + sp > 0)) continue;
      const double expected = 2.0 / (2 * m + 2 + sp);
      const double got = quadrature::weighted_moment_quadrature(m, sp, spec);
      const double e = std::abs(got - expected) / expected;
      worst = std::max(worst, e);
      o.require(e <= 1e-8, fmt("m=%g s'=%g rel err %.3g", m, sp, e));
    }
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("max rel err %.3g (tol 1e-8)", worst);
  return o;
}

//
// 2. kernel identities
//
outcome criterion_2() {
  outcome o;
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> radius(0.02, 0.98), angle(0.0, 2.0 * M_PI);
  double worst_h = 0.0, worst_s = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const complex z = std::polar(radius(rng), angle(rng));
    const complex w = std::polar(radius(rng), angle(rng));
    const kernels::disk_point zp(z), wp(w);
    for (double sp : {-5.0, -3.5, 0.0, 1.0, 2.0, 4.0}) {
      const complex closed = kernels::punctured_kernel(sp, zp, wp, kernels::punctured_method::closed);
      const complex homotopy = kernels::punctured_kernel(sp, zp, wp, kernels::punctured_method::homotopy);
      const complex shifted = kernels::punctured_kernel(sp + 2.0, zp, wp);
      const double eh = rel_err(closed, homotopy);
      const double es = rel_err(shifted, closed / (z * std::conj(w)));
      worst_h = std::max(worst_h, eh);
      worst_s = std::max(worst_s, es);
    }
  }
  o.require(worst_h <= 1e-12, fmt("closed vs homotopy %.3g", worst_h));
  o.require(worst_s <= 1e-12, fmt("shift identity %.3g", worst_s));
  o.detail += (o.detail.empty() ? "" : "; ") +
              fmt("max rel err closed/homotopy %.3g, shift %.3g (tol 1e-12)", worst_h, worst_s);
  return o;
}

//
// 3. range tables
//
// Fraction num/den with den != 0, compared by cross-multiplication.
struct fraction {
  std::int64_t num;
  std::int64_t den;
};

struct oracle_range {
  fraction lo;
  std::optional<fraction> hi;  // nullopt is infinity
};

bool equal(const rational& q, const fraction& f) {
  return static_cast<__int128>(q.numerator()) * f.den == static_cast<__int128>(f.num) * q.denominator();
}

// Five-case selector for the Hartogs triangle at s' = n / scale, in integer
// arithmetic: s' = s + 2k with s in (0, 2].
oracle_range hartogs_oracle(std::int64_t n, std::int64_t scale) {
  std::int64_t c = n / (2 * scale);
  if (n > 0 && n % (2 * scale) != 0) ++c;
  const std::int64_t k = c - 1;
  const std::int64_t s = n - 2 * k * scale;  // s * scale
  const fraction one{1, 1};
  const std::int64_t top = s + (2 * k + 4) * scale;
  if (n > -2 * scale) return {{top, s + (k + 2) * scale}, fraction{top, (k + 2) * scale}};
  if (n >= -5 * scale) return {one, std::nullopt};
  if (n > -6 * scale) return {{2 * scale - s, scale}, fraction{2 * scale - s, scale - s}};
  if (n == -6 * scale) return {one, std::nullopt};
  return {{top, (k + 2) * scale}, fraction{top, s + (k + 2) * scale}};
}

bool same(const ranges::p_range& r, const oracle_range& o) {
  if (!r.lo().is_exact() || !equal(r.lo().exact(), o.lo)) return false;
  if (!o.hi) return r.hi().is_infinite();
  return r.hi().is_exact() && equal(r.hi().exact(), *o.hi);
}

outcome criterion_3() {
  outcome o;
  const auto r0 = ranges::range_hartogs(rational(0));
  o.require(same(r0, {{4, 3}, fraction{4, 1}}), "s'=0 gives " + r0.str());
  for (int sp : {-2, -3, -5, -6}) {
    const auto r = ranges::range_hartogs(rational(sp));
    o.require(same(r, {{1, 1}, std::nullopt}), "s'=" + std::to_string(sp) + " gives " + r.str());
  }
  const std::int64_t scale = 1000000;
  std::int64_t mismatches = 0, inflation = 0, points = 0;
  for (std::int64_t n = -8 * scale; n <= 8 * scale; ++n, ++points) {
    const rational sp(n, scale);
    const auto h = ranges::range_hartogs(sp);
    if (!same(h, hartogs_oracle(n, scale))) {
      if (mismatches++ < 3) o.require(false, "selector mismatch at s'=" + ranges::to_string(sp) + ": " + h.str());
    }
    if (!(h == ranges::range_disk_star(rational(n + 2 * scale, scale)))) {
      if (inflation++ < 3) o.require(false, "inflation mismatch at s'=" + ranges::to_string(sp));
    }
  }
  o.require(mismatches == 0 && inflation == 0, "grid mismatches");
  std::ostringstream os;
  os << points << " grid points, " << mismatches << " selector and " << inflation << " inflation mismatches";
  o.detail += (o.detail.empty() ? "" : "; ") + os.str();
  return o;
}

//
// 4. dichotomy of A_{n,p}
//
outcome criterion_4() {
  outcome o;
  const long double a3 = oracle_A(1000, 1.0L), a6 = oracle_A(1000000, 1.0L);
  const double lib3 = projection_lab::partial_sum_A(1000, 1.0), lib6 = projection_lab::partial_sum_A(1000000, 1.0);
  o.require(std::abs(lib3 - static_cast<double>(a3)) <= 1e-9 * lib3, "A_{1000,1} disagrees with the oracle");
  o.require(std::abs(lib6 - static_cast<double>(a6)) <= 1e-9 * lib6, "A_{10^6,1} disagrees with the oracle");
  // Oracle growth is 78.44; the threshold keeps the stated floor of 0.2.
  o.require(lib6 - lib3 >= 0.2, fmt("A_{10^6,1} - A_{10^3,1} = %.6g", lib6 - lib3));
  std::string gaps;
  std::vector<std::int64_t> ladder;
  for (std::int64_t n = 1000; n <= 128000; n *= 2) ladder.push_back(n);
  for (double p : {1.1, 1.5, 2.0}) {
    std::vector<std::int64_t> ns;
    for (auto n : ladder) {
      ns.push_back(n);
      ns.push_back(2 * n);
    }
    std::sort(ns.begin(), ns.end());
    ns.erase(std::unique(ns.begin(), ns.end()), ns.end());
    const auto sums = projection_lab::partial_sums_A(ns, p);
    auto at = [&](std::int64_t n) { return sums[std::lower_bound(ns.begin(), ns.end(), n) - ns.begin()]; };
    std::vector<double> diff;
    for (auto n : ladder) diff.push_back(std::abs(at(2 * n) - at(n)));
    bool monotone = true;
    for (std::size_t i = 1; i < diff.size(); ++i) monotone = monotone && diff[i] < diff[i - 1];
    // First ladder rung at or beyond n = 10^5.
    const double last = diff.back();
    o.require(monotone, fmt("p=%g: gaps not monotone on the ladder", p));
    o.require(last < 1e-6, fmt("p=%g: |A_{2n}-A_{n}| = %.3g at n=128000 (tol 1e-6)", p, last));
    gaps += fmt(" p=%g:%.3g", p, last);
  }
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("growth %.6g;", lib6 - lib3) + " final gaps" + gaps;
  return o;
}

//
// 5. endpoint blow-up
//
outcome criterion_5() {
  outcome o;
  const std::vector<std::int64_t> ns{10, 30, 100, 300};
  const auto b = projection_lab::blowup_experiment(1.0, 1.5, ns);
  // s' = 1: s = 1, k = 0, nu = 3 - 1.5.
  const double p = 1.5, nu = 1.5;
  std::vector<double> oracle;
  for (auto n : ns) {
    const double a1 = static_cast<double>(oracle_A(n, 1.0L));
    const double ap = static_cast<double>(oracle_A(n, 1.5L));
    oracle.push_back(a1 * std::pow(2.0 / nu, 1.0 / p) / std::pow(2.0 / p * ap, 1.0 / p));
  }
  for (std::size_t i = 0; i < ns.size(); ++i) {
    o.require(std::abs(b.ratios[i] - oracle[i]) <= 1e-8 * oracle[i], fmt("ratio(%g) off the oracle", ns[i]));
    const double lhs = std::pow(b.norms_f[i], p);
    const double rhs = 2.0 / p * static_cast<double>(oracle_A(ns[i], 1.5L));
    o.require(std::abs(lhs - rhs) <= 1e-8 * rhs, fmt("norm identity at n=%g", ns[i]));
    if (i) o.require(b.ratios[i] > b.ratios[i - 1], fmt("ratio not increasing at n=%g", ns[i]));
  }
  // Oracle statistic is 2.93600; threshold pinned just below it.
  const double growth = b.ratios.back() / b.ratios.front();
  o.require(growth >= 2.9, fmt("ratio(300)/ratio(10) = %.6g (threshold 2.9)", growth));
  const auto b2 = projection_lab::blowup_experiment(1.0, 2.0, ns);
  const double growth2 = b2.ratios.back() / b2.ratios.front();
  o.require(growth2 < 1.2, fmt("p=2 statistic %.6g (bound 1.2)", growth2));
  o.require(b.endpoint_identity_checked && b.endpoint_identity_max_rel_error <= 1e-8, "endpoint identity");
  o.detail += (o.detail.empty() ? "" : "; ") + fmt("p=3/2 growth %.6g, p=2 growth %.6g, identity err %.3g", growth,
                                                   growth2, b.endpoint_identity_max_rel_error);
  return o;
}

//
// 6. reproducing and annihilation
//
outcome criterion_6() {
  outcome o;
  int pairs = 0;
  for (int m = 0; m <= 4; ++m)
    for (double sp : {-1.5, 0.0, 1.0, 2.5}) {
      ++pairs;
      const auto e = projection_lab::project_modes(sp, projection_lab::mode_function::monomial(m));
      for (const auto& [mode, c] : e.coefficients) {
        const double expected = mode == m ? 1.0 : 0.0;
        o.require(std::abs(c - expected) <= 1e-10, fmt("z^%g at s'=%g: coefficient off", m, sp));
      }
      o.require(e.coefficients.count(m) == 1, fmt("z^%g at s'=%g: mode missing", m, sp));
    }
  for (int j = 1; j <= 5; ++j) {
    const auto e = projection_lab::project_modes(0.0, projection_lab::mode_function::conj_power(j));
    for (const auto& [mode, c] : e.coefficients)
      o.require(std::abs(c) <= 1e-10, fmt("conj(z)^%g at s'=0 leaves mode %g", j, mode));
  }
  for (int j = 1; j <= 2; ++j) {
    const auto e = projection_lab::project_modes(4.0, projection_lab::mode_function::conj_power(j));
    // (2(-j) + 2 + 4) * int_0^1 r^{j} r^{-j+5} dr = (6 - 2j) / 6
    const double expected = (3.0 - j) / 3.0;
    const auto it = e.coefficients.find(-j);
    o.require(it != e.coefficients.end() && std::abs(it->second - expected) <= 1e-10,
              fmt("conj(z)^%g at s'=4 off the z^{-j} prediction", j));
    for (const auto& [mode, c] : e.coefficients)
      if (mode != -j) o.require(std::abs(c) <= 1e-10, fmt("conj(z)^%g at s'=4 leaks into mode %g", j, mode));
  }
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(pairs) + " basis pairs";
  return o;
}

//
// 7. Schur feasibility against range_disk_star
//
outcome criterion_7() {
  outcome o;
  int points = 0, mismatches = 0, boundary = 0;
  for (int a = -12; a <= 12; ++a)
    for (int b = 21; b <= 120; ++b) {
      const rational sp(a, 2), p(b, 20);
      const bool feasible = projection_lab::schur_feasible(sp, p).has_value();
      const auto r = ranges::range_disk_star(sp);
      const bool inside = r.contains(p);
      const bool on_edge = (r.lo().is_exact() && r.lo().exact() == p) || (r.hi().is_exact() && r.hi().exact() == p);
      if (on_edge) {
        ++boundary;
        if (feasible)
          o.require(false, "boundary point feasible at s'=" + ranges::to_string(sp) + ", p=" + ranges::to_string(p));
      }
      if (feasible != inside) {
        ++mismatches;
        if (mismatches <= 3)
          o.require(false, "mismatch at s'=" + ranges::to_string(sp) + ", p=" + ranges::to_string(p));
      }
      ++points;
    }
  std::ostringstream os;
  os << points << " grid points, " << boundary << " on range boundaries, " << mismatches << " mismatches";
  o.detail += (o.detail.empty() ? "" : "; ") + os.str();
  return o;
}

//
// 8. separation of A_p^+ from A_p
//
outcome criterion_8() {
  outcome o;
  struct triple {
    double s;
    std::int64_t k;
    double p;
  };
  const quadrature::quadrature_spec spec;
  for (const triple t : {triple{1, 0, 2}, triple{0.5, -2, 2}, triple{1, 1, 2.2}}) {
    const std::string tag = fmt("(%g,%g,%g)", t.s, static_cast<double>(t.k), t.p);
    o.require(muckenhoupt::separation_conditions(t.s, t.k, t.p), tag + " conditions fail");
    const auto pair = muckenhoupt::separation_pair(t.s, t.k, t.p);
    const auto special = muckenhoupt::ap_plus_scan(pair.mu1, pair.mu2, t.p, muckenhoupt::disk_family::standard(),
                                                   muckenhoupt::scan_mode::special, spec);
    o.require(special.outcome == muckenhoupt::verdict::bounded_evidence,
              tag + " special scan: " + muckenhoupt::to_string(special.outcome));
    auto family = muckenhoupt::disk_family::standard();
    family.radii.clear();
    for (int e = -8; e <= -1; ++e) family.radii.push_back(std::ldexp(1.0, e));
    const auto general =
        muckenhoupt::ap_plus_scan(pair.mu1, pair.mu2, t.p, family, muckenhoupt::scan_mode::general, spec);
    o.require(general.outcome == muckenhoupt::verdict::divergent,
              tag + " general scan: " + muckenhoupt::to_string(general.outcome));
    const double expected = (t.s - 2.0) * t.p;
    const double slope = general.log_slope.value_or(NAN);
    o.require(std::abs(slope - expected) <= 0.1 * std::abs(expected),
              tag + fmt(" slope %.5g vs %.5g", slope, expected));
    o.detail += (o.detail.empty() ? "" : "; ") + tag + fmt(" sup %.4g, slope %.5g", special.sup_quotient, slope);
  }
  return o;
}

//
// 9. E-operator properties
//
outcome criterion_9() {
  outcome o;
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> level(-3, 2), column(-4, 4), depth(0, 2), count(1, 5);
  std::uniform_real_distribution<double> value(0.01, 10.0);
  auto random_step = [&](int d) {
    muckenhoupt::step_function f(d);
    const int tiles = count(rng);
    for (int t = 0; t < tiles; ++t) {
      std::vector<double> cells(f.cells_per_tile());
      for (auto& c : cells) c = value(rng);
      f.set({column(rng), level(rng)}, std::move(cells));
    }
    return f;
  };
  int checks = 0;
  double worst_a = 0.0, worst_b = 0.0, worst_c = 0.0;
  for (double p : {1.5, 2.0, 3.0})
    for (int i = 0; i < 1000; ++i) {
      const int d = depth(rng);
      const auto f = random_step(d);
      const auto g = random_step(d);
      const auto r = muckenhoupt::check_E_properties(f, g, p);
      ++checks;
      worst_a = std::max(worst_a, r.a_residual);
      worst_b = std::min(worst_b, r.b_margin);
      worst_c = std::min(worst_c, r.c_margin);
      if (!(r.a && r.b && r.c)) o.require(false, fmt("p=%g pair %g fails", p, i));
    }
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(checks) + " pairs" +
              fmt(", max (a) residual %.3g, min (b) margin %.3g, min (c) margin %.3g", worst_a, worst_b, worst_c);
  return o;
}

//
// 10. two-weight range
//
outcome criterion_10() {
  outcome o;
  const auto r00 = ranges::range_two_weight(rational(0), rational(0));
  o.require(r00.range == ranges::range_hartogs(rational(0)), "range_two_weight(0,0) = " + r00.range.str());
  const auto r02 = ranges::range_two_weight(rational(0), rational(2));
  o.require(same(r02.range, {{4, 3}, fraction{6, 1}}), "range_two_weight(0,2) = " + r02.range.str());
  int samples = 0;
  for (double sp : {-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 3.25})
    for (double t : {-4.0, -1.0, 0.0, 0.5, 2.0, 3.0, 6.0}) {
      const auto v = ranges::range_two_weight(sp, t);
      const double s = ranges::decompose_exponent(sp).s;
      for (double p : {1.0625, 1.25, 1.5, 2.0, 3.0, 4.5, 8.0}) {
        ++samples;
        const bool expected = t - sp <= (2.0 - s) * p;
        if (v.sharp_predicate(p) != expected) o.require(false, fmt("predicate at s'=%g t=%g p=%g", sp, t, p));
      }
    }
  o.detail += (o.detail.empty() ? "" : "; ") + std::to_string(samples) + " predicate samples";
  return o;
}

struct criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<outcome()> run;
};

const std::vector<criterion>& all_criteria() {
  static const std::vector<criterion> list = {
      {1, "moment formula", 5.0, criterion_1},
      {2, "kernel identities", 5.0, criterion_2},
      {3, "range tables", 10.0, criterion_3},
      {4, "A_{n,p} dichotomy", 30.0, criterion_4},
      {5, "endpoint blow-up", 60.0, criterion_5},
      {6, "reproducing and annihilation", 10.0, criterion_6},
      {7, "Schur feasibility", 10.0, criterion_7},
      {8, "A_p^+ versus A_p separation", 120.0, criterion_8},
      {9, "E-operator properties", 10.0, criterion_9},
      {10, "two-weight range", 1.0, criterion_10},
  };
  return list;
}

bool run_one(const criterion& c) {
  const auto start = std::chrono::steady_clock::now();
  outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = seconds < c.budget_seconds;
  const bool pass = o.pass && in_time;
  std::printf("criterion %2d %s  %-30s %7.3fs / %gs%s  %s\n", c.id, pass ? "PASS" : "FAIL", c.name, seconds,
              c.budget_seconds, in_time ? "" : " (over budget)", o.detail.c_str());
  std::fflush(stdout);
  return pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (const auto& c : all_criteria())
    if (only == 0 || c.id == only) all_pass = run_one(c) && all_pass;
  return all_pass ? 0 : 1;
}
