#include "bergman/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bergman/errors.hpp"
#include "bergman/kernels.hpp"
#include "bergman/muckenhoupt.hpp"
#include "bergman/projection_lab.hpp"
#include "bergman/ranges.hpp"

#ifndef BERGMAN_LAB_VERSION
#define BERGMAN_LAB_VERSION "0.0.0"
#endif

namespace bergman::cli {

namespace {

using complex = std::complex<double>;

struct param_def {
  std::string name;
  std::string help;
  bool flag = false;
};

const std::vector<std::pair<std::string, std::vector<param_def>>>& subcommands() {
  static const std::vector<std::pair<std::string, std::vector<param_def>>> table = {
      {"ranges",
       {{"domain", "disk | hartogs | two-weight | generalized | alpha (default hartogs)"},
        {"s-prime", "weight exponent s'"},
        {"t", "target weight exponent (two-weight)"},
        {"p", "evaluate the sharpness rule at this p (two-weight)"},
        {"alpha", "exponent of g(z) = (z-1)^alpha (alpha domain)"},
        {"ball-dims", "comma list m_1,..,m_l (generalized; may be empty)"},
        {"weights", "comma list s_1,..,s_n (generalized)"}}},
      {"kernel",
       {{"kind", "disk | punctured | g | hartogs | cayley | cayley-inverse"},
        {"z", "point as re,im"},
        {"zeta", "point as re,im"},
        {"s-prime", "weight exponent s'"},
        {"method", "closed | homotopy (punctured), transform | series (hartogs)"},
        {"M", "series cutoff"},
        {"alpha", "g(z) = (z-1)^alpha; omit for g = 1"},
        {"z1", "first coordinate of z (hartogs)"},
        {"z2", "second coordinate of z (hartogs)"},
        {"zeta1", "first coordinate of zeta (hartogs)"},
        {"zeta2", "second coordinate of zeta (hartogs)"}}},
      {"moments", {{"m", "monomial degree"}, {"s-prime", "weight exponent s'"}}},
      {"blowup",
       {{"s-prime", "weight exponent s'"},
        {"p", "exponent, or 'endpoint' for (s+2k+2)/(s+k+1)"},
        {"n", "comma list of strictly increasing n"}}},
      {"schur",
       {{"s-prime", "weight exponent s'"},
        {"p", "exponent p > 1"},
        {"check", "evaluate the Schur ratios numerically", true},
        {"radii", "comma list of sample radii (default 0.001,0.1,0.5,0.9,0.99,0.999)"},
        {"delta", "override delta"},
        {"sigma", "override sigma"}}},
      {"apcheck",
       {{"weights", "separation | sigma | unit (default separation)"},
        {"s", "s in (0, 2] for the separation pair"},
        {"k", "integer k for the separation pair"},
        {"p", "exponent p > 1"},
        {"mode", "special | general (default special)"},
        {"centers", "comma list of real centres"},
        {"radii", "comma list of radii"}}},
      {"probe",
       {{"weights", "separation | sigma | unit (default unit)"},
        {"s", "s for the separation pair"},
        {"k", "k for the separation pair"},
        {"p", "exponent p > 1"},
        {"levels", "number of tile indicators S_{0,-m}, m = 0.. (default 4)"},
        {"grid", "midpoints per tile side (default 4)"},
        {"min-level", "finest tiling level of the grid (default -(levels+2))"}}},
  };
  return table;
}

const std::vector<param_def>& params_of(const std::string& sub) {
  for (const auto& [name, defs] : subcommands())
    if (name == sub) return defs;
  throw bergman::invalid_argument("unknown subcommand: " + sub);
}

//
// parameter access
//

class params {
public:
  explicit params(const std::map<std::string, std::string>& values) : values_(values) {}

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  const std::string& text(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) throw bergman::invalid_argument("missing required option --" + key);
    return it->second;
  }

  std::string text_or(const std::string& key, const std::string& fallback) const {
    return has(key) ? text(key) : fallback;
  }

  double real(const std::string& key) const { return parse_real(text(key), key); }
  double real_or(const std::string& key, double fallback) const { return has(key) ? real(key) : fallback; }

  long long integer(const std::string& key) const { return parse_integer(text(key), key); }
  long long integer_or(const std::string& key, long long fallback) const {
    return has(key) ? integer(key) : fallback;
  }

  complex point(const std::string& key) const {
    const std::string& t = text(key);
    const auto comma = t.find(',');
    if (comma == std::string::npos) return {parse_real(t, key), 0.0};
    return {parse_real(t.substr(0, comma), key), parse_real(t.substr(comma + 1), key)};
  }

  std::vector<double> reals(const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split(text(key))) out.push_back(parse_real(item, key));
    return out;
  }

  std::vector<long long> integers(const std::string& key) const {
    std::vector<long long> out;
    for (const auto& item : split(text(key))) out.push_back(parse_integer(item, key));
    return out;
  }

  static std::vector<std::string> split(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream is(text);
    while (std::getline(is, item, ',')) {
      const auto b = item.find_first_not_of(" \t");
      const auto e = item.find_last_not_of(" \t");
      if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
    }
    return out;
  }

  static double parse_real(const std::string& t, const std::string& key) {
    double v = 0.0;
    const char* first = t.data();
    const char* last = t.data() + t.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last || !std::isfinite(v))
      throw bergman::invalid_argument("option --" + key + ": not a finite number: '" + t + "'");
    return v;
  }

  static long long parse_integer(const std::string& t, const std::string& key) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (ec != std::errc() || ptr != t.data() + t.size())
      throw bergman::invalid_argument("option --" + key + ": not an integer: '" + t + "'");
    return v;
  }

private:
  const std::map<std::string, std::string>& values_;
};

json num(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

json endpoint_json(const ranges::endpoint& e) { return e.is_infinite() ? json("inf") : json(e.value()); }
json endpoint_exact(const ranges::endpoint& e) {
  if (e.is_infinite()) return "inf";
  if (e.is_exact()) return ranges::to_string(e.exact());
  return nullptr;
}

void put_range(json& out, const ranges::p_range& r) {
  out["lo"] = endpoint_json(r.lo());
  out["hi"] = endpoint_json(r.hi());
  out["open"] = true;
  out["empty"] = r.is_empty();
  out["lo_exact"] = endpoint_exact(r.lo());
  out["hi_exact"] = endpoint_exact(r.hi());
}

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class progress_reporter {
public:
  progress_reporter(std::ostream& os, std::string label) : os_(os), label_(std::move(label)) {}
  void operator()(std::size_t done, std::size_t total) {
    const std::size_t step = std::max<std::size_t>(1, total / 10);
    if (done % step == 0 || done == total) os_ << "progress " << label_ << ' ' << done << '/' << total << '\n';
  }

private:
  std::ostream& os_;
  std::string label_;
};

//
// subcommands
//

json run_ranges(const params& a) {
  const std::string domain = a.text_or("domain", "hartogs");
  json out;
  auto exact_or_real = [&](const std::string& key) -> std::optional<ranges::rational> {
    return ranges::parse_rational(a.text(key));
  };
  if (domain == "disk" || domain == "hartogs") {
    const auto q = exact_or_real("s-prime");
    const ranges::p_range r = q ? (domain == "disk" ? ranges::range_disk_star(*q) : ranges::range_hartogs(*q))
                                : (domain == "disk" ? ranges::range_disk_star(a.real("s-prime"))
                                                    : ranges::range_hartogs(a.real("s-prime")));
    put_range(out, r);
    const auto d = ranges::decompose_exponent(a.real("s-prime"));
    out["k"] = d.k;
    out["s"] = d.s;
  } else if (domain == "two-weight") {
    const auto qs = exact_or_real("s-prime");
    const auto qt = exact_or_real("t");
    const auto v = (qs && qt) ? ranges::range_two_weight(*qs, *qt)
                              : ranges::range_two_weight(a.real("s-prime"), a.real("t"));
    put_range(out, v.range);
    out["k"] = ranges::decompose_exponent(v.sharp_predicate.s_prime).k;
    out["s"] = v.sharp_predicate.s;
    out["sharp_condition"] = "t - s' <= (2 - s) p";
    if (a.has("p")) out["sharp_at_p"] = v.sharp_predicate(a.real("p"));
    out["notes"] = v.notes;
  } else if (domain == "generalized") {
    ranges::generalized_hartogs_spec spec;
    if (a.has("ball-dims"))
      for (long long m : a.integers("ball-dims")) spec.ball_dims.push_back(static_cast<int>(m));
    for (const auto& item : params::split(a.text("weights"))) {
      const auto q = ranges::parse_rational(item);
      if (!q) throw bergman::invalid_argument("option --weights: not a rational number: '" + item + "'");
      spec.weight_exponents.push_back(*q);
    }
    put_range(out, ranges::range_generalized(spec));
    json exps = json::array();
    for (const auto& e : ranges::generalized_exponents(spec)) exps.push_back(ranges::to_string(e));
    out["exponents"] = exps;
  } else if (domain == "alpha") {
    const auto q = exact_or_real("alpha");
    put_range(out, q ? ranges::alpha_example_range(*q) : ranges::alpha_example_range(a.real("alpha")));
  } else {
    throw bergman::invalid_argument("option --domain: unknown domain '" + domain + "'");
  }
  out["domain"] = domain;
  return out;
}

void put_complex(json& out, complex v) {
  out["re"] = num(v.real());
  out["im"] = num(v.imag());
  out["abs"] = num(std::abs(v));
}

json run_kernel(const params& a) {
  using namespace bergman::kernels;
  const std::string kind = a.text("kind");
  json out;
  out["kind"] = kind;
  if (kind == "disk") {
    put_complex(out, disk_kernel(disk_point(a.point("z")), disk_point(a.point("zeta"))));
  } else if (kind == "punctured") {
    const std::string method = a.text_or("method", "closed");
    if (method != "closed" && method != "homotopy")
      throw bergman::invalid_argument("option --method: punctured kernel takes closed or homotopy");
    put_complex(out, punctured_kernel(a.real("s-prime"), disk_point(a.point("z")), disk_point(a.point("zeta")),
                                      method == "closed" ? punctured_method::closed : punctured_method::homotopy));
    out["method"] = method;
  } else if (kind == "g") {
    const auto g = a.has("alpha") ? nonvanishing_holomorphic::power_of_z_minus_one(a.real("alpha"))
                                  : nonvanishing_holomorphic::one();
    put_complex(out, g_weighted_kernel(g, disk_point(a.point("z")), disk_point(a.point("zeta"))));
    out["g"] = g.label();
  } else if (kind == "hartogs") {
    const hartogs_point z(a.point("z1"), a.point("z2"));
    const hartogs_point zeta(a.point("zeta1"), a.point("zeta2"));
    const std::string method = a.text_or("method", "transform");
    if (method == "transform") {
      put_complex(out, hartogs_kernel(a.real("s-prime"), z, zeta));
    } else if (method == "series") {
      const auto r = hartogs_kernel_series(a.real("s-prime"), z, zeta, static_cast<int>(a.integer("M")));
      put_complex(out, r.value);
      out["tail_bound"] = num(r.tail_bound);
      out["terms"] = r.terms;
    } else {
      throw bergman::invalid_argument("option --method: hartogs kernel takes transform or series");
    }
    out["method"] = method;
  } else if (kind == "cayley") {
    put_complex(out, cayley(half_plane_point(a.point("z"))).value());
  } else if (kind == "cayley-inverse") {
    put_complex(out, cayley_inverse(disk_point(a.point("z"))).value());
  } else {
    throw bergman::invalid_argument("option --kind: unknown kernel '" + kind + "'");
  }
  return out;
}

json run_moments(const params& a, const quadrature::quadrature_spec& spec) {
  const int m = static_cast<int>(a.integer("m"));
  const double s_prime = a.real("s-prime");
  json out;
  const double closed = quadrature::weighted_moment(m, s_prime);
  const double value = quadrature::weighted_moment_quadrature(m, s_prime, spec);
  out["value"] = value;
  out["closed_form"] = closed;
  out["rel_diff"] = std::abs(value - closed) / closed;
  return out;
}

json run_blowup(const params& a, const quadrature::quadrature_spec& spec, std::ostream& progress) {
  const double s_prime = a.real("s-prime");
  double p = 0.0;
  if (a.text("p") == "endpoint") {
    const auto d = ranges::decompose_exponent(s_prime);
    p = (d.s + 2.0 * d.k + 2.0) / (d.s + d.k + 1.0);
  } else {
    p = a.real("p");
  }
  std::vector<std::int64_t> ns;
  for (long long n : a.integers("n")) ns.push_back(n);
  progress << "progress blowup 0/" << ns.size() << '\n';
  const auto b = projection_lab::blowup_experiment(s_prime, p, ns, spec);
  progress << "progress blowup " << ns.size() << '/' << ns.size() << '\n';

  json out;
  json n = json::array(), nf = json::array(), nb = json::array(), ratio = json::array();
  json lnf = json::array(), lnb = json::array(), coef = json::array();
  for (std::size_t i = 0; i < b.n_values.size(); ++i) {
    n.push_back(b.n_values[i]);
    nf.push_back(num(b.norms_f[i]));
    nb.push_back(num(b.norms_Bf[i]));
    ratio.push_back(num(b.ratios[i]));
    lnf.push_back(num(b.log_norms_f[i]));
    lnb.push_back(num(b.log_norms_Bf[i]));
    coef.push_back(num(b.coefficients[i]));
  }
  out["n"] = n;
  out["norm_f"] = nf;
  out["norm_Bf"] = nb;
  out["ratio"] = ratio;
  out["log_norm_f"] = lnf;
  out["log_norm_Bf"] = lnb;
  out["coefficient"] = coef;
  out["s_prime"] = s_prime;
  out["p"] = p;
  out["endpoint_p"] = num(b.endpoint_p);
  out["nu"] = b.nu;
  out["image_in_lp"] = b.image_in_lp;
  bool increasing = true;
  for (std::size_t i = 1; i < b.ratios.size(); ++i) increasing = increasing && b.ratios[i] > b.ratios[i - 1];
  out["ratios_increasing"] = increasing;
  out["ratio_growth"] = num(b.ratios.back() / b.ratios.front());
  out["endpoint_identity_checked"] = b.endpoint_identity_checked;
  out["endpoint_identity_max_rel_error"] = b.endpoint_identity_max_rel_error;
  return out;
}

json run_schur(const params& a, const quadrature::quadrature_spec& spec) {
  const double s_prime = a.real("s-prime");
  const double p = a.real("p");
  json out;
  const auto feasible = projection_lab::schur_feasible(s_prime, p);
  out["feasible"] = feasible.has_value();
  const auto sq = ranges::parse_rational(a.text("s-prime"));
  const auto pq = ranges::parse_rational(a.text("p"));
  if (sq && pq) {
    if (const auto box = projection_lab::schur_feasible(*sq, *pq)) {
      out["delta_interval"] = {ranges::to_string(box->delta_lo), ranges::to_string(box->delta_hi)};
      out["sigma_interval"] = {ranges::to_string(box->sigma_lo), ranges::to_string(box->sigma_hi)};
    }
  }
  std::optional<projection_lab::schur_parameters> chosen = feasible;
  if (a.has("delta") || a.has("sigma")) {
    if (!a.has("delta") || !a.has("sigma")) throw bergman::invalid_argument("--delta and --sigma go together");
    chosen = projection_lab::schur_parameters{a.real("delta"), a.real("sigma"), p};
  }
  if (chosen) {
    out["delta"] = chosen->delta;
    out["sigma"] = chosen->sigma;
  }
  if (a.has("check")) {
    if (!chosen) throw bergman::invalid_argument("--check needs feasible parameters or --delta/--sigma");
    const std::vector<double> radii =
        a.has("radii") ? a.reals("radii") : std::vector<double>{0.001, 0.1, 0.5, 0.9, 0.99, 0.999};
    const double q = p / (p - 1.0);
    json r = json::array(), rp = json::array(), rq = json::array();
    double sup = 0.0;
    for (double rad : radii) {
      const double vp = projection_lab::schur_ratio(s_prime, *chosen, p, {rad, 0.0}, spec);
      const double vq = projection_lab::schur_ratio(s_prime, *chosen, q, {rad, 0.0}, spec);
      r.push_back(rad);
      rp.push_back(num(vp));
      rq.push_back(num(vq));
      sup = std::max({sup, vp, vq});
    }
    out["radius"] = r;
    out["ratio_p"] = rp;
    out["ratio_p_conjugate"] = rq;
    out["sup_ratio"] = num(sup);
  }
  return out;
}

struct weights_choice {
  half_plane_weight mu1;
  half_plane_weight mu2;
  std::optional<bool> conditions;
};

weights_choice choose_weights(const params& a, const std::string& fallback, double p) {
  const std::string w = a.text_or("weights", fallback);
  if (w == "separation") {
    const double s = a.real("s");
    const long long k = a.integer("k");
    if (!(s > 0.0 && s <= 2.0)) throw bergman::invalid_argument("option --s must lie in (0, 2]");
    const auto pair = muckenhoupt::separation_pair(s, k, p);
    return {pair.mu1, pair.mu2, muckenhoupt::separation_conditions(s, k, p)};
  }
  if (w == "sigma") {
    const auto sigma = muckenhoupt::sigma_weight(p);
    return {sigma, sigma, std::nullopt};
  }
  if (w == "unit") return {half_plane_weight{}, half_plane_weight{}, std::nullopt};
  throw bergman::invalid_argument("option --weights: unknown weight family '" + w + "'");
}

json disk_json(const quadrature::disk_region& d) {
  json j;
  const auto c = quadrature::center_of(d);
  j["kind"] = std::holds_alternative<quadrature::special_disk>(d) ? "special" : "general";
  j["center_re"] = c.real();
  j["center_im"] = c.imag();
  j["radius"] = quadrature::radius_of(d);
  return j;
}

json verdict_json(const muckenhoupt::ap_verdict& v) {
  json out;
  out["verdict"] = muckenhoupt::to_string(v.outcome);
  out["sup_quotient"] = num(v.sup_quotient);
  out["log_slope"] = v.log_slope ? num(*v.log_slope) : json(nullptr);
  json scale = json::array(), sup = json::array();
  for (const auto& t : v.refinement_trace) {
    scale.push_back(t.scale);
    sup.push_back(num(t.sup));
  }
  out["trace_scale"] = scale;
  out["trace_sup"] = sup;
  json w = json::array();
  for (const auto& x : v.witnesses) {
    json j = disk_json(x.disk);
    j["quotient"] = num(x.quotient);
    w.push_back(j);
  }
  out["witnesses"] = w;
  out["notes"] = v.notes;
  return out;
}

experiment_record run_apcheck(const params& a, const quadrature::quadrature_spec& spec, std::ostream& progress) {
  const double p = a.real("p");
  const auto w = choose_weights(a, "separation", p);
  const std::string mode_text = a.text_or("mode", "special");
  muckenhoupt::scan_mode mode;
  if (mode_text == "special")
    mode = muckenhoupt::scan_mode::special;
  else if (mode_text == "general")
    mode = muckenhoupt::scan_mode::general;
  else
    throw bergman::invalid_argument("option --mode: expected special or general");
  auto family = muckenhoupt::disk_family::standard();
  if (a.has("centers")) family.centers = a.reals("centers");
  if (a.has("radii")) family.radii = a.reals("radii");
  for (double r : family.radii)
    if (!(r > 0.0)) throw bergman::invalid_argument("option --radii: radii must be positive");

  progress_reporter report(progress, "apcheck");
  const auto v = muckenhoupt::ap_plus_scan(w.mu1, w.mu2, p, family, mode, spec, std::ref(report));
  experiment_record rec;
  rec.record = verdict_json(v);
  rec.record["mode"] = mode_text;
  rec.record["mu1"] = w.mu1.describe();
  rec.record["mu2"] = w.mu2.describe();
  if (w.conditions) rec.record["conditions_hold"] = *w.conditions;
  rec.exit_code = v.outcome == muckenhoupt::verdict::analytic_nonintegrable ? exit_divergent : exit_ok;
  rec.record["status"] = v.outcome == muckenhoupt::verdict::analytic_nonintegrable ? "analytic-nonintegrable" : "ok";
  return rec;
}

json run_probe(const params& a, const quadrature::quadrature_spec& spec) {
  const double p = a.real("p");
  const auto w = choose_weights(a, "unit", p);
  const long long levels = a.integer_or("levels", 4);
  if (levels < 1 || levels > 12) throw bergman::invalid_argument("option --levels must lie in [1, 12]");
  muckenhoupt::probe_options opt;
  opt.grid_per_tile = static_cast<int>(a.integer_or("grid", 4));
  opt.min_level = static_cast<int>(a.integer_or("min-level", -(levels + 2)));
  if (opt.grid_per_tile < 1 || opt.grid_per_tile > 64)
    throw bergman::invalid_argument("option --grid must lie in [1, 64]");
  if (opt.min_level > -(levels - 1)) throw bergman::invalid_argument("option --min-level must reach the test tiles");
  std::vector<muckenhoupt::step_function> family;
  for (long long m = 0; m < levels; ++m) {
    muckenhoupt::step_function f;
    f.set({0, static_cast<int>(-m)}, 1.0);
    family.push_back(f);
  }
  const auto r = muckenhoupt::two_weight_probe(w.mu1, w.mu2, p, family, opt, spec);
  json out;
  json ratios = json::array(), idx = json::array(), div = json::array();
  for (double x : r.ratios) ratios.push_back(num(x));
  for (auto i : r.indices) idx.push_back(i);
  for (auto i : r.divergent) div.push_back(i);
  out["index"] = idx;
  out["ratio"] = ratios;
  out["divergent"] = div;
  out["max_ratio"] = num(r.max_ratio);
  out["median_ratio"] = num(r.median_ratio);
  out["e_domination_c"] = num(r.e_domination_c);
  out["mu1"] = w.mu1.describe();
  out["mu2"] = w.mu2.describe();
  return out;
}

const std::vector<std::string> meta_keys = {"request", "version", "timestamp", "tolerances"};

std::string csv_cell(const json& v) {
  if (v.is_null()) return "";
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_float()) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v.get<double>());
    return buf;
  }
  const std::string s = v.is_string() ? v.get<std::string>() : v.dump();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char c : s) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  return quoted + "\"";
}

bool scalar_array(const json& v) {
  if (!v.is_array() || v.empty()) return false;
  return std::all_of(v.begin(), v.end(), [](const json& x) { return x.is_primitive(); });
}

}  // namespace

json results_of(const json& record) {
  json out = json::object();
  for (const auto& [key, value] : record.items())
    if (std::find(meta_keys.begin(), meta_keys.end(), key) == meta_keys.end()) out[key] = value;
  return out;
}

std::string to_csv(const json& record) {
  const json results = results_of(record);
  std::size_t rows = 1;
  for (const auto& [key, value] : results.items())
    if (scalar_array(value)) rows = std::max(rows, value.size());
  std::vector<std::string> columns;
  for (const auto& [key, value] : results.items())
    if (scalar_array(value) && value.size() == rows) columns.push_back(key);
  for (const auto& [key, value] : results.items())
    if (!(scalar_array(value) && value.size() == rows)) columns.push_back(key);

  std::ostringstream os;
  for (std::size_t c = 0; c < columns.size(); ++c) os << (c ? "," : "") << columns[c];
  os << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < columns.size(); ++c) {
      const json& v = results[columns[c]];
      const bool column = scalar_array(v) && v.size() == rows;
      os << (c ? "," : "") << csv_cell(column ? v[r] : v);
    }
    os << '\n';
  }
  return os.str();
}

json request_to_json(const command_request& request) {
  json j;
  j["subcommand"] = request.subcommand;
  json p = json::object();
  for (const auto& [k, v] : request.parameters) p[k] = v;
  j["parameters"] = p;
  j["output"] = request.output == output_format::json ? "json" : "csv";
  j["tolerances"] = {{"rel_tol", request.tolerances.rel_tol},
                     {"abs_tol", request.tolerances.abs_tol},
                     {"max_subdivision_depth", request.tolerances.max_subdivision_depth}};
  return j;
}

command_request request_from_json(const json& echo) {
  try {
    command_request r;
    r.subcommand = echo.at("subcommand").get<std::string>();
    params_of(r.subcommand);
    for (const auto& [k, v] : echo.at("parameters").items()) r.parameters[k] = v.get<std::string>();
    const std::string out = echo.value("output", "json");
    if (out != "json" && out != "csv") throw bergman::invalid_argument("request output must be json or csv");
    r.output = out == "json" ? output_format::json : output_format::csv;
    const auto& t = echo.at("tolerances");
    r.tolerances.rel_tol = t.at("rel_tol").get<double>();
    r.tolerances.abs_tol = t.at("abs_tol").get<double>();
    r.tolerances.max_subdivision_depth = t.at("max_subdivision_depth").get<int>();
    r.tolerances.validate();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw bergman::invalid_argument(std::string("malformed request echo: ") + e.what());
  }
}

std::vector<std::string> request_to_args(const command_request& request) {
  std::vector<std::string> args{request.subcommand};
  const auto& defs = params_of(request.subcommand);
  for (const auto& [k, v] : request.parameters) {
    const auto it = std::find_if(defs.begin(), defs.end(), [&](const param_def& d) { return d.name == k; });
    if (it != defs.end() && it->flag) {
      args.push_back("--" + k);
    } else {
      args.push_back("--" + k + "=" + v);
    }
  }
  char buf[40];
  args.push_back("--output=" + std::string(request.output == output_format::json ? "json" : "csv"));
  std::snprintf(buf, sizeof buf, "%.17g", request.tolerances.rel_tol);
  args.push_back(std::string("--rel-tol=") + buf);
  std::snprintf(buf, sizeof buf, "%.17g", request.tolerances.abs_tol);
  args.push_back(std::string("--abs-tol=") + buf);
  args.push_back("--max-depth=" + std::to_string(request.tolerances.max_subdivision_depth));
  return args;
}

experiment_record execute(const command_request& request, std::ostream& progress) {
  request.tolerances.validate();
  const auto& defs = params_of(request.subcommand);
  for (const auto& [k, v] : request.parameters)
    if (std::none_of(defs.begin(), defs.end(), [&](const param_def& d) { return d.name == k; }))
      throw bergman::invalid_argument("unknown option --" + k + " for " + request.subcommand);
  const params a(request.parameters);
  const auto& spec = request.tolerances;

  experiment_record rec;
  try {
    if (request.subcommand == "ranges")
      rec.record = run_ranges(a);
    else if (request.subcommand == "kernel")
      rec.record = run_kernel(a);
    else if (request.subcommand == "moments")
      rec.record = run_moments(a, spec);
    else if (request.subcommand == "blowup")
      rec.record = run_blowup(a, spec, progress);
    else if (request.subcommand == "schur")
      rec.record = run_schur(a, spec);
    else if (request.subcommand == "apcheck")
      rec = run_apcheck(a, spec, progress);
    else if (request.subcommand == "probe")
      rec.record = run_probe(a, spec);
    if (!rec.record.contains("status")) rec.record["status"] = "ok";
  } catch (const analytic_nonintegrable& e) {
    rec.record = json::object();
    rec.record["status"] = "analytic-nonintegrable";
    rec.record["error"] = e.what();
    rec.record["factor"] = e.factor();
    rec.record["threshold"] = e.threshold();
    rec.exit_code = exit_divergent;
  } catch (const divergent_integral& e) {
    rec.record = json::object();
    rec.record["status"] = "divergent";
    rec.record["error"] = e.what();
    rec.exit_code = exit_divergent;
  }
  rec.record["request"] = request_to_json(request);
  rec.record["version"] = BERGMAN_LAB_VERSION;
  rec.record["timestamp"] = timestamp_utc();
  rec.record["tolerances"] = request_to_json(request)["tolerances"];
  return rec;
}

namespace {

void emit(const experiment_record& rec, output_format fmt, std::ostream& out) {
  if (fmt == output_format::json)
    out << rec.record.dump(2) << '\n';
  else
    out << to_csv(rec.record);
}

struct parsed_command {
  command_request request;
  bool replay = false;
  std::string record_path;
  bool verify = false;
};

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted Bergman projection laboratory", "bergman_lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", BERGMAN_LAB_VERSION);

  quadrature::quadrature_spec defaults;
  try {
    defaults = quadrature::default_spec();
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  }

  struct sub_state {
    std::map<std::string, std::string> values;
    std::map<std::string, bool> flags;
    std::string output = "json";
    double rel_tol;
    double abs_tol;
    int max_depth;
  };
  std::map<std::string, sub_state> states;
  std::map<std::string, CLI::App*> apps;

  auto add_common = [&](CLI::App* sub, sub_state& st) {
    st.rel_tol = defaults.rel_tol;
    st.abs_tol = defaults.abs_tol;
    st.max_depth = defaults.max_subdivision_depth;
    sub->add_option("--output", st.output, "json | csv")->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--rel-tol", st.rel_tol, "relative quadrature tolerance (env BERGMAN_LAB_RTOL)");
    sub->add_option("--abs-tol", st.abs_tol, "absolute quadrature tolerance");
    sub->add_option("--max-depth", st.max_depth, "maximum subdivision depth");
  };

  static const std::map<std::string, std::string> blurbs = {
      {"ranges", "exact L^p boundedness interval of a weighted projection"},
      {"kernel", "evaluate a weighted Bergman kernel"},
      {"moments", "radial moment integral against its closed form"},
      {"blowup", "norm ratios of the test family near the endpoint"},
      {"schur", "Schur test feasibility box and ratio check"},
      {"apcheck", "B_p / A_p quotient scan over half-plane disks"},
      {"probe", "dyadic tile probe of averaged weight pairs"},
  };
  for (const auto& [name, defs] : subcommands()) {
    CLI::App* sub = app.add_subcommand(name, blurbs.at(name));
    auto& st = states[name];
    for (const auto& d : defs) {
      if (d.flag)
        sub->add_flag("--" + d.name, st.flags[d.name], d.help);
      else
        sub->add_option("--" + d.name, st.values[d.name], d.help)->allow_extra_args(false);
    }
    add_common(sub, st);
    apps[name] = sub;
  }
  std::string record_path;
  bool verify = false;
  CLI::App* replay = app.add_subcommand("replay", "re-run the request echo of a saved JSON record");
  replay->add_option("--record", record_path, "path of a JSON record")->required();
  replay->add_flag("--verify", verify, "exit 1 unless the results are identical");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return exit_ok;
    }
    err << "error: " << e.what() << "\n\n" << app.help();
    return exit_validation;
  }

  try {
    if (replay->parsed()) {
      std::ifstream in(record_path);
      if (!in) throw bergman::invalid_argument("cannot open record " + record_path);
      json old;
      try {
        old = json::parse(in);
      } catch (const nlohmann::json::exception& e) {
        throw bergman::invalid_argument(std::string("record is not valid JSON: ") + e.what());
      }
      if (!old.contains("request")) throw bergman::invalid_argument("record has no request echo");
      const command_request req = request_from_json(old["request"]);
      const auto rec = execute(req, err);
      emit(rec, req.output, out);
      if (verify) {
        const bool same = results_of(rec.record) == results_of(old);
        err << "replay " << (same ? "identical" : "differs") << '\n';
        if (!same) return exit_replay_mismatch;
      }
      return rec.exit_code;
    }

    for (const auto& [name, sub] : apps) {
      if (!sub->parsed()) continue;
      auto& st = states[name];
      command_request req;
      req.subcommand = name;
      for (const auto& d : params_of(name)) {
        if (d.flag) {
          if (st.flags[d.name]) req.parameters[d.name] = "true";
        } else if (sub->count("--" + d.name) > 0) {
          req.parameters[d.name] = st.values[d.name];
        }
      }
      req.output = st.output == "csv" ? output_format::csv : output_format::json;
      req.tolerances.rel_tol = st.rel_tol;
      req.tolerances.abs_tol = st.abs_tol;
      req.tolerances.max_subdivision_depth = st.max_depth;
      const auto rec = execute(req, err);
      emit(rec, req.output, out);
      return rec.exit_code;
    }
  } catch (const bergman::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const bergman::domain_error& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const bergman::unsupported_case& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  } catch (const bergman::near_singular& e) {
    err << "error: " << e.what() << '\n';
    return exit_validation;
  }
  err << "error: no subcommand\n" << app.help();
  return exit_validation;
}

}  // namespace bergman::cli
