#pragma once
//
// Two-weight A_p and A_p^+ conditions on the upper half plane, the dyadic
// tiling with its averaging operator E, and a numerical probe of the
// absolute Bergman operator between weighted L^p spaces.
//

#include <complex>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bergman/half_plane_weight.hpp"
#include "bergman/quadrature.hpp"

namespace bergman::muckenhoupt {

using quadrature::disk_region;
using quadrature::general_disk;
using quadrature::quadrature_spec;
using quadrature::special_disk;

//
// A_p quotients and scans
//

/// avg(mu1) * avg(mu2^{-1/(p-1)})^{p-1} over D intersected with the upper half plane.
double ap_quotient(const half_plane_weight& mu1, const half_plane_weight& mu2, double p, const disk_region& disk,
                   const quadrature_spec& spec = quadrature_spec{});

enum class verdict { bounded_evidence, divergent, analytic_nonintegrable };
std::string to_string(verdict v);

enum class scan_mode { special, general };
std::string to_string(scan_mode m);

struct disk_family {
  std::vector<double> centers;
  std::vector<double> radii;

  /// centers {0, +-1, +-4, +-16}, radii 2^m for m = -10..10
  static disk_family standard();
};

struct witness {
  disk_region disk;
  double quotient;
};

struct trace_entry {
  double scale;
  double sup;
};

struct ap_verdict {
  double sup_quotient = 0.0;
  /// Largest quotients first, at most eight.
  std::vector<witness> witnesses;
  verdict outcome = verdict::bounded_evidence;
  /// Sup over the disks of each radius, radii ascending.
  std::vector<trace_entry> refinement_trace;
  /// General mode: least-squares slope of log quotient against log radius over
  /// the three smallest disks centred at i.
  std::optional<double> log_slope;
  std::string notes;
};

using progress_callback = std::function<void(std::size_t done, std::size_t total)>;

/// Special mode scans the special disks (x0, r).  General mode scans the same
/// disks and, at every radius, the disk centred at i.  A scan is divergent when
/// the trace rises monotonically over the three levels at either end of the
/// radius ladder with total growth above 4.
ap_verdict ap_plus_scan(const half_plane_weight& mu1, const half_plane_weight& mu2, double p,
                        const disk_family& family, scan_mode mode, const quadrature_spec& spec = quadrature_spec{},
                        const progress_callback& progress = {});

/// |i + z|^{-2(2-p)}
half_plane_weight sigma_weight(double p);

struct weight_pair {
  half_plane_weight mu1;
  half_plane_weight mu2;
};

/// mu1 = |(i-z)/(i+z)|^{-(k+1)p + s + 2k},  mu2 = |(i-z)/(i+z)|^{(1-s-k)p + s + 2k}.
weight_pair separation_pair(double s, std::int64_t k, double p);

/// s + 2k + 2 > (k+1) p  and  p (s + k + 1) > s + 2k + 2.
bool separation_conditions(double s, std::int64_t k, double p);

//
// dyadic tiling
//

/// [j 2^k, (j+1) 2^k] x [2^k, 2^{k+1}]
struct tiling_square {
  std::int64_t j;
  int k;

  double side() const;
  double x_lo() const;
  double x_hi() const;
  double y_lo() const;
  double y_hi() const;
  /// Lebesgue area / pi.
  double area() const;
  std::complex<double> center() const;
  bool contains(std::complex<double> z) const;

  friend bool operator==(const tiling_square&, const tiling_square&) = default;
  friend auto operator<=>(const tiling_square&, const tiling_square&) = default;
};

/// The square containing z; Im z = 2^k belongs to level k, Re z = j 2^k to column j.
tiling_square tile_of(std::complex<double> z);

/// Nonnegative function that is constant on each of the 4^depth congruent
/// subcells of every tile in its support.  Subcells are stored row-major,
/// rows running upward.
class step_function {
public:
  explicit step_function(int depth = 0);

  int depth() const noexcept { return depth_; }
  std::size_t cells_per_tile() const noexcept { return std::size_t{1} << (2 * depth_); }

  /// Constant value on a tile.
  void set(const tiling_square& t, double value);
  /// Per-subcell values; size must equal cells_per_tile().
  void set(const tiling_square& t, std::vector<double> values);

  const std::map<tiling_square, std::vector<double>>& cells() const noexcept { return cells_; }
  double value_at(std::complex<double> z) const;

  /// The same function at a finer depth.
  step_function refined(int depth) const;
  step_function pow(double p) const;

  /// Integral over the half plane against Lebesgue / pi.
  double integral() const;

  friend step_function operator*(const step_function& f, const step_function& g);
  friend bool operator==(const step_function&, const step_function&) = default;

private:
  int depth_;
  std::map<tiling_square, std::vector<double>> cells_;
};

/// Tile averages of f on its own support.
step_function averaging_E(const step_function& f);
/// Tile averages of f on the listed squares; squares outside f's support average to 0.
step_function averaging_E(const step_function& f, const std::vector<tiling_square>& support);
/// Tile averages of a pointwise-evaluable nonnegative function, by quadrature.
step_function averaging_E(const std::function<double(std::complex<double>)>& f,
                          const std::vector<tiling_square>& support, const quadrature_spec& spec = quadrature_spec{});
/// Tile averages of a weight; tiles with a corner at i are integrated in polar
/// coordinates about i.  Throws analytic_nonintegrable when the weight is not
/// integrable near i.
step_function averaging_E(const half_plane_weight& w, const std::vector<tiling_square>& support,
                          const quadrature_spec& spec = quadrature_spec{});

struct e_property_report {
  bool a;
  bool b;
  bool c;
  /// |int E(f) g - int E(f) E(g)|, relative to the larger side.
  double a_residual;
  /// min over the inequality of (right - left), relative; negative means violated.
  double b_margin;
  double c_margin;
};

/// (a) int E(f) g = int E(f) E(g);  (b) int (E f)^p g <= int E(f^p) g;
/// (c) E(fg) <= E(f^p)^{1/p} E(g^{p'})^{1/p'} on every tile.  Tolerance 1e-12 relative.
e_property_report check_E_properties(const step_function& f, const step_function& g, double p);

//
// two-weight probe for the absolute Bergman operator
//

struct rectangle {
  double x_lo = -8.0;
  double x_hi = 8.0;
  double y_hi = 8.0;
};

struct probe_options {
  rectangle truncation{};
  /// Finest tiling level of the evaluation grid; the strip below 2^min_level is dropped.
  int min_level = -4;
  /// Midpoints per tile side.
  int grid_per_tile = 4;
};

struct probe_result {
  std::vector<double> ratios;
  /// Index into the test family of each entry of `ratios`.
  std::vector<std::size_t> indices;
  /// Test functions whose norms diverge, excluded from the statistics.
  std::vector<std::size_t> divergent;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  /// Smallest c with B(f) <= c E B E(f) at every grid tile, over the family.
  double e_domination_c = 0.0;
};

/// B f(z) = int f(w) / |z - conj(w)|^2 dA(w) / pi on the grid of `options`;
/// reports ||B f||_{p, mu1} / ||f||_{p, mu2} for every test function.
probe_result two_weight_probe(const half_plane_weight& mu1, const half_plane_weight& mu2, double p,
                              const std::vector<step_function>& test_family, const probe_options& options = {},
                              const quadrature_spec& spec = quadrature_spec{});

/// A_p scan of the averaged pair (E mu1, E mu2) over disks composed of whole
/// tiles: for each centre and radius, the tiles of level >= min_level whose
/// centres lie in the disk.
ap_verdict averaged_pair_scan(const half_plane_weight& mu1, const half_plane_weight& mu2, double p,
                              const std::vector<std::complex<double>>& centers, const std::vector<double>& radii,
                              int min_level = -6, const quadrature_spec& spec = quadrature_spec{});

}  // namespace bergman::muckenhoupt
