#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace ptcycle {

struct NumericsConfig {
  double root_tol = 1e-12;       // relative to max(1, |x|)
  double quad_tol = 1e-9;        // absolute
  double fd_step_scale = 1e-5;   // relative step for central differences
  int scan_grid = 512;
  int max_iters = 200;
  int max_depth = 60;            // quadrature bisection depth cap

  void validate() const;
};

struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  bool contains(double x) const { return x >= lo && x <= hi; }
  bool contains(const Interval& other) const { return other.lo >= lo && other.hi <= hi; }
};

using ScalarFn = std::function<double(double)>;
using PlaneFn = std::function<double(double, double)>;

// Brent's method. Requires a strict sign change on [a, b]; the returned root
// lies inside the final bracket, whose width is at most root_tol * max(1,|x|).
double find_root_bracketed(const ScalarFn& f, double a, double b,
                           const NumericsConfig& cfg = {});

// Scans [lo, hi] on `grid` equal cells and refines every sign change with
// find_root_bracketed. Points where f throws or is non-finite split the scan;
// no root is reported across them. Roots are returned in increasing order.
std::vector<double> find_all_roots(const ScalarFn& f, double lo, double hi, int grid,
                                   const NumericsConfig& cfg = {});

// Adaptive Gauss-Kronrod (7/15) with interval halving. Subintervals are
// processed depth-first, left before right, so the result is deterministic.
double integrate_adaptive(const ScalarFn& f, double a, double b,
                          const NumericsConfig& cfg = {});

// Richardson-extrapolated central difference with steps h and h/2,
// h = fd_step_scale * max(1, |x|).
double derivative_central(const ScalarFn& f, double x, const NumericsConfig& cfg = {});

enum class ContourPlane { LambdaT, NuT, TimeT };

struct Contour {
  double level = 0.0;
  ContourPlane plane = ContourPlane::LambdaT;
  // Each polyline is ordered; points are (x, y).
  std::vector<std::vector<std::pair<double, double>>> polylines;

  bool empty() const { return polylines.empty(); }
  std::size_t point_count() const;
};

enum class ScanAxis {
  AlongX,  // one scanline per y grid value, roots searched in x
  AlongY,  // one scanline per x grid value, roots searched in y
};

struct Window {
  Interval x;
  Interval y;
};

struct Resolution {
  int nx = 100;
  int ny = 100;
};

// Scanline extraction of {f(x, y) = level}. Roots on neighbouring scanlines
// are linked to the nearest open polyline end if they are within two grid
// cells along the scan axis.
Contour trace_level_set(const PlaneFn& f, double level, const Window& window,
                        const Resolution& resolution, ScanAxis axis,
                        const NumericsConfig& cfg = {}, unsigned workers = 1);

// Worker count from PTCYCLE_NUM_THREADS (0 or unset -> hardware concurrency).
unsigned default_workers();

// Runs body(i) for i in [0, n) on up to `workers` threads. Each index is
// visited exactly once; callers write results into slot i only.
void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body);

}  // namespace ptcycle
