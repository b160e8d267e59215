#include "ptcycle/numerics.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include "ptcycle/error.hpp"

namespace ptcycle {

void NumericsConfig::validate() const {
  if (!(root_tol > 0) || !(quad_tol > 0) || !(fd_step_scale > 0) || scan_grid <= 0 ||
      max_iters <= 0 || max_depth <= 0) {
    throw Error(ErrorCode::InvalidArgument, "numerics settings must all be positive");
  }
}

std::size_t Contour::point_count() const {
  std::size_t n = 0;
  for (const auto& line : polylines) n += line.size();
  return n;
}

double find_root_bracketed(const ScalarFn& f, double a, double b, const NumericsConfig& cfg) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (!std::isfinite(fa) || !std::isfinite(fb) || (fa > 0) == (fb > 0)) {
    throw Error(ErrorCode::NotBracketed,
                "f(" + std::to_string(a) + ") and f(" + std::to_string(b) + ") share a sign");
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double c = a, fc = fa;
  double d = b - a, e = d;
  for (int iter = 0; iter < cfg.max_iters; ++iter) {
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = e = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol = 2.0 * eps * std::abs(b) + 0.5 * cfg.root_tol * std::max(1.0, std::abs(b));
    const double m = 0.5 * (c - b);
    if (std::abs(m) <= tol || fb == 0.0) return b;

    if (std::abs(e) >= tol && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * m * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * m * q - std::abs(tol * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = m;
        e = m;
      }
    } else {
      d = m;
      e = m;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol) ? d : (m > 0 ? tol : -tol);
    fb = f(b);
    if (!std::isfinite(fb)) {
      throw Error(ErrorCode::EvaluationFailed, "non-finite value inside bracket at " + std::to_string(b));
    }
  }
  throw Error(ErrorCode::MaxIters, "bracketed root search did not converge");
}

namespace {

double safe_eval(const ScalarFn& f, double x) {
  try {
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
  } catch (const std::exception&) {
    return std::numeric_limits<double>::quiet_NaN();
  }
}

}  // namespace

std::vector<double> find_all_roots(const ScalarFn& f, double lo, double hi, int grid,
                                   const NumericsConfig& cfg) {
  if (grid <= 0 || !(hi > lo)) {
    throw Error(ErrorCode::InvalidArgument, "root scan needs lo < hi and a positive grid");
  }
  std::vector<double> xs(static_cast<std::size_t>(grid) + 1);
  std::vector<double> fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = (i + 1 == xs.size()) ? hi : lo + (hi - lo) * static_cast<double>(i) / grid;
    fs[i] = safe_eval(f, xs[i]);
  }
  std::vector<double> roots;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (fs[i] == 0.0) {
      roots.push_back(xs[i]);
      continue;
    }
    if (i + 1 == xs.size()) break;
    const double f0 = fs[i], f1 = fs[i + 1];
    if (std::isnan(f0) || std::isnan(f1) || f1 == 0.0) continue;
    if ((f0 > 0) != (f1 > 0)) roots.push_back(find_root_bracketed(f, xs[i], xs[i + 1], cfg));
  }
  return roots;
}

namespace {

// Gauss-Kronrod 7/15 abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct GkResult {
  double value;
  double error;
};

GkResult gauss_kronrod(const ScalarFn& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double sum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * sum;
    if (j % 2 == 1) gauss += kWg[j / 2] * sum;
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) {
    throw Error(ErrorCode::EvaluationFailed, "non-finite integrand on [" + std::to_string(a) + ", " +
                                                 std::to_string(b) + "]");
  }
  return {kronrod, std::abs(kronrod - gauss)};
}

double integrate_recursive(const ScalarFn& f, double a, double b, double tol, int depth,
                           const NumericsConfig& cfg) {
  const GkResult whole = gauss_kronrod(f, a, b);
  if (whole.error <= tol) return whole.value;
  if (depth >= cfg.max_depth) {
    throw Error(ErrorCode::MaxDepth, "quadrature depth cap reached on [" + std::to_string(a) + ", " +
                                         std::to_string(b) + "]");
  }
  const double mid = 0.5 * (a + b);
  return integrate_recursive(f, a, mid, 0.5 * tol, depth + 1, cfg) +
         integrate_recursive(f, mid, b, 0.5 * tol, depth + 1, cfg);
}

}  // namespace

double integrate_adaptive(const ScalarFn& f, double a, double b, const NumericsConfig& cfg) {
  if (a == b) return 0.0;
  return integrate_recursive(f, a, b, cfg.quad_tol, 0, cfg);
}

double derivative_central(const ScalarFn& f, double x, const NumericsConfig& cfg) {
  const double h = cfg.fd_step_scale * std::max(1.0, std::abs(x));
  auto central = [&](double step) {
    double fp, fm;
    try {
      fp = f(x + step);
      fm = f(x - step);
    } catch (const Error& e) {
      throw Error(ErrorCode::EvaluationFailed, "derivative stencil at " + std::to_string(x) + ": " + e.what());
    }
    if (!std::isfinite(fp) || !std::isfinite(fm)) {
      throw Error(ErrorCode::EvaluationFailed, "non-finite value in stencil at " + std::to_string(x));
    }
    return (fp - fm) / (2.0 * step);
  };
  const double coarse = central(h);
  const double fine = central(0.5 * h);
  return (4.0 * fine - coarse) / 3.0;
}

unsigned default_workers() {
  if (const char* env = std::getenv("PTCYCLE_NUM_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, unsigned workers, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  std::vector<std::exception_ptr> errors(n);
  auto run = [&](std::size_t i) {
    try {
      body(i);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  };
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) run(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < n; i = next++) run(i);
      });
    }
    for (auto& t : pool) t.join();
  }
  // Lowest failing index wins, independent of scheduling.
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

Contour trace_level_set(const PlaneFn& f, double level, const Window& window,
                        const Resolution& resolution, ScanAxis axis, const NumericsConfig& cfg,
                        unsigned workers) {
  if (resolution.nx <= 0 || resolution.ny <= 0 || !(window.x.hi > window.x.lo) ||
      !(window.y.hi > window.y.lo)) {
    throw Error(ErrorCode::InvalidArgument, "contour window and resolution must be non-degenerate");
  }
  const bool along_x = axis == ScanAxis::AlongX;
  const Interval fixed = along_x ? window.y : window.x;
  const Interval scan = along_x ? window.x : window.y;
  const int n_lines = along_x ? resolution.ny : resolution.nx;
  const int n_cells = along_x ? resolution.nx : resolution.ny;
  const double cell = scan.width() / n_cells;

  std::vector<double> line_values(static_cast<std::size_t>(n_lines) + 1);
  for (std::size_t k = 0; k < line_values.size(); ++k) {
    line_values[k] = (k + 1 == line_values.size())
                         ? fixed.hi
                         : fixed.lo + fixed.width() * static_cast<double>(k) / n_lines;
  }
  std::vector<std::vector<double>> roots(line_values.size());
  parallel_for(line_values.size(), workers, [&](std::size_t k) {
    const double c = line_values[k];
    ScalarFn g = along_x ? ScalarFn([&, c](double s) { return f(s, c) - level; })
                         : ScalarFn([&, c](double s) { return f(c, s) - level; });
    roots[k] = find_all_roots(g, scan.lo, scan.hi, n_cells, cfg);
  });

  Contour out;
  out.level = level;
  auto point = [&](double s, double c) {
    return along_x ? std::pair<double, double>{s, c} : std::pair<double, double>{c, s};
  };
  std::vector<std::size_t> open;  // polylines ending on the previous scanline
  for (std::size_t k = 0; k < roots.size(); ++k) {
    const double c = line_values[k];
    struct Candidate {
      double dist;
      std::size_t root;
      std::size_t line;
    };
    std::vector<Candidate> candidates;
    for (std::size_t r = 0; r < roots[k].size(); ++r) {
      for (std::size_t id : open) {
        const auto& last = out.polylines[id].back();
        const double prev = along_x ? last.first : last.second;
        const double dist = std::abs(roots[k][r] - prev);
        if (dist <= 2.0 * cell) candidates.push_back({dist, r, id});
      }
    }
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](const Candidate& a, const Candidate& b) { return a.dist < b.dist; });
    std::vector<bool> root_used(roots[k].size(), false);
    std::vector<std::size_t> next_open;
    std::vector<bool> line_used(out.polylines.size(), false);
    for (const auto& cand : candidates) {
      if (root_used[cand.root] || line_used[cand.line]) continue;
      root_used[cand.root] = true;
      line_used[cand.line] = true;
      out.polylines[cand.line].push_back(point(roots[k][cand.root], c));
      next_open.push_back(cand.line);
    }
    for (std::size_t r = 0; r < roots[k].size(); ++r) {
      if (root_used[r]) continue;
      out.polylines.push_back({point(roots[k][r], c)});
      next_open.push_back(out.polylines.size() - 1);
    }
    std::sort(next_open.begin(), next_open.end());
    open = std::move(next_open);
  }
  return out;
}

}  // namespace ptcycle
