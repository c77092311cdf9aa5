#include "vextrace/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <queue>

namespace vextrace {

namespace {

// Gauss-Kronrod 7/15 nodes and weights on [-1,1] (QUADPACK constants).
// Nodes are the positive half; the rule is symmetric. The Gauss-7 nodes are
// the odd-indexed Kronrod nodes.
constexpr int kKn = 15;
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};
constexpr double kWeightsK[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};
constexpr double kWeightsG[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Rule15 {
  double x[kKn];
  double wk[kKn];
  double wg[kKn];  // zero on non-Gauss nodes
};

Rule15 make_rule() {
  Rule15 r{};
  for (int i = 0; i < 7; ++i) {
    r.x[i] = -kNodes[i];
    r.x[14 - i] = kNodes[i];
    r.wk[i] = kWeightsK[i];
    r.wk[14 - i] = kWeightsK[i];
  }
  r.x[7] = 0.0;
  r.wk[7] = kWeightsK[7];
  for (int i = 0; i < kKn; ++i) r.wg[i] = 0.0;
  // Gauss nodes sit at indices 1,3,5,7,9,11,13.
  r.wg[1] = kWeightsG[0];
  r.wg[13] = kWeightsG[0];
  r.wg[3] = kWeightsG[1];
  r.wg[11] = kWeightsG[1];
  r.wg[5] = kWeightsG[2];
  r.wg[9] = kWeightsG[2];
  r.wg[7] = kWeightsG[3];
  return r;
}

const Rule15& rule() {
  static const Rule15 r = make_rule();
  return r;
}

double kahan_sum(const std::vector<double>& xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    const double y = x - c;
    const double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

struct Panel1 {
  double a, b;
  double value, error;
  int depth;
  std::uint64_t id;
};

struct Panel2 {
  double x0, x1, y0, y1;
  double value, error;
  int depth;
  std::uint64_t id;
};

void eval_panel(const std::function<double(double)>& f, Panel1& p) {
  const Rule15& r = rule();
  const double h = 0.5 * (p.b - p.a);
  const double m = 0.5 * (p.a + p.b);
  double sk = 0.0, sg = 0.0;
  for (int i = 0; i < kKn; ++i) {
    const double v = f(m + h * r.x[i]);
    sk += r.wk[i] * v;
    sg += r.wg[i] * v;
  }
  p.value = h * sk;
  p.error = std::abs(h * (sk - sg));
  if (!std::isfinite(p.value))
    throw numerical_error("integrate_interval: non-finite integrand value");
}

void eval_panel(const std::function<double(double, double)>& f, Panel2& p) {
  const Rule15& r = rule();
  const double hx = 0.5 * (p.x1 - p.x0);
  const double mx = 0.5 * (p.x0 + p.x1);
  const double hy = 0.5 * (p.y1 - p.y0);
  const double my = 0.5 * (p.y0 + p.y1);
  double vals[kKn][kKn];
  for (int i = 0; i < kKn; ++i)
    for (int j = 0; j < kKn; ++j)
      vals[i][j] = f(mx + hx * r.x[i], my + hy * r.x[j]);
  double sk = 0.0, sg = 0.0;
  for (int i = 0; i < kKn; ++i) {
    double rowk = 0.0, rowg = 0.0;
    for (int j = 0; j < kKn; ++j) {
      rowk += r.wk[j] * vals[i][j];
      rowg += r.wg[j] * vals[i][j];
    }
    sk += r.wk[i] * rowk;
    sg += r.wg[i] * rowg;
  }
  p.value = hx * hy * sk;
  p.error = std::abs(hx * hy * (sk - sg));
  if (!std::isfinite(p.value))
    throw numerical_error("integrate_box: non-finite integrand value");
}

// Global adaptive refinement over a deterministic worst-first queue.
// Panels are totally ordered by (error, id) so the subdivision sequence and
// the final fixed-order summation are reproducible run to run.
template <typename Panel, typename Frontier>
IntegralEstimate refine(std::vector<Panel>& panels, Frontier split, double rel_tol,
                        int max_depth, int max_panels, const char* who) {
  auto cmp = [](const Panel* a, const Panel* b) {
    if (a->error != b->error) return a->error < b->error;
    return a->id > b->id;
  };
  // Index-based heap over a stable arena.
  std::vector<std::size_t> heap;
  auto heap_cmp = [&panels, &cmp](std::size_t a, std::size_t b) {
    return cmp(&panels[a], &panels[b]);
  };
  std::vector<char> active(panels.size(), 1);
  for (std::size_t i = 0; i < panels.size(); ++i) heap.push_back(i);
  std::make_heap(heap.begin(), heap.end(), heap_cmp);

  // Running totals are updated incrementally and re-accumulated periodically
  // to wash out cancellation drift.
  double v = 0.0, e = 0.0;
  for (const Panel& p : panels) {
    v += p.value;
    e += p.error;
  }
  int since_resum = 0;
  auto resum = [&]() {
    v = e = 0.0;
    for (std::size_t i = 0; i < panels.size(); ++i)
      if (active[i]) {
        v += panels[i].value;
        e += panels[i].error;
      }
  };

  while (true) {
    if (++since_resum >= 256) {
      resum();
      since_resum = 0;
    }
    const double target = rel_tol * std::max(std::abs(v), 1e-300);
    if (e <= target) break;
    if (static_cast<int>(panels.size()) > max_panels)
      throw numerical_error(std::string(who) + ": tolerance not met within panel budget");
    // Pop the worst active panel.
    std::size_t worst;
    while (true) {
      std::pop_heap(heap.begin(), heap.end(), heap_cmp);
      worst = heap.back();
      heap.pop_back();
      if (active[worst]) break;
      if (heap.empty())
        throw numerical_error(std::string(who) + ": refinement frontier exhausted");
    }
    if (panels[worst].depth >= max_depth)
      throw numerical_error(std::string(who) + ": tolerance not met at maximum refinement depth");
    active[worst] = 0;
    v -= panels[worst].value;
    e -= panels[worst].error;
    const std::size_t first_child = panels.size();
    const Panel parent = panels[worst];  // copy: split() may reallocate the arena
    split(parent, panels);
    active.resize(panels.size(), 1);
    for (std::size_t i = first_child; i < panels.size(); ++i) {
      v += panels[i].value;
      e += panels[i].error;
      heap.push_back(i);
      std::push_heap(heap.begin(), heap.end(), heap_cmp);
    }
  }

  std::vector<double> vs, es;
  for (std::size_t i = 0; i < panels.size(); ++i)
    if (active[i]) {
      vs.push_back(panels[i].value);
      es.push_back(panels[i].error);
    }
  return {kahan_sum(vs), kahan_sum(es)};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2))
    throw std::invalid_argument("QuadratureSpec: rel_tol must lie in (0, 1e-2]");
  if (max_depth < 4) throw std::invalid_argument("QuadratureSpec: max_depth must be >= 4");
}

IntegralEstimate integrate_interval(const std::function<double(double)>& f, double a,
                                    double b, double rel_tol, int max_depth,
                                    int max_panels) {
  if (!(b > a)) return {0.0, 0.0};
  std::uint64_t next_id = 0;
  std::vector<Panel1> panels;
  const int n0 = 8;
  for (int i = 0; i < n0; ++i) {
    Panel1 p{a + (b - a) * i / n0, a + (b - a) * (i + 1) / n0, 0, 0, 0, next_id++};
    eval_panel(f, p);
    panels.push_back(p);
  }
  auto split = [&f, &next_id](const Panel1& p, std::vector<Panel1>& out) {
    const double m = 0.5 * (p.a + p.b);
    Panel1 l{p.a, m, 0, 0, p.depth + 1, next_id++};
    Panel1 r{m, p.b, 0, 0, p.depth + 1, next_id++};
    eval_panel(f, l);
    eval_panel(f, r);
    out.push_back(l);
    out.push_back(r);
  };
  return refine(panels, split, rel_tol, max_depth, max_panels, "integrate_interval");
}

IntegralEstimate integrate_box(const std::function<double(double, double)>& f,
                               double x0, double x1, double y0, double y1,
                               double rel_tol, int max_depth, int max_panels) {
  if (!(x1 > x0) || !(y1 > y0)) return {0.0, 0.0};
  std::uint64_t next_id = 0;
  std::vector<Panel2> panels;
  const int n0 = 4;
  for (int i = 0; i < n0; ++i)
    for (int j = 0; j < n0; ++j) {
      Panel2 p{x0 + (x1 - x0) * i / n0,     x0 + (x1 - x0) * (i + 1) / n0,
               y0 + (y1 - y0) * j / n0,     y0 + (y1 - y0) * (j + 1) / n0,
               0, 0, 0, next_id++};
      eval_panel(f, p);
      panels.push_back(p);
    }
  auto split = [&f, &next_id](const Panel2& p, std::vector<Panel2>& out) {
    const double mx = 0.5 * (p.x0 + p.x1);
    const double my = 0.5 * (p.y0 + p.y1);
    const double xs[3] = {p.x0, mx, p.x1};
    const double ys[3] = {p.y0, my, p.y1};
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) {
        Panel2 c{xs[i], xs[i + 1], ys[j], ys[j + 1], 0, 0, p.depth + 1, next_id++};
        eval_panel(f, c);
        out.push_back(c);
      }
  };
  return refine(panels, split, rel_tol, max_depth, max_panels, "integrate_box");
}

double tail_bound(double decay_exponent, int N, double R) {
  if (!(decay_exponent > N))
    throw divergence_error("tail_bound: decay exponent must exceed the dimension");
  if (!(R > 0.0)) throw std::invalid_argument("tail_bound: R must be positive");
  return 0.5 * unit_sphere_area(N - 1) * std::pow(R, N - decay_exponent) /
         (decay_exponent - N);
}

namespace {

// Empirical tail constant probed on two arcs near radius R:
// |g| <~ C r^{-alpha} for plain kernels, |g| <~ C r^{-alpha} ln r for
// logarithmic ones.
double probe_tail_2d(const RadialKernel& k, double R) {
  double C = 0.0;
  for (double r : {R, 1.5 * R}) {
    const double lr = k.logarithmic ? std::max(1.0, std::log(r)) : 1.0;
    for (int i = 0; i <= 16; ++i) {
      const double th = 0.5 * kPi * i / 16.0;
      const double v = std::abs(k.g(r * std::cos(th), r * std::sin(th)));
      C = std::max(C, v * std::pow(r, k.decay_exponent) / lr);
    }
  }
  return C;
}

double probe_tail_1d(const BoundaryKernel& k, double R) {
  double C = 0.0;
  for (double r : {R, 1.5 * R}) {
    const double lr = k.logarithmic ? std::max(1.0, std::log(r)) : 1.0;
    C = std::max(C, std::abs(k.g(r)) * std::pow(r, k.decay_exponent) / lr);
  }
  return C;
}

// Exact tail of C r^{-alpha} (ln r) over {|x| > R} in the half-space:
//   (omega_{N-1}/2) R^{N-alpha} (ln R + 1/(alpha-N)) / (alpha-N)  [log case]
double halfspace_tail(double C, double alpha, int N, double R, bool log_kernel) {
  const double gap = alpha - N;
  double t = C * 0.5 * unit_sphere_area(N - 1) * std::pow(R, -gap) / gap;
  if (log_kernel) t *= std::log(R) + 1.0 / gap;
  return t;
}

// Same along the boundary: int_R^inf C rho^{-alpha} (ln rho) rho^{N-2} drho.
double boundary_tail(double C, double alpha, int N, double R, bool log_kernel) {
  const double gap = alpha - (N - 1);
  double t = C * std::pow(R, -gap) / gap;
  if (log_kernel) t *= std::log(R) + 1.0 / gap;
  return t;
}

}  // namespace

IntegralEstimate halfspace_integral(const RadialKernel& kernel, int N,
                                    const QuadratureSpec& spec) {
  spec.validate();
  if (N < 3) throw std::invalid_argument("halfspace_integral: N must be >= 3");
  if (!kernel.g) throw std::invalid_argument("halfspace_integral: empty kernel");
  if (!(kernel.decay_exponent > N))
    throw divergence_error("halfspace_integral: decay exponent must exceed N");
  if (kernel.logarithmic) {
    // Log-carrying integrands must be bounded near the origin.
    for (double r : {1e-8, 1e-6, 1e-4})
      for (double th : {0.0, 0.7, 1.4})
        if (!std::isfinite(kernel.g(r * std::cos(th), r * std::sin(th))))
          throw numerical_error("halfspace_integral: logarithmic kernel singular at origin");
  }

  const double omega = unit_sphere_area(N - 2);
  auto weighted = [&kernel, N](double rho, double t) {
    return kernel.g(rho, t) * std::pow(rho, N - 2);
  };

  const bool auto_R = spec.truncation_radius <= 0.0;
  double R = auto_R ? 16.0 : spec.truncation_radius;

  // Core box plus doubling shells: each piece is integrated at its own scale,
  // so the truncation radius can grow geometrically without re-refining the
  // peak region.
  std::vector<double> piece_vals, piece_errs;
  {
    const IntegralEstimate core =
        integrate_box(weighted, 0.0, R, 0.0, R, 0.5 * spec.rel_tol, spec.max_depth,
                      spec.max_panels);
    piece_vals.push_back(core.value);
    piece_errs.push_back(core.error);
  }
  double tail = 0.0;
  for (int iter = 0;; ++iter) {
    const double C = probe_tail_2d(kernel, R);
    tail = halfspace_tail(C, kernel.decay_exponent, N, R, kernel.logarithmic);
    const double value_so_far = omega * kahan_sum(piece_vals);
    const double scale = std::max(std::abs(value_so_far), 1e-300);
    if (!auto_R) break;
    if (tail <= 0.1 * spec.rel_tol * scale) break;
    if (C == 0.0 && value_so_far == 0.0) {
      tail = 0.0;  // identically vanishing kernel
      break;
    }
    if (R > 1e15 || iter > 80)
      throw numerical_error("halfspace_integral: truncation radius growth exhausted");
    const IntegralEstimate sa =
        integrate_box(weighted, R, 2.0 * R, 0.0, 2.0 * R, spec.rel_tol, spec.max_depth,
                      spec.max_panels);
    const IntegralEstimate sb =
        integrate_box(weighted, 0.0, R, R, 2.0 * R, spec.rel_tol, spec.max_depth,
                      spec.max_panels);
    piece_vals.push_back(sa.value);
    piece_vals.push_back(sb.value);
    piece_errs.push_back(sa.error);
    piece_errs.push_back(sb.error);
    R *= 2.0;
  }
  return {omega * kahan_sum(piece_vals), omega * kahan_sum(piece_errs) + tail};
}

IntegralEstimate boundary_integral(const BoundaryKernel& kernel, int N,
                                   const QuadratureSpec& spec) {
  spec.validate();
  if (N < 3) throw std::invalid_argument("boundary_integral: N must be >= 3");
  if (!kernel.g) throw std::invalid_argument("boundary_integral: empty kernel");
  if (!(kernel.decay_exponent > N - 1))
    throw divergence_error("boundary_integral: kernel must decay faster than rho^{-(N-1)}");

  const double omega = unit_sphere_area(N - 2);
  auto weighted = [&kernel, N](double rho) {
    return kernel.g(rho) * std::pow(rho, N - 2);
  };

  const bool auto_R = spec.truncation_radius <= 0.0;
  double R = auto_R ? 16.0 : spec.truncation_radius;
  std::vector<double> piece_vals, piece_errs;
  {
    const IntegralEstimate core = integrate_interval(weighted, 0.0, R, 0.5 * spec.rel_tol,
                                                     spec.max_depth, spec.max_panels);
    piece_vals.push_back(core.value);
    piece_errs.push_back(core.error);
  }
  double tail = 0.0;
  for (int iter = 0;; ++iter) {
    const double C = probe_tail_1d(kernel, R);
    tail = boundary_tail(C, kernel.decay_exponent, N, R, kernel.logarithmic);
    const double value_so_far = omega * kahan_sum(piece_vals);
    const double scale = std::max(std::abs(value_so_far), 1e-300);
    if (!auto_R) break;
    if (tail <= 0.1 * spec.rel_tol * scale) break;
    if (C == 0.0 && value_so_far == 0.0) {
      tail = 0.0;
      break;
    }
    if (R > 1e15 || iter > 80)
      throw numerical_error("boundary_integral: truncation radius growth exhausted");
    const IntegralEstimate shell = integrate_interval(weighted, R, 2.0 * R, spec.rel_tol,
                                                      spec.max_depth, spec.max_panels);
    piece_vals.push_back(shell.value);
    piece_errs.push_back(shell.error);
    R *= 2.0;
  }
  return {omega * kahan_sum(piece_vals), omega * kahan_sum(piece_errs) + tail};
}

double sphere_moment(std::span<const int> exponents, int m) {
  if (m < 1) throw std::invalid_argument("sphere_moment: m must be >= 1");
  if (static_cast<int>(exponents.size()) > m)
    throw std::invalid_argument("sphere_moment: more exponents than coordinates");
  long long A = 0;
  for (int k : exponents) {
    if (k < 0) throw std::invalid_argument("sphere_moment: negative exponent");
    if (k % 2 != 0) return 0.0;
    A += k / 2;
  }
  double num = 1.0;
  for (int k : exponents)
    for (int j = k - 1; j >= 1; j -= 2) num *= static_cast<double>(j);  // (k-1)!!
  double den = 1.0;
  for (long long j = 0; j < A; ++j) den *= static_cast<double>(m + 2 * j);
  return num / den;
}

}  // namespace vextrace
