#pragma once

#include <Eigen/Dense>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "vextrace/expansions.hpp"
#include "vextrace/extremal.hpp"
#include "vextrace/fields.hpp"
#include "vextrace/luxemburg.hpp"
#include "vextrace/sampled_field.hpp"

namespace vextrace {

/// F(u) = int (1/p)(|grad u|^p + h |u|^p) - int_boundary (1/r)|u|^r on grids.
/// `r` and `boundary_u` live on the boundary grid with surface weights.
double functional_value(const SampledField& u, std::span<const SampledField> grad_u,
                        const SampledField& p, const SampledField& h,
                        const SampledField& r, const SampledField& boundary_u);

/// Closed-form coefficient functions f_0 .. f_4 of the expansion of
/// F(s z_eps), assembled from the Z-normalized bubble table. The curvature
/// entering f_2 is the trace of the second fundamental form (the Jacobian
/// expansion coefficient).
struct FCoefficients {
  int N = 0;
  double p = 0.0, p_star = 0.0;
  double kbar = 0.0;
  double level = 0.0;  // kbar^{-p p_*/(p_*-p)}
  double C = 0.0;      // Z = C V

  TableEntry zg0, zg1, zgty, zg2, zgy, zsy;  // Z-scaled integrals

  double dt_p = 0.0, dtt_p = 0.0, lap_y_p = 0.0, lap_y_r = 0.0;
  double h0 = 0.0;
  double curv_trace = 0.0;

  double f0(double s) const;
  double f0_d(double s) const;
  double f0_dd(double s) const;
  Coefficient f1(double s) const;
  Coefficient f2(double s) const;
  Coefficient f3(double s) const;
  Coefficient f4(double s) const;
  double f1_d(double s) const;

  /// a = -f1'(1)/f0''(1): the eps*ln(eps) rate of the argmax displacement.
  double argmax_shift_rate() const;
};

FCoefficients f_coefficients(const ProblemConfig& config,
                             const QuadratureSpec& spec = {.rel_tol = 1e-9});

/// Direct evaluation of s -> F(s z_eps) on the s grid (64 log-spaced points
/// in [1e-2, 4] plus s = 1 when the config has no grid), with golden-section
/// refinement of the argmax to 1e-6.
struct EnergyCurve {
  double eps = 0.0;
  std::vector<double> s;
  std::vector<double> values;
  double s_argmax = 0.0;
  double max_value = 0.0;

  nlohmann::json to_json() const;
  std::string to_csv() const;
};

EnergyCurve energy_curve(const ProblemConfig& config, double eps,
                         const QuadratureSpec& spec = {.rel_tol = 1e-8});

/// Model value (1/p - 1/p_*) kbar^{-p p_*/(p_*-p)} for the critical level.
/// This is the constant in the expansion of sup_s F(s z_eps), explicitly a
/// MODEL for c* (the localized constant T-bar is not computed).
double critical_level_model(const ProblemConfig& config,
                            const QuadratureSpec& spec = {.rel_tol = 1e-9});

enum class TheoremCase { case1 = 1, case2 = 2, case3 = 3, case4 = 4, none = 0 };

struct Verdict {
  TheoremCase case_id = TheoremCase::none;
  std::string tested_quantity;
  double value = 0.0;
  bool pass = false;
  double model_level = 0.0;
  std::vector<std::string> notes;

  nlohmann::json to_json() const;
};

/// Case selection and sign check for the sufficient conditions: picks the
/// applicable case from (dt p(0), H(0), p(0), h(0), Laplacians), evaluates
/// the matching f_i(1) and passes iff it is strictly negative. Equality or
/// an inapplicable branch yields `none`. Throws hypothesis_error when the
/// validated hypotheses fail.
Verdict theorem42_verdict(const ProblemConfig& config,
                          const QuadratureSpec& spec = {.rel_tol = 1e-9});

/// Sampled data bundle for the grid-based functional.
struct EnergyFieldBundle {
  SampledField u;
  std::vector<SampledField> grad;
  SampledField p;
  SampledField h;
  SampledField boundary_u;
  SampledField boundary_r;
};

struct MountainPassResult {
  bool small_sphere_positive = false;
  bool large_s_negative = false;
  double small_witness_norm = 0.0;  // a norm value with F > 0
  double negative_witness_s = 0.0;  // an s with F < 0 and F decreasing beyond
  std::vector<std::string> notes;
};

/// (a) F(s v) > 0 along a small-norm sweep (Sobolev norms 1e-3 .. 1e-1) and
/// (b) F(s v) < 0 for some s with F decreasing beyond. Requires r^- > p^+.
MountainPassResult mountain_pass_check(const EnergyFieldBundle& v,
                                       const ProblemConfig& config);

/// (|x|^{p-2}x - |y|^{p-2}y) . (x - y); nonnegative for p >= 1.
double monotonicity_gap(const Eigen::VectorXd& x, const Eigen::VectorXd& y, double p);

/// Rayleigh quotient ||z_eps||_{W^{1,p(x)}} / ||z_eps||_{L^{r(x)}(boundary)}
/// on a (rho, t) grid restriction over the model half-ball: an upper bound
/// for the localized trace constant infimum.
double rayleigh_trace_bound(const ProblemConfig& config, double eps,
                            int n_rho = 240, int n_t = 240);

}  // namespace vextrace
