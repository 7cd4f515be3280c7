#include "seqcrypt/optimize.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace seqcrypt {

namespace {

constexpr double kBisectTol = 1e-10;
constexpr double kDiagonalBand = 1e-6;
constexpr double kFdStep = 1e-7;
constexpr double kTieTol = 1e-12;

// Admissibility limit of the axis segment: q_tilde reaches 1/2 at
// (1-2q)/(2(1-q)) on the psi0 axis, p_tilde reaches 1/2 at 1 - 1/(2p) on
// the psi1 axis.
double axis_limit(const BitChannelModel& model, Axis axis) {
  if (axis == Axis::psi0) return (1.0 - 2.0 * model.q) / (2.0 * (1.0 - model.q));
  return 1.0 - 1.0 / (2.0 * model.p);
}

EncryptionParams axis_point(Axis axis, double psi) {
  return axis == Axis::psi0 ? EncryptionParams(psi, 0.0) : EncryptionParams(0.0, psi);
}

double inflation_component(const DelayInflation& inflation, int i) {
  return i == 0 ? inflation.under_h0 : inflation.under_h1;
}

// Root of the (strictly increasing) axis restriction of one inflation
// component. kappa = 0 short-circuits to 0.
double axis_root(const BitChannelModel& model, Axis axis, int component, double kappa) {
  if (kappa == 0.0) return 0.0;
  const double hi = axis_limit(model, axis) * (1.0 - 1e-9);
  const double at_hi = inflation_component(lfc_delay_inflation(model, axis_point(axis, hi)),
                                           component);
  if (at_hi < kappa) {
    std::ostringstream os;
    os << "tolerance kappa" << component << " = " << kappa
       << " exceeds the attainable delay inflation " << at_hi << " on this axis";
    throw NoRootError(os.str(), at_hi);
  }
  double lo = 0.0;
  double up = hi;
  while (up - lo > kBisectTol) {
    const double mid = 0.5 * (lo + up);
    const double value =
        inflation_component(lfc_delay_inflation(model, axis_point(axis, mid)), component);
    if (value < kappa) {
      lo = mid;
    } else {
      up = mid;
    }
  }
  return 0.5 * (lo + up);
}

struct GapGradients {
  Grad2 h0;
  Grad2 h1;
};

double gap_h1_at(const BitChannelModel& model, double psi0, double psi1) {
  // Raw affine maps; probe points of the central difference may sit a hair
  // outside [0,1]^2 where the validated constructors would reject them.
  const double keep = 1.0 - psi0 - psi1;
  return gap_unit_h1(keep * model.p + psi0, keep * model.q + psi0);
}

GapGradients gap_gradients(const BitChannelModel& model, const EncryptionParams& enc) {
  GapGradients grads;
  grads.h0 = ess_gap_grad_h0(model, enc);
  // No closed form is carried for the H1 component; central differences.
  grads.h1.d_psi0 = (gap_h1_at(model, enc.psi0 + kFdStep, enc.psi1) -
                     gap_h1_at(model, enc.psi0 - kFdStep, enc.psi1)) /
                    (2.0 * kFdStep);
  grads.h1.d_psi1 = (gap_h1_at(model, enc.psi0, enc.psi1 + kFdStep) -
                     gap_h1_at(model, enc.psi0, enc.psi1 - kFdStep)) /
                    (2.0 * kFdStep);
  return grads;
}

bool signs_match_region(const Grad2& grad, bool upper_region) {
  // Above the diagonal the gap grows in psi1 and falls in psi0; below it
  // the pattern flips.
  if (upper_region) return grad.d_psi0 < 0.0 && grad.d_psi1 > 0.0;
  return grad.d_psi0 > 0.0 && grad.d_psi1 < 0.0;
}

}  // namespace

AxisCapResult axis_cap(const BitChannelModel& model, const ToleranceSpec& tol, Axis axis) {
  const double root0 = axis_root(model, axis, 0, tol.kappa0);
  const double root1 = axis_root(model, axis, 1, tol.kappa1);
  if (root0 <= root1) return {root0, BindingConstraint::lambda0};
  return {root1, BindingConstraint::lambda1};
}

AxisCaps both_axis_caps(const BitChannelModel& model, const ToleranceSpec& tol) {
  const AxisCapResult cap0 = axis_cap(model, tol, Axis::psi0);
  const AxisCapResult cap1 = axis_cap(model, tol, Axis::psi1);
  return {cap0.cap, cap1.cap, cap0.binding, cap1.binding};
}

ConditionReport check_conditions(const BitChannelModel& model, const AxisCaps& caps,
                                 int grid_resolution) {
  if (grid_resolution < 2) throw std::invalid_argument("grid_resolution must be at least 2");
  ConditionReport report;
  report.c1_margins[0] = axis_limit(model, Axis::psi0) - caps.psi0_cap;
  report.c1_margins[1] = axis_limit(model, Axis::psi1) - caps.psi1_cap;
  report.c1_holds = report.c1_margins[0] >= 0.0 && report.c1_margins[1] >= 0.0;

  for (int i = 0; i < grid_resolution; ++i) {
    const double psi0 = caps.psi0_cap * i / (grid_resolution - 1);
    for (int j = 0; j < grid_resolution; ++j) {
      const double psi1 = caps.psi1_cap * j / (grid_resolution - 1);
      if (std::abs(psi1 - psi0) < kDiagonalBand) continue;
      const EncryptionParams enc(psi0, psi1);
      if (!validate_admissible(model, enc).admissible) continue;
      const GapGradients grads = gap_gradients(model, enc);
      const bool upper_region = psi1 > psi0;
      if (!signs_match_region(grads.h0, upper_region))
        report.c2_violations.push_back({psi0, psi1, 0});
      if (!signs_match_region(grads.h1, upper_region))
        report.c2_violations.push_back({psi0, psi1, 1});
    }
  }
  report.c2_holds = report.c2_violations.empty();
  return report;
}

OptResult design_by_corner_selection(const BitChannelModel& model, const ToleranceSpec& tol,
                                     const ErrorTargets& targets, const Priors& priors) {
  const AxisCaps caps = both_axis_caps(model, tol);
  OptResult result;
  result.method = DesignMethod::corner_selection;
  result.conditions = check_conditions(model, caps, 200);

  const EncryptionParams corner0(caps.psi0_cap, 0.0);
  const EncryptionParams corner1(0.0, caps.psi1_cap);
  result.candidate_values[0] = ess_gap_objective(model, corner0, targets, priors);
  result.candidate_values[1] = ess_gap_objective(model, corner1, targets, priors);

  if (!result.conditions->c1_holds || !result.conditions->c2_holds) {
    result.objective_value = std::numeric_limits<double>::quiet_NaN();
    return result;  // no psi_star; caller may fall back to the grid oracle
  }
  if (result.candidate_values[0] > result.candidate_values[1] + kTieTol) {
    result.psi_star = corner0;
    result.objective_value = result.candidate_values[0];
  } else {
    result.psi_star = corner1;
    result.objective_value = result.candidate_values[1];
  }
  return result;
}

OptResult design_by_grid_search(const BitChannelModel& model, const ToleranceSpec& tol,
                                const ErrorTargets& targets, const Priors& priors,
                                int resolution) {
  if (resolution < 1) throw std::invalid_argument("resolution must be positive");
  OptResult result;
  result.method = DesignMethod::grid_search;
  result.candidate_values = {std::numeric_limits<double>::quiet_NaN(),
                             std::numeric_limits<double>::quiet_NaN()};

  bool found = false;
  double best_value = -std::numeric_limits<double>::infinity();
  EncryptionParams best(0.0, 0.0);
  for (int i = 0; i <= resolution; ++i) {
    const double psi0 = static_cast<double>(i) / resolution;
    for (int j = 0; j <= resolution; ++j) {
      const double psi1 = static_cast<double>(j) / resolution;
      const EncryptionParams enc(psi0, psi1);
      if (!validate_admissible(model, enc).admissible) continue;
      const DelayInflation inflation = lfc_delay_inflation(model, enc);
      if (inflation.under_h0 > tol.kappa0 || inflation.under_h1 > tol.kappa1) continue;
      const double value = ess_gap_objective(model, enc, targets, priors);
      if (value > best_value) {  // strict: ties keep the earlier point
        best_value = value;
        best = enc;
        found = true;
      }
    }
  }
  if (!found) throw NoRootError("no feasible grid point", 0.0);
  result.psi_star = best;
  result.objective_value = best_value;
  return result;
}

}  // namespace seqcrypt
