#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <vector>

#include "seqcrypt/analytic.hpp"
#include "seqcrypt/model.hpp"

namespace seqcrypt {

enum class Axis { psi0, psi1 };

enum class BindingConstraint { lambda0, lambda1 };

struct AxisCapResult {
  double cap = 0.0;
  BindingConstraint binding = BindingConstraint::lambda0;
};

/// Largest admissible flip probabilities along each axis compatible with
/// both delay-inflation tolerances (the other component held at zero).
struct AxisCaps {
  double psi0_cap = 0.0;
  double psi1_cap = 0.0;
  BindingConstraint psi0_binding = BindingConstraint::lambda0;
  BindingConstraint psi1_binding = BindingConstraint::lambda0;
};

struct C2Violation {
  double psi0;
  double psi1;
  int hypothesis;  // 0 or 1: which gap component has the offending sign
};

struct ConditionReport {
  bool c1_holds = false;
  bool c2_holds = false;
  // Slack of each cap against its admissibility intersection constant;
  // negative entries are C1 violations.
  std::array<double, 2> c1_margins{0.0, 0.0};
  std::vector<C2Violation> c2_violations;
};

enum class DesignMethod { corner_selection, grid_search };

struct OptResult {
  std::optional<EncryptionParams> psi_star;  // absent when conditions fail
  double objective_value = 0.0;
  // Objective at the two axis corners [psi0_cap, 0] and [0, psi1_cap];
  // NaN for grid search.
  std::array<double, 2> candidate_values{0.0, 0.0};
  std::optional<ConditionReport> conditions;
  DesignMethod method = DesignMethod::corner_selection;
};

struct NoRootError : std::runtime_error {
  NoRootError(const std::string& what, double attained)
      : std::runtime_error(what), attained_supremum(attained) {}
  double attained_supremum;
};

/// Bisects the strictly increasing axis restriction of each delay-inflation
/// component to |psi| tolerance 1e-10 and returns the smaller root together
/// with the constraint that produced it. Throws NoRootError (reporting the
/// attained supremum) if a tolerance exceeds the range attainable on the
/// admissible axis segment.
AxisCapResult axis_cap(const BitChannelModel& model, const ToleranceSpec& tol, Axis axis);

AxisCaps both_axis_caps(const BitChannelModel& model, const ToleranceSpec& tol);

/// C1: caps against the admissibility intersection constants
/// (1-2q)/(2(1-q)) and 1 - 1/(2p). C2: gradient sign pattern of both gap
/// components on a grid_resolution^2 grid of the cap box, closed form for
/// the H0 component, central differences (step 1e-7) for the H1 component.
/// Points within 1e-6 of the diagonal are skipped: the gap gradient
/// legitimately vanishes there.
ConditionReport check_conditions(const BitChannelModel& model, const AxisCaps& caps,
                                 int grid_resolution);

/// The small-tolerance design procedure: computes the axis caps, verifies
/// the corner-optimality conditions, and if they hold picks the better of
/// the two axis corners (ties go to [0, psi1_cap]). When the conditions
/// fail, returns a result without psi_star so callers can fall back to
/// design_by_grid_search.
OptResult design_by_corner_selection(const BitChannelModel& model, const ToleranceSpec& tol,
                                     const ErrorTargets& targets, const Priors& priors);

/// Exhaustive oracle: evaluates the objective at every grid point of [0,1]^2
/// (step 1/resolution) that is admissible and within both tolerances; ties
/// break toward smaller psi0, then smaller psi1.
OptResult design_by_grid_search(const BitChannelModel& model, const ToleranceSpec& tol,
                                const ErrorTargets& targets, const Priors& priors,
                                int resolution);

}  // namespace seqcrypt
