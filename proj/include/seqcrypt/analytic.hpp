#pragma once

#include <stdexcept>

#include "seqcrypt/model.hpp"

namespace seqcrypt {

/// Upper bounds on the false-alarm and miss probabilities.
/// Requires 0 < alpha < 1, 0 < beta < 1, alpha + beta < 1.
struct ErrorTargets {
  double alpha;
  double beta;

  ErrorTargets(double alpha_value, double beta_value);
};

/// Stopping thresholds for both fusion centers. The legitimate center uses
/// log-likelihood thresholds (-a_l, b_l); the eavesdropper's statistic moves
/// on a +-1 lattice and stops at -m_a or +m_b steps.
struct DetectorThresholds {
  double a_l;  // > 0; lower stop at -a_l
  double b_l;  // > 0; upper stop at +b_l
  int m_a;     // >= 1
  int m_b;     // >= 1

  DetectorThresholds(double a_l_value, double b_l_value, int m_a_value, int m_b_value);
};

/// Expected sample sizes under the two hypotheses.
struct EssPair {
  double under_h0;
  double under_h1;
};

struct ErrorPair {
  double alpha_e;
  double beta_e;
};

/// Result of the integer threshold search: the componentwise-smallest pair
/// meeting the targets, plus the error probabilities it realizes.
struct EfcThresholds {
  int m_a;
  int m_b;
  double alpha_e;
  double beta_e;
};

/// Relative increase of the legitimate center's expected sample size caused
/// by the encryption, under each hypothesis. Zero exactly at psi = 0.
struct DelayInflation {
  double under_h0;
  double under_h1;
};

struct Grad2 {
  double d_psi0;
  double d_psi1;
};

/// Upper-exit probability and expected absorption time of a +-1 random walk
/// started at 0 between absorbing barriers -m_a and +m_b.
struct AbsorptionResult {
  double upper_exit_prob;
  double expected_steps;
};

struct SearchFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Bernoulli relative entropy H(x, y) = x ln(x/y) + (1-x) ln((1-x)/(1-y)).
/// Strictly positive iff x != y. Arguments must lie in (0, 1).
double kl_bernoulli(double x, double y);

/// Classical threshold choices ignoring overshoot:
///   b_l = ln((1-beta)/alpha), a_l = ln((1-alpha)/beta).
struct LfcThresholds {
  double a_l;
  double b_l;
};
LfcThresholds lfc_wald_thresholds(const ErrorTargets& targets);

/// Dominant term of the legitimate center's expected sample size, i.e. the
/// part that grows without bound as the error targets vanish:
///   under H0: H(alpha, 1-beta) / H(q_tilde, p_tilde),
///   under H1: H(beta, 1-alpha) / H(p_tilde, q_tilde).
EssPair lfc_dominant_ess(const EffectiveModel& eff, const ErrorTargets& targets);

/// Leading-order approximation keeping only the ln(1/target) terms:
///   under H0: ln(1/beta) / H(q_tilde, p_tilde),
///   under H1: ln(1/alpha) / H(p_tilde, q_tilde).
EssPair lfc_asymptotic_ess(const EffectiveModel& eff, const ErrorTargets& targets);

/// Exact error probabilities of the eavesdropper's mismatched test at
/// integer step thresholds (m_a, m_b), from the absorption analysis of the
/// +-1 walk:
///   alpha_e = (nu^m_a - 1) / (nu^(m_a+m_b) - 1)   (m_a/(m_a+m_b) at q_tilde = 1/2)
///   beta_e  = (mu^m_b - 1) / (mu^(m_a+m_b) - 1)   (m_b/(m_a+m_b) at p_tilde = 1/2)
/// Evaluated in log space so deep thresholds cannot overflow.
ErrorPair efc_exact_errors(const EffectiveModel& eff, int m_a, int m_b);

/// Exact expected sample sizes of the mismatched test at (m_a, m_b):
///   under H0: [alpha_e*(m_a+m_b) - m_a] / (2*q_tilde - 1),
///   under H1: [(1-beta_e)*(m_a+m_b) - m_a] / (2*p_tilde - 1),
/// and m_a*m_b on the respective 1/2 boundary.
EssPair efc_exact_ess(const EffectiveModel& eff, int m_a, int m_b);

/// Componentwise-smallest integer pair (m_a, m_b) with alpha_e <= alpha and
/// beta_e <= beta, found by alternating monotone search. Throws
/// SearchFailureError if the iteration cap (1e6) is hit (unreachable for
/// admissible models: both errors vanish as the thresholds grow).
EfcThresholds efc_thresholds_for_targets(const EffectiveModel& eff, const ErrorTargets& targets);

/// Dominant term of the eavesdropper's expected sample size expressed in the
/// realized error probabilities:
///   under H0: [(1-a) log_mu(1/b) - a log_nu(1/a)] / (1 - 2*q_tilde),
///   under H1: [(1-b) log_nu(1/a) - b log_mu(1/b)] / (2*p_tilde - 1).
EssPair efc_dominant_ess(const EffectiveModel& eff, double alpha_e, double beta_e);

/// Leading-order approximation at the targets:
///   under H0: log_mu(1/beta) / (1 - 2*q_tilde),
///   under H1: log_nu(1/alpha) / (2*p_tilde - 1).
EssPair efc_asymptotic_ess(const EffectiveModel& eff, const ErrorTargets& targets);

/// Relative delay inflation at the legitimate center:
///   under H0: H(q, p) / H(q_tilde, p_tilde) - 1,
///   under H1: H(p, q) / H(p_tilde, q_tilde) - 1.
/// Requires the (model, enc) pair to be admissible.
DelayInflation lfc_delay_inflation(const BitChannelModel& model, const EncryptionParams& enc);

/// Scale-free eavesdropper-vs-legitimate gap under H0,
///   [efc - lfc leading terms] / ln(1/beta) = 1/G - 1/H(q_tilde, p_tilde)
/// with G = (1 - 2*q_tilde) * ln(p_tilde/(1-p_tilde)). Nonnegative;
/// vanishes iff p_tilde + q_tilde = 1. Caller ensures q_tilde < 1/2 < p_tilde.
double gap_unit_h0(double p_tilde, double q_tilde);

/// H1 analog: 1/G1 - 1/H(p_tilde, q_tilde) with
/// G1 = (2*p_tilde - 1) * ln((1-q_tilde)/q_tilde).
double gap_unit_h1(double p_tilde, double q_tilde);

/// Prior-weighted asymptotic gap between the two centers' expected sample
/// sizes: pi0 * gap_unit_h0 * ln(1/beta) + pi1 * gap_unit_h1 * ln(1/alpha).
/// Nonnegative; zero iff psi0 = psi1.
double ess_gap_objective(const BitChannelModel& model, const EncryptionParams& enc,
                         const ErrorTargets& targets, const Priors& priors);

/// Closed-form gradient of gap_unit_h0 with respect to (psi0, psi1):
///   d/dpsi0 = (1-p)*Y1 + p*Y2,   d/dpsi1 = -[p*Y1 + (1-p)*Y2],
/// where Y1, Y2 collect the partials of 1/G - 1/H through p_tilde and
/// q_tilde. Requires the pair to be admissible.
Grad2 ess_gap_grad_h0(const BitChannelModel& model, const EncryptionParams& enc);

/// Solves the absorption recursion of the +-1 walk directly (tridiagonal
/// linear system over the interior states), independently of the closed
/// forms above; used as their cross-check oracle.
AbsorptionResult random_walk_absorption(double up_prob, int m_a, int m_b);

/// Thresholds for both centers at common targets: Wald thresholds for the
/// legitimate center, exact integer search for the eavesdropper.
DetectorThresholds derive_thresholds(const EffectiveModel& eff, const ErrorTargets& targets);

}  // namespace seqcrypt
