#include "seqcrypt/analytic.hpp"

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace seqcrypt {

namespace {

// Effective probabilities within this distance of 1/2 take the boundary
// branch of the absorption formulas; the general branch is 0/0 there.
constexpr double kHalfBranchTol = 1e-9;

constexpr std::uint64_t kThresholdSearchCap = 1000000;

[[noreturn]] void fail(const char* what) { throw std::invalid_argument(what); }

void require_open_unit(double x, const char* name) {
  if (!(x > 0.0 && x < 1.0)) fail(name);
}

void require_admissible(const EffectiveModel& eff) {
  if (!is_admissible(eff)) fail("effective model violates q_tilde < 1/2 < p_tilde");
}

void require_steps(int m_a, int m_b) {
  if (m_a < 1 || m_b < 1) fail("step thresholds must be positive integers");
}

// ln(e^x - 1) for x > 0, stable for both tiny and large x.
double log_em1(double x) { return x + std::log(-std::expm1(-x)); }

// (r^m_first - 1) / (r^(m_first+m_second) - 1) with r = e^log_ratio > 1,
// evaluated in log space so deep thresholds cannot overflow.
double barrier_exit_ratio(double log_ratio, int m_first, int m_second) {
  return std::exp(log_em1(m_first * log_ratio) - log_em1((m_first + m_second) * log_ratio));
}

}  // namespace

ErrorTargets::ErrorTargets(double alpha_value, double beta_value)
    : alpha(alpha_value), beta(beta_value) {
  if (!(alpha > 0.0 && alpha < 1.0)) fail("alpha target must lie in (0, 1)");
  if (!(beta > 0.0 && beta < 1.0)) fail("beta target must lie in (0, 1)");
  if (!(alpha + beta < 1.0)) fail("alpha + beta must be below 1");
}

DetectorThresholds::DetectorThresholds(double a_l_value, double b_l_value, int m_a_value,
                                       int m_b_value)
    : a_l(a_l_value), b_l(b_l_value), m_a(m_a_value), m_b(m_b_value) {
  if (!(a_l > 0.0) || !(b_l > 0.0)) fail("log thresholds must be positive");
  require_steps(m_a, m_b);
}

double kl_bernoulli(double x, double y) {
  require_open_unit(x, "kl_bernoulli: x must lie in (0, 1)");
  require_open_unit(y, "kl_bernoulli: y must lie in (0, 1)");
  if (x == y) return 0.0;
  return x * std::log(x / y) + (1.0 - x) * std::log((1.0 - x) / (1.0 - y));
}

LfcThresholds lfc_wald_thresholds(const ErrorTargets& targets) {
  return {std::log((1.0 - targets.alpha) / targets.beta),
          std::log((1.0 - targets.beta) / targets.alpha)};
}

EssPair lfc_dominant_ess(const EffectiveModel& eff, const ErrorTargets& targets) {
  require_admissible(eff);
  const double num_h0 = kl_bernoulli(targets.alpha, 1.0 - targets.beta);
  const double num_h1 = kl_bernoulli(targets.beta, 1.0 - targets.alpha);
  return {num_h0 / kl_bernoulli(eff.q_tilde, eff.p_tilde),
          num_h1 / kl_bernoulli(eff.p_tilde, eff.q_tilde)};
}

EssPair lfc_asymptotic_ess(const EffectiveModel& eff, const ErrorTargets& targets) {
  require_admissible(eff);
  return {-std::log(targets.beta) / kl_bernoulli(eff.q_tilde, eff.p_tilde),
          -std::log(targets.alpha) / kl_bernoulli(eff.p_tilde, eff.q_tilde)};
}

ErrorPair efc_exact_errors(const EffectiveModel& eff, int m_a, int m_b) {
  require_steps(m_a, m_b);
  ErrorPair errors;
  if (std::abs(eff.q_tilde - 0.5) < kHalfBranchTol) {
    errors.alpha_e = static_cast<double>(m_a) / (m_a + m_b);
  } else {
    errors.alpha_e = barrier_exit_ratio(std::log(eff.nu), m_a, m_b);
  }
  if (std::abs(eff.p_tilde - 0.5) < kHalfBranchTol) {
    errors.beta_e = static_cast<double>(m_b) / (m_a + m_b);
  } else {
    errors.beta_e = barrier_exit_ratio(std::log(eff.mu), m_b, m_a);
  }
  return errors;
}

EssPair efc_exact_ess(const EffectiveModel& eff, int m_a, int m_b) {
  require_steps(m_a, m_b);
  const ErrorPair errors = efc_exact_errors(eff, m_a, m_b);
  const double span = static_cast<double>(m_a) + m_b;
  EssPair ess;
  if (std::abs(eff.q_tilde - 0.5) < kHalfBranchTol) {
    ess.under_h0 = static_cast<double>(m_a) * m_b;
  } else {
    // Optional-stopping identity: mean exit position over per-step drift.
    ess.under_h0 = (errors.alpha_e * span - m_a) / (2.0 * eff.q_tilde - 1.0);
  }
  if (std::abs(eff.p_tilde - 0.5) < kHalfBranchTol) {
    ess.under_h1 = static_cast<double>(m_a) * m_b;
  } else {
    ess.under_h1 = ((1.0 - errors.beta_e) * span - m_a) / (2.0 * eff.p_tilde - 1.0);
  }
  return ess;
}

EfcThresholds efc_thresholds_for_targets(const EffectiveModel& eff, const ErrorTargets& targets) {
  require_admissible(eff);
  int m_a = 1;
  int m_b = 1;
  std::uint64_t iterations = 0;
  // Alternating monotone search: raising m_b lowers alpha_e (given m_a) and
  // raising m_a lowers beta_e (given m_b); starting from (1, 1) the least
  // fixed point is the componentwise-smallest feasible pair.
  for (;;) {
    ErrorPair errors = efc_exact_errors(eff, m_a, m_b);
    bool changed = false;
    while (errors.alpha_e > targets.alpha) {
      ++m_b;
      changed = true;
      if (++iterations > kThresholdSearchCap)
        throw SearchFailureError("efc threshold search exceeded iteration cap");
      errors = efc_exact_errors(eff, m_a, m_b);
    }
    while (errors.beta_e > targets.beta) {
      ++m_a;
      changed = true;
      if (++iterations > kThresholdSearchCap)
        throw SearchFailureError("efc threshold search exceeded iteration cap");
      errors = efc_exact_errors(eff, m_a, m_b);
    }
    if (!changed) return {m_a, m_b, errors.alpha_e, errors.beta_e};
    if (++iterations > kThresholdSearchCap)
      throw SearchFailureError("efc threshold search exceeded iteration cap");
  }
}

EssPair efc_dominant_ess(const EffectiveModel& eff, double alpha_e, double beta_e) {
  require_admissible(eff);
  require_open_unit(alpha_e, "efc_dominant_ess: alpha_e must lie in (0, 1)");
  require_open_unit(beta_e, "efc_dominant_ess: beta_e must lie in (0, 1)");
  const double log_mu = std::log(eff.mu);
  const double log_nu = std::log(eff.nu);
  const double steps_a = -std::log(beta_e) / log_mu;   // log_mu(1/beta_e)
  const double steps_b = -std::log(alpha_e) / log_nu;  // log_nu(1/alpha_e)
  return {((1.0 - alpha_e) * steps_a - alpha_e * steps_b) / (1.0 - 2.0 * eff.q_tilde),
          ((1.0 - beta_e) * steps_b - beta_e * steps_a) / (2.0 * eff.p_tilde - 1.0)};
}

EssPair efc_asymptotic_ess(const EffectiveModel& eff, const ErrorTargets& targets) {
  require_admissible(eff);
  return {-std::log(targets.beta) / std::log(eff.mu) / (1.0 - 2.0 * eff.q_tilde),
          -std::log(targets.alpha) / std::log(eff.nu) / (2.0 * eff.p_tilde - 1.0)};
}

DelayInflation lfc_delay_inflation(const BitChannelModel& model, const EncryptionParams& enc) {
  const EffectiveModel eff = effective_probs(model, enc);
  require_admissible(eff);
  return {kl_bernoulli(model.q, model.p) / kl_bernoulli(eff.q_tilde, eff.p_tilde) - 1.0,
          kl_bernoulli(model.p, model.q) / kl_bernoulli(eff.p_tilde, eff.q_tilde) - 1.0};
}

double gap_unit_h0(double p_tilde, double q_tilde) {
  const double g = (1.0 - 2.0 * q_tilde) * std::log(p_tilde / (1.0 - p_tilde));
  return 1.0 / g - 1.0 / kl_bernoulli(q_tilde, p_tilde);
}

double gap_unit_h1(double p_tilde, double q_tilde) {
  const double g = (2.0 * p_tilde - 1.0) * std::log((1.0 - q_tilde) / q_tilde);
  return 1.0 / g - 1.0 / kl_bernoulli(p_tilde, q_tilde);
}

double ess_gap_objective(const BitChannelModel& model, const EncryptionParams& enc,
                         const ErrorTargets& targets, const Priors& priors) {
  const EffectiveModel eff = effective_probs(model, enc);
  require_admissible(eff);
  return priors.pi0 * gap_unit_h0(eff.p_tilde, eff.q_tilde) * (-std::log(targets.beta)) +
         priors.pi1 * gap_unit_h1(eff.p_tilde, eff.q_tilde) * (-std::log(targets.alpha));
}

Grad2 ess_gap_grad_h0(const BitChannelModel& model, const EncryptionParams& enc) {
  const EffectiveModel eff = effective_probs(model, enc);
  require_admissible(eff);
  const double pt = eff.p_tilde;
  const double qt = eff.q_tilde;
  const double h = kl_bernoulli(qt, pt);
  const double g = (1.0 - 2.0 * qt) * std::log(pt / (1.0 - pt));
  const double inv_h2 = 1.0 / (h * h);
  const double inv_g2 = 1.0 / (g * g);
  const double y1 =
      inv_h2 * (pt - qt) / (pt * (1.0 - pt)) - inv_g2 * (1.0 - 2.0 * qt) / (pt * (1.0 - pt));
  const double y2 = 2.0 * inv_g2 * std::log(pt / (1.0 - pt)) -
                    inv_h2 * std::log(pt * (1.0 - qt) / (qt * (1.0 - pt)));
  const double p = model.p;
  return {(1.0 - p) * y1 + p * y2, -(p * y1 + (1.0 - p) * y2)};
}

AbsorptionResult random_walk_absorption(double up_prob, int m_a, int m_b) {
  require_open_unit(up_prob, "random_walk_absorption: up_prob must lie in (0, 1)");
  require_steps(m_a, m_b);
  // Interior states m = -m_a+1 .. m_b-1; unknowns x(m) satisfy
  //   x(m) - r*x(m+1) - (1-r)*x(m-1) = rhs(m)
  // with absorbing values folded into the right-hand side. Both the
  // upper-exit probability and the expected absorption time share the
  // same tridiagonal matrix, so one factorization solves both.
  const int n = m_a + m_b - 1;
  const double r = up_prob;
  std::vector<double> diag(n, 1.0);
  std::vector<double> rhs_prob(n, 0.0);
  std::vector<double> rhs_time(n, 1.0);
  rhs_prob[n - 1] = r;  // neighbor above the top interior state is absorbed at 1

  // Thomas elimination; sub-diagonal is -(1-r), super-diagonal is -r.
  for (int i = 1; i < n; ++i) {
    const double w = -(1.0 - r) / diag[i - 1];
    diag[i] -= w * (-r);
    rhs_prob[i] -= w * rhs_prob[i - 1];
    rhs_time[i] -= w * rhs_time[i - 1];
  }
  std::vector<double> prob(n);
  std::vector<double> time(n);
  prob[n - 1] = rhs_prob[n - 1] / diag[n - 1];
  time[n - 1] = rhs_time[n - 1] / diag[n - 1];
  for (int i = n - 2; i >= 0; --i) {
    prob[i] = (rhs_prob[i] + r * prob[i + 1]) / diag[i];
    time[i] = (rhs_time[i] + r * time[i + 1]) / diag[i];
  }
  const int start = m_a - 1;  // index of state 0
  return {prob[start], time[start]};
}

DetectorThresholds derive_thresholds(const EffectiveModel& eff, const ErrorTargets& targets) {
  const LfcThresholds lfc = lfc_wald_thresholds(targets);
  const EfcThresholds efc = efc_thresholds_for_targets(eff, targets);
  return DetectorThresholds(lfc.a_l, lfc.b_l, efc.m_a, efc.m_b);
}

}  // namespace seqcrypt
