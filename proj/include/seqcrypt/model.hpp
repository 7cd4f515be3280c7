#pragma once

#include <string>
#include <vector>

namespace seqcrypt {

// Margin for the strict concealment inequalities p_tilde > 1/2 and
// q_tilde < 1/2. Values inside the margin are rejected: the asymptotic
// formulas divide by (1 - 2*q_tilde) and (2*p_tilde - 1).
inline constexpr double kAdmissibilityMargin = 1e-12;

/// Bernoulli parameters of the one-bit quantizer output:
/// p = P{bit=1 | H1}, q = P{bit=1 | H0}, with 0 < q < 1/2 < p < 1 and
/// p + q = 1 (symmetric quantizer).
struct BitChannelModel {
  double p;
  double q;

  BitChannelModel(double p_value, double q_value);
};

/// Flip probabilities of the stochastic encryption channel: a 0-bit is
/// flipped to 1 with probability psi0, a 1-bit to 0 with probability psi1.
struct EncryptionParams {
  double psi0;
  double psi1;

  EncryptionParams(double psi0_value, double psi1_value);
};

/// Post-encryption bit probabilities and the constants derived from them.
/// Produced by effective_probs(); fields are not re-validated.
struct EffectiveModel {
  double p_tilde;    // P{encrypted bit = 1 | H1}
  double q_tilde;    // P{encrypted bit = 1 | H0}
  double eta;        // ln(p/(1-p)); step size of the eavesdropper statistic
  double eta_tilde;  // ln(p_tilde/(1-p_tilde))
  double mu;         // p_tilde/(1-p_tilde); > 1 when admissible
  double nu;         // (1-q_tilde)/q_tilde; > 1 when admissible
};

/// Prior probabilities of the two hypotheses; pi0 + pi1 = 1.
struct Priors {
  double pi0;
  double pi1;

  Priors(double pi0_value, double pi1_value);
};

/// Acceptable relative increase of the legitimate center's expected sample
/// size under each hypothesis, used as the design constraint bounds.
struct ToleranceSpec {
  double kappa0;
  double kappa1;

  ToleranceSpec(double kappa0_value, double kappa1_value);
};

struct AdmissibilityReport {
  bool admissible = false;
  std::vector<std::string> violations;  // one entry per violated inequality
};

/// Bit probabilities for the Gaussian mean-shift setup with a symmetric
/// threshold quantizer: p = Phi(theta/(2*sigma)), q = 1 - p.
/// Throws std::invalid_argument for non-positive theta or sigma.
BitChannelModel gaussian_shift_preset(double theta, double sigma);

/// Applies the encryption channel to the bit probabilities:
///   p_tilde = (1 - psi0 - psi1) * p + psi0,
///   q_tilde = (1 - psi0 - psi1) * q + psi0.
EffectiveModel effective_probs(const BitChannelModel& model, const EncryptionParams& enc);

/// Checks the concealment constraints p_tilde > 1/2 and q_tilde < 1/2
/// (strict, with kAdmissibilityMargin); names every violated inequality.
AdmissibilityReport validate_admissible(const BitChannelModel& model,
                                        const EncryptionParams& enc);

bool is_admissible(const EffectiveModel& eff);

}  // namespace seqcrypt
