#include "seqcrypt/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace seqcrypt {

namespace {

[[noreturn]] void fail(const std::string& what) { throw std::invalid_argument(what); }

void require_finite(double x, const char* name) {
  if (!std::isfinite(x)) fail(std::string(name) + " must be finite");
}

}  // namespace

BitChannelModel::BitChannelModel(double p_value, double q_value) : p(p_value), q(q_value) {
  require_finite(p, "p");
  require_finite(q, "q");
  if (!(q > 0.0 && q < 0.5)) fail("q must lie in (0, 0.5)");
  if (!(p > 0.5 && p < 1.0)) fail("p must lie in (0.5, 1)");
  if (std::abs(p + q - 1.0) > 1e-12) fail("p + q must equal 1 (symmetric quantizer)");
}

EncryptionParams::EncryptionParams(double psi0_value, double psi1_value)
    : psi0(psi0_value), psi1(psi1_value) {
  require_finite(psi0, "psi0");
  require_finite(psi1, "psi1");
  if (psi0 < 0.0 || psi0 > 1.0) fail("psi0 must lie in [0, 1]");
  if (psi1 < 0.0 || psi1 > 1.0) fail("psi1 must lie in [0, 1]");
}

Priors::Priors(double pi0_value, double pi1_value) : pi0(pi0_value), pi1(pi1_value) {
  require_finite(pi0, "pi0");
  require_finite(pi1, "pi1");
  if (pi0 < 0.0 || pi1 < 0.0) fail("priors must be nonnegative");
  if (std::abs(pi0 + pi1 - 1.0) > 1e-12) fail("priors must sum to 1");
}

ToleranceSpec::ToleranceSpec(double kappa0_value, double kappa1_value)
    : kappa0(kappa0_value), kappa1(kappa1_value) {
  require_finite(kappa0, "kappa0");
  require_finite(kappa1, "kappa1");
  if (kappa0 < 0.0 || kappa1 < 0.0) fail("tolerances must be nonnegative");
}

BitChannelModel gaussian_shift_preset(double theta, double sigma) {
  if (!(theta > 0.0) || !std::isfinite(theta)) fail("theta must be positive");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) fail("sigma must be positive");
  const double x = theta / (2.0 * sigma);
  const double p = 0.5 * std::erfc(-x / std::sqrt(2.0));  // standard normal CDF
  return BitChannelModel(p, 1.0 - p);
}

EffectiveModel effective_probs(const BitChannelModel& model, const EncryptionParams& enc) {
  const double keep = 1.0 - enc.psi0 - enc.psi1;
  EffectiveModel eff;
  eff.p_tilde = keep * model.p + enc.psi0;
  eff.q_tilde = keep * model.q + enc.psi0;
  eff.eta = std::log(model.p / (1.0 - model.p));
  eff.eta_tilde = std::log(eff.p_tilde / (1.0 - eff.p_tilde));
  eff.mu = eff.p_tilde / (1.0 - eff.p_tilde);
  eff.nu = (1.0 - eff.q_tilde) / eff.q_tilde;
  return eff;
}

AdmissibilityReport validate_admissible(const BitChannelModel& model,
                                        const EncryptionParams& enc) {
  const EffectiveModel eff = effective_probs(model, enc);
  AdmissibilityReport report;
  if (!(eff.p_tilde > 0.5 + kAdmissibilityMargin)) {
    std::ostringstream os;
    os << "p_tilde = " << eff.p_tilde << " must exceed 1/2";
    report.violations.push_back(os.str());
  }
  if (!(eff.q_tilde < 0.5 - kAdmissibilityMargin)) {
    std::ostringstream os;
    os << "q_tilde = " << eff.q_tilde << " must be below 1/2";
    report.violations.push_back(os.str());
  }
  report.admissible = report.violations.empty();
  return report;
}

bool is_admissible(const EffectiveModel& eff) {
  return eff.p_tilde > 0.5 + kAdmissibilityMargin && eff.q_tilde < 0.5 - kAdmissibilityMargin;
}

}  // namespace seqcrypt
