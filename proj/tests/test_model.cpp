#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "seqcrypt/model.hpp"

using namespace seqcrypt;

TEST_CASE("gaussian preset reproduces the normal CDF") {
  // Reference values: Phi(0.5) and Phi(1) to 17 digits.
  const BitChannelModel unit = gaussian_shift_preset(1.0, 1.0);
  CHECK(unit.p == doctest::Approx(0.69146246127401310).epsilon(1e-14));
  CHECK(unit.q == doctest::Approx(0.30853753872598690).epsilon(1e-14));

  const BitChannelModel wide = gaussian_shift_preset(2.0, 1.0);
  CHECK(wide.p == doctest::Approx(0.84134474606854295).epsilon(1e-14));

  CHECK(std::abs(unit.p + unit.q - 1.0) <= 1e-12);
  CHECK(std::abs(wide.p + wide.q - 1.0) <= 1e-12);
}

TEST_CASE("gaussian preset rejects bad arguments") {
  CHECK_THROWS_AS(gaussian_shift_preset(0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_shift_preset(-1.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_shift_preset(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gaussian_shift_preset(1.0, -2.0), std::invalid_argument);
}

TEST_CASE("bit channel invariants") {
  CHECK_NOTHROW(BitChannelModel(0.7, 0.3));
  // p = 1/2 sits exactly on the rejected boundary.
  CHECK_THROWS_AS(BitChannelModel(0.5, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(BitChannelModel(0.3, 0.7), std::invalid_argument);
  CHECK_THROWS_AS(BitChannelModel(0.7, 0.2), std::invalid_argument);  // p+q != 1
  CHECK_THROWS_AS(EncryptionParams(-0.1, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(EncryptionParams(0.0, 1.1), std::invalid_argument);
  CHECK_THROWS_AS(Priors(0.6, 0.6), std::invalid_argument);
  CHECK_THROWS_AS(ToleranceSpec(-0.1, 0.0), std::invalid_argument);
}

TEST_CASE("effective probabilities") {
  const BitChannelModel model(0.7, 0.3);

  const EffectiveModel identity = effective_probs(model, EncryptionParams(0.0, 0.0));
  CHECK(identity.p_tilde == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(identity.q_tilde == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(identity.eta == doctest::Approx(std::log(7.0 / 3.0)).epsilon(1e-15));

  const EffectiveModel symmetric = effective_probs(model, EncryptionParams(0.05, 0.05));
  CHECK(symmetric.p_tilde == doctest::Approx(0.68).epsilon(1e-14));
  CHECK(symmetric.q_tilde == doctest::Approx(0.32).epsilon(1e-14));

  const EffectiveModel skewed = effective_probs(model, EncryptionParams(0.0, 0.2));
  CHECK(skewed.p_tilde == doctest::Approx(0.56).epsilon(1e-14));
  CHECK(skewed.q_tilde == doctest::Approx(0.24).epsilon(1e-14));
  CHECK(skewed.mu == doctest::Approx(0.56 / 0.44).epsilon(1e-14));
  CHECK(skewed.nu == doctest::Approx(0.76 / 0.24).epsilon(1e-14));
}

TEST_CASE("admissibility report") {
  const BitChannelModel model(0.7, 0.3);
  CHECK(validate_admissible(model, EncryptionParams(0.0, 0.2)).admissible);
  CHECK(validate_admissible(model, EncryptionParams(0.0, 0.0)).admissible);

  const AdmissibilityReport bad = validate_admissible(model, EncryptionParams(0.6, 0.0));
  CHECK_FALSE(bad.admissible);
  REQUIRE(bad.violations.size() == 1);
  // q_tilde = 0.4*0.3 + 0.6 = 0.72 breaks the q_tilde < 1/2 constraint.
  CHECK(bad.violations[0].find("q_tilde") != std::string::npos);
}

TEST_CASE("encryption channel properties") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double p = 0.5 + 0.49 * unit(rng);
    const BitChannelModel model(p, 1.0 - p);
    const EncryptionParams enc(unit(rng), unit(rng));
    const EffectiveModel eff = effective_probs(model, enc);
    const double keep = 1.0 - enc.psi0 - enc.psi1;
    // Spread contracts by the keep factor and carries its sign.
    CHECK(eff.p_tilde - eff.q_tilde ==
          doctest::Approx(keep * (model.p - model.q)).epsilon(1e-12));

    const double psi = unit(rng);
    const EffectiveModel sym = effective_probs(model, EncryptionParams(psi, psi));
    CHECK(sym.p_tilde + sym.q_tilde == doctest::Approx(1.0).epsilon(1e-14));
  }
}
