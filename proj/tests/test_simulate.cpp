#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "seqcrypt/analytic.hpp"
#include "seqcrypt/model.hpp"
#include "seqcrypt/simulate.hpp"

using namespace seqcrypt;

namespace {

Scenario efc_drift_scenario() {
  // p_tilde = 0.6, q_tilde = 0.4 through a symmetric channel on p = 0.7.
  Scenario scenario(BitChannelModel(0.7, 0.3), EncryptionParams(0.25, 0.25),
                    ErrorTargets(0.05, 0.05), Priors(0.5, 0.5));
  scenario.seed = 42;
  return scenario;
}

bool identical(const MeanEstimate& a, const MeanEstimate& b) {
  const bool value_same = a.value == b.value || (std::isnan(a.value) && std::isnan(b.value));
  const bool err_same =
      a.std_error == b.std_error || (std::isnan(a.std_error) && std::isnan(b.std_error));
  return value_same && err_same;
}

bool identical(const PerfEstimate& a, const PerfEstimate& b) {
  return identical(a.ess_h0, b.ess_h0) && identical(a.ess_h1, b.ess_h1) &&
         identical(a.fa_rate, b.fa_rate) && identical(a.miss_rate, b.miss_rate) &&
         a.truncated_count == b.truncated_count;
}

}  // namespace

TEST_CASE("single path exits on the first step when thresholds allow no survivor") {
  PathRng rng = make_substream(5, 0);
  for (int i = 0; i < 50; ++i) {
    const PathResult result =
        run_sprt_path(TwoValuedLlr{1.0, -1.0, 0.5}, SprtBand{-0.5, 0.5}, rng, 100);
    CHECK(result.steps == 1);
    CHECK(result.outcome != PathOutcome::truncated);
  }
}

TEST_CASE("lattice statistic exiting exactly on a threshold is detected") {
  // +-eta increments against thresholds at integer multiples of eta: every
  // exit lands exactly on a threshold value.
  const double eta = std::log(0.7 / 0.3);
  PathRng rng = make_substream(17, 3);
  for (int i = 0; i < 2000; ++i) {
    const PathResult result =
        run_sprt_path(TwoValuedLlr{eta, -eta, 0.4}, SprtBand{-3.0 * eta, 3.0 * eta}, rng, 100000);
    CHECK(result.outcome != PathOutcome::truncated);
    CHECK(result.steps >= 3);
    CHECK((result.steps - 3) % 2 == 0);  // parity of a +-1 walk hitting +-3
  }
}

TEST_CASE("empirical upper-exit frequency matches the absorption probability") {
  const double eta = std::log(0.7 / 0.3);
  PathRng rng = make_substream(2024, 0);
  const int paths = 20000;
  int upper = 0;
  for (int i = 0; i < paths; ++i) {
    const PathResult result = run_sprt_path(TwoValuedLlr{eta, -eta, 0.4},
                                            SprtBand{-3.0 * eta, 3.0 * eta}, rng, 100000);
    if (result.outcome == PathOutcome::accept_h1) ++upper;
  }
  const double expected = 8.0 / 35.0;
  const double freq = static_cast<double>(upper) / paths;
  const double sigma = std::sqrt(expected * (1.0 - expected) / paths);
  CHECK(std::abs(freq - expected) < 3.0 * sigma);
}

TEST_CASE("run_sprt_path validates its inputs") {
  PathRng rng = make_substream(0, 0);
  CHECK_THROWS_AS(run_sprt_path(TwoValuedLlr{1.0, -1.0, 0.5}, SprtBand{0.5, 1.0}, rng, 10),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_sprt_path(TwoValuedLlr{1.0, -1.0, 1.5}, SprtBand{-1.0, 1.0}, rng, 10),
                  std::invalid_argument);
}

TEST_CASE("monte carlo matches the exact eavesdropper formulas") {
  Scenario scenario = efc_drift_scenario();
  scenario.hypothesis = Hypothesis::h0;
  scenario.replications = 20000;
  const DetectorThresholds thresholds(2.0, 2.0, 3, 3);  // lfc thresholds incidental here
  const PairedPerfEstimate perf = monte_carlo_with_thresholds(scenario, thresholds);

  CHECK(std::abs(perf.efc.ess_h0.value - 57.0 / 7.0) < 3.0 * perf.efc.ess_h0.std_error);
  const double expected_fa = 8.0 / 35.0;
  const double sigma = std::sqrt(expected_fa * (1.0 - expected_fa) / 20000.0);
  CHECK(std::abs(perf.efc.fa_rate.value - expected_fa) < 3.0 * sigma);
  CHECK(std::isnan(perf.efc.ess_h1.value));
  CHECK(std::isnan(perf.efc.miss_rate.value));
}

TEST_CASE("identical scenario and seed reproduce identical estimates") {
  Scenario scenario = efc_drift_scenario();
  scenario.hypothesis = Hypothesis::prior_mixed;
  scenario.replications = 5000;
  const PairedPerfEstimate a = monte_carlo(scenario);
  const PairedPerfEstimate b = monte_carlo(scenario);
  CHECK(identical(a.lfc, b.lfc));
  CHECK(identical(a.efc, b.efc));

  scenario.seed += 1;
  const PairedPerfEstimate c = monte_carlo(scenario);
  CHECK_FALSE(identical(a.efc, c.efc));
}

TEST_CASE("aggregation is independent of replication order") {
  Scenario scenario = efc_drift_scenario();
  const DetectorThresholds thresholds = derive_thresholds(
      effective_probs(scenario.model, scenario.enc), scenario.targets);
  const int reps = 2000;

  std::vector<std::uint64_t> order(reps);
  std::iota(order.begin(), order.end(), 0);
  const auto total_steps = [&](const std::vector<std::uint64_t>& sequence) {
    std::uint64_t lfc_sum = 0;
    std::uint64_t efc_sum = 0;
    for (std::uint64_t r : sequence) {
      PathRng rng = make_substream(scenario.seed, r);
      const PairedPathResult paths =
          run_paired_trial(scenario.model, scenario.enc, thresholds, false, rng, 1000000);
      lfc_sum += paths.lfc.steps;
      efc_sum += paths.efc.steps;
    }
    return std::pair{lfc_sum, efc_sum};
  };
  const auto forward = total_steps(order);
  std::reverse(order.begin(), order.end());
  const auto backward = total_steps(order);
  CHECK(forward == backward);

  scenario.hypothesis = Hypothesis::h0;
  scenario.replications = reps;
  const PairedPerfEstimate perf = monte_carlo_with_thresholds(scenario, thresholds);
  CHECK(perf.lfc.ess_h0.value == static_cast<double>(forward.first) / reps);
}

TEST_CASE("paired trial under matched lattice thresholds stops both tests together") {
  const BitChannelModel model(0.7, 0.3);
  const EncryptionParams enc(0.05, 0.05);
  const EffectiveModel eff = effective_probs(model, enc);
  const EfcThresholds efc = efc_thresholds_for_targets(eff, ErrorTargets(1e-3, 1e-3));
  // Matching log thresholds put both statistics on the same step lattice.
  const DetectorThresholds thresholds(efc.m_a * eff.eta_tilde, efc.m_b * eff.eta_tilde,
                                      efc.m_a, efc.m_b);
  for (int r = 0; r < 2000; ++r) {
    PathRng rng = make_substream(7, r);
    const PairedPathResult paths = run_paired_trial(model, enc, thresholds, r % 2 == 1, rng,
                                                    1000000);
    CHECK(paths.lfc.steps == paths.efc.steps);
    CHECK(paths.lfc.outcome == paths.efc.outcome);
  }
}

TEST_CASE("asymmetric encryption orders the means, not the paths") {
  const BitChannelModel model = gaussian_shift_preset(1.0, 1.0);
  const EncryptionParams enc(0.0, 0.1);
  const DetectorThresholds thresholds =
      derive_thresholds(effective_probs(model, enc), ErrorTargets(1e-4, 1e-4));
  bool saw_efc_faster = false;
  std::uint64_t lfc_total = 0;
  std::uint64_t efc_total = 0;
  const int reps = 4000;
  for (int r = 0; r < reps; ++r) {
    PathRng rng = make_substream(11, r);
    const PairedPathResult paths = run_paired_trial(model, enc, thresholds, false, rng, 1000000);
    lfc_total += paths.lfc.steps;
    efc_total += paths.efc.steps;
    if (paths.efc.steps < paths.lfc.steps) saw_efc_faster = true;
  }
  CHECK(saw_efc_faster);         // pathwise ordering does not hold...
  CHECK(efc_total > lfc_total);  // ...the means are ordered
}

TEST_CASE("truncation is reported, never silently dropped") {
  Scenario scenario = efc_drift_scenario();
  scenario.hypothesis = Hypothesis::h0;
  scenario.replications = 100;
  scenario.max_steps = 1;  // +-1 walk cannot reach +-3 in one step
  const DetectorThresholds unreachable(50.0, 50.0, 3, 3);
  CHECK_THROWS_AS(monte_carlo_with_thresholds(scenario, unreachable), EstimationFailureError);

  // A reachable configuration with an aggressive guard truncates some paths
  // and excludes them from the means.
  scenario.max_steps = 4;
  const DetectorThresholds reachable(0.2, 0.2, 3, 3);
  const PairedPerfEstimate perf = monte_carlo_with_thresholds(scenario, reachable);
  CHECK(perf.efc.truncated_count > 0);
  CHECK(perf.efc.truncated_count < 100);
  CHECK(perf.efc.ess_h0.value <= 4.0);
}
