#include "seqcrypt/simulate.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace seqcrypt {

namespace {

constexpr double kExitSlack = 1e-12;

double uniform01(PathRng& rng) {
  // 53 random bits; value in [0, 1).
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Exact (integer) accumulator for one detector under one hypothesis.
// Integer sums make the aggregate independent of summation order.
struct StatAccumulator {
  std::uint64_t n = 0;
  std::uint64_t sum_steps = 0;
  unsigned __int128 sum_steps_sq = 0;
  std::uint64_t wrong_decisions = 0;

  void add(std::uint64_t steps, bool wrong) {
    ++n;
    sum_steps += steps;
    sum_steps_sq += static_cast<unsigned __int128>(steps) * steps;
    if (wrong) ++wrong_decisions;
  }

  MeanEstimate mean_steps() const {
    if (n == 0) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      return {nan, nan};
    }
    const double count = static_cast<double>(n);
    const double mean = static_cast<double>(sum_steps) / count;
    if (n == 1) return {mean, 0.0};
    const double sq = static_cast<double>(sum_steps_sq);
    const double var = (sq - mean * static_cast<double>(sum_steps)) / (count - 1.0);
    return {mean, std::sqrt(std::max(var, 0.0) / count)};
  }

  MeanEstimate error_rate() const {
    if (n == 0) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      return {nan, nan};
    }
    const double count = static_cast<double>(n);
    const double rate = static_cast<double>(wrong_decisions) / count;
    return {rate, std::sqrt(rate * (1.0 - rate) / count)};
  }
};

struct DetectorAccumulator {
  StatAccumulator h0;
  StatAccumulator h1;
  std::uint64_t truncated = 0;

  void add(const PathResult& result, bool under_h1) {
    if (result.outcome == PathOutcome::truncated) {
      ++truncated;
      return;
    }
    const bool decided_h1 = result.outcome == PathOutcome::accept_h1;
    if (under_h1) {
      h1.add(result.steps, !decided_h1);  // wrong under H1 = miss
    } else {
      h0.add(result.steps, decided_h1);  // wrong under H0 = false alarm
    }
  }

  PerfEstimate finish(const char* which) const {
    if (h0.n == 0 && h1.n == 0)
      throw EstimationFailureError(std::string("every replication truncated for the ") + which);
    PerfEstimate estimate;
    estimate.ess_h0 = h0.mean_steps();
    estimate.ess_h1 = h1.mean_steps();
    estimate.fa_rate = h0.error_rate();
    estimate.miss_rate = h1.error_rate();
    estimate.truncated_count = truncated;
    return estimate;
  }
};

}  // namespace

Scenario::Scenario(BitChannelModel model_value, EncryptionParams enc_value,
                   ErrorTargets targets_value, Priors priors_value)
    : model(model_value), enc(enc_value), targets(targets_value), priors(priors_value) {}

PathRng make_substream(std::uint64_t seed, std::uint64_t replication) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(replication),
                    static_cast<std::uint32_t>(replication >> 32)};
  return PathRng(seq);
}

PathResult run_sprt_path(const TwoValuedLlr& llr, const SprtBand& band, PathRng& rng,
                         std::uint64_t max_steps) {
  if (!(band.lower < 0.0 && band.upper > 0.0))
    throw std::invalid_argument("continuation band must contain 0");
  if (!(llr.prob_one > 0.0 && llr.prob_one < 1.0))
    throw std::invalid_argument("prob_one must lie in (0, 1)");
  if (max_steps < 1) throw std::invalid_argument("max_steps must be positive");

  const double upper = band.upper * (1.0 - kExitSlack);
  const double lower = band.lower * (1.0 - kExitSlack);
  std::uint64_t ones = 0;
  for (std::uint64_t t = 1; t <= max_steps; ++t) {
    if (uniform01(rng) < llr.prob_one) ++ones;
    // Recomputing from counts keeps the statistic's rounding error O(ulp)
    // instead of growing with the path length.
    const double zeros_part = static_cast<double>(t - ones) * llr.value_if_zero;
    const double statistic = std::fma(static_cast<double>(ones), llr.value_if_one, zeros_part);
    if (statistic >= upper) return {PathOutcome::accept_h1, t};
    if (statistic <= lower) return {PathOutcome::accept_h0, t};
  }
  return {PathOutcome::truncated, max_steps};
}

PairedPathResult run_paired_trial(const BitChannelModel& model, const EncryptionParams& enc,
                                  const DetectorThresholds& thresholds, bool under_h1,
                                  PathRng& rng, std::uint64_t max_steps) {
  if (max_steps < 1) throw std::invalid_argument("max_steps must be positive");
  const EffectiveModel eff = effective_probs(model, enc);
  const double raw_one_prob = under_h1 ? model.p : model.q;
  const double llr_one = std::log(eff.p_tilde / eff.q_tilde);
  const double llr_zero = std::log((1.0 - eff.p_tilde) / (1.0 - eff.q_tilde));
  const double upper = thresholds.b_l * (1.0 - kExitSlack);
  const double lower = -thresholds.a_l * (1.0 - kExitSlack);

  PairedPathResult result{{PathOutcome::truncated, max_steps},
                          {PathOutcome::truncated, max_steps}};
  bool lfc_running = true;
  bool efc_running = true;
  std::uint64_t ones = 0;
  std::int64_t walk = 0;
  for (std::uint64_t t = 1; t <= max_steps && (lfc_running || efc_running); ++t) {
    // Each step consumes exactly two uniforms: raw bit, then flip draw.
    const bool raw_bit = uniform01(rng) < raw_one_prob;
    const double flip_prob = raw_bit ? enc.psi1 : enc.psi0;
    const bool flipped = uniform01(rng) < flip_prob;
    const bool bit = raw_bit != flipped;

    if (lfc_running) {
      if (bit) ++ones;
      const double zeros_part = static_cast<double>(t - ones) * llr_zero;
      const double statistic = std::fma(static_cast<double>(ones), llr_one, zeros_part);
      if (statistic >= upper) {
        result.lfc = {PathOutcome::accept_h1, t};
        lfc_running = false;
      } else if (statistic <= lower) {
        result.lfc = {PathOutcome::accept_h0, t};
        lfc_running = false;
      }
    }
    if (efc_running) {
      walk += bit ? 1 : -1;
      if (walk >= thresholds.m_b) {
        result.efc = {PathOutcome::accept_h1, t};
        efc_running = false;
      } else if (walk <= -static_cast<std::int64_t>(thresholds.m_a)) {
        result.efc = {PathOutcome::accept_h0, t};
        efc_running = false;
      }
    }
  }
  return result;
}

PairedPerfEstimate monte_carlo_with_thresholds(const Scenario& scenario,
                                               const DetectorThresholds& thresholds) {
  if (scenario.replications < 1) throw std::invalid_argument("replications must be positive");
  if (scenario.max_steps < 1) throw std::invalid_argument("max_steps must be positive");

  DetectorAccumulator lfc;
  DetectorAccumulator efc;
  for (std::uint64_t r = 0; r < scenario.replications; ++r) {
    PathRng rng = make_substream(scenario.seed, r);
    bool under_h1 = false;
    switch (scenario.hypothesis) {
      case Hypothesis::h0:
        under_h1 = false;
        break;
      case Hypothesis::h1:
        under_h1 = true;
        break;
      case Hypothesis::prior_mixed:
        under_h1 = uniform01(rng) < scenario.priors.pi1;
        break;
    }
    const PairedPathResult paths =
        run_paired_trial(scenario.model, scenario.enc, thresholds, under_h1, rng,
                         scenario.max_steps);
    lfc.add(paths.lfc, under_h1);
    efc.add(paths.efc, under_h1);
  }
  return {lfc.finish("legitimate center"), efc.finish("eavesdropping center"),
          scenario.replications};
}

PairedPerfEstimate monte_carlo(const Scenario& scenario) {
  const EffectiveModel eff = effective_probs(scenario.model, scenario.enc);
  return monte_carlo_with_thresholds(scenario, derive_thresholds(eff, scenario.targets));
}

}  // namespace seqcrypt
