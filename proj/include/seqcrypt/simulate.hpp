#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include "seqcrypt/analytic.hpp"
#include "seqcrypt/model.hpp"

namespace seqcrypt {

enum class Hypothesis { h0, h1, prior_mixed };

/// One Monte Carlo configuration. Fully determines the outputs together
/// with the engine's substream rule (see make_substream).
struct Scenario {
  BitChannelModel model;
  EncryptionParams enc;
  ErrorTargets targets;
  Priors priors;
  Hypothesis hypothesis = Hypothesis::prior_mixed;
  std::uint64_t replications = 10000;
  std::uint64_t seed = 0;
  std::uint64_t max_steps = 10000000;  // truncation guard; stopping is a.s. finite

  Scenario(BitChannelModel model_value, EncryptionParams enc_value, ErrorTargets targets_value,
           Priors priors_value);
};

enum class PathOutcome { accept_h1, accept_h0, truncated };

struct PathResult {
  PathOutcome outcome;
  std::uint64_t steps;
};

/// Two-valued log-likelihood increment: the statistic gains value_if_one
/// with probability prob_one, else value_if_zero.
struct TwoValuedLlr {
  double value_if_one;
  double value_if_zero;
  double prob_one;
};

/// Open continuation interval (lower, upper) with lower < 0 < upper.
struct SprtBand {
  double lower;
  double upper;
};

struct PairedPathResult {
  PathResult lfc;
  PathResult efc;
};

struct MeanEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo estimates for one fusion center. Fields with no supporting
/// replications (e.g. miss_rate when every path ran under H0) are NaN.
struct PerfEstimate {
  MeanEstimate ess_h0;
  MeanEstimate ess_h1;
  MeanEstimate fa_rate;
  MeanEstimate miss_rate;
  std::uint64_t truncated_count = 0;
};

struct PairedPerfEstimate {
  PerfEstimate lfc;
  PerfEstimate efc;
  std::uint64_t replications = 0;
};

struct EstimationFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using PathRng = std::mt19937_64;

/// Engine for replication `replication`: an mt19937_64 seeded with
/// seed_seq(seed, replication). Replications are therefore independent of
/// execution order.
PathRng make_substream(std::uint64_t seed, std::uint64_t replication);

/// Runs one sequential path: accumulates the two-valued increment until the
/// statistic leaves (lower, upper); exits at the upper side decide for H1.
/// Threshold comparison uses a 1e-12 relative slack so lattice statistics
/// that land exactly on a threshold are detected despite rounding.
PathResult run_sprt_path(const TwoValuedLlr& llr, const SprtBand& band, PathRng& rng,
                         std::uint64_t max_steps);

/// Runs both detectors on one shared encrypted bit stream: the legitimate
/// test on the log-likelihood of the encrypted model against thresholds
/// (-a_l, b_l), the eavesdropper's walk on the +-1 lattice against
/// (-m_a, m_b). under_h1 selects the generating hypothesis.
PairedPathResult run_paired_trial(const BitChannelModel& model, const EncryptionParams& enc,
                                  const DetectorThresholds& thresholds, bool under_h1,
                                  PathRng& rng, std::uint64_t max_steps);

/// Runs the scenario with thresholds derived from its targets (Wald
/// thresholds for the legitimate center, exact integer search for the
/// eavesdropper). Deterministic given (scenario, seed). Truncated paths are
/// excluded from the means and counted in truncated_count; throws
/// EstimationFailureError if a detector has no usable replication at all.
PairedPerfEstimate monte_carlo(const Scenario& scenario);

/// Same engine with caller-supplied thresholds.
PairedPerfEstimate monte_carlo_with_thresholds(const Scenario& scenario,
                                               const DetectorThresholds& thresholds);

}  // namespace seqcrypt
