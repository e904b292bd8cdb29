#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qtomo/frame.hpp"
#include "qtomo/mle.hpp"
#include "qtomo/protocol.hpp"
#include "qtomo/simulate.hpp"
#include "qtomo/state.hpp"

namespace qtomo {

enum class StateMeasure { haar_pure, hilbert_schmidt };
enum class RunMode { theory, monte_carlo };

const char* to_string(StateMeasure m);
const char* to_string(RunMode m);
StateMeasure state_measure_from_string(const std::string& s);
RunMode run_mode_from_string(const std::string& s);

/// How to obtain the protocol: a builder kind ("mub", "two-level",
/// "symmetric") with its parameters, or a serialized protocol file.
struct ProtocolSpec {
  std::string kind = "mub";
  int s = 3;
  int m = 0;  // symmetric only
  std::string path;
  FrameOptions frame;
};

inline constexpr int kConfigSchemaVersion = 1;

struct ExperimentConfig {
  ProtocolSpec protocol;
  int rank = 1;
  std::size_t ensemble = 10000;
  StateMeasure measure = StateMeasure::haar_pure;
  RunMode mode = RunMode::theory;
  std::int64_t shots = 100000;
  std::uint64_t seed = 1;
  SamplingMode sampling = SamplingMode::single_multinomial;
  MleOptions mle;                          // rank is taken from `rank`
  double max_nonconverged_fraction = 1e-3;
  unsigned threads = 0;                    // 0 = hardware concurrency
  std::string out;
  std::string format = "csv";
};

/// Throws InvalidArgument on inconsistent settings (e.g. Haar states with
/// rank > 1, zero ensemble).
void validate(const ExperimentConfig& cfg);

/// Versioned JSON config.  Unknown keys are rejected.
std::string config_to_json(const ExperimentConfig& cfg);
ExperimentConfig config_from_json(const std::string& text);

Protocol make_protocol(const ProtocolSpec& spec);

/// Ensemble member `index`: a pure function of (seed, measure, s, rank,
/// index), so runs with different protocols share their states.
Purification ensemble_state(const ExperimentConfig& cfg, std::size_t index);

struct StateRecord {
  std::size_t index = 0;
  double loss = 0.0;                 // L for this state
  double efficiency = 0.0;
  std::optional<double> infidelity;  // 1 - F, Monte Carlo only
  bool converged = true;
};

struct ReportSummary {
  std::size_t count = 0;
  double mean_loss = 0.0;
  double se_loss = 0.0;
  double median_loss = 0.0;
  std::vector<double> percentiles;  // L at percentiles 1..99
  double mean_efficiency = 0.0;
  double se_efficiency = 0.0;
  std::size_t nonconverged = 0;
};

struct ExperimentReport {
  std::vector<StateRecord> records;
  ReportSummary summary;
  /// Compact JSON: software version, config echo, sampling convention.
  std::string provenance;
};

/// Theory mode: L = N sum_j d_j per state, eta from L.  A spectrum
/// classification failure aborts the run, naming the offending state.
ExperimentReport run_theory(const ExperimentConfig& cfg, const Protocol& p);
ExperimentReport run_theory(const ExperimentConfig& cfg);

/// Monte Carlo mode: simulate counts, reconstruct at rank r, L = N (1 - F).
/// Throws Error("mle_nonconvergence") when more than
/// max_nonconverged_fraction of the reconstructions fail to converge.
ExperimentReport run_monte_carlo(const ExperimentConfig& cfg, const Protocol& p);
ExperimentReport run_monte_carlo(const ExperimentConfig& cfg);

ExperimentReport run(const ExperimentConfig& cfg);

/// Summary statistics over records; `efficiency_of_mean` switches the
/// efficiency summary to eta(mean L) (used for Monte Carlo runs, where
/// single-experiment losses can be zero).
ReportSummary summarize(const std::vector<StateRecord>& records, int s, int r,
                        bool efficiency_of_mean);

enum class CrossingKind { crossing, identical, first_dominates, second_dominates };
const char* to_string(CrossingKind k);

struct Crossing {
  std::optional<double> percentile;
  CrossingKind kind = CrossingKind::identical;
};

/// First percentile in (1, 99) where the type-7 quantile curves of L cross,
/// linearly interpolated between integer percentiles.  `first_dominates`
/// means the first report's curve lies to the left (lower losses)
/// everywhere.  Throws InvalidArgument when the reports were not produced
/// on the same ensemble.
Crossing crossing_percentile(const ExperimentReport& a, const ExperimentReport& b);

}  // namespace qtomo
