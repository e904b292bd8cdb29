#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qtomo/protocol.hpp"
#include "qtomo/random.hpp"
#include "qtomo/state.hpp"

namespace qtomo {

enum class SamplingMode {
  /// One N-shot multinomial over the POVM {Lambda_j / a}.
  single_multinomial,
  /// N split evenly across blocks (remainder to the leading blocks), with a
  /// multinomial over the block-renormalized probabilities inside each.
  per_block,
};

const char* to_string(SamplingMode mode);
SamplingMode sampling_mode_from_string(const std::string& s);

/// Observed counts for one simulated experiment.
struct CountsRecord {
  std::string protocol;
  std::int64_t shots = 0;
  std::uint64_t seed = 0;
  SamplingMode mode = SamplingMode::single_multinomial;
  std::vector<std::int64_t> counts;
};

/// Multinomial(n, probs) by sequential conditional binomials.  Binomial
/// variates come from std::binomial_distribution, which is exact; its
/// sequence is tied to the standard library in use.
std::vector<std::int64_t> sample_multinomial(std::int64_t n, const RVector& probs, Rng& rng);

CountsRecord simulate_counts(const Protocol& p, const Purification& state, std::int64_t shots,
                             std::uint64_t seed,
                             SamplingMode mode = SamplingMode::single_multinomial);

std::vector<double> empirical_frequencies(const CountsRecord& record);

/// "protocol,N,seed,k_1,...,k_m"
std::string to_csv_line(const CountsRecord& record);
CountsRecord counts_from_csv_line(const std::string& line);

std::string to_json(const CountsRecord& record);
CountsRecord counts_from_json(const std::string& text);

}  // namespace qtomo
